//! Error type shared across the simulation modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not unitary (max deviation {max_dev:.3e})")]
    NotUnitary { max_dev: f64 },

    #[error("emission order {order} outside supported range 1..=3")]
    OrderOutOfRange { order: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterSizeMismatch { left: usize, right: usize },

    #[error("axis string has {axes} entries but register has {qubits} qubits")]
    AxisLengthMismatch { axes: usize, qubits: usize },

    #[error("analyzer settings do not match register: {0}")]
    SettingsMismatch(String),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("fit requires at least {required} points, got {got}")]
    FitInsufficientData { required: usize, got: usize },

    #[error("fit requires sample angles spanning more than pi, got span {span:.3e}")]
    FitInsufficientSpan { span: f64 },

    #[error("fit design matrix is singular")]
    FitSingular,
}
