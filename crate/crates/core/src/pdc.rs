//! Per-order emission terms of the pulsed type-II down-conversion source.
//!
//! One pump pulse prepares, up to a cap of three pair emissions, the state
//! `C sum_n (-i·alpha)^n/n! (a0H† b0V† - a0V† b0H†)^n |0>`. The n-th order
//! term carries 2n photons split evenly between the two source modes; the
//! bosonic sqrt(n+1) factors make all polarization patterns of one order
//! come out with equal magnitude and alternating sign.

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{apply_creation, FockState, ModeId, OccupationVector, Polarization, SpatialMode};

/// Highest supported emission order (6 photons); the experiment this models
/// ends at third order, so larger requests are rejected rather than
/// truncated. This is also what keeps the photon number per run capped at 8.
pub const MAX_ORDER: u32 = 3;

/// Source configuration: coupling `alpha` (grows with pump power) and the
/// truncation order of the emission expansion.
#[derive(Debug, Clone, Copy)]
pub struct PdcConfig {
    pub alpha: Complex64,
    pub max_order: u32,
}

impl PdcConfig {
    pub fn new(alpha: Complex64, max_order: u32) -> Result<Self, Error> {
        if max_order == 0 || max_order > MAX_ORDER {
            return Err(Error::OrderOutOfRange { order: max_order });
        }
        if alpha.norm() <= 0.0 {
            return Err(Error::InvalidConfig(
                "coupling alpha must be nonzero".into(),
            ));
        }
        Ok(PdcConfig { alpha, max_order })
    }
}

/// Which emission statistics to use when weighting polarization patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmissionModel {
    /// Squared amplitudes of the bosonic emission term.
    Bosonic,
    /// Independent pair emissions with multinomial counting and no
    /// indistinguishability enhancement.
    Distinguishable,
}

fn a0h() -> ModeId {
    ModeId::new(SpatialMode::A0, Polarization::H)
}
fn a0v() -> ModeId {
    ModeId::new(SpatialMode::A0, Polarization::V)
}
fn b0h() -> ModeId {
    ModeId::new(SpatialMode::B0, Polarization::H)
}
fn b0v() -> ModeId {
    ModeId::new(SpatialMode::B0, Polarization::V)
}

/// One application of the pair-emission operator a0H† b0V† - a0V† b0H†.
fn pair_emission(state: &FockState) -> FockState {
    let mut result = apply_creation(&apply_creation(state, a0h()), b0v());
    let cross = apply_creation(&apply_creation(state, a0v()), b0h());
    result.add_scaled(&cross, Complex64::new(-1.0, 0.0));
    result
}

/// The normalized n-th order emission term
/// `(a0H† b0V† - a0V† b0H†)^n |0> / ||·||`.
pub fn pdc_term(order: u32) -> Result<FockState, Error> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::OrderOutOfRange { order });
    }
    let mut state = FockState::vacuum();
    for _ in 0..order {
        state = pair_emission(&state);
    }
    state.normalized()
}

/// The truncated multiphoton emission state
/// `sum_{n=0}^{max_order} (-i·alpha)^n/n! (a0H† b0V† - a0V† b0H†)^n |0>`,
/// normalized. The -i phase and 1/n! prefactors are retained here even
/// though every normalized per-order projection is insensitive to them.
pub fn full_pdc_state(cfg: &PdcConfig) -> FockState {
    let minus_i_alpha = Complex64::new(0.0, -1.0) * cfg.alpha;
    let mut sum = FockState::vacuum();
    let mut order_term = FockState::vacuum();
    let mut prefactor = Complex64::new(1.0, 0.0);
    for n in 1..=cfg.max_order {
        order_term = pair_emission(&order_term);
        prefactor *= minus_i_alpha / n as f64;
        sum.add_scaled(&order_term, prefactor);
    }
    sum.normalized()
        .expect("emission state contains the vacuum term")
}

/// Occupation vector with `order - k` H photons in a0 (and matching
/// V photons in b0) for pattern index `k`.
fn pattern_occupation(order: u32, k: u32) -> OccupationVector {
    let mut occ = OccupationVector::vacuum();
    occ.0[a0h().index()] = (order - k) as u8;
    occ.0[a0v().index()] = k as u8;
    occ.0[b0h().index()] = k as u8;
    occ.0[b0v().index()] = (order - k) as u8;
    occ
}

/// Probabilities of the polarization patterns of one emission order, indexed
/// by the number of V photons in mode a0 (0..=order). The bosonic model takes
/// squared amplitudes of [`pdc_term`]; the distinguishable baseline counts
/// independent pair emissions multinomially. Both sum to one.
pub fn emission_weights(order: u32, model: EmissionModel) -> Result<Vec<f64>, Error> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange { order });
    }
    let weights = match model {
        EmissionModel::Bosonic => {
            let term = pdc_term(order)?;
            (0..=order)
                .map(|k| term.amplitude(&pattern_occupation(order, k)).norm_sqr())
                .collect()
        }
        EmissionModel::Distinguishable => {
            let total = 2f64.powi(order as i32);
            (0..=order).map(|k| binomial(order, k) / total).collect()
        }
    };
    Ok(weights)
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
