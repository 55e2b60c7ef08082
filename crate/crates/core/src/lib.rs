//! Simulation of multiphoton polarization-singlet filtering from a single
//! pulsed type-II parametric down-conversion source.
//!
//! The library models the full chain of such an experiment: per-order pair
//! emission into two source modes, a passive 1-to-3 beamsplitter fan-out with
//! per-mode polarization analyzers, coincidence post-selection onto
//! one-photon-per-mode events, and the statistical analysis layer
//! (correlation functions, sinusoidal visibility fits, correlation-tensor
//! entanglement and Bell indicators, Poissonian error propagation).
//!
//! Modules:
//! - [`fock`]: sparse bosonic Fock states and linear-optical mode unitaries
//! - [`pdc`]: per-order down-conversion terms and emission weights
//! - [`network`]: the splitter/analyzer network as one composite unitary
//! - [`measurement`]: post-selection, Born probabilities, Monte-Carlo counts
//! - [`states`]: closed-form reference states and collective invariance
//! - [`analysis`]: correlation formulas, fits, witnesses, error propagation
//! - [`spectral`]: filter/pump bandwidth visibility bounds

pub mod analysis;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod network;
pub mod pdc;
pub mod spectral;
pub mod states;

pub use analysis::{CorrelationRecord, SineFit, TensorComponent, WitnessReport};
pub use error::Error;
pub use fock::{FockState, ModeId, ModeUnitary, OccupationVector, Polarization, SpatialMode};
pub use measurement::{CoincidencePattern, CountRecord, Postselection, QubitRegisterState, Sign};
pub use network::{AnalyzerSetting, NetworkConfig, SplitSpec};
pub use pdc::{EmissionModel, PdcConfig};
pub use spectral::SpectralConfig;
pub use states::{ReferenceState, StateLabel};
