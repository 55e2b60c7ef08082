//! Shared fixtures for the benchmark targets.

use singlet_filter::fock::{FockState, ModeUnitary};
use singlet_filter::network::{build_network_unitary, NetworkConfig};
use singlet_filter::pdc::pdc_term;

/// The default cascade network with all analyzers at zero.
pub fn default_network() -> ModeUnitary {
    build_network_unitary(&NetworkConfig::cascade_with_angles([0.0; 6]))
        .expect("default network is valid")
}

/// The six-photon emission term.
pub fn order3_emission() -> FockState {
    pdc_term(3).expect("order 3 is supported")
}
