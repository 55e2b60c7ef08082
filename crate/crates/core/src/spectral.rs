//! Closed-form maximal-visibility bounds from the filter/pump bandwidth
//! ratio, and the uniform-contrast bridge between ideal and degraded
//! correlation curves.
//!
//! Photon pairs born in separate emissions of one pulse are spectrally
//! correlated through the pump; with Gaussian filter and pump profiles the
//! achievable fringe visibility depends only on the bandwidth ratio
//! r = sigma_f / sigma_p. Pairs from a single emission interfere perfectly,
//! so the two-photon visibility carries no r dependence.

use crate::error::Error;

/// Gaussian filter and pump bandwidths (FWHM, shared angular-frequency
/// units); only their ratio matters downstream.
#[derive(Debug, Clone, Copy)]
pub struct SpectralConfig {
    pub sigma_f: f64,
    pub sigma_p: f64,
}

impl SpectralConfig {
    pub fn new(sigma_f: f64, sigma_p: f64) -> Result<Self, Error> {
        if sigma_f <= 0.0 || sigma_p <= 0.0 {
            return Err(Error::InvalidConfig("bandwidths must be positive".into()));
        }
        Ok(SpectralConfig { sigma_f, sigma_p })
    }

    /// The bandwidth ratio r = sigma_f / sigma_p.
    pub fn ratio(&self) -> f64 {
        self.sigma_f / self.sigma_p
    }
}

/// Maximal four-photon visibility sqrt(1 + 2r^2) / (1 + r^2).
pub fn v4_temp(r: f64) -> f64 {
    let r2 = r * r;
    (1.0 + 2.0 * r2).sqrt() / (1.0 + r2)
}

/// Maximal six-photon visibility (1 + 2r^2) / [(1 + r^2/2)(1 + 3r^2/2)].
pub fn v6_temp(r: f64) -> f64 {
    let r2 = r * r;
    (1.0 + 2.0 * r2) / ((1.0 + 0.5 * r2) * (1.0 + 1.5 * r2))
}

/// Maximal visibility for a coincidence order: two-photon curves are
/// insensitive to the bandwidth ratio, higher orders follow the closed
/// forms above.
pub fn v_temp_for_order(order: u32, r: f64) -> f64 {
    match order {
        1 => 1.0,
        2 => v4_temp(r),
        _ => v6_temp(r),
    }
}

/// Bandwidth ratio from wavelength bandwidths: delta_lambda_f /
/// (4 delta_lambda_p). The factor 4 converts between the pump and the
/// frequency-halved down-conversion wavelength scales.
pub fn r_from_wavelength_bandwidths(delta_lambda_f: f64, delta_lambda_p: f64) -> f64 {
    delta_lambda_f / (4.0 * delta_lambda_p)
}

/// Uniform-contrast noise model: the measured correlation is the ideal one
/// scaled by the visibility.
pub fn degrade_correlation(e_ideal: f64, visibility: f64) -> f64 {
    visibility * e_ideal
}
