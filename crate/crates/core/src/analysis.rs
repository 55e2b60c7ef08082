//! Correlation formulas, correlation-tensor components, entanglement and
//! Bell indicators, sinusoidal least-squares fitting, and Poissonian error
//! propagation.
//!
//! The closed-form correlation functions below are for measurements of
//! cos(theta)·sigma_z + sin(theta)·sigma_x on every photon of the filtered
//! two-, four-, and six-photon states. For four photons the product-cosine
//! term takes the angle differences within each source side (the two a-side
//! modes and the two b-side modes); for six photons the residual sum runs
//! over the nine balanced sign sequences with exactly two plus signs among
//! the five trailing angles, the leading term's own sequence excluded. Both
//! choices are pinned by the Born-rule oracle tests at the bottom of this
//! file.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Error;
use crate::measurement::QubitRegisterState;

/// One measured correlation value with its analyzer settings.
#[derive(Debug, Clone)]
pub struct CorrelationRecord {
    /// Analyzer angles in mode order, radians.
    pub settings: Vec<f64>,
    pub value: f64,
    pub sigma: f64,
}

/// Result of fitting amplitude·cos(theta - phase) + offset.
#[derive(Debug, Clone, Copy)]
pub struct SineFit {
    /// Fringe amplitude (the visibility); always non-negative.
    pub amplitude: f64,
    /// Phase in radians, in (-pi, pi].
    pub phase: f64,
    pub offset: f64,
    /// Standard error of the amplitude (zero for an exact fit).
    pub amplitude_sigma: f64,
}

/// One correlation-tensor component with its statistical uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct TensorComponent {
    pub value: f64,
    pub sigma: f64,
}

/// Correlation-tensor witness summary: same-axis diagonal components, the
/// entanglement indicator (sum of three squares, entangled above 1), and the
/// Bell indicator (sum of the x and y squares, no local realistic model
/// above 1). Violation significances are absent when the inputs are exact.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub components: BTreeMap<String, TensorComponent>,
    pub indicator: f64,
    pub indicator_sigma: f64,
    pub bell_value: f64,
    pub bell_sigma: f64,
    pub sigmas_violated: Option<f64>,
    pub bell_sigmas_violated: Option<f64>,
}

/// Two-photon correlation of the filtered singlet: -cos(theta_b - theta_d).
pub fn e2_theory(theta_b: f64, theta_d: f64) -> f64 {
    -(theta_b - theta_d).cos()
}

/// Four-photon correlation of the filtered invariant state. The first two
/// angles belong to the modes fed by source mode a0, the last two to the
/// modes fed by b0.
pub fn e4_theory(theta_a: f64, theta_b: f64, theta_d: f64, theta_e: f64) -> f64 {
    (2.0 / 3.0) * (theta_a + theta_b - theta_d - theta_e).cos()
        + (1.0 / 3.0) * (theta_a - theta_b).cos() * (theta_d - theta_e).cos()
}

/// Six-photon correlation of the filtered invariant state, angles in mode
/// order a..f.
pub fn e6_theory(angles: &[f64; 6]) -> f64 {
    let leading = angles[0] + angles[1] + angles[2] - angles[3] - angles[4] - angles[5];
    let mut residual = 0.0;
    for i in 1..6 {
        for j in (i + 1)..6 {
            if (i, j) == (1, 2) {
                continue; // the leading term's own sign sequence
            }
            let mut arg = angles[0];
            for (m, theta) in angles.iter().enumerate().skip(1) {
                arg += if m == i || m == j { *theta } else { -theta };
            }
            residual += arg.cos();
        }
    }
    -0.5 * leading.cos() - residual / 18.0
}

/// Expectation of the Pauli product along the given axes ('x', 'y' or 'z'
/// per qubit).
pub fn tensor_component(state: &QubitRegisterState, axes: &str) -> Result<f64, Error> {
    let k = state.num_qubits();
    let chars: Vec<char> = axes.chars().collect();
    if chars.len() != k {
        return Err(Error::AxisLengthMismatch {
            axes: chars.len(),
            qubits: k,
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut transformed = state.clone();
    for (qubit, axis) in chars.iter().enumerate() {
        let pauli = match axis {
            'x' => [[zero, one], [one, zero]],
            'y' => [
                [zero, Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, 1.0), zero],
            ],
            'z' => [[one, zero], [zero, -one]],
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown Pauli axis '{other}'"
                )))
            }
        };
        transformed.apply_single_qubit(qubit, &pauli);
    }
    Ok(state.inner_product(&transformed)?.re)
}

/// Sum of three squared same-axis tensor components; values above 1 certify
/// entanglement.
pub fn entanglement_indicator(components: [f64; 3]) -> f64 {
    components.iter().map(|t| t * t).sum()
}

/// Sum of two squared tensor components; values above 1 exclude local
/// realistic models.
pub fn bell_indicator(components: [f64; 2]) -> f64 {
    components.iter().map(|t| t * t).sum()
}

/// How many standard deviations `value` lies above `threshold`.
pub fn violation_sigmas(value: f64, sigma: f64, threshold: f64) -> f64 {
    (value - threshold) / sigma
}

/// Correlation value and its standard error from per-outcome counts, each
/// count treated as an independent Poisson variable with variance equal to
/// its mean. Entries pair the product of outcome signs with the count.
/// Degenerate inputs (all counts on one sign) give sigma zero; empty inputs
/// give (0, infinity).
pub fn propagate_poisson(outcomes: &[(f64, u64)]) -> (f64, f64) {
    let total: u64 = outcomes.iter().map(|(_, n)| n).sum();
    if total == 0 {
        return (0.0, f64::INFINITY);
    }
    let n = total as f64;
    let value: f64 = outcomes.iter().map(|(s, c)| s * *c as f64).sum::<f64>() / n;
    let variance: f64 = outcomes
        .iter()
        .map(|(s, c)| *c as f64 * (s - value) * (s - value))
        .sum::<f64>()
        / (n * n);
    (value, variance.sqrt())
}

const FIT_MIN_POINTS: usize = 4;

/// Weighted least-squares fit of amplitude·cos(theta - phase) + offset via
/// the linear parameters (amplitude·cos(phase), amplitude·sin(phase),
/// offset). Points are (theta, value, sigma); sigmas are used as inverse-
/// variance weights when all are positive, otherwise the fit is unweighted.
pub fn sine_fit(points: &[(f64, f64, f64)]) -> Result<SineFit, Error> {
    if points.len() < FIT_MIN_POINTS {
        return Err(Error::FitInsufficientData {
            required: FIT_MIN_POINTS,
            got: points.len(),
        });
    }
    let span = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if span <= std::f64::consts::PI {
        return Err(Error::FitInsufficientSpan { span });
    }

    let weighted = points.iter().all(|p| p.2 > 0.0);
    let mut normal = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(theta, value, sigma) in points {
        let w = if weighted { 1.0 / (sigma * sigma) } else { 1.0 };
        let x = [theta.cos(), theta.sin(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                normal[i][j] += w * x[i] * x[j];
            }
            rhs[i] += w * x[i] * value;
        }
    }

    let inverse = invert3(&normal).ok_or(Error::FitSingular)?;
    let beta = [
        inverse[0][0] * rhs[0] + inverse[0][1] * rhs[1] + inverse[0][2] * rhs[2],
        inverse[1][0] * rhs[0] + inverse[1][1] * rhs[1] + inverse[1][2] * rhs[2],
        inverse[2][0] * rhs[0] + inverse[2][1] * rhs[1] + inverse[2][2] * rhs[2],
    ];
    let (p, q, offset) = (beta[0], beta[1], beta[2]);
    let amplitude = p.hypot(q);
    let phase = q.atan2(p);

    // Parameter covariance: the normal-equation inverse, rescaled by the
    // residual variance when the points carry no stated uncertainties.
    let covariance_scale = if weighted {
        1.0
    } else {
        let residual_sqr: f64 = points
            .iter()
            .map(|&(theta, value, _)| {
                let r = value - (p * theta.cos() + q * theta.sin() + offset);
                r * r
            })
            .sum();
        residual_sqr / (points.len() - 3) as f64
    };
    let var_p = covariance_scale * inverse[0][0];
    let var_q = covariance_scale * inverse[1][1];
    let cov_pq = covariance_scale * inverse[0][1];
    let amplitude_sigma = if amplitude > 1e-12 {
        ((p * p * var_p + 2.0 * p * q * cov_pq + q * q * var_q).max(0.0)).sqrt() / amplitude
    } else {
        (var_p + var_q).max(0.0).sqrt()
    };

    Ok(SineFit {
        amplitude,
        phase,
        offset,
        amplitude_sigma,
    })
}

/// Inverse of a 3x3 matrix by cofactors; None when numerically singular.
fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let cof =
        |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    let det = m[0][0] * cof(1, 1, 2, 2) - m[0][1] * cof(1, 0, 2, 2) + m[0][2] * cof(1, 0, 2, 1);
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if det.abs() <= 1e-12 * scale.powi(3).max(1e-300) {
        return None;
    }
    let adj = [
        [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
        [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
        [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
    ];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = adj[i][j] / det;
        }
    }
    Some(out)
}
