//! The four simulator commands, built on the library pipeline.

use std::collections::BTreeMap;

use singlet_filter::analysis::{
    bell_indicator, e2_theory, e4_theory, e6_theory, entanglement_indicator, propagate_poisson,
    sine_fit, tensor_component, violation_sigmas, SineFit, TensorComponent, WitnessReport,
};
use singlet_filter::fock::apply_mode_unitary;
use singlet_filter::measurement::{
    ket_string, outcome_probabilities, pauli_outcome_probabilities, postselect, sample_counts,
    QubitRegisterState,
};
use singlet_filter::network::{build_network_unitary, AnalyzerSetting, NetworkConfig};
use singlet_filter::pdc::pdc_term;
use singlet_filter::spectral::{v4_temp, v6_temp};
use singlet_filter::states::{fidelity, make_reference, StateLabel};
use singlet_filter::SpatialMode;

use crate::config::ExperimentConfig;

/// Failures split by exit code: configuration problems exit with 2,
/// numerical ones with 3.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Numerical(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => 2,
            CmdError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Numerical(m) => m,
        }
    }
}

fn config_err<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Config(e.to_string())
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta: f64,
    pub e_theory: f64,
    pub e_degraded: f64,
    /// Monte-Carlo estimate and its standard error; absent in exact mode.
    pub mc: Option<(f64, f64)>,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub visibility_factor: f64,
    pub probability: f64,
    pub rows: Vec<SweepRow>,
    pub fit: SineFit,
}

#[derive(Debug)]
pub struct StateDumpOutput {
    pub probability: f64,
    pub reference: StateLabel,
    pub fidelity: f64,
    /// Nonzero register amplitudes as (H/V pattern, re, im).
    pub amplitudes: Vec<(String, f64, f64)>,
}

/// Runs the emission through the analyzer-free network and post-selects the
/// configured coincidence pattern.
fn filtered_register(cfg: &ExperimentConfig) -> Result<(f64, QubitRegisterState), CmdError> {
    let network_cfg = NetworkConfig::with_splits(cfg.split_a0, cfg.split_b0, [0.0; 6]);
    let network = build_network_unitary(&network_cfg).map_err(config_err)?;
    let emission = pdc_term(cfg.order).map_err(config_err)?;
    let output = apply_mode_unitary(&emission, &network);
    let selection = postselect(&output, &cfg.modes).map_err(config_err)?;
    match selection.register {
        Some(register) => Ok((selection.probability, register)),
        None => Err(CmdError::Numerical(format!(
            "zero-probability post-selection: order {} never fills modes {}",
            cfg.order,
            cfg.modes
                .iter()
                .map(|m| m.label())
                .collect::<Vec<_>>()
                .join(",")
        ))),
    }
}

/// Closed-form correlation for the given order; angles are keyed by mode.
/// Only reachable after a successful post-selection, so each source side
/// holds exactly `order` of the selected modes.
fn theory_correlation(
    order: u32,
    modes: &[SpatialMode],
    thetas: &BTreeMap<SpatialMode, f64>,
) -> f64 {
    let angle = |m: &SpatialMode| thetas[m];
    match order {
        1 => e2_theory(angle(&modes[0]), angle(&modes[1])),
        2 => {
            let a_side: Vec<f64> = modes
                .iter()
                .filter(|m| matches!(m, SpatialMode::A | SpatialMode::B | SpatialMode::C))
                .map(angle)
                .collect();
            let b_side: Vec<f64> = modes
                .iter()
                .filter(|m| matches!(m, SpatialMode::D | SpatialMode::E | SpatialMode::F))
                .map(angle)
                .collect();
            debug_assert_eq!(a_side.len(), 2);
            e4_theory(a_side[0], a_side[1], b_side[0], b_side[1])
        }
        _ => {
            let t: Vec<f64> = modes.iter().map(angle).collect();
            e6_theory(&[t[0], t[1], t[2], t[3], t[4], t[5]])
        }
    }
}

/// Contrast reduction as white noise: mixes the outcome distribution toward
/// uniform so every correlation scales by the visibility factor.
fn mix_with_white_noise(probs: &[f64], visibility: f64) -> Vec<f64> {
    let uniform = (1.0 - visibility) / probs.len() as f64;
    probs.iter().map(|p| visibility * p + uniform).collect()
}

fn parity_sign(index: usize) -> f64 {
    if (index as u32).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn counts_to_correlation(counts: &[u64]) -> (f64, f64) {
    let outcomes: Vec<(f64, u64)> = counts
        .iter()
        .enumerate()
        .map(|(index, c)| (parity_sign(index), *c))
        .collect();
    propagate_poisson(&outcomes)
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput, CmdError> {
    let (probability, register) = filtered_register(cfg)?;
    let visibility_factor = cfg.visibility.factor(cfg.order);

    let mut rows = Vec::with_capacity(cfg.sweep.steps);
    for (step, theta) in cfg.sweep.angles().into_iter().enumerate() {
        let mut thetas = cfg.fixed_thetas.clone();
        thetas.insert(cfg.sweep.mode, theta);

        let e_theory = theory_correlation(cfg.order, &cfg.modes, &thetas);
        let e_degraded = visibility_factor * e_theory;

        let mc = if cfg.shots > 0 {
            let settings: Vec<AnalyzerSetting> = cfg
                .modes
                .iter()
                .map(|m| AnalyzerSetting::new(*m, thetas[m]))
                .collect();
            let probs = outcome_probabilities(&register, &settings).map_err(config_err)?;
            let mixed = mix_with_white_noise(&probs, visibility_factor);
            let counts = sample_counts(&mixed, cfg.shots, cfg.seed.wrapping_add(step as u64));
            Some(counts_to_correlation(&counts))
        } else {
            None
        };

        rows.push(SweepRow {
            theta,
            e_theory,
            e_degraded,
            mc,
        });
    }

    let points: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|row| match row.mc {
            Some((e, sigma)) => (row.theta, e, sigma),
            None => (row.theta, row.e_degraded, 0.0),
        })
        .collect();
    let fit = sine_fit(&points).map_err(|e| CmdError::Numerical(e.to_string()))?;

    Ok(SweepOutput {
        visibility_factor,
        probability,
        rows,
        fit,
    })
}

pub fn run_witness(cfg: &ExperimentConfig) -> Result<WitnessReport, CmdError> {
    let (_, register) = filtered_register(cfg)?;
    let visibility_factor = cfg.visibility.factor(cfg.order);
    let qubits = register.num_qubits();

    let mut components = BTreeMap::new();
    let mut values = Vec::new();
    let mut sigmas = Vec::new();
    for (index, axis) in ['x', 'y', 'z'].into_iter().enumerate() {
        let axes: String = std::iter::repeat_n(axis, qubits).collect();
        let (value, sigma) = if cfg.shots == 0 {
            let ideal = tensor_component(&register, &axes).map_err(config_err)?;
            (visibility_factor * ideal, 0.0)
        } else {
            let probs = pauli_outcome_probabilities(&register, &axes).map_err(config_err)?;
            let mixed = mix_with_white_noise(&probs, visibility_factor);
            let counts = sample_counts(&mixed, cfg.shots, cfg.seed.wrapping_add(index as u64));
            counts_to_correlation(&counts)
        };
        components.insert(axes, TensorComponent { value, sigma });
        values.push(value);
        sigmas.push(sigma);
    }

    let indicator = entanglement_indicator([values[0], values[1], values[2]]);
    let indicator_sigma = sigmas
        .iter()
        .zip(&values)
        .map(|(s, t)| (2.0 * t * s) * (2.0 * t * s))
        .sum::<f64>()
        .sqrt();
    let bell_value = bell_indicator([values[0], values[1]]);
    let bell_sigma = sigmas
        .iter()
        .zip(&values)
        .take(2)
        .map(|(s, t)| (2.0 * t * s) * (2.0 * t * s))
        .sum::<f64>()
        .sqrt();

    let significance = |value: f64, sigma: f64| -> Option<f64> {
        (sigma > 0.0).then(|| violation_sigmas(value, sigma, 1.0))
    };

    Ok(WitnessReport {
        sigmas_violated: significance(indicator, indicator_sigma),
        bell_sigmas_violated: significance(bell_value, bell_sigma),
        components,
        indicator,
        indicator_sigma,
        bell_value,
        bell_sigma,
    })
}

pub fn run_state_dump(cfg: &ExperimentConfig) -> Result<StateDumpOutput, CmdError> {
    let (probability, register) = filtered_register(cfg)?;
    let reference = match cfg.order {
        1 => StateLabel::Psi2,
        2 => StateLabel::Psi4,
        _ => StateLabel::Psi6,
    };
    let fid = fidelity(&register, &make_reference(reference).register)
        .map_err(|e| CmdError::Numerical(e.to_string()))?;
    let qubits = register.num_qubits();
    let amplitudes = register
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, amp)| amp.norm() > 1e-12)
        .map(|(index, amp)| (ket_string(index, qubits), amp.re, amp.im))
        .collect();
    Ok(StateDumpOutput {
        probability,
        reference,
        fidelity: fid,
        amplitudes,
    })
}

/// Rows of (r, four-photon bound, six-photon bound).
pub fn run_vis_table(r_values: &[f64]) -> Result<Vec<(f64, f64, f64)>, CmdError> {
    if r_values.is_empty() {
        return Err(CmdError::Config("no bandwidth ratios given".into()));
    }
    if r_values.iter().any(|r| *r < 0.0 || !r.is_finite()) {
        return Err(CmdError::Config(
            "bandwidth ratios must be finite and non-negative".into(),
        ));
    }
    Ok(r_values
        .iter()
        .map(|&r| (r, v4_temp(r), v6_temp(r)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, Overrides, Visibility};

    fn base_config(order: u32) -> ExperimentConfig {
        let over = Overrides {
            order: Some(order),
            ..Default::default()
        };
        resolve(&over, true).unwrap().0
    }

    #[test]
    fn exact_sweep_fits_unit_visibility() {
        for order in 1..=3 {
            let out = run_sweep(&base_config(order)).unwrap();
            assert_eq!(out.rows.len(), 25);
            assert!((out.fit.amplitude - 1.0).abs() < 1e-9, "order {order}");
            assert!(out.rows.iter().all(|r| r.mc.is_none()));
        }
    }

    #[test]
    fn explicit_visibility_scales_fit_amplitude() {
        let mut cfg = base_config(3);
        cfg.visibility = Visibility::Explicit(0.838);
        let out = run_sweep(&cfg).unwrap();
        assert!((out.fit.amplitude - 0.838).abs() < 1e-9);
    }

    #[test]
    fn spectral_visibility_matches_bound() {
        let mut cfg = base_config(2);
        cfg.visibility = Visibility::Spectral(0.76);
        let out = run_sweep(&cfg).unwrap();
        assert!((out.fit.amplitude - 0.93).abs() < 0.005);
    }

    #[test]
    fn monte_carlo_sweep_tracks_degraded_curve() {
        let mut cfg = base_config(1);
        cfg.shots = 20_000;
        cfg.visibility = Visibility::Explicit(0.9);
        let out = run_sweep(&cfg).unwrap();
        for row in &out.rows {
            let (e, _) = row.mc.unwrap();
            assert!((e - row.e_degraded).abs() < 0.05);
        }
        assert!((out.fit.amplitude - 0.9).abs() < 0.02);
    }

    #[test]
    fn witness_ideal_values() {
        for order in 1..=3 {
            let report = run_witness(&base_config(order)).unwrap();
            assert!((report.indicator - 3.0).abs() < 1e-10, "order {order}");
            assert!((report.bell_value - 2.0).abs() < 1e-10);
            assert!(report.sigmas_violated.is_none());
        }
    }

    #[test]
    fn witness_degraded_values() {
        let mut cfg = base_config(2);
        cfg.visibility = Visibility::Explicit(0.919);
        let report = run_witness(&cfg).unwrap();
        assert!((report.bell_value - 2.0 * 0.919 * 0.919).abs() < 1e-9);
    }

    #[test]
    fn state_dump_matches_reference() {
        for order in 1..=3 {
            let dump = run_state_dump(&base_config(order)).unwrap();
            assert!(dump.fidelity >= 1.0 - 1e-10);
            assert!(dump.probability > 0.0);
        }
        let dump = run_state_dump(&base_config(1)).unwrap();
        assert_eq!(dump.amplitudes.len(), 2);
        assert_eq!(dump.amplitudes[0].0, "HV");
    }

    #[test]
    fn unbalanced_selection_is_a_numerical_failure() {
        let over = Overrides {
            order: Some(2),
            modes: Some(vec![
                SpatialMode::A,
                SpatialMode::B,
                SpatialMode::C,
                SpatialMode::D,
            ]),
            ..Default::default()
        };
        let (mut cfg, _) = resolve(&over, true).unwrap();
        cfg.sweep.mode = SpatialMode::B;
        match run_sweep(&cfg) {
            Err(CmdError::Numerical(_)) => {}
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }

    #[test]
    fn vis_table_rows() {
        let rows = run_vis_table(&[0.0, 0.76]).unwrap();
        assert_eq!(rows[0], (0.0, 1.0, 1.0));
        assert!((rows[1].1 - 0.93).abs() < 0.005);
        assert!((rows[1].2 - 0.90).abs() < 0.005);
        assert!(run_vis_table(&[]).is_err());
        assert!(run_vis_table(&[-1.0]).is_err());
    }
}
