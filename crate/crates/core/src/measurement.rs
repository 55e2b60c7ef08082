//! Coincidence post-selection and measurement statistics.
//!
//! Post-selection keeps the amplitude on events with exactly one photon in
//! each selected output mode and nothing anywhere else, turning the bosonic
//! network output into a register of polarization qubits. Outcome
//! probabilities, correlation values, and seeded Monte-Carlo counts are then
//! computed on that register.

use std::fmt;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::fock::{FockState, ModeId, Polarization, SpatialMode};
use crate::network::AnalyzerSetting;

/// Magnitude below which a register amplitude is treated as zero when fixing
/// the global phase.
const PHASE_FIX_TOL: f64 = 1e-9;

/// A detector outcome, +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn from_bit(bit: usize) -> Sign {
        if bit == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => f.write_str("+"),
            Sign::Minus => f.write_str("-"),
        }
    }
}

/// Which detectors fired, and with which outcome sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidencePattern {
    pub modes: Vec<SpatialMode>,
    pub outcomes: Vec<Sign>,
}

impl CoincidencePattern {
    pub fn new(modes: Vec<SpatialMode>, outcomes: Vec<Sign>) -> Result<Self, Error> {
        if !matches!(modes.len(), 2 | 4 | 6) {
            return Err(Error::InvalidConfig(format!(
                "coincidence patterns need 2, 4 or 6 modes, got {}",
                modes.len()
            )));
        }
        if outcomes.len() != modes.len() {
            return Err(Error::InvalidConfig(
                "one outcome sign per selected mode".into(),
            ));
        }
        Ok(CoincidencePattern { modes, outcomes })
    }

    /// Product of the outcome signs, the quantity entering correlation sums.
    pub fn sign_product(&self) -> f64 {
        self.outcomes.iter().map(|s| s.value()).product()
    }
}

/// Dense polarization-qubit state over the H/V basis of k selected modes,
/// in fixed mode order. The first qubit is the most significant bit of the
/// basis index, with H = 0 and V = 1.
#[derive(Debug, Clone)]
pub struct QubitRegisterState {
    amps: Vec<Complex64>,
}

impl QubitRegisterState {
    /// Wraps an already normalized amplitude vector (norm within 1e-12).
    pub fn new(amps: Vec<Complex64>) -> Result<Self, Error> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "register length must be a power of two >= 2, got {}",
                amps.len()
            )));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "register norm^2 is {norm_sqr}, expected 1"
            )));
        }
        Ok(QubitRegisterState { amps })
    }

    /// Normalizes and phase-fixes an arbitrary nonzero amplitude vector.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self, Error> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "register length must be a power of two >= 2, got {}",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(QubitRegisterState { amps }.phase_fixed())
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Rotates the global phase so the first nonzero amplitude is real and
    /// positive, making register equality directly testable.
    pub fn phase_fixed(mut self) -> Self {
        if let Some(first) = self.amps.iter().find(|a| a.norm() > PHASE_FIX_TOL) {
            let phase = first / first.norm();
            let correction = phase.conj();
            for a in &mut self.amps {
                *a *= correction;
            }
        }
        self
    }

    /// In-place action of a 2x2 matrix on one qubit (qubit 0 is the most
    /// significant bit).
    pub(crate) fn apply_single_qubit(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let k = self.num_qubits();
        assert!(qubit < k, "qubit index out of range");
        let stride = 1usize << (k - 1 - qubit);
        let dim = self.amps.len();
        let mut idx = 0;
        while idx < dim {
            if idx & stride == 0 {
                let low = self.amps[idx];
                let high = self.amps[idx | stride];
                self.amps[idx] = m[0][0] * low + m[0][1] * high;
                self.amps[idx | stride] = m[1][0] * low + m[1][1] * high;
            }
            idx += 1;
        }
    }

    pub fn inner_product(&self, other: &QubitRegisterState) -> Result<Complex64, Error> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::RegisterSizeMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// H/V pattern of a register basis index, e.g. "HVH" for three qubits.
pub fn ket_string(index: usize, qubits: usize) -> String {
    (0..qubits)
        .map(|q| {
            if index >> (qubits - 1 - q) & 1 == 0 {
                'H'
            } else {
                'V'
            }
        })
        .collect()
}

/// Result of projecting onto a coincidence pattern: the projection
/// probability, and the conditional register unless the probability is zero.
#[derive(Debug, Clone)]
pub struct Postselection {
    pub probability: f64,
    pub register: Option<QubitRegisterState>,
}

fn validated_selection(modes: &[SpatialMode]) -> Result<Vec<SpatialMode>, Error> {
    if modes.len() < 2 || !modes.len().is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "post-selection needs an even number (>= 2) of modes, got {}",
            modes.len()
        )));
    }
    let mut sorted: Vec<SpatialMode> = modes.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != modes.len() {
        return Err(Error::InvalidConfig("repeated mode in selection".into()));
    }
    if sorted.iter().any(|m| m.is_source()) {
        return Err(Error::InvalidConfig(
            "only output modes a..f can be post-selected".into(),
        ));
    }
    Ok(sorted)
}

/// Projects the network output onto events with exactly one photon in each
/// selected spatial mode (over its two polarization ports) and zero photons
/// everywhere else, returning the projection probability and the
/// renormalized, phase-fixed conditional qubit register.
pub fn postselect(state: &FockState, modes: &[SpatialMode]) -> Result<Postselection, Error> {
    let selected = validated_selection(modes)?;
    let k = selected.len();

    let port_pairs: Vec<(usize, usize)> = selected
        .iter()
        .map(|m| {
            (
                ModeId::new(*m, Polarization::H).index(),
                ModeId::new(*m, Polarization::V).index(),
            )
        })
        .collect();
    let mut selected_ports = [false; crate::fock::NUM_MODES];
    for &(h, v) in &port_pairs {
        selected_ports[h] = true;
        selected_ports[v] = true;
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
    'terms: for (occ, amp) in state.terms() {
        for (idx, &flag) in selected_ports.iter().enumerate() {
            if !flag && occ.0[idx] != 0 {
                continue 'terms;
            }
        }
        let mut index = 0usize;
        for (qubit, &(h, v)) in port_pairs.iter().enumerate() {
            match (occ.0[h], occ.0[v]) {
                (1, 0) => {}
                (0, 1) => index |= 1 << (k - 1 - qubit),
                _ => continue 'terms,
            }
        }
        amps[index] += amp;
    }

    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if probability <= 0.0 {
        return Ok(Postselection {
            probability: 0.0,
            register: None,
        });
    }
    let register = QubitRegisterState::from_unnormalized(amps)?;
    Ok(Postselection {
        probability,
        register: Some(register),
    })
}

/// Analyzer angles matched to register qubits: settings must name k distinct
/// modes; they are applied in mode order.
fn ordered_thetas(
    state: &QubitRegisterState,
    settings: &[AnalyzerSetting],
) -> Result<Vec<f64>, Error> {
    let k = state.num_qubits();
    if settings.len() != k {
        return Err(Error::SettingsMismatch(format!(
            "{} settings for {} qubits",
            settings.len(),
            k
        )));
    }
    let mut pairs: Vec<(SpatialMode, f64)> = settings.iter().map(|s| (s.mode, s.theta())).collect();
    pairs.sort_by_key(|(m, _)| *m);
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::SettingsMismatch("repeated analyzer mode".into()));
    }
    Ok(pairs.into_iter().map(|(_, t)| t).collect())
}

/// Born probabilities of all 2^k outcome strings for per-qubit observables
/// cos(theta)·sigma_z + sin(theta)·sigma_x. Index bit 0 means outcome +1;
/// the first qubit is the most significant bit.
pub fn outcome_probabilities(
    state: &QubitRegisterState,
    settings: &[AnalyzerSetting],
) -> Result<Vec<f64>, Error> {
    let thetas = ordered_thetas(state, settings)?;
    let mut rotated = state.clone();
    for (qubit, theta) in thetas.iter().enumerate() {
        let (s, c) = (theta / 2.0).sin_cos();
        // Rows are the +1/-1 eigen-bras of the analyzed observable.
        let basis_change = [
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
        ];
        rotated.apply_single_qubit(qubit, &basis_change);
    }
    Ok(rotated.amps.iter().map(|a| a.norm_sqr()).collect())
}

/// Born probability of one specific outcome string.
pub fn outcome_probability(
    state: &QubitRegisterState,
    settings: &[AnalyzerSetting],
    outcomes: &[Sign],
) -> Result<f64, Error> {
    let k = state.num_qubits();
    if outcomes.len() != k {
        return Err(Error::SettingsMismatch(format!(
            "{} outcomes for {} qubits",
            outcomes.len(),
            k
        )));
    }
    let probs = outcome_probabilities(state, settings)?;
    let mut index = 0usize;
    for (qubit, sign) in outcomes.iter().enumerate() {
        if *sign == Sign::Minus {
            index |= 1 << (k - 1 - qubit);
        }
    }
    Ok(probs[index])
}

/// Expectation value of the product of the per-mode observables: the sum of
/// (product of outcome signs) times the outcome probability, always in
/// [-1, 1] up to floating-point error.
pub fn correlation_from_state(
    state: &QubitRegisterState,
    settings: &[AnalyzerSetting],
) -> Result<f64, Error> {
    let thetas = ordered_thetas(state, settings)?;
    let mut transformed = state.clone();
    for (qubit, theta) in thetas.iter().enumerate() {
        let (s, c) = theta.sin_cos();
        let observable = [
            [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-c, 0.0)],
        ];
        transformed.apply_single_qubit(qubit, &observable);
    }
    Ok(state.inner_product(&transformed)?.re)
}

/// Born probabilities for per-qubit Pauli measurements along the given axes
/// (one of 'x', 'y', 'z' per qubit). Same index convention as
/// [`outcome_probabilities`].
pub fn pauli_outcome_probabilities(
    state: &QubitRegisterState,
    axes: &str,
) -> Result<Vec<f64>, Error> {
    let k = state.num_qubits();
    let chars: Vec<char> = axes.chars().collect();
    if chars.len() != k {
        return Err(Error::AxisLengthMismatch {
            axes: chars.len(),
            qubits: k,
        });
    }
    let s = 1.0 / 2f64.sqrt();
    let mut rotated = state.clone();
    for (qubit, axis) in chars.iter().enumerate() {
        let basis_change = match axis {
            'z' => continue,
            'x' => [
                [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
            ],
            'y' => [
                [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            ],
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown measurement axis '{other}'"
                )))
            }
        };
        rotated.apply_single_qubit(qubit, &basis_change);
    }
    Ok(rotated.amps.iter().map(|a| a.norm_sqr()).collect())
}

/// Simulated coincidence counts for one analyzer configuration.
#[derive(Debug, Clone)]
pub struct CountRecord {
    pub pattern: CoincidencePattern,
    /// Analyzer angles in mode order, radians.
    pub settings: Vec<f64>,
    pub counts: u64,
    /// Accumulation time in arbitrary units.
    pub duration: f64,
}

/// Draws `shots` samples from a probability vector, deterministically for a
/// given seed, and returns the per-outcome tallies.
pub fn sample_counts(probs: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
        .expect("probability vector has positive mass");
    let mut tallies = vec![0u64; probs.len()];
    for _ in 0..shots {
        tallies[dist.sample(&mut rng)] += 1;
    }
    tallies
}

/// Multinomial samples over the outcome strings of the given settings.
/// Outcomes that were never drawn produce no record; identical seeds
/// reproduce identical records.
pub fn monte_carlo_counts(
    state: &QubitRegisterState,
    settings: &[AnalyzerSetting],
    shots: u64,
    seed: u64,
) -> Result<Vec<CountRecord>, Error> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be positive".into()));
    }
    let probs = outcome_probabilities(state, settings)?;
    let k = state.num_qubits();

    let mut pairs: Vec<(SpatialMode, f64)> = settings.iter().map(|s| (s.mode, s.theta())).collect();
    pairs.sort_by_key(|(m, _)| *m);
    let modes: Vec<SpatialMode> = pairs.iter().map(|(m, _)| *m).collect();
    let thetas: Vec<f64> = pairs.iter().map(|(_, t)| *t).collect();

    let tallies = sample_counts(&probs, shots, seed);
    let mut records = Vec::new();
    for (index, &count) in tallies.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let outcomes: Vec<Sign> = (0..k)
            .map(|q| Sign::from_bit(index >> (k - 1 - q) & 1))
            .collect();
        records.push(CountRecord {
            pattern: CoincidencePattern::new(modes.clone(), outcomes)?,
            settings: thetas.clone(),
            counts: count,
            duration: 1.0,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_network_unitary, NetworkConfig};
    use crate::pdc::pdc_term;
    use crate::states::{make_reference, StateLabel};
    use std::f64::consts::FRAC_PI_2;

    fn settings_for(modes: &[SpatialMode], thetas: &[f64]) -> Vec<AnalyzerSetting> {
        modes
            .iter()
            .zip(thetas)
            .map(|(m, t)| AnalyzerSetting::new(*m, *t))
            .collect()
    }

    fn singlet() -> QubitRegisterState {
        make_reference(StateLabel::Psi2).register
    }

    const BD: [SpatialMode; 2] = [SpatialMode::B, SpatialMode::D];

    #[test]
    fn register_constructor_validates_shape_and_norm() {
        let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(QubitRegisterState::new(vec![zero, s, -s, zero]).is_ok());
        assert!(QubitRegisterState::new(vec![s, s, s]).is_err());
        assert!(QubitRegisterState::new(vec![s, s, s, s]).is_err());
        assert!(QubitRegisterState::from_unnormalized(vec![zero, zero]).is_err());
    }

    #[test]
    fn postselect_first_order_gives_two_photon_singlet() {
        let network = build_network_unitary(&NetworkConfig::cascade_with_angles([0.0; 6])).unwrap();
        let out = crate::fock::apply_mode_unitary(&pdc_term(1).unwrap(), &network);
        let result = postselect(&out, &BD).unwrap();
        // p_b * p_d for the cascade split: (1/4)(1/2)
        assert!((result.probability - 1.0 / 8.0).abs() < 1e-12);
        let register = result.register.unwrap();
        let s = 1.0 / 2f64.sqrt();
        let amps = register.amplitudes();
        assert!(amps[0].norm() < 1e-12);
        assert!((amps[1].re - s).abs() < 1e-12);
        assert!((amps[2].re + s).abs() < 1e-12);
        assert!(amps[3].norm() < 1e-12);
    }

    #[test]
    fn postselect_flags_zero_probability() {
        let network = build_network_unitary(&NetworkConfig::cascade_with_angles([0.0; 6])).unwrap();
        let out = crate::fock::apply_mode_unitary(&pdc_term(1).unwrap(), &network);
        // A two-photon state can never fill four modes.
        let result = postselect(
            &out,
            &[
                SpatialMode::A,
                SpatialMode::B,
                SpatialMode::D,
                SpatialMode::E,
            ],
        )
        .unwrap();
        assert_eq!(result.probability, 0.0);
        assert!(result.register.is_none());
    }

    #[test]
    fn postselect_rejects_bad_selections() {
        let state = FockState::vacuum();
        assert!(postselect(&state, &[SpatialMode::B]).is_err());
        assert!(postselect(&state, &[SpatialMode::B, SpatialMode::B]).is_err());
        assert!(postselect(&state, &[SpatialMode::A0, SpatialMode::B]).is_err());
    }

    #[test]
    fn singlet_outcome_probabilities_at_zero_angle() {
        let psi = singlet();
        let settings = settings_for(&BD, &[0.0, 0.0]);
        let pp = outcome_probability(&psi, &settings, &[Sign::Plus, Sign::Plus]).unwrap();
        let pm = outcome_probability(&psi, &settings, &[Sign::Plus, Sign::Minus]).unwrap();
        assert!(pp.abs() < 1e-14);
        assert!((pm - 0.5).abs() < 1e-14);
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        for (label, modes) in [
            (StateLabel::Psi2, vec![SpatialMode::B, SpatialMode::D]),
            (
                StateLabel::Psi4,
                vec![
                    SpatialMode::A,
                    SpatialMode::B,
                    SpatialMode::D,
                    SpatialMode::E,
                ],
            ),
            (StateLabel::Psi6, SpatialMode::OUTPUTS.to_vec()),
        ] {
            let state = make_reference(label).register;
            let thetas: Vec<f64> = (0..modes.len()).map(|i| 0.37 * (i + 1) as f64).collect();
            let probs = outcome_probabilities(&state, &settings_for(&modes, &thetas)).unwrap();
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn outcome_probability_matches_projector_arithmetic() {
        // Independent route: explicit eigenvector tensor products.
        let psi = singlet();
        let thetas = [0.83, 2.41];
        let settings = settings_for(&BD, &thetas);
        for (o1, b1) in [(Sign::Plus, 0), (Sign::Minus, 1)] {
            for (o2, b2) in [(Sign::Plus, 0), (Sign::Minus, 1)] {
                let fast = outcome_probability(&psi, &settings, &[o1, o2]).unwrap();
                let eig = |theta: f64, bit: usize| -> [f64; 2] {
                    let (s, c) = (theta / 2.0).sin_cos();
                    if bit == 0 {
                        [c, s]
                    } else {
                        [-s, c]
                    }
                };
                let v1 = eig(thetas[0], b1);
                let v2 = eig(thetas[1], b2);
                let mut overlap = Complex64::new(0.0, 0.0);
                for idx in 0..4 {
                    let w = v1[idx >> 1] * v2[idx & 1];
                    overlap += Complex64::new(w, 0.0).conj() * psi.amplitudes()[idx];
                }
                assert!((fast - overlap.norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn six_photon_outcomes_match_projector_arithmetic() {
        // Brute force over the 64-dimensional register with explicit
        // eigenvector products, at the all-diagonal setting.
        let psi6 = make_reference(StateLabel::Psi6).register;
        let settings = settings_for(&SpatialMode::OUTPUTS, &[FRAC_PI_2; 6]);
        let probs = outcome_probabilities(&psi6, &settings).unwrap();
        let s = 1.0 / 2f64.sqrt();
        for (outcome_index, &p) in probs.iter().enumerate() {
            let mut overlap = Complex64::new(0.0, 0.0);
            for basis_index in 0..64usize {
                let mut weight = 1.0;
                for qubit in 0..6 {
                    let sign_bit = outcome_index >> (5 - qubit) & 1;
                    let pol_bit = basis_index >> (5 - qubit) & 1;
                    // theta = pi/2 eigenvectors: (1, 1)/sqrt2 and (-1, 1)/sqrt2
                    weight *= match (sign_bit, pol_bit) {
                        (0, _) => s,
                        (1, 0) => -s,
                        (1, 1) => s,
                        _ => unreachable!(),
                    };
                }
                overlap += Complex64::new(weight, 0.0) * psi6.amplitudes()[basis_index];
            }
            assert!(
                (p - overlap.norm_sqr()).abs() < 1e-12,
                "outcome {outcome_index}"
            );
        }
        // The all-plus pattern is forbidden: it carries maximal collective
        // spin while the filtered state carries none.
        assert!(probs[0] < 1e-14);
    }

    #[test]
    fn singlet_correlation_is_minus_cosine() {
        let psi = singlet();
        for i in 0..25 {
            let tb = 0.11 + 0.23 * i as f64;
            let td = 1.91 - 0.17 * i as f64;
            let e = correlation_from_state(&psi, &settings_for(&BD, &[tb, td])).unwrap();
            assert!((e + (tb - td).cos()).abs() < 1e-10, "tb={tb} td={td}");
        }
    }

    #[test]
    fn six_photon_diagonal_correlation() {
        let psi6 = make_reference(StateLabel::Psi6).register;
        let settings = settings_for(&SpatialMode::OUTPUTS, &[FRAC_PI_2; 6]);
        let e = correlation_from_state(&psi6, &settings).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_equals_sign_weighted_outcome_sum() {
        let psi = make_reference(StateLabel::Psi4).register;
        let modes = [
            SpatialMode::A,
            SpatialMode::B,
            SpatialMode::D,
            SpatialMode::E,
        ];
        let settings = settings_for(&modes, &[0.4, 1.3, 2.9, 5.1]);
        let direct = correlation_from_state(&psi, &settings).unwrap();
        let probs = outcome_probabilities(&psi, &settings).unwrap();
        let summed: f64 = probs
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let parity = (idx as u32).count_ones() % 2;
                if parity == 0 {
                    *p
                } else {
                    -p
                }
            })
            .sum();
        assert!((direct - summed).abs() < 1e-12);
    }

    #[test]
    fn single_shot_gives_single_record() {
        let psi = singlet();
        let settings = settings_for(&BD, &[0.0, 0.0]);
        let records = monte_carlo_counts(&psi, &settings, 1, 42).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].counts, 1);
    }

    #[test]
    fn zero_probability_outcomes_are_never_drawn() {
        let psi = singlet();
        let settings = settings_for(&BD, &[0.0, 0.0]);
        let records = monte_carlo_counts(&psi, &settings, 100_000, 7).unwrap();
        let total: u64 = records.iter().map(|r| r.counts).sum();
        assert_eq!(total, 100_000);
        let empirical: f64 = records
            .iter()
            .map(|r| r.pattern.sign_product() * r.counts as f64)
            .sum::<f64>()
            / total as f64;
        assert_eq!(empirical, -1.0);
    }

    #[test]
    fn empirical_correlation_within_binomial_error() {
        let psi = singlet();
        let shots = 100_000u64;
        let settings = settings_for(&BD, &[FRAC_PI_2, 0.0]);
        let records = monte_carlo_counts(&psi, &settings, shots, 3).unwrap();
        let empirical: f64 = records
            .iter()
            .map(|r| r.pattern.sign_product() * r.counts as f64)
            .sum::<f64>()
            / shots as f64;
        assert!(empirical.abs() < 5.0 / (shots as f64).sqrt());
    }

    #[test]
    fn identical_seeds_reproduce_counts() {
        let psi = singlet();
        let settings = settings_for(&BD, &[1.0, 0.2]);
        let a = monte_carlo_counts(&psi, &settings, 5_000, 99).unwrap();
        let b = monte_carlo_counts(&psi, &settings, 5_000, 99).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.counts, y.counts);
            assert_eq!(x.pattern, y.pattern);
        }
    }

    #[test]
    fn ket_string_convention() {
        assert_eq!(ket_string(0, 2), "HH");
        assert_eq!(ket_string(1, 2), "HV");
        assert_eq!(ket_string(2, 2), "VH");
        assert_eq!(ket_string(0b000111, 6), "HHHVVV");
    }
}
