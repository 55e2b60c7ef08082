//! Closed-form constructors for the named reference states and the
//! collective-invariance check.
//!
//! The k-photon filtered states are invariant under any identical
//! single-qubit unitary applied to all qubits at once; `invariance_defect`
//! quantifies how far a register is from that property. Qubits are ordered
//! by mode (a, b, c, d, e, f), so the first half of a register sits on the
//! a0 side of the source.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::fock::UNITARY_TOL;
use crate::measurement::QubitRegisterState;

/// Named states used as references throughout the tests and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    /// Two-photon polarization singlet (|HV> - |VH>)/sqrt2.
    Psi2,
    /// Four-photon invariant state sqrt(2/3)|GHZ4+> - sqrt(1/3)|EPR>|EPR>.
    Psi4,
    /// Six-photon invariant state
    /// |GHZ6->/sqrt2 + (|W3bar>|W3> - |W3>|W3bar>)/2.
    Psi6,
    /// (|HV> + |VH>)/sqrt2.
    Epr,
    /// (|HHVV> + |VVHH>)/sqrt2.
    Ghz4Plus,
    /// (|HHHVVV> - |VVVHHH>)/sqrt2.
    Ghz6Minus,
    /// (|HHV> + |HVH> + |VHH>)/sqrt3.
    W3,
    /// Spin-flipped W3: (|VVH> + |VHV> + |HVV>)/sqrt3.
    W3Bar,
}

impl StateLabel {
    pub fn name(self) -> &'static str {
        match self {
            StateLabel::Psi2 => "psi2",
            StateLabel::Psi4 => "psi4",
            StateLabel::Psi6 => "psi6",
            StateLabel::Epr => "epr",
            StateLabel::Ghz4Plus => "ghz4+",
            StateLabel::Ghz6Minus => "ghz6-",
            StateLabel::W3 => "w3",
            StateLabel::W3Bar => "w3bar",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceState {
    pub label: StateLabel,
    pub register: QubitRegisterState,
}

/// Basis index of an H/V pattern, first character = most significant bit.
fn ket(pattern: &str) -> usize {
    pattern.chars().fold(0usize, |acc, c| {
        (acc << 1)
            | match c {
                'H' => 0,
                'V' => 1,
                _ => panic!("ket patterns contain only H and V"),
            }
    })
}

fn from_kets(qubits: usize, entries: &[(&str, f64)]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
    for (pattern, weight) in entries {
        assert_eq!(pattern.len(), qubits);
        amps[ket(pattern)] += Complex64::new(*weight, 0.0);
    }
    amps
}

fn tensor(left: &[Complex64], right: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            out.push(a * b);
        }
    }
    out
}

fn scaled(amps: &[Complex64], factor: f64) -> Vec<Complex64> {
    amps.iter().map(|a| a * factor).collect()
}

fn added(left: &[Complex64], right: &[Complex64]) -> Vec<Complex64> {
    left.iter().zip(right).map(|(a, b)| a + b).collect()
}

fn raw_amplitudes(label: StateLabel) -> Vec<Complex64> {
    let s2 = 1.0 / 2f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    match label {
        StateLabel::Psi2 => from_kets(2, &[("HV", s2), ("VH", -s2)]),
        StateLabel::Epr => from_kets(2, &[("HV", s2), ("VH", s2)]),
        StateLabel::Ghz4Plus => from_kets(4, &[("HHVV", s2), ("VVHH", s2)]),
        StateLabel::Ghz6Minus => from_kets(6, &[("HHHVVV", s2), ("VVVHHH", -s2)]),
        StateLabel::W3 => from_kets(3, &[("HHV", s3), ("HVH", s3), ("VHH", s3)]),
        StateLabel::W3Bar => from_kets(3, &[("VVH", s3), ("VHV", s3), ("HVV", s3)]),
        StateLabel::Psi4 => {
            let epr = raw_amplitudes(StateLabel::Epr);
            let epr_pair = tensor(&epr, &epr);
            added(
                &scaled(&raw_amplitudes(StateLabel::Ghz4Plus), (2f64 / 3.0).sqrt()),
                &scaled(&epr_pair, -(1f64 / 3.0).sqrt()),
            )
        }
        StateLabel::Psi6 => {
            let w = raw_amplitudes(StateLabel::W3);
            let wbar = raw_amplitudes(StateLabel::W3Bar);
            let cross = added(&tensor(&wbar, &w), &scaled(&tensor(&w, &wbar), -1.0));
            added(
                &scaled(&raw_amplitudes(StateLabel::Ghz6Minus), s2),
                &scaled(&cross, 0.5),
            )
        }
    }
}

/// Builds the normalized, phase-fixed reference state for a label.
pub fn make_reference(label: StateLabel) -> ReferenceState {
    let register = QubitRegisterState::from_unnormalized(raw_amplitudes(label))
        .expect("reference amplitudes are nonzero");
    ReferenceState { label, register }
}

fn check_unitary_2x2(u: &[[Complex64; 2]; 2]) -> Result<(), Error> {
    let mut max_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, row) in u.iter().enumerate() {
                let _ = k;
                acc += row[i].conj() * row[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((acc - target).norm());
        }
    }
    if max_dev > UNITARY_TOL {
        return Err(Error::NotUnitary { max_dev });
    }
    Ok(())
}

/// 1 - |<psi| u^(tensor k) |psi>|: zero exactly when the state is unchanged
/// (up to phase) by applying the same single-qubit unitary to every qubit.
pub fn invariance_defect(
    state: &QubitRegisterState,
    u: &[[Complex64; 2]; 2],
) -> Result<f64, Error> {
    check_unitary_2x2(u)?;
    let mut transformed = state.clone();
    for qubit in 0..state.num_qubits() {
        transformed.apply_single_qubit(qubit, u);
    }
    let overlap = state.inner_product(&transformed)?;
    Ok(1.0 - overlap.norm())
}

/// |<x|y>|^2; one exactly when the registers agree up to a global phase.
pub fn fidelity(x: &QubitRegisterState, y: &QubitRegisterState) -> Result<f64, Error> {
    Ok(x.inner_product(y)?.norm_sqr())
}

/// Haar-distributed SU(2) element, drawn from the given generator.
pub fn random_su2<R: Rng>(rng: &mut R) -> [[Complex64; 2]; 2] {
    loop {
        let raw = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let norm_sqr: f64 = raw.iter().map(|x| x * x).sum();
        if !(1e-6..=1.0).contains(&norm_sqr) {
            continue;
        }
        let n = norm_sqr.sqrt();
        let alpha = Complex64::new(raw[0] / n, raw[1] / n);
        let beta = Complex64::new(raw[2] / n, raw[3] / n);
        return [[alpha, beta], [-beta.conj(), alpha.conj()]];
    }
}
