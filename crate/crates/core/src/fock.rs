//! Sparse bosonic Fock states over the fixed set of optical modes, with
//! creation operators and passive linear-optical mode transformations.
//!
//! All states live on one global mode ordering (a0H, a0V, b0H, b0V, aH, aV,
//! ..., fV), so occupation vectors are directly comparable everywhere in the
//! crate. Mode unitaries act on creation operators as a_i† -> sum_j U_ji b_j†
//! and are expanded term by term with the bosonic normalization factors.

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Error;

/// Amplitudes at or below this magnitude are dropped after transformations.
pub const PRUNE_TOL: f64 = 1e-14;

/// Allowed elementwise deviation of U·U† from the identity.
pub const UNITARY_TOL: f64 = 1e-10;

/// Total number of optical modes (8 spatial x 2 polarizations).
pub const NUM_MODES: usize = 16;

/// Largest photon number a single run ever produces (third-order emission
/// gives 6; the factorial table leaves headroom up to 8).
pub const MAX_PHOTONS: usize = 8;

const FACTORIAL: [f64; MAX_PHOTONS + 1] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0];

/// Spatial mode labels: two source modes feeding the fan-out (`a0`, `b0`) and
/// six analyzed output modes (`a` through `f`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpatialMode {
    A0,
    B0,
    A,
    B,
    C,
    D,
    E,
    F,
}

impl SpatialMode {
    pub const ALL: [SpatialMode; 8] = [
        SpatialMode::A0,
        SpatialMode::B0,
        SpatialMode::A,
        SpatialMode::B,
        SpatialMode::C,
        SpatialMode::D,
        SpatialMode::E,
        SpatialMode::F,
    ];

    /// The six output modes behind the beamsplitter fan-out, in fixed order.
    pub const OUTPUTS: [SpatialMode; 6] = [
        SpatialMode::A,
        SpatialMode::B,
        SpatialMode::C,
        SpatialMode::D,
        SpatialMode::E,
        SpatialMode::F,
    ];

    pub fn is_source(self) -> bool {
        matches!(self, SpatialMode::A0 | SpatialMode::B0)
    }

    pub fn label(self) -> &'static str {
        match self {
            SpatialMode::A0 => "a0",
            SpatialMode::B0 => "b0",
            SpatialMode::A => "a",
            SpatialMode::B => "b",
            SpatialMode::C => "c",
            SpatialMode::D => "d",
            SpatialMode::E => "e",
            SpatialMode::F => "f",
        }
    }

    pub fn parse(s: &str) -> Option<SpatialMode> {
        SpatialMode::ALL.iter().copied().find(|m| m.label() == s)
    }

    fn ordinal(self) -> usize {
        match self {
            SpatialMode::A0 => 0,
            SpatialMode::B0 => 1,
            SpatialMode::A => 2,
            SpatialMode::B => 3,
            SpatialMode::C => 4,
            SpatialMode::D => 5,
            SpatialMode::E => 6,
            SpatialMode::F => 7,
        }
    }
}

impl fmt::Display for SpatialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => f.write_str("H"),
            Polarization::V => f.write_str("V"),
        }
    }
}

/// One optical mode: a spatial label plus a polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub spatial: SpatialMode,
    pub polarization: Polarization,
}

impl ModeId {
    pub fn new(spatial: SpatialMode, polarization: Polarization) -> Self {
        ModeId {
            spatial,
            polarization,
        }
    }

    /// Position in the fixed global ordering (a0H=0, a0V=1, b0H=2, ..., fV=15).
    pub fn index(self) -> usize {
        2 * self.spatial.ordinal()
            + match self.polarization {
                Polarization::H => 0,
                Polarization::V => 1,
            }
    }

    pub fn from_index(index: usize) -> ModeId {
        assert!(index < NUM_MODES, "mode index out of range");
        let spatial = SpatialMode::ALL[index / 2];
        let polarization = if index.is_multiple_of(2) {
            Polarization::H
        } else {
            Polarization::V
        };
        ModeId::new(spatial, polarization)
    }

    /// All 16 modes in global order.
    pub fn all() -> Vec<ModeId> {
        (0..NUM_MODES).map(ModeId::from_index).collect()
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.spatial, self.polarization)
    }
}

/// Photon counts per mode, indexed by the global mode ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(pub [u8; NUM_MODES]);

impl OccupationVector {
    pub fn vacuum() -> Self {
        OccupationVector([0; NUM_MODES])
    }

    pub fn count(&self, mode: ModeId) -> u8 {
        self.0[mode.index()]
    }

    pub fn total_photons(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_photons() == 0 {
            return f.write_str("|vac>");
        }
        f.write_str("|")?;
        let mut first = true;
        for (i, &n) in self.0.iter().enumerate() {
            if n > 0 {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}_{}", n, ModeId::from_index(i))?;
                first = false;
            }
        }
        f.write_str(">")
    }
}

/// Sparse superposition of occupation-number kets.
///
/// The map is kept free of amplitudes at or below [`PRUNE_TOL`]; iteration
/// order is the occupation-vector ordering, which makes all downstream
/// output deterministic.
#[derive(Debug, Clone, Default)]
pub struct FockState {
    terms: BTreeMap<OccupationVector, Complex64>,
}

impl FockState {
    /// The vacuum ket with amplitude one.
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(OccupationVector::vacuum(), Complex64::new(1.0, 0.0));
        FockState { terms }
    }

    /// The zero vector (no terms).
    pub fn zero() -> Self {
        FockState {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut state = FockState::zero();
        for (occ, amp) in iter {
            *state.terms.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        state.prune();
        state
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.terms
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Adds `factor * other` into `self`.
    pub fn add_scaled(&mut self, other: &FockState, factor: Complex64) {
        for (&occ, &amp) in &other.terms {
            *self.terms.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += factor * amp;
        }
        self.prune();
    }

    pub fn scale(&mut self, factor: Complex64) {
        for amp in self.terms.values_mut() {
            *amp *= factor;
        }
        self.prune();
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, amp| amp.norm() > PRUNE_TOL);
    }

    /// Scales to unit norm; fails on the zero vector.
    pub fn normalized(mut self) -> Result<FockState, Error> {
        let n = self.norm();
        if n <= PRUNE_TOL {
            return Err(Error::ZeroNorm);
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(self)
    }
}

/// Applies the creation operator for `mode`: each ket |..., n, ...> maps to
/// sqrt(n+1) |..., n+1, ...>. The result is not renormalized.
pub fn apply_creation(state: &FockState, mode: ModeId) -> FockState {
    let idx = mode.index();
    let mut out = FockState::zero();
    for (&occ, &amp) in &state.terms {
        let n = occ.0[idx] as usize;
        let mut raised = occ;
        raised.0[idx] += 1;
        let factor = ((n + 1) as f64).sqrt();
        *out.terms.entry(raised).or_insert(Complex64::new(0.0, 0.0)) += amp * factor;
    }
    out.prune();
    out
}

/// <x|y> over the shared occupation basis; conjugate-symmetric.
pub fn inner_product(x: &FockState, y: &FockState) -> Complex64 {
    let (small, large, conj_small) = if x.terms.len() <= y.terms.len() {
        (x, y, true)
    } else {
        (y, x, false)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (occ, amp) in &small.terms {
        if let Some(other) = large.terms.get(occ) {
            if conj_small {
                acc += amp.conj() * other;
            } else {
                acc += other.conj() * amp;
            }
        }
    }
    acc
}

/// A passive linear-optical transformation on a subset of modes.
///
/// Unitarity is validated at construction, so a `ModeUnitary` value can
/// always be applied safely.
#[derive(Debug, Clone)]
pub struct ModeUnitary {
    modes: Vec<ModeId>,
    matrix: Array2<Complex64>,
}

/// Largest elementwise deviation of `m · m†` from the identity.
pub fn unitarity_defect(m: &Array2<Complex64>) -> f64 {
    let d = m.nrows();
    let prod = m.dot(&m.t().mapv(|z| z.conj()));
    let mut max_dev: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            max_dev = max_dev.max((prod[[i, j]] - target).norm());
        }
    }
    max_dev
}

impl ModeUnitary {
    /// Builds a mode unitary; rejects non-square or non-unitary matrices and
    /// repeated modes.
    pub fn new(modes: Vec<ModeId>, matrix: Array2<Complex64>) -> Result<Self, Error> {
        let d = modes.len();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidConfig(format!(
                "matrix is {}x{} but {} modes were given",
                matrix.nrows(),
                matrix.ncols(),
                d
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &modes {
            if !seen.insert(m.index()) {
                return Err(Error::InvalidConfig(format!("repeated mode {m}")));
            }
        }
        let max_dev = unitarity_defect(&matrix);
        if max_dev > UNITARY_TOL {
            return Err(Error::NotUnitary { max_dev });
        }
        Ok(ModeUnitary { modes, matrix })
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }
}

/// Applies a mode unitary to a state: every creation operator transforms as
/// a_i† -> sum_j U_ji b_j†. Each occupation vector is rewritten as a monomial
/// of creation operators, substituted, and re-expanded with the bosonic
/// sqrt(n!) factors. Norm is preserved up to floating-point error.
pub fn apply_mode_unitary(state: &FockState, u: &ModeUnitary) -> FockState {
    let positions: Vec<usize> = u.modes.iter().map(|m| m.index()).collect();
    let d = positions.len();
    let mat = &u.matrix;

    // Skip matrix entries that are exactly negligible to keep the
    // multinomial expansion over each column small.
    let col_support: Vec<Vec<usize>> = (0..d)
        .map(|i| (0..d).filter(|&j| mat[[j, i]].norm() > 1e-15).collect())
        .collect();

    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();

    for (&occ, &amp) in &state.terms {
        // Base coefficient: original amplitude divided by the sqrt(n!)
        // normalization of every transformed mode's monomial.
        let mut coeff = amp;
        for (slot, &pos) in positions.iter().enumerate() {
            let _ = slot;
            coeff /= FACTORIAL[occ.0[pos] as usize].sqrt();
        }

        // Monomials over the transformed modes, built up one input mode at a
        // time by multinomial expansion of (sum_j U_ji b_j†)^n_i.
        let mut partial: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        partial.insert(vec![0u8; d], coeff);

        for i in 0..d {
            let n = occ.0[positions[i]] as usize;
            if n == 0 {
                continue;
            }
            let expansions = column_power_terms(mat, i, n, &col_support[i]);
            let mut next: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            for (monomial, c) in &partial {
                for (counts, w) in &expansions {
                    let mut merged = monomial.clone();
                    for &(j, k) in counts {
                        merged[j] += k;
                    }
                    *next.entry(merged).or_insert(Complex64::new(0.0, 0.0)) += c * w;
                }
            }
            partial = next;
        }

        for (monomial, c) in partial {
            let mut new_occ = occ;
            let mut value = c;
            for (slot, &pos) in positions.iter().enumerate() {
                new_occ.0[pos] = monomial[slot];
                value *= FACTORIAL[monomial[slot] as usize].sqrt();
            }
            *out.entry(new_occ).or_insert(Complex64::new(0.0, 0.0)) += value;
        }
    }

    let mut result = FockState { terms: out };
    result.prune();
    result
}

/// Terms of (sum_j U_ji b_j†)^n restricted to the nonzero column entries:
/// each entry is (list of (slot, count), multinomial coefficient times the
/// product of matrix-element powers).
fn column_power_terms(
    mat: &Array2<Complex64>,
    col: usize,
    n: usize,
    support: &[usize],
) -> Vec<(Vec<(usize, u8)>, Complex64)> {
    let mut result = Vec::new();
    let mut counts: Vec<u8> = vec![0; support.len()];
    distribute(mat, col, n, support, 0, &mut counts, &mut result);
    result
}

fn distribute(
    mat: &Array2<Complex64>,
    col: usize,
    remaining: usize,
    support: &[usize],
    slot: usize,
    counts: &mut Vec<u8>,
    result: &mut Vec<(Vec<(usize, u8)>, Complex64)>,
) {
    if slot == support.len() {
        if remaining == 0 {
            let n: usize = counts.iter().map(|&k| k as usize).sum();
            let mut coeff = Complex64::new(FACTORIAL[n], 0.0);
            let mut assignment = Vec::new();
            for (s, &k) in counts.iter().enumerate() {
                if k > 0 {
                    coeff /= FACTORIAL[k as usize];
                    coeff *= mat[[support[s], col]].powu(k as u32);
                    assignment.push((support[s], k));
                }
            }
            result.push((assignment, coeff));
        }
        return;
    }
    // Last slot takes whatever is left; earlier slots branch.
    if slot == support.len() - 1 {
        counts[slot] = remaining as u8;
        distribute(mat, col, 0, support, slot + 1, counts, result);
        counts[slot] = 0;
        return;
    }
    for k in 0..=remaining {
        counts[slot] = k as u8;
        distribute(mat, col, remaining - k, support, slot + 1, counts, result);
    }
    counts[slot] = 0;
}
