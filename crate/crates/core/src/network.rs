//! The passive optical network between source and detectors: each source
//! mode is divided over three output modes by a beamsplitter cascade
//! (polarization-independent, real amplitudes), and every output mode
//! carries a polarization analyzer that rotates the local H/V basis into the
//! eigenbasis of cos(theta)·sigma_z + sin(theta)·sigma_x. The whole network
//! is assembled as one 16-mode unitary.

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{ModeId, ModeUnitary, Polarization, SpatialMode, NUM_MODES};

const SPLIT_NORM_TOL: f64 = 1e-12;

/// Division of one source mode over three output modes with real
/// transmission amplitudes (squared amplitudes sum to one).
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub source: SpatialMode,
    pub outputs: [SpatialMode; 3],
    pub amplitudes: [f64; 3],
}

impl SplitSpec {
    pub fn new(
        source: SpatialMode,
        outputs: [SpatialMode; 3],
        amplitudes: [f64; 3],
    ) -> Result<Self, Error> {
        let expected = match source {
            SpatialMode::A0 => [SpatialMode::A, SpatialMode::B, SpatialMode::C],
            SpatialMode::B0 => [SpatialMode::D, SpatialMode::E, SpatialMode::F],
            other => {
                return Err(Error::InvalidConfig(format!(
                    "split source must be a0 or b0, got {other}"
                )))
            }
        };
        if outputs != expected {
            return Err(Error::InvalidConfig(format!(
                "split from {source} must feed {}/{}/{}",
                expected[0], expected[1], expected[2]
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|t| t * t).sum();
        if (norm_sqr - 1.0).abs() > SPLIT_NORM_TOL {
            return Err(Error::InvalidConfig(format!(
                "split amplitudes must have unit square sum, got {norm_sqr}"
            )));
        }
        if amplitudes.iter().any(|&t| t <= 0.0) {
            return Err(Error::InvalidConfig(
                "split amplitudes must all be positive".into(),
            ));
        }
        Ok(SplitSpec {
            source,
            outputs,
            amplitudes,
        })
    }

    /// Two cascaded 50/50 splitters: the first transmitted arm keeps
    /// amplitude 1/sqrt2, the reflected arm is split once more into 1/2, 1/2.
    pub fn cascade(source: SpatialMode) -> Result<Self, Error> {
        let outputs = match source {
            SpatialMode::A0 => [SpatialMode::A, SpatialMode::B, SpatialMode::C],
            _ => [SpatialMode::D, SpatialMode::E, SpatialMode::F],
        };
        SplitSpec::new(source, outputs, [1.0 / 2f64.sqrt(), 0.5, 0.5])
    }

    /// Even three-way division, 1/sqrt3 per arm.
    pub fn symmetric(source: SpatialMode) -> Result<Self, Error> {
        let outputs = match source {
            SpatialMode::A0 => [SpatialMode::A, SpatialMode::B, SpatialMode::C],
            _ => [SpatialMode::D, SpatialMode::E, SpatialMode::F],
        };
        let t = 1.0 / 3f64.sqrt();
        SplitSpec::new(source, outputs, [t, t, t])
    }

    /// Probability of a photon leaving through each output arm.
    pub fn probabilities(&self) -> [f64; 3] {
        [
            self.amplitudes[0] * self.amplitudes[0],
            self.amplitudes[1] * self.amplitudes[1],
            self.amplitudes[2] * self.amplitudes[2],
        ]
    }
}

/// The default a0-side beamsplitter cascade (amplitudes 1/sqrt2, 1/2, 1/2).
pub fn default_cascade_split() -> SplitSpec {
    SplitSpec::cascade(SpatialMode::A0).expect("cascade amplitudes are normalized")
}

/// Analyzer orientation for one output mode. The angle selects the measured
/// observable cos(theta)·sigma_z + sin(theta)·sigma_x and is stored reduced
/// to [0, 2pi), which makes the analyzer block exactly periodic.
#[derive(Debug, Clone, Copy)]
pub struct AnalyzerSetting {
    pub mode: SpatialMode,
    theta: f64,
}

impl AnalyzerSetting {
    pub fn new(mode: SpatialMode, theta: f64) -> Self {
        AnalyzerSetting {
            mode,
            theta: theta.rem_euclid(TAU),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Full network description: the two fan-out splits plus one analyzer per
/// output mode.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    pub splits: [SplitSpec; 2],
    pub analyzers: [AnalyzerSetting; 6],
}

impl NetworkConfig {
    pub fn new(splits: [SplitSpec; 2], analyzers: [AnalyzerSetting; 6]) -> Result<Self, Error> {
        if splits[0].source != SpatialMode::A0 || splits[1].source != SpatialMode::B0 {
            return Err(Error::InvalidConfig(
                "network needs one split from a0 and one from b0, in that order".into(),
            ));
        }
        let mut covered = [false; 6];
        for setting in &analyzers {
            match SpatialMode::OUTPUTS.iter().position(|m| *m == setting.mode) {
                Some(i) if !covered[i] => covered[i] = true,
                Some(_) => {
                    return Err(Error::InvalidConfig(format!(
                        "duplicate analyzer for mode {}",
                        setting.mode
                    )))
                }
                None => {
                    return Err(Error::InvalidConfig(format!(
                        "analyzer mode {} is not an output mode",
                        setting.mode
                    )))
                }
            }
        }
        Ok(NetworkConfig { splits, analyzers })
    }

    /// Cascade splits on both sides with the given analyzer angles, listed
    /// in output-mode order a..f.
    pub fn cascade_with_angles(thetas: [f64; 6]) -> Self {
        Self::with_splits(
            SplitSpec::cascade(SpatialMode::A0).unwrap(),
            SplitSpec::cascade(SpatialMode::B0).unwrap(),
            thetas,
        )
    }

    pub fn with_splits(split_a: SplitSpec, split_b: SplitSpec, thetas: [f64; 6]) -> Self {
        let analyzers = [
            AnalyzerSetting::new(SpatialMode::A, thetas[0]),
            AnalyzerSetting::new(SpatialMode::B, thetas[1]),
            AnalyzerSetting::new(SpatialMode::C, thetas[2]),
            AnalyzerSetting::new(SpatialMode::D, thetas[3]),
            AnalyzerSetting::new(SpatialMode::E, thetas[4]),
            AnalyzerSetting::new(SpatialMode::F, thetas[5]),
        ];
        NetworkConfig::new([split_a, split_b], analyzers)
            .expect("canonical split/analyzer layout is valid")
    }

    pub fn theta_for(&self, mode: SpatialMode) -> Option<f64> {
        self.analyzers
            .iter()
            .find(|s| s.mode == mode)
            .map(|s| s.theta())
    }
}

/// Orthogonal 3x3 matrix whose first column is the unit vector `t`
/// (a Householder reflection exchanging e1 and t). The remaining columns
/// complete the splitter to a full unitary; they describe the unused input
/// ports and never see a photon.
fn householder_with_first_column(t: [f64; 3]) -> [[f64; 3]; 3] {
    let mut v = [t[0] - 1.0, t[1], t[2]];
    let norm_sqr: f64 = v.iter().map(|x| x * x).sum();
    if norm_sqr < 1e-24 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let scale = 2.0 / norm_sqr;
    let mut h = [[0.0; 3]; 3];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            *entry = delta - scale * v[i] * v[j];
        }
    }
    let _ = &mut v;
    h
}

/// Builds the composite 16-mode unitary of the network: fan-out first, then
/// the per-mode analyzer rotation. Column `m` gives the image of the
/// creation operator of mode `m` over all output modes.
///
/// Analyzer convention: the H port after the rotation carries the +1
/// eigenvector (cos(theta/2), sin(theta/2)) of the measured observable, the
/// V port the -1 eigenvector; at theta = 0 the block is the identity.
pub fn build_network_unitary(cfg: &NetworkConfig) -> Result<ModeUnitary, Error> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    // Fan-out: per split and polarization, a 3x3 real block. The source
    // column carries the split amplitudes; the two completion columns are
    // assigned to the second and third output labels, whose own input ports
    // are never occupied. Each leftover output column is sent back to the
    // source row to close the permutation.
    let mut fan = Array2::from_elem((NUM_MODES, NUM_MODES), zero);
    for split in &cfg.splits {
        let block = householder_with_first_column(split.amplitudes);
        for pol in [Polarization::H, Polarization::V] {
            let source_col = ModeId::new(split.source, pol).index();
            let rows: Vec<usize> = split
                .outputs
                .iter()
                .map(|m| ModeId::new(*m, pol).index())
                .collect();
            let cols = [
                source_col,
                ModeId::new(split.outputs[1], pol).index(),
                ModeId::new(split.outputs[2], pol).index(),
            ];
            for (bi, &row) in rows.iter().enumerate() {
                for (bj, &col) in cols.iter().enumerate() {
                    fan[[row, col]] = Complex64::new(block[bi][bj], 0.0);
                }
            }
            fan[[source_col, rows[0]]] = one;
        }
    }

    // Analyzer rotations: 2x2 block per output mode, identity on the source
    // modes.
    let mut rot = Array2::from_elem((NUM_MODES, NUM_MODES), zero);
    for pol in [Polarization::H, Polarization::V] {
        for source in [SpatialMode::A0, SpatialMode::B0] {
            let i = ModeId::new(source, pol).index();
            rot[[i, i]] = one;
        }
    }
    for setting in &cfg.analyzers {
        let half = setting.theta() / 2.0;
        let (s, c) = half.sin_cos();
        let h = ModeId::new(setting.mode, Polarization::H).index();
        let v = ModeId::new(setting.mode, Polarization::V).index();
        rot[[h, h]] = Complex64::new(c, 0.0);
        rot[[h, v]] = Complex64::new(s, 0.0);
        rot[[v, h]] = Complex64::new(-s, 0.0);
        rot[[v, v]] = Complex64::new(c, 0.0);
    }

    let composite = rot.dot(&fan);
    ModeUnitary::new(ModeId::all(), composite)
}
