//! Experiment configuration: defaults, config-file parsing, and flag
//! merging. Precedence is flags over file over defaults.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::PathBuf;

use singlet_filter::network::SplitSpec;
use singlet_filter::SpatialMode;

/// Where the contrast-reduction factor of simulated curves comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Visibility {
    Ideal,
    /// From the filter/pump bandwidth ratio.
    Spectral(f64),
    /// Fixed factor.
    Explicit(f64),
}

impl Visibility {
    pub fn factor(&self, order: u32) -> f64 {
        match *self {
            Visibility::Ideal => 1.0,
            Visibility::Spectral(r) => singlet_filter::spectral::v_temp_for_order(order, r),
            Visibility::Explicit(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub mode: SpatialMode,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn angles(&self) -> Vec<f64> {
        let width = (self.stop - self.start) / self.steps as f64;
        (0..self.steps)
            .map(|i| self.start + i as f64 * width)
            .collect()
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub order: u32,
    /// Selected coincidence modes, sorted.
    pub modes: Vec<SpatialMode>,
    /// Fixed analyzer angles (radians) for the non-swept modes.
    pub fixed_thetas: BTreeMap<SpatialMode, f64>,
    pub sweep: SweepSpec,
    pub visibility: Visibility,
    pub shots: u64,
    pub seed: u64,
    pub split_a0: SplitSpec,
    pub split_b0: SplitSpec,
}

#[derive(Debug, Clone)]
pub struct OutputOptions {
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Partially specified options from one source (flags or file).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub order: Option<u32>,
    pub modes: Option<Vec<SpatialMode>>,
    pub thetas: BTreeMap<SpatialMode, f64>,
    pub sweep: Option<SweepSpec>,
    pub visibility: Option<Visibility>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub split_a0: Option<[f64; 3]>,
    pub split_b0: Option<[f64; 3]>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub r_values: Option<Vec<f64>>,
}

impl Overrides {
    /// Layers `self` (the stronger source) over `base`.
    pub fn merged_over(self, base: Overrides) -> Overrides {
        let mut thetas = base.thetas;
        thetas.extend(self.thetas);
        Overrides {
            order: self.order.or(base.order),
            modes: self.modes.or(base.modes),
            thetas,
            sweep: self.sweep.or(base.sweep),
            visibility: self.visibility.or(base.visibility),
            shots: self.shots.or(base.shots),
            seed: self.seed.or(base.seed),
            split_a0: self.split_a0.or(base.split_a0),
            split_b0: self.split_b0.or(base.split_b0),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            r_values: self.r_values.or(base.r_values),
        }
    }

    /// Parses a flat key=value file ('#' starts a comment).
    pub fn from_file(path: &PathBuf) -> Result<Overrides, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        let mut over = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let located = |e: String| format!("line {}: {e}", lineno + 1);
            match key {
                "order" => over.order = Some(parse_order(value).map_err(located)?),
                "modes" => over.modes = Some(parse_modes(value).map_err(located)?),
                "sweep" => over.sweep = Some(parse_sweep(value).map_err(located)?),
                "visibility" => over.visibility = Some(parse_visibility(value).map_err(located)?),
                "shots" => over.shots = Some(parse_u64(value, "shots").map_err(located)?),
                "seed" => over.seed = Some(parse_u64(value, "seed").map_err(located)?),
                "split_a0" => over.split_a0 = Some(parse_triple(value).map_err(located)?),
                "split_b0" => over.split_b0 = Some(parse_triple(value).map_err(located)?),
                "format" => over.format = Some(parse_format(value).map_err(located)?),
                "out" => over.out = Some(PathBuf::from(value)),
                "r_values" => over.r_values = Some(parse_f64_list(value).map_err(located)?),
                _ if key.starts_with("theta_") => {
                    let mode = parse_mode(&key["theta_".len()..]).map_err(located)?;
                    let theta = parse_f64(value, "theta").map_err(located)?;
                    over.thetas.insert(mode, theta);
                }
                _ => return Err(format!("line {}: unknown key '{key}'", lineno + 1)),
            }
        }
        Ok(over)
    }
}

pub fn parse_order(s: &str) -> Result<u32, String> {
    let order: u32 = s.parse().map_err(|_| format!("invalid order '{s}'"))?;
    if !(1..=3).contains(&order) {
        return Err(format!("order must be 1, 2 or 3, got {order}"));
    }
    Ok(order)
}

pub fn parse_mode(s: &str) -> Result<SpatialMode, String> {
    SpatialMode::parse(s.trim()).ok_or_else(|| format!("unknown mode '{s}'"))
}

pub fn parse_modes(s: &str) -> Result<Vec<SpatialMode>, String> {
    s.split(',').map(parse_mode).collect()
}

pub fn parse_theta(s: &str) -> Result<(SpatialMode, f64), String> {
    let (mode, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected <mode>=<radians>, got '{s}'"))?;
    Ok((parse_mode(mode)?, parse_f64(value, "theta")?))
}

pub fn parse_sweep(s: &str) -> Result<SweepSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("expected <mode>:<start>:<stop>:<steps>, got '{s}'"));
    }
    let steps: usize = parts[3]
        .parse()
        .map_err(|_| format!("invalid step count '{}'", parts[3]))?;
    if steps < 2 {
        return Err("sweep needs at least 2 steps".into());
    }
    Ok(SweepSpec {
        mode: parse_mode(parts[0])?,
        start: parse_f64(parts[1], "sweep start")?,
        stop: parse_f64(parts[2], "sweep stop")?,
        steps,
    })
}

pub fn parse_visibility(s: &str) -> Result<Visibility, String> {
    if s == "ideal" {
        return Ok(Visibility::Ideal);
    }
    if let Some(r) = s.strip_prefix("r=") {
        let r = parse_f64(r, "bandwidth ratio")?;
        if r < 0.0 {
            return Err("bandwidth ratio must be non-negative".into());
        }
        return Ok(Visibility::Spectral(r));
    }
    if let Some(v) = s.strip_prefix("v=") {
        let v = parse_f64(v, "visibility")?;
        if !(0.0..=1.0).contains(&v) {
            return Err("visibility must lie in [0, 1]".into());
        }
        return Ok(Visibility::Explicit(v));
    }
    Err(format!(
        "visibility must be 'ideal', 'r=<ratio>' or 'v=<factor>', got '{s}'"
    ))
}

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("format must be csv or json, got '{other}'")),
    }
}

pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let values = parse_f64_list(s)?;
    if values.len() != 3 {
        return Err(format!("expected three amplitudes, got {}", values.len()));
    }
    Ok([values[0], values[1], values[2]])
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|part| parse_f64(part, "value")).collect()
}

fn parse_f64(s: &str, what: &str) -> Result<f64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid {what} '{s}'"))
}

fn parse_u64(s: &str, what: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid {what} '{s}'"))
}

pub fn default_modes(order: u32) -> Vec<SpatialMode> {
    match order {
        1 => vec![SpatialMode::B, SpatialMode::D],
        2 => vec![
            SpatialMode::A,
            SpatialMode::B,
            SpatialMode::D,
            SpatialMode::E,
        ],
        _ => SpatialMode::OUTPUTS.to_vec(),
    }
}

/// Turns merged overrides into a validated run configuration. `uses_sweep`
/// switches on the sweep-specific checks.
pub fn resolve(
    merged: &Overrides,
    uses_sweep: bool,
) -> Result<(ExperimentConfig, OutputOptions), String> {
    let order = merged.order.unwrap_or(1);
    if !(1..=3).contains(&order) {
        return Err(format!("order must be 1, 2 or 3, got {order}"));
    }

    let mut modes = merged.modes.clone().unwrap_or_else(|| default_modes(order));
    modes.sort();
    let before = modes.len();
    modes.dedup();
    if modes.len() != before {
        return Err("repeated mode in selection".into());
    }
    if modes.iter().any(|m| m.is_source()) {
        return Err("only output modes a..f can be selected".into());
    }
    if modes.len() != 2 * order as usize {
        return Err(format!(
            "order {order} selects {} modes, got {}",
            2 * order,
            modes.len()
        ));
    }

    let sweep = merged.sweep.unwrap_or(SweepSpec {
        mode: SpatialMode::B,
        start: 0.0,
        stop: TAU,
        steps: 25,
    });
    if sweep.steps < 2 {
        return Err("sweep needs at least 2 steps".into());
    }

    for mode in merged.thetas.keys() {
        if !modes.contains(mode) {
            return Err(format!("theta given for unselected mode {mode}"));
        }
    }

    if uses_sweep {
        if !modes.contains(&sweep.mode) {
            return Err(format!("sweep mode {} is not selected", sweep.mode));
        }
        if merged.thetas.contains_key(&sweep.mode) {
            return Err(format!(
                "mode {} cannot be both swept and fixed",
                sweep.mode
            ));
        }
    }

    let mut fixed_thetas = merged.thetas.clone();
    for mode in &modes {
        if uses_sweep && *mode == sweep.mode {
            continue;
        }
        fixed_thetas.entry(*mode).or_insert(FRAC_PI_2);
    }

    let split = |source, amps: Option<[f64; 3]>| -> Result<SplitSpec, String> {
        match amps {
            None => SplitSpec::cascade(source).map_err(|e| e.to_string()),
            Some(t) => {
                let outputs = match source {
                    SpatialMode::A0 => [SpatialMode::A, SpatialMode::B, SpatialMode::C],
                    _ => [SpatialMode::D, SpatialMode::E, SpatialMode::F],
                };
                SplitSpec::new(source, outputs, t).map_err(|e| e.to_string())
            }
        }
    };

    let config = ExperimentConfig {
        order,
        modes,
        fixed_thetas,
        sweep,
        visibility: merged.visibility.unwrap_or(Visibility::Ideal),
        shots: merged.shots.unwrap_or(0),
        seed: merged.seed.unwrap_or(1),
        split_a0: split(SpatialMode::A0, merged.split_a0)?,
        split_b0: split(SpatialMode::B0, merged.split_b0)?,
    };
    let output = OutputOptions {
        format: merged.format.unwrap_or(OutputFormat::Csv),
        out: merged.out.clone(),
    };
    Ok((config, output))
}
