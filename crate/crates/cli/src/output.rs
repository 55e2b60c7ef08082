//! CSV and JSON rendering. All floating-point output carries 12 significant
//! digits and is assembled deterministically, so identical runs produce
//! byte-identical files.

use serde_json::{json, Map, Value};

use singlet_filter::analysis::WitnessReport;
use singlet_filter::SpatialMode;

use crate::commands::{StateDumpOutput, SweepOutput};
use crate::config::{ExperimentConfig, Visibility};

/// 12 significant digits, scientific notation; used for every CSV number.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds to 12 significant digits for JSON emission.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor();
    let scale = 10f64.powf(11.0 - magnitude);
    (x * scale).round() / scale
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        Value::Null
    }
}

fn opt_num(x: Option<f64>) -> Value {
    match x {
        Some(v) => num(v),
        None => Value::Null,
    }
}

fn mode_list(modes: &[SpatialMode]) -> Value {
    Value::Array(modes.iter().map(|m| json!(m.label())).collect())
}

fn visibility_json(cfg: &ExperimentConfig) -> Value {
    let factor = cfg.visibility.factor(cfg.order);
    match cfg.visibility {
        Visibility::Ideal => json!({"mode": "ideal", "v": num(factor)}),
        Visibility::Spectral(r) => json!({"mode": "spectral", "r": num(r), "v": num(factor)}),
        Visibility::Explicit(v) => json!({"mode": "explicit", "v": num(v)}),
    }
}

pub fn config_json(cfg: &ExperimentConfig) -> Value {
    let mut thetas = Map::new();
    for (mode, theta) in &cfg.fixed_thetas {
        thetas.insert(mode.label().to_string(), num(*theta));
    }
    json!({
        "order": cfg.order,
        "modes": mode_list(&cfg.modes),
        "thetas": Value::Object(thetas),
        "sweep": {
            "mode": cfg.sweep.mode.label(),
            "start": num(cfg.sweep.start),
            "stop": num(cfg.sweep.stop),
            "steps": cfg.sweep.steps,
        },
        "visibility": visibility_json(cfg),
        "shots": cfg.shots,
        "seed": cfg.seed,
        "split_a0": Value::Array(cfg.split_a0.amplitudes.iter().map(|t| num(*t)).collect()),
        "split_b0": Value::Array(cfg.split_b0.amplitudes.iter().map(|t| num(*t)).collect()),
    })
}

fn fit_json(fit: &singlet_filter::analysis::SineFit) -> Value {
    json!({
        "amplitude": num(fit.amplitude),
        "phase_rad": num(fit.phase),
        "offset": num(fit.offset),
        "amplitude_sigma": num(fit.amplitude_sigma),
    })
}

pub fn sweep_csv(out: &SweepOutput) -> String {
    let mut text = String::from("# theta in radians\n");
    text.push_str("theta_rad,E_theory,E_degraded,E_mc,sigma_mc\n");
    for row in &out.rows {
        let (mc_e, mc_sigma) = match row.mc {
            Some((e, sigma)) => (fmt_f(e), fmt_f(sigma)),
            None => (String::new(), String::new()),
        };
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f(row.theta),
            fmt_f(row.e_theory),
            fmt_f(row.e_degraded),
            mc_e,
            mc_sigma
        ));
    }
    text.push_str(&format!(
        "# fit: amplitude={} phase_rad={} offset={} amplitude_sigma={}\n",
        fmt_f(out.fit.amplitude),
        fmt_f(out.fit.phase),
        fmt_f(out.fit.offset),
        fmt_f(out.fit.amplitude_sigma)
    ));
    text
}

pub fn sweep_json(cfg: &ExperimentConfig, out: &SweepOutput) -> String {
    let rows: Vec<Value> = out
        .rows
        .iter()
        .map(|row| {
            json!({
                "theta_rad": num(row.theta),
                "e_theory": num(row.e_theory),
                "e_degraded": num(row.e_degraded),
                "e_mc": opt_num(row.mc.map(|m| m.0)),
                "sigma_mc": opt_num(row.mc.map(|m| m.1)),
            })
        })
        .collect();
    let value = json!({
        "command": "sweep",
        "config": config_json(cfg),
        "visibility_factor": num(out.visibility_factor),
        "postselection_probability": num(out.probability),
        "rows": Value::Array(rows),
        "fit": fit_json(&out.fit),
    });
    pretty(value)
}

pub fn witness_csv(report: &WitnessReport) -> String {
    let mut text = String::from("quantity,value,sigma\n");
    for (axes, component) in &report.components {
        text.push_str(&format!(
            "T_{axes},{},{}\n",
            fmt_f(component.value),
            fmt_f(component.sigma)
        ));
    }
    text.push_str(&format!(
        "indicator,{},{}\n",
        fmt_f(report.indicator),
        fmt_f(report.indicator_sigma)
    ));
    text.push_str(&format!(
        "bell,{},{}\n",
        fmt_f(report.bell_value),
        fmt_f(report.bell_sigma)
    ));
    if let Some(s) = report.sigmas_violated {
        text.push_str(&format!("indicator_sigmas_violated,{},\n", fmt_f(s)));
    }
    if let Some(s) = report.bell_sigmas_violated {
        text.push_str(&format!("bell_sigmas_violated,{},\n", fmt_f(s)));
    }
    text
}

pub fn witness_json(cfg: &ExperimentConfig, report: &WitnessReport) -> String {
    let mut components = Map::new();
    for (axes, component) in &report.components {
        components.insert(
            axes.clone(),
            json!({"value": num(component.value), "sigma": num(component.sigma)}),
        );
    }
    let value = json!({
        "command": "witness",
        "config": config_json(cfg),
        "report": {
            "components": Value::Object(components),
            "indicator": num(report.indicator),
            "indicator_sigma": num(report.indicator_sigma),
            "bell_value": num(report.bell_value),
            "bell_sigma": num(report.bell_sigma),
            "sigmas_violated": opt_num(report.sigmas_violated),
            "bell_sigmas_violated": opt_num(report.bell_sigmas_violated),
        },
    });
    pretty(value)
}

pub fn state_dump_csv(dump: &StateDumpOutput) -> String {
    let mut text = String::from("# post-selected register, H/V basis\n");
    text.push_str("ket,re,im\n");
    for (ket, re, im) in &dump.amplitudes {
        text.push_str(&format!("{ket},{},{}\n", fmt_f(*re), fmt_f(*im)));
    }
    text.push_str(&format!(
        "# probability={} reference={} fidelity={}\n",
        fmt_f(dump.probability),
        dump.reference.name(),
        fmt_f(dump.fidelity)
    ));
    text
}

pub fn state_dump_json(cfg: &ExperimentConfig, dump: &StateDumpOutput) -> String {
    let amplitudes: Vec<Value> = dump
        .amplitudes
        .iter()
        .map(|(ket, re, im)| json!({"ket": ket, "re": num(*re), "im": num(*im)}))
        .collect();
    let value = json!({
        "command": "state-dump",
        "config": config_json(cfg),
        "report": {
            "probability": num(dump.probability),
            "reference": dump.reference.name(),
            "fidelity": num(dump.fidelity),
            "amplitudes": Value::Array(amplitudes),
        },
    });
    pretty(value)
}

pub fn vis_table_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut text = String::from("r,v4_temp,v6_temp\n");
    for (r, v4, v6) in rows {
        text.push_str(&format!("{},{},{}\n", fmt_f(*r), fmt_f(*v4), fmt_f(*v6)));
    }
    text
}

pub fn vis_table_json(r_values: &[f64], rows: &[(f64, f64, f64)]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(r, v4, v6)| json!({"r": num(*r), "v4_temp": num(*v4), "v6_temp": num(*v6)}))
        .collect();
    let value = json!({
        "command": "vis-table",
        "config": {
            "r_values": Value::Array(r_values.iter().map(|r| num(*r)).collect()),
        },
        "rows": Value::Array(rows),
    });
    pretty(value)
}

fn pretty(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}
