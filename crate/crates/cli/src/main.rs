//! Command-line front end for the singlet-filtering simulator.
//!
//! Subcommands: `sweep` (correlation curves over one analyzer angle),
//! `witness` (correlation-tensor entanglement and Bell indicators),
//! `state-dump` (post-selected register amplitudes in the H/V basis),
//! `vis-table` (maximal visibilities versus filter/pump bandwidth ratio).
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{OutputFormat, OutputOptions, Overrides};

#[derive(Parser)]
#[command(
    name = "singlet-filter",
    version,
    about = "Simulates multiphoton polarization-singlet filtering from a pulsed down-conversion source"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandLine,
}

#[derive(Subcommand)]
enum CommandLine {
    /// Sweep one analyzer angle and tabulate correlation curves with a
    /// sinusoidal fit
    Sweep(RunArgs),
    /// Correlation-tensor components, entanglement indicator, Bell value
    Witness(RunArgs),
    /// Post-selected register amplitudes (H/V basis) and reference fidelity
    StateDump(RunArgs),
    /// Maximal four- and six-photon visibilities per bandwidth ratio
    VisTable(VisArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Emission order: 1, 2 or 3 (two, four or six photons)
    #[arg(long)]
    order: Option<u32>,
    /// Comma-separated coincidence modes, e.g. a,b,d,e
    #[arg(long)]
    modes: Option<String>,
    /// Fixed analyzer angle as <mode>=<radians>; repeatable
    #[arg(long = "theta")]
    thetas: Vec<String>,
    /// Swept analyzer as <mode>:<start>:<stop>:<steps> (stop exclusive)
    #[arg(long)]
    sweep: Option<String>,
    /// Contrast model: ideal, r=<bandwidth ratio> or v=<factor>
    #[arg(long)]
    visibility: Option<String>,
    /// Monte-Carlo shots per point; 0 = exact probabilities
    #[arg(long)]
    shots: Option<u64>,
    /// Monte-Carlo seed
    #[arg(long)]
    seed: Option<u64>,
    /// a0-side split amplitudes t_a,t_b,t_c
    #[arg(long = "split-a0")]
    split_a0: Option<String>,
    /// b0-side split amplitudes t_d,t_e,t_f
    #[arg(long = "split-b0")]
    split_b0: Option<String>,
    /// key=value defaults file (flags take precedence)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct VisArgs {
    /// Comma-separated bandwidth ratios
    #[arg(long = "r-values")]
    r_values: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err((code, message)) => {
            eprintln!("error: {message}");
            exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<(), (i32, String)> {
    match cli.command {
        CommandLine::Sweep(args) => {
            let (cfg, out_opts) = resolve_run_args(&args, true)?;
            let result = commands::run_sweep(&cfg).map_err(cmd_err)?;
            let rendered = match out_opts.format {
                OutputFormat::Csv => output::sweep_csv(&result),
                OutputFormat::Json => output::sweep_json(&cfg, &result),
            };
            write_output(&rendered, &out_opts)
        }
        CommandLine::Witness(args) => {
            let (cfg, out_opts) = resolve_run_args(&args, false)?;
            let report = commands::run_witness(&cfg).map_err(cmd_err)?;
            let rendered = match out_opts.format {
                OutputFormat::Csv => output::witness_csv(&report),
                OutputFormat::Json => output::witness_json(&cfg, &report),
            };
            write_output(&rendered, &out_opts)
        }
        CommandLine::StateDump(args) => {
            let (cfg, out_opts) = resolve_run_args(&args, false)?;
            let dump = commands::run_state_dump(&cfg).map_err(cmd_err)?;
            let rendered = match out_opts.format {
                OutputFormat::Csv => output::state_dump_csv(&dump),
                OutputFormat::Json => output::state_dump_json(&cfg, &dump),
            };
            write_output(&rendered, &out_opts)
        }
        CommandLine::VisTable(args) => {
            let (r_values, out_opts) = resolve_vis_args(&args)?;
            let rows = commands::run_vis_table(&r_values).map_err(cmd_err)?;
            let rendered = match out_opts.format {
                OutputFormat::Csv => output::vis_table_csv(&rows),
                OutputFormat::Json => output::vis_table_json(&r_values, &rows),
            };
            write_output(&rendered, &out_opts)
        }
    }
}

fn cmd_err(e: commands::CmdError) -> (i32, String) {
    (e.exit_code(), e.message().to_string())
}

fn config_err(message: String) -> (i32, String) {
    (2, message)
}

fn flag_overrides(args: &RunArgs) -> Result<Overrides, (i32, String)> {
    let mut over = Overrides {
        order: args.order,
        shots: args.shots,
        seed: args.seed,
        out: args.out.clone(),
        ..Default::default()
    };
    if let Some(order) = args.order {
        if !(1..=3).contains(&order) {
            return Err(config_err(format!("order must be 1, 2 or 3, got {order}")));
        }
    }
    if let Some(modes) = &args.modes {
        over.modes = Some(config::parse_modes(modes).map_err(config_err)?);
    }
    for theta in &args.thetas {
        let (mode, value) = config::parse_theta(theta).map_err(config_err)?;
        over.thetas.insert(mode, value);
    }
    if let Some(sweep) = &args.sweep {
        over.sweep = Some(config::parse_sweep(sweep).map_err(config_err)?);
    }
    if let Some(visibility) = &args.visibility {
        over.visibility = Some(config::parse_visibility(visibility).map_err(config_err)?);
    }
    if let Some(split) = &args.split_a0 {
        over.split_a0 = Some(config::parse_triple(split).map_err(config_err)?);
    }
    if let Some(split) = &args.split_b0 {
        over.split_b0 = Some(config::parse_triple(split).map_err(config_err)?);
    }
    if let Some(format) = &args.format {
        over.format = Some(config::parse_format(format).map_err(config_err)?);
    }
    Ok(over)
}

fn resolve_run_args(
    args: &RunArgs,
    uses_sweep: bool,
) -> Result<(config::ExperimentConfig, OutputOptions), (i32, String)> {
    let flags = flag_overrides(args)?;
    let merged = match &args.config {
        Some(path) => flags.merged_over(Overrides::from_file(path).map_err(config_err)?),
        None => flags,
    };
    config::resolve(&merged, uses_sweep).map_err(config_err)
}

const DEFAULT_R_VALUES: [f64; 7] = [0.0, 0.25, 0.5, 0.76, 1.0, 1.5, 2.0];

fn resolve_vis_args(args: &VisArgs) -> Result<(Vec<f64>, OutputOptions), (i32, String)> {
    let mut flags = Overrides {
        out: args.out.clone(),
        ..Default::default()
    };
    if let Some(r_values) = &args.r_values {
        flags.r_values = Some(config::parse_f64_list(r_values).map_err(config_err)?);
    }
    if let Some(format) = &args.format {
        flags.format = Some(config::parse_format(format).map_err(config_err)?);
    }
    let merged = match &args.config {
        Some(path) => flags.merged_over(Overrides::from_file(path).map_err(config_err)?),
        None => flags,
    };
    let r_values = merged
        .r_values
        .clone()
        .unwrap_or_else(|| DEFAULT_R_VALUES.to_vec());
    let out_opts = OutputOptions {
        format: merged.format.unwrap_or(OutputFormat::Csv),
        out: merged.out.clone(),
    };
    Ok((r_values, out_opts))
}

fn write_output(rendered: &str, opts: &OutputOptions) -> Result<(), (i32, String)> {
    match &opts.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| (1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
