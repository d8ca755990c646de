//! `dephasim`: command-line front end for the dephasing simulator.
//!
//! Subcommands:
//! - `sweep`    evolve a state and write a CSV table plus a JSON event list
//! - `events`   detect sudden transitions and entanglement death/revival
//! - `discord`  correlation measures of a single state (closed form, with an
//!   optional brute-force measurement scan)
//! - `validate` cross-check the decay function against independent numerical
//!   routes, or re-check a previously written CSV
//!
//! Exit codes: 0 success (including `--help`/`--version`), 1 configuration
//! error, 2 I/O error, 3 validation disagreement.

mod config;
mod output;
mod sweep;
mod validate;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dephasim_core::{
    bell::{
        classical_correlation_closed, concurrence, discord_closed, mutual_information_closed,
    },
    events::{detect_esd, detect_transitions},
    geometry::relative_entropy_discord,
    measurement::{classical_correlation_optimized, discord_optimized, OptimizerGrid},
    CVector, ChannelParams,
};

use config::{ConfigFile, Overrides, Resolved};
use output::fmt_f64;
use sweep::{run_sweep, EventRecord, SweepConfig};
use validate::OracleSettings;

/// Error category; the variant determines the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, or unphysical parameters (exit 1).
    Config(String),
    /// Unreadable inputs or unwritable outputs (exit 2).
    Io(String),
    /// A cross-check or row re-check disagreed (exit 3).
    Validation(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Io(msg) | CliError::Validation(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<dephasim_core::Error> for CliError {
    fn from(e: dephasim_core::Error) -> Self {
        match e {
            dephasim_core::Error::DetectorMismatch(_) => CliError::Validation(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dephasim",
    version,
    about = "Bell-diagonal two-qubit states under random-telegraph dephasing",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a state over [0, nu-max] and write per-step correlation data.
    Sweep(SweepArgs),
    /// Detect sudden transitions and entanglement death/revival events.
    Events(EventsArgs),
    /// Print the correlation measures of a single Bell-diagonal state.
    Discord(DiscordArgs),
    /// Cross-check the decay function, or re-check an emitted CSV file.
    Validate(ValidateArgs),
}

/// Noise parameters. `nu` is dimensionless time; `t = 2 * tau * nu` seconds.
#[derive(Args, Debug, Default)]
struct ChannelArgs {
    /// Telegraph amplitude `a` in 1/s.
    #[arg(long)]
    a: Option<f64>,
    /// Telegraph correlation time `tau` in seconds.
    #[arg(long)]
    tau: Option<f64>,
    /// Noise axis: 1 (x), 2 (y) or 3 (z).
    #[arg(long)]
    axis: Option<usize>,
}

/// Initial Bell-diagonal state `c = (c1, c2, c3)`.
#[derive(Args, Debug, Default)]
struct StateArgs {
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct ConfigArg {
    /// Optional `key = value` defaults file; explicit flags win.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    config: ConfigArg,
    /// End of the dimensionless time interval [0, nu-max].
    #[arg(long)]
    nu_max: Option<f64>,
    /// Number of uniform steps (the CSV gets steps + 1 rows).
    #[arg(long)]
    steps: Option<usize>,
    /// Seed recorded with the run (sweep output is deterministic regardless).
    #[arg(long)]
    seed: Option<u64>,
    /// Grid density for the event detectors (at least 10000).
    #[arg(long)]
    grid: Option<usize>,
    /// CSV output path; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// JSON event-list output path.
    #[arg(long, value_name = "FILE")]
    events: Option<PathBuf>,
    /// Also print times in seconds (t = 2 * tau * nu) in the summary.
    #[arg(long)]
    seconds: bool,
}

#[derive(Args, Debug)]
struct EventsArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    config: ConfigArg,
    /// End of the dimensionless time interval [0, nu-max].
    #[arg(long)]
    nu_max: Option<f64>,
    /// Grid density for the event detectors (at least 10000).
    #[arg(long)]
    grid: Option<usize>,
    /// JSON output path; standard output when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also print event times in seconds (t = 2 * tau * nu).
    #[arg(long)]
    seconds: bool,
}

#[derive(Args, Debug)]
struct DiscordArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    config: ConfigArg,
    /// Also run the brute-force measurement scan and report agreement.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    config: ConfigArg,
    /// End of the comparison interval [0, nu-max].
    #[arg(long)]
    nu_max: Option<f64>,
    /// Number of comparison points on the interval.
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Step of the memory-kernel integrator.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    /// Step of the differential-equation integrator.
    #[arg(long, default_value_t = 2.5e-4)]
    rk4_step: f64,
    /// Monte-Carlo trajectory count.
    #[arg(long, default_value_t = 100_000)]
    mc_samples: usize,
    /// Number of Monte-Carlo comparison points.
    #[arg(long, default_value_t = 10)]
    mc_points: usize,
    /// Seed for the Monte-Carlo trajectories.
    #[arg(long)]
    seed: Option<u64>,
    /// Re-check the rows of a previously written sweep CSV instead.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
    /// Negative-control hook: corrupt the closed form so checks must fail.
    #[arg(long, hide = true)]
    corrupt_lambda_sign: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Events(args) => cmd_events(args),
        Command::Discord(args) => cmd_discord(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_file(config: &ConfigArg) -> Result<ConfigFile, CliError> {
    match &config.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

fn resolve_common(
    channel: &ChannelArgs,
    state: &StateArgs,
    config: &ConfigArg,
    nu_max: Option<f64>,
    steps: Option<usize>,
    seed: Option<u64>,
    grid: Option<usize>,
    nu_max_default: f64,
) -> Result<Resolved, CliError> {
    let file = load_file(config)?;
    let overrides = Overrides {
        a: channel.a,
        tau: channel.tau,
        axis: channel.axis,
        c1: state.c1,
        c2: state.c2,
        c3: state.c3,
        nu_max,
        steps,
        seed,
        grid,
    };
    Resolved::merge(overrides, &file, nu_max_default)
}

fn channel_from(r: &Resolved) -> Result<ChannelParams, CliError> {
    ChannelParams::new(r.a, r.tau, r.axis).map_err(CliError::from)
}

fn state_from(r: &Resolved) -> Result<CVector, CliError> {
    CVector::new(r.c1, r.c2, r.c3).map_err(CliError::from)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let resolved = resolve_common(
        &args.channel,
        &args.state,
        &args.config,
        args.nu_max,
        args.steps,
        args.seed,
        args.grid,
        1.0,
    )?;
    let params = channel_from(&resolved)?;
    let initial = state_from(&resolved)?;
    let config = SweepConfig::new(
        params,
        initial,
        resolved.nu_max,
        resolved.steps,
        resolved.seed,
        resolved.grid,
    )?;
    let out = run_sweep(&config)?;

    output::to_path_or_stdout(args.out.as_deref(), |w| output::write_csv(w, &out.rows))?;
    if let Some(path) = &args.events {
        output::to_path_or_stdout(Some(path), |w| output::write_events_json(w, &out.events))?;
    }
    if let Some(path) = &args.out {
        let mut summary = format!(
            "wrote {} rows to {} covering nu in [0, {}] (seed {})",
            out.rows.len(),
            path.display(),
            resolved.nu_max,
            config.seed
        );
        if args.seconds {
            summary.push_str(&format!(
                " (t in [0, {}] s)",
                config.params.nu_to_seconds(resolved.nu_max)
            ));
        }
        println!("{summary}");
        if let Some(events_path) = &args.events {
            println!(
                "wrote {} events to {}",
                out.events.len(),
                events_path.display()
            );
        }
    }
    Ok(())
}

fn cmd_events(args: EventsArgs) -> Result<(), CliError> {
    let resolved = resolve_common(
        &args.channel,
        &args.state,
        &args.config,
        args.nu_max,
        None,
        None,
        args.grid,
        1.0,
    )?;
    let params = channel_from(&resolved)?;
    let initial = state_from(&resolved)?;
    let mut events = detect_transitions(&params, &initial, resolved.nu_max, resolved.grid)?;
    events.extend(detect_esd(&params, &initial, resolved.nu_max, resolved.grid)?);
    events.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    let records: Vec<EventRecord> = events.iter().map(EventRecord::from).collect();

    match &args.out {
        Some(path) => {
            output::to_path_or_stdout(Some(path), |w| output::write_events_json(w, &records))?;
            println!(
                "detected {} events over nu in [0, {}]; wrote {}",
                records.len(),
                resolved.nu_max,
                path.display()
            );
            for record in &records {
                println!("{}", describe_event(record, &params, args.seconds));
            }
        }
        None => {
            output::to_path_or_stdout(None, |w| output::write_events_json(w, &records))?;
        }
    }
    Ok(())
}

fn describe_event(record: &EventRecord, params: &ChannelParams, seconds: bool) -> String {
    let mut line = format!("  nu = {:.9}", record.nu);
    if seconds {
        line.push_str(&format!(" (t = {:.9} s)", params.nu_to_seconds(record.nu)));
    }
    line.push_str(&format!("  {}", record.kind));
    if let (Some(pre), Some(post)) = (record.pre_axis, record.post_axis) {
        line.push_str(&format!("  axis {pre} -> {post}"));
    }
    line
}

fn cmd_discord(args: DiscordArgs) -> Result<(), CliError> {
    let resolved = resolve_common(
        &ChannelArgs::default(),
        &args.state,
        &args.config,
        None,
        None,
        None,
        None,
        1.0,
    )?;
    let state = state_from(&resolved)?;
    let spectrum = state.spectrum();
    let (chi_value, chi_axis) = state.chi();
    println!(
        "state: c = ({}, {}, {})",
        fmt_f64(state.c1()),
        fmt_f64(state.c2()),
        fmt_f64(state.c3())
    );
    println!(
        "spectrum (psi+, psi-, phi+, phi-) = ({}, {}, {}, {})",
        fmt_f64(spectrum.psi_plus),
        fmt_f64(spectrum.psi_minus),
        fmt_f64(spectrum.phi_plus),
        fmt_f64(spectrum.phi_minus)
    );
    let info = mutual_information_closed(&state);
    let classical = classical_correlation_closed(&state);
    let discord = discord_closed(&state);
    println!("mutual_info         = {}", fmt_f64(info));
    println!("classical_corr      = {}", fmt_f64(classical));
    println!("discord             = {}", fmt_f64(discord));
    println!("concurrence         = {}", fmt_f64(concurrence(&state)));
    println!(
        "rel_entropy_discord = {}",
        fmt_f64(relative_entropy_discord(&state)?)
    );
    println!(
        "chi                 = {} (axis {})",
        fmt_f64(chi_value),
        chi_axis.index()
    );
    println!("q                   = {}", fmt_f64(spectrum.q()));

    if args.brute_force {
        let grid = OptimizerGrid::default();
        let rho = state.to_density_matrix();
        let (c_opt, basis) = classical_correlation_optimized(&rho, &grid)?;
        let (d_opt, _) = discord_optimized(&rho, &grid)?;
        println!(
            "brute-force scan [{} x {} grid + refinement]:",
            grid.n_theta(),
            grid.n_phi()
        );
        println!(
            "  classical_corr = {} (theta = {:.9}, phi = {:.9})",
            fmt_f64(c_opt),
            basis.theta(),
            basis.phi()
        );
        println!("  discord        = {}", fmt_f64(d_opt));
        println!(
            "  agreement: |closed - scanned| = {:.3e} (C), {:.3e} (D)",
            (classical - c_opt).abs(),
            (discord - d_opt).abs()
        );
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    if let Some(csv_path) = &args.csv {
        let report = validate::validate_csv(csv_path)?;
        for line in &report.lines {
            println!("{line}");
        }
        return if report.pass {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "CSV re-check failed for {}",
                csv_path.display()
            )))
        };
    }

    let resolved = resolve_common(
        &args.channel,
        &StateArgs::default(),
        &args.config,
        args.nu_max,
        None,
        args.seed,
        None,
        5.0,
    )?;
    let params = channel_from(&resolved)?;
    let mut settings = OracleSettings::standard(params, resolved.nu_max, resolved.seed);
    settings.points = args.points;
    settings.volterra_step = args.step;
    settings.rk4_step = args.rk4_step;
    settings.mc_samples = args.mc_samples;
    settings.mc_points = args.mc_points;
    settings.corrupt_lambda_sign = args.corrupt_lambda_sign;
    if settings.points == 0 {
        return Err(CliError::Config("points must be positive".to_string()));
    }
    if settings.mc_points == 0 || settings.mc_samples < 2 {
        return Err(CliError::Config(
            "mc-points must be positive and mc-samples at least 2".to_string(),
        ));
    }
    let report = validate::run_oracle_validation(&settings)?;
    for line in &report.lines {
        println!("{line}");
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Validation(
            "decay validation failed; see report above".to_string(),
        ))
    }
}
