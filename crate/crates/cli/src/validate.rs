//! Self-validation: cross-checks the closed-form decay against independent
//! numerical routes, and re-checks emitted CSV rows against the state
//! invariants they are supposed to satisfy.

use std::path::Path;

use dephasim_core::{
    bell::{
        classical_correlation_closed, concurrence, discord_closed, mutual_information_closed,
    },
    geometry::relative_entropy_discord,
    kernel::{integrate_memory_kernel, monte_carlo_lambda},
    Axis, CVector, ChannelParams, DampingBranch, IntegratorConfig, Scheme,
};

use crate::output::CSV_HEADER;
use crate::CliError;

/// Largest allowed gap between the closed-form decay and an integrated route.
pub const INTEGRATOR_TOL: f64 = 1e-6;
/// Largest allowed Monte-Carlo z-score.
pub const Z_LIMIT: f64 = 3.0;
/// Row-level tolerance for exactly-recomputable columns.
const ROW_TOL: f64 = 1e-9;
/// Row-level tolerance for the relative-entropy discord column, which goes
/// through an eigendecomposition rather than a closed form.
const ROW_RE_TOL: f64 = 1e-8;

/// A printable validation report plus its overall verdict.
#[derive(Debug)]
pub struct Report {
    pub lines: Vec<String>,
    pub pass: bool,
}

impl Report {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    fn fail(&mut self, line: String) {
        self.pass = false;
        self.lines.push(line);
    }
}

/// Settings for the oracle-comparison mode.
pub struct OracleSettings {
    pub params: ChannelParams,
    pub nu_max: f64,
    pub points: usize,
    pub volterra_step: f64,
    pub rk4_step: f64,
    pub mc_samples: usize,
    pub mc_points: usize,
    pub seed: u64,
    /// Test hook: negate the closed-form value inside every comparison so the
    /// report is guaranteed to fail. Used to prove the checks can fail.
    pub corrupt_lambda_sign: bool,
}

impl OracleSettings {
    pub fn standard(params: ChannelParams, nu_max: f64, seed: u64) -> Self {
        Self {
            params,
            nu_max,
            points: 1000,
            volterra_step: 1e-5,
            rk4_step: 2.5e-4,
            mc_samples: 100_000,
            mc_points: 10,
            seed,
            corrupt_lambda_sign: false,
        }
    }
}

fn closed_decay(settings: &OracleSettings, nu: f64) -> Result<f64, CliError> {
    let value = settings.params.decay(nu)?;
    Ok(if settings.corrupt_lambda_sign {
        -value
    } else {
        value
    })
}

fn check_integrator(
    settings: &OracleSettings,
    scheme: Scheme,
    step: f64,
    report: &mut Report,
) -> Result<(), CliError> {
    let config = IntegratorConfig::new(step, settings.nu_max, scheme)?;
    let sampled = integrate_memory_kernel(&settings.params, &config)?;
    let mut worst = (0.0_f64, 0.0, 0.0, 0.0); // (diff, nu, closed, integrated)
    for i in 0..=settings.points {
        let nu = settings.nu_max * i as f64 / settings.points as f64;
        let closed = closed_decay(settings, nu)?;
        let integrated = sampled.value_at(nu)?;
        let diff = (closed - integrated).abs();
        if diff > worst.0 {
            worst = (diff, nu, closed, integrated);
        }
    }
    let label = match scheme {
        Scheme::VolterraTrapezoid => "volterra-trapezoid",
        Scheme::OdeRungeKutta4 => "ode-rk4",
    };
    let verdict = if worst.0 < INTEGRATOR_TOL { "PASS" } else { "FAIL" };
    let line = format!(
        "integrator check [{label}, step {step:e}]: max |closed - integrated| = {:.3e} \
         at nu = {:.6} (closed = {:.12e}, integrated = {:.12e}) -> {verdict} (tolerance {INTEGRATOR_TOL:e})",
        worst.0, worst.1, worst.2, worst.3
    );
    if worst.0 < INTEGRATOR_TOL {
        report.push(line);
    } else {
        report.fail(line);
    }
    Ok(())
}

fn check_monte_carlo(settings: &OracleSettings, report: &mut Report) -> Result<(), CliError> {
    let nu_grid: Vec<f64> = (1..=settings.mc_points)
        .map(|k| settings.nu_max * k as f64 / settings.mc_points as f64)
        .collect();
    let estimates = monte_carlo_lambda(&settings.params, settings.mc_samples, &nu_grid, settings.seed)?;
    report.push(format!(
        "monte carlo check [{} trajectories, seed {}]:",
        settings.mc_samples, settings.seed
    ));
    let mut worst_z = 0.0_f64;
    let mut worst_nu = 0.0_f64;
    for est in &estimates {
        let closed = closed_decay(settings, est.nu)?;
        let diff = (est.mean - closed).abs();
        let z = if est.std_error > 0.0 {
            diff / est.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if z > worst_z {
            worst_z = z;
            worst_nu = est.nu;
        }
        report.push(format!(
            "  nu = {:.6}: closed = {:.9e}, estimate = {:.9e}, std_error = {:.3e}, z = {:.3}",
            est.nu, closed, est.mean, est.std_error, z
        ));
    }
    let verdict = if worst_z <= Z_LIMIT { "PASS" } else { "FAIL" };
    let line = format!(
        "  max z = {worst_z:.3} at nu = {worst_nu:.6} (limit {Z_LIMIT}) -> {verdict}"
    );
    if worst_z <= Z_LIMIT {
        report.push(line);
    } else {
        report.fail(line);
    }
    Ok(())
}

fn check_monotonicity(settings: &OracleSettings, report: &mut Report) -> Result<(), CliError> {
    if settings.params.branch() == DampingBranch::Underdamped {
        report.push("monotonicity check: skipped (underdamped decay oscillates)".to_string());
        return Ok(());
    }
    let mut prev = closed_decay(settings, 0.0)?.abs();
    let mut worst: Option<(f64, f64, f64)> = None; // (rise, nu, |value|)
    for i in 1..=settings.points {
        let nu = settings.nu_max * i as f64 / settings.points as f64;
        let current = closed_decay(settings, nu)?.abs();
        let rise = current - prev;
        if rise > 1e-12 && worst.map_or(true, |w| rise > w.0) {
            worst = Some((rise, nu, current));
        }
        prev = current;
    }
    match worst {
        None => report.push(
            "monotonicity check: |decay| non-increasing on the sample grid -> PASS".to_string(),
        ),
        Some((rise, nu, value)) => report.fail(format!(
            "monotonicity check: |decay| rises by {rise:.3e} at nu = {nu:.6} (|value| = {value:.9e}) -> FAIL"
        )),
    }
    Ok(())
}

/// Runs every oracle comparison and assembles the report.
pub fn run_oracle_validation(settings: &OracleSettings) -> Result<Report, CliError> {
    let mut report = Report::new();
    report.push(format!(
        "decay validation: a = {} 1/s, tau = {} s, axis {}, 4*a*tau = {} ({})",
        settings.params.a(),
        settings.params.tau(),
        settings.params.axis().index(),
        settings.params.four_a_tau(),
        match settings.params.branch() {
            DampingBranch::Underdamped => "underdamped",
            DampingBranch::Overdamped => "overdamped",
            DampingBranch::Critical => "critically damped",
        }
    ));
    check_integrator(settings, Scheme::VolterraTrapezoid, settings.volterra_step, &mut report)?;
    check_integrator(settings, Scheme::OdeRungeKutta4, settings.rk4_step, &mut report)?;
    check_monte_carlo(settings, &mut report)?;
    check_monotonicity(settings, &mut report)?;
    report.push(format!(
        "overall: {}",
        if report.pass { "PASS" } else { "FAIL" }
    ));
    Ok(report)
}

/// Re-validates a previously written sweep CSV, recomputing every derived
/// column from the state columns.
pub fn validate_csv(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut report = Report::new();
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        Some(header) => {
            report.fail(format!(
                "header mismatch:\n  expected: {CSV_HEADER}\n  found:    {header}"
            ));
            report.push("overall: FAIL".to_string());
            return Ok(report);
        }
        None => {
            report.fail("empty file: missing header".to_string());
            report.push("overall: FAIL".to_string());
            return Ok(report);
        }
    }

    let mut nus: Vec<f64> = Vec::new();
    let mut checked = 0usize;
    let mut failures = 0usize;
    for (line_no, line) in lines.enumerate() {
        let row_no = line_no + 2; // 1-based, after the header
        match check_row(line) {
            Ok(nu) => {
                nus.push(nu);
                checked += 1;
            }
            Err(msg) => {
                failures += 1;
                if failures <= 5 {
                    report.fail(format!("row {row_no}: {msg}"));
                } else {
                    report.pass = false;
                }
            }
        }
    }
    if failures > 5 {
        report.push(format!("... and {} more failing rows", failures - 5));
    }

    if nus.len() >= 2 {
        let h = (nus[nus.len() - 1] - nus[0]) / (nus.len() - 1) as f64;
        for (i, nu) in nus.iter().enumerate() {
            if (nu - (nus[0] + h * i as f64)).abs() > 1e-9 {
                report.fail(format!(
                    "row {}: nu = {nu} breaks uniform spacing (expected {})",
                    i + 2,
                    nus[0] + h * i as f64
                ));
                break;
            }
        }
    }

    report.push(format!(
        "validated {checked} rows ({failures} failures)"
    ));
    report.push(format!(
        "overall: {}",
        if report.pass { "PASS" } else { "FAIL" }
    ));
    Ok(report)
}

/// Checks one data line; returns its nu on success, a diagnostic on failure.
fn check_row(line: &str) -> Result<f64, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 16 {
        return Err(format!("expected 16 columns, found {}", fields.len()));
    }
    let num = |i: usize| -> Result<f64, String> {
        fields[i]
            .parse::<f64>()
            .map_err(|_| format!("column {} is not a number: `{}`", i + 1, fields[i]))
    };
    let nu = num(0)?;
    let state = CVector::new(num(1)?, num(2)?, num(3)?)
        .map_err(|e| format!("state columns fail physicality: {e}"))?;
    let axis_index = fields[13]
        .parse::<usize>()
        .map_err(|_| format!("chi_axis is not an integer: `{}`", fields[13]))?;
    let axis =
        Axis::from_index(axis_index).map_err(|_| format!("chi_axis out of range: {axis_index}"))?;

    let spectrum = state.spectrum();
    let check = |name: &str, file_value: f64, recomputed: f64, tol: f64| -> Result<(), String> {
        if (file_value - recomputed).abs() > tol {
            Err(format!(
                "{name} disagrees with recomputation: file {file_value:.12e}, recomputed {recomputed:.12e}"
            ))
        } else {
            Ok(())
        }
    };
    check("lambda_psi_plus", num(4)?, spectrum.psi_plus, ROW_TOL)?;
    check("lambda_psi_minus", num(5)?, spectrum.psi_minus, ROW_TOL)?;
    check("lambda_phi_plus", num(6)?, spectrum.phi_plus, ROW_TOL)?;
    check("lambda_phi_minus", num(7)?, spectrum.phi_minus, ROW_TOL)?;
    let mutual = num(8)?;
    let classical = num(9)?;
    let discord = num(10)?;
    check("mutual_info", mutual, mutual_information_closed(&state), ROW_TOL)?;
    check("classical_corr", classical, classical_correlation_closed(&state), ROW_TOL)?;
    check("discord", discord, discord_closed(&state), ROW_TOL)?;
    if (discord - (mutual - classical)).abs() > ROW_TOL {
        return Err(format!(
            "additivity broken: discord {discord:.12e} vs mutual_info - classical_corr {:.12e}",
            mutual - classical
        ));
    }
    check("concurrence", num(11)?, concurrence(&state), ROW_TOL)?;
    let chi_value = num(12)?;
    let (recomputed_chi, _) = state.chi();
    check("chi_value", chi_value, recomputed_chi, ROW_TOL)?;
    // The named axis must achieve the maximum (ties may name either side).
    check(
        "chi_axis",
        state.component(axis).abs(),
        recomputed_chi,
        ROW_TOL,
    )?;
    check("q", num(14)?, spectrum.q(), ROW_TOL)?;
    let re_discord =
        relative_entropy_discord(&state).map_err(|e| format!("relative entropy failed: {e}"))?;
    check("rel_entropy_discord", num(15)?, re_discord, ROW_RE_TOL)?;
    Ok(nu)
}
