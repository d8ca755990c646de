//! Time sweeps: per-step correlation rows plus the event list for the run.

use dephasim_core::{
    bell::{
        classical_correlation_closed, concurrence, discord_closed, mutual_information_closed,
    },
    events::{detect_esd, detect_transitions},
    geometry::relative_entropy_discord,
    Axis, CVector, ChannelParams, TransitionEvent,
};
use serde::Serialize;

use crate::CliError;

/// Validated description of one sweep run.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub params: ChannelParams,
    pub initial: CVector,
    pub nu_max: f64,
    pub steps: usize,
    pub seed: u64,
    /// Grid density handed to the event detectors (at least 10^4 points).
    pub event_grid: usize,
}

impl SweepConfig {
    pub fn new(
        params: ChannelParams,
        initial: CVector,
        nu_max: f64,
        steps: usize,
        seed: u64,
        event_grid: usize,
    ) -> Result<Self, CliError> {
        if !nu_max.is_finite() || nu_max <= 0.0 {
            return Err(CliError::Config(format!(
                "nu_max must be positive and finite, got {nu_max}"
            )));
        }
        if steps < 2 {
            return Err(CliError::Config(format!(
                "steps must be at least 2, got {steps}"
            )));
        }
        Ok(Self {
            params,
            initial,
            nu_max,
            steps,
            seed,
            event_grid,
        })
    }
}

/// One row of sweep output: the evolved state and every derived measure.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub nu: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub lambda_psi_plus: f64,
    pub lambda_psi_minus: f64,
    pub lambda_phi_plus: f64,
    pub lambda_phi_minus: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub chi_value: f64,
    pub chi_axis: Axis,
    pub q: f64,
    pub rel_entropy_discord: f64,
}

impl SweepRow {
    /// Computes every column for the state at time `nu`.
    pub fn compute(params: &ChannelParams, initial: &CVector, nu: f64) -> Result<Self, CliError> {
        let c = params.evolve_cvector(initial, nu)?;
        let spectrum = c.spectrum();
        let (chi_value, chi_axis) = c.chi();
        let rel_entropy_discord = relative_entropy_discord(&c)?;
        Ok(Self {
            nu,
            c1: c.c1(),
            c2: c.c2(),
            c3: c.c3(),
            lambda_psi_plus: spectrum.psi_plus,
            lambda_psi_minus: spectrum.psi_minus,
            lambda_phi_plus: spectrum.phi_plus,
            lambda_phi_minus: spectrum.phi_minus,
            mutual_info: mutual_information_closed(&c),
            classical_corr: classical_correlation_closed(&c),
            discord: discord_closed(&c),
            concurrence: concurrence(&c),
            chi_value,
            chi_axis,
            q: spectrum.q(),
            rel_entropy_discord,
        })
    }
}

/// JSON shape for one detected event.
#[derive(Debug, Clone, Serialize)]
pub struct EventRecord {
    pub nu: f64,
    pub kind: String,
    pub pre_axis: Option<usize>,
    pub post_axis: Option<usize>,
}

impl From<&TransitionEvent> for EventRecord {
    fn from(e: &TransitionEvent) -> Self {
        Self {
            nu: e.nu,
            kind: e.kind.label().to_string(),
            pre_axis: e.pre_axis.map(|a| a.index()),
            post_axis: e.post_axis.map(|a| a.index()),
        }
    }
}

/// Output of a sweep: `steps + 1` uniformly spaced rows and the merged,
/// time-ordered event list (sudden transitions plus entanglement
/// death/revival events) over the same interval.
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub events: Vec<EventRecord>,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput, CliError> {
    let mut rows = Vec::with_capacity(config.steps + 1);
    for i in 0..=config.steps {
        let nu = config.nu_max * i as f64 / config.steps as f64;
        rows.push(SweepRow::compute(&config.params, &config.initial, nu)?);
    }

    let grid = config.event_grid.max(config.steps);
    let mut events = detect_transitions(&config.params, &config.initial, config.nu_max, grid)?;
    events.extend(detect_esd(
        &config.params,
        &config.initial,
        config.nu_max,
        grid,
    )?);
    events.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    Ok(SweepOutput {
        rows,
        events: events.iter().map(EventRecord::from).collect(),
    })
}
