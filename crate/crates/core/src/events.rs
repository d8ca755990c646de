//! Detection of sudden transitions, entanglement sudden death and revival,
//! and the information-backflow witness of non-Markovianity.
//!
//! A sudden transition happens when the dominant correlation component —
//! the argmax defining `chi` — switches axis. The same instant admits a
//! second, independent characterisation: the second- and third-largest
//! Bell-spectrum weights cross, changing which projectors the closest
//! classical state equalises. [`detect_transitions`] locates events with the
//! first detector, reruns the second, and refuses to answer if the two
//! disagree, so a bug in either route cannot go unnoticed.
//!
//! All detectors share the same discipline: scan a uniform grid dense enough
//! to resolve the decay-function oscillation, bracket each sign change, then
//! bisect the bracket below [`BRACKET_TOL`].

use crate::bell::{BellState, CVector};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::matrix::Axis;

/// Root brackets are bisected until narrower than this.
pub const BRACKET_TOL: f64 = 1e-9;
/// The two transition detectors must agree on every event time within this.
pub const EVENT_AGREEMENT_TOL: f64 = 1e-8;
/// Minimum grid resolution accepted by the detectors.
pub const MIN_GRID: usize = 10_000;
/// Under oscillatory decay, the grid must place at least this many steps per
/// oscillation period.
const MIN_STEPS_PER_PERIOD: usize = 20;
/// Increases of the decay magnitude below this floor are round-off, not
/// information backflow.
const FLAT_FLOOR: f64 = 1e-13;

/// What happened at a detected event time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// The argmax axis of the dominant correlation component switched.
    ChiArgmaxSwitch,
    /// The second- and third-largest Bell-spectrum weights crossed — the
    /// same transition seen by the spectrum-ordering detector.
    Lambda23Crossing,
    /// Concurrence reached zero from above (entanglement sudden death).
    Esd,
    /// Concurrence returned above zero (entanglement revival).
    EntanglementRevival,
}

impl EventKind {
    /// Stable machine-readable label.
    pub fn label(self) -> &'static str {
        match self {
            EventKind::ChiArgmaxSwitch => "chi-argmax-switch",
            EventKind::Lambda23Crossing => "lambda23-crossing",
            EventKind::Esd => "esd",
            EventKind::EntanglementRevival => "entanglement-revival",
        }
    }
}

/// One detected event, with the bisection bracket that pinned it down.
/// Axis fields are populated for `chi` switches only.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEvent {
    pub nu: f64,
    pub kind: EventKind,
    pub pre_axis: Option<Axis>,
    pub post_axis: Option<Axis>,
    pub bracket: (f64, f64),
}

/// Non-Markovianity witness: total information backflow and the intervals
/// on which it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Sum of the increases of the decay-function magnitude.
    pub measure: f64,
    /// Maximal intervals on which the magnitude rises, in order.
    pub revival_intervals: Vec<(f64, f64)>,
}

/// Validate grid parameters shared by all detectors and return the step.
fn grid_step(params: &ChannelParams, nu_max: f64, grid_n: usize) -> Result<f64> {
    if !(nu_max.is_finite() && nu_max > 0.0) {
        return Err(Error::InvalidParam(format!(
            "nu_max must be positive, got {nu_max}"
        )));
    }
    if grid_n < MIN_GRID {
        return Err(Error::InvalidParam(format!(
            "grid_n must be at least {MIN_GRID}, got {grid_n}"
        )));
    }
    let step = nu_max / grid_n as f64;
    if let Some(mu) = params.mu() {
        let period = 2.0 * std::f64::consts::PI / mu;
        if step * MIN_STEPS_PER_PERIOD as f64 > period {
            return Err(Error::GridTooCoarse {
                period,
                step,
                min_steps: MIN_STEPS_PER_PERIOD,
            });
        }
    }
    Ok(step)
}

/// Bisect a bracketed sign change of `f` with `f(lo) <= 0 < f(hi)` until the
/// bracket is narrower than [`BRACKET_TOL`].
fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    while hi - lo > BRACKET_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

fn event_at(bracket: (f64, f64), kind: EventKind, pre: Option<Axis>, post: Option<Axis>) -> TransitionEvent {
    TransitionEvent {
        nu: 0.5 * (bracket.0 + bracket.1),
        kind,
        pre_axis: pre,
        post_axis: post,
        bracket,
    }
}

/// Sudden-transition detection through the `chi` argmax.
///
/// The incumbent axis keeps its claim through exact ties; a switch is
/// recorded only when a challenger's component strictly exceeds the
/// incumbent's, which prevents chattering in degenerate configurations.
fn chi_switch_events(
    params: &ChannelParams,
    c0: &CVector,
    nu_max: f64,
    grid_n: usize,
) -> Result<Vec<TransitionEvent>> {
    let step = grid_step(params, nu_max, grid_n)?;
    let comp_abs = |nu: f64| -> Result<[f64; 3]> {
        let c = params.evolve_cvector(c0, nu)?;
        Ok([c.c1().abs(), c.c2().abs(), c.c3().abs()])
    };
    let idx = |axis: Axis| axis.index() - 1;

    let mut incumbent = c0.chi().1;
    let mut events = Vec::new();
    let mut prev_nu = 0.0;
    for k in 1..=grid_n {
        let nu = step * k as f64;
        let comps = comp_abs(nu)?;
        let incumbent_value = comps[idx(incumbent)];
        let mut challenger: Option<Axis> = None;
        for axis in Axis::ALL {
            if axis != incumbent && comps[idx(axis)] > incumbent_value {
                let stronger = challenger
                    .map(|cur| comps[idx(axis)] > comps[idx(cur)])
                    .unwrap_or(true);
                if stronger {
                    challenger = Some(axis);
                }
            }
        }
        if let Some(new_axis) = challenger {
            let f = |x: f64| -> Result<f64> {
                let c = comp_abs(x)?;
                Ok(c[idx(new_axis)] - c[idx(incumbent)])
            };
            let bracket = bisect(&f, prev_nu, nu)?;
            events.push(event_at(
                bracket,
                EventKind::ChiArgmaxSwitch,
                Some(incumbent),
                Some(new_axis),
            ));
            incumbent = new_axis;
        }
        prev_nu = nu;
    }
    Ok(events)
}

/// Sudden-transition detection through Bell-spectrum ordering: an event is a
/// change in which two projectors carry the largest two weights.
pub fn detect_lambda_crossings(
    params: &ChannelParams,
    c0: &CVector,
    nu_max: f64,
    grid_n: usize,
) -> Result<Vec<TransitionEvent>> {
    let step = grid_step(params, nu_max, grid_n)?;
    let top_pair = |nu: f64| -> Result<[BellState; 2]> {
        let sorted = params.evolve_cvector(c0, nu)?.spectrum().sorted_desc();
        Ok([sorted[0].0, sorted[1].0])
    };
    let same_pair = |a: [BellState; 2], b: [BellState; 2]| -> bool {
        (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0])
    };

    let mut current = top_pair(0.0)?;
    let mut events = Vec::new();
    let mut prev_nu = 0.0;
    for k in 1..=grid_n {
        let nu = step * k as f64;
        let pair = top_pair(nu)?;
        if !same_pair(current, pair) {
            let outgoing = current
                .into_iter()
                .find(|s| !pair.contains(s))
                .expect("pairs differ");
            let incoming = pair
                .into_iter()
                .find(|s| !current.contains(s))
                .expect("pairs differ");
            let f = |x: f64| -> Result<f64> {
                let spectrum = params.evolve_cvector(c0, x)?.spectrum();
                Ok(spectrum.value(incoming) - spectrum.value(outgoing))
            };
            if !(f(prev_nu)? <= 0.0 && f(nu)? > 0.0) {
                return Err(Error::DetectorMismatch(format!(
                    "weight crossing near nu = {nu} is not a strict sign change; \
                     grid may be under-resolving the dynamics"
                )));
            }
            let bracket = bisect(&f, prev_nu, nu)?;
            events.push(event_at(bracket, EventKind::Lambda23Crossing, None, None));
            current = pair;
        }
        prev_nu = nu;
    }
    Ok(events)
}

/// Locate all sudden transitions of the dominant correlation component.
///
/// Runs both the argmax detector and the spectrum-ordering detector and
/// errors with [`Error::DetectorMismatch`] unless they produce the same
/// events within [`EVENT_AGREEMENT_TOL`]; the returned events are the argmax
/// ones (kind `chi-argmax-switch`), which carry the pre/post axes.
pub fn detect_transitions(
    params: &ChannelParams,
    c0: &CVector,
    nu_max: f64,
    grid_n: usize,
) -> Result<Vec<TransitionEvent>> {
    let chi_events = chi_switch_events(params, c0, nu_max, grid_n)?;
    let lambda_events = detect_lambda_crossings(params, c0, nu_max, grid_n)?;
    if chi_events.len() != lambda_events.len() {
        return Err(Error::DetectorMismatch(format!(
            "argmax detector found {} events, spectrum detector found {}",
            chi_events.len(),
            lambda_events.len()
        )));
    }
    for (a, b) in chi_events.iter().zip(&lambda_events) {
        if (a.nu - b.nu).abs() > EVENT_AGREEMENT_TOL {
            return Err(Error::DetectorMismatch(format!(
                "event times disagree: {} vs {}",
                a.nu, b.nu
            )));
        }
    }
    Ok(chi_events)
}

/// Detect entanglement sudden death and revival along the trajectory.
///
/// Events are strict sign changes of `2 lambda_max - 1`; a tangential touch
/// of zero (as for an initially pure Bell state, whose concurrence follows
/// the square of the decay function) produces no event.
pub fn detect_esd(
    params: &ChannelParams,
    c0: &CVector,
    nu_max: f64,
    grid_n: usize,
) -> Result<Vec<TransitionEvent>> {
    let step = grid_step(params, nu_max, grid_n)?;
    let g = |nu: f64| -> Result<f64> {
        Ok(2.0 * params.evolve_cvector(c0, nu)?.spectrum().max_value() - 1.0)
    };
    let sign = |x: f64| -> i8 {
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    };

    let mut events = Vec::new();
    let mut last_sign = sign(g(0.0)?);
    let mut last_sign_nu = 0.0;
    for k in 1..=grid_n {
        let nu = step * k as f64;
        let s = sign(g(nu)?);
        if s == 0 {
            continue;
        }
        if last_sign != 0 && s != last_sign {
            // Orient the objective so it is positive on the `s` side.
            let f = |x: f64| -> Result<f64> { Ok(g(x)? * s as f64) };
            let bracket = bisect(&f, last_sign_nu, nu)?;
            let kind = if s < 0 {
                EventKind::Esd
            } else {
                EventKind::EntanglementRevival
            };
            events.push(event_at(bracket, kind, None, None));
        }
        last_sign = s;
        last_sign_nu = nu;
    }
    Ok(events)
}

/// Golden-section search for the minimum of `f` on `[a, b]`, assuming a
/// single interior minimum. Returns the minimising abscissa.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Information-backflow witness: the total increase of the decay-function
/// magnitude over `[0, nu_max]`, with the maximal intervals of increase.
///
/// A rise still in progress at `nu_max` is counted up to the boundary. The
/// measure is strictly positive exactly when the noise is underdamped
/// (`4 a tau > 1`); overdamped and critical decay are monotone.
pub fn non_markovianity_witness(
    params: &ChannelParams,
    nu_max: f64,
    grid_n: usize,
) -> Result<Witness> {
    let step = grid_step(params, nu_max, grid_n)?;
    let mut values = Vec::with_capacity(grid_n + 1);
    for k in 0..=grid_n {
        values.push(params.decay(step * k as f64)?.abs());
    }
    let abs_decay = |nu: f64| -> f64 {
        params
            .decay(nu)
            .expect("grid times are valid")
            .abs()
    };

    let mut measure = 0.0;
    let mut intervals = Vec::new();
    let mut k = 0;
    while k < grid_n {
        if values[k + 1] > values[k] + FLAT_FLOOR {
            // A rising run starts here; find where it stops.
            let start = k;
            while k < grid_n && values[k + 1] > values[k] + FLAT_FLOOR {
                k += 1;
            }
            let end = k; // values[end] is the last sample of the rise.

            // Refine the endpoints: the true local minimum sits within one
            // step of the run start, the true maximum within one step of the
            // run end — unless the run touches the domain boundary.
            let (lo_nu, lo_val) = if start == 0 {
                (0.0, values[0])
            } else {
                let x = golden_min(
                    &abs_decay,
                    step * (start - 1) as f64,
                    step * (start + 1) as f64,
                );
                (x, abs_decay(x))
            };
            let (hi_nu, hi_val) = if end == grid_n {
                (nu_max, values[grid_n])
            } else {
                let neg = |nu: f64| -> f64 { -abs_decay(nu) };
                let x = golden_min(&neg, step * (end - 1) as f64, step * (end + 1) as f64);
                (x, abs_decay(x))
            };
            measure += (hi_val - lo_val).max(0.0);
            intervals.push((lo_nu, hi_nu));
        } else {
            k += 1;
        }
    }
    Ok(Witness {
        measure,
        revival_intervals: intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const GRID: usize = 10_000;

    fn demo_params() -> ChannelParams {
        ChannelParams::new(1.0, 5.0, Axis::Z).unwrap()
    }

    fn demo_state() -> CVector {
        CVector::new(1.0, -0.6, 0.6).unwrap()
    }

    #[test]
    fn underdamped_multiple_transitions() {
        // Down-switch as the transverse component first decays below the
        // frozen one, then an up/down pair around the first oscillation
        // revival. Times pinned from the closed-form crossing equation.
        let events = detect_transitions(&demo_params(), &demo_state(), 1.0, GRID).unwrap();
        assert_eq!(events.len(), 3);
        let expected_nu = [0.03464440821694, 0.1356446051241, 0.1792287557511];
        let expected_axes = [
            (Axis::X, Axis::Z),
            (Axis::Z, Axis::X),
            (Axis::X, Axis::Z),
        ];
        for ((event, nu), axes) in events.iter().zip(expected_nu).zip(expected_axes) {
            assert_relative_eq!(event.nu, nu, epsilon = 1e-8);
            assert_eq!(event.kind, EventKind::ChiArgmaxSwitch);
            assert_eq!(event.pre_axis, Some(axes.0));
            assert_eq!(event.post_axis, Some(axes.1));
            assert!(event.bracket.0 <= event.nu && event.nu <= event.bracket.1);
            assert!(event.bracket.1 - event.bracket.0 <= BRACKET_TOL);
        }
    }

    #[test]
    fn spectrum_detector_finds_the_same_events() {
        let crossings =
            detect_lambda_crossings(&demo_params(), &demo_state(), 1.0, GRID).unwrap();
        let switches = detect_transitions(&demo_params(), &demo_state(), 1.0, GRID).unwrap();
        assert_eq!(crossings.len(), switches.len());
        for (cross, switch) in crossings.iter().zip(&switches) {
            assert_eq!(cross.kind, EventKind::Lambda23Crossing);
            assert_eq!(cross.pre_axis, None);
            assert!((cross.nu - switch.nu).abs() < EVENT_AGREEMENT_TOL);
        }
    }

    #[test]
    fn dominant_frozen_component_yields_no_events() {
        let params = demo_params();
        let c0 = CVector::new(0.2, -0.2, 0.9).unwrap();
        assert!(detect_transitions(&params, &c0, 1.0, GRID).unwrap().is_empty());
    }

    #[test]
    fn overdamped_single_transition() {
        // Monotone decay crosses the frozen component exactly once.
        let params = ChannelParams::new(0.1, 1.0, Axis::Z).unwrap();
        let events = detect_transitions(&params, &demo_state(), 6.0, GRID).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].pre_axis, Some(Axis::X));
        assert_eq!(events[0].post_axis, Some(Axis::Z));
        // The event sits where the squared decay equals the component ratio.
        let l = params.decay(events[0].nu).unwrap();
        assert_relative_eq!(l * l, 0.6, epsilon = 1e-7);
    }

    #[test]
    fn transverse_noise_axis_permutes_detection() {
        // Same dynamics with noise along X: component 1 is frozen and the
        // transition swaps the roles of the axes.
        let params = ChannelParams::new(0.1, 1.0, Axis::X).unwrap();
        let c0 = CVector::new(0.6, -1.0, 0.6).unwrap();
        let events = detect_transitions(&params, &c0, 6.0, GRID).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].pre_axis, Some(Axis::Y));
        assert_eq!(events[0].post_axis, Some(Axis::X));
    }

    #[test]
    fn esd_deaths_and_revivals() {
        // Concurrence max(0, 0.8 L^2 - 0.2): five deaths and four revivals
        // before permanent extinction (the fifth oscillation peak stays
        // below threshold).
        let events = detect_esd(&demo_params(), &demo_state(), 1.0, GRID).unwrap();
        let expected = [
            (0.05336899941717, EventKind::Esd),
            (0.110770292425, EventKind::EntanglementRevival),
            (0.2053707023112, EventKind::Esd),
            (0.2743041953033, EventKind::EntanglementRevival),
            (0.3559651043329, EventKind::Esd),
            (0.4401242895373, EventKind::EntanglementRevival),
            (0.5042383562632, EventKind::Esd),
            (0.6115061276341, EventKind::EntanglementRevival),
            (0.6469154099021, EventKind::Esd),
        ];
        assert_eq!(events.len(), expected.len());
        for (event, (nu, kind)) in events.iter().zip(expected) {
            assert_relative_eq!(event.nu, nu, epsilon = 1e-8);
            assert_eq!(event.kind, kind);
            assert_eq!(event.pre_axis, None);
            assert_eq!(event.post_axis, None);
        }
        // Extinct at the end of the window.
        let final_c = demo_params()
            .evolve_cvector(&demo_state(), 1.0)
            .unwrap();
        assert_eq!(crate::bell::concurrence(&final_c), 0.0);
    }

    #[test]
    fn separable_trajectory_has_no_esd_events() {
        let c0 = CVector::new(0.35, -0.3, 0.1).unwrap();
        assert!(detect_esd(&demo_params(), &c0, 1.0, GRID).unwrap().is_empty());
    }

    #[test]
    fn tangential_zeros_are_not_events() {
        // Pure Bell state: concurrence is the squared decay function, which
        // touches zero without crossing.
        let c0 = CVector::new(1.0, -1.0, 1.0).unwrap();
        let events = detect_esd(&demo_params(), &c0, 1.0, GRID).unwrap();
        assert!(events.is_empty(), "got {events:?}");
    }

    #[test]
    fn witness_positive_iff_underdamped() {
        let overdamped = ChannelParams::new(0.1, 1.0, Axis::Z).unwrap();
        let w = non_markovianity_witness(&overdamped, 5.0, GRID).unwrap();
        assert_eq!(w.measure, 0.0);
        assert!(w.revival_intervals.is_empty());

        let critical = ChannelParams::new(0.05, 5.0, Axis::Z).unwrap();
        let w = non_markovianity_witness(&critical, 5.0, GRID).unwrap();
        assert_eq!(w.measure, 0.0);

        let w = non_markovianity_witness(&demo_params(), 5.0, GRID).unwrap();
        assert!(w.measure > 0.0);
    }

    #[test]
    fn witness_value_and_intervals() {
        // 31 complete revivals in [0, 5] plus a final rise cut off at the
        // boundary; the total increase is pinned from the exact extrema
        // e^{-n pi / mu} plus the boundary value.
        let params = demo_params();
        let w = non_markovianity_witness(&params, 5.0, GRID).unwrap();
        assert_relative_eq!(w.measure, 5.83166663158614, epsilon = 1e-7);
        assert_eq!(w.revival_intervals.len(), 32);
        let mu = params.mu().unwrap();
        let (lo, hi) = w.revival_intervals[0];
        assert_relative_eq!(lo, 0.0811423505901, epsilon = 1e-6);
        assert_relative_eq!(hi, PI / mu, epsilon = 1e-6);
        // Intervals are ordered and disjoint.
        for pair in w.revival_intervals.windows(2) {
            assert!(pair[0].1 < pair[1].0);
        }
        // The last interval is cut by the boundary.
        assert_eq!(w.revival_intervals.last().unwrap().1, 5.0);
    }

    #[test]
    fn grid_validation_errors() {
        let params = demo_params();
        let c0 = demo_state();
        assert!(matches!(
            detect_transitions(&params, &c0, 1.0, 500),
            Err(Error::InvalidParam(_))
        ));
        // Period 2 pi / mu ~ 0.3146 needs steps <= 0.0157; nu_max = 200
        // over 10^4 points gives 0.02.
        assert!(matches!(
            detect_transitions(&params, &c0, 200.0, GRID),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(detect_transitions(&params, &c0, -1.0, GRID).is_err());
        // Overdamped noise has no period constraint.
        let over = ChannelParams::new(0.1, 1.0, Axis::Z).unwrap();
        assert!(detect_transitions(&over, &c0, 200.0, GRID).is_ok());
    }
}
