//! Independent oracles for the coherence decay function.
//!
//! Two routes reconstruct `L(nu)` without using the closed form:
//!
//! 1. **Memory-kernel integration.** The coherence obeys the
//!    integro-differential equation (in dimensionless time `nu = t/2tau`)
//!
//!    ```text
//!    y'(nu) = -(4 a tau)^2 * int_0^nu e^{-2(nu - u)} y(u) du,   y(0) = 1
//!    ```
//!
//!    solved either by fixed-step trapezoidal Volterra quadrature (the
//!    exponential kernel admits an O(1) history recurrence) or through the
//!    equivalent local form `y'' + 2 y' + (4 a tau)^2 y = 0`, `y(0) = 1`,
//!    `y'(0) = 0`, advanced with classical fourth-order Runge-Kutta.
//!
//! 2. **Monte Carlo telegraph averaging.** Sample random telegraph
//!    trajectories (coin-flip initial sign, Poisson flips at rate
//!    `1/(2 tau)`), accumulate the dephasing phase `phi(t) = int_0^t G(s) ds`
//!    and estimate `L = < cos 2 phi >` with a standard error.
//!
//! Sampling is deterministic: every public entry point takes an explicit
//! 64-bit seed, each trajectory derives its generator from the seed and the
//! trajectory index alone, and reductions run in fixed index order — so
//! results are identical regardless of how many worker threads run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};

/// Trajectories per deterministic accumulation chunk. Fixing the chunk
/// boundaries fixes the floating-point summation order.
const MC_CHUNK: usize = 1024;

/// Integration scheme for the memory-kernel equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Trapezoidal quadrature of the Volterra integral term combined with a
    /// trapezoidal (Crank-Nicolson) update of the coherence. Second order.
    #[default]
    VolterraTrapezoid,
    /// Classical RK4 on the equivalent damped-oscillator form. Fourth order.
    OdeRungeKutta4,
}

impl Scheme {
    /// Nominal error-reduction factor when the step is halved.
    pub fn order_factor(self) -> f64 {
        match self {
            Scheme::VolterraTrapezoid => 4.0,
            Scheme::OdeRungeKutta4 => 16.0,
        }
    }
}

/// Configuration of a fixed-step integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub max_nu: f64,
    pub scheme: Scheme,
}

impl IntegratorConfig {
    /// Validate a configuration: positive finite step not exceeding the
    /// integration horizon.
    pub fn new(step: f64, max_nu: f64, scheme: Scheme) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParam(format!("step must be positive, got {step}")));
        }
        if !(max_nu.is_finite() && max_nu > 0.0) {
            return Err(Error::InvalidParam(format!(
                "max_nu must be positive, got {max_nu}"
            )));
        }
        if step > max_nu {
            return Err(Error::InvalidParam(format!(
                "step {step} exceeds integration horizon {max_nu}"
            )));
        }
        Ok(Self { step, max_nu, scheme })
    }
}

/// The decay function sampled on the uniform integration grid
/// `nu_i = i * step`.
#[derive(Debug, Clone)]
pub struct SampledDecay {
    step: f64,
    values: Vec<f64>,
}

impl SampledDecay {
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of samples (grid points including `nu = 0`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid time of sample `i`.
    pub fn nu_at(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    /// Sample `i`.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// All samples.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation at arbitrary `nu` inside the sampled range.
    pub fn value_at(&self, nu: f64) -> Result<f64> {
        let max_nu = self.nu_at(self.values.len() - 1);
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::NegativeTime { nu });
        }
        if nu > max_nu * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::InvalidParam(format!(
                "nu = {nu} beyond sampled horizon {max_nu}"
            )));
        }
        let x = (nu / self.step).min((self.values.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        Ok(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }
}

/// Integrate the memory-kernel equation for the coherence, returning the
/// decay function sampled on the configuration grid.
///
/// The run aborts with [`Error::IntegratorUnstable`] if the estimate leaves
/// the physical range `|L| <= 1 + 1e-6`, which indicates the step is too
/// large for the requested parameters.
pub fn integrate_memory_kernel(
    params: &ChannelParams,
    cfg: &IntegratorConfig,
) -> Result<SampledDecay> {
    let h = cfg.step;
    let n = (cfg.max_nu / h).round().max(1.0) as usize;
    let k = params.four_a_tau().powi(2);
    let mut values = Vec::with_capacity(n + 1);
    values.push(1.0);

    match cfg.scheme {
        Scheme::VolterraTrapezoid => {
            // z_n tracks int_0^{nu_n} e^{-2(nu_n - u)} y(u) du; the
            // exponential kernel turns the full history into one recurrence:
            //   z_n = d z_{n-1} + (h/2)(d y_{n-1} + y_n),  d = e^{-2h}.
            // Crank-Nicolson for y then gives a linear solve per step.
            let d = (-2.0 * h).exp();
            let denom = 1.0 + k * h * h / 4.0;
            let mut y = 1.0;
            let mut z = 0.0;
            for i in 1..=n {
                let rhs = y - (k * h / 2.0) * (1.0 + d) * z - (k * h * h / 4.0) * d * y;
                let y_next = rhs / denom;
                z = d * z + (h / 2.0) * (d * y + y_next);
                y = y_next;
                check_stable(y, i as f64 * h)?;
                values.push(y);
            }
        }
        Scheme::OdeRungeKutta4 => {
            // State (y, v): y' = v, v' = -2v - k y.
            let f = |y: f64, v: f64| (v, -2.0 * v - k * y);
            let (mut y, mut v) = (1.0, 0.0);
            for i in 1..=n {
                let (k1y, k1v) = f(y, v);
                let (k2y, k2v) = f(y + 0.5 * h * k1y, v + 0.5 * h * k1v);
                let (k3y, k3v) = f(y + 0.5 * h * k2y, v + 0.5 * h * k2v);
                let (k4y, k4v) = f(y + h * k3y, v + h * k3v);
                y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
                v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
                check_stable(y, i as f64 * h)?;
                values.push(y);
            }
        }
    }
    Ok(SampledDecay { step: h, values })
}

fn check_stable(y: f64, nu: f64) -> Result<()> {
    if !y.is_finite() || y.abs() > 1.0 + 1e-6 {
        Err(Error::IntegratorUnstable { nu, value: y.abs() })
    } else {
        Ok(())
    }
}

/// One realisation of the random telegraph signal on `[0, t_max]`:
/// `G(t) = a * s0 * (-1)^{n(t)}` with `n(t)` the number of flips up to `t`.
#[derive(Debug, Clone)]
pub struct TelegraphTrajectory {
    amplitude: f64,
    initial_sign: f64,
    flip_times: Vec<f64>,
    t_max: f64,
}

impl TelegraphTrajectory {
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Initial sign of the signal, `+1` or `-1`.
    pub fn initial_sign(&self) -> f64 {
        self.initial_sign
    }

    /// Strictly increasing flip times inside `(0, t_max)`.
    pub fn flip_times(&self) -> &[f64] {
        &self.flip_times
    }

    pub fn flip_count(&self) -> usize {
        self.flip_times.len()
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Signal value at time `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let flips = self.flip_times.partition_point(|&f| f <= t);
        let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
        self.amplitude * self.initial_sign * sign
    }

    /// Accumulated phase `phi(t) = int_0^t G(s) ds` for each time in the
    /// sorted grid `times`.
    pub fn phases_at(&self, times: &[f64]) -> Vec<f64> {
        let mut phases = Vec::with_capacity(times.len());
        let mut phase = 0.0;
        let mut seg_start = 0.0;
        let mut sign = self.initial_sign;
        let mut flip_iter = self.flip_times.iter().copied().peekable();
        for &t in times {
            while let Some(&f) = flip_iter.peek() {
                if f <= t {
                    phase += self.amplitude * sign * (f - seg_start);
                    seg_start = f;
                    sign = -sign;
                    flip_iter.next();
                } else {
                    break;
                }
            }
            phases.push(phase + self.amplitude * sign * (t - seg_start));
        }
        phases
    }
}

/// Sample one telegraph trajectory on `[0, t_max]` from an explicit seed.
pub fn sample_telegraph(params: &ChannelParams, t_max: f64, seed: u64) -> Result<TelegraphTrajectory> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::NegativeTime { nu: t_max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_with_rng(params, t_max, &mut rng))
}

fn sample_with_rng(params: &ChannelParams, t_max: f64, rng: &mut ChaCha8Rng) -> TelegraphTrajectory {
    // Flips form a Poisson process with mean count t / (2 tau).
    let rate = 1.0 / (2.0 * params.tau());
    let exp = Exp::new(rate).expect("positive rate");
    let initial_sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let mut flip_times = Vec::new();
    let mut t = exp.sample(rng);
    while t < t_max {
        flip_times.push(t);
        t += exp.sample(rng);
    }
    TelegraphTrajectory {
        amplitude: params.a(),
        initial_sign,
        flip_times,
        t_max,
    }
}

/// Monte Carlo estimate of the decay function at one grid time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub nu: f64,
    pub mean: f64,
    pub std_error: f64,
}

/// Estimate `L(nu) = < cos 2 phi(t) >` over `n_samples` telegraph
/// trajectories at each requested dimensionless time.
///
/// Trajectory `i` draws from a generator derived from `(seed, i)` only, and
/// partial sums are combined in fixed chunk order, so the output is
/// bit-identical for a given seed regardless of thread count.
pub fn monte_carlo_lambda(
    params: &ChannelParams,
    n_samples: usize,
    nu_grid: &[f64],
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if n_samples < 2 {
        return Err(Error::InvalidParam(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let mut t_grid = Vec::with_capacity(nu_grid.len());
    for &nu in nu_grid {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::NegativeTime { nu });
        }
        t_grid.push(params.nu_to_seconds(nu));
    }
    if !t_grid.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::InvalidParam("nu grid must be sorted ascending".into()));
    }
    let t_max = t_grid.last().copied().unwrap_or(0.0);
    let n_points = t_grid.len();
    let n_chunks = n_samples.div_ceil(MC_CHUNK);

    // Per-chunk sums of cos(2 phi) and its square, accumulated sequentially
    // inside each chunk.
    let chunk_sums: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * MC_CHUNK;
            let hi = ((chunk + 1) * MC_CHUNK).min(n_samples);
            let mut sum = vec![0.0; n_points];
            let mut sum_sq = vec![0.0; n_points];
            for i in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let traj = sample_with_rng(params, t_max, &mut rng);
                for (j, phi) in traj.phases_at(&t_grid).into_iter().enumerate() {
                    let x = (2.0 * phi).cos();
                    sum[j] += x;
                    sum_sq[j] += x * x;
                }
            }
            (sum, sum_sq)
        })
        .collect();

    let mut sum = vec![0.0; n_points];
    let mut sum_sq = vec![0.0; n_points];
    for (s, s2) in &chunk_sums {
        for j in 0..n_points {
            sum[j] += s[j];
            sum_sq[j] += s2[j];
        }
    }

    let n = n_samples as f64;
    Ok((0..n_points)
        .map(|j| {
            let mean = sum[j] / n;
            let var = ((sum_sq[j] / n) - mean * mean).max(0.0);
            McEstimate {
                nu: nu_grid[j],
                mean,
                std_error: (var / (n - 1.0)).sqrt(),
            }
        })
        .collect())
}
