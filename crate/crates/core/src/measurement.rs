//! Projective measurements and the brute-force correlation optimizer.
//!
//! Classical correlation is defined through local projective measurements on
//! subsystem B:
//!
//! ```text
//! C(rho) = max_basis [ S(rho_A) - sum_k p_k S(rho_{A|k}) ]
//! ```
//!
//! and quantum discord is the gap `D = I - C` to the total mutual
//! information. The maximization here is numerical — a dense scan over the
//! measurement Bloch sphere followed by Nelder-Mead refinement — and never
//! consults the closed forms in [`crate::bell`], so the two routes stay
//! independent checks of each other.
//!
//! The optimizer's inner loop uses a reduced 2x2 path: conditioning a
//! two-qubit state on the rank-one outcome `|b><b|` of B leaves subsystem A
//! in `M / tr M` with `M_{aa'} = <b| rho^{(aa')} |b>` (the `2x2` B-blocks of
//! `rho`), whose entropy follows from trace and determinant alone. The
//! full-matrix route via [`condition_on_measurement`] is retained and tested
//! against it.

use num_complex::Complex64;

use crate::density::{DensityMatrix, Subsystem};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Measurement outcomes with probability below this threshold carry no
/// conditional state.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-12;

/// Nelder-Mead iterations used to polish the best grid point.
const REFINE_ITERS: usize = 50;

/// An orthonormal projective measurement basis on one qubit, parameterised
/// by Bloch angles: `|b+> = (cos t/2, e^{i f} sin t/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "measurement angles must be finite, got ({theta}, {phi})"
            )));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Bloch vector of the `+` outcome.
    pub fn bloch_vector(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// The two outcome kets as column pairs `(b0, b1)`.
    fn kets(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = ((self.theta / 2.0).sin(), (self.theta / 2.0).cos());
        let e = Complex64::new(0.0, self.phi).exp();
        [
            [Complex64::new(c, 0.0), e * s],
            [Complex64::new(s, 0.0), -e * c],
        ]
    }

    /// Rank-one projectors for the two outcomes; they are orthogonal and sum
    /// to the identity.
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        self.kets().map(|b| {
            ComplexMatrix::projector(&b).expect("measurement kets are normalised")
        })
    }
}

/// One measurement outcome: its probability and, when the probability is
/// resolvable, the conditional state of the unmeasured subsystem.
#[derive(Debug, Clone)]
pub struct ConditionalOutcome {
    pub probability: f64,
    /// `None` when the outcome probability is below
    /// [`ZERO_PROBABILITY_TOL`], in which case the conditional state is
    /// undefined.
    pub state: Option<DensityMatrix>,
}

/// The post-measurement ensemble on subsystem A after measuring B.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    outcomes: Vec<ConditionalOutcome>,
}

impl ConditionalEnsemble {
    pub fn outcomes(&self) -> &[ConditionalOutcome] {
        &self.outcomes
    }

    /// Average conditional entropy `sum_k p_k S(rho_{A|k})`; zero-probability
    /// outcomes contribute nothing.
    pub fn conditional_entropy(&self) -> Result<f64> {
        let mut total = 0.0;
        for outcome in &self.outcomes {
            if let Some(state) = &outcome.state {
                total += outcome.probability * crate::density::von_neumann_entropy(state)?;
            }
        }
        Ok(total)
    }
}

/// Measure subsystem B of a two-qubit state in the given basis, via the full
/// matrix route: project, trace out B, renormalise.
pub fn condition_on_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<ConditionalEnsemble> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let id2 = crate::matrix::identity2();
    let mut outcomes = Vec::with_capacity(2);
    for proj in basis.projectors() {
        let big = crate::matrix::kronecker(&id2, &proj);
        let sub = &(&big * rho.matrix()) * &big;
        let reduced = crate::density::partial_trace_raw(&sub, Subsystem::B)?;
        let probability = reduced.trace().re;
        let state = if probability < ZERO_PROBABILITY_TOL {
            None
        } else {
            Some(DensityMatrix::new(
                reduced.scale(Complex64::new(1.0 / probability, 0.0)),
            )?)
        };
        outcomes.push(ConditionalOutcome { probability, state });
    }
    Ok(ConditionalEnsemble { outcomes })
}

/// Classical correlation extracted by one fixed measurement basis,
/// `S(rho_A) - sum_k p_k S(rho_{A|k})`, through the full matrix route.
pub fn classical_correlation_for_basis(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let rho_a = crate::density::partial_trace(rho, Subsystem::B)?;
    let ensemble = condition_on_measurement(rho, basis)?;
    Ok(crate::density::von_neumann_entropy(&rho_a)? - ensemble.conditional_entropy()?)
}

/// Quantum mutual information `S(A) + S(B) - S(AB)` computed from the
/// density matrix and its reductions.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let rho_a = crate::density::partial_trace(rho, Subsystem::B)?;
    let rho_b = crate::density::partial_trace(rho, Subsystem::A)?;
    Ok(crate::density::von_neumann_entropy(&rho_a)?
        + crate::density::von_neumann_entropy(&rho_b)?
        - crate::density::von_neumann_entropy(rho)?)
}

/// Resolution of the measurement-sphere scan preceding refinement.
///
/// Polar angle takes `n_theta` points on `[0, pi]` inclusive; azimuth takes
/// `n_phi` points on `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizerGrid {
    n_theta: usize,
    n_phi: usize,
}

impl OptimizerGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 3 || n_phi < 3 {
            return Err(Error::InvalidParam(format!(
                "optimizer grid {n_theta}x{n_phi} too coarse; need at least 3x3"
            )));
        }
        Ok(Self { n_theta, n_phi })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }
}

impl Default for OptimizerGrid {
    /// 2-degree resolution: dense enough that quadratic refinement from the
    /// best cell converges to the global optimum for the smooth landscapes
    /// produced by two-qubit states.
    fn default() -> Self {
        Self { n_theta: 91, n_phi: 181 }
    }
}

/// Average conditional entropy for the basis `(theta, phi)` via the reduced
/// 2x2 path. `rho` must be 4x4; entropies are in bits.
fn conditional_entropy_fast(rho: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let basis = MeasurementBasis { theta, phi };
    let mut total = 0.0;
    for b in basis.kets() {
        // M_{aa'} = sum_{ij} conj(b_i) rho[2a+i][2a'+j] b_j
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for ap in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        acc += b[i].conj() * rho.get(2 * a + i, 2 * ap + j) * b[j];
                    }
                }
                m[a][ap] = acc;
            }
        }
        let p = (m[0][0] + m[1][1]).re;
        if p < ZERO_PROBABILITY_TOL {
            continue;
        }
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
        // Eigenvalues of M/p are (1 +- sqrt(1 - 4 det/p^2)) / 2.
        let disc = (1.0 - 4.0 * det / (p * p)).max(0.0).sqrt();
        total += p * binary_entropy((1.0 + disc) / 2.0);
    }
    total
}

/// Binary Shannon entropy in bits, safe at the endpoints.
fn binary_entropy(x: f64) -> f64 {
    let mut h = 0.0;
    for v in [x, 1.0 - x] {
        if v > 1e-15 {
            h -= v * v.log2();
        }
    }
    h
}

/// Maximise the classical correlation over projective measurements on B.
///
/// Returns the maximum and the basis realising it. The scan keeps the first
/// (lowest-index) grid point on exact ties and the refinement result is only
/// accepted on strict improvement, so the output is deterministic.
pub fn classical_correlation_optimized(
    rho: &DensityMatrix,
    grid: &OptimizerGrid,
) -> Result<(f64, MeasurementBasis)> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    let entropy_a =
        crate::density::von_neumann_entropy(&crate::density::partial_trace(rho, Subsystem::B)?)?;
    let raw = rho.matrix();
    let objective = |theta: f64, phi: f64| conditional_entropy_fast(raw, theta, phi);

    let dtheta = std::f64::consts::PI / (grid.n_theta - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / grid.n_phi as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid.n_theta {
        let theta = i as f64 * dtheta;
        for j in 0..grid.n_phi {
            let phi = j as f64 * dphi;
            let value = objective(theta, phi);
            if value < best.0 {
                best = (value, theta, phi);
            }
        }
    }

    let refined = nelder_mead_min(
        &objective,
        (best.1, best.2),
        (dtheta / 2.0, dphi / 2.0),
        REFINE_ITERS,
    );
    if refined.0 < best.0 {
        best = (refined.0, refined.1, refined.2);
    }
    Ok((entropy_a - best.0, MeasurementBasis { theta: best.1, phi: best.2 }))
}

/// Quantum discord via the numerical optimizer: total mutual information
/// minus the optimized classical correlation. Values in `(-1e-9, 0)` are
/// rounded to zero; anything lower is reported as is.
pub fn discord_optimized(
    rho: &DensityMatrix,
    grid: &OptimizerGrid,
) -> Result<(f64, MeasurementBasis)> {
    let info = mutual_information(rho)?;
    let (classical, basis) = classical_correlation_optimized(rho, grid)?;
    let mut d = info - classical;
    if d < 0.0 && d > -1e-9 {
        d = 0.0;
    }
    Ok((d, basis))
}

/// Minimal deterministic Nelder-Mead in two variables. The objective is
/// smooth and periodic, so no domain clamping is needed.
fn nelder_mead_min(
    f: &dyn Fn(f64, f64) -> f64,
    start: (f64, f64),
    spread: (f64, f64),
    iters: usize,
) -> (f64, f64, f64) {
    let mut simplex = [
        (start.0, start.1),
        (start.0 + spread.0, start.1),
        (start.0, start.1 + spread.1),
    ];
    let mut values = simplex.map(|(t, p)| f(t, p));

    for _ in 0..iters {
        // Order best -> worst. Three points, so sort the triple directly.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite objective"));
        let (b, m, w) = (idx[0], idx[1], idx[2]);
        let centroid = (
            (simplex[b].0 + simplex[m].0) / 2.0,
            (simplex[b].1 + simplex[m].1) / 2.0,
        );
        let reflect = (
            centroid.0 + (centroid.0 - simplex[w].0),
            centroid.1 + (centroid.1 - simplex[w].1),
        );
        let fr = f(reflect.0, reflect.1);
        if fr < values[b] {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - simplex[w].0),
                centroid.1 + 2.0 * (centroid.1 - simplex[w].1),
            );
            let fe = f(expand.0, expand.1);
            if fe < fr {
                simplex[w] = expand;
                values[w] = fe;
            } else {
                simplex[w] = reflect;
                values[w] = fr;
            }
        } else if fr < values[m] {
            simplex[w] = reflect;
            values[w] = fr;
        } else {
            let contract = (
                centroid.0 + 0.5 * (simplex[w].0 - centroid.0),
                centroid.1 + 0.5 * (simplex[w].1 - centroid.1),
            );
            let fc = f(contract.0, contract.1);
            if fc < values[w] {
                simplex[w] = contract;
                values[w] = fc;
            } else {
                // Shrink toward the best vertex.
                for k in 0..3 {
                    if k != b {
                        simplex[k] = (
                            simplex[b].0 + 0.5 * (simplex[k].0 - simplex[b].0),
                            simplex[b].1 + 0.5 * (simplex[k].1 - simplex[b].1),
                        );
                        values[k] = f(simplex[k].0, simplex[k].1);
                    }
                }
            }
        }
    }
    let mut best = 0;
    for k in 1..3 {
        if values[k] < values[best] {
            best = k;
        }
    }
    (values[best], simplex[best].0, simplex[best].1)
}
