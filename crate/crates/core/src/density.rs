//! Density operators and the standard information-theoretic primitives.
//!
//! Every quantity is computed through one shared primitive — the Hermitian
//! eigendecomposition from [`crate::matrix`] — so that entropies, relative
//! entropies and trace distances cannot drift apart numerically. All
//! entropies are in bits (base-2 logarithms) with the convention
//! `0 * log2(0) = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{kronecker, ComplexMatrix};

/// Tolerance for the Hermiticity check of a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance for the unit-trace check of a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above `-EIGENVALUE_CLIP` are treated as non-negative noise
/// and clipped to zero inside entropy sums.
pub const EIGENVALUE_CLIP: f64 = 1e-10;
/// Eigenvalues of a reference state below this threshold count as outside
/// its support when evaluating relative entropies.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Weight a state may place outside the reference support before the
/// relative entropy is declared infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Which tensor factor of a two-qubit operator to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite within tolerance, of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix as a density operator.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if let Some((row, col)) = mat.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        let dev = mat.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let eigenvalues = mat.hermitian_eigenvalues()?;
        for (k, &w) in eigenvalues.iter().enumerate() {
            if w < -EIGENVALUE_CLIP {
                return Err(Error::NegativeEigenvalue {
                    which: k.to_string(),
                    value: w,
                });
            }
        }
        Ok(Self { mat })
    }

    /// Maximally mixed state of dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let mat = ComplexMatrix::identity(dim)?.scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self::new(mat)
    }

    /// Pure state |v><v| from a state vector of length 2 or 4.
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::projector(v)?)
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Dimension (2 or 4).
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Entry accessor.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat.get(row, col)
    }

    /// Eigenvalues clipped into `[0, 1]`, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let vals = self.mat.hermitian_eigenvalues()?;
        Ok(vals.into_iter().map(|w| w.max(0.0)).collect())
    }
}

/// Shannon term `p * log2(p)` with the `0 log 0 = 0` convention.
fn p_log2_p(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Von Neumann entropy `S(rho) = -Tr rho log2 rho` in bits.
///
/// Eigenvalues within [`EIGENVALUE_CLIP`] of zero contribute nothing.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for w in rho.spectrum()? {
        if w > EIGENVALUE_CLIP {
            s -= p_log2_p(w);
        }
    }
    Ok(s.max(0.0))
}

/// Partial trace of a two-qubit operator over one factor, without the
/// density-matrix validation — usable on unnormalised operators such as
/// projected (pre-measurement-renormalisation) states.
///
/// Index convention: basis state `|a>_A (x) |b>_B` occupies row `2a + b`.
pub fn partial_trace_raw(mat: &ComplexMatrix, traced_out: Subsystem) -> Result<ComplexMatrix> {
    if mat.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: mat.dim(),
        });
    }
    ComplexMatrix::from_fn(2, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..2 {
            acc += match traced_out {
                // Tr_B: keep the A indices, sum the B diagonal.
                Subsystem::B => mat.get(2 * i + k, 2 * j + k),
                // Tr_A: keep the B indices, sum the A diagonal.
                Subsystem::A => mat.get(2 * k + i, 2 * k + j),
            };
        }
        acc
    })
}

/// Partial trace of a two-qubit state over one factor.
pub fn partial_trace(rho: &DensityMatrix, traced_out: Subsystem) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_raw(rho.matrix(), traced_out)?)
}

/// Tensor product of two single-qubit states, giving the two-qubit product
/// state with subsystem `a` on the slow index.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.dim().max(b.dim()),
        });
    }
    DensityMatrix::new(kronecker(a.matrix(), b.matrix()))
}

/// Relative entropy `S(rho || sigma) = Tr rho log2 rho - Tr rho log2 sigma`.
///
/// When `rho` places more than [`SUPPORT_LEAK_TOL`] of weight outside the
/// support of `sigma` the divergence is genuinely infinite; the function
/// then returns `f64::INFINITY` rather than erroring, so callers can treat
/// the result as an (extended-real) distance.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let (r_vals, r_vecs) = rho.matrix().hermitian_eigen()?;
    let (s_vals, s_vecs) = sigma.matrix().hermitian_eigen()?;
    let dim = rho.dim();

    // -S(rho) term.
    let mut total: f64 = r_vals
        .iter()
        .map(|&w| if w > EIGENVALUE_CLIP { p_log2_p(w) } else { 0.0 })
        .sum();

    // -Tr rho log2 sigma expanded over both eigenbases:
    // sum_{i,j} r_i |<v_i|w_j>|^2 log2 s_j.
    for j in 0..dim {
        let s_j = s_vals[j].max(0.0);
        let w_j = s_vecs.column(j);
        // <w_j| rho |w_j> = sum_i r_i |<v_i|w_j>|^2.
        let mut weight = 0.0;
        for i in 0..dim {
            if r_vals[i] <= EIGENVALUE_CLIP {
                continue;
            }
            let v_i = r_vecs.column(i);
            let overlap: Complex64 = v_i
                .iter()
                .zip(w_j.iter())
                .map(|(v, w)| v.conj() * w)
                .sum();
            weight += r_vals[i] * overlap.norm_sqr();
        }
        if s_j < SUPPORT_TOL {
            if weight > SUPPORT_LEAK_TOL {
                return Ok(f64::INFINITY);
            }
            // Weight at round-off level outside the support is discarded.
        } else {
            total -= weight * s_j.log2();
        }
    }
    // Clamp round-off level negatives; the divergence is non-negative.
    Ok(if total < 0.0 && total > -1e-9 {
        0.0
    } else {
        total
    })
}

/// Trace distance `D(rho, sigma) = (1/2) Tr |rho - sigma|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    let vals = diff.hermitian_eigenvalues()?;
    Ok(0.5 * vals.iter().map(|w| w.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{identity2, pauli, Axis};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn entropy_of_mixed_and_pure() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_relative_eq!(von_neumann_entropy(&mixed).unwrap(), 1.0, epsilon = 1e-12);
        let mixed4 = DensityMatrix::maximally_mixed(4).unwrap();
        assert_relative_eq!(von_neumann_entropy(&mixed4).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(
            von_neumann_entropy(&plus_state()).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_of_rank_two_mixture() {
        // 0.8 |psi+><psi+| + 0.2 |phi+><phi+| has entropy
        // -(0.8 log2 0.8 + 0.2 log2 0.2) = 0.721928094887.
        let s = 0.5f64.sqrt();
        let psi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let phi = [c(0.0, 0.0), c(s, 0.0), c(s, 0.0), c(0.0, 0.0)];
        let rho = DensityMatrix::new(
            &ComplexMatrix::projector(&psi).unwrap().scale(c(0.8, 0.0))
                + &ComplexMatrix::projector(&phi).unwrap().scale(c(0.2, 0.0)),
        )
        .unwrap();
        assert_relative_eq!(
            von_neumann_entropy(&rho).unwrap(),
            0.721928094887362,
            epsilon = 1e-12
        );
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = plus_state();
        let ab = tensor(&a, &b).unwrap();
        let back_a = partial_trace(&ab, Subsystem::B).unwrap();
        let back_b = partial_trace(&ab, Subsystem::A).unwrap();
        assert!(back_a.matrix().max_abs_diff(a.matrix()) < 1e-14);
        assert!(back_b.matrix().max_abs_diff(b.matrix()) < 1e-14);
    }

    #[test]
    fn partial_trace_of_entangled_state_is_mixed() {
        let s = 0.5f64.sqrt();
        let bell = DensityMatrix::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let red = partial_trace(&bell, Subsystem::B).unwrap();
        assert!(red
            .matrix()
            .max_abs_diff(DensityMatrix::maximally_mixed(2).unwrap().matrix())
            < 1e-14);
    }

    #[test]
    fn relative_entropy_examples() {
        // S(|0><0| || I/2) = 1 bit.
        let zero = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_relative_eq!(
            relative_entropy(&zero, &mixed).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // Identical states: zero divergence.
        assert_relative_eq!(
            relative_entropy(&mixed, &mixed).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Support violation: S(I/2 || |0><0|) is infinite (not an error).
        assert_eq!(relative_entropy(&mixed, &zero).unwrap(), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_nonnegative_on_random_pairs() {
        // Deterministic sweep over Bloch-vector mixtures.
        for k in 0..50 {
            let t = k as f64 / 49.0;
            let r1 = 0.9 * t;
            let r2 = 0.9 * (1.0 - t);
            let rho = DensityMatrix::new(
                &identity2().scale(c(0.5, 0.0)) + &pauli(Axis::X).scale(c(0.5 * r1, 0.0)),
            )
            .unwrap();
            let sigma = DensityMatrix::new(
                &identity2().scale(c(0.5, 0.0)) + &pauli(Axis::Z).scale(c(0.5 * r2, 0.0)),
            )
            .unwrap();
            let d = relative_entropy(&rho, &sigma).unwrap();
            assert!(d >= 0.0, "negative divergence {d} at k={k}");
        }
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let one = DensityMatrix::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(trace_distance(&zero, &zero).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_of_dephased_pair_is_decay_factor() {
        // |+> and |-> dephased to off-diagonal weight lambda/2 keep trace
        // distance |lambda|.
        for &lambda in &[0.9, 0.3, -0.5, 0.0] {
            let rho = DensityMatrix::new(ComplexMatrix::from_rows2([
                [c(0.5, 0.0), c(0.5 * lambda, 0.0)],
                [c(0.5 * lambda, 0.0), c(0.5, 0.0)],
            ]))
            .unwrap();
            let sigma = DensityMatrix::new(ComplexMatrix::from_rows2([
                [c(0.5, 0.0), c(-0.5 * lambda, 0.0)],
                [c(-0.5 * lambda, 0.0), c(0.5, 0.0)],
            ]))
            .unwrap();
            assert_relative_eq!(
                trace_distance(&rho, &sigma).unwrap(),
                lambda.abs(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejects_invalid_density_matrices() {
        // Non-Hermitian.
        let m = ComplexMatrix::from_rows2([[c(0.5, 0.0), c(0.3, 0.0)], [c(0.1, 0.0), c(0.5, 0.0)]]);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
        // Wrong trace.
        let m = identity2();
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::TraceNotOne { .. })
        ));
        // Negative eigenvalue: diag(1.2, -0.2).
        let m = ComplexMatrix::from_rows2([[c(1.2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]]);
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NegativeEigenvalue { .. })
        ));
        // Non-finite entry.
        let m = ComplexMatrix::from_rows2([
            [c(f64::NAN, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NonFinite { .. })));
    }
}
