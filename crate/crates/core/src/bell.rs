//! Bell-diagonal two-qubit states and their closed-form correlation
//! measures.
//!
//! A Bell-diagonal state is fixed by the correlation vector
//! `c = (c1, c2, c3)`:
//!
//! ```text
//! rho = (1/4) [ I + sum_i c_i sigma_i (x) sigma_i ]
//! ```
//!
//! Its eigenvectors are the four Bell states
//! `|Psi+-> = (|00> +- |11>)/sqrt(2)` and `|Phi+-> = (|01> +- |10>)/sqrt(2)`
//! with eigenvalues
//!
//! ```text
//! lambda_Psi_pm = [1 +- c1 -+ c2 + c3] / 4
//! lambda_Phi_pm = [1 +- c1 +- c2 - c3] / 4
//! ```
//!
//! For this family the total, classical and quantum correlations all reduce
//! to closed forms in `c` — with `chi = max_i |c_i|`:
//!
//! ```text
//! I(rho) = 2 + sum_k lambda_k log2 lambda_k
//! C(rho) = sum_{k=1,2} (1 + (-1)^k chi)/2 * log2(1 + (-1)^k chi)
//! D(rho) = I(rho) - C(rho)
//! ```
//!
//! all in bits. Physicality of `c` is equivalent to all four eigenvalues
//! being non-negative, i.e. `c` lying in the tetrahedron with vertices
//! `(1,1,-1), (1,-1,1), (-1,1,1), (-1,-1,-1)`.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::{Axis, ComplexMatrix};

/// A `c` component may undershoot physicality by at most this much before
/// the state is rejected (matches the eigenvalue clip of the density layer).
pub const PHYSICALITY_TOL: f64 = 1e-12;
/// Residual tolerance for membership in the frozen-discord family.
pub const FAMILY_TOL: f64 = 1e-9;

/// The four Bell states. The declaration order `Psi+, Phi+, Phi-, Psi-` is
/// the fixed tie-breaking order used whenever eigenvalues are sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PsiPlus,
    PhiPlus,
    PhiMinus,
    PsiMinus,
}

impl BellState {
    /// All Bell states in tie-breaking order.
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiMinus,
    ];

    /// The state vector in the computational basis `|00>, |01>, |10>, |11>`.
    pub fn vector(self) -> [Complex64; 4] {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellState::PsiPlus => [s, z, z, s],
            BellState::PsiMinus => [s, z, z, -s],
            BellState::PhiPlus => [z, s, s, z],
            BellState::PhiMinus => [z, s, -s, z],
        }
    }

    /// Rank-one projector onto the Bell state.
    pub fn projector(self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vector()).expect("Bell vectors are valid")
    }

    /// Human-readable label.
    pub fn label(self) -> &'static str {
        match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        }
    }
}

/// Eigenvalues of a Bell-diagonal state, keyed by Bell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl BellSpectrum {
    /// Eigenvalue associated with a Bell state.
    pub fn value(&self, state: BellState) -> f64 {
        match state {
            BellState::PsiPlus => self.psi_plus,
            BellState::PsiMinus => self.psi_minus,
            BellState::PhiPlus => self.phi_plus,
            BellState::PhiMinus => self.phi_minus,
        }
    }

    /// `(state, eigenvalue)` pairs in tie-breaking order.
    pub fn pairs(&self) -> [(BellState, f64); 4] {
        BellState::ALL.map(|s| (s, self.value(s)))
    }

    /// Pairs sorted by decreasing eigenvalue; ties keep the fixed Bell
    /// order `Psi+, Phi+, Phi-, Psi-` (stable sort on a fixed-order list).
    pub fn sorted_desc(&self) -> [(BellState, f64); 4] {
        let mut pairs = self.pairs();
        pairs.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite eigenvalues"));
        pairs
    }

    /// Largest eigenvalue.
    pub fn max_value(&self) -> f64 {
        self.sorted_desc()[0].1
    }

    /// Sum of the two largest eigenvalues (the weight `q` of the dominant
    /// Bell pair).
    pub fn q(&self) -> f64 {
        let s = self.sorted_desc();
        s[0].1 + s[1].1
    }

    /// `sum_k lambda_k log2 lambda_k` with zero eigenvalues skipped.
    pub fn sum_lambda_log(&self) -> f64 {
        self.pairs()
            .iter()
            .map(|&(_, l)| if l > 0.0 { l * l.log2() } else { 0.0 })
            .sum()
    }
}

/// Correlation vector `(c1, c2, c3)` of a physical Bell-diagonal state.
///
/// Construction validates both the unit cube bound on each component and
/// positivity of the induced spectrum; every `CVector` therefore represents
/// a genuine quantum state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVector {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl CVector {
    /// Validate and build a correlation vector.
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (axis, value) in [(1usize, c1), (2, c2), (3, c3)] {
            if !value.is_finite() || value.abs() > 1.0 + PHYSICALITY_TOL {
                return Err(Error::ComponentOutOfRange { axis, value });
            }
        }
        let candidate = Self { c1, c2, c3 };
        let spectrum = candidate.spectrum();
        for (state, lambda) in spectrum.pairs() {
            if lambda < -PHYSICALITY_TOL {
                return Err(Error::NegativeEigenvalue {
                    which: format!("lambda_{}", state.label()),
                    value: lambda,
                });
            }
        }
        Ok(candidate)
    }

    /// Reconstruct the correlation vector from a Bell spectrum.
    pub fn from_spectrum(s: &BellSpectrum) -> Result<Self> {
        let c1 = (s.psi_plus - s.psi_minus) + (s.phi_plus - s.phi_minus);
        let c2 = (s.phi_plus - s.phi_minus) - (s.psi_plus - s.psi_minus);
        let c3 = (s.psi_plus + s.psi_minus) - (s.phi_plus + s.phi_minus);
        Self::new(c1, c2, c3)
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Component along an axis.
    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.c1,
            Axis::Y => self.c2,
            Axis::Z => self.c3,
        }
    }

    /// Components as an array indexed by axis order.
    pub fn components(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Eigenvalues of the state over the Bell basis.
    pub fn spectrum(&self) -> BellSpectrum {
        let Self { c1, c2, c3 } = *self;
        BellSpectrum {
            psi_plus: (1.0 + c1 - c2 + c3) / 4.0,
            psi_minus: (1.0 - c1 + c2 + c3) / 4.0,
            phi_plus: (1.0 + c1 + c2 - c3) / 4.0,
            phi_minus: (1.0 - c1 - c2 - c3) / 4.0,
        }
    }

    /// The 4x4 density matrix `(1/4)[I + sum_i c_i sigma_i (x) sigma_i]`.
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let Self { c1, c2, c3 } = *self;
        let q = |re: f64| Complex64::new(re / 4.0, 0.0);
        let mat = ComplexMatrix::from_rows4([
            [q(1.0 + c3), q(0.0), q(0.0), q(c1 - c2)],
            [q(0.0), q(1.0 - c3), q(c1 + c2), q(0.0)],
            [q(0.0), q(c1 + c2), q(1.0 - c3), q(0.0)],
            [q(c1 - c2), q(0.0), q(0.0), q(1.0 + c3)],
        ]);
        DensityMatrix::new(mat).expect("validated c-vector yields a valid state")
    }

    /// Largest absolute component and its axis; ties resolve to the lowest
    /// axis index.
    pub fn chi(&self) -> (f64, Axis) {
        let mut best = (self.c1.abs(), Axis::X);
        for axis in [Axis::Y, Axis::Z] {
            let a = self.component(axis).abs();
            if a > best.0 {
                best = (a, axis);
            }
        }
        best
    }
}

/// `sum_{k=1,2} (1 + (-1)^k x)/2 * log2(1 + (-1)^k x)`, the building block
/// of the closed-form classical correlation; equals `1 - H2((1+x)/2)`.
fn correlation_term(x: f64) -> f64 {
    let mut total = 0.0;
    for sign in [-1.0, 1.0] {
        let v: f64 = 1.0 + sign * x;
        if v > 0.0 {
            total += v / 2.0 * v.log2();
        }
    }
    total
}

/// Closed-form classical correlation `C(rho)` in bits.
pub fn classical_correlation_closed(c: &CVector) -> f64 {
    correlation_term(c.chi().0)
}

/// Closed-form total mutual information `I(rho) = 2 + sum lambda log2 lambda`.
pub fn mutual_information_closed(c: &CVector) -> f64 {
    2.0 + c.spectrum().sum_lambda_log()
}

/// Closed-form quantum discord `D(rho) = I(rho) - C(rho)`, clamped against
/// round-off level negatives.
pub fn discord_closed(c: &CVector) -> f64 {
    let d = mutual_information_closed(c) - classical_correlation_closed(c);
    if d < 0.0 && d > -1e-9 {
        0.0
    } else {
        d
    }
}

/// Concurrence `max(0, 2 max_k lambda_k - 1)` of a Bell-diagonal state.
pub fn concurrence(c: &CVector) -> f64 {
    (2.0 * c.spectrum().max_value() - 1.0).max(0.0)
}

/// Build a member of the frozen-discord family for dephasing noise along
/// `sigma_3`: the component on `free_axis` (1 or 2) starts at `k`, the other
/// transverse component at `-c3 * k`, and `c3` is the longitudinal value.
/// Requires `|k| <= 1` and `|c3| < |k|`.
pub fn frozen_family_state(k: f64, c3: f64, free_axis: Axis) -> Result<CVector> {
    if free_axis == Axis::Z {
        return Err(Error::InvalidParam(
            "frozen family free axis must be 1 or 2 (transverse to the noise axis)".into(),
        ));
    }
    if !k.is_finite() || k.abs() > 1.0 {
        return Err(Error::ComponentOutOfRange {
            axis: free_axis.index(),
            value: k,
        });
    }
    if c3.abs() >= k.abs() {
        return Err(Error::FamilyCondition {
            k_abs: k.abs(),
            c3_abs: c3.abs(),
        });
    }
    match free_axis {
        Axis::X => CVector::new(k, -c3 * k, c3),
        Axis::Y => CVector::new(-c3 * k, k, c3),
        Axis::Z => unreachable!(),
    }
}

/// Split the mutual information of a frozen-family state into its constant
/// and decaying parts:
///
/// ```text
/// I = f(c3) + f(c_free)      with f(x) = sum_k (1 + (-1)^k x)/2 log2(...)
/// ```
///
/// Returns `(constant_term, decaying_term)`. The state must satisfy the
/// family constraint `c_other = -c3 * c_free` within [`FAMILY_TOL`]; both
/// transverse assignments are accepted, preferring `c1` as the free
/// component when both fit.
pub fn frozen_family_mutual_information(c: &CVector) -> Result<(f64, f64)> {
    let r1 = (c.c2() + c.c3() * c.c1()).abs(); // c1 free, c2 = -c3 c1
    let r2 = (c.c1() + c.c3() * c.c2()).abs(); // c2 free, c1 = -c3 c2
    if r1 <= FAMILY_TOL {
        Ok((correlation_term(c.c3()), correlation_term(c.c1())))
    } else if r2 <= FAMILY_TOL {
        Ok((correlation_term(c.c3()), correlation_term(c.c2())))
    } else {
        Err(Error::NotInFamily {
            residual: r1.min(r2),
        })
    }
}
