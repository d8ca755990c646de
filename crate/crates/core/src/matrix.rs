//! Dense complex matrices of dimension 2 and 4, plus the Pauli operators.
//!
//! The simulator only ever manipulates single-qubit (2x2) and two-qubit
//! (4x4) operators, so the matrix type is deliberately small: a thin wrapper
//! over a dynamically sized `nalgebra` matrix that exposes exactly the
//! operations the physics needs (products, adjoints, Kronecker products and
//! a Hermitian eigendecomposition).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap for the Hermitian eigensolver; generous for 4x4 problems.
const EIGEN_MAX_ITER: usize = 500;

/// One of the three spatial directions, identified with the Pauli operators
/// sigma_1 = sigma_x, sigma_2 = sigma_y, sigma_3 = sigma_z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// All axes in index order 1, 2, 3.
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Conventional index of the axis: 1, 2 or 3.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    /// Inverse of [`Axis::index`].
    pub fn from_index(i: usize) -> Result<Axis> {
        match i {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(Error::InvalidParam(format!(
                "axis index must be 1, 2 or 3, got {i}"
            ))),
        }
    }

    /// The other two axes, in increasing index order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Dense complex matrix restricted to dimensions 2 and 4.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `dim` (2 or 4).
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            data: DMatrix::zeros(dim, dim),
        })
    }

    /// Identity matrix of dimension `dim` (2 or 4).
    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            data: DMatrix::identity(dim, dim),
        })
    }

    /// Build a matrix by evaluating `f(row, col)` over all entries.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            data: DMatrix::from_fn(dim, dim, f),
        })
    }

    /// Build a 2x2 matrix from entries in row-major order.
    pub fn from_rows2(e: [[Complex64; 2]; 2]) -> Self {
        Self {
            data: DMatrix::from_fn(2, 2, |i, j| e[i][j]),
        }
    }

    /// Build a 4x4 matrix from entries in row-major order.
    pub fn from_rows4(e: [[Complex64; 4]; 4]) -> Self {
        Self {
            data: DMatrix::from_fn(4, 4, |i, j| e[i][j]),
        }
    }

    /// Rank-one projector |v><v| onto the given (not necessarily normalised)
    /// state vector of length 2 or 4.
    pub fn projector(v: &[Complex64]) -> Result<Self> {
        check_dim(v.len())?;
        let vec = DVector::from_column_slice(v);
        let norm2: f64 = vec.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidParam("zero state vector".into()));
        }
        let outer = &vec * vec.adjoint() / Complex64::new(norm2, 0.0);
        Ok(Self { data: outer })
    }

    /// Matrix dimension (2 or 4).
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    /// Set entry at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[(row, col)] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Scale every entry by a complex factor.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: &self.data * factor,
        }
    }

    /// Entry-wise maximum absolute deviation from another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.data - &other.data)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute deviation from the adjoint; zero for Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `true` when all entries are finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Index of the first non-finite entry, if any.
    pub(crate) fn first_non_finite(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let z = self.data[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns the real eigenvalues in ascending order together with the
    /// matching orthonormal eigenvectors (as matrix columns). The input is
    /// symmetrised as `(M + M^dag)/2` first so that round-off level
    /// deviations cannot poison the solver.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let herm = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = nalgebra::linalg::SymmetricEigen::try_new(herm, f64::EPSILON, EIGEN_MAX_ITER)
            .ok_or(Error::EigenFailure)?;
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = ComplexMatrix {
            data: DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
                eig.eigenvectors[(i, order[j])]
            }),
        };
        Ok((values, vectors))
    }

    /// Eigenvalues only, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// Column `j` as a vector of entries.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.data[(i, j)]).collect()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 2,
            got: dim,
        })
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data * &rhs.data,
        }
    }
}

/// Kronecker (tensor) product; a 2x2 with a 2x2 gives a 4x4 with the first
/// factor owning the slow (most significant) index.
pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        data: a.data.kronecker(&b.data),
    }
}

/// Pauli operator along `axis`.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis::X => ComplexMatrix::from_rows2([[z, one], [one, z]]),
        Axis::Y => ComplexMatrix::from_rows2([[z, -i], [i, z]]),
        Axis::Z => ComplexMatrix::from_rows2([[one, z], [z, -one]]),
    }
}

/// 2x2 identity.
pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("2 is a valid dimension")
}

/// 4x4 identity.
pub fn identity4() -> ComplexMatrix {
    ComplexMatrix::identity(4).expect("4 is a valid dimension")
}
