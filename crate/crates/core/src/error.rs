//! Error type shared by every module of the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the simulation library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A matrix had a dimension other than the one the operation requires.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A matrix expected to be Hermitian deviated from its adjoint.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// A density matrix trace differed from one beyond tolerance.
    #[error("trace is {trace:.12}, expected 1 within 1e-10")]
    TraceNotOne { trace: f64 },

    /// A density matrix or Bell-diagonal state had a negative eigenvalue.
    /// `which` names the offending eigenvalue (index or Bell label).
    #[error("not positive semidefinite: eigenvalue {which} = {value:.6e}")]
    NegativeEigenvalue { which: String, value: f64 },

    /// A matrix entry was NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A correlation-vector component left the unit cube.
    #[error("correlation component c{axis} = {value} outside [-1, 1]")]
    ComponentOutOfRange { axis: usize, value: f64 },

    /// Frozen-family construction requires |k| strictly above |c3|.
    #[error("frozen-family condition violated: need |k| > |c3|, got |k| = {k_abs}, |c3| = {c3_abs}")]
    FamilyCondition { k_abs: f64, c3_abs: f64 },

    /// A state was expected to lie on the frozen family but does not.
    #[error("state is not in the frozen family: residual {residual:.3e} exceeds 1e-9")]
    NotInFamily { residual: f64 },

    /// Dimensionless time must be non-negative.
    #[error("negative time: nu = {nu}")]
    NegativeTime { nu: f64 },

    /// A scalar parameter was outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The memory-kernel integrator left the physical range, indicating the
    /// step is too large for the requested parameters.
    #[error("integration unstable at nu = {nu:.6}: |decay| = {value:.6e} exceeds 1 + 1e-6")]
    IntegratorUnstable { nu: f64, value: f64 },

    /// A sampling grid is too coarse to resolve the oscillation period.
    #[error("grid too coarse: oscillation period {period:.6e} spans fewer than {min_steps} steps of {step:.6e}")]
    GridTooCoarse { period: f64, step: f64, min_steps: usize },

    /// The iterative eigensolver did not converge.
    #[error("eigensolver failed to converge")]
    EigenFailure,

    /// The two independent transition detectors disagreed; this indicates an
    /// internal inconsistency and is never expected for resolvable grids.
    #[error("transition detectors disagree: {0}")]
    DetectorMismatch(String),
}
