//! The single-qubit colored-noise dephasing channel and its two-qubit
//! product extension.
//!
//! The noise is a random telegraph signal of amplitude `a` flipping at rate
//! `1/(2 tau)`, which dephases a qubit along one fixed axis. In the
//! dimensionless time `nu = t / (2 tau)` the coherence decay factor is
//!
//! ```text
//! 4 a tau > 1 (underdamped):  L(nu) = e^{-nu} [ cos(mu nu) + sin(mu nu)/mu ],  mu = sqrt((4 a tau)^2 - 1)
//! 4 a tau < 1 (overdamped):   L(nu) = e^{-nu} [ cosh(m nu) + sinh(m nu)/m ],   m = sqrt(1 - (4 a tau)^2)
//! 4 a tau = 1 (critical):     L(nu) = e^{-nu} (1 + nu)
//! ```
//!
//! `|L| <= 1` always; in the underdamped regime `L` oscillates through
//! negative values (the non-Markovian revivals), otherwise it decays
//! monotonically. The channel admits the two-operator Kraus form
//!
//! ```text
//! A_axis = sqrt((1 - L)/2) sigma_axis,   A_id = sqrt((1 + L)/2) I
//! ```
//!
//! and acting independently on both qubits of a Bell-diagonal state it
//! leaves the noise-axis correlation component frozen while the two
//! transverse components are scaled by `L(nu)^2`.

use num_complex::Complex64;

use crate::bell::CVector;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::{identity2, kronecker, pauli, Axis, ComplexMatrix};

/// Width of the window around `4 a tau = 1` treated as the critical branch.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Damping regime of the decay function, decided by `4 a tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingBranch {
    Underdamped,
    Overdamped,
    Critical,
}

/// Kraus representation of the single-qubit channel at a fixed time: the
/// two non-zero operators `sqrt((1-L)/2) sigma_axis` and `sqrt((1+L)/2) I`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub flip: ComplexMatrix,
    pub identity: ComplexMatrix,
}

impl KrausSet {
    /// Entry-wise deviation of `sum_k A_k^dag A_k` from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let sum = &(&self.flip.adjoint() * &self.flip)
            + &(&self.identity.adjoint() * &self.identity);
        sum.max_abs_diff(&identity2())
    }
}

/// Physical parameters of one local noise source: coupling `a` (1/s),
/// correlation time `tau` (s) and the dephasing axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    a: f64,
    tau: f64,
    axis: Axis,
}

impl ChannelParams {
    /// Validate and build channel parameters; `a` and `tau` must be
    /// strictly positive and finite.
    pub fn new(a: f64, tau: f64, axis: Axis) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParam(format!(
                "coupling a must be positive, got {a}"
            )));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParam(format!(
                "correlation time tau must be positive, got {tau}"
            )));
        }
        Ok(Self { a, tau, axis })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// The dimensionless product `4 a tau` separating the regimes.
    pub fn four_a_tau(&self) -> f64 {
        4.0 * self.a * self.tau
    }

    /// Damping branch, with `|4 a tau - 1| < 1e-9` counted as critical.
    pub fn branch(&self) -> DampingBranch {
        let x = self.four_a_tau();
        if (x - 1.0).abs() < CRITICAL_TOL {
            DampingBranch::Critical
        } else if x > 1.0 {
            DampingBranch::Underdamped
        } else {
            DampingBranch::Overdamped
        }
    }

    /// Oscillation frequency `mu = sqrt((4 a tau)^2 - 1)` of the
    /// underdamped branch, `None` otherwise.
    pub fn mu(&self) -> Option<f64> {
        match self.branch() {
            DampingBranch::Underdamped => Some((self.four_a_tau().powi(2) - 1.0).sqrt()),
            _ => None,
        }
    }

    /// Convert dimensionless time to seconds: `t = 2 tau nu`.
    pub fn nu_to_seconds(&self, nu: f64) -> f64 {
        2.0 * self.tau * nu
    }

    /// Coherence decay factor `L(nu)`; errors on negative time.
    pub fn decay(&self, nu: f64) -> Result<f64> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::NegativeTime { nu });
        }
        let envelope = (-nu).exp();
        Ok(match self.branch() {
            DampingBranch::Critical => envelope * (1.0 + nu),
            DampingBranch::Underdamped => {
                let mu = (self.four_a_tau().powi(2) - 1.0).sqrt();
                envelope * ((mu * nu).cos() + (mu * nu).sin() / mu)
            }
            DampingBranch::Overdamped => {
                let m = (1.0 - self.four_a_tau().powi(2)).sqrt();
                envelope * ((m * nu).cosh() + (m * nu).sinh() / m)
            }
        })
    }

    /// Kraus operators of the single-qubit channel at time `nu`.
    pub fn kraus_set(&self, nu: f64) -> Result<KrausSet> {
        let l = self.decay(nu)?;
        let w_flip = ((1.0 - l) / 2.0).max(0.0).sqrt();
        let w_id = ((1.0 + l) / 2.0).max(0.0).sqrt();
        Ok(KrausSet {
            flip: pauli(self.axis).scale(Complex64::new(w_flip, 0.0)),
            identity: identity2().scale(Complex64::new(w_id, 0.0)),
        })
    }

    /// Apply the single-qubit channel: diagonal part in the axis eigenbasis
    /// is left untouched, transverse Bloch components shrink by `L(nu)`.
    pub fn apply_single(&self, rho: &DensityMatrix, nu: f64) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: rho.dim(),
            });
        }
        let k = self.kraus_set(nu)?;
        let out = &(&(&k.flip * rho.matrix()) * &k.flip.adjoint())
            + &(&(&k.identity * rho.matrix()) * &k.identity.adjoint());
        DensityMatrix::new(out)
    }

    /// Apply the channel independently to both qubits of a two-qubit state
    /// (identical local noise parameters on each side).
    pub fn apply_two_qubit(&self, rho: &DensityMatrix, nu: f64) -> Result<DensityMatrix> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: rho.dim(),
            });
        }
        let k = self.kraus_set(nu)?;
        let ops = [&k.flip, &k.identity];
        let mut out = ComplexMatrix::zeros(4)?;
        for a in ops {
            for b in ops {
                let kk = kronecker(a, b);
                out = &out + &(&(&kk * rho.matrix()) * &kk.adjoint());
            }
        }
        DensityMatrix::new(out)
    }

    /// Evolve a Bell-diagonal correlation vector: the component on the
    /// noise axis is frozen, the transverse ones scale by `L(nu)^2`.
    pub fn evolve_cvector(&self, c0: &CVector, nu: f64) -> Result<CVector> {
        let l2 = self.decay(nu)?.powi(2);
        let mut comps = c0.components();
        for axis in self.axis.others() {
            comps[axis.index() - 1] *= l2;
        }
        CVector::new(comps[0], comps[1], comps[2])
    }
}
