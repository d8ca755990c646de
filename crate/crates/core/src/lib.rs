//! Simulation library for two-qubit Bell-diagonal states subject to local
//! colored dephasing noise (random telegraph signals with exponential
//! autocorrelation).
//!
//! The crate is organised around a small set of cooperating modules:
//!
//! * [`matrix`] / [`density`] — dense complex matrices, density operators and
//!   the standard information-theoretic primitives (von Neumann entropy,
//!   relative entropy, trace distance, partial trace).
//! * [`bell`] — the Bell-diagonal family parameterised by the correlation
//!   vector `(c1, c2, c3)` and its closed-form correlation measures
//!   (mutual information, classical correlation, discord, concurrence).
//! * [`channel`] — the single-qubit colored-noise dephasing channel, its
//!   Kraus representation and the induced two-qubit product map.
//! * [`kernel`] — independent oracles for the coherence decay function:
//!   a memory-kernel integrator and a Monte Carlo telegraph-noise average.
//! * [`measurement`] — brute-force local-measurement optimisation of the
//!   classical correlation, used as a cross-check of the closed forms.
//! * [`geometry`] — closest classical/product states and the
//!   relative-entropy form of discord.
//! * [`events`] — sudden-transition, entanglement-death and
//!   non-Markovianity detection along trajectories.
//!
//! All entropic quantities are measured in bits (base-2 logarithms) and all
//! times are the dimensionless `nu = t / (2 tau)` unless stated otherwise.

pub mod bell;
pub mod channel;
pub mod density;
pub mod error;
pub mod events;
pub mod geometry;
pub mod kernel;
pub mod matrix;
pub mod measurement;

pub use bell::{BellSpectrum, BellState, CVector};
pub use channel::{ChannelParams, DampingBranch, KrausSet};
pub use density::{DensityMatrix, Subsystem};
pub use error::{Error, Result};
pub use events::{EventKind, TransitionEvent, Witness};
pub use geometry::Regime;
pub use kernel::{IntegratorConfig, McEstimate, SampledDecay, Scheme, TelegraphTrajectory};
pub use matrix::{Axis, ComplexMatrix};
pub use measurement::{ConditionalEnsemble, ConditionalOutcome, MeasurementBasis, OptimizerGrid};
