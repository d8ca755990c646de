//! Shared fixtures for the criterion benchmarks.

use dephasim_core::{Axis, CVector, ChannelParams};

/// Underdamped telegraph channel used throughout the demonstration runs.
pub fn demo_channel() -> ChannelParams {
    ChannelParams::new(1.0, 5.0, Axis::Z).expect("valid parameters")
}

/// Monotone (overdamped) channel.
pub fn overdamped_channel() -> ChannelParams {
    ChannelParams::new(0.1, 1.0, Axis::Z).expect("valid parameters")
}

/// Initial state whose trajectory exhibits frozen discord, sudden
/// transitions, entanglement death and revivals.
pub fn demo_state() -> CVector {
    CVector::new(1.0, -0.6, 0.6).expect("physical state")
}

/// A state strictly inside the Bell-diagonal tetrahedron, away from any
/// symmetry that could short-circuit the optimizer.
pub fn generic_state() -> CVector {
    CVector::new(0.35, -0.3, 0.1).expect("physical state")
}
