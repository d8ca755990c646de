//! State-space geometry of correlations: closest classical and product
//! states, the relative-entropy formulation of discord, and the dynamical
//! regime classification.
//!
//! A Bell-diagonal state with spectrum `l1 >= l2 >= l3 >= l4` has closest
//! classical state
//!
//! ```text
//! rho_cl = (q/2)(P1 + P2) + ((1-q)/2)(P3 + P4),   q = l1 + l2,
//! ```
//!
//! where `P1..P4` are the Bell projectors carrying the ordered eigenvalues.
//! The relative entropy to `rho_cl` reproduces the entropic discord for
//! Bell-diagonal states, and the relative entropy from `rho_cl` to its
//! closest product state (the product of its marginals) reproduces the
//! classical correlation — both are computed here through generic
//! eigendecomposition routes so they cross-check the closed forms in
//! [`crate::bell`] rather than restating them.

use num_complex::Complex64;

use crate::bell::CVector;
use crate::density::{self, DensityMatrix, Subsystem};
use crate::error::Result;
use crate::matrix::{Axis, ComplexMatrix};

/// Dynamical regime of a Bell-diagonal state under local dephasing along a
/// fixed axis, determined by the initial correlation components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The frozen (noise-axis) component dominates from the start: classical
    /// correlation is constant for all times and discord decays to zero.
    /// No sudden transition occurs.
    First,
    /// The noise-axis component is exactly zero: every correlation measure
    /// decays to zero and no transition occurs.
    Second,
    /// The noise-axis component is nonzero but initially dominated by a
    /// transverse component: the dominant axis switches at finite time
    /// (possibly several times under underdamped noise), producing sudden
    /// transitions.
    Third,
}

/// The closest classical (zero-discord) state to a Bell-diagonal state:
/// equalise the two largest and the two smallest spectral weights, keeping
/// the Bell projectors fixed. Ties in the ordering are broken by the fixed
/// Bell-basis order, matching [`crate::bell::BellSpectrum::sorted_desc`].
pub fn closest_classical_state(c: &CVector) -> Result<DensityMatrix> {
    let sorted = c.spectrum().sorted_desc();
    let q = sorted[0].1 + sorted[1].1;
    let mut acc = ComplexMatrix::zeros(4)?;
    for (k, (state, _)) in sorted.into_iter().enumerate() {
        let weight = if k < 2 { q / 2.0 } else { (1.0 - q) / 2.0 };
        acc = &acc + &state.projector().scale(Complex64::new(weight, 0.0));
    }
    DensityMatrix::new(acc)
}

/// Quantum discord as state-space geometry: the relative entropy from the
/// state to its closest classical state. Agrees with
/// [`crate::bell::discord_closed`] for Bell-diagonal states.
pub fn relative_entropy_discord(c: &CVector) -> Result<f64> {
    let rho = c.to_density_matrix();
    let rho_cl = closest_classical_state(c)?;
    density::relative_entropy(&rho, &rho_cl)
}

/// The closest product state to a two-qubit state: the tensor product of its
/// marginals. For any Bell-diagonal state this is the maximally mixed state.
pub fn closest_product_state(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let a = density::partial_trace(rho, Subsystem::B)?;
    let b = density::partial_trace(rho, Subsystem::A)?;
    density::tensor(&a, &b)
}

/// Classical correlation as geometry: the relative entropy from the closest
/// classical state to its own closest product state. Agrees with
/// [`crate::bell::classical_correlation_closed`] for Bell-diagonal states.
pub fn geometric_classical_correlation(c: &CVector) -> Result<f64> {
    let rho_cl = closest_classical_state(c)?;
    let product = closest_product_state(&rho_cl)?;
    density::relative_entropy(&rho_cl, &product)
}

/// Classify the dynamical regime of an initial state dephased along `axis`.
///
/// The noise-axis component is frozen by the channel while the transverse
/// components shrink by the square of the decay function, so the long-time
/// behaviour is fixed by the initial components alone:
///
/// * exactly zero frozen component → [`Regime::Second`];
/// * frozen component at least as large as both transverse components →
///   [`Regime::First`];
/// * otherwise → [`Regime::Third`].
pub fn classify_regime(c0: &CVector, axis: Axis) -> Regime {
    let frozen = c0.component(axis);
    if frozen == 0.0 {
        return Regime::Second;
    }
    let [t1, t2] = axis.others().map(|other| c0.component(other).abs());
    if frozen.abs() >= t1.max(t2) {
        Regime::First
    } else {
        Regime::Third
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{classical_correlation_closed, discord_closed, BellState};
    use approx::assert_relative_eq;

    fn cv(c1: f64, c2: f64, c3: f64) -> CVector {
        CVector::new(c1, c2, c3).unwrap()
    }

    #[test]
    fn classical_state_collapses_to_chi_component() {
        // For (0.35, -0.3, 0.1) the closest classical state carries the
        // dominant component only: its correlation vector is (0.35, 0, 0).
        let c = cv(0.35, -0.3, 0.1);
        let rho_cl = closest_classical_state(&c).unwrap();
        let expect = cv(0.35, 0.0, 0.0).to_density_matrix();
        assert!(rho_cl.matrix().max_abs_diff(expect.matrix()) < 1e-12);
    }

    #[test]
    fn classical_state_commutes_with_input() {
        for c in [cv(0.35, -0.3, 0.1), cv(1.0, -0.6, 0.6), cv(0.2, -0.2, 0.9)] {
            let rho = c.to_density_matrix();
            let rho_cl = closest_classical_state(&c).unwrap();
            let comm = &(rho.matrix() * rho_cl.matrix()) - &(rho_cl.matrix() * rho.matrix());
            assert!(comm.max_abs_diff(&ComplexMatrix::zeros(4).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn rank_two_example() {
        // Spectrum (0.8, 0.2, 0, 0): classical state is the equal mixture of
        // the two populated Bell projectors.
        let c = cv(1.0, -0.6, 0.6);
        let rho_cl = closest_classical_state(&c).unwrap();
        let expect = DensityMatrix::new(
            &BellState::PsiPlus.projector().scale(Complex64::new(0.5, 0.0))
                + &BellState::PhiPlus.projector().scale(Complex64::new(0.5, 0.0)),
        )
        .unwrap();
        assert!(rho_cl.matrix().max_abs_diff(expect.matrix()) < 1e-12);
        // Distance to it is the discord: 1.278072 - 1 bit.
        assert_relative_eq!(
            relative_entropy_discord(&c).unwrap(),
            0.278071905112638,
            epsilon = 1e-10
        );
    }

    #[test]
    fn classical_states_are_fixed_points() {
        // Already-classical states (one nonzero component) coincide with
        // their own closest classical state; maximally mixed included.
        for c in [cv(0.6, 0.0, 0.0), cv(0.0, 0.0, -0.7), cv(0.0, 0.0, 0.0)] {
            let rho_cl = closest_classical_state(&c).unwrap();
            assert!(rho_cl.matrix().max_abs_diff(c.to_density_matrix().matrix()) < 1e-12);
            assert!(relative_entropy_discord(&c).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn relative_entropy_route_matches_closed_form() {
        let samples = [
            cv(0.35, -0.3, 0.1),
            cv(0.2, -0.2, 0.9),
            cv(0.5, -0.4, 0.0),
            cv(0.9, -0.9, 0.8),
            cv(0.3, 0.2, -0.5),
        ];
        for c in samples {
            assert_relative_eq!(
                relative_entropy_discord(&c).unwrap(),
                discord_closed(&c),
                epsilon = 1e-10
            );
        }
        // Frozen value for the Fig. 1(b)-style state.
        assert_relative_eq!(
            relative_entropy_discord(&cv(0.35, -0.3, 0.1)).unwrap(),
            0.065954548428035,
            epsilon = 1e-10
        );
    }

    #[test]
    fn pure_bell_state_has_unit_distance() {
        assert_relative_eq!(
            relative_entropy_discord(&cv(1.0, -1.0, 1.0)).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn product_state_of_bell_diagonal_is_maximally_mixed() {
        for c in [cv(0.35, -0.3, 0.1), cv(1.0, -0.6, 0.6)] {
            let product = closest_product_state(&c.to_density_matrix()).unwrap();
            let mixed = DensityMatrix::maximally_mixed(4).unwrap();
            assert!(product.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        }
    }

    #[test]
    fn geometric_classical_correlation_matches_closed_form() {
        for c in [
            cv(0.35, -0.3, 0.1),
            cv(1.0, -0.6, 0.6),
            cv(0.6, 0.0, 0.0),
            cv(0.2, -0.2, 0.9),
        ] {
            assert_relative_eq!(
                geometric_classical_correlation(&c).unwrap(),
                classical_correlation_closed(&c),
                epsilon = 1e-10
            );
        }
        // (1, -0.6, 0.6) has chi = 1, so the geometric classical
        // correlation is a full bit.
        assert_relative_eq!(
            geometric_classical_correlation(&cv(1.0, -0.6, 0.6)).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn equidistant_candidates_at_dominance_tie() {
        // When two components tie in magnitude, the classical candidates
        // built from either axis are equally distant — the geometric picture
        // of a sudden transition point.
        let c = cv(0.5, -0.2, 0.5);
        let rho = c.to_density_matrix();
        let cand_x = cv(0.5, 0.0, 0.0).to_density_matrix();
        let cand_z = cv(0.0, 0.0, 0.5).to_density_matrix();
        let dx = density::relative_entropy(&rho, &cand_x).unwrap();
        let dz = density::relative_entropy(&rho, &cand_z).unwrap();
        assert_relative_eq!(dx, dz, epsilon = 1e-10);
        assert_relative_eq!(dx, discord_closed(&c), epsilon = 1e-10);
    }

    #[test]
    fn regime_classification() {
        assert_eq!(classify_regime(&cv(0.2, -0.2, 0.9), Axis::Z), Regime::First);
        assert_eq!(classify_regime(&cv(0.5, -0.4, 0.0), Axis::Z), Regime::Second);
        assert_eq!(classify_regime(&cv(1.0, -0.6, 0.6), Axis::Z), Regime::Third);
        // Axis permutation: the same components read differently when the
        // noise is transverse.
        assert_eq!(classify_regime(&cv(0.6, 0.0, 0.3), Axis::X), Regime::First);
        assert_eq!(classify_regime(&cv(0.6, 0.0, 0.3), Axis::Z), Regime::Third);
        assert_eq!(classify_regime(&cv(0.6, 0.0, 0.0), Axis::Y), Regime::Second);
        // Exact dominance tie counts as first (frozen from the start).
        assert_eq!(classify_regime(&cv(0.5, 0.0, 0.5), Axis::Z), Regime::First);
        // All-zero vector has a zero frozen component.
        assert_eq!(classify_regime(&cv(0.0, 0.0, 0.0), Axis::Z), Regime::Second);
    }
}
