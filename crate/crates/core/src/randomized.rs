//! A user who picks one of two measurement directions at random.
//!
//! Both directions are perpendicular to the user's Bloch vector and separated
//! by an angle `γ`. A fixed attacker then sees the averaged joint distribution,
//! whose correlation is that of a state with concurrence `C cos(γ/2)`.

use crate::error::{check_domain, Error, Result};
use crate::information::{i_max, PERPENDICULAR_TOL};
use crate::linalg::{self, Vec3};
use crate::measurement::{joint_distribution, JointDistribution, MeasurementDirection};
use crate::optimizer::grid_maximize_parameters;
use crate::state::{bloch_vector, correlation_matrix, partial_trace, Subsystem, TwoQubitState};

/// Two user directions chosen with probability ½ each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomMeasurementConfig {
    e_a1: MeasurementDirection,
    e_a2: MeasurementDirection,
    gamma: f64,
}

fn user_bloch(state: &TwoQubitState) -> Vec3 {
    *bloch_vector(&partial_trace(state, Subsystem::A)).components()
}

fn check_perpendicular(a_a: &Vec3, e: &MeasurementDirection, label: &str) -> Result<()> {
    let alpha = linalg::dot(a_a, e.components());
    if alpha.abs() > PERPENDICULAR_TOL {
        return Err(Error::Precondition(format!(
            "{label} must be perpendicular to the user's Bloch vector (e·a_A = {alpha})"
        )));
    }
    Ok(())
}

impl RandomMeasurementConfig {
    /// Validates both directions against `state`; `γ` is their angle.
    pub fn new(
        state: &TwoQubitState,
        e_a1: MeasurementDirection,
        e_a2: MeasurementDirection,
    ) -> Result<Self> {
        let a_a = user_bloch(state);
        check_perpendicular(&a_a, &e_a1, "first direction")?;
        check_perpendicular(&a_a, &e_a2, "second direction")?;
        Ok(Self {
            e_a1,
            e_a2,
            gamma: e_a1.angle_to(&e_a2),
        })
    }

    /// Second direction obtained by turning `e_a1` by `gamma` about the user's
    /// Bloch vector (about any axis ⟂ `e_a1` when the Bloch vector vanishes).
    pub fn from_angle(
        state: &TwoQubitState,
        e_a1: MeasurementDirection,
        gamma: f64,
    ) -> Result<Self> {
        check_domain("gamma", gamma, 0.0, std::f64::consts::PI, "[0, π]")?;
        let a_a = user_bloch(state);
        check_perpendicular(&a_a, &e_a1, "first direction")?;
        let e = e_a1.components();
        let axis = if linalg::norm(&a_a) > 1e-12 {
            linalg::scale(&a_a, 1.0 / linalg::norm(&a_a))
        } else {
            let helper = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let c = linalg::cross(e, &helper);
            linalg::scale(&c, 1.0 / linalg::norm(&c))
        };
        // Rodrigues with e ⟂ axis: e cos γ + (axis × e) sin γ.
        let turned = linalg::add(
            &linalg::scale(e, gamma.cos()),
            &linalg::scale(&linalg::cross(&axis, e), gamma.sin()),
        );
        let n = linalg::norm(&turned);
        let e_a2 = MeasurementDirection::new(linalg::scale(&turned, 1.0 / n))?;
        Self::new(state, e_a1, e_a2)
    }

    pub fn first(&self) -> &MeasurementDirection {
        &self.e_a1
    }

    pub fn second(&self) -> &MeasurementDirection {
        &self.e_a2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `½(w₁ + w₂)`, the statistics of a fixed attacker direction `e_B`.
pub fn averaged_joint(
    state: &TwoQubitState,
    cfg: &RandomMeasurementConfig,
    e_b: &MeasurementDirection,
) -> Result<JointDistribution> {
    let a_a = user_bloch(state);
    check_perpendicular(&a_a, &cfg.e_a1, "first direction")?;
    check_perpendicular(&a_a, &cfg.e_a2, "second direction")?;
    let w1 = joint_distribution(state, &cfg.e_a1, e_b)?;
    let w2 = joint_distribution(state, &cfg.e_a2, e_b)?;
    w1.mix(&w2, 0.5)
}

/// `C_eff = C cos(γ/2)`.
pub fn effective_concurrence(c: f64, gamma: f64) -> f64 {
    (c * (0.5 * gamma).cos()).clamp(0.0, c)
}

/// `I_max(C cos(γ/2))`.
pub fn i_max_random(c: f64, gamma: f64) -> Result<f64> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    check_domain("gamma", gamma, 0.0, std::f64::consts::PI, "[0, π]")?;
    i_max(effective_concurrence(c, gamma))
}

/// Lattice maximum over `e_B` of the averaged joint's mutual information, and
/// the maximizing direction.
///
/// The averaged joint has `α = 0`, the usual `β = e_B·a_B` and
/// `κ = ½(e₁ + e₂)ᵀ K̃ e_B`, so the search reuses the single-direction lattice.
pub fn grid_search_random(
    state: &TwoQubitState,
    cfg: &RandomMeasurementConfig,
    resolution: f64,
) -> Result<(f64, MeasurementDirection)> {
    let a_a = user_bloch(state);
    check_perpendicular(&a_a, &cfg.e_a1, "first direction")?;
    check_perpendicular(&a_a, &cfg.e_a2, "second direction")?;
    let a_b = *bloch_vector(&partial_trace(state, Subsystem::B)).components();
    let k = correlation_matrix(state);
    let mean = linalg::scale(&linalg::add(cfg.e_a1.components(), cfg.e_a2.components()), 0.5);
    let u = linalg::mat_t_vec(&k.entries, &mean);
    grid_maximize_parameters(0.0, &a_b, &u, resolution)
}
