//! Projective measurements on either qubit and the statistics they produce.
//!
//! A measurement along the unit vector `e` has projectors
//! `Π(bit) = ½(1 + (−1)^bit e·σ)`. For a user direction `e_A` and an attacker
//! direction `e_B` the joint distribution depends on the state only through
//! three numbers: the user bias `α = e_A·a_A`, the attacker bias
//! `β = e_B·a_B` and the correlation `κ = e_Aᵀ K̃ e_B`.

use crate::error::{check_domain, Error, Result};
use crate::linalg::{self, Vec3};
use crate::state::{
    bloch_vector, correlation_matrix, partial_trace, Subsystem, TwoQubitState,
};

pub const UNIT_TOL: f64 = 1e-9;
/// Negative probabilities down to this size are rounding and clamp to zero.
pub const PROB_CLAMP: f64 = 1e-12;
pub const PROB_SUM_TOL: f64 = 1e-9;
/// Slack on the constraint-ellipse membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Unit vector on the Bloch sphere of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    components: Vec3,
}

impl MeasurementDirection {
    /// Validates the norm; directions are never rescaled silently.
    pub fn new(components: Vec3) -> Result<Self> {
        let n = linalg::norm(&components);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector(n));
        }
        Ok(Self { components })
    }

    pub(crate) fn new_unchecked(components: Vec3) -> Self {
        Self { components }
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            components: [st * cp, st * sp, ct],
        }
    }

    pub fn x() -> Self {
        Self::new_unchecked([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self::new_unchecked([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self::new_unchecked([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> &Vec3 {
        &self.components
    }

    pub fn negated(&self) -> Self {
        Self::new_unchecked(linalg::scale(&self.components, -1.0))
    }

    /// Angle to `other` in `[0, π]`.
    pub fn angle_to(&self, other: &MeasurementDirection) -> f64 {
        let c = linalg::dot(&self.components, &other.components);
        let s = linalg::norm(&linalg::cross(&self.components, &other.components));
        s.atan2(c)
    }
}

/// User bias `α`, attacker bias `β` and correlation `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParameters {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
}

impl MeasurementParameters {
    pub fn new(alpha: f64, beta: f64, kappa: f64) -> Result<Self> {
        check_domain("alpha", alpha, -1.0, 1.0, "[-1, 1]")?;
        check_domain("beta", beta, -1.0, 1.0, "[-1, 1]")?;
        check_domain("kappa", kappa, -1.0, 1.0, "[-1, 1]")?;
        Ok(Self { alpha, beta, kappa })
    }

    /// Parameters from Schmidt-frame direction components:
    /// `κ = C e_Ax e_Bx − C e_Ay e_By + e_Az e_Bz`, `α = √(1−C²) e_Az`,
    /// `β = √(1−C²) e_Bz`.
    pub fn from_schmidt_frame(c: f64, e_a: &Vec3, e_b: &Vec3) -> Self {
        let r = (1.0 - c * c).max(0.0).sqrt();
        Self {
            alpha: r * e_a[2],
            beta: r * e_b[2],
            kappa: c * e_a[0] * e_b[0] - c * e_a[1] * e_b[1] + e_a[2] * e_b[2],
        }
    }
}

/// Joint outcome probabilities `w[a][b]` with their marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    w: [[f64; 2]; 2],
    wa: [f64; 2],
    wb: [f64; 2],
}

impl JointDistribution {
    /// Clamps rounding-level negatives to zero; rejects anything larger.
    pub fn new(w: [[f64; 2]; 2]) -> Result<Self> {
        let mut w = w;
        for p in w.iter_mut().flatten() {
            if !p.is_finite() || *p < -PROB_CLAMP {
                return Err(Error::NegativeProbability(*p));
            }
            *p = p.max(0.0);
        }
        let total: f64 = w.iter().flatten().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Domain {
                name: "total probability",
                value: total,
                domain: "1 ± 1e-9",
            });
        }
        Ok(Self {
            w,
            wa: [w[0][0] + w[0][1], w[1][0] + w[1][1]],
            wb: [w[0][0] + w[1][0], w[0][1] + w[1][1]],
        })
    }

    /// `w[a][b] = ¼(1 + (−1)^a α + (−1)^b β + (−1)^{a+b} κ)`.
    pub fn from_parameters(p: &MeasurementParameters) -> Result<Self> {
        let mut w = [[0.0; 2]; 2];
        for (a, row) in w.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let sa = sign(a);
                let sb = sign(b);
                *cell = 0.25 * (1.0 + sa * p.alpha + sb * p.beta + sa * sb * p.kappa);
            }
        }
        Self::new(w)
    }

    pub fn w(&self) -> &[[f64; 2]; 2] {
        &self.w
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.w[a][b]
    }

    pub fn marginal_a(&self) -> &[f64; 2] {
        &self.wa
    }

    pub fn marginal_b(&self) -> &[f64; 2] {
        &self.wb
    }

    /// Pointwise mixture `t·self + (1−t)·other`.
    pub fn mix(&self, other: &JointDistribution, t: f64) -> Result<Self> {
        let mut w = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                w[a][b] = t * self.w[a][b] + (1.0 - t) * other.w[a][b];
            }
        }
        Self::new(w)
    }
}

pub(crate) fn sign(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

fn local_bloch(state: &TwoQubitState, subsystem: Subsystem) -> Vec3 {
    *bloch_vector(&partial_trace(state, subsystem)).components()
}

/// `½(1 + (−1)^bit e·a)` for the chosen qubit.
pub fn marginal_probability(
    state: &TwoQubitState,
    direction: &MeasurementDirection,
    subsystem: Subsystem,
    bit: u8,
) -> f64 {
    let a = local_bloch(state, subsystem);
    let s = if bit == 0 { 1.0 } else { -1.0 };
    (0.5 * (1.0 + s * linalg::dot(direction.components(), &a))).clamp(0.0, 1.0)
}

pub fn parameters(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
    e_b: &MeasurementDirection,
) -> MeasurementParameters {
    let a_a = local_bloch(state, Subsystem::A);
    let a_b = local_bloch(state, Subsystem::B);
    let k = correlation_matrix(state);
    MeasurementParameters {
        alpha: linalg::dot(e_a.components(), &a_a).clamp(-1.0, 1.0),
        beta: linalg::dot(e_b.components(), &a_b).clamp(-1.0, 1.0),
        kappa: k.bilinear(e_a.components(), e_b.components()).clamp(-1.0, 1.0),
    }
}

pub fn joint_distribution(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
    e_b: &MeasurementDirection,
) -> Result<JointDistribution> {
    JointDistribution::from_parameters(&parameters(state, e_a, e_b))
}

/// Quadratic form `c_kk κ² + 2 c_kb κβ + c_bb β² ≤ 1` bounding the reachable
/// `(κ, β)` for a fixed user bias `α` and concurrence `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintEllipse {
    pub alpha: f64,
    pub concurrence: f64,
    pub c_kk: f64,
    pub c_kb: f64,
    pub c_bb: f64,
}

impl ConstraintEllipse {
    pub fn form(&self, kappa: f64, beta: f64) -> f64 {
        self.c_kk * kappa * kappa + 2.0 * self.c_kb * kappa * beta + self.c_bb * beta * beta
    }
}

pub fn constraint_ellipse(alpha: f64, c: f64) -> Result<ConstraintEllipse> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    if c == 0.0 {
        return Err(Error::DegenerateGeometry(
            "C = 0 (separable state): the region collapses to the curve κ = αβ".into(),
        ));
    }
    if c == 1.0 {
        return Err(Error::DegenerateGeometry(
            "C = 1 (maximally entangled state): α = β = 0 and only |κ| ≤ 1 remains".into(),
        ));
    }
    let r2 = 1.0 - c * c;
    if alpha * alpha >= r2 {
        return Err(Error::DegenerateGeometry(format!(
            "α² = {} ≥ 1 − C² = {r2}: user direction parallel to the Bloch vector",
            alpha * alpha
        )));
    }
    let denom = c * c * (r2 - alpha * alpha);
    Ok(ConstraintEllipse {
        alpha,
        concurrence: c,
        c_kk: r2 / denom,
        c_kb: -alpha / denom,
        c_bb: (c * c + alpha * alpha) / denom,
    })
}

pub fn membership(ellipse: &ConstraintEllipse, kappa: f64, beta: f64) -> bool {
    ellipse.form(kappa, beta) <= 1.0 + MEMBERSHIP_TOL
}
