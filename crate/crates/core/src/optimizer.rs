//! The attacker's best measurement.
//!
//! For a user with uniform bits the attacker's information is a convex function
//! of `(κ, β)` on the ellipse `(κ/C)² + (β/√(1−C²))² ≤ 1`, so its maximum sits
//! on the boundary, at `β = 0, κ = ±C`. This module provides that closed-form
//! optimum along with the numerical evidence for it: an exhaustive lattice
//! search over the attacker's Bloch sphere, sweeps along the ellipse boundary,
//! convexity checks, the stationary points of `I(φ)` and the curvature at the
//! maximum.

use rayon::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};

use crate::error::{check_domain, Error, Result};
use crate::information::{i_max, mi_abk_unchecked, mutual_information_abk, PERPENDICULAR_TOL};
use crate::linalg::{self, Vec3};
use crate::measurement::{MeasurementDirection, MeasurementParameters};
use crate::state::{
    bloch_vector, concurrence, correlation_matrix, partial_trace, schmidt_decompose, Subsystem,
    TwoQubitState,
};

/// Tolerance on the roots returned by [`stationary_points`].
pub const ROOT_TOL: f64 = 1e-10;
/// Lattice spacing used to bracket sign changes of `dI/dφ`.
pub const ROOT_SCAN_STEP: f64 = 1e-4;
/// Slack in the convexity inequality.
pub const CONVEXITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizationMethod {
    Analytic,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    /// Lab-frame attacker direction; for the analytic optimum the one with
    /// `κ = +C`.
    pub best_direction: MeasurementDirection,
    /// The same direction in the Schmidt frame of `B`.
    pub best_direction_schmidt: Vec3,
    /// Analytic only: the mirror optimum with `κ = −C`.
    pub alternate_direction: Option<MeasurementDirection>,
    pub best_value: f64,
    pub method: OptimizationMethod,
    /// Grid only: lattice spacing in radians.
    pub grid_resolution: Option<f64>,
    /// Grid only: the guaranteed shortfall of the lattice maximum, see
    /// [`grid_error_bound`].
    pub grid_error_bound: Option<f64>,
}

fn user_bloch(state: &TwoQubitState) -> Vec3 {
    *bloch_vector(&partial_trace(state, Subsystem::A)).components()
}

fn check_uniform_user(state: &TwoQubitState, e_a: &MeasurementDirection) -> Result<()> {
    let alpha = linalg::dot(e_a.components(), &user_bloch(state));
    if alpha.abs() > PERPENDICULAR_TOL {
        return Err(Error::Precondition(format!(
            "user direction must be perpendicular to the Bloch vector (e_A·a_A = {alpha})"
        )));
    }
    Ok(())
}

/// Closed-form optimum `β = 0, κ = C`.
///
/// In the Schmidt frame the attacker mirrors the user's direction through the
/// `xz`-plane, `e_B = (e_Ax, −e_Ay, e_Az)`; with `e_A ⟂ a_A` the `z` component
/// vanishes (it is only free when `C = 1`).
pub fn optimal_attacker_analytic(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
) -> Result<OptimizationResult> {
    check_uniform_user(state, e_a)?;
    let c = concurrence(state);
    let frame = schmidt_decompose(state).frame();
    let e = frame.to_schmidt(Subsystem::A, e_a.components());
    let mirrored = [e[0], -e[1], e[2]];
    let n = linalg::norm(&mirrored);
    let schmidt = linalg::scale(&mirrored, 1.0 / n);
    let lab = MeasurementDirection::new(frame.to_lab(Subsystem::B, &schmidt))?;
    Ok(OptimizationResult {
        best_direction: lab,
        best_direction_schmidt: schmidt,
        alternate_direction: Some(lab.negated()),
        best_value: i_max(c)?,
        method: OptimizationMethod::Analytic,
        grid_resolution: None,
        grid_error_bound: None,
    })
}

/// Largest principal curvature of `I` on the attacker's sphere at the optimum,
/// `C·atanh(C)/ln 2`. Tilting towards the Bloch vector has the smaller
/// curvature `|d²I/dφ²|` of [`second_derivative_at_max`].
pub fn optimum_curvature(c: f64) -> f64 {
    if c >= 1.0 {
        return f64::INFINITY;
    }
    c * c.atanh() / LN_2
}

/// Shortfall bound for a lattice of spacing `resolution`: every point of the
/// sphere is within `resolution/√2` of a lattice point, so the lattice maximum
/// is at least `I_max − K·resolution²/4` to second order; we report twice that.
pub fn grid_error_bound(c: f64, resolution: f64) -> f64 {
    (optimum_curvature(c) * resolution * resolution / 2.0).min(1.0)
}

/// Spherical lattice: `n_theta + 1` polar rings (poles visited once) with
/// `n_phi` azimuths each, both spacings at most `resolution`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SphereLattice {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SphereLattice {
    pub fn new(resolution: f64) -> Self {
        Self {
            n_theta: (PI / resolution).ceil() as usize,
            n_phi: (2.0 * PI / resolution).ceil() as usize,
        }
    }

    pub fn angles(&self, i: usize, j: usize) -> (f64, f64) {
        (
            PI * i as f64 / self.n_theta as f64,
            2.0 * PI * j as f64 / self.n_phi as f64,
        )
    }

    fn ring_len(&self, i: usize) -> usize {
        if i == 0 || i == self.n_theta {
            1
        } else {
            self.n_phi
        }
    }

    /// Maximizes `f` over the lattice. Ties go to the smallest `(θ, φ)`, so the
    /// result does not depend on the parallel evaluation order.
    pub fn maximize<F>(&self, f: F) -> (f64, usize, usize)
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        let better = |x: &(f64, usize, usize), y: &(f64, usize, usize)| -> Ordering {
            x.0.partial_cmp(&y.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| (y.1, y.2).cmp(&(x.1, x.2)))
        };
        (0..=self.n_theta)
            .into_par_iter()
            .map(|i| {
                (0..self.ring_len(i))
                    .map(|j| {
                        let (t, p) = self.angles(i, j);
                        let e = *MeasurementDirection::from_spherical(t, p).components();
                        (f(&e), i, j)
                    })
                    .max_by(|x, y| better(x, y))
                    .expect("ring is never empty")
            })
            .max_by(|x, y| better(x, y))
            .expect("lattice is never empty")
    }
}

/// Maximum of `I(α, β(e), κ(e))` over the lattice, with `β = e·a_B` and
/// `κ = u·e`.
pub(crate) fn grid_maximize_parameters(
    alpha: f64,
    a_b: &Vec3,
    u: &Vec3,
    resolution: f64,
) -> Result<(f64, MeasurementDirection)> {
    if resolution.is_nan() || resolution <= 0.0 || resolution > 0.1 {
        return Err(Error::Domain {
            name: "resolution",
            value: resolution,
            domain: "(0, 0.1]",
        });
    }
    let lattice = SphereLattice::new(resolution);
    let (value, i, j) = lattice.maximize(|e| {
        mi_abk_unchecked(alpha, linalg::dot(e, a_b), linalg::dot(e, u))
    });
    let (t, p) = lattice.angles(i, j);
    Ok((value.min(1.0), MeasurementDirection::from_spherical(t, p)))
}

/// Brute-force maximum over a `(θ_B, φ_B)` lattice of the given spacing.
pub fn grid_search_attacker(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
    resolution: f64,
) -> Result<OptimizationResult> {
    let a_a = user_bloch(state);
    let a_b = *bloch_vector(&partial_trace(state, Subsystem::B)).components();
    let k = correlation_matrix(state);
    let alpha = linalg::dot(e_a.components(), &a_a);
    let u = linalg::mat_t_vec(&k.entries, e_a.components());
    let (value, best) = grid_maximize_parameters(alpha, &a_b, &u, resolution)?;
    let frame = schmidt_decompose(state).frame();
    Ok(OptimizationResult {
        best_direction: best,
        best_direction_schmidt: frame.to_schmidt(Subsystem::B, best.components()),
        alternate_direction: None,
        best_value: value,
        method: OptimizationMethod::Grid,
        grid_resolution: Some(resolution),
        grid_error_bound: Some(grid_error_bound(concurrence(state), resolution)),
    })
}

/// Mutual information on the ellipse boundary, `κ = C cos φ`,
/// `β = √(1−C²) sin φ`, with `α = 0`.
pub fn ellipse_information(c: f64, phi: f64) -> f64 {
    let r = (1.0 - c * c).max(0.0).sqrt();
    mi_abk_unchecked(0.0, r * phi.sin(), c * phi.cos())
}

/// Mutual information sampled along the upper half of the ellipse boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseSweep {
    pub phis: Vec<f64>,
    pub values: Vec<f64>,
    pub concurrence: f64,
}

impl EllipseSweep {
    /// Index of the largest value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }
}

fn check_open_concurrence(c: f64) -> Result<()> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    if c == 0.0 || c == 1.0 {
        return Err(Error::DegenerateGeometry(format!(
            "C = {c}: the ellipse degenerates to a segment"
        )));
    }
    Ok(())
}

pub fn ellipse_sweep(c: f64, n_points: usize) -> Result<EllipseSweep> {
    check_open_concurrence(c)?;
    if n_points < 3 {
        return Err(Error::Domain {
            name: "n_points",
            value: n_points as f64,
            domain: "≥ 3",
        });
    }
    let r = (1.0 - c * c).sqrt();
    let phis: Vec<f64> = (0..n_points)
        .map(|i| PI * i as f64 / (n_points - 1) as f64)
        .collect();
    let values = phis
        .iter()
        .map(|&phi| {
            let p = MeasurementParameters {
                alpha: 0.0,
                beta: r * phi.sin(),
                kappa: c * phi.cos(),
            };
            mutual_information_abk(&p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EllipseSweep {
        phis,
        values,
        concurrence: c,
    })
}

/// Two `(κ, β)` points to be mixed.
pub type PointPair = ((f64, f64), (f64, f64));

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    pub checked: usize,
    pub violations: usize,
    /// Largest `I(mix) − mix(I)`; non-positive when convexity holds.
    pub max_violation: f64,
}

/// Checks `I(λp₁ + (1−λ)p₂) ≤ λI(p₁) + (1−λ)I(p₂)` at `α = 0` for each
/// `((κ₁, β₁), (κ₂, β₂))` pair and the λ at the same index.
pub fn verify_convexity(
    samples: &[PointPair],
    lambdas: &[f64],
) -> Result<ConvexityReport> {
    if samples.len() != lambdas.len() {
        return Err(Error::Precondition(format!(
            "{} sample pairs but {} mixing weights",
            samples.len(),
            lambdas.len()
        )));
    }
    let info = |kappa: f64, beta: f64| -> Result<f64> {
        mutual_information_abk(&MeasurementParameters {
            alpha: 0.0,
            beta,
            kappa,
        })
    };
    let mut report = ConvexityReport {
        checked: 0,
        violations: 0,
        max_violation: f64::NEG_INFINITY,
    };
    for (&((k1, b1), (k2, b2)), &lambda) in samples.iter().zip(lambdas) {
        check_domain("lambda", lambda, 0.0, 1.0, "[0, 1]")?;
        let mixed = info(lambda * k1 + (1.0 - lambda) * k2, lambda * b1 + (1.0 - lambda) * b2)?;
        let chord = lambda * info(k1, b1)? + (1.0 - lambda) * info(k2, b2)?;
        let gap = mixed - chord;
        report.checked += 1;
        report.max_violation = report.max_violation.max(gap);
        if gap > CONVEXITY_TOL {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// `dI/dφ` along the ellipse boundary:
/// `¼ Σ ((−1)^b (s/C) κ − (−1)^{a+b} (C/s) β) log2(1 + (−1)^{a+b} κ/(1 + (−1)^b β))`
/// with `s = √(1−C²)`.
pub fn ellipse_derivative(c: f64, phi: f64) -> f64 {
    let s = (1.0 - c * c).sqrt();
    let kappa = c * phi.cos();
    let beta = s * phi.sin();
    let mut total = 0.0;
    for (sb, sab) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)] {
        let weight = sb * (s / c) * kappa - sab * (c / s) * beta;
        let arg = 1.0 + sab * kappa / (1.0 + sb * beta);
        if arg > 0.0 {
            total += weight * arg.log2();
        }
    }
    0.25 * total
}

/// Roots of `dI/dφ` on `[0, π]`, located by sign-change scanning at
/// [`ROOT_SCAN_STEP`] and bisection to [`ROOT_TOL`]. The endpoints are included
/// when the derivative vanishes there.
pub fn stationary_points(c: f64) -> Result<Vec<f64>> {
    check_open_concurrence(c)?;
    let f = |phi: f64| ellipse_derivative(c, phi);
    let n = (PI / ROOT_SCAN_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| PI * k as f64 / n as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect();
    // Derivative scale, for deciding whether an endpoint value is a zero.
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let endpoint_zero = |v: f64| v.abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE);

    let mut roots = Vec::new();
    if endpoint_zero(values[0]) {
        roots.push(0.0);
    }
    for k in 1..n {
        let (lo, hi) = (values[k - 1], values[k]);
        if lo == 0.0 {
            roots.push(grid[k - 1]);
        } else if lo.signum() != hi.signum() && hi != 0.0 {
            roots.push(bisect(&f, grid[k - 1], grid[k], lo));
        }
    }
    if values[n - 1] == 0.0 {
        roots.push(grid[n - 1]);
    }
    if endpoint_zero(values[n]) {
        roots.push(PI);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    Ok(roots)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `d²I/dφ²` at `β = 0`: `C²/ln 2 − (C/2)(log2(1+C) − log2(1−C))`, evaluated
/// as `C (C − atanh C) / ln 2` to avoid cancellation at small `C`.
pub fn second_derivative_at_max(c: f64) -> Result<f64> {
    check_open_concurrence(c)?;
    Ok(c * (c - c.atanh()) / LN_2)
}
