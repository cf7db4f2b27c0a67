//! Entropies and information measures, all in bits.
//!
//! `0 log 0` is taken as 0 throughout; arguments below [`LOG_FLOOR`] short-circuit
//! to that convention.

use num_complex::Complex64;
use std::f64::consts::LN_2;

use crate::error::{check_domain, Error, Result};
use crate::linalg::{self, CVec2, ZERO};
use crate::measurement::{sign, JointDistribution, MeasurementDirection, MeasurementParameters, PROB_CLAMP};
use crate::state::{
    bloch_vector, concurrence, partial_trace, purity, schmidt_decompose, QubitDensityMatrix,
    Subsystem, TwoQubitState,
};

pub const LOG_FLOOR: f64 = 1e-300;
/// Eigenvalue gap below which the subentropy uses its analytic limit.
pub const SUBENTROPY_DEGENERACY: f64 = 1e-6;
/// `|e_A·a_A|` allowed by the uniform-user-bit precondition.
pub const PERPENDICULAR_TOL: f64 = 1e-8;

fn xlog2x(x: f64) -> f64 {
    if x < LOG_FLOOR {
        0.0
    } else {
        x * x.log2()
    }
}

/// `Σ w(a,b) log2(w(a,b) / (w_A(a) w_B(b)))`, clamped to `[0, 1]`.
pub fn mutual_information(joint: &JointDistribution) -> f64 {
    let wa = joint.marginal_a();
    let wb = joint.marginal_b();
    let mut total = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let w = joint.get(a, b);
            if w >= LOG_FLOOR {
                total += w * (w / (wa[a] * wb[b])).log2();
            }
        }
    }
    total.clamp(0.0, 1.0)
}

/// Mutual information written directly in `(α, β, κ)`:
/// `¼ Σ n_ab log2(n_ab / ((1 ± α)(1 ± β)))` with
/// `n_ab = 1 + (−1)^a α + (−1)^b β + (−1)^{a+b} κ`.
pub fn mutual_information_abk(p: &MeasurementParameters) -> Result<f64> {
    let mut total = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let (sa, sb) = (sign(a), sign(b));
            let n = 1.0 + sa * p.alpha + sb * p.beta + sa * sb * p.kappa;
            if n < -4.0 * PROB_CLAMP {
                return Err(Error::NegativeProbability(0.25 * n));
            }
            if n >= LOG_FLOOR {
                let denom = (1.0 + sa * p.alpha) * (1.0 + sb * p.beta);
                total += n * (n / denom).log2();
            }
        }
    }
    Ok((0.25 * total).clamp(0.0, 1.0))
}

/// Same sum as [`mutual_information_abk`] for hot loops: no validation, and
/// rounding-level negative cells count as zero.
pub(crate) fn mi_abk_unchecked(alpha: f64, beta: f64, kappa: f64) -> f64 {
    let mut total = 0.0;
    for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let n = 1.0 + sa * alpha + sb * beta + sa * sb * kappa;
        if n >= LOG_FLOOR {
            total += n * (n / ((1.0 + sa * alpha) * (1.0 + sb * beta))).log2();
        }
    }
    (0.25 * total).max(0.0)
}

/// `H_b(p) = −p log2 p − (1−p) log2(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_domain("p", p, 0.0, 1.0, "[0, 1]")?;
    Ok(-xlog2x(p) - xlog2x(1.0 - p))
}

/// Exact maximum of the attacker's information for a user with uniform bits:
/// `((1+C)/2) log2(1+C) + ((1−C)/2) log2(1−C)`.
pub fn i_max(c: f64) -> Result<f64> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    if c == 1.0 {
        return Ok(1.0);
    }
    // Same sum as [ln(1 − C²) + 2C atanh C] / (2 ln 2), which keeps full
    // relative precision as C → 0.
    let v = ((-c * c).ln_1p() + 2.0 * c * c.atanh()) / (2.0 * LN_2);
    Ok(v.clamp(0.0, 1.0))
}

/// Weak-entanglement approximation `C² / (2 ln 2)`; the error is `O(C³)`.
pub fn i_max_small_c(c: f64) -> Result<f64> {
    if c.is_nan() || !(0.0..1.0).contains(&c) {
        return Err(Error::Domain {
            name: "concurrence",
            value: c,
            domain: "[0, 1)",
        });
    }
    Ok(c * c / (2.0 * LN_2))
}

/// `C = √(2(1 − P))` for a reduced state of purity `P`.
pub fn concurrence_from_purity(p: f64) -> Result<f64> {
    check_domain("purity", p, 0.5, 1.0, "[1/2, 1]")?;
    Ok((2.0 * (1.0 - p)).max(0.0).sqrt().min(1.0))
}

/// Maximum from the user's purity alone, i.e. from tomography of `ρ_A`.
pub fn i_max_from_purity(p: f64) -> Result<f64> {
    i_max(concurrence_from_purity(p)?)
}

/// Near-pure linearization `(1 − P) / ln 2`.
pub fn i_max_purity_linear(p: f64) -> Result<f64> {
    check_domain("purity", p, 0.5, 1.0, "[1/2, 1]")?;
    Ok((1.0 - p) / LN_2)
}

/// Von Neumann entropy `−Σ λ log2 λ` of the eigenvalues.
pub fn shannon_entropy(rho: &QubitDensityMatrix) -> f64 {
    let [l1, l2] = rho.eigenvalues();
    -xlog2x(l1) - xlog2x(l2)
}

/// Qubit subentropy from the larger eigenvalue `λ ∈ [½, 1]`.
fn subentropy_qubit(lambda: f64) -> f64 {
    let gap = 2.0 * lambda - 1.0;
    if gap < SUBENTROPY_DEGENERACY {
        // Limit of the ratio at λ = ½ plus its quadratic correction.
        let eps = lambda - 0.5;
        return 1.0 - 1.0 / (2.0 * LN_2) - 2.0 / (3.0 * LN_2) * eps * eps;
    }
    let mu = 1.0 - lambda;
    let q = -(lambda * lambda / gap) * log2_or_zero(lambda) + (mu * mu / gap) * log2_or_zero(mu);
    q.max(0.0)
}

fn log2_or_zero(x: f64) -> f64 {
    if x < LOG_FLOOR {
        0.0
    } else {
        x.log2()
    }
}

/// Subentropy `Q = −Σ_k (Π_{l≠k} λ_k/(λ_k − λ_l)) λ_k log2 λ_k`.
pub fn subentropy(rho: &QubitDensityMatrix) -> f64 {
    subentropy_qubit(rho.eigenvalues()[0])
}

fn larger_eigenvalue(c: f64) -> f64 {
    0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())
}

/// Holevo bound `H_b((1 + √(1−C²))/2)`, the entropy of the attacker's qubit.
pub fn holevo_bound(c: f64) -> Result<f64> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    binary_entropy(larger_eigenvalue(c))
}

/// Jozsa–Robb–Wootters lower bound, the subentropy of the attacker's qubit.
pub fn jrw_bound(c: f64) -> Result<f64> {
    check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
    Ok(subentropy_qubit(larger_eigenvalue(c)))
}

/// The three information figures for one concurrence value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyBounds {
    pub i_max: f64,
    pub holevo: f64,
    pub jrw: f64,
    pub concurrence: f64,
    pub purity: f64,
}

pub fn privacy_bounds(c: f64) -> Result<PrivacyBounds> {
    Ok(PrivacyBounds {
        i_max: i_max(c)?,
        holevo: holevo_bound(c)?,
        jrw: jrw_bound(c)?,
        concurrence: c,
        purity: 1.0 - 0.5 * c * c,
    })
}

/// Attacker's states conditioned on the user's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalStatePair {
    /// `|ψ_0⟩_B` in the computational basis of `B`.
    pub psi0: CVec2,
    pub psi1: CVec2,
    pub overlap: f64,
}

impl ConditionalStatePair {
    /// `½(|ψ_0⟩⟨ψ_0| + |ψ_1⟩⟨ψ_1|)`, which reproduces `ρ_B`.
    pub fn ensemble_density(&self) -> Result<QubitDensityMatrix> {
        let mut m = [[ZERO; 2]; 2];
        for psi in [&self.psi0, &self.psi1] {
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += psi[i] * psi[j].conj() * 0.5;
                }
            }
        }
        QubitDensityMatrix::new(m)
    }
}

/// Conditional states `|ψ_a⟩_B = ⟨ψ_a|_A |Ψ⟩ / √W(a)` for a user measuring
/// along `e_A ⟂ a_A`.
///
/// The user's kets are built in the Schmidt basis of `A` as
/// `cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩` (and its orthogonal partner), where
/// `(θ, φ)` are the Schmidt-frame angles of `e_A`; both kets carry the extra
/// global phase `e^{i·phase}`. With `phase = 0` and `θ = π/2` the attacker kets
/// have Schmidt amplitudes `√((1 ± |a_A|)/2)`.
pub fn conditional_attacker_states(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
    phase: f64,
) -> Result<ConditionalStatePair> {
    let a_a = *bloch_vector(&partial_trace(state, Subsystem::A)).components();
    let alpha = linalg::dot(e_a.components(), &a_a);
    if alpha.abs() > PERPENDICULAR_TOL {
        return Err(Error::Precondition(format!(
            "user direction must be perpendicular to the Bloch vector (e_A·a_A = {alpha})"
        )));
    }
    let decomposition = schmidt_decompose(state);
    let e = decomposition
        .frame()
        .to_schmidt(Subsystem::A, e_a.components());
    let theta = e[2].clamp(-1.0, 1.0).acos();
    let azimuth = e[1].atan2(e[0]);
    let (up, down) = (decomposition.basis_a[0], decomposition.basis_a[1]);
    let global = Complex64::from_polar(1.0, phase);
    let tilt = Complex64::from_polar(1.0, azimuth);
    let (s, c) = (0.5 * theta).sin_cos();
    let ket = |cu: Complex64, cd: Complex64| -> CVec2 {
        [
            (up[0] * cu + down[0] * cd) * global,
            (up[1] * cu + down[1] * cd) * global,
        ]
    };
    let user = [
        ket(Complex64::new(c, 0.0), tilt * s),
        ket(Complex64::new(s, 0.0), -tilt * c),
    ];

    let psi = state.amplitudes();
    let condition = |u: &CVec2| -> Result<CVec2> {
        let t = [
            u[0].conj() * psi[0][0] + u[1].conj() * psi[1][0],
            u[0].conj() * psi[0][1] + u[1].conj() * psi[1][1],
        ];
        let n = linalg::cvec_norm(&t);
        if n < 1e-300 {
            return Err(Error::Precondition("user outcome has zero probability".into()));
        }
        Ok([t[0] / n, t[1] / n])
    };
    let psi0 = condition(&user[0])?;
    let psi1 = condition(&user[1])?;
    let overlap = linalg::inner(&psi0, &psi1).norm().clamp(0.0, 1.0);
    Ok(ConditionalStatePair {
        psi0,
        psi1,
        overlap,
    })
}

/// Bounds for a state: `C`, purity of `ρ_A` and the three information figures.
pub fn state_bounds(state: &TwoQubitState) -> Result<PrivacyBounds> {
    let c = concurrence(state);
    let mut b = privacy_bounds(c)?;
    b.purity = purity(&partial_trace(state, Subsystem::A));
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::JointDistribution;
    use crate::state::StateSampler;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn params(alpha: f64, beta: f64, kappa: f64) -> MeasurementParameters {
        MeasurementParameters::new(alpha, beta, kappa).unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        let product = JointDistribution::new([[0.3 * 0.6, 0.3 * 0.4], [0.7 * 0.6, 0.7 * 0.4]]).unwrap();
        assert_close(mutual_information(&product), 0.0, 1e-15);
        let perfect = JointDistribution::new([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert_close(mutual_information(&perfect), 1.0, 1e-15);

        // Direct summation: ½(1.8 log2 1.8 + 0.2 log2 0.2).
        let oracle = 0.5 * (1.8 * 1.8f64.log2() + 0.2 * 0.2f64.log2());
        assert_close(oracle, 0.531004406411, 1e-12);
        let j = JointDistribution::new([[0.45, 0.05], [0.05, 0.45]]).unwrap();
        assert_close(mutual_information(&j), oracle, 1e-12);
    }

    #[test]
    fn abk_examples() {
        assert_close(mutual_information_abk(&params(0.0, 0.0, 0.0)).unwrap(), 0.0, 1e-15);
        assert_close(mutual_information_abk(&params(0.0, 0.0, 1.0)).unwrap(), 1.0, 1e-15);
        assert_close(mutual_information_abk(&params(0.0, 0.0, -1.0)).unwrap(), 1.0, 1e-15);

        // Four-term sum with α = 0, β = 0.3, κ = 0.5.
        let mut oracle = 0.0;
        for (sb, sab) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)] {
            let n: f64 = 1.0 + sb * 0.3 + sab * 0.5;
            oracle += 0.25 * n * (n / (1.0 + sb * 0.3)).log2();
        }
        assert_close(mutual_information_abk(&params(0.0, 0.3, 0.5)).unwrap(), oracle, 1e-14);

        assert!(matches!(
            mutual_information_abk(&params(0.9, 0.9, -0.9)),
            Err(Error::NegativeProbability(_))
        ));
    }

    #[test]
    fn binary_entropy_examples() {
        assert_close(binary_entropy(0.5).unwrap(), 1.0, 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let oracle = -0.8 * 0.8f64.log2() - 0.2 * 0.2f64.log2();
        assert_close(binary_entropy(0.8).unwrap(), oracle, 1e-15);
        assert_close(oracle, 0.721928094887, 1e-12);
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn i_max_examples() {
        assert_eq!(i_max(0.0).unwrap(), 0.0);
        assert_eq!(i_max(1.0).unwrap(), 1.0);
        assert_close(i_max(0.5).unwrap(), 0.188721875540, 1e-12);
        let tiny = 1e-9;
        assert_close(i_max(tiny).unwrap() / (tiny * tiny / (2.0 * LN_2)), 1.0, 1e-9);
        assert!(i_max(-0.1).is_err());
        for k in 0..=1000 {
            let c = k as f64 / 1000.0;
            let via_entropy = 1.0 - binary_entropy(0.5 * (1.0 + c)).unwrap();
            assert_close(i_max(c).unwrap(), via_entropy, 1e-12);
        }
    }

    #[test]
    fn small_c_examples() {
        assert_eq!(i_max_small_c(0.0).unwrap(), 0.0);
        assert_close(i_max_small_c(0.1).unwrap(), 0.01 / (2.0 * LN_2), 1e-15);
        assert_close(i_max_small_c(0.1).unwrap(), 0.0072135, 1e-7);
        assert!((i_max(0.1).unwrap() - i_max_small_c(0.1).unwrap()).abs() <= 1e-3);
        assert!(i_max_small_c(1.0).is_err());
    }

    #[test]
    fn purity_route() {
        assert_close(i_max_from_purity(1.0).unwrap(), 0.0, 1e-15);
        assert_close(i_max_from_purity(0.5).unwrap(), 1.0, 1e-15);
        assert_close(i_max_from_purity(0.875).unwrap(), i_max(0.5).unwrap(), 1e-12);
        assert!(i_max_from_purity(0.4).is_err());
        assert!(i_max_purity_linear(1.01).is_err());
    }

    #[test]
    fn shannon_examples() {
        assert_close(shannon_entropy(&QubitDensityMatrix::diagonal(1.0).unwrap()), 0.0, 1e-15);
        assert_close(shannon_entropy(&QubitDensityMatrix::diagonal(0.5).unwrap()), 1.0, 1e-15);
        assert_close(
            shannon_entropy(&QubitDensityMatrix::diagonal(0.8).unwrap()),
            0.721928094887,
            1e-12,
        );
    }

    #[test]
    fn subentropy_examples() {
        assert_close(subentropy(&QubitDensityMatrix::diagonal(1.0).unwrap()), 0.0, 1e-15);

        let closed = |l: f64| -> f64 {
            -(l * l / (2.0 * l - 1.0)) * l.log2() + ((1.0 - l).powi(2) / (2.0 * l - 1.0)) * (1.0 - l).log2()
        };
        assert_close(subentropy(&QubitDensityMatrix::diagonal(0.8).unwrap()), closed(0.8), 1e-15);
        assert_close(subentropy(&QubitDensityMatrix::diagonal(0.2).unwrap()), closed(0.8), 1e-15);

        // Richardson extrapolation of the closed form towards λ = ½.
        let h = 1e-4;
        let extrapolated = (4.0 * closed(0.5 + h) - closed(0.5 + 2.0 * h)) / 3.0;
        let lhopital = 1.0 - 1.0 / (2.0 * LN_2);
        assert_close(extrapolated, lhopital, 1e-9);
        assert_close(subentropy(&QubitDensityMatrix::diagonal(0.5).unwrap()), lhopital, 1e-15);
        // Continuity across the switch to the limit form.
        let just_above = 0.5 + 0.6 * SUBENTROPY_DEGENERACY;
        let just_below = 0.5 + 0.4 * SUBENTROPY_DEGENERACY;
        assert_close(
            subentropy(&QubitDensityMatrix::diagonal(just_above).unwrap()),
            subentropy(&QubitDensityMatrix::diagonal(just_below).unwrap()),
            1e-9,
        );
    }

    #[test]
    fn holevo_and_jrw_examples() {
        assert_eq!(holevo_bound(0.0).unwrap(), 0.0);
        assert_close(holevo_bound(1.0).unwrap(), 1.0, 1e-15);
        assert_eq!(jrw_bound(0.0).unwrap(), 0.0);

        let s = TwoQubitState::schmidt_form(0.5).unwrap();
        let rho_b = partial_trace(&s, Subsystem::B);
        let r = 0.75f64.sqrt();
        let eig = [(1.0 + r) / 2.0, (1.0 - r) / 2.0];
        let h = -eig[0] * eig[0].log2() - eig[1] * eig[1].log2();
        assert_close(holevo_bound(0.5).unwrap(), h, 1e-14);
        assert_close(holevo_bound(0.5).unwrap(), shannon_entropy(&rho_b), 1e-12);

        // JRW closed form in terms of √(1 − C²).
        let jrw = -((1.0 + r).powi(2) / (4.0 * r)) * ((1.0 + r) / 2.0).log2()
            + ((1.0 - r).powi(2) / (4.0 * r)) * ((1.0 - r) / 2.0).log2();
        assert_close(jrw_bound(0.5).unwrap(), jrw, 1e-14);
        assert_close(jrw_bound(0.5).unwrap(), subentropy(&rho_b), 1e-12);

        for k in 1..100 {
            let c = k as f64 / 100.0;
            let b = privacy_bounds(c).unwrap();
            assert!(b.jrw <= b.i_max && b.i_max <= b.holevo, "{b:?}");
        }
    }

    #[test]
    fn conditional_states_examples() {
        let mut sampler = StateSampler::new(21);

        let bell = sampler.state_with_concurrence(1.0).unwrap();
        let e = sampler.direction();
        let pair = conditional_attacker_states(&bell, &e, 0.0).unwrap();
        assert_close(pair.overlap, 0.0, 1e-12);

        let s = sampler.state_with_concurrence(0.6).unwrap();
        let a = *bloch_vector(&partial_trace(&s, Subsystem::A)).components();
        let e = sampler.perpendicular_direction(&a);
        let pair = conditional_attacker_states(&s, &e, 0.3).unwrap();
        assert_close(pair.overlap, 0.8, 1e-10);
        assert_close(linalg::inner(&pair.psi0, &pair.psi1).norm(), pair.overlap, 1e-10);

        // ρ_B is the equal mixture of the two conditional states.
        let rho = pair.ensemble_density().unwrap();
        let rho_b = partial_trace(&s, Subsystem::B);
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.entries()[i][j] - rho_b.entries()[i][j]).norm() < 1e-10);
            }
        }

        assert!(matches!(
            conditional_attacker_states(&s, &MeasurementDirection::new_unchecked(linalg::scale(&a, 1.0 / linalg::norm(&a))), 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conditional_state_amplitudes_in_schmidt_basis() {
        let s = TwoQubitState::schmidt_form(0.6).unwrap();
        let pair = conditional_attacker_states(&s, &MeasurementDirection::x(), 0.0).unwrap();
        let plus = (0.5f64 * (1.0 + 0.8)).sqrt();
        let minus = (0.5f64 * (1.0 - 0.8)).sqrt();
        assert_close(pair.psi0[0].re, plus, 1e-12);
        assert_close(pair.psi0[1].re, minus, 1e-12);
        assert_close(pair.psi1[0].re, plus, 1e-12);
        assert_close(pair.psi1[1].re, -minus, 1e-12);
        assert_close(linalg::inner(&pair.psi0, &pair.psi1).re, 0.8, 1e-12);
    }
}
