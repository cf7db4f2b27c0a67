//! Pure two-qubit states and their one-qubit marginals.
//!
//! A state is stored as the 2×2 amplitude matrix `Ψ_ij` of
//! `|Ψ⟩ = Σ Ψ_ij |i⟩_A |j⟩_B`. Everything else in the crate is derived from it:
//! reduced density matrices, Bloch vectors, the concurrence `C = 2|det Ψ|`,
//! the Schmidt decomposition and the correlation matrix `⟨σ_i ⊗ σ_j⟩`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat2, CVec2, Mat3, Vec3, PAULI, ZERO};
use crate::measurement::MeasurementDirection;

/// Tolerance on `Σ|Ψ_ij|² = 1`.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance used for Hermiticity, trace and positivity of density matrices.
pub const DENSITY_TOL: f64 = 1e-9;
/// Schmidt coefficients closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Normalized pure state of the user qubit `A` and the environment qubit `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amplitudes: CMat2,
}

impl TwoQubitState {
    /// Validates normalization; inputs off by more than [`NORM_TOL`] are
    /// rejected, never rescaled.
    pub fn new(amplitudes: CMat2) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().flatten().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amplitudes })
    }

    /// Row-major order `Ψ_00, Ψ_01, Ψ_10, Ψ_11`.
    pub fn from_row_major(amps: [Complex64; 4]) -> Result<Self> {
        Self::new([[amps[0], amps[1]], [amps[2], amps[3]]])
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalize(amplitudes: CMat2) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().flatten().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::NotNormalized(norm_sq));
        }
        let s = 1.0 / norm_sq.sqrt();
        let mut out = amplitudes;
        out.iter_mut().flatten().for_each(|z| *z *= s);
        Self::new(out)
    }

    /// `√λ1 |00⟩ + √λ2 |11⟩` with concurrence `c`.
    pub fn schmidt_form(c: f64) -> Result<Self> {
        crate::error::check_domain("concurrence", c, 0.0, 1.0, "[0, 1]")?;
        let r = (1.0 - c * c).sqrt();
        let l1 = 0.5 * (1.0 + r);
        let l2 = 0.5 * (1.0 - r);
        Self::new([
            [Complex64::new(l1.sqrt(), 0.0), ZERO],
            [ZERO, Complex64::new(l2.sqrt(), 0.0)],
        ])
    }

    pub fn amplitudes(&self) -> &CMat2 {
        &self.amplitudes
    }

    pub fn row_major(&self) -> [Complex64; 4] {
        let a = &self.amplitudes;
        [a[0][0], a[0][1], a[1][0], a[1][1]]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoQubitState) -> Complex64 {
        self.amplitudes
            .iter()
            .flatten()
            .zip(other.amplitudes.iter().flatten())
            .map(|(u, v)| u.conj() * v)
            .sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &TwoQubitState) -> f64 {
        self.inner(other).norm()
    }
}

/// 2×2 Hermitian, unit-trace, positive semi-definite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    entries: CMat2,
}

impl QubitDensityMatrix {
    pub fn new(entries: CMat2) -> Result<Self> {
        let herm = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if !herm.is_finite() || herm > DENSITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = entries[0][0].re + entries[1][1].re;
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let (eig, _) = linalg::hermitian_eigen(&entries);
        if eig[1] < -DENSITY_TOL {
            return Err(Error::NotPositive(eig[1]));
        }
        Ok(Self { entries })
    }

    /// `½(1 + a·σ)`.
    pub fn from_bloch(a: &BlochVector) -> Self {
        let c = a.components();
        let mut m = linalg::IDENTITY2;
        for (k, p) in PAULI.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += p[i][j] * c[k];
                }
            }
        }
        m.iter_mut().flatten().for_each(|z| *z *= 0.5);
        Self { entries: m }
    }

    pub fn diagonal(p0: f64) -> Result<Self> {
        Self::new([
            [Complex64::new(p0, 0.0), ZERO],
            [ZERO, Complex64::new(1.0 - p0, 0.0)],
        ])
    }

    pub fn entries(&self) -> &CMat2 {
        &self.entries
    }

    /// Eigenvalues in descending order, clamped to `[0, 1]`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (eig, _) = linalg::hermitian_eigen(&self.entries);
        [eig[0].clamp(0.0, 1.0), eig[1].clamp(0.0, 1.0)]
    }
}

/// Real 3-vector with norm at most one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    components: Vec3,
}

impl BlochVector {
    pub fn new(components: Vec3) -> Result<Self> {
        let n = linalg::norm(&components);
        if !n.is_finite() || n > 1.0 + DENSITY_TOL {
            return Err(Error::BlochTooLong(n));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &Vec3 {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.components)
    }
}

/// Reduced density matrix of `subsystem`.
pub fn partial_trace(state: &TwoQubitState, subsystem: Subsystem) -> QubitDensityMatrix {
    let psi = state.amplitudes();
    let mut rho = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            rho[r][c] = match subsystem {
                Subsystem::A => (0..2).map(|j| psi[r][j] * psi[c][j].conj()).sum(),
                Subsystem::B => (0..2).map(|i| psi[i][r] * psi[i][c].conj()).sum(),
            };
        }
    }
    // Exact Hermiticity; the product is Hermitian up to rounding.
    rho[0][0].im = 0.0;
    rho[1][1].im = 0.0;
    rho[1][0] = rho[0][1].conj();
    QubitDensityMatrix { entries: rho }
}

/// `a_i = tr(ρ σ_i)`.
pub fn bloch_vector(rho: &QubitDensityMatrix) -> BlochVector {
    let m = rho.entries();
    let x = 2.0 * m[0][1].re;
    let y = -2.0 * m[0][1].im;
    let z = m[0][0].re - m[1][1].re;
    let mut components = [x, y, z];
    let n = linalg::norm(&components);
    if n > 1.0 {
        components = linalg::scale(&components, 1.0 / n);
    }
    BlochVector { components }
}

/// `C = 2|det Ψ|`.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let a = state.amplitudes();
    (2.0 * (a[0][0] * a[1][1] - a[0][1] * a[1][0]).norm()).clamp(0.0, 1.0)
}

/// `tr(ρ²)`.
pub fn purity(rho: &QubitDensityMatrix) -> f64 {
    let m = rho.entries();
    let p = m[0][0].re.powi(2) + m[1][1].re.powi(2) + 2.0 * m[0][1].norm_sqr();
    p.clamp(0.5, 1.0)
}

/// Local orthonormal bases of the Schmidt form `√λ1|↑↑⟩ + √λ2|↓↓⟩`.
///
/// `basis_a[0]`/`basis_b[0]` are the `|↑⟩` kets, expressed in the
/// computational basis of their qubit. The coefficients of the Schmidt form
/// are real and non-negative with these kets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtDecomposition {
    pub lambda1: f64,
    pub lambda2: f64,
    pub basis_a: [CVec2; 2],
    pub basis_b: [CVec2; 2],
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> TwoQubitState {
        let s = [self.lambda1.sqrt(), self.lambda2.sqrt()];
        let mut amps = [[ZERO; 2]; 2];
        for (k, sk) in s.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    amps[i][j] += self.basis_a[k][i] * self.basis_b[k][j] * *sk;
                }
            }
        }
        TwoQubitState { amplitudes: amps }
    }

    /// Bloch-sphere rotations taking Schmidt-frame coordinates to lab ones.
    pub fn frame(&self) -> SchmidtFrame {
        let unitary = |b: &[CVec2; 2]| -> CMat2 { [[b[0][0], b[1][0]], [b[0][1], b[1][1]]] };
        SchmidtFrame {
            rot_a: linalg::adjoint_rotation(&unitary(&self.basis_a)),
            rot_b: linalg::adjoint_rotation(&unitary(&self.basis_b)),
        }
    }
}

/// Pair of proper rotations relating lab Bloch coordinates to the frame in
/// which both reduced Bloch vectors lie on `+z` and the correlation matrix is
/// `diag(C, −C, 1)`. Columns of each matrix are the Schmidt-frame axes in lab
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtFrame {
    pub rot_a: Mat3,
    pub rot_b: Mat3,
}

impl SchmidtFrame {
    fn rotation(&self, subsystem: Subsystem) -> &Mat3 {
        match subsystem {
            Subsystem::A => &self.rot_a,
            Subsystem::B => &self.rot_b,
        }
    }

    pub fn to_schmidt(&self, subsystem: Subsystem, lab: &Vec3) -> Vec3 {
        linalg::mat_t_vec(self.rotation(subsystem), lab)
    }

    pub fn to_lab(&self, subsystem: Subsystem, schmidt: &Vec3) -> Vec3 {
        linalg::mat_vec(self.rotation(subsystem), schmidt)
    }
}

pub fn schmidt_decompose(state: &TwoQubitState) -> SchmidtDecomposition {
    let psi = state.amplitudes();
    let rho_a = partial_trace(state, Subsystem::A);
    let (eig, top) = linalg::hermitian_eigen(rho_a.entries());
    let lambda1 = eig[0].clamp(0.5, 1.0);
    let lambda2 = 1.0 - lambda1;

    let u1 = if lambda1 - lambda2 < DEGENERACY_TOL {
        [linalg::ONE, ZERO]
    } else {
        linalg::fix_phase(&top)
    };
    let u2 = linalg::fix_phase(&linalg::orthogonal_complement(&u1));

    // ⟨u|_A |Ψ⟩ as a ket of B.
    let project = |u: &CVec2| -> CVec2 {
        [
            u[0].conj() * psi[0][0] + u[1].conj() * psi[1][0],
            u[0].conj() * psi[0][1] + u[1].conj() * psi[1][1],
        ]
    };
    let t1 = project(&u1);
    let n1 = linalg::cvec_norm(&t1);
    let b1 = [t1[0] / n1, t1[1] / n1];
    let mut b2 = linalg::fix_phase(&linalg::orthogonal_complement(&b1));
    let coeff = linalg::inner(&b2, &project(&u2));
    if coeff.norm() > 1e-14 {
        let phase = coeff / coeff.norm();
        b2 = [b2[0] * phase, b2[1] * phase];
    }

    SchmidtDecomposition {
        lambda1,
        lambda2,
        basis_a: [u1, u2],
        basis_b: [b1, b2],
    }
}

/// Real 3×3 matrix of two-qubit Pauli expectation values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub entries: Mat3,
}

impl CorrelationMatrix {
    /// `e_Aᵀ K̃ e_B`.
    pub fn bilinear(&self, e_a: &Vec3, e_b: &Vec3) -> f64 {
        linalg::dot(e_a, &linalg::mat_vec(&self.entries, e_b))
    }

    /// Coordinates of the same correlations in the given Schmidt frame.
    pub fn in_frame(&self, frame: &SchmidtFrame) -> CorrelationMatrix {
        let m = linalg::mat_mul(
            &linalg::transpose(&frame.rot_a),
            &linalg::mat_mul(&self.entries, &frame.rot_b),
        );
        CorrelationMatrix { entries: m }
    }
}

/// Lab-frame `K̃_ij = ⟨Ψ|σ_i ⊗ σ_j|Ψ⟩`.
pub fn correlation_matrix(state: &TwoQubitState) -> CorrelationMatrix {
    let psi = state.amplitudes();
    let mut k = [[0.0; 3]; 3];
    for (i, si) in PAULI.iter().enumerate() {
        for (j, sj) in PAULI.iter().enumerate() {
            // tr(Ψ† σ_i Ψ σ_jᵀ)
            let mut acc = ZERO;
            for p in 0..2 {
                for q in 0..2 {
                    for r in 0..2 {
                        for s in 0..2 {
                            acc += psi[p][q].conj() * si[p][r] * sj[q][s] * psi[r][s];
                        }
                    }
                }
            }
            k[i][j] = acc.re.clamp(-1.0, 1.0);
        }
    }
    CorrelationMatrix { entries: k }
}

/// Seeded source of Haar-random states and measurement directions.
///
/// Uses ChaCha20 seeded with `seed_from_u64`, so streams are reproducible
/// across platforms.
#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: ChaCha20Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Four independent complex Gaussians, normalized.
    pub fn pure_state(&mut self) -> TwoQubitState {
        loop {
            let amps = [
                [self.complex_gaussian(), self.complex_gaussian()],
                [self.complex_gaussian(), self.complex_gaussian()],
            ];
            if let Ok(s) = TwoQubitState::normalize(amps) {
                return s;
            }
        }
    }

    /// Haar-random 2×2 unitary.
    fn unitary(&mut self) -> CMat2 {
        let v = loop {
            let v = [self.complex_gaussian(), self.complex_gaussian()];
            let n = linalg::cvec_norm(&v);
            if n > 1e-12 {
                break [v[0] / n, v[1] / n];
            }
        };
        let w = linalg::orthogonal_complement(&v);
        let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * self.uniform());
        [[v[0], w[0] * phase], [v[1], w[1] * phase]]
    }

    /// Random local rotation of `√λ1|00⟩ + √λ2|11⟩`, so the concurrence is
    /// exactly `c` while the Schmidt bases are random.
    pub fn state_with_concurrence(&mut self, c: f64) -> Result<TwoQubitState> {
        let base = TwoQubitState::schmidt_form(c)?;
        let ua = self.unitary();
        let ub = self.unitary();
        let d = base.amplitudes();
        // Ψ = U_A D U_Bᵀ
        let mut amps = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                amps[i][j] = ua[i][0] * d[0][0] * ub[j][0] + ua[i][1] * d[1][1] * ub[j][1];
            }
        }
        TwoQubitState::normalize(amps)
    }

    /// Uniform direction on the sphere.
    pub fn direction(&mut self) -> MeasurementDirection {
        loop {
            let v = [self.gaussian(), self.gaussian(), self.gaussian()];
            let n = linalg::norm(&v);
            if n > 1e-9 {
                return MeasurementDirection::new_unchecked(linalg::scale(&v, 1.0 / n));
            }
        }
    }

    /// Uniform direction in the plane orthogonal to `axis`; any direction when
    /// `axis` vanishes.
    pub fn perpendicular_direction(&mut self, axis: &Vec3) -> MeasurementDirection {
        let an = linalg::norm(axis);
        if an < 1e-12 {
            return self.direction();
        }
        let hat = linalg::scale(axis, 1.0 / an);
        loop {
            let v = *self.direction().components();
            let w = linalg::sub(&v, &linalg::scale(&hat, linalg::dot(&v, &hat)));
            let n = linalg::norm(&w);
            if n > 1e-6 {
                return MeasurementDirection::new_unchecked(linalg::scale(&w, 1.0 / n));
            }
        }
    }
}

/// Haar-random pure state from a fixed seed.
pub fn random_pure_state(seed: u64) -> TwoQubitState {
    StateSampler::new(seed).pure_state()
}
