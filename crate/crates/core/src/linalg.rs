//! Small fixed-size vector and matrix helpers.

use num_complex::Complex64;

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type CVec2 = [Complex64; 2];
pub type CMat2 = [[Complex64; 2]; 2];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices σ_x, σ_y, σ_z.
pub const PAULI: [CMat2; 3] = [
    [[ZERO, ONE], [ONE, ZERO]],
    [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
];

pub const IDENTITY2: CMat2 = [[ONE, ZERO], [ZERO, ONE]];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn mat_t_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o += row[j] * v[i];
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = *x;
        }
    }
    t
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn cmat_mul(a: &CMat2, b: &CMat2) -> CMat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adjoint(a: &CMat2) -> CMat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn trace(a: &CMat2) -> Complex64 {
    a[0][0] + a[1][1]
}

pub fn cvec_norm(v: &CVec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &CVec2, v: &CVec2) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Unit vector orthogonal to `v` (assumed normalized).
pub fn orthogonal_complement(v: &CVec2) -> CVec2 {
    [-v[1].conj(), v[0].conj()]
}

/// Multiplies `v` by a global phase so that its first nonzero component is
/// real and positive.
pub fn fix_phase(v: &CVec2) -> CVec2 {
    let pivot = if v[0].norm() > 1e-12 { v[0] } else { v[1] };
    if pivot.norm() == 0.0 {
        return *v;
    }
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase, v[1] * phase]
}

/// Projector `½(1 + (−1)^bit e·σ)`.
pub fn projector(e: &Vec3, bit: u8) -> CMat2 {
    let sign = if bit == 0 { 1.0 } else { -1.0 };
    let mut p = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut x = IDENTITY2[i][j];
            for (k, pauli) in PAULI.iter().enumerate() {
                x += pauli[i][j] * (sign * e[k]);
            }
            p[i][j] = x * 0.5;
        }
    }
    p
}

/// Eigen-decomposition of a 2×2 Hermitian matrix: eigenvalues in descending
/// order and the normalized eigenvector of the larger one.
pub fn hermitian_eigen(m: &CMat2) -> ([f64; 2], CVec2) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = m[0][1];
    let half_gap = (((a - d) * 0.5).powi(2) + b.norm_sqr()).sqrt();
    let mean = 0.5 * (a + d);
    let l1 = mean + half_gap;
    let l2 = mean - half_gap;
    if b.norm() < 1e-300 {
        let v = if a >= d { [ONE, ZERO] } else { [ZERO, ONE] };
        return ([l1, l2], v);
    }
    // Two algebraically equivalent eigenvectors; keep the better conditioned one.
    let v1 = [b, Complex64::new(l1 - a, 0.0)];
    let v2 = [Complex64::new(l1 - d, 0.0), b.conj()];
    let v = if cvec_norm(&v1) >= cvec_norm(&v2) { v1 } else { v2 };
    let n = cvec_norm(&v);
    ([l1, l2], [v[0] / n, v[1] / n])
}

/// Bloch-sphere rotation induced by a 2×2 unitary: column `j` is the lab Bloch
/// vector of `U σ_j U†`.
pub fn adjoint_rotation(u: &CMat2) -> Mat3 {
    let ud = adjoint(u);
    let mut r = [[0.0; 3]; 3];
    for (j, sj) in PAULI.iter().enumerate() {
        let rotated = cmat_mul(&cmat_mul(u, sj), &ud);
        for (i, si) in PAULI.iter().enumerate() {
            r[i][j] = 0.5 * trace(&cmat_mul(si, &rotated)).re;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diagonal_and_offdiagonal() {
        let m = [[Complex64::new(0.2, 0.0), ZERO], [ZERO, Complex64::new(0.8, 0.0)]];
        let (l, v) = hermitian_eigen(&m);
        assert!((l[0] - 0.8).abs() < 1e-15 && (l[1] - 0.2).abs() < 1e-15);
        assert!((v[1].norm() - 1.0).abs() < 1e-15);

        let m = [
            [Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, -0.2), Complex64::new(0.5, 0.0)],
        ];
        let (l, v) = hermitian_eigen(&m);
        let mv = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
        for k in 0..2 {
            assert!((mv[k] - v[k] * l[0]).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_of_identity_is_identity() {
        let r = adjoint_rotation(&IDENTITY2);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((r[i][j] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = [
            [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ];
        let r = adjoint_rotation(&u);
        assert!((r[2][0] - 1.0).abs() < 1e-15);
        assert!((r[0][2] - 1.0).abs() < 1e-15);
        assert!((r[1][1] + 1.0).abs() < 1e-15);
    }
}
