//! Direct Born-rule evaluations, kept independent of the Bloch-vector and
//! correlation-matrix formulas they are used to check.

use num_complex::Complex64;

use crate::linalg::{self, CMat2};
use crate::measurement::MeasurementDirection;
use crate::state::TwoQubitState;

/// `⟨Ψ| X ⊗ Y |Ψ⟩` by explicit index contraction.
pub fn expectation(state: &TwoQubitState, x: &CMat2, y: &CMat2) -> Complex64 {
    let psi = state.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    acc += psi[i][j].conj() * x[i][k] * y[j][l] * psi[k][l];
                }
            }
        }
    }
    acc
}

/// `W(a, b) = ⟨Ψ|Π_A(a) ⊗ Π_B(b)|Ψ⟩`.
pub fn born_rule_joint(
    state: &TwoQubitState,
    e_a: &MeasurementDirection,
    e_b: &MeasurementDirection,
) -> [[f64; 2]; 2] {
    let mut w = [[0.0; 2]; 2];
    for (a, row) in w.iter_mut().enumerate() {
        let pa = linalg::projector(e_a.components(), a as u8);
        for (b, cell) in row.iter_mut().enumerate() {
            let pb = linalg::projector(e_b.components(), b as u8);
            *cell = expectation(state, &pa, &pb).re;
        }
    }
    w
}

/// Mutual information in bits of a raw 2×2 table, with `0 log 0 = 0`.
pub fn table_mutual_information(w: &[[f64; 2]; 2]) -> f64 {
    let wa = [w[0][0] + w[0][1], w[1][0] + w[1][1]];
    let wb = [w[0][0] + w[1][0], w[0][1] + w[1][1]];
    let mut total = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            if w[a][b] > 0.0 {
                total += w[a][b] * (w[a][b] / (wa[a] * wb[b])).log2();
            }
        }
    }
    total
}
