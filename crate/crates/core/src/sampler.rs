//! Finite-sample measurement records.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::measurement::JointDistribution;

/// Name of the generator behind [`sample_bits`].
pub const RNG_ALGORITHM: &str = "ChaCha20Rng/seed_from_u64";

/// Outcome counts `n(a, b)` of a simulated run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRecord {
    pub counts: [[u64; 2]; 2],
    pub total: u64,
    pub seed: u64,
    pub rng: &'static str,
}

impl BitRecord {
    pub fn from_counts(counts: [[u64; 2]; 2], seed: u64) -> Result<Self> {
        let total = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::Precondition("empty record".into()));
        }
        Ok(Self {
            counts,
            total,
            seed,
            rng: RNG_ALGORITHM,
        })
    }

    /// `a,b,count` CSV, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,count\n");
        for a in 0..2 {
            for b in 0..2 {
                writeln!(out, "{a},{b},{}", self.counts[a][b]).expect("writing to a String");
            }
        }
        out
    }
}

/// Draws `n` independent outcome pairs from `joint`. Single-threaded, so the
/// counts are fixed by `seed`.
pub fn sample_bits(joint: &JointDistribution, n: u64, seed: u64) -> Result<BitRecord> {
    if n == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let cells = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let mut cumulative = [0.0; 4];
    let mut acc = 0.0;
    for (k, &(a, b)) in cells.iter().enumerate() {
        acc += joint.get(a, b);
        cumulative[k] = acc;
    }
    let fallback = cells
        .iter()
        .rposition(|&(a, b)| joint.get(a, b) > 0.0)
        .expect("a joint distribution has a non-zero cell");

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = [[0u64; 2]; 2];
    for _ in 0..n {
        let u: f64 = rng.random();
        let k = cumulative.iter().position(|&c| u < c).unwrap_or(fallback);
        let (a, b) = cells[k];
        counts[a][b] += 1;
    }
    BitRecord::from_counts(counts, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    /// Mutual information of the empirical frequencies.
    #[default]
    PlugIn,
    /// Plug-in plus the Miller–Madow correction of each entropy term,
    /// `((m_A − 1) + (m_B − 1) − (m_AB − 1)) / (2n ln 2)` with `m` the number
    /// of occupied cells.
    MillerMadow,
}

fn entropy_of_counts(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| {
            let p = k as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Plug-in estimate, `0·log 0 = 0`.
pub fn empirical_mi(record: &BitRecord) -> f64 {
    empirical_mi_with(record, Estimator::PlugIn)
}

pub fn empirical_mi_with(record: &BitRecord, estimator: Estimator) -> f64 {
    let n = record.total as f64;
    let c = &record.counts;
    let joint = [c[0][0], c[0][1], c[1][0], c[1][1]];
    let row = [c[0][0] + c[0][1], c[1][0] + c[1][1]];
    let col = [c[0][0] + c[1][0], c[0][1] + c[1][1]];
    let plug_in = entropy_of_counts(&row, n) + entropy_of_counts(&col, n)
        - entropy_of_counts(&joint, n);
    let estimate = match estimator {
        Estimator::PlugIn => plug_in,
        Estimator::MillerMadow => {
            let occupied = |v: &[u64]| v.iter().filter(|&&k| k > 0).count() as f64;
            let m_a = occupied(&row);
            let m_b = occupied(&col);
            let m_ab = occupied(&joint);
            plug_in + ((m_a - 1.0) + (m_b - 1.0) - (m_ab - 1.0)) / (2.0 * n * LN_2)
        }
    };
    estimate.max(0.0)
}
