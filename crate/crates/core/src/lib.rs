//! Eavesdropper information bounds for a non-ideal two-qubit quantum random
//! number generator.
//!
//! The user measures qubit `A` of a pure state `|Ψ⟩` on `A+B`; an attacker who
//! holds the purifying qubit `B` measures it along a direction of their choice.
//! This crate computes how many bits about the user's outcome the attacker can
//! learn, in closed form and through brute-force oracles:
//!
//! - [`state`]: pure two-qubit states, reduced density matrices, Bloch vectors,
//!   concurrence, purity, Schmidt decomposition and the correlation matrix.
//! - [`measurement`]: projective measurements, joint outcome distributions, the
//!   `(α, β, κ)` parameters and the ellipse that constrains them.
//! - [`information`]: mutual information, binary/Shannon entropy, subentropy,
//!   the exact attacker maximum `I_max(C)` and the Holevo and JRW bounds.
//! - [`optimizer`]: analytic optimum, lattice search over the attacker's sphere,
//!   ellipse sweeps and the convexity / derivative checks behind the maximum.
//! - [`randomized`]: a user alternating between two directions, and the
//!   resulting effective concurrence.
//! - [`sampler`]: Monte-Carlo bit records and empirical mutual information.
//! - [`report`]: privacy reports, file schemas, CSV tables and the verification
//!   harness used by the `qrng-privacy` binary.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod information;
pub mod linalg;
pub mod measurement;
pub mod optimizer;
pub mod oracle;
pub mod randomized;
pub mod report;
pub mod sampler;
pub mod state;

pub use error::{Error, Result};
pub use information::{
    binary_entropy, conditional_attacker_states, holevo_bound, i_max, i_max_from_purity,
    i_max_purity_linear, i_max_small_c, jrw_bound, mutual_information, mutual_information_abk,
    privacy_bounds, shannon_entropy, subentropy, ConditionalStatePair, PrivacyBounds,
};
pub use measurement::{
    constraint_ellipse, joint_distribution, marginal_probability, membership, parameters,
    ConstraintEllipse, JointDistribution, MeasurementDirection, MeasurementParameters,
};
pub use optimizer::{
    ellipse_sweep, grid_search_attacker, optimal_attacker_analytic, second_derivative_at_max,
    stationary_points, verify_convexity, ConvexityReport, EllipseSweep, OptimizationMethod,
    OptimizationResult,
};
pub use randomized::{
    averaged_joint, effective_concurrence, i_max_random, RandomMeasurementConfig,
};
pub use sampler::{empirical_mi, sample_bits, BitRecord, Estimator};
pub use state::{
    bloch_vector, concurrence, correlation_matrix, partial_trace, purity, random_pure_state,
    schmidt_decompose, BlochVector, CorrelationMatrix, QubitDensityMatrix, SchmidtDecomposition,
    SchmidtFrame, StateSampler, Subsystem, TwoQubitState,
};
