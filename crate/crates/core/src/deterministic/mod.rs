//! Deterministic construction of ε-quantizations from finite per-point
//! samples.
//!
//! Uniform regions are replaced by shifted lattices, the samples are
//! perturbed into general position, and the distribution of a box or ball
//! statistic is computed exactly over the resulting family by valid-basis
//! enumeration. A brute-force enumeration serves as the oracle.

mod algorithm2;
mod brute;
mod cdf;
mod family;
mod lattice;

pub use algorithm2::{algorithm2_kvariate, algorithm2_quantization, basis_size, MAX_CANDIDATE_BASES};
pub use brute::{brute_force_cdf, brute_force_counts, brute_force_kcdf, MAX_COMBINATIONS};
pub use cdf::{cdf_to_quantization, WeightedCdf, WeightedKCdf, MASS_TOL};
pub use family::{
    build_afn_samples, perturb, validate_general_position, AfnOptions, GeneralPositionReport, PointRef, SampleFamily,
    SampleSource, Violation, PERTURBATION,
};
pub use lattice::{lattice_eps_sample, lattice_target, BallRegion, ConvexRegion, MAX_LATTICE_POINTS};
