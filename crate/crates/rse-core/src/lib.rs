//! Robust state estimation for AC power systems.
//!
//! The crate builds the quadratic measurement model of an AC transmission
//! network (power injections, line flows and squared voltage magnitudes as
//! trace forms `Tr(H_l v v^H)`), analyzes outlier observability and
//! identifiability of the metering layout, and estimates the complex bus
//! voltage state by two routes:
//!
//! * a Gauss-Newton weighted least-squares baseline ([`wls`]), and
//! * a convex semidefinite relaxation with an l1-penalized outlier vector
//!   ([`sdr`]), followed by rank-1 extraction.

pub mod identifiability;
pub mod measurement;
pub mod network;
pub mod sdr;
pub mod wls;

pub use identifiability::{
    brute_force_distance, linear_distance, numeric_rank, sparsity_levels, IdentifiabilityReport,
};
pub use measurement::{
    random_state, MeasurementKind, MeasurementModel, MeasurementPlan, MeasurementSet, ModelError,
    OutlierMode, PolarState, StateVector,
};
pub use network::{
    AdmittanceMatrix, BusId, FlowDirection, HermitianCoeffs, Line, Network, NetworkError,
};
pub use sdr::{
    psd_project, robust_estimate, soft_threshold, solve_relaxation, EstimateMethod, SdpProblem,
    SdpSolution, SdrError, SdrOptions, StateEstimate,
};
pub use wls::{gauss_newton, GaussNewtonResult, GnOptions, GnStatus};

/// Complex scalar used throughout: 64-bit per component.
pub type Complex64 = num_complex::Complex<f64>;
