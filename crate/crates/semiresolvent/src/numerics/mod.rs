//! Extreme singular values, weighted resolvent norms, windowed eigensolves
//! of scaled operators and scaling-law fits.

mod eigs;
mod fit;
mod resolvent;
mod singular;

pub use eigs::{
    attach_stability, eigs_in_window, estimate_tube_half_width, theta_stability, EigsOptions,
    EigsResult, Resonance, StabilityReport, Window,
};
pub use fit::{fit_scaling, geometric_h, FitModel, FitReport};
pub use resolvent::{
    resolvent_norm, weight_vector, weighted_inverse_norm, weighted_resolvent_norm, Method,
    OperatorContext, ResolventNorm, ResolventQuery, SOLVE_RESIDUAL_LIMIT,
};
pub use singular::{
    extreme_singular, seeded_vector, BandMap, DenseMap, LinearMap, SingularEstimate,
    SingularOptions, WeightedInverse, Which,
};
