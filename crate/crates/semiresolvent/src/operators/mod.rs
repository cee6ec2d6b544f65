//! Radial discretizations of the plain, conjugated and complex-scaled operators.

mod discretize;
mod distortion;
mod grid;
mod rays;

pub use discretize::{
    centrifugal_coefficient, check_contour, discretize_plain, distorted_operator,
    fd_laplacian_spectrum, DiscretizedOperator, OperatorKind, OperatorMeta,
};
pub use distortion::{DistortionProfile, ScalingKind};
pub use grid::{simpson_weights, RadialGrid};
pub use rays::{essential_rays, ray_tube_classifier, EssentialRays, Ray, RayClass};
