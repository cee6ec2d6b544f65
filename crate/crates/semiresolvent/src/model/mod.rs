//! Matrix potentials, principal symbols, energy surfaces and escape certificates.

mod families;
mod potential;
mod symbol;

pub use families::{family_parameters, PotentialConfig, FAMILIES};
pub use potential::{Analyticity, MatrixPotential, Profile, Term};
pub use symbol::{
    check_long_range, escape_certificate, eval_symbol, lambda_fields, sample_energy_surface,
    uniform_radii, BranchPolicy, EnergySurfaceSample, EscapeCertificate, LongRangeReport,
    SurfacePoint,
};
