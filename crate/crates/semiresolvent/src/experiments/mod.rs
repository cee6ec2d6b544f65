//! Parameter sweeps, resonance region checks, window scans and persistence,
//! run in `f64` on the pinned model zoo.

mod carleman;
mod config;
mod identity;
mod persist;
mod region;
mod setup;
mod sweep;
mod zoo;

pub use carleman::{carleman_inequality_sweep, carleman_record, weight_search, InequalitySweep, CARLEMAN_R_MAX};
pub use config::{ConfigError, Experiment, RegionLaw, SweepConfig};
pub use identity::{cutoff_psi, resolvent_identity_check, IdentityReport};
pub use persist::{
    persist_and_report, region_record, scan_record, sweep_record, width_record, Environment, ExperimentRecord,
    Series, SCHEMA_VERSION,
};
pub use region::{
    distorted_resolvent_window_scan, kappa, ray_clearance, region_depth, region_theta, resonance_region_check,
    resonance_width_sweep, window_certificate, Probe, RegionPoint, RegionReport, ResonanceRecord, ScanPoint,
    ScanReport, WidthPoint, WidthReport, HIT_TOLERANCE, SINGULAR_LEVEL,
};
pub use setup::{build_potential, free_of, plan_grid, rays_and_tube, scaled_operator, theta_cap, GridPlan};
pub use sweep::{
    absorption_norms, resolvent_sweep, CrossCheck, NamedFit, SweepPoint, SweepResult, ABSORPTION_ROW_LIMIT,
    CROSS_CHECK_TOLERANCE,
};
pub use zoo::{lookup, Regime, ZooEntry, ZOO};
