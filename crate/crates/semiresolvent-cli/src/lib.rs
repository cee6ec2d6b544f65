//! Command-line front end: config resolution, dispatch to the experiments,
//! persisted reports and short human-readable summaries.
//!
//! Exit codes: 0 success, 1 scientific failure (the report is still written),
//! 2 usage or configuration error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use semiresolvent::carleman::{carleman_certificate, WeightFunction};
use semiresolvent::experiments::{
    build_potential, carleman_inequality_sweep, carleman_record, distorted_resolvent_window_scan, persist_and_report,
    plan_grid, region_record, resolvent_identity_check, resolvent_sweep, resonance_region_check,
    resonance_width_sweep, scan_record, sweep_record, weight_search, width_record, window_certificate, Experiment,
    ExperimentRecord, NamedFit, Series, SweepConfig, CARLEMAN_R_MAX,
};
use semiresolvent::model::{escape_certificate, uniform_radii};
use semiresolvent::numerics::FitModel;
use semiresolvent::scalar::cx;
use semiresolvent::Error;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "SEMIRESOLVENT_OUT";
const DEFAULT_OUT: &str = "semiresolvent-runs";

/// Largest identity-check defect counted as agreement.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
/// Largest growth slope of the empirical Carleman constant counted as bounded.
pub const GROWTH_TOLERANCE: f64 = 0.1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCIENTIFIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "semiresolvent", version, about = "Weighted resolvent estimates for matrix Schrödinger operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Zoo id (M1..M5) or potential family name.
    #[arg(long)]
    model: Option<String>,
    /// Config file in the `[section] key = value` dialect.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override `key=value`, applied after the file; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Reference energy.
    #[arg(long = "E", value_name = "E")]
    energy: Option<f64>,
    /// Weight exponent of `<x>^{-s}`.
    #[arg(long)]
    s: Option<f64>,
    /// Output root; defaults to $SEMIRESOLVENT_OUT, then ./semiresolvent-runs.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Escape-function certificate at E and over the energy window.
    CertifyEscape(Common),
    /// Carleman certificate of the zero weight over the h list and h = 0.
    CertifyCarleman(Common),
    /// Search for a Carleman weight with positive margin.
    OptimizeWeight(Common),
    /// Empirical Carleman constant over seeded test functions and the h list.
    CarlemanTest(Common),
    /// Global and truncated weighted resolvent norms over the h list.
    ResolventSweep(Common),
    /// Resonances in the region window at each h.
    Resonances(Common),
    /// Resonance-free region check under the log or exp law.
    RegionCheck(Common),
    /// Width of the resonance nearest the real axis, tracked over h.
    WidthSweep(Common),
    /// Resolvent identity for a cut-off potential.
    IdentityCheck(Common),
    /// Distorted resolvent norm on a lattice over the window.
    WindowScan(Common),
    /// Summarize a run directory written by another command.
    Report {
        /// Run directory.
        path: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CertifyEscape(_) => "certify-escape",
            Command::CertifyCarleman(_) => "certify-carleman",
            Command::OptimizeWeight(_) => "optimize-weight",
            Command::CarlemanTest(_) => "carleman-test",
            Command::ResolventSweep(_) => "resolvent-sweep",
            Command::Resonances(_) => "resonances",
            Command::RegionCheck(_) => "region-check",
            Command::WidthSweep(_) => "width-sweep",
            Command::IdentityCheck(_) => "identity-check",
            Command::WindowScan(_) => "window-scan",
            Command::Report { .. } => "report",
        }
    }

    fn experiment(&self) -> Experiment {
        match self {
            Command::CertifyEscape(_) | Command::RegionCheck(_) => Experiment::RegionCheck,
            Command::CertifyCarleman(_) | Command::OptimizeWeight(_) | Command::CarlemanTest(_) => Experiment::Carleman,
            Command::ResolventSweep(_) | Command::Report { .. } => Experiment::ResolventSweep,
            Command::Resonances(_) => Experiment::Resonances,
            Command::WidthSweep(_) => Experiment::WidthSweep,
            Command::IdentityCheck(_) => Experiment::IdentityCheck,
            Command::WindowScan(_) => Experiment::WindowScan,
        }
    }
}

/// Failure carrying its exit code and a remediation hint.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    hint: &'static str,
}

impl Failure {
    fn usage(message: impl Into<String>, hint: &'static str) -> Self {
        Self { code: EXIT_USAGE, message: message.into(), hint }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, hint) = match &e {
            Error::InvalidInput(_) | Error::DegenerateWeight { .. } | Error::UnsupportedDimension { .. } => {
                (EXIT_USAGE, "check the configuration values; `--help` lists the flags")
            }
            Error::AngleTooLarge { .. } | Error::ContourSingularity { .. } => {
                (EXIT_USAGE, "lower `theta` or move `onset` beyond the potential's singularities")
            }
            Error::ProfileNotSmooth { .. } => (EXIT_USAGE, "use the quintic or septic transition profile"),
            Error::EmptySurface { .. } => (EXIT_USAGE, "raise the energy window above the potential branches"),
            Error::TestFunctionEscapesGrid { .. } => (EXIT_USAGE, "enlarge the grid or narrow the test functions"),
            Error::Io { .. } => (EXIT_USAGE, "check that the output directory is writable (--out or $SEMIRESOLVENT_OUT)"),
            Error::NoFeasibleWeight { .. } => (EXIT_SCIENTIFIC, "raise `budget` or move the energy further above the thresholds"),
            Error::CertificateMissing { .. } => {
                (EXIT_SCIENTIFIC, "the log law needs a nontrapping window; use `law = exp` or `diagnostic = true`")
            }
            Error::Singular { .. } => (EXIT_NUMERICAL, "the spectral parameter sits on an eigenvalue; move it off the spectrum"),
            Error::NoConvergence { .. } => (EXIT_NUMERICAL, "refine the grid or shorten the h list"),
            Error::DegenerateFit { .. } => (EXIT_NUMERICAL, "the fit needs at least three distinct finite points"),
            Error::UnmatchedResonance { .. } | Error::TrackingLost { .. } => {
                (EXIT_NUMERICAL, "narrow the h list or set `depth` to follow the resonance")
            }
        };
        Self { code, message: e.to_string(), hint }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            eprintln!("hint: {}", f.hint);
            f.code
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

fn dispatch(command: Command) -> Outcome {
    let name = command.name();
    let experiment = command.experiment();
    match command {
        Command::Report { path } => report(&path),
        Command::CertifyEscape(c) => with_config(name, experiment, c, certify_escape),
        Command::CertifyCarleman(c) => with_config(name, experiment, c, certify_carleman),
        Command::OptimizeWeight(c) => with_config(name, experiment, c, optimize_weight),
        Command::CarlemanTest(c) => with_config(name, experiment, c, carleman_test),
        Command::ResolventSweep(c) => with_config(name, experiment, c, sweep),
        Command::Resonances(c) => with_config(name, experiment, c, resonances),
        Command::RegionCheck(c) => with_config(name, experiment, c, region_check),
        Command::WidthSweep(c) => with_config(name, experiment, c, width_sweep),
        Command::IdentityCheck(c) => with_config(name, experiment, c, identity_check),
        Command::WindowScan(c) => with_config(name, experiment, c, window_scan),
    }
}

/// Resolves the config: the file (strict) or the model preset, then flag
/// overrides, then validation.
fn resolve(common: &Common, experiment: Experiment) -> Result<SweepConfig, Failure> {
    let mut overrides = Vec::new();
    if let Some(m) = &common.model {
        overrides.push(format!("model={m}"));
    }
    overrides.extend(common.set.iter().cloned());
    if let Some(e) = common.energy {
        overrides.push(format!("energy={e}"));
    }
    if let Some(s) = common.s {
        overrides.push(format!("s={s}"));
    }
    if let Some(seed) = common.seed {
        overrides.push(format!("seed={seed}"));
    }
    let config_hint = "keys are listed per section in the README; values after `--set` use the file syntax";
    let cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display()), "pass an existing, readable config file"))?;
            SweepConfig::parse(&text, &overrides, experiment).map_err(|e| Failure::usage(e.to_string(), config_hint))?
        }
        None => {
            let model = common
                .model
                .as_deref()
                .ok_or_else(|| Failure::usage("no model given", "pass --model M1..M5 or a family name, or --config FILE"))?;
            SweepConfig::from_overrides(model, &overrides[1..], experiment)
                .map_err(|e| Failure::usage(e.to_string(), config_hint))?
        }
    };
    cfg.validate().map_err(|e| Failure::usage(e.to_string(), config_hint))?;
    Ok(cfg)
}

/// `<out>/<command>-<hash>` with the hash taken over the command and the echo.
fn run_dir(common: &Common, command: &str, cfg: &SweepConfig) -> PathBuf {
    let root = common
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update(b"\n");
    hasher.update(cfg.echo().as_bytes());
    let digest = hasher.finalize();
    let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    root.join(format!("{command}-{hex}"))
}

fn with_config(
    name: &str,
    experiment: Experiment,
    common: Common,
    body: fn(&SweepConfig) -> Result<(ExperimentRecord, Vec<String>, i32), Failure>,
) -> Outcome {
    init_logging(common.verbose);
    let cfg = resolve(&common, experiment)?;
    println!("# resolved configuration");
    print!("{}", cfg.echo());
    println!();
    let (record, lines, code) = body(&cfg)?;
    let dir = run_dir(&common, name, &cfg);
    persist_and_report(&record, &dir)?;
    for l in lines {
        println!("{l}");
    }
    println!("results written to {}", dir.display());
    Ok(code)
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_SCIENTIFIC
    }
}

pub fn describe_fit(f: &NamedFit) -> String {
    match (&f.fit, &f.error) {
        (Some(r), _) => match r.model {
            FitModel::Power => format!("{}: y = {:.4e} h^{:.4} (R2 {:.4})", f.name, r.a, r.b, r.r2),
            FitModel::ExpInv => format!("{}: log y = {:.4} + {:.4} / h (R2 {:.4})", f.name, r.a, r.b, r.r2),
            _ => format!("{}: a = {:.4}, b = {:.4} (R2 {:.4})", f.name, r.a, r.b, r.r2),
        },
        (None, Some(e)) => format!("{}: no fit ({e})", f.name),
        (None, None) => format!("{}: no fit", f.name),
    }
}

type Body = Result<(ExperimentRecord, Vec<String>, i32), Failure>;

fn certify_escape(cfg: &SweepConfig) -> Body {
    let v = build_potential(cfg)?;
    let radii = uniform_radii((cfg.onset + 10.0).max(30.0), 1201);
    let at_e = escape_certificate(&v, (cfg.energy, cfg.energy), &radii, 1)?;
    let window = window_certificate(cfg, &v)?;
    let mut rec = ExperimentRecord::new("certify_escape", Some(cfg));
    rec.certificates.push(serde_json::to_value(&at_e).unwrap_or_default());
    rec.certificates.push(serde_json::to_value(&window).unwrap_or_default());
    let lines = vec![
        format!("margin c = {:?}", at_e.margin),
        format!(
            "window [{}, {}]: margin {:?} at r = {}, branch {} ({})",
            window.e_lo,
            window.e_hi,
            window.margin,
            window.worst_r,
            window.worst_branch,
            if window.pass { "pass" } else { "fail" }
        ),
    ];
    Ok((rec, lines, verdict(at_e.pass && window.pass)))
}

fn certify_carleman(cfg: &SweepConfig) -> Body {
    let v = build_potential(cfg)?;
    let radii = uniform_radii(CARLEMAN_R_MAX, 1201);
    let w = WeightFunction::zero(&radii);
    let c = carleman_certificate(&v, &w, cfg.energy, cfg.s, &cfg.h_list, &radii)?;
    let mut rec = ExperimentRecord::new("certify_carleman", Some(cfg));
    let mut s = Series::new("certificate", &["r", "min_eigenvalue"]);
    for (r, m) in c.radii.iter().zip(&c.min_eigenvalue) {
        s.push(vec![*r, *m]);
    }
    rec.series.push(s);
    rec.certificates.push(serde_json::to_value(&c).unwrap_or_default());
    let lines = vec![format!(
        "zero weight: margin c = {:?} at r = {}, h = {} ({})",
        c.margin,
        c.worst_r,
        c.worst_h,
        if c.pass { "pass" } else { "fail; try optimize-weight" }
    )];
    Ok((rec, lines, verdict(c.pass)))
}

fn optimize_weight(cfg: &SweepConfig) -> Body {
    let search = weight_search(cfg)?;
    let shape = search.weight.shape();
    let rec = carleman_record(cfg, &search, None);
    let lines = vec![
        format!(
            "weight: slope a = {:.4}, R = {:.4}, R0 = {:.4} after {} candidates",
            shape.slope, shape.r_inner, shape.r_outer, search.evaluated
        ),
        format!("margin c = {:?} (includes h = 0)", search.certificate.margin),
    ];
    Ok((rec, lines, EXIT_OK))
}

fn carleman_test(cfg: &SweepConfig) -> Body {
    let search = weight_search(cfg)?;
    let sweep = carleman_inequality_sweep(cfg, &search)?;
    let rec = carleman_record(cfg, &search, Some(&sweep));
    let mut lines: Vec<String> = sweep.points.iter().map(|p| format!("h = {:.4}: C_hat = {:.4e}", p.h, p.c_hat)).collect();
    lines.push(describe_fit(&sweep.fit));
    lines.push(format!("growth slope {:.4} (bounded if <= {GROWTH_TOLERANCE})", sweep.growth));
    Ok((rec, lines, verdict(sweep.growth <= GROWTH_TOLERANCE)))
}

fn sweep(cfg: &SweepConfig) -> Body {
    let r = resolvent_sweep(cfg)?;
    let rec = sweep_record(cfg, &r);
    let mut lines = Vec::new();
    for p in &r.points {
        match &p.error {
            Some(e) => lines.push(format!("h = {:.4}: failed ({e})", p.h)),
            None => lines.push(format!(
                "h = {:.4}: global {:.4e}, truncated {:.4e}{}",
                p.h,
                p.global.unwrap_or(f64::NAN),
                p.truncated.unwrap_or(f64::NAN),
                if p.flagged { " (solve residual flagged)" } else { "" }
            )),
        }
    }
    lines.extend(r.fits.iter().map(describe_fit));
    if r.points.iter().all(|p| p.error.is_some()) {
        return Err(Failure { code: EXIT_NUMERICAL, message: "every sweep point failed".into(), hint: "see the log above; run with -v" });
    }
    let ordered = r.points.iter().all(|p| p.ordered);
    let agreed = r.points.iter().all(|p| p.cross_check.as_ref().is_none_or(|c| c.accepted));
    if !ordered {
        lines.push("truncated norm exceeds the global norm at some h".into());
    }
    if !agreed {
        lines.push("absorption and distortion norms disagree at some h".into());
    }
    Ok((rec, lines, verdict(ordered && agreed)))
}

fn resonances(cfg: &SweepConfig) -> Body {
    let mut c = cfg.clone();
    c.diagnostic = true;
    let r = resonance_region_check(&c)?;
    let mut rec = region_record(cfg, &r);
    rec.experiment = "resonances".into();
    let mut lines = Vec::new();
    for p in &r.points {
        let list: Vec<String> = p.candidates.iter().chain(&p.below).map(|z| format!("{:.8} {:+.3e}i", z.re, z.im)).collect();
        lines.push(format!("h = {:.4}: {} resonances [{}]", p.h, list.len(), list.join(", ")));
    }
    Ok((rec, lines, EXIT_OK))
}

fn region_check(cfg: &SweepConfig) -> Body {
    let r = match resonance_region_check(cfg) {
        Err(Error::CertificateMissing { margin }) => {
            let mut rec = ExperimentRecord::new("region_check", Some(cfg));
            if let Ok(c) = window_certificate(cfg, &build_potential(cfg)?) {
                rec.certificates.push(serde_json::to_value(&c).unwrap_or_default());
            }
            let lines = vec![
                format!("escape certificate fails on the window (margin {margin:?}); the log law does not apply"),
                "hint: use `--set law=exp` or `--set diagnostic=true`".to_string(),
            ];
            return Ok((rec, lines, EXIT_SCIENTIFIC));
        }
        other => other?,
    };
    let rec = region_record(cfg, &r);
    let mut lines: Vec<String> = r
        .points
        .iter()
        .map(|p| format!("h = {:.4}: depth {:.3e}, {} inside, {} artifacts", p.h, p.depth, p.candidates.len(), p.artifacts))
        .collect();
    lines.push(format!("region empty at every h: {}", r.empty));
    Ok((rec, lines, verdict(r.empty)))
}

fn width_sweep(cfg: &SweepConfig) -> Body {
    let r = resonance_width_sweep(cfg, 1.0)?;
    let rec = width_record(cfg, &r);
    let mut lines: Vec<String> = r
        .points
        .iter()
        .map(|p| format!("h = {:.4}: z = {:.10} {:+.4e}i, angle deviation {:.2e}", p.h, p.re, p.im, p.theta_relative))
        .collect();
    lines.push(format!("width rate S = {:.5} (R2 {:.4})", r.rate, r.fit.r2));
    Ok((rec, lines, EXIT_OK))
}

fn identity_check(cfg: &SweepConfig) -> Body {
    let v = build_potential(cfg)?;
    let mut rec = ExperimentRecord::new("identity_check", Some(cfg));
    let mut s = Series::new("identity", &["h", "defect", "left", "right", "three_term"]);
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for &h in &cfg.h_list {
        let grid = plan_grid(cfg, &v, h, 0.0, cfg.onset, cfg.e_window).grid()?;
        let r = resolvent_identity_check(&v, h, &grid, cfg.d, cfg.ell, cx(cfg.energy, h), cfg.truncation, cfg.seed)?;
        s.push(vec![h, r.defect, r.left, r.right, r.three_term]);
        lines.push(format!("h = {:.4}: defect {:.2e} (size {})", h, r.defect, r.size));
        reports.push(r);
    }
    rec.series.push(s);
    let worst = reports.iter().map(|r| r.defect).fold(0.0, f64::max);
    rec.details = json!({ "reports": reports, "tolerance": IDENTITY_TOLERANCE });
    lines.push(format!("worst defect {worst:.2e} (tolerance {IDENTITY_TOLERANCE:e})"));
    Ok((rec, lines, verdict(worst <= IDENTITY_TOLERANCE)))
}

fn window_scan(cfg: &SweepConfig) -> Body {
    let r = distorted_resolvent_window_scan(cfg)?;
    let rec = scan_record(cfg, &r);
    let mut lines: Vec<String> = r
        .points
        .iter()
        .map(|p| {
            format!(
                "h = {:.4}: max norm {:.4e}, {} singular probes, {} resonances",
                p.h,
                p.max_norm,
                p.probes.iter().filter(|q| q.singular).count(),
                p.candidates.len()
            )
        })
        .collect();
    lines.extend(r.fits.iter().map(describe_fit));
    lines.push(format!("scan consistent with the resonance list: {}", r.consistent));
    Ok((rec, lines, verdict(r.consistent)))
}

fn report(dir: &Path) -> Outcome {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Failure::usage(format!("{}: {e}", dir.display()), "pass a directory written by another command"))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.ends_with("metadata.json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::usage(format!("{}: no result JSON found", dir.display()), "pass a directory written by another command"));
    }
    for path in files {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()), "check file permissions"))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()), "the file is not a result document"))?;
        print!("{}", summarize(&v));
    }
    Ok(EXIT_OK)
}

fn summarize(v: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} (schema {}, seed {}, model {})",
        v["experiment"].as_str().unwrap_or("?"),
        v["schema_version"],
        v["seed"],
        v["config"]["model"].as_str().unwrap_or("-")
    );
    for s in v["series"].as_array().into_iter().flatten() {
        let rows = s["rows"].as_array().map_or(0, |r| r.len());
        let _ = writeln!(out, "  series {}: {} rows", s["name"].as_str().unwrap_or("?"), rows);
    }
    for f in v["fits"].as_array().into_iter().flatten() {
        let name = f["name"].as_str().unwrap_or("?");
        let fit = &f["fit"];
        if fit.is_object() {
            let num = |k: &str| fit[k].as_f64().unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "  {name} [{}]: a = {:.4}, b = {:.4}, R2 = {:.4}",
                fit["model"].as_str().unwrap_or("?"),
                num("a"),
                num("b"),
                num("r2")
            );
        } else {
            let _ = writeln!(out, "  {name}: no fit ({})", f["error"].as_str().unwrap_or("unknown"));
        }
    }
    for c in v["certificates"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  certificate: margin {} pass {}", c["margin"], c["pass"]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_error_maps_to_a_code() {
        let errors = [
            Error::InvalidInput("x".into()),
            Error::NoFeasibleWeight { best_margin: -1.0, candidates: 3 },
            Error::Singular { index: 0 },
            Error::TrackingLost { h: 0.1 },
            Error::Io { path: "p".into(), message: "m".into() },
        ];
        let codes: Vec<i32> = errors.into_iter().map(|e| Failure::from(e).code).collect();
        assert_eq!(codes, vec![2, 1, 3, 3, 2]);
    }

    #[test]
    fn run_dir_depends_on_config() {
        let common = Common { out: Some("root".into()), ..Common::default() };
        let a = SweepConfig::preset("M1", Experiment::ResolventSweep).unwrap();
        let mut b = a.clone();
        b.seed = 1;
        assert_ne!(run_dir(&common, "x", &a), run_dir(&common, "x", &b));
        assert_eq!(run_dir(&common, "x", &a), run_dir(&common, "x", &a));
        assert!(run_dir(&common, "x", &a).starts_with("root"));
    }
}
