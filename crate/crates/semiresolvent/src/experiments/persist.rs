use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::SweepConfig;
use super::region::{RegionReport, ScanReport, WidthReport};
use super::sweep::{NamedFit, SweepResult};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Flat numeric table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub package: &'static str,
    pub version: &'static str,
    pub scalar: &'static str,
}

impl Default for Environment {
    fn default() -> Self {
        Self { package: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), scalar: "f64" }
    }
}

/// Everything written for one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub config: Option<SweepConfig>,
    /// Resolved configuration in the file dialect.
    pub config_echo: String,
    pub seed: u64,
    pub environment: Environment,
    pub series: Vec<Series>,
    pub fits: Vec<NamedFit>,
    pub certificates: Vec<Value>,
    pub details: Value,
}

impl ExperimentRecord {
    pub fn new(experiment: &str, config: Option<&SweepConfig>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            config_echo: config.map(|c| c.echo()).unwrap_or_default(),
            seed: config.map_or(0, |c| c.seed),
            config: config.cloned(),
            environment: Environment::default(),
            series: Vec::new(),
            fits: Vec::new(),
            certificates: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(format!("serialization failed: {e}")))
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        x.to_string()
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `<experiment>.json`, one CSV per series, two-column plot files,
/// `plot.py` and `metadata.json` (the only file carrying a timestamp).
pub fn persist_and_report(record: &ExperimentRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let json_path = dir.join(format!("{}.json", record.experiment));
    write(&json_path, &(record.to_json()? + "\n"))?;
    files.push(json_path);
    let mut plots = Vec::new();
    for s in &record.series {
        let path = dir.join(format!("{}_{}.csv", record.experiment, s.name));
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::io(&path, e))?;
        w.write_record(&s.columns).map_err(|e| Error::io(&path, e))?;
        for row in &s.rows {
            w.write_record(row.iter().map(|x| num(*x))).map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        files.push(path);
        for (k, col) in s.columns.iter().enumerate().skip(1) {
            let path = dir.join(format!("plot_{}_{}.dat", s.name, col));
            let mut text = format!("# {} {}\n", s.columns[0], col);
            for row in &s.rows {
                let _ = writeln!(text, "{} {}", num(row[0]), num(row[k]));
            }
            write(&path, &text)?;
            plots.push((path.file_name().unwrap_or_default().to_string_lossy().to_string(), s.columns[0].clone(), col.clone()));
            files.push(path);
        }
    }
    let mut script = String::from("import numpy as np\nimport matplotlib.pyplot as plt\n\n");
    for (file, x, y) in &plots {
        let _ = writeln!(
            script,
            "d = np.loadtxt({file:?})\nplt.figure()\nplt.loglog(d[:, 0], d[:, 1], 'o-')\nplt.xlabel({x:?})\nplt.ylabel({y:?})\nplt.savefig({:?})\n",
            file.replace(".dat", ".png")
        );
    }
    let script_path = dir.join("plot.py");
    write(&script_path, &script)?;
    files.push(script_path);
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let names: Vec<String> =
        files.iter().map(|p| p.file_name().unwrap_or_default().to_string_lossy().to_string()).collect();
    let meta = json!({ "timestamp_unix": stamp, "files": names });
    let meta_path = dir.join("metadata.json");
    write(&meta_path, &(serde_json::to_string_pretty(&meta).unwrap_or_default() + "\n"))?;
    files.push(meta_path);
    Ok(files)
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

pub fn sweep_record(cfg: &SweepConfig, r: &SweepResult) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new("resolvent_sweep", Some(cfg));
    let mut s = Series::new("norms", &["h", "global", "truncated"]);
    for p in &r.points {
        s.push(vec![p.h, opt(p.global), opt(p.truncated)]);
    }
    rec.series.push(s);
    rec.fits = r.fits.clone();
    rec.details = json!({ "points": r.points, "long_range": r.long_range });
    rec
}

pub fn region_record(cfg: &SweepConfig, r: &RegionReport) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new("region_check", Some(cfg));
    let mut s = Series::new("region", &["h", "depth", "theta", "candidates", "below", "artifacts"]);
    for p in &r.points {
        s.push(vec![p.h, p.depth, p.theta, p.candidates.len() as f64, p.below.len() as f64, p.artifacts as f64]);
    }
    rec.series.push(s);
    if let Some(c) = &r.certificate {
        rec.certificates.push(serde_json::to_value(c).unwrap_or(Value::Null));
    }
    rec.details = serde_json::to_value(r).unwrap_or(Value::Null);
    rec
}

pub fn width_record(cfg: &SweepConfig, r: &WidthReport) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new("width_sweep", Some(cfg));
    let mut s = Series::new("width", &["h", "width", "theta_relative"]);
    for p in &r.points {
        s.push(vec![p.h, p.width, p.theta_relative]);
    }
    rec.series.push(s);
    rec.fits.push(NamedFit { name: "width_exp_inv".into(), fit: Some(r.fit.clone()), error: None });
    rec.details = serde_json::to_value(r).unwrap_or(Value::Null);
    rec
}

pub fn scan_record(cfg: &SweepConfig, r: &ScanReport) -> ExperimentRecord {
    let mut rec = ExperimentRecord::new("window_scan", Some(cfg));
    let mut s = Series::new("scan", &["h", "max_norm", "singular"]);
    for p in &r.points {
        s.push(vec![p.h, p.max_norm, p.probes.iter().filter(|q| q.singular).count() as f64]);
    }
    rec.series.push(s);
    rec.fits = r.fits.clone();
    rec.details = serde_json::to_value(r).unwrap_or(Value::Null);
    rec
}
