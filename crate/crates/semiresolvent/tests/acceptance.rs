//! Acceptance criteria, run in order with one PASS/FAIL line each.
//! Later criteria reuse results of earlier ones (the fitted width rate, the
//! diagnostic region check).

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semiresolvent::carleman::{build_weight, certificate_matrix, WeightShape};
use semiresolvent::experiments::{
    carleman_inequality_sweep, distorted_resolvent_window_scan, lookup, persist_and_report, resolvent_identity_check,
    resolvent_sweep, resonance_region_check, resonance_width_sweep, sweep_record, weight_search, Experiment,
    RegionLaw, RegionReport, SweepConfig, HIT_TOLERANCE, ZOO,
};
use semiresolvent::linalg::{hermitian_eigenvalues, BandMatrix, CMat};
use semiresolvent::numerics::{extreme_singular, DenseMap, SingularOptions, Which};
use semiresolvent::operators::{discretize_plain, distorted_operator, fd_laplacian_spectrum, DistortionProfile, RadialGrid};
use semiresolvent::scalar::cx;
use semiresolvent::model::PotentialConfig;

type Outcome = Result<String, String>;

#[derive(Default)]
struct Shared {
    width_rate: Option<f64>,
    log_diagnostic: Option<RegionReport>,
}

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn preset(model: &str, exp: Experiment) -> Result<SweepConfig, String> {
    SweepConfig::preset(model, exp).map_err(err)
}

fn construction(_: &mut Shared) -> Outcome {
    let grid = RadialGrid::new(12.0, 300).map_err(err)?;
    let mut worst = (0.0f64, 0.0f64);
    for m in ZOO {
        let v = m.potential();
        for (d, ell) in [(1, 0), (3, 1)] {
            let plain = discretize_plain(&v, 0.1, &grid, d, ell).map_err(err)?;
            let p = DistortionProfile::exterior(6.0, 0.3).map_err(err)?;
            let scaled = distorted_operator(&v, 0.1, &grid, &p, d, ell).map_err(err)?;
            let p0 = DistortionProfile::exterior(6.0, 0.0).map_err(err)?;
            let flat = distorted_operator(&v, 0.1, &grid, &p0, d, ell).map_err(err)?;
            worst.0 = worst.0.max(plain.matrix.hermitian_defect());
            worst.1 = worst.1.max(scaled.matrix.symmetric_defect());
            if flat.matrix != plain.matrix {
                return Err(format!("{}: theta = 0 differs from the plain operator", m.id));
            }
        }
    }
    check(
        worst == (0.0, 0.0),
        format!("hermitian defect {:e}, symmetric defect {:e}, theta = 0 entrywise equal", worst.0, worst.1),
    )
}

/// Lowest odd bound state of `-h^2 u'' - depth 1_{r<a} u` from
/// `k cos(k a) + kappa sin(k a) = 0`, by bisection.
fn square_well_root(h: f64, depth: f64, a: f64) -> f64 {
    let f = |e: f64| {
        let k = (e + depth).sqrt() / h;
        let q = (-e).sqrt() / h;
        k * (k * a).cos() + q * (k * a).sin()
    };
    let n = 20000;
    let de = depth / n as f64;
    let mut lo = -depth + de * 1e-6;
    for i in 1..n {
        let e = -depth + de * i as f64;
        if f(lo).signum() != f(e).signum() {
            let mut hi = e;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo).signum() == f(mid).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        lo = e;
    }
    f64::NAN
}

/// Lowest eigenvalue of a real symmetric tridiagonal band matrix by Sturm
/// count bisection.
fn lowest_tridiagonal(m: &BandMatrix<f64>) -> f64 {
    let n = m.n();
    let d: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    let e: Vec<f64> = (0..n - 1).map(|i| m.get(i, i + 1).re).collect();
    let below = |x: f64| {
        let mut count = 0;
        let mut q = d[0] - x;
        for i in 0..n {
            if i > 0 {
                let prev = if q == 0.0 { f64::EPSILON } else { q };
                q = d[i] - x - e[i - 1] * e[i - 1] / prev;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = (0..n).map(|i| d[i].abs() + 2.0 * e.iter().map(|x| x.abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn oracles(_: &mut Shared) -> Outcome {
    // Free Laplacian against the closed form.
    let free = PotentialConfig::new("free").map_err(err)?.build::<f64>().map_err(err)?;
    let grid = RadialGrid::new(10.0, 250).map_err(err)?;
    let op = discretize_plain(&free, 0.1, &grid, 1, 0).map_err(err)?;
    let got = hermitian_eigenvalues(&op.matrix.to_dense());
    let mut want = fd_laplacian_spectrum(0.1, &grid);
    want.sort_by(f64::total_cmp);
    let lap = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / want[want.len() - 1];

    // Iterative extreme singular values against a dense SVD.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 50;
    let entries: Vec<Complex64> =
        (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let svd = DMatrix::from_row_slice(n, n, &entries).singular_values();
    let (s_max, s_min) = (svd.max(), svd.min());
    let map = DenseMap { a: CMat::from_rows(n, n, entries) };
    let opts = SingularOptions { seed: 7, ..SingularOptions::default() };
    let big = extreme_singular(&map, Which::Largest, &opts).map_err(err)?.sigma;
    let small = extreme_singular(&map, Which::Smallest, &opts).map_err(err)?.sigma;
    let svd_rel = ((big - s_max) / s_max).abs().max(((small - s_min) / s_min).abs());

    // Square well with the edge on a node, Richardson over a mesh halving.
    let (h, depth) = (0.3, 5.0);
    let well = PotentialConfig::new("square_well").map_err(err)?.build::<f64>().map_err(err)?;
    let lowest = |intervals: usize| -> Result<f64, String> {
        let g = RadialGrid::new(4.0, intervals - 1).map_err(err)?;
        let p = discretize_plain(&well, h, &g, 1, 0).map_err(err)?;
        Ok(lowest_tridiagonal(&p.matrix))
    };
    let (coarse, fine) = (lowest(800)?, lowest(1600)?);
    let refined = (4.0 * fine - coarse) / 3.0;
    let exact = square_well_root(h, depth, 1.0);
    let well_err = (refined - exact).abs();

    check(
        lap <= 1e-10 && svd_rel <= 1e-8 && well_err <= 1e-6,
        format!(
            "laplacian {lap:.1e} (<= 1e-10), singular values {svd_rel:.1e} (<= 1e-8), square well {well_err:.1e} (<= 1e-6; E = {exact:.8})"
        ),
    )
}

fn quintic_d(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0)
    } else if t >= 1.0 {
        (1.0, 0.0)
    } else {
        (t * t * t * (10.0 - 15.0 * t + 6.0 * t * t), 30.0 * t * t * (1.0 - t) * (1.0 - t))
    }
}

/// Sixth-order differences of `m (E - V + phi'^2 - h phi'')`, divided by `m'`.
fn certificate_oracle(cfg: &SweepConfig, shape: WeightShape, h: f64, r: f64, i: usize, j: usize) -> f64 {
    let v = lookup(&cfg.model).expect("zoo model").potential();
    let len = shape.r_outer - shape.r_inner;
    let dphi = |x: f64| {
        if x <= shape.r_inner {
            (shape.slope, 0.0)
        } else {
            let (s, ds) = quintic_d((x - shape.r_inner) / len);
            (shape.slope * (1.0 - s), -shape.slope * ds / len)
        }
    };
    let field = |x: f64| {
        let m = 1.0 - 1.0 / (1.0 + x).powf(2.0 * cfg.s - 1.0);
        let (p1, p2) = dphi(x);
        let diag = if i == j { cfg.energy + p1 * p1 - h * p2 } else { 0.0 };
        m * (diag - v.at(x)[(i, j)].re)
    };
    let st = 0.01;
    let der = (-field(r - 3.0 * st) + 9.0 * field(r - 2.0 * st) - 45.0 * field(r - st) + 45.0 * field(r + st)
        - 9.0 * field(r + 2.0 * st)
        + field(r + 3.0 * st))
        / (60.0 * st);
    let mp = (2.0 * cfg.s - 1.0) / (1.0 + r).powf(2.0 * cfg.s);
    der / mp
}

fn certificate(_: &mut Shared) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut oracle_err = 0.0f64;
    for id in ["M1", "M2", "M4"] {
        let mut cfg = preset(id, Experiment::Carleman)?;
        cfg.s = 1.0;
        let found = weight_search(&cfg).map_err(err)?;
        let c = &found.certificate;
        ok &= c.pass && c.margin > 0.0 && c.h_set.contains(&0.0);
        lines.push(format!("{id} margin {:.3}", c.margin));
        // Oracle on a weight with a live transition zone, away from its knots.
        let shape = if found.weight.is_zero() {
            WeightShape { r_inner: 1.0, r_outer: 3.0, slope: 0.6, ..found.weight.shape() }
        } else {
            found.weight.shape()
        };
        let w = build_weight::<f64>(shape, &[0.0]).map_err(err)?;
        let v = found_potential(&cfg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut tested = 0;
        while tested < 20 {
            let r: f64 = rng.gen_range(0.2..8.0);
            if (r - shape.r_inner).abs() < 0.05 || (r - shape.r_outer).abs() < 0.05 {
                continue;
            }
            tested += 1;
            let h = 0.05;
            let k = certificate_matrix(&v, &w, h, cfg.energy, cfg.s, r).map_err(err)?;
            for i in 0..v.channels() {
                for j in 0..v.channels() {
                    oracle_err = oracle_err.max((certificate_oracle(&cfg, shape, h, r, i, j) - k[(i, j)].re).abs());
                }
            }
        }
    }
    ok &= oracle_err <= 1e-8;
    check(ok, format!("{}; oracle deviation {oracle_err:.1e} (<= 1e-8) at 20 radii per model", lines.join(", ")))
}

fn found_potential(cfg: &SweepConfig) -> Result<semiresolvent::MatrixPotential64, String> {
    Ok(lookup(&cfg.model).map_err(err)?.potential())
}

fn inequality(_: &mut Shared) -> Outcome {
    let cfg = preset("M4", Experiment::Carleman)?;
    let found = weight_search(&cfg).map_err(err)?;
    let sweep = carleman_inequality_sweep(&cfg, &found).map_err(err)?;
    let hats: Vec<String> = sweep.points.iter().map(|p| format!("{:.2e}", p.c_hat)).collect();
    check(
        sweep.growth <= 0.1,
        format!(
            "{} test functions, growth slope {:.3} (<= 0.1); C_hat = [{}]",
            cfg.test_functions,
            sweep.growth,
            hats.join(", ")
        ),
    )
}

fn contrast(_: &mut Shared) -> Outcome {
    let band = |b: f64| (-1.2..=-0.8).contains(&b);
    let mut parts = Vec::new();
    let mut ok = true;
    let m3 = resolvent_sweep(&preset("M3", Experiment::ResolventSweep)?).map_err(err)?;
    let g = m3.fit("global_exp_inv").ok_or("M3 global exp fit missing")?;
    let t = m3.fit("truncated_power").ok_or("M3 truncated fit missing")?;
    ok &= g.b > 0.0 && g.r2 >= 0.95 && band(t.b);
    parts.push(format!("M3 global S = {:.3} (R2 {:.4}), truncated b = {:.3}", g.b, g.r2, t.b));
    for id in ["M1", "M4"] {
        let r = resolvent_sweep(&preset(id, Experiment::ResolventSweep)?).map_err(err)?;
        let g = r.fit("global_power").ok_or("global power fit missing")?;
        let t = r.fit("truncated_power").ok_or("truncated fit missing")?;
        ok &= band(g.b) && band(t.b);
        parts.push(format!("{id} global b = {:.3}, truncated b = {:.3}", g.b, t.b));
    }
    check(ok, parts.join("; "))
}

fn theta_stability(shared: &mut Shared) -> Outcome {
    let cfg = preset("M3", Experiment::WidthSweep)?;
    let base = resonance_width_sweep(&cfg, 1.0).map_err(err)?;
    let fine = resonance_width_sweep(&cfg, 2.0).map_err(err)?;
    let dev = base.points.iter().map(|p| p.theta_relative).fold(0.0, f64::max);
    let change = ((fine.rate - base.rate) / base.rate).abs();
    shared.width_rate = Some(base.rate);
    check(
        dev <= 1e-6 && change <= 0.05,
        format!(
            "theta {} vs {}: relative {dev:.2e} (<= 1e-6); S = {:.5} -> {:.5} under grid doubling, change {:.2}% (<= 5%)",
            cfg.theta,
            cfg.theta_alt,
            base.rate,
            fine.rate,
            100.0 * change
        ),
    )
}

fn region(shared: &mut Shared) -> Outcome {
    let m4 = resonance_region_check(&preset("M4", Experiment::RegionCheck)?).map_err(err)?;
    let cert = m4.certificate.as_ref().map(|c| c.pass).unwrap_or(false);
    let rate = shared.width_rate.ok_or("needs the fitted width rate")?;
    let mut exp_cfg = preset("M3", Experiment::RegionCheck)?;
    exp_cfg.law = RegionLaw::Exp;
    exp_cfg.exp_rate = 2.0 * rate;
    exp_cfg.exp_prefactor = 2.0 * rate;
    exp_cfg.diagnostic = false;
    let m3_exp = resonance_region_check(&exp_cfg).map_err(err)?;
    let m3_log = resonance_region_check(&preset("M3", Experiment::RegionCheck)?).map_err(err)?;
    let smallest = m3_log.points.iter().min_by(|a, b| a.h.total_cmp(&b.h)).ok_or("no points")?;
    let log_nonempty = !smallest.candidates.is_empty();
    let msg = format!(
        "M4 log window empty at all {} h: {} (certificate {}); M3 exp window C = {:.3} empty: {}; M3 log window at h = {:.3} holds {} resonances",
        m4.points.len(),
        m4.empty,
        cert,
        2.0 * rate,
        m3_exp.empty,
        smallest.h,
        smallest.candidates.len()
    );
    let ok = cert && m4.empty && m3_exp.empty && log_nonempty;
    shared.log_diagnostic = Some(m3_log);
    check(ok, msg)
}

fn identity(_: &mut Shared) -> Outcome {
    let v = lookup("M4").map_err(err)?.potential();
    let grid = RadialGrid::new(10.0, 200).map_err(err)?;
    let r = resolvent_identity_check(&v, 0.1, &grid, 1, 0, cx(2.0, 0.05), 2.0, 11).map_err(err)?;
    check(
        r.defect <= 1e-8 && r.dense.is_some(),
        format!(
            "size {}: left {:.1e}, right {:.1e}, three-term {:.1e}, dense {:.1e} (<= 1e-8)",
            r.size,
            r.left,
            r.right,
            r.three_term,
            r.dense.unwrap_or(f64::NAN)
        ),
    )
}

fn window_scan(shared: &mut Shared) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for id in ["M1", "M4"] {
        let s = distorted_resolvent_window_scan(&preset(id, Experiment::WindowScan)?).map_err(err)?;
        let p = s.fit("power").ok_or("power fit missing")?;
        let e = s.fit("exp_inv").ok_or("exp fit missing")?;
        let good = s.consistent && p.b < 0.0 && p.r2 > e.r2;
        ok &= good;
        parts.push(format!("{id} consistent {} power b = {:.2} (R2 {:.3} vs exp {:.3})", s.consistent, p.b, p.r2, e.r2));
    }
    let s = distorted_resolvent_window_scan(&preset("M3", Experiment::WindowScan)?).map_err(err)?;
    let p = s.fit("power").ok_or("power fit missing")?;
    let e = s.fit("exp_inv").ok_or("exp fit missing")?;
    // Every singular hit also appears in the region check's resonance list.
    let diag = shared.log_diagnostic.as_ref().ok_or("needs the diagnostic region check")?;
    let mut hits = 0;
    let mut matched = 0;
    for point in &s.points {
        let Some(rp) = diag.points.iter().find(|q| q.h == point.h) else { continue };
        for probe in point.probes.iter().filter(|q| q.singular) {
            hits += 1;
            let z = cx(probe.re, probe.im);
            if rp.candidates.iter().chain(&rp.below).any(|c| (c.z() - z).norm() <= HIT_TOLERANCE * c.z().norm().max(1.0)) {
                matched += 1;
            }
        }
    }
    let good = s.consistent && e.b > 0.0 && e.r2 > p.r2 && hits == matched;
    ok &= good;
    parts.push(format!(
        "M3 consistent {} exp S = {:.3} (R2 {:.3} vs power {:.3}), singular hits matched {matched}/{hits}",
        s.consistent, e.b, e.r2, p.r2
    ));
    check(ok, parts.join("; "))
}

fn determinism(_: &mut Shared) -> Outcome {
    let mut cfg = preset("M1", Experiment::ResolventSweep)?;
    cfg.h_list = vec![0.4, 0.2, 0.1];
    let base = std::env::temp_dir().join(format!("semiresolvent-acceptance-{}", std::process::id()));
    let mut outputs = Vec::new();
    for run in 0..2 {
        let dir = base.join(run.to_string());
        let rec = sweep_record(&cfg, &resolvent_sweep(&cfg).map_err(err)?);
        persist_and_report(&rec, &dir).map_err(err)?;
        let json = std::fs::read(dir.join("resolvent_sweep.json")).map_err(err)?;
        let csv = std::fs::read(dir.join("resolvent_sweep_norms.csv")).map_err(err)?;
        outputs.push((json, csv));
    }
    let _ = std::fs::remove_dir_all(&base);
    let identical = outputs[0] == outputs[1];
    let mut round_trips = 0;
    for m in ZOO {
        for exp in [
            Experiment::ResolventSweep,
            Experiment::RegionCheck,
            Experiment::WidthSweep,
            Experiment::WindowScan,
            Experiment::Carleman,
        ] {
            let c = preset(m.id, exp)?;
            let back = SweepConfig::parse(&c.echo(), &[], exp).map_err(err)?;
            if back != c {
                return Err(format!("{} {:?}: echo does not round-trip", m.id, exp));
            }
            round_trips += 1;
        }
    }
    check(identical, format!("JSON and CSV byte-identical across reruns: {identical}; {round_trips} config round-trips"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Shared) -> Outcome); 10] = [
        ("construction exactness", construction),
        ("oracle equivalence", oracles),
        ("carleman certificate", certificate),
        ("carleman inequality", inequality),
        ("trapping contrast", contrast),
        ("theta stability", theta_stability),
        ("resonance-free regions", region),
        ("resolvent identity", identity),
        ("window scan consistency", window_scan),
        ("determinism and io", determinism),
    ];
    let mut shared = Shared::default();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut shared);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS [{}] {name}: {msg} ({secs:.1} s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name}: {msg} ({secs:.1} s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
