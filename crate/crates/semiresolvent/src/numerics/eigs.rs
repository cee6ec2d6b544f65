use rayon::prelude::*;

use super::singular::seeded_vector;
use crate::error::{Error, Result};
use crate::linalg::{eig, eig_hessenberg, BandLu, BandMatrix, CMat};
use crate::operators::{ray_tube_classifier, DiscretizedOperator, EssentialRays, OperatorKind, RayClass};
use crate::scalar::{cre, cx, dot, norm2, Cx, Real};

/// Closed rectangle `[re_min, re_max] x [im_min, im_max]` of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window<T: Real> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Real> Window<T> {
    pub fn new(re: (T, T), im: (T, T)) -> Result<Self> {
        if !(re.0 < re.1) || !(im.0 < im.1) {
            return Err(Error::invalid("window needs re_min < re_max and im_min < im_max"));
        }
        Ok(Self { re_min: re.0, re_max: re.1, im_min: im.0, im_max: im.1 })
    }

    /// Membership with `slack` on the left, right and top edges; the bottom
    /// edge is exact, since exponentially thin windows are narrower than any slack.
    pub fn contains(&self, z: Cx<T>, slack: T) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min
            && z.im <= self.im_max + slack
    }

    /// `nx x ny` lattice including the edges.
    pub fn lattice(&self, nx: usize, ny: usize) -> Vec<Cx<T>> {
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push(cx(
                    lerp(self.re_min, self.re_max, i, nx),
                    lerp(self.im_max, self.im_min, j, ny),
                ));
            }
        }
        out
    }

    /// Centers of an `nx x ny` cell partition.
    pub fn cell_centers(&self, nx: usize, ny: usize) -> Vec<Cx<T>> {
        let half = T::lit(0.5);
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let fx = (T::of_usize(i) + half) / T::of_usize(nx);
                let fy = (T::of_usize(j) + half) / T::of_usize(ny);
                out.push(cx(
                    self.re_min + (self.re_max - self.re_min) * fx,
                    self.im_max - (self.im_max - self.im_min) * fy,
                ));
            }
        }
        out
    }

    /// Distance from the window to a ray (zero when they meet).
    pub fn ray_distance(&self, rays: &EssentialRays<T>) -> T {
        let corners = [
            cx(self.re_min, self.im_min),
            cx(self.re_min, self.im_max),
            cx(self.re_max, self.im_min),
            cx(self.re_max, self.im_max),
        ];
        let mut best = T::infinity();
        for ray in &rays.rays {
            let dir = Cx::from_polar(T::one(), ray.angle);
            // Clip t >= 0 against both slabs.
            let mut lo = T::zero();
            let mut hi = T::infinity();
            let mut hit = true;
            for (p, d, a, b) in [
                (ray.origin, dir.re, self.re_min, self.re_max),
                (T::zero(), dir.im, self.im_min, self.im_max),
            ] {
                if d == T::zero() {
                    if p < a || p > b {
                        hit = false;
                    }
                } else {
                    let t1 = (a - p) / d;
                    let t2 = (b - p) / d;
                    lo = lo.max(t1.min(t2));
                    hi = hi.min(t1.max(t2));
                }
            }
            if hit && lo <= hi {
                return T::zero();
            }
            for c in corners {
                best = best.min(ray.distance(c));
            }
            let o = cre(ray.origin);
            let dx = (self.re_min - o.re).max(T::zero()).max(o.re - self.re_max);
            let dy = (self.im_min - o.im).max(T::zero()).max(o.im - self.im_max);
            best = best.min((dx * dx + dy * dy).sqrt());
        }
        best
    }
}

fn lerp<T: Real>(a: T, b: T, i: usize, n: usize) -> T {
    if n < 2 {
        return (a + b) / T::lit(2.0);
    }
    a + (b - a) * T::of_usize(i) / T::of_usize(n - 1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resonance<T: Real> {
    pub z: Cx<T>,
    pub theta: T,
    /// `||(P_theta - z) u|| / ||u||`.
    pub residual: T,
    pub class: RayClass,
    /// `|z(theta_1) - z(theta_2)|` once a stability run has paired it.
    pub stability: Option<T>,
}

#[derive(Clone, Copy, Debug)]
pub struct EigsOptions<T: Real> {
    /// Absolute residual bound `||(P - z) u|| <= tol ||u||`.
    pub tol: T,
    /// Sizes up to this use the dense eigensolver.
    pub dense_threshold: usize,
    /// Initial shift grid over the window.
    pub shift_grid: (usize, usize),
    pub krylov: usize,
    /// Extra refinement rounds placing shifts at uncovered points.
    pub max_rounds: usize,
    pub tube_half_width: T,
    pub seed: u64,
}

impl<T: Real> Default for EigsOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-8),
            dense_threshold: 300,
            shift_grid: (8, 5),
            krylov: 40,
            max_rounds: 2,
            tube_half_width: T::zero(),
            seed: 0xe165,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigsResult<T: Real> {
    pub resonances: Vec<Resonance<T>>,
    /// Unit eigenvectors, aligned with `resonances`.
    pub vectors: Vec<Vec<Cx<T>>>,
    /// The window meets a ray tube; tags are still attached.
    pub touches_rays: bool,
    /// Every window sample lies inside some shift's converged disk.
    pub coverage_complete: bool,
    pub shifts: usize,
    pub dense: bool,
}

impl<T: Real> EigsResult<T> {
    pub fn candidates(&self) -> impl Iterator<Item = &Resonance<T>> {
        self.resonances.iter().filter(|r| r.class == RayClass::CandidateResonance)
    }
}

struct Ritz<T: Real> {
    z: Cx<T>,
    x: Vec<Cx<T>>,
    residual: T,
}

fn residual<T: Real>(a: &BandMatrix<T>, z: Cx<T>, x: &[Cx<T>]) -> T {
    let ax = a.matvec(x);
    let r: Vec<Cx<T>> = ax.iter().zip(x).map(|(p, q)| *p - z * *q).collect();
    norm2(&r) / norm2(x)
}

fn normalize<T: Real>(x: &mut [Cx<T>]) {
    let n = norm2(x);
    if n > T::zero() {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Factors `A - sigma`, nudging the shift off an exact eigenvalue.
fn factor_near<T: Real>(a: &BandMatrix<T>, sigma: Cx<T>) -> Result<(Cx<T>, BandLu<T>)> {
    let mut s = sigma;
    for _ in 0..4 {
        match a.shifted(-s).factor() {
            Ok(lu) => return Ok((s, lu)),
            Err(Error::Singular { .. }) => {
                let bump = T::lit(1e-9) * (T::one() + s.norm());
                s += cx(bump, -bump);
            }
            Err(e) => return Err(e),
        }
    }
    a.shifted(-s).factor().map(|lu| (s, lu))
}

/// Shift-invert Arnoldi around `sigma`; returns Ritz pairs and the radius of
/// the disk inside which every eigenvalue is believed found.
fn shift_invert<T: Real>(
    a: &BandMatrix<T>,
    sigma: Cx<T>,
    m: usize,
    accept: T,
    seed: u64,
) -> Result<(Vec<Ritz<T>>, T)> {
    let n = a.n();
    let (sigma, lu) = factor_near(a, sigma)?;
    let m = m.min(n);
    let mut v = seeded_vector::<T>(n, seed);
    normalize(&mut v);
    let mut basis = vec![v];
    let mut h = CMat::zeros(m + 1, m);
    let mut size = m;
    let mut invariant = false;
    for j in 0..m {
        let mut w = lu.solve(&basis[j]);
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                h[(i, j)] += c;
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= *qi * c;
                }
            }
        }
        let b = norm2(&w);
        h[(j + 1, j)] = cre(b);
        let scale = (0..=j).fold(T::zero(), |s, i| s.max(h[(i, j)].norm()));
        if b <= T::lit(1e-13) * scale.max(T::min_positive_value()) {
            size = j + 1;
            invariant = true;
            break;
        }
        basis.push(w.into_iter().map(|z| z / b).collect());
    }
    let mut hm = CMat::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            hm[(i, j)] = h[(i, j)];
        }
    }
    let (mu, y) = eig_hessenberg(&hm)?;
    let tiny = T::epsilon() * mu.iter().fold(T::zero(), |s, z| s.max(z.norm()));
    let mut ritz = Vec::new();
    for (k, &m_k) in mu.iter().enumerate() {
        if m_k.norm() <= tiny {
            continue;
        }
        let z = sigma + cre(T::one()) / m_k;
        let mut x = vec![cre(T::zero()); n];
        for (i, q) in basis.iter().take(size).enumerate() {
            let c = y[(i, k)];
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi += *qi * c;
            }
        }
        normalize(&mut x);
        let r = residual(a, z, &x);
        ritz.push(Ritz { z, x, residual: r });
    }
    ritz.sort_by(|p, q| (p.z - sigma).norm().partial_cmp(&(q.z - sigma).norm()).unwrap_or(std::cmp::Ordering::Equal));
    let radius = if invariant {
        T::infinity()
    } else {
        match ritz.iter().position(|r| !(r.residual <= accept)) {
            Some(k) => (ritz[k].z - sigma).norm(),
            None => ritz.last().map_or(T::zero(), |r| (r.z - sigma).norm()),
        }
    };
    Ok((ritz, radius))
}

/// Inverse iteration with Rayleigh-quotient updates (unconjugated, exact for
/// complex-symmetric matrices) until the residual drops below `tol`.
fn refine<T: Real>(a: &BandMatrix<T>, p: Ritz<T>, tol: T) -> Ritz<T> {
    if p.residual <= tol {
        return p;
    }
    let Ok((_, lu)) = factor_near(a, p.z) else { return p };
    let mut best = p;
    let mut x = best.x.clone();
    for _ in 0..4 {
        x = lu.solve(&x);
        normalize(&mut x);
        let ax = a.matvec(&x);
        let num = x.iter().zip(&ax).fold(cre(T::zero()), |s, (u, v)| s + u * v);
        let den = x.iter().fold(cre(T::zero()), |s, u| s + u * u);
        let z = if den.norm() > T::lit(1e-8) { num / den } else { dot(&x, &ax) };
        let r = residual(a, z, &x);
        if r < best.residual {
            best = Ritz { z, x: x.clone(), residual: r };
        }
        if best.residual <= tol {
            break;
        }
    }
    best
}

fn dense_ritz<T: Real>(a: &BandMatrix<T>) -> Result<Vec<Ritz<T>>> {
    let d = a.to_dense();
    let (vals, vecs) = eig(&d)?;
    let n = a.n();
    Ok(vals
        .into_iter()
        .enumerate()
        .map(|(k, z)| {
            let x: Vec<Cx<T>> = (0..n).map(|i| vecs[(i, k)]).collect();
            let r = residual(a, z, &x);
            Ritz { z, x, residual: r }
        })
        .collect())
}

/// Eigenvalues of a complex-scaled operator inside `window`, each with a
/// residual certificate and a ray-tube tag.
pub fn eigs_in_window<T: Real>(
    op: &DiscretizedOperator<T>,
    window: &Window<T>,
    rays: &EssentialRays<T>,
    opts: &EigsOptions<T>,
) -> Result<EigsResult<T>> {
    if op.meta.kind != OperatorKind::Distorted {
        return Err(Error::invalid("eigs_in_window expects a distorted operator"));
    }
    let theta = T::lit(op.meta.theta.unwrap_or(0.0));
    let raw = raw_eigs(&op.matrix, window, opts)?;
    let slack = opts.tol;
    let touches_rays = window.ray_distance(rays) <= opts.tube_half_width;
    if touches_rays {
        log::warn!(
            "window [{}, {}] x [{}, {}] overlaps a ray tube of half-width {}",
            window.re_min,
            window.re_max,
            window.im_min,
            window.im_max,
            opts.tube_half_width
        );
    }
    let mut resonances = Vec::new();
    let mut vectors = Vec::new();
    for p in raw.pairs {
        if !window.contains(p.z, slack) || !(p.residual <= opts.tol) {
            continue;
        }
        resonances.push(Resonance {
            z: p.z,
            theta,
            residual: p.residual,
            class: ray_tube_classifier(p.z, rays, opts.tube_half_width),
            stability: None,
        });
        vectors.push(p.x);
    }
    Ok(EigsResult {
        resonances,
        vectors,
        touches_rays,
        coverage_complete: raw.coverage_complete,
        shifts: raw.shifts,
        dense: raw.dense,
    })
}

struct RawEigs<T: Real> {
    pairs: Vec<Ritz<T>>,
    coverage_complete: bool,
    shifts: usize,
    dense: bool,
}

/// All eigen-pairs near `window`, deduplicated and sorted by `(Re, Im)`.
fn raw_eigs<T: Real>(a: &BandMatrix<T>, window: &Window<T>, opts: &EigsOptions<T>) -> Result<RawEigs<T>> {
    let accept = opts.tol * T::lit(100.0);
    let slack = opts.tol;
    let (mut pairs, coverage_complete, shifts, dense) = if a.n() <= opts.dense_threshold {
        (dense_ritz(a)?, true, 0, true)
    } else {
        let samples = window.lattice(17, 9);
        let mut covered = vec![false; samples.len()];
        let mut shifts: Vec<Cx<T>> = window.cell_centers(opts.shift_grid.0.max(1), opts.shift_grid.1.max(1));
        let mut pairs = Vec::new();
        let mut used = 0usize;
        for round in 0..=opts.max_rounds {
            let base = used as u64;
            let runs: Vec<Result<(Vec<Ritz<T>>, T)>> = shifts
                .par_iter()
                .enumerate()
                .map(|(k, &s)| shift_invert(a, s, opts.krylov, accept, opts.seed.wrapping_add(base + k as u64)))
                .collect();
            for (s, run) in shifts.iter().zip(runs) {
                let (ritz, radius) = run?;
                for (c, p) in covered.iter_mut().zip(&samples) {
                    if (*p - *s).norm() < radius {
                        *c = true;
                    }
                }
                pairs.extend(
                    ritz.into_iter()
                        .filter(|r| r.residual <= accept && window.contains(r.z, slack + accept)),
                );
            }
            used += shifts.len();
            let open: Vec<Cx<T>> =
                samples.iter().zip(&covered).filter(|(_, c)| !**c).map(|(p, _)| *p).collect();
            if open.is_empty() || round == opts.max_rounds {
                break;
            }
            // Spread new shifts over the uncovered samples.
            let take = open.len().min(opts.shift_grid.0 * opts.shift_grid.1).max(1);
            let stride = open.len() as f64 / take as f64;
            shifts = (0..take).map(|k| open[(k as f64 * stride) as usize]).collect();
        }
        let complete = covered.iter().all(|&c| c);
        // Single-pass calls (the tube estimate) accept partial coverage.
        if !complete && opts.max_rounds > 0 {
            log::warn!("eigensolver coverage incomplete after {used} shifts");
        }
        (pairs, complete, used, false)
    };
    pairs.retain(|p| window.contains(p.z, slack + accept));
    let refined: Vec<Ritz<T>> = pairs.into_par_iter().map(|p| refine(a, p, opts.tol)).collect();
    let mut sorted = refined;
    sorted.sort_by(|p, q| p.residual.partial_cmp(&q.residual).unwrap_or(std::cmp::Ordering::Equal));
    let mut kept: Vec<Ritz<T>> = Vec::new();
    for p in sorted {
        let tol = T::lit(1e-8) * T::one().max(p.z.norm());
        if kept.iter().all(|q| (q.z - p.z).norm() > tol) {
            kept.push(p);
        }
    }
    kept.sort_by(|p, q| {
        (p.z.re, p.z.im).partial_cmp(&(q.z.re, q.z.im)).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RawEigs { pairs: kept, coverage_complete, shifts, dense })
}

/// Ray-tube half-width `5 delta`, with `delta` the eigenvalue spacing of the
/// discretized continua of the free operator near the window's real range.
pub fn estimate_tube_half_width<T: Real>(
    free_op: &DiscretizedOperator<T>,
    rays: &EssentialRays<T>,
    re_range: (T, T),
    opts: &EigsOptions<T>,
) -> Result<T> {
    let span = (re_range.1 - re_range.0).max(T::lit(1e-3));
    let mut gaps: Vec<T> = Vec::new();
    let dir_of = |angle: T| Cx::from_polar(T::one(), angle);
    for ray in &rays.rays {
        let dir = dir_of(ray.angle);
        if dir.re <= T::zero() {
            continue;
        }
        let lo = re_range.0.max(ray.origin + span * T::lit(0.05));
        let mut hi = re_range.1.max(lo + span * T::lit(0.5));
        // Grow the segment until it holds a few spacings.
        for _ in 0..4 {
            let t_lo = (lo - ray.origin) / dir.re;
            let t_hi = (hi - ray.origin) / dir.re;
            let p_lo = cre(ray.origin) + dir * t_lo;
            let p_hi = cre(ray.origin) + dir * t_hi;
            let pad = (p_hi - p_lo).norm() * T::lit(0.1);
            let win = Window::new(
                (p_lo.re.min(p_hi.re) - pad, p_lo.re.max(p_hi.re) + pad),
                (p_lo.im.min(p_hi.im) - pad, p_lo.im.max(p_hi.im) + pad),
            )?;
            let sub = EigsOptions { shift_grid: (6, 1), max_rounds: 0, ..*opts };
            let raw = raw_eigs(&free_op.matrix, &win, &sub)?;
            let mut on: Vec<Cx<T>> = raw.pairs.iter().map(|p| p.z).filter(|z| ray.distance(*z) <= pad).collect();
            on.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
            // Continuum eigenvalues are ill conditioned and come back as tight
            // clusters of copies; gaps inside a cluster are not spacings.
            let merge = (p_hi - p_lo).norm() * T::lit(1e-4);
            let found: Vec<T> = on.windows(2).map(|w| (w[1] - w[0]).norm()).filter(|g| *g > merge).collect();
            if found.len() >= 2 {
                gaps.extend(found);
                break;
            }
            hi = lo + (hi - lo) * T::lit(2.0);
        }
    }
    if gaps.is_empty() {
        return Ok(T::zero());
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(T::lit(5.0) * gaps[gaps.len() / 2])
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport<T: Real> {
    /// Worst `|z_1 - z_2|` over matched candidates.
    pub deviation: T,
    /// Worst `|z_1 - z_2| / |z_1|`.
    pub relative: T,
    pub pairs: Vec<(Cx<T>, Cx<T>)>,
    pub unmatched_first: Vec<Cx<T>>,
    pub unmatched_second: Vec<Cx<T>>,
}

/// Pairs the eigenvalues of two scaled runs by nearest neighbours.
///
/// Candidates are compared when the window is clear of both ray tubes; when
/// it touches one, every eigenvalue in the window takes part, so continuum
/// strings (which move with the angle) surface as a count mismatch.
pub fn theta_stability<T: Real>(first: &EigsResult<T>, second: &EigsResult<T>) -> Result<StabilityReport<T>> {
    let all = first.touches_rays || second.touches_rays;
    let pick = |r: &EigsResult<T>| -> Vec<Cx<T>> {
        r.resonances
            .iter()
            .filter(|x| all || x.class == RayClass::CandidateResonance)
            .map(|x| x.z)
            .collect()
    };
    let a = pick(first);
    let b = pick(second);
    if a.len() != b.len() {
        return Err(Error::UnmatchedResonance { first: a.len(), second: b.len() });
    }
    let mut free: Vec<Option<Cx<T>>> = b.iter().copied().map(Some).collect();
    let mut report = StabilityReport {
        deviation: T::zero(),
        relative: T::zero(),
        pairs: Vec::new(),
        unmatched_first: Vec::new(),
        unmatched_second: Vec::new(),
    };
    for &z in &a {
        let best = free
            .iter()
            .enumerate()
            .filter_map(|(k, w)| w.map(|w| (k, (w - z).norm())))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap_or(std::cmp::Ordering::Equal));
        match best {
            Some((k, d)) => {
                let w = free[k].take().unwrap_or(z);
                report.deviation = report.deviation.max(d);
                if z.norm() > T::zero() {
                    report.relative = report.relative.max(d / z.norm());
                }
                report.pairs.push((z, w));
            }
            None => report.unmatched_first.push(z),
        }
    }
    report.unmatched_second = free.into_iter().flatten().collect();
    Ok(report)
}

/// Labels each eigenvalue of `result` with its stability deviation from `report`.
pub fn attach_stability<T: Real>(result: &mut EigsResult<T>, report: &StabilityReport<T>) {
    for r in &mut result.resonances {
        if let Some((_, w)) = report.pairs.iter().find(|(z, _)| *z == r.z) {
            r.stability = Some((*w - r.z).norm());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PotentialConfig;
    use crate::operators::{distorted_operator, essential_rays, DistortionProfile, RadialGrid};

    #[test]
    fn window_meets_ray() {
        let rays = essential_rays(&[0.0f64], 0.2);
        let w = Window::new((0.5, 1.0), (-0.5, 0.0)).unwrap();
        assert_eq!(w.ray_distance(&rays), 0.0);
        let w = Window::new((0.5, 1.0), (-0.05, 0.0)).unwrap();
        assert!(w.ray_distance(&rays) > 0.1);
    }

    #[test]
    fn free_window_below_axis_is_empty() {
        let v = PotentialConfig::new("free").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(30.0, 1500).unwrap();
        let p = DistortionProfile::exterior(2.0, 0.3).unwrap();
        let op = distorted_operator(&v, 0.1, &g, &p, 1, 0).unwrap();
        let rays = essential_rays(&v.thresholds(), 0.3);
        let w = Window::new((0.5, 1.5), (-0.1, 0.0)).unwrap();
        let r = eigs_in_window(&op, &w, &rays, &EigsOptions::default()).unwrap();
        assert!(r.resonances.is_empty(), "{:?}", r.resonances);
        assert!(!r.touches_rays);
    }

    #[test]
    fn dense_and_shift_invert_agree() {
        let v = PotentialConfig::new("volcano").unwrap().build::<f64>().unwrap();
        let g = RadialGrid::new(14.0, 280).unwrap();
        let p = DistortionProfile::exterior(4.0, 0.3).unwrap();
        let op = distorted_operator(&v, 0.15, &g, &p, 1, 0).unwrap();
        let rays = essential_rays(&v.thresholds(), 0.3);
        let w = Window::new((0.05, 0.45), (-0.15, 0.0)).unwrap();
        let dense = eigs_in_window(&op, &w, &rays, &EigsOptions::default()).unwrap();
        let opts = EigsOptions { dense_threshold: 0, ..EigsOptions::default() };
        let si = eigs_in_window(&op, &w, &rays, &opts).unwrap();
        assert!(dense.dense && !si.dense);
        assert!(!dense.resonances.is_empty());
        assert_eq!(dense.resonances.len(), si.resonances.len());
        for (a, b) in dense.resonances.iter().zip(&si.resonances) {
            assert!((a.z - b.z).norm() < 1e-9, "{} {}", a.z, b.z);
        }
        for (r, u) in si.resonances.iter().zip(&si.vectors) {
            assert!(residual(&op.matrix, r.z, u) <= 1e-8);
        }
    }

    #[test]
    fn count_mismatch_is_reported() {
        let mk = |zs: &[Cx<f64>]| EigsResult {
            resonances: zs
                .iter()
                .map(|&z| Resonance { z, theta: 0.1, residual: 0.0, class: RayClass::CandidateResonance, stability: None })
                .collect(),
            vectors: vec![],
            touches_rays: false,
            coverage_complete: true,
            shifts: 0,
            dense: true,
        };
        let a = mk(&[cx(1.0, -0.1)]);
        let b = mk(&[]);
        assert!(matches!(theta_stability(&a, &b), Err(Error::UnmatchedResonance { first: 1, second: 0 })));
        let free = theta_stability::<f64>(&mk(&[]), &mk(&[])).unwrap();
        assert_eq!(free.deviation, 0.0);
    }
}
