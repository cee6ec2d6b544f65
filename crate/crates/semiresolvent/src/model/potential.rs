use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};
use crate::scalar::{cre, Cx, Real};

/// Scalar radial profile with a closed-form analytic continuation.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile<T: Real> {
    /// `exp(-((z - center) / width)^2)`
    Gaussian { center: T, width: T },
    /// `exp(-rate z)`
    Exponential { rate: T },
    /// `(1 + z^2)^(-rho / 2)`
    Rational { rho: T },
    /// `(1 + z)^(-power)`
    Algebraic { power: T },
    /// `tanh((z - center) / width) - 1`
    TanhStep { center: T, width: T },
    /// Indicator of `Re z < radius` (value 1/2 on the edge). Not analytic;
    /// only usable with a distortion onset beyond `radius`.
    Step { radius: T },
}

impl<T: Real> Profile<T> {
    pub fn value(&self, z: Cx<T>) -> Cx<T> {
        let one = cre(T::one());
        match *self {
            Profile::Gaussian { center, width } => {
                let u = (z - center) / width;
                (-(u * u)).exp()
            }
            Profile::Exponential { rate } => (-(z * rate)).exp(),
            Profile::Rational { rho } => (one + z * z).powf(-rho / T::lit(2.0)),
            Profile::Algebraic { power } => (one + z).powf(-power),
            Profile::TanhStep { center, width } => ((z - center) / width).tanh() - one,
            Profile::Step { radius } => {
                if z.re < radius {
                    one
                } else if z.re == radius {
                    cre(T::lit(0.5))
                } else {
                    cre(T::zero())
                }
            }
        }
    }

    pub fn derivative(&self, z: Cx<T>) -> Cx<T> {
        let one = cre(T::one());
        let two = T::lit(2.0);
        match *self {
            Profile::Gaussian { center, width } => {
                let u = (z - center) / width;
                -(u * two / width) * (-(u * u)).exp()
            }
            Profile::Exponential { rate } => -(-(z * rate)).exp() * rate,
            Profile::Rational { rho } => -z * rho * (one + z * z).powf(-rho / two - T::one()),
            Profile::Algebraic { power } => -(one + z).powf(-power - T::one()) * power,
            Profile::TanhStep { center, width } => {
                let t = ((z - center) / width).tanh();
                (one - t * t) / width
            }
            Profile::Step { .. } => cre(T::zero()),
        }
    }

    /// Describes a pole or branch point close to `z`, if any.
    pub fn singularity(&self, z: Cx<T>) -> Option<String> {
        let tol = T::lit(1e-6);
        let one = cre(T::one());
        match *self {
            Profile::Rational { .. } => {
                let q = one + z * z;
                if q.norm() < tol {
                    Some("branch point of (1 + z^2)^(-rho/2)".into())
                } else if q.re < T::zero() && q.im.abs() < tol {
                    Some("branch cut of (1 + z^2)^(-rho/2)".into())
                } else {
                    None
                }
            }
            Profile::Algebraic { .. } => {
                let q = one + z;
                if q.norm() < tol || (q.re < T::zero() && q.im.abs() < tol) {
                    Some("branch point of (1 + z)^(-p)".into())
                } else {
                    None
                }
            }
            Profile::TanhStep { center, width } => {
                if ((z - center) / width).cosh().norm() < tol {
                    Some("pole of tanh".into())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Sector slope `c0` and radius `kappa` of the analyticity region.
    pub fn sector(&self) -> (T, T) {
        match *self {
            // Decay of exp(-z^2) needs |arg z| < pi/4; keep a margin.
            Profile::Gaussian { .. } => (T::lit(0.75), T::zero()),
            Profile::Exponential { .. } => (T::lit(1.7), T::zero()),
            Profile::Rational { .. } | Profile::Algebraic { .. } => (T::lit(1.7), T::zero()),
            Profile::TanhStep { center, width } => (T::lit(1.7), center + width * T::lit(2.0)),
            Profile::Step { radius } => (T::lit(1.7), radius),
        }
    }

    /// Whether the profile is analytic (all but the step).
    pub fn is_analytic(&self) -> bool {
        !matches!(self, Profile::Step { .. })
    }
}

/// One term `coeff * f(z)` of a potential; `coeff` is real symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<T: Real> {
    pub coeff: Vec<T>,
    pub profile: Profile<T>,
}

/// Analyticity data of the sector `{|Im x| <= c0 Re x, Re x > kappa}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Analyticity<T: Real> {
    pub c0: T,
    pub kappa: T,
    /// Constant `C` in `||V(x) - V_inf|| <= C <x>^(-rho0)` on the sector.
    pub bound: T,
}

impl<T: Real> Analyticity<T> {
    /// Largest admissible scaling angle `arctan(c0)`.
    pub fn angle(&self) -> T {
        self.c0.atan()
    }
}

/// Radial `N x N` potential `V(r) = V_inf + sum_k M_k f_k(r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPotential<T: Real> {
    n: usize,
    v_inf: Vec<T>,
    terms: Vec<Term<T>>,
    rho0: T,
    analyticity: Analyticity<T>,
    label: String,
    params: Vec<(String, f64)>,
}

fn check_symmetric<T: Real>(n: usize, m: &[T], what: &str) -> Result<()> {
    if m.len() != n * n {
        return Err(Error::invalid(format!("{what} must have {} entries", n * n)));
    }
    for i in 0..n {
        for j in 0..i {
            if m[i * n + j] != m[j * n + i] {
                return Err(Error::invalid(format!("{what} is not symmetric")));
            }
        }
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what} has non-finite entries")));
    }
    Ok(())
}

impl<T: Real> MatrixPotential<T> {
    /// Constant potential `V = V_inf` with the given decay rate.
    pub fn constant(n: usize, v_inf: Vec<T>, rho0: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("potential needs at least one channel"));
        }
        check_symmetric(n, &v_inf, "V_inf")?;
        if !(rho0 > T::zero()) {
            return Err(Error::invalid("rho0 must be positive"));
        }
        let mut v = Self {
            n,
            v_inf,
            terms: Vec::new(),
            rho0,
            analyticity: Analyticity { c0: T::lit(1.7), kappa: T::zero(), bound: T::zero() },
            label: "constant".into(),
            params: Vec::new(),
        };
        v.refresh_analyticity();
        Ok(v)
    }

    /// Adds a term `coeff * profile`.
    pub fn with_term(mut self, coeff: Vec<T>, profile: Profile<T>) -> Result<Self> {
        check_symmetric(self.n, &coeff, "term coefficient")?;
        self.terms.push(Term { coeff, profile });
        self.refresh_analyticity();
        Ok(self)
    }

    /// Attaches the family tag and parameter record used for persistence.
    pub fn with_label(mut self, label: impl Into<String>, params: Vec<(String, f64)>) -> Self {
        self.label = label.into();
        self.params = params;
        self
    }

    fn refresh_analyticity(&mut self) {
        let mut c0 = T::lit(1.7);
        let mut kappa = T::zero();
        for t in &self.terms {
            let (c, k) = t.profile.sector();
            c0 = c0.min(c);
            kappa = kappa.max(k);
        }
        self.analyticity = Analyticity { c0, kappa, bound: T::zero() };
        self.analyticity.bound = self.sample_sector_bound();
    }

    /// Conservative `C` from a dense polar sample of the sector.
    fn sample_sector_bound(&self) -> T {
        if self.terms.is_empty() {
            return T::zero();
        }
        let a = self.analyticity;
        let psi_max = a.angle();
        let mut worst = T::zero();
        for ia in 0..=16 {
            let psi = psi_max * T::lit(-1.0 + 2.0 * ia as f64 / 16.0);
            for ir in 0..=400 {
                let rho = T::lit(0.25 * ir as f64);
                let x = Cx::from_polar(rho, psi);
                if x.re <= a.kappa && a.kappa > T::zero() {
                    continue;
                }
                let d = self.perturbation(x).norm2();
                let w = (T::one() + x.norm_sqr()).powf(self.rho0 / T::lit(2.0));
                let ratio = d * w;
                if ratio.is_finite() {
                    worst = worst.max(ratio);
                }
            }
        }
        worst * T::lit(1.25)
    }

    pub fn channels(&self) -> usize {
        self.n
    }

    pub fn rho0(&self) -> T {
        self.rho0
    }

    pub fn analyticity(&self) -> Analyticity<T> {
        self.analyticity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    /// True when every term has an analytic continuation.
    pub fn is_analytic(&self) -> bool {
        self.terms.iter().all(|t| t.profile.is_analytic())
    }

    pub fn v_inf(&self) -> CMat<T> {
        CMat::from_real(self.n, self.n, &self.v_inf)
    }

    /// Channel thresholds: ascending eigenvalues of `V_inf`.
    pub fn thresholds(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.v_inf())
    }

    /// Spectral norm of `V_inf`.
    pub fn v_inf_norm(&self) -> T {
        self.thresholds().iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    fn combine(&self, z: Cx<T>, with_inf: bool, deriv: bool, hermitian: bool) -> CMat<T> {
        let n = self.n;
        let vals: Vec<Cx<T>> = self
            .terms
            .iter()
            .map(|t| if deriv { t.profile.derivative(z) } else { t.profile.value(z) })
            .collect();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = if with_inf { cre(self.v_inf[i * n + j]) } else { cre(T::zero()) };
                for (t, f) in self.terms.iter().zip(&vals) {
                    let c = t.coeff[i * n + j];
                    if c != T::zero() {
                        acc += *f * c;
                    }
                }
                if i == j && hermitian {
                    acc = cre(acc.re);
                }
                m[(i, j)] = acc;
                m[(j, i)] = if hermitian { acc.conj() } else { acc };
            }
        }
        m
    }

    /// `V(z)` at a complex radius (complex symmetric continuation).
    pub fn entries(&self, z: Cx<T>) -> CMat<T> {
        self.combine(z, true, false, false)
    }

    /// `V'(z)` at a complex radius.
    pub fn radial_derivative(&self, z: Cx<T>) -> CMat<T> {
        self.combine(z, false, true, false)
    }

    /// `V(r)` at a real radius, exactly Hermitian.
    pub fn at(&self, r: T) -> CMat<T> {
        self.combine(cre(r), true, false, true)
    }

    /// `V'(r)` at a real radius, exactly Hermitian.
    pub fn derivative_at(&self, r: T) -> CMat<T> {
        self.combine(cre(r), false, true, true)
    }

    /// `V(z) - V_inf`.
    pub fn perturbation(&self, z: Cx<T>) -> CMat<T> {
        self.combine(z, false, false, false)
    }

    /// First singularity of the continuation met along `points`.
    pub fn contour_singularity(&self, points: &[Cx<T>]) -> Option<(T, String)> {
        for z in points {
            for t in &self.terms {
                if let Some(msg) = t.profile.singularity(*z) {
                    return Some((z.re, msg));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coupled() -> MatrixPotential<f64> {
        MatrixPotential::constant(2, vec![0.0, 0.0, 0.0, 1.0], 1.0)
            .unwrap()
            .with_term(vec![0.0, 1.0, 1.0, 0.0], Profile::Gaussian { center: 0.0, width: 1.0 })
            .unwrap()
    }

    #[test]
    fn coupled_model_at_origin() {
        let v = coupled();
        let m = v.at(0.0);
        assert_eq!(m, CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 1.0]));
    }

    #[test]
    fn real_axis_values_are_hermitian() {
        let v = coupled();
        for k in 0..200 {
            let r = 0.37 * k as f64;
            assert_eq!(v.at(r).hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn complex_continuation_matches_real_axis() {
        let v = coupled();
        for k in 0..50 {
            let r = 0.21 * k as f64;
            assert_eq!(v.entries(cre(r)), v.at(r));
        }
    }

    #[test]
    fn asymmetric_coefficient_rejected() {
        let v = MatrixPotential::constant(2, vec![0.0; 4], 1.0).unwrap();
        let r = v.with_term(vec![0.0, 1.0, 0.5, 0.0], Profile::Exponential { rate: 1.0 });
        assert!(r.is_err());
    }

    #[test]
    fn profile_derivatives_match_complex_step() {
        let profiles = [
            Profile::Gaussian { center: 0.3, width: 1.2 },
            Profile::Exponential { rate: 0.7 },
            Profile::Rational { rho: 2.0 },
            Profile::Algebraic { power: 1.5 },
            Profile::TanhStep { center: 3.0, width: 1.0 },
        ];
        let d = 1e-6;
        for p in profiles {
            for &r in &[0.4, 1.3, 2.9, 5.0] {
                let z = Cx::new(r, 0.2);
                let fd = (p.value(z + d) - p.value(z - d)) / (2.0 * d);
                assert!((fd - p.derivative(z)).norm() < 1e-8, "{p:?} at {r}");
            }
        }
    }
}
