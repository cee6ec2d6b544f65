use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, BandLu, BandMatrix, CMat};
use crate::scalar::{cre, cx, dot, norm2, Cx, Real};

/// Operator accessed through products (and optionally solves).
pub trait LinearMap<T: Real> {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>>;
    fn apply_adjoint(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>>;
    fn solve(&self, _b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Err(Error::invalid("operator provides no solve"))
    }
    fn solve_adjoint(&self, _b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Err(Error::invalid("operator provides no adjoint solve"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Largest,
    Smallest,
}

#[derive(Clone, Copy, Debug)]
pub struct SingularOptions<T: Real> {
    /// Relative accuracy of the eigenvalue of `A^H A` (or its inverse).
    pub tol: T,
    /// Budget of operator applications.
    pub max_iter: usize,
    pub seed: u64,
    /// Krylov basis size between restarts.
    pub basis: usize,
}

impl<T: Real> Default for SingularOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-12), max_iter: 2000, seed: 0x5eed, basis: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularEstimate<T: Real> {
    pub sigma: T,
    pub iterations: usize,
    /// Ritz residual relative to the Ritz value.
    pub residual: T,
}

/// Seeded complex start vector with entries uniform in the unit square.
pub fn seeded_vector<T: Real>(n: usize, seed: u64) -> Vec<Cx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| cx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
        .collect()
}

/// Largest or smallest singular value by power iteration on `A^H A` or
/// `(A^H A)^{-1}`, accelerated by a restarted Lanczos basis.
pub fn extreme_singular<T: Real, M: LinearMap<T> + ?Sized>(
    op: &M,
    which: Which,
    opts: &SingularOptions<T>,
) -> Result<SingularEstimate<T>> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::invalid("empty operator"));
    }
    let gram = |x: &[Cx<T>]| -> Result<Vec<Cx<T>>> {
        match which {
            Which::Largest => op.apply_adjoint(&op.apply(x)?),
            Which::Smallest => op.solve(&op.solve_adjoint(x)?),
        }
    };
    let (lam, iterations, residual) = largest_hermitian_eigenvalue(n, gram, opts)?;
    let sigma = match which {
        Which::Largest => lam.max(T::zero()).sqrt(),
        Which::Smallest => T::one() / lam.sqrt(),
    };
    Ok(SingularEstimate { sigma, iterations, residual })
}

/// Largest eigenvalue of a positive semidefinite Hermitian map.
fn largest_hermitian_eigenvalue<T: Real>(
    n: usize,
    apply: impl Fn(&[Cx<T>]) -> Result<Vec<Cx<T>>>,
    opts: &SingularOptions<T>,
) -> Result<(T, usize, T)> {
    let mut v = seeded_vector::<T>(n, opts.seed);
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let m = opts.basis.max(2).min(n);
    let mut count = 0usize;
    let mut last = (T::zero(), T::infinity());
    loop {
        let mut basis: Vec<Vec<Cx<T>>> = vec![v.clone()];
        let mut alpha: Vec<T> = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        let mut restart_vec = v.clone();
        for j in 0..m {
            let mut w = apply(&basis[j])?;
            count += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= *qi * c;
                    }
                }
            }
            let b = norm2(&w);
            let k = alpha.len();
            let mut t = CMat::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = cre(alpha[i]);
                if i + 1 < k {
                    t[(i, i + 1)] = cre(beta[i]);
                    t[(i + 1, i)] = cre(beta[i]);
                }
            }
            let (vals, vecs) = hermitian_eigen(&t);
            let theta = vals[k - 1];
            let resid = (b * vecs[(k - 1, k - 1)].norm()).abs();
            let rel = if theta > T::zero() { resid / theta } else { T::infinity() };
            last = (theta, rel);
            let done = rel <= opts.tol || b <= T::epsilon() * theta.abs() || k == n;
            if done || j + 1 == m || count >= opts.max_iter {
                let mut x = vec![cre(T::zero()); n];
                for (i, q) in basis.iter().enumerate() {
                    let c = vecs[(i, k - 1)];
                    for (xi, qi) in x.iter_mut().zip(q) {
                        *xi += *qi * c;
                    }
                }
                let nx = norm2(&x);
                x.iter_mut().for_each(|z| *z /= nx);
                restart_vec = x;
                if done {
                    return Ok((theta, count, rel));
                }
                break;
            }
            beta.push(b);
            basis.push(w.into_iter().map(|z| z / b).collect());
        }
        if count >= opts.max_iter {
            return Err(Error::NoConvergence {
                iterations: count,
                estimate: last.0.as_f64(),
                residual: last.1.as_f64(),
            });
        }
        v = restart_vec;
    }
}

/// Dense matrix as a [`LinearMap`]; solves use dense LU.
pub struct DenseMap<T: Real> {
    pub a: CMat<T>,
}

impl<T: Real> LinearMap<T> for DenseMap<T> {
    fn dim(&self) -> usize {
        self.a.rows()
    }
    fn apply(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.a.matvec(x))
    }
    fn apply_adjoint(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.a.adjoint().matvec(x))
    }
    fn solve(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        self.a.solve(b)
    }
    fn solve_adjoint(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        self.a.adjoint().solve(b)
    }
}

/// Band matrix with its factorization; every solve's residual is recorded.
pub struct BandMap<T: Real> {
    a: BandMatrix<T>,
    lu: BandLu<T>,
    max_residual: Cell<f64>,
}

impl<T: Real> BandMap<T> {
    pub fn new(a: BandMatrix<T>) -> Result<Self> {
        let lu = a.factor()?;
        Ok(Self { a, lu, max_residual: Cell::new(0.0) })
    }

    pub fn matrix(&self) -> &BandMatrix<T> {
        &self.a
    }

    /// Largest relative solve residual seen so far.
    pub fn max_residual(&self) -> f64 {
        self.max_residual.get()
    }

    fn record(&self, r: T) {
        let r = r.as_f64();
        if !(r <= self.max_residual.get()) {
            self.max_residual.set(r);
        }
    }

    pub fn solve_checked(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let x = self.lu.solve(b);
        self.record(crate::linalg::relative_residual(&self.a, &x, b));
        x
    }

    pub fn solve_adjoint_checked(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let x = self.lu.solve_adjoint(b);
        let ax = self.a.matvec_adjoint(&x);
        let r: Vec<Cx<T>> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
        let nb = norm2(b);
        self.record(if nb > T::zero() { norm2(&r) / nb } else { norm2(&r) });
        x
    }
}

impl<T: Real> LinearMap<T> for BandMap<T> {
    fn dim(&self) -> usize {
        self.a.n()
    }
    fn apply(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.a.matvec(x))
    }
    fn apply_adjoint(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.a.matvec_adjoint(x))
    }
    fn solve(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.solve_checked(b))
    }
    fn solve_adjoint(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.solve_adjoint_checked(b))
    }
}

/// `L (A)^{-1} R` with real diagonal `L`, `R`, applied through band solves.
pub struct WeightedInverse<'a, T: Real> {
    pub inner: &'a BandMap<T>,
    pub left: Vec<T>,
    pub right: Vec<T>,
}

impl<T: Real> LinearMap<T> for WeightedInverse<'_, T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        let b: Vec<Cx<T>> = x.iter().zip(&self.right).map(|(z, w)| *z * *w).collect();
        let y = self.inner.solve_checked(&b);
        Ok(y.iter().zip(&self.left).map(|(z, w)| *z * *w).collect())
    }
    fn apply_adjoint(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        let b: Vec<Cx<T>> = x.iter().zip(&self.left).map(|(z, w)| *z * *w).collect();
        let y = self.inner.solve_adjoint_checked(&b);
        Ok(y.iter().zip(&self.right).map(|(z, w)| *z * *w).collect())
    }
}
