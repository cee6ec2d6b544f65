use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{cre, Cx, Real};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Cx::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cre(T::one());
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[T]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, data: entries.iter().map(|&x| cre(x)).collect() }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn diag_real(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = cre(x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn matvec(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .fold(cre(T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift_diag(&self, s: Cx<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += s;
        }
        m
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> T {
        crate::scalar::norm2(&self.data)
    }

    /// Largest |A_ij - conj(A_ji)|; zero means exactly Hermitian.
    pub fn hermitian_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> T {
        if self.rows == 0 || self.cols == 0 {
            return T::zero();
        }
        let g = self.adjoint().matmul(self);
        let (vals, _) = hermitian_eigen(&g);
        vals.last().copied().unwrap_or(T::zero()).max(T::zero()).sqrt()
    }

    /// Solves `A x = b` by dense LU with partial pivoting.
    pub fn solve(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        let tiny = T::epsilon() * a.max_abs();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap())
                .unwrap();
            if a[(p, k)].norm() <= tiny {
                return Err(Error::Singular { index: k });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                x.swap(k, p);
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let l = a[(i, k)] / piv;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= l * u;
                }
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        Ok(x)
    }
}

impl<T: Real> Index<(usize, usize)> for CMat<T> {
    type Output = Cx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Returns ascending eigenvalues and the unitary matrix whose columns are the
/// matching eigenvectors. Only the upper triangle is read.
pub fn hermitian_eigen<T: Real>(a: &CMat<T>) -> (Vec<T>, CMat<T>) {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
        m[(i, i)] = cre(m[(i, i)].re);
    }
    let mut v = CMat::identity(n);
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag.max(m[(i, i)].re.abs());
            for j in i + 1..n {
                off = off.max(m[(i, j)].norm());
            }
        }
        if off <= T::epsilon() * T::lit(0.25) * diag || off <= T::min_positive_value() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let babs = b.norm();
                if babs == T::zero() {
                    continue;
                }
                let phase = b / babs;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (two * babs);
                let t = {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // Unitary 2x2 block W = diag(1, conj(phase)) * [[c, s], [-s, c]].
                let w_pp = cre(c);
                let w_pq = cre(s);
                let w_qp = phase.conj() * (-s);
                let w_qq = phase.conj() * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * w_pp + mkq * w_qp;
                    m[(k, q)] = mkp * w_pq + mkq * w_qq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = w_pp.conj() * mpk + w_qp.conj() * mqk;
                    m[(q, k)] = w_pq.conj() * mpk + w_qq.conj() * mqk;
                }
                m[(p, q)] = cre(T::zero());
                m[(q, p)] = cre(T::zero());
                m[(p, p)] = cre(m[(p, p)].re);
                m[(q, q)] = cre(m[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * w_pp + vkq * w_qp;
                    v[(k, q)] = vkp * w_pq + vkq * w_qq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let vals = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[(k, new)] = v[(k, old)];
        }
    }
    (vals, vecs)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real>(a: &CMat<T>) -> Vec<T> {
    let n = a.rows();
    if n == 1 {
        return vec![a[(0, 0)].re];
    }
    if n == 2 {
        // Closed form keeps 2x2 channel models exact to rounding.
        let p = a[(0, 0)].re;
        let q = a[(1, 1)].re;
        let b = a[(0, 1)].norm();
        let half = T::lit(0.5);
        let mid = half * (p + q);
        let dh = half * (p - q);
        let rad = dh.hypot(b);
        return vec![mid - rad, mid + rad];
    }
    hermitian_eigen(a).0
}
