use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{cre, norm2, Cx, Real};

/// Square complex band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix<T: Real> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![cre(T::zero()); n * (kl + ku + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kl(&self) -> usize {
        self.kl
    }

    pub fn ku(&self) -> usize {
        self.ku
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cx<T> {
        if self.in_band(i, j) {
            self.data[self.offset(i, j)]
        } else {
            cre(T::zero())
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cx<T>) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: Cx<T>) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let o = self.offset(i, j);
        self.data[o] += v;
    }

    /// Column range touched by row `i`.
    #[inline]
    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.cols(i)
                    .fold(cre(T::zero()), |acc, j| acc + self.data[self.offset(i, j)] * x[j])
            })
            .collect()
    }

    /// `A^H x`.
    pub fn matvec_adjoint(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![cre(T::zero()); self.n];
        for i in 0..self.n {
            for j in self.cols(i) {
                y[j] += self.data[self.offset(i, j)].conj() * x[i];
            }
        }
        y
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest |A_ij - conj(A_ji)|.
    pub fn hermitian_defect(&self) -> T {
        self.pair_defect(|z| z.conj())
    }

    /// Largest |A_ij - A_ji|.
    pub fn symmetric_defect(&self) -> T {
        self.pair_defect(|z| z)
    }

    fn pair_defect(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> T {
        let mut d = T::zero();
        for i in 0..self.n {
            for j in self.cols(i) {
                d = d.max((self.get(i, j) - f(self.get(j, i))).norm());
            }
        }
        d
    }

    /// Returns `A + s I`.
    pub fn shifted(&self, s: Cx<T>) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.add(i, i, s);
        }
        m
    }

    pub fn to_dense(&self) -> CMat<T> {
        let mut d = CMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in self.cols(i) {
                d[(i, j)] = self.get(i, j);
            }
        }
        d
    }

    pub fn factor(&self) -> Result<BandLu<T>> {
        BandLu::new(self)
    }
}

/// LU factorization with partial pivoting confined to the band.
///
/// Stored as a sequence of row swaps and Gauss transforms (multipliers are not
/// permuted), followed by an upper factor with `kl + ku` super-diagonals.
#[derive(Clone, Debug)]
pub struct BandLu<T: Real> {
    n: usize,
    kl: usize,
    wu: usize,
    upper: Vec<Cx<T>>,
    mult: Vec<Cx<T>>,
    piv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    pub fn new(a: &BandMatrix<T>) -> Result<Self> {
        let n = a.n;
        let kl = a.kl;
        let ku = a.ku;
        let w = 2 * kl + ku + 1;
        // Working row `i` holds columns i-kl ..= i+ku+kl at offsets 0..w.
        let mut work = vec![cre(T::zero()); n * w];
        for i in 0..n {
            for j in a.cols(i) {
                work[i * w + (j + kl - i)] = a.get(i, j);
            }
        }
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        let mut mult = vec![cre(T::zero()); n * kl];
        let mut piv = vec![0; n];
        let tiny = T::epsilon() * a.max_abs();
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = work[idx(k, k)].norm();
            for i in k + 1..=last {
                let v = work[idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny || best == T::zero() {
                return Err(Error::Singular { index: k });
            }
            piv[k] = p;
            let jend = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=jend {
                    work.swap(idx(k, j), idx(p, j));
                }
            }
            let pivot = work[idx(k, k)];
            for i in k + 1..=last {
                let l = work[idx(i, k)] / pivot;
                mult[k * kl + (i - k - 1)] = l;
                work[idx(i, k)] = cre(T::zero());
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..=jend {
                    let u = work[idx(k, j)];
                    work[idx(i, j)] -= l * u;
                }
            }
        }
        let wu = kl + ku + 1;
        let mut upper = vec![cre(T::zero()); n * wu];
        for i in 0..n {
            for j in i..(i + wu).min(n) {
                upper[i * wu + (j - i)] = work[idx(i, j)];
            }
        }
        Ok(Self { n, kl, wu, upper, mult, piv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Smallest pivot magnitude, a cheap conditioning indicator.
    pub fn min_pivot(&self) -> T {
        (0..self.n).fold(T::infinity(), |m, i| m.min(self.upper[i * self.wu].norm()))
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(b.len(), self.n);
        let (n, kl, wu) = (self.n, self.kl, self.wu);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for t in 0..kl.min(n - 1 - k) {
                x[k + 1 + t] -= self.mult[k * kl + t] * xk;
            }
        }
        for i in (0..n).rev() {
            let row = &self.upper[i * wu..(i + 1) * wu];
            let mut s = x[i];
            for d in 1..wu.min(n - i) {
                s -= row[d] * x[i + d];
            }
            x[i] = s / row[0];
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(b.len(), self.n);
        let (n, kl, wu) = (self.n, self.kl, self.wu);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for d in 1..wu.min(i + 1) {
                let j = i - d;
                s -= self.upper[j * wu + d].conj() * y[j];
            }
            y[i] = s / self.upper[i * wu].conj();
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for t in 0..kl.min(n - 1 - k) {
                s -= self.mult[k * kl + t].conj() * y[k + 1 + t];
            }
            y[k] = s;
            let p = self.piv[k];
            if p != k {
                y.swap(k, p);
            }
        }
        y
    }
}

/// Relative residual `||A x - b|| / ||b||`.
pub fn relative_residual<T: Real>(a: &BandMatrix<T>, x: &[Cx<T>], b: &[Cx<T>]) -> T {
    let ax = a.matvec(x);
    let r: Vec<Cx<T>> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm2(b);
    if nb == T::zero() {
        norm2(&r)
    } else {
        norm2(&r) / nb
    }
}
