use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{cre, Cx, Real};

/// Complex Schur form `A = Q T Q^H` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur<T: Real> {
    pub t: CMat<T>,
    pub q: CMat<T>,
}

/// Reduces `a` to upper Hessenberg form in place, accumulating `q`.
fn hessenberg<T: Real>(a: &mut CMat<T>, q: &mut CMat<T>) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Cx<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = crate::scalar::norm2(&v);
        if xnorm == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() { cre(T::one()) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vn = crate::scalar::norm2(&v);
        if vn == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        let two = T::lit(2.0);
        // A <- H A with H = I - 2 v v^H acting on rows k+1..n.
        for j in 0..n {
            let mut s = cre(T::zero());
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * a[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= *vi * s * two;
            }
        }
        // A <- A H and Q <- Q H on columns k+1..n.
        for m in [&mut *a, &mut *q] {
            for i in 0..n {
                let mut s = cre(T::zero());
                for (t, vi) in v.iter().enumerate() {
                    s += m[(i, k + 1 + t)] * *vi;
                }
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)] -= s * vi.conj() * two;
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = cre(T::zero());
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == T::zero() {
        return (T::one(), cre(T::zero()));
    }
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let nrm = ax.hypot(ay);
    (ax / nrm, (x / ax) * y.conj() / nrm)
}

/// Complex Schur decomposition by Hessenberg reduction and shifted QR.
pub fn schur<T: Real>(a: &CMat<T>) -> Result<Schur<T>> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut h = a.clone();
    let mut q = CMat::identity(n);
    hessenberg(&mut h, &mut q);
    hessenberg_qr(&mut h, &mut q)?;
    Ok(Schur { t: h, q })
}

/// Runs shifted QR on an upper Hessenberg matrix until it is triangular.
pub fn hessenberg_qr<T: Real>(h: &mut CMat<T>, q: &mut CMat<T>) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let eps = T::epsilon();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 60 * n.max(10);
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let scale = if scale == T::zero() { h.max_abs() } else { scale };
            if sub <= eps * scale {
                h[(lo, lo - 1)] = cre(T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(Error::NoConvergence {
                iterations: total,
                estimate: f64::NAN,
                residual: h[(hi, hi - 1)].norm().as_f64(),
            });
        }
        let a11 = h[(hi - 1, hi - 1)];
        let a12 = h[(hi - 1, hi)];
        let a21 = h[(hi, hi - 1)];
        let a22 = h[(hi, hi)];
        let mu = if iter % 11 == 10 {
            // Exceptional shift breaks rare cycles.
            a22 + cre(T::lit(0.75) * a21.norm())
        } else {
            let half = T::lit(0.5);
            let m = (a11 + a22) * half;
            let d = (a11 - a22) * half;
            let disc = (d * d + a12 * a21).sqrt();
            let mu1 = m + disc;
            let mu2 = m - disc;
            if (mu1 - a22).norm() <= (mu2 - a22).norm() {
                mu1
            } else {
                mu2
            }
        };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let c = cre(c);
            let jstart = if k == lo { lo } else { k - 1 };
            for j in jstart..n {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = c * u + s * v;
                h[(k + 1, j)] = -s.conj() * u + c * v;
            }
            if k > lo {
                h[(k + 1, k - 1)] = cre(T::zero());
            }
            let iend = (k + 2).min(hi);
            for i in 0..=iend {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = c * u + s.conj() * v;
                h[(i, k + 1)] = -s * u + c * v;
            }
            for i in 0..n {
                let u = q[(i, k)];
                let v = q[(i, k + 1)];
                q[(i, k)] = c * u + s.conj() * v;
                q[(i, k + 1)] = -s * u + c * v;
            }
        }
    }
    Ok(())
}

/// Eigenvalues and unit eigenvectors (columns) of a general complex matrix.
pub fn eig<T: Real>(a: &CMat<T>) -> Result<(Vec<Cx<T>>, CMat<T>)> {
    let s = schur(a)?;
    Ok(schur_eigvecs(&s))
}

/// Eigen-pairs of an upper Hessenberg matrix (used for Arnoldi Ritz pairs).
pub fn eig_hessenberg<T: Real>(h: &CMat<T>) -> Result<(Vec<Cx<T>>, CMat<T>)> {
    let mut t = h.clone();
    let mut q = CMat::identity(h.rows());
    hessenberg_qr(&mut t, &mut q)?;
    Ok(schur_eigvecs(&Schur { t, q }))
}

fn schur_eigvecs<T: Real>(s: &Schur<T>) -> (Vec<Cx<T>>, CMat<T>) {
    let t = &s.t;
    let n = t.rows();
    let vals: Vec<Cx<T>> = (0..n).map(|k| t[(k, k)]).collect();
    let small = T::epsilon() * t.max_abs().max(T::min_positive_value());
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        let lam = vals[k];
        y[(k, k)] = cre(T::one());
        for i in (0..k).rev() {
            let mut acc = cre(T::zero());
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lam;
            if den.norm() < small {
                den = cre(small);
            }
            y[(i, k)] = -acc / den;
        }
    }
    let mut x = s.q.matmul(&y);
    for k in 0..n {
        let col: Vec<Cx<T>> = (0..n).map(|i| x[(i, k)]).collect();
        let nrm = crate::scalar::norm2(&col);
        if nrm > T::zero() {
            for i in 0..n {
                x[(i, k)] /= nrm;
            }
        }
    }
    (vals, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schur_is_unitary_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 30;
        let mut a = CMat::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let s = schur(&a).unwrap();
        let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
        assert!(back.sub(&a).max_abs() < 1e-12);
        for i in 0..n {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], cre(0.0));
            }
        }
    }

    #[test]
    fn eigenpairs_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 25;
        let mut a = CMat::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let (vals, vecs) = eig(&a).unwrap();
        for k in 0..n {
            let v: Vec<_> = (0..n).map(|i| vecs[(i, k)]).collect();
            let av = a.matvec(&v);
            let r: Vec<_> = av.iter().zip(&v).map(|(p, q)| p - q * vals[k]).collect();
            assert!(crate::scalar::norm2(&r) < 1e-11);
        }
    }

    #[test]
    fn triangular_input_keeps_diagonal() {
        let a = CMat::<f64>::from_real(3, 3, &[1.0, 2.0, 3.0, 0.0, 4.0, 5.0, 0.0, 0.0, 6.0]);
        let (mut vals, _) = eig(&a).unwrap();
        vals.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap());
        assert_eq!(vals, vec![cre(1.0), cre(4.0), cre(6.0)]);
    }
}
