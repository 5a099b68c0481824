//! Cyclic Jacobi eigenvalue iteration for complex Hermitian matrices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::CMatrix;

pub const MAX_SWEEPS: usize = 30;

fn off_diagonal_norm<T: Real>(a: &CMatrix<T>) -> T {
    let d = a.rows();
    let mut s = T::zero();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary
/// and then applies the real symmetric Jacobi rotation. Stops when the
/// off-diagonal Frobenius norm drops below `1e-12 · max(1, ‖A‖_F)`.
pub fn hermitian_eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!("eigenvalues of a {}x{} matrix", a.rows(), a.cols())));
    }
    let d = a.rows();
    let mut m = a.clone();
    // symmetrize away round-off so the iteration sees an exactly Hermitian input
    for i in 0..d {
        m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
        for j in (i + 1)..d {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let target = T::tol(1e-12) * T::one().max(m.frobenius());
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNotConverged { sweeps, off: off.as_f64() });
        }
        sweeps += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut m, p, q);
            }
        }
    }
    let mut ev: Vec<T> = (0..d).map(|i| m[(i, i)].re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(ev)
}

fn rotate<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let d = m.rows();
    let phase = apq / r;
    let tau = (m[(q, q)].re - m[(p, p)].re) / (T::lit(2.0) * r);
    let t = if tau >= T::zero() { T::one() } else { -T::one() } / (tau.abs() + (T::one() + tau * tau).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on rows/cols (p, q); A ← Uᴴ A U
    let u_pp = Complex::new(c, T::zero());
    let u_pq = Complex::new(s, T::zero());
    let u_qp = phase.conj() * (-s);
    let u_qq = phase.conj() * c;
    for k in 0..d {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * u_pp + akq * u_qp;
        m[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..d {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        m[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    m[(p, q)] = Complex::new(T::zero(), T::zero());
    m[(q, p)] = Complex::new(T::zero(), T::zero());
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
}
