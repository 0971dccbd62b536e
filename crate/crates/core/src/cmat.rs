//! Small dense complex matrices and the eigenvalue kernel.
//!
//! Everything here serves the right-eigenvalue computation on the complex
//! adjoint of a quaternionic matrix, so the sizes are tiny (2(n+1) with
//! n <= 10) and the routines favour simplicity: Householder reduction to
//! upper Hessenberg form followed by Wilkinson-shifted QR with deflation,
//! and rank-revealing elimination with full pivoting for null spaces.

use crate::error::Error;
use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn mul(&self, r: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, r.rows);
        let mut out = CMatrix::zeros(self.rows, r.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..r.cols {
                    out[(i, j)] += a * r[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn sub_scalar_diag(&self, s: C64) -> CMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= s;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

fn phase(c: C64) -> C64 {
    let n = c.norm();
    if n == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        c / n
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // Householder vector for column k, rows k+1..n
        let mut norm_x = 0.0;
        for i in k + 1..n {
            norm_x += h[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = -phase(h[(k + 1, k)]) * norm_x;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vn < f64::EPSILON * norm_x {
            continue;
        }
        for c in v.iter_mut() {
            *c /= vn;
        }
        // H <- P H with P = I - 2 v v* acting on rows k+1..n
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                let delta = 2.0 * vi * dot;
                h[(k + 1 + t, j)] -= delta;
            }
        }
        // H <- H P acting on columns k+1..n
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + t)] * *vi;
            }
            for (t, vi) in v.iter().enumerate() {
                let delta = 2.0 * dot * vi.conj();
                h[(i, k + 1 + t)] -= delta;
            }
        }
    }
}

/// Eigenvalues of the 2x2 block [[a, b], [c, d]], cancellation-safe.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let s1 = tr + disc;
    let s2 = tr - disc;
    let big = if s1.norm() >= s2.norm() { s1 } else { s2 };
    if big.norm() == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let l1 = big / 2.0;
    let l2 = det / l1;
    (l1, l2)
}

/// Complex Givens rotation G = [[c, s], [-conj(s), c]] (c real) with
/// G (a, b)^t = (r, 0)^t.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let h = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if h == 0.0 || b.norm() == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let c = a.norm() / h;
    let s = phase(a) * b.conj() / h;
    (c, s)
}

/// All eigenvalues of a square complex matrix by shifted QR on the
/// Hessenberg form. Errors only if the iteration stalls.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>, Error> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    let scale = h.max_norm().max(1.0);
    let eps = f64::EPSILON;
    let mut eigs: Vec<C64> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iters_at_hi = 0usize;
    loop {
        // deflate negligible subdiagonals
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let local = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= eps * local + eps * eps * scale {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            // 1x1 block converged
            eigs.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iters_at_hi = 0;
            continue;
        }
        if l == hi - 1 {
            // 2x2 block: solve directly
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            eigs.push(l1);
            eigs.push(l2);
            if hi == 1 {
                break;
            }
            hi -= 2;
            iters_at_hi = 0;
            continue;
        }
        iters_at_hi += 1;
        if iters_at_hi > 120 {
            return Err(Error::EigenFailure(format!(
                "QR iteration stalled on a window of size {}",
                hi - l + 1
            )));
        }
        // Wilkinson shift from the trailing 2x2 of the active window,
        // with an occasional exceptional shift to break symmetry.
        let shift = if iters_at_hi % 20 == 0 {
            h[(hi, hi)] + C64::new(1.5, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            let d = h[(hi, hi)];
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        // explicit shifted QR sweep on the window [l, hi]
        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - l);
        for i in l..hi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            rots.push((c, s));
            for j in i..=hi.min(n - 1) {
                let t1 = h[(i, j)];
                let t2 = h[(i + 1, j)];
                h[(i, j)] = c * t1 + s * t2;
                h[(i + 1, j)] = -s.conj() * t1 + c * t2;
            }
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let i = l + idx;
            let top = (i + 2).min(hi + 1);
            for r in l..top {
                let t1 = h[(r, i)];
                let t2 = h[(r, i + 1)];
                h[(r, i)] = c * t1 + t2 * s.conj();
                h[(r, i + 1)] = -t1 * s + c * t2;
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Orthonormal-ish basis of the numerical null space of `a`, found by
/// Gaussian elimination with full pivoting. A pivot below
/// `tol * max(1, |a|)` ends the elimination; the remaining columns span
/// the null space.
pub fn null_space(a: &CMatrix, tol: f64) -> Vec<Vec<C64>> {
    let m = a.rows();
    let n = a.cols();
    let mut u = a.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let threshold = tol * a.max_norm().max(1.0);
    let mut rank = 0usize;
    for step in 0..m.min(n) {
        // full pivot search
        let mut best = 0.0;
        let mut bi = step;
        let mut bj = step;
        for i in step..m {
            for j in step..n {
                let v = u[(i, j)].norm();
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best <= threshold {
            break;
        }
        if bi != step {
            for j in 0..n {
                let t = u[(step, j)];
                u[(step, j)] = u[(bi, j)];
                u[(bi, j)] = t;
            }
        }
        if bj != step {
            for i in 0..m {
                let t = u[(i, step)];
                u[(i, step)] = u[(i, bj)];
                u[(i, bj)] = t;
            }
            col_perm.swap(step, bj);
        }
        let pivot = u[(step, step)];
        for i in step + 1..m {
            let f = u[(i, step)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in step..n {
                let t = f * u[(step, j)];
                u[(i, j)] -= t;
            }
        }
        rank = step + 1;
    }
    let mut basis = Vec::with_capacity(n - rank);
    for free in rank..n {
        // back-substitute U[0..rank][0..rank] x = -U[0..rank][free]
        let mut x = vec![C64::new(0.0, 0.0); rank];
        for i in (0..rank).rev() {
            let mut acc = -u[(i, free)];
            for j in i + 1..rank {
                acc -= u[(i, j)] * x[j];
            }
            x[i] = acc / u[(i, i)];
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        for (pos, &orig) in col_perm.iter().enumerate() {
            if pos < rank {
                v[orig] = x[pos];
            } else if pos == free {
                v[orig] = C64::new(1.0, 0.0);
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= norm;
        }
        basis.push(v);
    }
    basis
}

/// Solve `a x = b` by LU with partial pivoting; pivots smaller than
/// `clamp` are replaced by `clamp` so the solve survives singular input.
/// Used for inverse iteration against a nearly singular shift.
pub fn solve_clamped(a: &CMatrix, b: &[C64], clamp: f64) -> Vec<C64> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    assert_eq!(b.len(), n);
    let mut u = a.clone();
    let mut x: Vec<C64> = b.to_vec();
    for step in 0..n {
        let mut best = u[(step, step)].norm();
        let mut bi = step;
        for i in step + 1..n {
            if u[(i, step)].norm() > best {
                best = u[(i, step)].norm();
                bi = i;
            }
        }
        if bi != step {
            for j in 0..n {
                let t = u[(step, j)];
                u[(step, j)] = u[(bi, j)];
                u[(bi, j)] = t;
            }
            x.swap(step, bi);
        }
        if u[(step, step)].norm() < clamp {
            u[(step, step)] = C64::new(clamp, 0.0);
        }
        let pivot = u[(step, step)];
        for i in step + 1..n {
            let f = u[(i, step)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in step..n {
                let t = f * u[(step, j)];
                u[(i, j)] -= t;
            }
            let t = f * x[step];
            x[i] -= t;
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= u[(i, j)] * x[j];
        }
        x[i] = acc / u[(i, i)];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sort_key(z: &C64) -> (i64, i64) {
        ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
    }

    fn assert_spectrum(a: &CMatrix, expect: &[C64], tol: f64) {
        let mut got = eigenvalues(a).unwrap();
        let mut want = expect.to_vec();
        got.sort_by_key(sort_key);
        want.sort_by_key(sort_key);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).norm() < tol,
                "eigenvalue mismatch: {g} vs {w} (all: {got:?})"
            );
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(2.0, 1.0);
        a[(1, 1)] = c(-1.0, 0.0);
        a[(2, 2)] = c(0.0, -3.0);
        assert_spectrum(&a, &[c(2.0, 1.0), c(-1.0, 0.0), c(0.0, -3.0)], 1e-12);
    }

    #[test]
    fn rotation_spectrum() {
        // [[0, -1], [1, 0]] has eigenvalues +-i
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = c(-1.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        assert_spectrum(&a, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn dense_spectrum_against_characteristic_roots() {
        // Companion matrix of p(x) = x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 2)] = c(6.0, 0.0);
        a[(1, 0)] = c(1.0, 0.0);
        a[(1, 2)] = c(-11.0, 0.0);
        a[(2, 1)] = c(1.0, 0.0);
        a[(2, 2)] = c(6.0, 0.0);
        assert_spectrum(&a, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], 1e-9);
    }

    #[test]
    fn similarity_preserves_spectrum() {
        // S D S^{-1} for an explicit small S
        let mut d = CMatrix::zeros(3, 3);
        d[(0, 0)] = c(1.0, 2.0);
        d[(1, 1)] = c(0.5, -0.5);
        d[(2, 2)] = c(-2.0, 0.25);
        let mut s = CMatrix::identity(3);
        s[(0, 1)] = c(1.0, -1.0);
        s[(0, 2)] = c(0.5, 0.0);
        s[(1, 2)] = c(-2.0, 1.0);
        let mut s_inv = CMatrix::identity(3);
        // inverse of the unit upper triangular S
        s_inv[(0, 1)] = -s[(0, 1)];
        s_inv[(1, 2)] = -s[(1, 2)];
        s_inv[(0, 2)] = s[(0, 1)] * s[(1, 2)] - s[(0, 2)];
        let a = s.mul(&d).mul(&s_inv);
        assert_spectrum(&a, &[c(1.0, 2.0), c(0.5, -0.5), c(-2.0, 0.25)], 1e-9);
    }

    #[test]
    fn defective_jordan_block() {
        // Jordan block with eigenvalue 1: eigenvalues scatter at eps^(1/3);
        // accept 1e-4 here.
        let mut a = CMatrix::identity(3);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 2)] = c(1.0, 0.0);
        let eigs = eigenvalues(&a).unwrap();
        for e in eigs {
            assert!((e - c(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn null_space_of_rank_deficient() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 1)] = c(2.0, 0.0);
        a[(1, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(4.0, 0.0);
        a[(2, 2)] = c(1.0, 0.0);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // residual check
        let r = a.mul_vec(v);
        let res = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(res < 1e-10);
    }

    #[test]
    fn eigenvector_by_null_space() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(3.0, 0.0);
        a[(0, 1)] = c(1.0, 0.0);
        a[(1, 1)] = c(2.0, 0.0);
        let shifted = a.sub_scalar_diag(c(3.0, 0.0));
        let ns = null_space(&shifted, 1e-10);
        assert_eq!(ns.len(), 1);
        assert!(ns[0][1].norm() < 1e-12);
    }

    #[test]
    fn clamped_solve_recovers_singular_direction() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(1e-15, 0.0);
        let b = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let x = solve_clamped(&a, &b, 1e-13);
        // dominated by the singular direction e_2
        assert!(x[1].norm() > 1e10 * x[0].norm());
    }
}
