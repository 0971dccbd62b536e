//! Dense quaternionic matrices.
//!
//! Entries are stored row-major. Column vectors are matrices with one
//! column; they are right modules, so `mat * vec` acts on the left and
//! scalars multiply vectors on the right (`scale_right`).

use crate::error::Error;
use crate::quat::{self, Quaternion};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// JSON shape: `{"rows": r, "cols": c, "entries": [[w,x,y,z], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl TryFrom<RawMatrix> for QMatrix {
    type Error = String;
    fn try_from(raw: RawMatrix) -> Result<Self, String> {
        if raw.rows == 0 || raw.cols == 0 {
            return Err("matrix dimensions must be positive".into());
        }
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                raw.rows * raw.cols,
                raw.rows,
                raw.cols,
                raw.entries.len()
            ));
        }
        Ok(QMatrix {
            rows: raw.rows,
            cols: raw.cols,
            data: raw.entries,
        })
    }
}

impl From<QMatrix> for RawMatrix {
    fn from(m: QMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.data,
        }
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![quat::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = quat::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: &[Quaternion]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &q) in entries.iter().enumerate() {
            m[(i, i)] = q;
        }
        m
    }

    /// Column vector with the given entries.
    pub fn column(entries: Vec<Quaternion>) -> Self {
        let rows = entries.len();
        Self {
            rows,
            cols: 1,
            data: entries,
        }
    }

    /// Standard basis column vector `e_i` (0-indexed) of length `n`.
    pub fn basis_column(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n, 1);
        v[(i, 0)] = quat::ONE;
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Max-norm: the largest quaternion absolute value among the entries.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|q| q.abs()).fold(0.0, f64::max)
    }

    /// Frobenius-style norm: sqrt of the sum of squared entry moduli.
    /// For a column vector this is the Euclidean norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiply every entry by a real scalar.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| q * s).collect(),
        }
    }

    /// Right scalar action `v · q` (entrywise `entry * q`).
    pub fn scale_right(&self, q: Quaternion) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| e * q).collect(),
        }
    }

    /// Left scalar action `q · v`.
    pub fn scale_left(&self, q: Quaternion) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| q * e).collect(),
        }
    }

    pub fn col_vector(&self, j: usize) -> Self {
        let mut v = Self::zeros(self.rows, 1);
        for i in 0..self.rows {
            v[(i, 0)] = self[(i, j)];
        }
        v
    }

    pub fn set_col(&mut self, j: usize, v: &QMatrix) {
        assert_eq!(v.rows, self.rows);
        assert_eq!(v.cols, 1);
        for i in 0..self.rows {
            self[(i, j)] = v[(i, 0)];
        }
    }

    /// Sub-matrix by half-open row/column ranges.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 < r1 && r1 <= self.rows && c0 < c1 && c1 <= self.cols);
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    pub fn max_norm_diff(&self, other: &QMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(0.0, f64::max)
    }

    /// Power `A^k` by repeated multiplication (k small in practice).
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn check_square(&self, context: &str) -> Result<(), Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
                context: context.into(),
            })
        }
    }

    /// Inverse by Gaussian elimination with partial pivoting. Row
    /// operations multiply on the left, which is the correct side for
    /// right-module linear systems.
    pub fn inverse(&self) -> Result<QMatrix, Error> {
        self.check_square("matrix inverse")?;
        let n = self.rows;
        let mut u = self.clone();
        let mut inv = QMatrix::identity(n);
        for step in 0..n {
            let mut best = u[(step, step)].abs();
            let mut bi = step;
            for i in step + 1..n {
                if u[(i, step)].abs() > best {
                    best = u[(i, step)].abs();
                    bi = i;
                }
            }
            if best <= 1e-14 * self.max_norm().max(1.0) {
                return Err(Error::EigenFailure(
                    "matrix is singular to working precision".into(),
                ));
            }
            if bi != step {
                for j in 0..n {
                    let t = u[(step, j)];
                    u[(step, j)] = u[(bi, j)];
                    u[(bi, j)] = t;
                    let t = inv[(step, j)];
                    inv[(step, j)] = inv[(bi, j)];
                    inv[(bi, j)] = t;
                }
            }
            let pivot_inv = u[(step, step)].inverse();
            for i in (0..n).filter(|&i| i != step) {
                let factor = u[(i, step)] * pivot_inv;
                if factor == quat::ZERO {
                    continue;
                }
                for j in 0..n {
                    let t = factor * u[(step, j)];
                    u[(i, j)] -= t;
                    let t = factor * inv[(step, j)];
                    inv[(i, j)] -= t;
                }
            }
        }
        for i in 0..n {
            let pivot_inv = u[(i, i)].inverse();
            for j in 0..n {
                inv[(i, j)] = pivot_inv * inv[(i, j)];
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, r: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (r.rows, r.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&r.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, r: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (r.rows, r.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&r.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| -a).collect(),
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, r: &QMatrix) -> QMatrix {
        assert_eq!(
            self.cols, r.rows,
            "dimension mismatch in matrix product: {}x{} * {}x{}",
            self.rows, self.cols, r.rows, r.cols
        );
        let mut out = QMatrix::zeros(self.rows, r.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == quat::ZERO {
                    continue;
                }
                for j in 0..r.cols {
                    let t = a * r[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }
}

/// The block decomposition of an `(n+1) x (n+1)` matrix, `n >= 2`:
///
/// ```text
///     ( a   b   gamma* )
/// A = ( c   d   delta* )
///     ( alpha beta  U  )
/// ```
///
/// `a, b, c, d` are scalars, `gamma, delta, alpha, beta` are columns of
/// length `n-1` and `U` is `(n-1) x (n-1)`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
    pub gamma: QMatrix,
    pub delta: QMatrix,
    pub alpha: QMatrix,
    pub beta: QMatrix,
    pub u: QMatrix,
}

impl BlockDecomposition {
    /// Reassemble the source matrix; exact (no arithmetic on the entries).
    pub fn assemble(&self) -> QMatrix {
        let m = self.u.rows() + 2;
        let mut out = QMatrix::zeros(m, m);
        out[(0, 0)] = self.a;
        out[(0, 1)] = self.b;
        out[(1, 0)] = self.c;
        out[(1, 1)] = self.d;
        for i in 0..m - 2 {
            out[(0, 2 + i)] = self.gamma[(i, 0)].conj();
            out[(1, 2 + i)] = self.delta[(i, 0)].conj();
            out[(2 + i, 0)] = self.alpha[(i, 0)];
            out[(2 + i, 1)] = self.beta[(i, 0)];
            for j in 0..m - 2 {
                out[(2 + i, 2 + j)] = self.u[(i, j)];
            }
        }
        out
    }
}

/// Split a square matrix of size `n+1 >= 3` into the 2+...(n-1) block form.
pub fn block_decompose(a: &QMatrix) -> Result<BlockDecomposition, Error> {
    a.check_square("block decomposition")?;
    let m = a.rows();
    if m < 3 {
        return Err(Error::NoUBlock { size: m });
    }
    let tail = m - 2;
    let mut gamma = QMatrix::zeros(tail, 1);
    let mut delta = QMatrix::zeros(tail, 1);
    for i in 0..tail {
        gamma[(i, 0)] = a[(0, 2 + i)].conj();
        delta[(i, 0)] = a[(1, 2 + i)].conj();
    }
    Ok(BlockDecomposition {
        a: a[(0, 0)],
        b: a[(0, 1)],
        c: a[(1, 0)],
        d: a[(1, 1)],
        gamma,
        delta,
        alpha: a.submatrix(2, m, 0, 1),
        beta: a.submatrix(2, m, 1, 2),
        u: a.submatrix(2, m, 2, m),
    })
}
