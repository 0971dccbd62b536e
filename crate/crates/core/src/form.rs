//! Hermitian forms of signature (n,1) and the symplectic group they define.
//!
//! Two standard presentations are supported. The ball form is
//! `J1 = diag(-1, I_n)`; the Siegel form `J2` has the anti-diagonal
//! `-1` block in the top-left 2x2 corner and `I_{n-1}` below. A matrix
//! `A` belongs to Sp(n,1) when `A* J A = J`; since `J^2 = I` for both
//! presentations, the inverse of a symplectic matrix is `J A* J`.

use crate::error::Error;
use crate::qmat::{block_decompose, QMatrix};
use crate::quat::{self, Quaternion};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presentation {
    Ball,
    Siegel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    presentation: Presentation,
    /// Quaternionic dimension n of the hyperbolic space; matrices are (n+1)x(n+1).
    n: usize,
    matrix: QMatrix,
}

impl HermitianForm {
    /// Ball form `diag(-1, I_n)`.
    pub fn ball(n: usize) -> Self {
        assert!(n >= 1, "hyperbolic dimension must be positive");
        let mut m = QMatrix::identity(n + 1);
        m[(0, 0)] = -quat::ONE;
        Self {
            presentation: Presentation::Ball,
            n,
            matrix: m,
        }
    }

    /// Siegel form: anti-diagonal `-1` block on the first two coordinates.
    pub fn siegel(n: usize) -> Self {
        assert!(n >= 1, "hyperbolic dimension must be positive");
        let mut m = QMatrix::identity(n + 1);
        m[(0, 0)] = quat::ZERO;
        m[(1, 1)] = quat::ZERO;
        m[(0, 1)] = -quat::ONE;
        m[(1, 0)] = -quat::ONE;
        Self {
            presentation: Presentation::Siegel,
            n,
            matrix: m,
        }
    }

    pub fn new(presentation: Presentation, n: usize) -> Self {
        match presentation {
            Presentation::Ball => Self::ball(n),
            Presentation::Siegel => Self::siegel(n),
        }
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Matrix size n+1 that elements of Sp(n,1) have under this form.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn check_size(&self, a: &QMatrix, context: &str) -> Result<(), Error> {
        a.check_square(context)?;
        if a.rows() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: a.rows(),
                context: context.into(),
            });
        }
        Ok(())
    }

    /// Canonical lift of the boundary point `0` in the Siegel model,
    /// `(0, 1, 0, ..., 0)^t`.
    pub fn lift_zero(&self) -> QMatrix {
        QMatrix::basis_column(self.size(), 1)
    }

    /// Canonical lift of the boundary point `infinity` in the Siegel model,
    /// `(1, 0, ..., 0)^t`. In the ball model the same vector is the lift of
    /// the origin.
    pub fn lift_infinity(&self) -> QMatrix {
        QMatrix::basis_column(self.size(), 0)
    }

    /// Lift of the ball-model origin `(1, 0, ..., 0)^t`.
    pub fn lift_origin(&self) -> QMatrix {
        QMatrix::basis_column(self.size(), 0)
    }
}

/// Residual `|A*JA - J|` in max-norm.
pub fn symplectic_residual(a: &QMatrix, form: &HermitianForm) -> Result<f64, Error> {
    form.check_size(a, "symplectic membership")?;
    let lhs = &(&a.adjoint() * form.matrix()) * a;
    Ok(lhs.max_norm_diff(form.matrix()))
}

/// Membership test `A*JA = J` within `tol`, relative to the matrix scale.
pub fn is_symplectic(a: &QMatrix, form: &HermitianForm, tol: f64) -> Result<bool, Error> {
    let res = symplectic_residual(a, form)?;
    let scale = a.max_norm().max(1.0);
    Ok(res <= tol * scale * scale)
}

pub fn require_symplectic(a: &QMatrix, form: &HermitianForm, tol: f64) -> Result<(), Error> {
    let res = symplectic_residual(a, form)?;
    let scale = a.max_norm().max(1.0);
    if res <= tol * scale * scale {
        Ok(())
    } else {
        Err(Error::NotSymplectic {
            residual: res,
            tol: tol * scale * scale,
        })
    }
}

/// Inverse of a symplectic matrix.
///
/// For the Siegel form at n >= 2 the inverse is assembled from the block
/// formula
///
/// ```text
///          (  d*   b*  -beta^* )
/// A^{-1} = (  c*   a*  -alpha^* )
///          ( -delta -gamma  U^* )
/// ```
///
/// (scalar stars are quaternion conjugates). In the ball presentation, or
/// at n = 1 where there is no U block, the equivalent form-conjugate
/// `J A* J` is used.
pub fn symplectic_inverse(a: &QMatrix, form: &HermitianForm) -> Result<QMatrix, Error> {
    require_symplectic(a, form, 1e-6)?;
    if form.presentation() == Presentation::Siegel && form.size() >= 3 {
        let blocks = block_decompose(a)?;
        let tail = form.size() - 2;
        let mut out = QMatrix::zeros(form.size(), form.size());
        out[(0, 0)] = blocks.d.conj();
        out[(0, 1)] = blocks.b.conj();
        out[(1, 0)] = blocks.c.conj();
        out[(1, 1)] = blocks.a.conj();
        for i in 0..tail {
            out[(0, 2 + i)] = -blocks.beta[(i, 0)].conj();
            out[(1, 2 + i)] = -blocks.alpha[(i, 0)].conj();
            out[(2 + i, 0)] = -blocks.delta[(i, 0)];
            out[(2 + i, 1)] = -blocks.gamma[(i, 0)];
            for j in 0..tail {
                // U^* entry (i,j) = conj(U_{j,i})
                out[(2 + i, 2 + j)] = blocks.u[(j, i)].conj();
            }
        }
        Ok(out)
    } else {
        Ok(form_conjugate_inverse(a, form))
    }
}

/// `J A* J`, the inverse of any J-symplectic matrix (J^2 = I).
pub fn form_conjugate_inverse(a: &QMatrix, form: &HermitianForm) -> QMatrix {
    &(form.matrix() * &a.adjoint()) * form.matrix()
}

/// The Hermitian pairing `<z, w> = z* J w` of two column vectors, without
/// dimension checks (callers in this crate guarantee shapes).
pub fn pairing_raw(z: &QMatrix, w: &QMatrix, form: &HermitianForm) -> Quaternion {
    let mut acc = Quaternion::default();
    let j = form.matrix();
    for r in 0..z.rows() {
        for c in 0..w.rows() {
            let jrc = j[(r, c)];
            if jrc == quat::ZERO {
                continue;
            }
            acc += z[(r, 0)].conj() * jrc * w[(c, 0)];
        }
    }
    acc
}
