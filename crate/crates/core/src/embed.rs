//! The SL(2,C) -> Sp(1,1) embedding and the invariant-comparison sweep.
//!
//! The embedding conjugates the entrywise inclusion of SL(2,C) in
//! GL(2, H) by the fixed matrix `m = [[j, 1], [-j, 1]]`, whose columns are
//! null for the ball form and pair to `2j`. Because `h* K h = K` for
//! `K = [[0, j], [-j, 0]]` and every complex `h` of determinant 1, the
//! image lies in Sp(1,1); the basepoint is arranged so that
//!
//! ```text
//! cosh^2( rho(0, h^(0)) / 2 ) = |h^_{11}|^2 = (|h|^2 + 2) / 4
//! ```
//!
//! holds exactly (`|h|^2` the squared Frobenius norm), which is the
//! distance identity behind the SL(2,C) certificate. Rotations
//! `diag(e^{i t}, e^{-i t})` map to elements fixing the origin with
//! `delta = 4 sin(t/2)`.

use crate::error::Error;
use crate::qmat::QMatrix;
use crate::quat::Quaternion;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Validate that a 2x2 quaternionic matrix has complex entries and return
/// them.
pub fn complex_2x2(h: &QMatrix) -> Result<[[Complex64; 2]; 2], Error> {
    if h.rows() != 2 || h.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: h.rows().max(h.cols()),
            context: "complex 2x2 matrix".into(),
        });
    }
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let q = h[(i, j)];
            if !q.is_complex(1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i},{j}) has a j/k component; expected a complex matrix"
                )));
            }
            out[i][j] = q.complex_part();
        }
    }
    Ok(out)
}

/// Embed a determinant-1 complex 2x2 matrix into Sp(1,1) (ball form).
///
/// With `h = [[a, b], [c, d]]` the image is
///
/// ```text
/// 1/2 ( (conj a + d) + (conj b - c) j    (d - conj a) + (conj b + c) j )
///     ( (d - conj a) - (conj b + c) j    (conj a + d) - (conj b - c) j )
/// ```
pub fn embed_sl2c(h: &QMatrix) -> Result<QMatrix, Error> {
    let e = complex_2x2(h)?;
    let det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    let residual = (det - Complex64::new(1.0, 0.0)).norm();
    if residual > 1e-10 {
        return Err(Error::NotUnitDeterminant { residual });
    }
    let (a, b, c, d) = (e[0][0], e[0][1], e[1][0], e[1][1]);
    let diag = (a.conj() + d) / 2.0;
    let diag_j = (b.conj() - c) / 2.0;
    let off = (d - a.conj()) / 2.0;
    let off_j = (b.conj() + c) / 2.0;
    Ok(QMatrix::from_rows(vec![
        vec![
            Quaternion::from_complex_parts(diag, diag_j),
            Quaternion::from_complex_parts(off, off_j),
        ],
        vec![
            Quaternion::from_complex_parts(off, -off_j),
            Quaternion::from_complex_parts(diag, -diag_j),
        ],
    ]))
}

/// Which elliptic invariant gives the stronger SL(2,C) inequality at a
/// given rotation angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Better {
    /// `sin^2(theta/2) < sin^2(theta)`: the half-angle invariant wins.
    New,
    /// `sin^2(theta/2) > sin^2(theta)`.
    CaoTan,
    Tie,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonRow {
    pub theta: f64,
    pub sin_half_sq: f64,
    pub sin_sq: f64,
    pub better: Better,
}

/// Compare `sin^2(theta/2)` against `sin^2(theta)` over a grid; the regime
/// changes at `theta = 2 pi / 3`.
pub fn comparison_sweep(
    theta_min: f64,
    theta_max: f64,
    step: f64,
) -> Result<Vec<ComparisonRow>, Error> {
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&theta_min)
        || theta_max > std::f64::consts::PI + 1e-12
        || theta_min >= theta_max
    {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= min < max <= pi, got [{theta_min}, {theta_max}]"
        )));
    }
    if step <= 0.0 {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut k = 0usize;
    loop {
        let theta = theta_min + k as f64 * step;
        if theta > theta_max + 1e-12 {
            break;
        }
        let sin_half_sq = (theta / 2.0).sin().powi(2);
        let sin_sq = theta.sin().powi(2);
        let better = if sin_half_sq < sin_sq - 1e-12 {
            Better::New
        } else if sin_half_sq > sin_sq + 1e-12 {
            Better::CaoTan
        } else {
            Better::Tie
        };
        rows.push(ComparisonRow {
            theta,
            sin_half_sq,
            sin_sq,
            better,
        });
        k += 1;
    }
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    Ok(rows)
}
