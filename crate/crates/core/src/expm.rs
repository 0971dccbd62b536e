//! Quaternionic matrix exponential.
//!
//! Scaling and squaring with a truncated Taylor series of degree 12,
//! applied to the quaternionic matrix directly. The argument is halved
//! until its max-norm is at most 0.25, where the degree-12 tail is far
//! below double precision, and the result is squared back up.

use crate::qmat::QMatrix;

pub fn expm(x: &QMatrix) -> QMatrix {
    assert!(x.is_square(), "matrix exponential needs a square matrix");
    let norm = x.max_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let xs = x.scale(scale);
    // Horner evaluation of sum_{k=0}^{12} X^k / k!
    let n = x.rows();
    let mut acc = QMatrix::identity(n);
    for k in (1..=12u32).rev() {
        acc = &(&acc * &xs).scale(1.0 / k as f64) + &QMatrix::identity(n);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}
