//! Named numeric tolerances with library-wide defaults.
//!
//! The defaults are sized for double precision at the matrix sizes this
//! crate targets (n <= 10). `class` is deliberately looser than the rest:
//! eigenvalues of non-diagonalizable (parabolic) elements are only accurate
//! to roughly the cube root of machine epsilon, so classification bands
//! must sit above that scatter.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Symplectic membership: max-norm of `A*JA - J` relative to `|A|`.
    pub symplectic: f64,
    /// Eigenvalue-class decisions in classification (moduli vs 1, reps vs 1,
    /// Hermitian sign bands), scaled by `1 + |A|`.
    pub class: f64,
    /// Absolute distance below which eigenvalue class representatives merge.
    pub merge: f64,
    /// Relative Hermitian-length band for the interior/boundary split.
    pub boundary: f64,
    /// Relative threshold under which a cross-ratio pairing counts as zero.
    pub degenerate: f64,
    /// Projective fixed-point test for "A does not fix 0".
    pub fix_zero: f64,
    /// Unipotency test `|(A-I)^{n+1}| <= nilpotent * |A-I|`.
    pub nilpotent: f64,
    /// Band around exact equality where a certificate is flagged "boundary".
    pub equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symplectic: 1e-9,
            class: 1e-4,
            merge: 1e-7,
            boundary: 1e-9,
            degenerate: 1e-12,
            fix_zero: 1e-8,
            nilpotent: 1e-8,
            equality: 1e-12,
        }
    }
}

impl Tolerances {
    /// Set a tolerance by its CLI name. Unknown names are rejected.
    pub fn set_by_name(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("tolerance {name} must be a nonnegative finite number"));
        }
        match name {
            "symplectic" => self.symplectic = value,
            "class" => self.class = value,
            "merge" => self.merge = value,
            "boundary" => self.boundary = value,
            "degenerate" => self.degenerate = value,
            "fixzero" => self.fix_zero = value,
            "nilpotent" => self.nilpotent = value,
            "equality" => self.equality = value,
            _ => return Err(format!("unknown tolerance name: {name}")),
        }
        Ok(())
    }
}
