//! Hamilton quaternion scalars.
//!
//! All matrix and vector types in this crate are built over `Quaternion`.
//! Multiplication is non-commutative; vectors are right modules, so scalars
//! act on the right of vectors and code must never silently swap factor
//! order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A quaternion `w + x i + y j + z k` with `f64` components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// The complex number `re + im·i` viewed as a quaternion.
    pub const fn complex(re: f64, im: f64) -> Self {
        Self::new(re, im, 0.0, 0.0)
    }

    pub fn from_c64(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean norm of the imaginary part `(x, y, z)`.
    pub fn im_abs(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn is_zero(self, tol: f64) -> bool {
        self.abs() <= tol
    }

    /// Multiplicative inverse `conj(q) / |q|²`. Divides by zero for q = 0;
    /// callers guard degenerate inputs where the contract requires it.
    pub fn inverse(self) -> Self {
        let n = self.norm_sqr();
        Self::new(self.w / n, -self.x / n, -self.y / n, -self.z / n)
    }

    /// Canonical similarity-class representative `Re(q) + |Im(q)|·i`.
    ///
    /// Two quaternions are similar (conjugate by a nonzero quaternion) if
    /// and only if their representatives coincide. The representative is a
    /// complex number with nonnegative imaginary part.
    pub fn class_rep(self) -> Self {
        Self::complex(self.w, self.im_abs())
    }

    /// Split `q = (w + x i) + (y + z i) j` into its two complex parts.
    ///
    /// This is the split under which the complex adjoint of a quaternionic
    /// matrix is multiplicative.
    pub fn complex_parts(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.w, self.x),
            Complex64::new(self.y, self.z),
        )
    }

    /// Inverse of [`complex_parts`](Self::complex_parts): `a + b·j`.
    pub fn from_complex_parts(a: Complex64, b: Complex64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// True when the `j`/`k` components vanish within `tol`.
    pub fn is_complex(self, tol: f64) -> bool {
        self.y.abs() <= tol && self.z.abs() <= tol
    }

    /// Projection onto the complex span of `{1, i}`.
    pub fn complex_part(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }
}

impl Default for Quaternion {
    fn default() -> Self {
        ZERO
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product. Non-commutative: `i*j = k` but `j*i = -k`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}
