//! Seeded random elements: symplectic matrices via the Lie-algebra
//! exponential, and the three isometry normal forms conjugated by them.
//!
//! Randomness comes from a counter-based ChaCha stream keyed by the seed
//! alone, so every sample is reproducible bit for bit; callers that draw
//! several elements use distinct substreams of one seed.

use crate::error::Error;
use crate::expm::expm;
use crate::form::HermitianForm;
use crate::qmat::QMatrix;
use crate::quat::Quaternion;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic uniform source over a seed and substream index.
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn quaternion(&mut self, scale: f64) -> Quaternion {
        Quaternion::new(
            self.range(-scale, scale),
            self.range(-scale, scale),
            self.range(-scale, scale),
            self.range(-scale, scale),
        )
    }
}

/// Random element of the Lie algebra: `X* J + J X = 0`, max-norm exactly
/// `scale` (zero scale gives the zero matrix).
pub fn random_form_skew(
    n: usize,
    form: &HermitianForm,
    rng: &mut SeededRng,
    scale: f64,
) -> QMatrix {
    let m = n + 1;
    let mut x = QMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            x[(i, j)] = rng.quaternion(1.0);
        }
    }
    // project: (X - J X* J) / 2 satisfies X*J = -JX since J* = J, J^2 = I
    let jxj = &(form.matrix() * &x.adjoint()) * form.matrix();
    let skew = (&x - &jxj).scale(0.5);
    let norm = skew.max_norm();
    if norm == 0.0 || scale == 0.0 {
        return QMatrix::zeros(m, m);
    }
    skew.scale(scale / norm)
}

/// `exp(X)` for a seeded random `X` in the Lie algebra of the form.
/// Deterministic in `(n, form, seed, scale)`; always symplectic.
pub fn random_symplectic(n: usize, form: &HermitianForm, seed: u64, scale: f64) -> QMatrix {
    let mut rng = SeededRng::new(seed);
    random_symplectic_from(n, form, &mut rng, scale)
}

/// As [`random_symplectic`] but drawing from a caller-owned stream.
pub fn random_symplectic_from(
    n: usize,
    form: &HermitianForm,
    rng: &mut SeededRng,
    scale: f64,
) -> QMatrix {
    if scale == 0.0 {
        return QMatrix::identity(n + 1);
    }
    expm(&random_form_skew(n, form, rng, scale))
}

/// Ball-model elliptic normal form `diag(e^{i t_1}, ..., e^{i t_{n+1}})`.
pub fn elliptic_normal_form(angles: &[f64]) -> QMatrix {
    let entries: Vec<Quaternion> = angles
        .iter()
        .map(|t| Quaternion::complex(t.cos(), t.sin()))
        .collect();
    QMatrix::diagonal(&entries)
}

/// Siegel-model loxodromic normal form
/// `diag(lambda_1, conj(lambda_1)^{-1}, e^{i t_3}, ..., e^{i t_{n+1}})`
/// with `lambda_1 = r e^{i t}`, `r > 1`.
pub fn loxodromic_normal_form(
    modulus: f64,
    angle: f64,
    unit_angles: &[f64],
) -> Result<QMatrix, Error> {
    if modulus <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "loxodromic modulus must exceed 1, got {modulus}"
        )));
    }
    let lambda1 = Quaternion::complex(modulus * angle.cos(), modulus * angle.sin());
    // conj(lambda_1)^{-1} = r^{-1} e^{i t}
    let recip = Quaternion::complex(angle.cos() / modulus, angle.sin() / modulus);
    let mut entries = vec![lambda1, recip];
    entries.extend(
        unit_angles
            .iter()
            .map(|t| Quaternion::complex(t.cos(), t.sin())),
    );
    Ok(QMatrix::diagonal(&entries))
}

/// Siegel-model Heisenberg translation `T_{s, zeta}` with
/// `s = |zeta|^2 / 2 + s_im` for a purely imaginary `s_im`.
pub fn heisenberg_normal_form(zeta: &[Quaternion], s_im: Quaternion) -> Result<QMatrix, Error> {
    if s_im.re().abs() > 1e-14 {
        return Err(Error::InvalidParameter(
            "the free part of s must be purely imaginary".into(),
        ));
    }
    let n = zeta.len() + 1;
    let zeta_norm_sqr: f64 = zeta.iter().map(|q| q.norm_sqr()).sum();
    let s = Quaternion::real(zeta_norm_sqr / 2.0) + s_im;
    let m = n + 1;
    let mut t = QMatrix::identity(m);
    t[(1, 0)] = s;
    for (idx, &z) in zeta.iter().enumerate() {
        t[(2 + idx, 0)] = z;
        t[(1, 2 + idx)] = z.conj();
    }
    Ok(t)
}

/// Regular-elliptic sample: distinct angles in [0, pi], conjugated into
/// general position by a random ball-form symplectic element.
pub fn random_regular_elliptic(
    n: usize,
    seed: u64,
    angles: &[f64],
    conj_scale: f64,
) -> Result<QMatrix, Error> {
    if angles.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} angles, got {}",
            n + 1,
            angles.len()
        )));
    }
    for (i, a) in angles.iter().enumerate() {
        if !(0.0..=std::f64::consts::PI).contains(a) {
            return Err(Error::InvalidParameter(format!(
                "angle {a} out of [0, pi]"
            )));
        }
        for b in &angles[i + 1..] {
            if (a - b).abs() < 1e-6 {
                return Err(Error::InvalidParameter(
                    "regular elliptic angles must be distinct".into(),
                ));
            }
        }
    }
    let form = HermitianForm::ball(n);
    let d = elliptic_normal_form(angles);
    Ok(conjugate_by_random(&d, n, &form, seed, conj_scale))
}

/// Loxodromic sample in the Siegel model.
pub fn random_loxodromic(
    n: usize,
    seed: u64,
    modulus: f64,
    angle: f64,
    unit_angles: &[f64],
    conj_scale: f64,
) -> Result<QMatrix, Error> {
    if unit_angles.len() + 2 != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} unit angles for n = {n}, got {}",
            n - 1,
            unit_angles.len()
        )));
    }
    let form = HermitianForm::siegel(n);
    let d = loxodromic_normal_form(modulus, angle, unit_angles)?;
    Ok(conjugate_by_random(&d, n, &form, seed, conj_scale))
}

/// Heisenberg-translation sample in the Siegel model.
pub fn random_heisenberg(
    n: usize,
    seed: u64,
    zeta: &[Quaternion],
    s_im: Quaternion,
    conj_scale: f64,
) -> Result<QMatrix, Error> {
    if zeta.len() + 1 != n {
        return Err(Error::InvalidParameter(format!(
            "need {} zeta entries for n = {n}, got {}",
            n - 1,
            zeta.len()
        )));
    }
    let form = HermitianForm::siegel(n);
    let t = heisenberg_normal_form(zeta, s_im)?;
    Ok(conjugate_by_random(&t, n, &form, seed, conj_scale))
}

fn conjugate_by_random(
    d: &QMatrix,
    n: usize,
    form: &HermitianForm,
    seed: u64,
    conj_scale: f64,
) -> QMatrix {
    let k = random_symplectic(n, form, seed, conj_scale);
    let k_inv = crate::form::form_conjugate_inverse(&k, form);
    &(&k * d) * &k_inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::is_symplectic;

    #[test]
    fn zero_scale_gives_identity() {
        let form = HermitianForm::ball(2);
        let a = random_symplectic(2, &form, 17, 0.0);
        assert_eq!(a, QMatrix::identity(3));
    }

    #[test]
    fn samples_are_symplectic() {
        for n in 1..=3 {
            for (seed, scale) in [(1u64, 0.3), (2, 1.0), (3, 2.0)] {
                for form in [HermitianForm::ball(n), HermitianForm::siegel(n)] {
                    let a = random_symplectic(n, &form, seed, scale);
                    assert!(
                        is_symplectic(&a, &form, 1e-9).unwrap(),
                        "n={n} seed={seed} scale={scale}"
                    );
                }
            }
        }
    }

    #[test]
    fn same_seed_same_matrix() {
        let form = HermitianForm::siegel(2);
        let a = random_symplectic(2, &form, 42, 0.7);
        let b = random_symplectic(2, &form, 42, 0.7);
        assert_eq!(a, b);
        let c = random_symplectic(2, &form, 43, 0.7);
        assert!(a.max_norm_diff(&c) > 1e-6);
    }

    #[test]
    fn heisenberg_form_is_symplectic_and_validates() {
        let zeta = [Quaternion::new(0.3, 0.1, 0.0, 0.2)];
        let t = heisenberg_normal_form(&zeta, Quaternion::i()).unwrap();
        let form = HermitianForm::siegel(2);
        assert!(is_symplectic(&t, &form, 1e-12).unwrap());
        // Re(s) = |zeta|^2/2
        assert!((t[(1, 0)].re() - zeta[0].norm_sqr() / 2.0).abs() < 1e-15);
        assert!(heisenberg_normal_form(&zeta, Quaternion::real(0.5)).is_err());
    }

    #[test]
    fn loxodromic_form_rejects_unit_modulus() {
        assert!(loxodromic_normal_form(1.0, 0.0, &[]).is_err());
        let d = loxodromic_normal_form(2.0, 0.0, &[0.0]).unwrap();
        let form = HermitianForm::siegel(2);
        assert!(is_symplectic(&d, &form, 1e-12).unwrap());
    }

    #[test]
    fn elliptic_sampler_validates_angles() {
        assert!(random_regular_elliptic(1, 5, &[0.4, 0.4], 0.5).is_err());
        let g = random_regular_elliptic(1, 5, &[0.4, 0.9], 0.5).unwrap();
        let form = HermitianForm::ball(1);
        assert!(is_symplectic(&g, &form, 1e-9).unwrap());
    }
}
