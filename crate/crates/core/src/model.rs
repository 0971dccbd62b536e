//! The projective model of quaternionic hyperbolic space.
//!
//! Points are right-projective classes of column vectors: `z ~ z·lambda`
//! for nonzero quaternions `lambda`. A lift is interior when its Hermitian
//! length `<z,z>` is negative, boundary when it vanishes. The Bergman
//! distance and the modulus of the quaternionic cross-ratio are the two
//! projective invariants everything downstream consumes.

use crate::error::Error;
use crate::form::{self, HermitianForm};
use crate::qmat::QMatrix;
use crate::quat::Quaternion;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Interior => write!(f, "interior"),
            Region::Boundary => write!(f, "boundary"),
            Region::Exterior => write!(f, "exterior"),
        }
    }
}

/// A lift of a projective point, classified against a form.
#[derive(Clone, Debug)]
pub struct PointLift {
    vector: QMatrix,
    form_length: f64,
    region: Region,
}

impl PointLift {
    /// Classify a lift. The boundary band is `boundary_tol * |v|²`, so the
    /// region is stable under rescaling the lift.
    pub fn new(vector: QMatrix, form: &HermitianForm, boundary_tol: f64) -> Result<Self, Error> {
        if vector.cols() != 1 || vector.rows() != form.size() {
            return Err(Error::DimensionMismatch {
                expected: form.size(),
                got: vector.rows().max(vector.cols()),
                context: "point lift".into(),
            });
        }
        let length = form::pairing_raw(&vector, &vector, form).re();
        let scale = vector.frobenius_norm();
        let region = if length.abs() <= boundary_tol * scale * scale {
            Region::Boundary
        } else if length < 0.0 {
            Region::Interior
        } else {
            Region::Exterior
        };
        Ok(Self {
            vector,
            form_length: length,
            region,
        })
    }

    pub fn vector(&self) -> &QMatrix {
        &self.vector
    }

    pub fn form_length(&self) -> f64 {
        self.form_length
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// Rescale the lift by a nonzero quaternion on the right; the
    /// projective point and region are unchanged.
    pub fn rescaled(&self, lambda: Quaternion, form: &HermitianForm, boundary_tol: f64) -> Self {
        Self::new(self.vector.scale_right(lambda), form, boundary_tol).expect("same dimensions")
    }
}

/// The Hermitian pairing `<z, w> = z* J w`.
pub fn pairing(z: &PointLift, w: &PointLift, form: &HermitianForm) -> Result<Quaternion, Error> {
    if z.vector.rows() != form.size() || w.vector.rows() != form.size() {
        return Err(Error::DimensionMismatch {
            expected: form.size(),
            got: z.vector.rows().max(w.vector.rows()),
            context: "pairing".into(),
        });
    }
    Ok(form::pairing_raw(&z.vector, &w.vector, form))
}

/// Squared hyperbolic cosine of half the Bergman distance,
/// `<z,w><w,z> / (<z,z><w,w>)`. Both lifts must be interior.
pub fn cosh_sq_half_distance(
    z: &PointLift,
    w: &PointLift,
    form: &HermitianForm,
) -> Result<f64, Error> {
    for p in [z, w] {
        if p.region != Region::Interior {
            return Err(Error::NonInterior {
                region: p.region.to_string(),
                form_length: p.form_length,
            });
        }
    }
    let zw = pairing(z, w, form)?;
    Ok(zw.norm_sqr() / (z.form_length * w.form_length))
}

/// Bergman distance `rho(z, w)`; lift-independent and symmetric.
pub fn bergman_distance(
    z: &PointLift,
    w: &PointLift,
    form: &HermitianForm,
) -> Result<f64, Error> {
    let c2 = cosh_sq_half_distance(z, w, form)?;
    // c2 >= 1 in exact arithmetic; clamp the rounding range
    Ok(2.0 * c2.max(1.0).sqrt().acosh())
}

/// Apply a symplectic matrix to a lift. The region is preserved.
pub fn apply_isometry(
    a: &QMatrix,
    z: &PointLift,
    form: &HermitianForm,
    symplectic_tol: f64,
    boundary_tol: f64,
) -> Result<PointLift, Error> {
    form::require_symplectic(a, form, symplectic_tol)?;
    PointLift::new(a * &z.vector, form, boundary_tol)
}

/// The quaternion value and modulus of the cross-ratio
/// `[z1, z2, z3, z4] = <z3,z1> <z3,z2>^{-1} <z4,z2> <z4,z1>^{-1}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CrossRatioValue {
    pub value: Quaternion,
    pub modulus: f64,
}

/// Ordered quaternionic cross-ratio. The two inverted pairings must not
/// vanish; a degenerate configuration reports which one did. The factor
/// order is part of the definition and is never rearranged.
pub fn cross_ratio(
    z1: &PointLift,
    z2: &PointLift,
    z3: &PointLift,
    z4: &PointLift,
    form: &HermitianForm,
    degenerate_tol: f64,
) -> Result<CrossRatioValue, Error> {
    let p31 = pairing(z3, z1, form)?;
    let p32 = pairing(z3, z2, form)?;
    let p42 = pairing(z4, z2, form)?;
    let p41 = pairing(z4, z1, form)?;
    let scale32 = z3.vector.frobenius_norm() * z2.vector.frobenius_norm();
    if p32.abs() <= degenerate_tol * scale32 {
        return Err(Error::DegenerateCrossRatio { pairing: "<z3,z2>" });
    }
    let scale41 = z4.vector.frobenius_norm() * z1.vector.frobenius_norm();
    if p41.abs() <= degenerate_tol * scale41 {
        return Err(Error::DegenerateCrossRatio { pairing: "<z4,z1>" });
    }
    let value = p31 * p32.inverse() * p42 * p41.inverse();
    Ok(CrossRatioValue {
        value,
        modulus: value.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat;

    fn lift(entries: Vec<Quaternion>, form: &HermitianForm) -> PointLift {
        PointLift::new(QMatrix::column(entries), form, 1e-9).unwrap()
    }

    #[test]
    fn basis_pairings() {
        let ball = HermitianForm::ball(2);
        let e1 = lift(vec![quat::ONE, quat::ZERO, quat::ZERO], &ball);
        assert!((pairing(&e1, &e1, &ball).unwrap() + quat::ONE).abs() < 1e-15);

        let siegel = HermitianForm::siegel(2);
        let inf = PointLift::new(siegel.lift_infinity(), &siegel, 1e-9).unwrap();
        let zero = PointLift::new(siegel.lift_zero(), &siegel, 1e-9).unwrap();
        assert!((pairing(&inf, &zero, &siegel).unwrap() + quat::ONE).abs() < 1e-15);
        assert_eq!(inf.region(), Region::Boundary);
        assert_eq!(zero.region(), Region::Boundary);
    }

    #[test]
    fn regions() {
        let ball = HermitianForm::ball(1);
        let origin = lift(vec![quat::ONE, quat::ZERO], &ball);
        assert_eq!(origin.region(), Region::Interior);
        let boundary = lift(vec![quat::ONE, quat::ONE], &ball);
        assert_eq!(boundary.region(), Region::Boundary);
        let outside = lift(vec![quat::ONE, Quaternion::real(2.0)], &ball);
        assert_eq!(outside.region(), Region::Exterior);
    }

    #[test]
    fn distance_zero_to_itself() {
        let ball = HermitianForm::ball(2);
        let z = lift(
            vec![quat::ONE, Quaternion::new(0.1, 0.2, 0.0, 0.1), quat::ZERO],
            &ball,
        );
        assert!(bergman_distance(&z, &z, &ball).unwrap().abs() < 1e-12);
    }

    #[test]
    fn distance_is_lift_independent() {
        let ball = HermitianForm::ball(2);
        let z = lift(
            vec![quat::ONE, Quaternion::new(0.3, 0.0, 0.2, 0.0), quat::ZERO],
            &ball,
        );
        let w = lift(
            vec![
                quat::ONE,
                Quaternion::new(-0.1, 0.25, 0.0, 0.0),
                Quaternion::new(0.0, 0.0, 0.1, 0.2),
            ],
            &ball,
        );
        let d = bergman_distance(&z, &w, &ball).unwrap();
        let lam = Quaternion::new(0.7, -1.2, 0.4, 0.9);
        let mu = Quaternion::new(-0.2, 0.5, 2.0, -0.7);
        let z2 = z.rescaled(lam, &ball, 1e-9);
        let w2 = w.rescaled(mu, &ball, 1e-9);
        let d2 = bergman_distance(&z2, &w2, &ball).unwrap();
        assert!((d - d2).abs() <= 1e-11 * d.max(1.0));
        // symmetry
        let d3 = bergman_distance(&w, &z, &ball).unwrap();
        assert!((d - d3).abs() < 1e-12);
    }

    #[test]
    fn non_interior_rejected() {
        let ball = HermitianForm::ball(1);
        let z = lift(vec![quat::ONE, quat::ZERO], &ball);
        let b = lift(vec![quat::ONE, quat::ONE], &ball);
        assert!(matches!(
            bergman_distance(&z, &b, &ball),
            Err(Error::NonInterior { .. })
        ));
    }

    #[test]
    fn heisenberg_translation_fixes_zero() {
        let siegel = HermitianForm::siegel(2);
        let zeta = Quaternion::real(0.25);
        let s = Quaternion::new(zeta.norm_sqr() / 2.0, 1.0, 0.0, 0.0);
        let t = QMatrix::from_rows(vec![
            vec![quat::ONE, quat::ZERO, quat::ZERO],
            vec![s, quat::ONE, zeta.conj()],
            vec![zeta, quat::ZERO, quat::ONE],
        ]);
        let zero = PointLift::new(siegel.lift_zero(), &siegel, 1e-9).unwrap();
        let moved = apply_isometry(&t, &zero, &siegel, 1e-9, 1e-9).unwrap();
        // projectively equal to the lift of 0: all non-second entries vanish
        let v = moved.vector();
        assert!(v[(0, 0)].abs() < 1e-14);
        assert!(v[(2, 0)].abs() < 1e-14);
        assert!(v[(1, 0)].abs() > 0.9);
        assert_eq!(moved.region(), Region::Boundary);
    }

    #[test]
    fn diagonal_fixes_infinity() {
        let siegel = HermitianForm::siegel(2);
        let a = QMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5), quat::ONE]);
        let inf = PointLift::new(siegel.lift_infinity(), &siegel, 1e-9).unwrap();
        let moved = apply_isometry(&a, &inf, &siegel, 1e-9, 1e-9).unwrap();
        let v = moved.vector();
        assert!(v[(1, 0)].abs() < 1e-14);
        assert!(v[(2, 0)].abs() < 1e-14);
    }

    #[test]
    fn cross_ratio_reports_degenerate_slot() {
        let siegel = HermitianForm::siegel(2);
        let inf = PointLift::new(siegel.lift_infinity(), &siegel, 1e-9).unwrap();
        let zero = PointLift::new(siegel.lift_zero(), &siegel, 1e-9).unwrap();
        // <z3, z2> vanishes when z3 = z2 = infinity (null vector)
        let err = cross_ratio(&zero, &inf, &inf, &zero, &siegel, 1e-12).unwrap_err();
        match err {
            Error::DegenerateCrossRatio { pairing } => assert_eq!(pairing, "<z3,z2>"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
