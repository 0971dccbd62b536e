//! Classification of Sp(n,1) elements and their conjugacy invariants.
//!
//! The trichotomy is decided from the right-eigenvalue classes and the
//! Hermitian length signs of the eigenvectors:
//!
//! * some class modulus off 1 above        -> loxodromic,
//! * all moduli 1 and a negative vector    -> elliptic (regular when all
//!   class multiplicities are 1),
//! * all moduli 1 and no negative vector   -> parabolic; unipotent
//!   parabolics (all classes 1, `A - I` nilpotent) are Heisenberg
//!   translations.
//!
//! The invariants delta, delta_cp, M_g and delta_ct are functions of the
//! eigenvalue classes alone (plus which class carries the negative
//! vector), so they can be computed from any representative without
//! explicit diagonalization.

use crate::eigen::{right_eigen, EigenData, LengthSign};
use crate::error::Error;
use crate::form::{self, HermitianForm};
use crate::qmat::{block_decompose, QMatrix};
use crate::quat::{self, Quaternion};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Identity,
    RegularElliptic,
    Elliptic,
    Loxodromic,
    Parabolic,
    HeisenbergTranslation,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Kind::Identity => "Identity",
            Kind::RegularElliptic => "RegularElliptic",
            Kind::Elliptic => "Elliptic",
            Kind::Loxodromic => "Loxodromic",
            Kind::Parabolic => "Parabolic",
            Kind::HeisenbergTranslation => "HeisenbergTranslation",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: Kind,
    pub eigen: EigenData,
    /// Lifts of distinguished fixed points: the interior fixed point for
    /// elliptic elements, the two boundary fixed points (expanding class
    /// first) for loxodromic ones. Empty when not computed.
    pub fixed_points: Vec<QMatrix>,
    /// Index into `eigen.classes` of lambda_1: the negative-length class
    /// for elliptic elements, the class of modulus > 1 for loxodromic.
    pub negative_class_index: Option<usize>,
    /// Smallest decision margin met along the classification path.
    pub margin: f64,
    /// Set when the negative-length class has multiplicity above one; the
    /// pairing of lambda_1 with the other classes is then a convention.
    pub multiplicity_warning: bool,
}

/// Decision procedure over eigenvalue classes. `A` must be symplectic for
/// the form at `tol.symplectic`.
pub fn classify(
    a: &QMatrix,
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<Classification, Error> {
    form::require_symplectic(a, form, tol.symplectic)?;
    let m = form.size();
    let scale = a.max_norm().max(1.0);
    let band = tol.class * scale;

    // (i) +-identity
    let id = QMatrix::identity(m);
    let d_plus = a.max_norm_diff(&id);
    let d_minus = a.max_norm_diff(&(-&id));
    if d_plus <= band || d_minus <= band {
        let eigen = right_eigen(a, Some(form), tol)?;
        return Ok(Classification {
            kind: Kind::Identity,
            eigen,
            fixed_points: vec![],
            negative_class_index: None,
            margin: d_plus.min(d_minus),
            multiplicity_warning: false,
        });
    }

    let eigen = right_eigen(a, Some(form), tol)?;

    // (ii) loxodromic: a class with modulus above 1
    let expanding: Vec<usize> = eigen
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.rep.abs() > 1.0 + band)
        .map(|(i, _)| i)
        .collect();
    if !expanding.is_empty() {
        if expanding.len() > 1 {
            return Err(Error::AmbiguousClassification {
                detail: "more than one expanding eigenvalue class".into(),
                margin: band,
            });
        }
        let lam1 = expanding[0];
        let contracting = eigen
            .classes
            .iter()
            .position(|c| c.rep.abs() < 1.0 - band)
            .ok_or_else(|| Error::AmbiguousClassification {
                detail: "expanding class without a contracting partner".into(),
                margin: band,
            })?;
        // reciprocal pairing |lambda_1| * |lambda_1'| = 1
        let prod = eigen.classes[lam1].rep.abs() * eigen.classes[contracting].rep.abs();
        if (prod - 1.0).abs() > 16.0 * band {
            return Err(Error::AmbiguousClassification {
                detail: "expanding/contracting class moduli do not pair to 1".into(),
                margin: (prod - 1.0).abs(),
            });
        }
        let mut fixed = Vec::new();
        for idx in [lam1, contracting] {
            if let Some(v) = eigen.classes[idx].vector() {
                fixed.push(v.clone());
            }
        }
        let margin = eigen.classes[lam1].rep.abs() - 1.0;
        return Ok(Classification {
            kind: Kind::Loxodromic,
            eigen,
            fixed_points: fixed,
            negative_class_index: Some(lam1),
            margin,
            multiplicity_warning: false,
        });
    }

    // (iii) all moduli within the unit band?
    let mut modulus_margin = f64::INFINITY;
    for c in &eigen.classes {
        let dev = (c.rep.abs() - 1.0).abs();
        modulus_margin = modulus_margin.min(band - dev);
        if dev > band {
            return Err(Error::AmbiguousClassification {
                detail: format!(
                    "class modulus {} is neither 1 nor beyond the loxodromic band",
                    c.rep.abs()
                ),
                margin: dev - band,
            });
        }
    }

    let negative = eigen.index_of_sign(LengthSign::Negative);
    if let Some(neg_idx) = negative {
        let all_simple = eigen.classes.iter().all(|c| c.multiplicity == 1);
        let kind = if all_simple {
            Kind::RegularElliptic
        } else {
            Kind::Elliptic
        };
        let fixed = eigen.classes[neg_idx]
            .vector()
            .cloned()
            .map(|v| vec![v])
            .unwrap_or_default();
        let warn = eigen.classes[neg_idx].multiplicity > 1;
        return Ok(Classification {
            kind,
            eigen,
            fixed_points: fixed,
            negative_class_index: Some(neg_idx),
            margin: modulus_margin,
            multiplicity_warning: warn,
        });
    }

    // (iv) parabolic; Heisenberg translation when unipotent
    let all_one = eigen
        .classes
        .iter()
        .all(|c| (c.rep - quat::ONE).abs() <= band);
    let mut kind = Kind::Parabolic;
    if all_one {
        let n_minus_i = a - &id;
        let base = n_minus_i.max_norm();
        if base > 0.0 && n_minus_i.pow(m).max_norm() <= tol.nilpotent * base {
            kind = Kind::HeisenbergTranslation;
        }
    }
    Ok(Classification {
        kind,
        eigen,
        fixed_points: vec![],
        negative_class_index: None,
        margin: modulus_margin,
        multiplicity_warning: false,
    })
}

/// Conjugacy invariants; each field is present for the kinds it is
/// defined on.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantSet {
    /// max_i |lambda_1 - 1| + |lambda_i - 1| over classes other than
    /// lambda_1 (elliptic kinds).
    pub delta: Option<f64>,
    /// max |lambda_i - 1| over the unit classes of a loxodromic element.
    pub delta_cp: Option<f64>,
    /// 2 delta_cp + |lambda_1 - 1| + |conj(lambda_1)^{-1} - 1|.
    pub m_g: Option<f64>,
    /// max_i |lambda_i - lambda_1|^2 over the similarity classes
    /// (elliptic kinds; both sign choices of the angle are taken).
    pub delta_ct: Option<f64>,
}

/// Expand class representatives by multiplicity, excluding one copy of the
/// distinguished class (the lambda_1 slot).
fn expanded_others(eigen: &EigenData, lambda1_idx: usize) -> Vec<Quaternion> {
    let mut out = Vec::new();
    for (i, c) in eigen.classes.iter().enumerate() {
        let copies = if i == lambda1_idx {
            c.multiplicity - 1
        } else {
            c.multiplicity
        };
        for _ in 0..copies {
            out.push(c.rep);
        }
    }
    out
}

/// `delta(g) = max { |lambda_1 - 1| + |lambda_i - 1| }` for elliptic `g`.
pub fn delta_elliptic(c: &Classification) -> Result<f64, Error> {
    require_elliptic(c)?;
    let idx = c.negative_class_index.expect("elliptic has negative class");
    let lam1 = c.eigen.classes[idx].rep;
    let base = (lam1 - quat::ONE).abs();
    let others = expanded_others(&c.eigen, idx);
    Ok(others
        .iter()
        .map(|l| base + (*l - quat::ONE).abs())
        .fold(0.0, f64::max))
}

/// `delta_ct(g) = max |lambda_i - lambda_1|^2` over similarity classes:
/// the distance is maximized over each class sphere, which for unit
/// representatives `e^{i t}` means both signs of the angle enter.
pub fn delta_ct(c: &Classification) -> Result<f64, Error> {
    require_elliptic(c)?;
    let idx = c.negative_class_index.expect("elliptic has negative class");
    let lam1 = c.eigen.classes[idx].rep;
    let others = expanded_others(&c.eigen, idx);
    Ok(others
        .iter()
        .map(|l| {
            let direct = (*l - lam1).norm_sqr();
            let flipped = (l.conj() - lam1).norm_sqr();
            direct.max(flipped)
        })
        .fold(0.0, f64::max))
}

/// `delta_cp` and `M_g` for a loxodromic element.
pub fn loxodromic_invariants(c: &Classification) -> Result<InvariantSet, Error> {
    if c.kind != Kind::Loxodromic {
        return Err(Error::WrongKind {
            expected: "Loxodromic".into(),
            got: c.kind.to_string(),
        });
    }
    let lam1_idx = c.negative_class_index.expect("loxodromic has lambda_1");
    let lam1 = c.eigen.classes[lam1_idx].rep;
    // conj(lambda_1)^{-1} has the same class representative as 1/|lambda_1|
    // times the unit part; identify the contracting class by modulus.
    let recip_idx = c
        .eigen
        .classes
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != lam1_idx)
        .min_by(|(_, x), (_, y)| {
            let rx = (x.rep.abs() * lam1.abs() - 1.0).abs();
            let ry = (y.rep.abs() * lam1.abs() - 1.0).abs();
            rx.partial_cmp(&ry).unwrap()
        })
        .map(|(i, _)| i)
        .expect("loxodromic has a contracting class");
    let recip = c.eigen.classes[recip_idx].rep;
    let mut delta_cp = 0.0f64;
    for (i, class) in c.eigen.classes.iter().enumerate() {
        if i == lam1_idx || i == recip_idx {
            continue;
        }
        delta_cp = delta_cp.max((class.rep - quat::ONE).abs());
    }
    // extra multiplicity inside the distinguished pair also counts toward
    // the unit classes (normal form lists them among lambda_3..)
    for (i, class) in c.eigen.classes.iter().enumerate() {
        if (i == lam1_idx || i == recip_idx) && class.multiplicity > 1 {
            delta_cp = delta_cp.max((class.rep - quat::ONE).abs());
        }
    }
    let m_g = 2.0 * delta_cp + (lam1 - quat::ONE).abs() + (recip - quat::ONE).abs();
    Ok(InvariantSet {
        delta: None,
        delta_cp: Some(delta_cp),
        m_g: Some(m_g),
        delta_ct: None,
    })
}

/// All invariants defined for the classified kind.
pub fn invariants(c: &Classification) -> Result<InvariantSet, Error> {
    match c.kind {
        Kind::RegularElliptic | Kind::Elliptic => Ok(InvariantSet {
            delta: Some(delta_elliptic(c)?),
            delta_cp: None,
            m_g: None,
            delta_ct: Some(delta_ct(c)?),
        }),
        Kind::Identity => Ok(InvariantSet {
            delta: Some(0.0),
            delta_cp: None,
            m_g: None,
            delta_ct: Some(0.0),
        }),
        Kind::Loxodromic => loxodromic_invariants(c),
        _ => Ok(InvariantSet {
            delta: None,
            delta_cp: None,
            m_g: None,
            delta_ct: None,
        }),
    }
}

fn require_elliptic(c: &Classification) -> Result<(), Error> {
    match c.kind {
        Kind::RegularElliptic | Kind::Elliptic => Ok(()),
        other => Err(Error::WrongKind {
            expected: "Elliptic or RegularElliptic".into(),
            got: other.to_string(),
        }),
    }
}

/// Parameters of a Heisenberg translation in normal form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeisenbergParams {
    pub s: Quaternion,
    pub zeta: Vec<Quaternion>,
    /// |Re(s) - |zeta|^2 / 2|, reported for auditing.
    pub residual: f64,
}

/// Extract `(s, zeta)` from a Heisenberg translation already in Siegel
/// normal form (callers conjugate first). Rejects matrices that are not in
/// that shape, including the identity.
pub fn heisenberg_params(a: &QMatrix) -> Result<HeisenbergParams, Error> {
    a.check_square("heisenberg parameters")?;
    let m = a.rows();
    let id = QMatrix::identity(m);
    if a.max_norm_diff(&id) < 1e-14 {
        return Err(Error::NotNormalForm {
            detail: "identity is not a Heisenberg translation".into(),
            residual: 0.0,
        });
    }
    let (s, zeta, shape_residual) = if m == 2 {
        (a[(1, 0)], Vec::new(), {
            let mut r: f64 = 0.0;
            r = r.max((a[(0, 0)] - quat::ONE).abs());
            r = r.max((a[(1, 1)] - quat::ONE).abs());
            r = r.max(a[(0, 1)].abs());
            r
        })
    } else {
        let blocks = block_decompose(a)?;
        let mut r: f64 = 0.0;
        r = r.max((blocks.a - quat::ONE).abs());
        r = r.max((blocks.d - quat::ONE).abs());
        r = r.max(blocks.b.abs());
        r = r.max(blocks.gamma.max_norm());
        r = r.max(blocks.beta.max_norm());
        r = r.max(blocks.u.max_norm_diff(&QMatrix::identity(m - 2)));
        // delta block must equal alpha (= zeta)
        r = r.max(blocks.delta.max_norm_diff(&blocks.alpha));
        let zeta: Vec<Quaternion> = (0..m - 2).map(|i| blocks.alpha[(i, 0)]).collect();
        (blocks.c, zeta, r)
    };
    if shape_residual > 1e-9 {
        return Err(Error::NotNormalForm {
            detail: "matrix is not in Heisenberg normal form".into(),
            residual: shape_residual,
        });
    }
    let zeta_norm_sqr: f64 = zeta.iter().map(|q| q.norm_sqr()).sum();
    let residual = (s.re() - zeta_norm_sqr / 2.0).abs();
    if residual > 1e-9 {
        return Err(Error::NotNormalForm {
            detail: "Re(s) = |zeta|^2 / 2 fails".into(),
            residual,
        });
    }
    Ok(HeisenbergParams {
        s,
        zeta,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn angle(t: f64) -> Quaternion {
        Quaternion::complex(t.cos(), t.sin())
    }

    #[test]
    fn identity_classifies() {
        let form = HermitianForm::ball(2);
        let c = classify(&QMatrix::identity(3), &form, &tol()).unwrap();
        assert_eq!(c.kind, Kind::Identity);
        let inv = invariants(&c).unwrap();
        assert_eq!(inv.delta, Some(0.0));
    }

    #[test]
    fn loxodromic_diag_with_fixed_points() {
        let form = HermitianForm::siegel(2);
        let a = QMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5), quat::ONE]);
        let c = classify(&a, &form, &tol()).unwrap();
        assert_eq!(c.kind, Kind::Loxodromic);
        assert_eq!(c.fixed_points.len(), 2);
        // expanding eigenvector is the lift of infinity, contracting of 0
        let inf = &c.fixed_points[0];
        assert!(inf[(1, 0)].abs() < 1e-8 && inf[(2, 0)].abs() < 1e-8);
        let zero = &c.fixed_points[1];
        assert!(zero[(0, 0)].abs() < 1e-8 && zero[(2, 0)].abs() < 1e-8);
    }

    #[test]
    fn heisenberg_translation_detected() {
        let form = HermitianForm::siegel(2);
        // zeta = 1/4, s = 1/32 + i
        let t = sample::heisenberg_normal_form(&[Quaternion::real(0.25)], Quaternion::i())
            .unwrap();
        assert!((t[(1, 0)].re() - 1.0 / 32.0).abs() < 1e-15);
        let c = classify(&t, &form, &tol()).unwrap();
        assert_eq!(c.kind, Kind::HeisenbergTranslation);
    }

    #[test]
    fn regular_elliptic_diag() {
        let form = HermitianForm::ball(2);
        let a = QMatrix::diagonal(&[angle(PI / 3.0), angle(PI / 4.0), angle(PI / 5.0)]);
        let c = classify(&a, &form, &tol()).unwrap();
        assert_eq!(c.kind, Kind::RegularElliptic);
        let idx = c.negative_class_index.unwrap();
        assert!((c.eigen.classes[idx].rep - angle(PI / 3.0)).abs() < 1e-10);
        assert_eq!(c.fixed_points.len(), 1);
    }

    #[test]
    fn delta_on_embedded_rotation_pair() {
        // diag(e^{it}, e^{-it}) in Sp(1,1): one class of multiplicity two,
        // delta = 2|e^{it} - 1| = 4 sin(t/2)
        let form = HermitianForm::ball(1);
        let t = 0.9;
        let a = QMatrix::diagonal(&[angle(t), angle(-t)]);
        let c = classify(&a, &form, &tol()).unwrap();
        assert_eq!(c.kind, Kind::Elliptic);
        assert!(c.multiplicity_warning);
        let d = delta_elliptic(&c).unwrap();
        assert!((d - 4.0 * (t / 2.0).sin()).abs() < 1e-10);
        // delta_ct = 4 sin^2 t for the same element
        let dct = delta_ct(&c).unwrap();
        assert!((dct - 4.0 * t.sin() * t.sin()).abs() < 1e-10);
    }

    #[test]
    fn delta_matches_half_angle_formula() {
        let form = HermitianForm::ball(2);
        let (t1, t2, t3) = (0.7, 0.3, 1.1);
        let a = QMatrix::diagonal(&[angle(t1), angle(t2), angle(t3)]);
        let c = classify(&a, &form, &tol()).unwrap();
        let d = delta_elliptic(&c).unwrap();
        let by_formula = [t2, t3]
            .iter()
            .map(|t| 4.0 * ((t1 + t) / 4.0).sin() * ((t1 - t) / 4.0).cos())
            .fold(0.0f64, f64::max);
        assert!((d - by_formula).abs() < 1e-12);
    }

    #[test]
    fn delta_ct_both_signs() {
        let form = HermitianForm::ball(1);
        let (t1, t2) = (0.8, 0.5);
        let a = QMatrix::diagonal(&[angle(t1), angle(t2)]);
        let c = classify(&a, &form, &tol()).unwrap();
        let d = delta_ct(&c).unwrap();
        let expect = [t1 + t2, t1 - t2]
            .iter()
            .map(|t| 4.0 * (t / 2.0).sin().powi(2))
            .fold(0.0f64, f64::max);
        assert!((d - expect).abs() < 1e-12);
    }

    #[test]
    fn loxodromic_invariant_values() {
        let form = HermitianForm::siegel(2);
        let a = QMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5), quat::ONE]);
        let c = classify(&a, &form, &tol()).unwrap();
        let inv = loxodromic_invariants(&c).unwrap();
        assert_eq!(inv.delta_cp, Some(0.0));
        assert!((inv.m_g.unwrap() - 1.5).abs() < 1e-10);

        let b = QMatrix::diagonal(&[
            Quaternion::real(2.0),
            Quaternion::real(0.5),
            angle(PI / 6.0),
        ]);
        let c = classify(&b, &form, &tol()).unwrap();
        let inv = loxodromic_invariants(&c).unwrap();
        let dcp = 2.0 * (PI / 12.0).sin();
        assert!((inv.delta_cp.unwrap() - dcp).abs() < 1e-10);
        assert!((inv.m_g.unwrap() - (2.0 * dcp + 1.5)).abs() < 1e-10);
    }

    #[test]
    fn small_loxodromic_mg_below_one() {
        let form = HermitianForm::siegel(3);
        let a = QMatrix::diagonal(&[
            Quaternion::real(1.1),
            Quaternion::real(1.0 / 1.1),
            quat::ONE,
            quat::ONE,
        ]);
        let c = classify(&a, &form, &tol()).unwrap();
        let inv = loxodromic_invariants(&c).unwrap();
        let expect = 0.1 + (1.0 - 1.0 / 1.1);
        assert!((inv.m_g.unwrap() - expect).abs() < 1e-12);
        assert!(inv.m_g.unwrap() < 1.0);
    }

    #[test]
    fn wrong_kind_rejected() {
        let form = HermitianForm::siegel(2);
        let a = QMatrix::diagonal(&[Quaternion::real(2.0), Quaternion::real(0.5), quat::ONE]);
        let c = classify(&a, &form, &tol()).unwrap();
        assert!(delta_elliptic(&c).is_err());
    }

    #[test]
    fn heisenberg_params_examples() {
        let t = sample::heisenberg_normal_form(
            &[Quaternion::real(1.0)],
            Quaternion::new(0.0, 2.0, 0.0, 0.0),
        )
        .unwrap();
        let p = heisenberg_params(&t).unwrap();
        assert!((p.s.re() - 0.5).abs() < 1e-15);
        assert_eq!(p.zeta.len(), 1);

        assert!(heisenberg_params(&QMatrix::identity(3)).is_err());

        // vertical translation: s purely imaginary, zeta = 0
        let v = sample::heisenberg_normal_form(&[quat::ZERO], Quaternion::i()).unwrap();
        let p = heisenberg_params(&v).unwrap();
        assert!(p.s.re().abs() < 1e-15);
        assert!(p.zeta[0].abs() < 1e-15);
    }

    #[test]
    fn conjugated_forms_keep_their_kind() {
        let telliptic = sample::random_regular_elliptic(2, 11, &[0.9, 0.4, 1.4], 0.8).unwrap();
        let form = HermitianForm::ball(2);
        assert_eq!(
            classify(&telliptic, &form, &tol()).unwrap().kind,
            Kind::RegularElliptic
        );

        let lox = sample::random_loxodromic(2, 12, 1.5, 0.3, &[0.7], 0.8).unwrap();
        let siegel = HermitianForm::siegel(2);
        assert_eq!(
            classify(&lox, &siegel, &tol()).unwrap().kind,
            Kind::Loxodromic
        );

        let heis = sample::random_heisenberg(
            2,
            13,
            &[Quaternion::new(0.4, 0.1, 0.0, 0.0)],
            Quaternion::i(),
            0.8,
        )
        .unwrap();
        assert_eq!(
            classify(&heis, &siegel, &tol()).unwrap().kind,
            Kind::HeisenbergTranslation
        );
    }

    #[test]
    fn inverse_has_same_kind_and_reciprocal_lambda1() {
        let siegel = HermitianForm::siegel(2);
        let lox = sample::random_loxodromic(2, 21, 1.7, 0.4, &[0.2], 0.6).unwrap();
        let inv = crate::form::symplectic_inverse(&lox, &siegel).unwrap();
        let c = classify(&lox, &siegel, &tol()).unwrap();
        let ci = classify(&inv, &siegel, &tol()).unwrap();
        assert_eq!(c.kind, ci.kind);
        let l1 = c.eigen.classes[c.negative_class_index.unwrap()].rep.abs();
        let l1i = ci.eigen.classes[ci.negative_class_index.unwrap()].rep.abs();
        assert!((l1 * l1i - l1 / l1).abs() < 1e-8 || (l1 - l1i).abs() < 1e-8);
        assert!((l1 - 1.7).abs() < 1e-8 && (l1i - 1.7).abs() < 1e-8);
    }
}
