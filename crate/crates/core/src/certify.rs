//! Executable non-discreteness certificates.
//!
//! Each predicate is a necessary condition for a two-generator group to be
//! non-elementary and discrete; a certificate therefore only ever asserts
//! the negation ("elementary or not discrete") and never discreteness.
//! Every certificate carries a numeric evidence map from which its verdict
//! can be re-derived.

use crate::embed::complex_2x2;
use crate::error::Error;
use crate::form::{self, HermitianForm};
use crate::isometry::{self, Kind};
use crate::model::{self, PointLift};
use crate::qmat::{block_decompose, QMatrix};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The strict inequality of the predicate holds: the pair cannot
    /// generate a non-elementary discrete group.
    NonDiscreteOrElementary,
    /// The necessary condition for "non-elementary and discrete" holds;
    /// nothing is certified.
    NecessaryConditionHolds,
    /// A hypothesis of the predicate fails; see `hypothesis`.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Predicate {
    EllipticJorgensen,
    CaoParker,
    Shimizu,
    Sl2c,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub predicate: Predicate,
    pub evidence: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
}

impl Certificate {
    fn not_applicable(predicate: Predicate, reason: &str, evidence: BTreeMap<String, f64>) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            predicate,
            evidence,
            hypothesis: Some(reason.to_string()),
        }
    }

    fn decide(
        predicate: Predicate,
        lhs: f64,
        rhs: f64,
        mut evidence: BTreeMap<String, f64>,
        equality_tol: f64,
    ) -> Self {
        evidence.insert("lhs".into(), lhs);
        evidence.insert("rhs".into(), rhs);
        let band = equality_tol * rhs.abs().max(1.0);
        let verdict = if lhs < rhs - band {
            Verdict::NonDiscreteOrElementary
        } else {
            if (lhs - rhs).abs() <= band {
                evidence.insert("boundary".into(), 1.0);
            }
            Verdict::NecessaryConditionHolds
        };
        Self {
            verdict,
            predicate,
            evidence,
            hypothesis: None,
        }
    }

    /// Re-derive the verdict from the evidence alone; `None` when the
    /// certificate was not applicable.
    pub fn recheck(&self, equality_tol: f64) -> Option<Verdict> {
        if self.verdict == Verdict::NotApplicable {
            return None;
        }
        let lhs = *self.evidence.get("lhs")?;
        let rhs = *self.evidence.get("rhs")?;
        let band = equality_tol * rhs.abs().max(1.0);
        Some(if lhs < rhs - band {
            Verdict::NonDiscreteOrElementary
        } else {
            Verdict::NecessaryConditionHolds
        })
    }
}

/// Elliptic inequality: for elliptic `g` with interior fixed point `q`,
/// `cosh(rho(q, h(q)) / 2) * delta(g) < 1` certifies that `<g, h>` is
/// elementary or not discrete.
///
/// The inequality needs a diagonalizable elliptic element with an interior
/// fixed point, so non-regular elliptic input is accepted too (its fixed
/// point is no longer unique; the negative-length eigenvector is used) and
/// flagged through the `regular` evidence entry.
pub fn elliptic_certificate(
    g: &QMatrix,
    h: &QMatrix,
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<Certificate, Error> {
    form::require_symplectic(h, form, tol.symplectic)?;
    let class = isometry::classify(g, form, tol)?;
    let mut evidence = BTreeMap::new();
    match class.kind {
        Kind::RegularElliptic => {
            evidence.insert("regular".into(), 1.0);
        }
        Kind::Elliptic => {
            evidence.insert("regular".into(), 0.0);
        }
        other => {
            evidence.insert("kind_ok".into(), 0.0);
            let _ = other;
            return Ok(Certificate::not_applicable(
                Predicate::EllipticJorgensen,
                "g not regular elliptic",
                evidence,
            ));
        }
    }
    let q_vec = class.fixed_points[0].clone();
    let q = PointLift::new(q_vec, form, tol.boundary)?;
    let hq = model::apply_isometry(h, &q, form, tol.symplectic, tol.boundary)?;
    let cosh_sq = model::cosh_sq_half_distance(&q, &hq, form)?;
    let cosh_term = cosh_sq.max(1.0).sqrt();
    let delta = isometry::delta_elliptic(&class)?;
    evidence.insert("coshTerm".into(), cosh_term);
    evidence.insert("delta".into(), delta);
    Ok(Certificate::decide(
        Predicate::EllipticJorgensen,
        cosh_term * delta,
        1.0,
        evidence,
        tol.equality,
    ))
}

/// Cao-Parker inequality for a loxodromic `g` with `M_g < 1` and fixed
/// points `u, v`: non-elementary discrete `<g, h>` forces
/// `|[h(u),u,v,h(v)]|^{1/2} |[h(u),v,u,h(v)]|^{1/2} >= (1 - M_g)/M_g^2`.
pub fn cao_parker_certificate(
    g: &QMatrix,
    h: &QMatrix,
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<Certificate, Error> {
    form::require_symplectic(h, form, tol.symplectic)?;
    let class = isometry::classify(g, form, tol)?;
    let mut evidence = BTreeMap::new();
    if class.kind != Kind::Loxodromic {
        return Ok(Certificate::not_applicable(
            Predicate::CaoParker,
            "g not loxodromic",
            evidence,
        ));
    }
    let inv = isometry::loxodromic_invariants(&class)?;
    let m_g = inv.m_g.expect("loxodromic invariants carry M_g");
    evidence.insert("M_g".into(), m_g);
    evidence.insert("deltaCp".into(), inv.delta_cp.unwrap_or(0.0));
    if m_g >= 1.0 {
        return Ok(Certificate::not_applicable(
            Predicate::CaoParker,
            "M_g >= 1",
            evidence,
        ));
    }
    let u = PointLift::new(class.fixed_points[0].clone(), form, tol.boundary)?;
    let v = PointLift::new(class.fixed_points[1].clone(), form, tol.boundary)?;
    let hu = model::apply_isometry(h, &u, form, tol.symplectic, tol.boundary)?;
    let hv = model::apply_isometry(h, &v, form, tol.symplectic, tol.boundary)?;
    let cr1 = match model::cross_ratio(&hu, &u, &v, &hv, form, tol.degenerate) {
        Ok(c) => c.modulus,
        Err(Error::DegenerateCrossRatio { pairing }) => {
            return Ok(Certificate::not_applicable(
                Predicate::CaoParker,
                &format!("degenerate cross-ratio: {pairing} vanishes"),
                evidence,
            ));
        }
        Err(e) => return Err(e),
    };
    let cr2 = match model::cross_ratio(&hu, &v, &u, &hv, form, tol.degenerate) {
        Ok(c) => c.modulus,
        Err(Error::DegenerateCrossRatio { pairing }) => {
            return Ok(Certificate::not_applicable(
                Predicate::CaoParker,
                &format!("degenerate cross-ratio: {pairing} vanishes"),
                evidence,
            ));
        }
        Err(e) => return Err(e),
    };
    evidence.insert("cr1".into(), cr1);
    evidence.insert("cr2".into(), cr2);
    let lhs = cr1.sqrt() * cr2.sqrt();
    let rhs = (1.0 - m_g) / (m_g * m_g);
    Ok(Certificate::decide(
        Predicate::CaoParker,
        lhs,
        rhs,
        evidence,
        tol.equality,
    ))
}

/// Shimizu condition: for a Heisenberg translation `T_{s,zeta}` in normal
/// form and `A` not fixing the boundary point 0, set
/// `t = sup(|b|, |beta|, |gamma|, |U - I|)` and `M = |s| + 2|zeta|`; then
/// `M t + 2|zeta| < 1` certifies that `<A, T>` is non-discrete or fixes 0.
pub fn shimizu_certificate(
    t_matrix: &QMatrix,
    a: &QMatrix,
    tol: &Tolerances,
) -> Result<Certificate, Error> {
    t_matrix.check_square("Shimizu certificate")?;
    let n = t_matrix.rows() - 1;
    let form = HermitianForm::siegel(n);
    let params = isometry::heisenberg_params(t_matrix)?;
    form::require_symplectic(a, &form, tol.symplectic)?;
    let mut evidence = BTreeMap::new();
    let s_norm = params.s.abs();
    let zeta_norm = params
        .zeta
        .iter()
        .map(|q| q.norm_sqr())
        .sum::<f64>()
        .sqrt();
    evidence.insert("sNorm".into(), s_norm);
    evidence.insert("zetaNorm".into(), zeta_norm);
    evidence.insert("Mzeta".into(), 2.0 * zeta_norm);

    // "A does not fix 0": minimal distance of A e_2 to the right-scalar
    // line through e_2, relative to |A e_2|
    let moved = a * &form.lift_zero();
    let total = moved.frobenius_norm();
    let aligned = moved[(1, 0)].abs();
    let off = (total * total - aligned * aligned).max(0.0).sqrt();
    evidence.insert("fixZeroResidual".into(), off / total.max(1e-300));
    if off <= tol.fix_zero * total {
        return Ok(Certificate::not_applicable(
            Predicate::Shimizu,
            "A fixes 0",
            evidence,
        ));
    }

    let t_sup = if a.rows() == 2 {
        let b_norm = a[(0, 1)].abs();
        evidence.insert("bNorm".into(), b_norm);
        b_norm
    } else {
        let blocks = block_decompose(a)?;
        let b_norm = blocks.b.abs();
        let beta_norm = blocks.beta.frobenius_norm();
        let gamma_norm = blocks.gamma.frobenius_norm();
        let u_dev = blocks
            .u
            .max_norm_diff(&QMatrix::identity(a.rows() - 2));
        evidence.insert("bNorm".into(), b_norm);
        evidence.insert("betaNorm".into(), beta_norm);
        evidence.insert("gammaNorm".into(), gamma_norm);
        evidence.insert("uMinusINorm".into(), u_dev);
        b_norm.max(beta_norm).max(gamma_norm).max(u_dev)
    };
    let m_const = s_norm + 2.0 * zeta_norm;
    evidence.insert("t".into(), t_sup);
    evidence.insert("M".into(), m_const);
    Ok(Certificate::decide(
        Predicate::Shimizu,
        m_const * t_sup + 2.0 * zeta_norm,
        1.0,
        evidence,
        tol.equality,
    ))
}

/// SL(2,C) specialization: for `g = diag(e^{i theta}, e^{-i theta})`,
/// `theta` in `[0, pi]`, and `h` with determinant 1, non-elementary
/// discrete `<g, h>` forces `4 sin^2(theta/2) (|h|^2 + 2) >= 1`.
pub fn sl2c_certificate(
    theta: f64,
    h: &QMatrix,
    tol: &Tolerances,
) -> Result<Certificate, Error> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, pi], got {theta}"
        )));
    }
    let entries = complex_2x2(h)?;
    let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    let det_residual = (det - num_complex::Complex64::new(1.0, 0.0)).norm();
    if det_residual > 1e-10 {
        return Err(Error::NotUnitDeterminant {
            residual: det_residual,
        });
    }
    let norm_sq: f64 = entries
        .iter()
        .flatten()
        .map(|c| c.norm_sqr())
        .sum();
    let sin_half_sq = (theta / 2.0).sin().powi(2);
    let mut evidence = BTreeMap::new();
    evidence.insert("theta".into(), theta);
    evidence.insert("normSq".into(), norm_sq);
    evidence.insert("sinHalfSq".into(), sin_half_sq);
    Ok(Certificate::decide(
        Predicate::Sl2c,
        4.0 * sin_half_sq * (norm_sq + 2.0),
        1.0,
        evidence,
        tol.equality,
    ))
}
