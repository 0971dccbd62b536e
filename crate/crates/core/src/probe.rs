//! The conjugation-iteration non-discreteness probe.
//!
//! For a diagonal elliptic `g` in the ball model and a symplectic `h`,
//! iterate `h_0 = h`, `h_{k+1} = h_k g h_k^{-1}` and track the first-row
//! data `a_{11}^{(k)}`, `beta^{(k)}` (rest of the first row) and
//! `alpha^{(k)}` (rest of the first column). When the premise
//! `|a_{11}| delta(g) < 1` holds, `|a_{11}^{(k)}|` decreases strictly
//! toward 1 with the geometric bound
//!
//! ```text
//! |a_{11}^{(k)}|^2 - 1 < (|a_{11}|^2 - 1) (|a_{11}|^2 delta^2(g))^k
//! ```
//!
//! and the iterates converge to a block-diagonal symplectic limit, which
//! is the non-discreteness witness. `diagonalize` produces the diagonal
//! conjugate the probe needs.

use crate::eigen::LengthSign;
use crate::error::Error;
use crate::form::{self, HermitianForm, Presentation};
use crate::isometry::{self, Kind};
use crate::qmat::QMatrix;
use crate::quat::{self, Quaternion};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeStep {
    pub k: usize,
    pub a11_mod: f64,
    pub beta_norm: f64,
    pub alpha_norm: f64,
    /// Largest entry modulus across the two off-diagonal blocks.
    pub off_block_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeTrace {
    pub steps: Vec<ProbeStep>,
    /// Right side of the contraction bound per recorded step; empty when
    /// the premise failed and bound checking was disabled.
    pub bound: Vec<f64>,
    pub bound_checked: bool,
    pub converged: bool,
    pub elementary_detected: bool,
    /// Present when converged: the last iterate.
    pub limit: Option<QMatrix>,
    /// `|u_1 - u_i|` rows per step when diagnostics were requested, with
    /// `u_i = conj(a_{1,i})^{-1} lambda_i conj(a_{1,i})`; entries are null
    /// where `a_{1,i}` vanishes.
    pub u_diagnostics: Option<Vec<Vec<Option<f64>>>>,
    pub delta: f64,
    pub initial_a11: f64,
}

fn first_row_data(h: &QMatrix) -> (f64, f64, f64, f64) {
    let m = h.rows();
    let a11 = h[(0, 0)].abs();
    let mut beta_sq = 0.0;
    let mut alpha_sq = 0.0;
    let mut off_max = 0.0f64;
    for t in 1..m {
        let b = h[(0, t)].abs();
        let a = h[(t, 0)].abs();
        beta_sq += b * b;
        alpha_sq += a * a;
        off_max = off_max.max(b).max(a);
    }
    (a11, beta_sq.sqrt(), alpha_sq.sqrt(), off_max)
}

fn u_row(h: &QMatrix, diag: &[Quaternion]) -> Vec<Option<f64>> {
    let m = h.rows();
    let mut row = Vec::with_capacity(m - 1);
    let u_of = |i: usize| -> Option<Quaternion> {
        let a1i = h[(0, i)].conj();
        if a1i.abs() < 1e-280 {
            None
        } else {
            Some(a1i.inverse() * diag[i] * a1i)
        }
    };
    match u_of(0) {
        Some(u1) => {
            for i in 1..m {
                row.push(u_of(i).map(|ui| (u1 - ui).abs()));
            }
        }
        None => {
            for _ in 1..m {
                row.push(None);
            }
        }
    }
    row
}

/// Run the iteration. `g` must be diagonal (ball model) and elliptic; `h`
/// symplectic for the same form. When `|a_{11}(h)| delta(g) >= 1` the
/// probe still runs but the bound column is disabled.
pub fn run_probe(
    g: &QMatrix,
    h: &QMatrix,
    form: &HermitianForm,
    max_steps: usize,
    conv_tol: f64,
    tol: &Tolerances,
    with_u_diagnostics: bool,
) -> Result<ProbeTrace, Error> {
    if form.presentation() != Presentation::Ball {
        return Err(Error::InvalidParameter(
            "the probe runs in the ball model".into(),
        ));
    }
    form.check_size(g, "probe generator")?;
    form.check_size(h, "probe companion")?;
    let m = form.size();
    // g must be diagonal ...
    let mut off = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                off = off.max(g[(i, j)].abs());
            }
        }
    }
    if off > 1e-12 * g.max_norm().max(1.0) {
        return Err(Error::NotNormalForm {
            detail: "g is not diagonal; diagonalize first".into(),
            residual: off,
        });
    }
    // ... and elliptic with the negative direction in the first slot
    let diag: Vec<Quaternion> = (0..m).map(|i| g[(i, i)]).collect();
    for (i, lam) in diag.iter().enumerate() {
        if (lam.abs() - 1.0).abs() > tol.class {
            return Err(Error::NotNormalForm {
                detail: format!("diagonal entry {i} has modulus {} != 1", lam.abs()),
                residual: (lam.abs() - 1.0).abs(),
            });
        }
    }
    form::require_symplectic(h, form, tol.symplectic)?;

    let lam1 = diag[0].class_rep();
    let delta = diag[1..]
        .iter()
        .map(|l| (lam1 - quat::ONE).abs() + (l.class_rep() - quat::ONE).abs())
        .fold(0.0, f64::max);

    let (a0, b0, al0, off0) = first_row_data(h);
    let premise = a0 * delta;
    let bound_checked = premise < 1.0;

    let mut steps = vec![ProbeStep {
        k: 0,
        a11_mod: a0,
        beta_norm: b0,
        alpha_norm: al0,
        off_block_residual: off0,
    }];
    let mut bound = if bound_checked {
        vec![a0 * a0 - 1.0]
    } else {
        Vec::new()
    };
    let mut u_rows = if with_u_diagnostics {
        Some(vec![u_row(h, &diag)])
    } else {
        None
    };

    let mut current = h.clone();
    let mut converged = false;
    let mut elementary_detected = false;
    let mut limit = None;
    for k in 1..=max_steps {
        // a fresh elimination inverse keeps the symplectic residual of the
        // iterates from compounding (J h* J doubles it every step)
        let inv = current.inverse()?;
        current = &(&current * g) * &inv;
        if current.max_norm() > 1e12 {
            return Err(Error::Overflow {
                step: k,
                norm: current.max_norm(),
            });
        }
        let (a11, beta, alpha, off_res) = first_row_data(&current);
        steps.push(ProbeStep {
            k,
            a11_mod: a11,
            beta_norm: beta,
            alpha_norm: alpha,
            off_block_residual: off_res,
        });
        if bound_checked {
            bound.push((a0 * a0 - 1.0) * (premise * premise).powi(k as i32));
        }
        if let Some(rows) = u_rows.as_mut() {
            rows.push(u_row(&current, &diag));
        }
        if beta <= 1e-13 {
            elementary_detected = true;
        }
        if beta <= conv_tol && alpha <= conv_tol && off_res <= conv_tol {
            converged = true;
            limit = Some(current.clone());
            break;
        }
        if elementary_detected {
            limit = Some(current.clone());
            break;
        }
    }
    Ok(ProbeTrace {
        steps,
        bound,
        bound_checked,
        converged,
        elementary_detected,
        limit,
        u_diagnostics: u_rows,
        delta,
        initial_a11: a0,
    })
}

/// Diagonalize an elliptic (ball form) or loxodromic (Siegel form)
/// element: returns `(D, K)` with `K g K^{-1} = D`, where `D` carries the
/// class representatives (`lambda_1` first) and the columns of `K^{-1}`
/// are eigenvectors normalized against the form (negative-length vector
/// first at `<v,v> = -1`, positive ones at `+1`, the loxodromic null pair
/// at `<v_inf, v_0> = -1`).
pub fn diagonalize(
    g: &QMatrix,
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<(QMatrix, QMatrix), Error> {
    let class = isometry::classify(g, form, tol)?;
    let m = form.size();
    let mut columns: Vec<QMatrix> = Vec::with_capacity(m);
    let mut reps: Vec<Quaternion> = Vec::with_capacity(m);
    match class.kind {
        Kind::RegularElliptic | Kind::Elliptic | Kind::Identity => {
            if form.presentation() != Presentation::Ball {
                return Err(Error::InvalidParameter(
                    "elliptic diagonalization uses the ball form".into(),
                ));
            }
            // negative vector first, then the rest in class order
            let mut entries: Vec<(Quaternion, QMatrix, LengthSign)> = Vec::new();
            for c in &class.eigen.classes {
                for (v, s) in c.vectors.iter().zip(&c.vector_signs) {
                    entries.push((c.rep, v.clone(), *s));
                }
            }
            entries.sort_by_key(|(_, _, s)| match s {
                LengthSign::Negative => 0,
                _ => 1,
            });
            if entries.len() != m
                || entries
                    .iter()
                    .filter(|(_, _, s)| *s == LengthSign::Negative)
                    .count()
                    != 1
            {
                return Err(Error::NonDiagonalizable {
                    residual: f64::NAN,
                });
            }
            for (rep, v, _) in entries {
                // eigen vectors come back normalized to <v,v> = +-1
                columns.push(v);
                reps.push(rep);
            }
        }
        Kind::Loxodromic => {
            if form.presentation() != Presentation::Siegel {
                return Err(Error::InvalidParameter(
                    "loxodromic diagonalization uses the Siegel form".into(),
                ));
            }
            let lam1_idx = class.negative_class_index.expect("loxodromic lambda_1");
            let lam1 = class.eigen.classes[lam1_idx].rep;
            let v_inf = class.fixed_points[0].clone();
            let v_zero = class.fixed_points[1].clone();
            let recip_rep = class
                .eigen
                .classes
                .iter()
                .map(|c| c.rep)
                .find(|r| (r.abs() * lam1.abs() - 1.0).abs() < 1e-6)
                .expect("loxodromic reciprocal class");
            let c = form::pairing_raw(&v_inf, &v_zero, form);
            if c.abs() < 1e-12 {
                return Err(Error::NonDiagonalizable { residual: c.abs() });
            }
            // scale v_zero so <v_inf, v_zero> = -1; a complex scalar keeps
            // the eigenvalue representative fixed when it is not real
            let mu = if lam1.im_abs() > tol.merge {
                let cc = c.complex_part();
                -Quaternion::from_c64(cc.inv())
            } else {
                -c.inverse()
            };
            columns.push(v_inf);
            reps.push(lam1);
            columns.push(v_zero.scale_right(mu));
            reps.push(recip_rep);
            for (i, cl) in class.eigen.classes.iter().enumerate() {
                if i == lam1_idx {
                    continue;
                }
                if (cl.rep.abs() * lam1.abs() - 1.0).abs() < 1e-6 && cl.rep.abs() < 1.0 {
                    continue;
                }
                for v in &cl.vectors {
                    columns.push(v.clone());
                    reps.push(cl.rep);
                }
            }
            if columns.len() != m {
                return Err(Error::NonDiagonalizable {
                    residual: f64::NAN,
                });
            }
        }
        other => {
            return Err(Error::WrongKind {
                expected: "RegularElliptic or Loxodromic".into(),
                got: other.to_string(),
            });
        }
    }
    let mut s = QMatrix::zeros(m, m);
    for (j, col) in columns.iter().enumerate() {
        s.set_col(j, col);
    }
    let d = QMatrix::diagonal(&reps);
    let k = form::form_conjugate_inverse(&s, form);
    // residual of K g K^{-1} = D
    let check = &(&k * g) * &s;
    let residual = check.max_norm_diff(&d);
    if residual > 1e-8 * g.max_norm().max(1.0) {
        return Err(Error::NonDiagonalizable { residual });
    }
    Ok((d, k))
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
    fn identity_companion_converges_at_step_one() {
        let form = HermitianForm::ball(1);
        let g = QMatrix::diagonal(&[angle(0.4), angle(0.7)]);
        let trace = run_probe(&g, &QMatrix::identity(2), &form, 50, 1e-9, &tol(), false)
            .unwrap();
        assert!(trace.converged);
        assert_eq!(trace.steps.len(), 2);
        assert!((trace.steps[1].a11_mod - 1.0).abs() < 1e-14);
        assert!(trace.limit.as_ref().unwrap().max_norm_diff(&g) < 1e-14);
        assert!(trace.elementary_detected);
    }

    #[test]
    fn contraction_on_a_premise_pair() {
        let form = HermitianForm::ball(1);
        // delta = 2 sin(pi/24) + 2 sin(pi/20) ~ 0.574
        let g = QMatrix::diagonal(&[angle(PI / 12.0), angle(PI / 10.0)]);
        let mut h = sample::random_symplectic(1, &form, 11, 0.6);
        // shrink until the premise product stays below 0.9
        let delta = 2.0 * (PI / 24.0).sin() + 2.0 * (PI / 20.0).sin();
        let mut scale = 0.6;
        while h[(0, 0)].abs() * delta > 0.9 {
            scale *= 0.7;
            h = sample::random_symplectic(1, &form, 11, scale);
        }
        let trace = run_probe(&g, &h, &form, 400, 1e-9, &tol(), true).unwrap();
        assert!(trace.bound_checked);
        assert!(trace.converged, "probe should converge under the premise");
        // strict decrease while above 1, and the bound at every step
        for w in trace.steps.windows(2) {
            if w[0].a11_mod > 1.0 + 1e-12 {
                assert!(w[1].a11_mod < w[0].a11_mod);
            }
        }
        for (step, b) in trace.steps.iter().zip(&trace.bound) {
            let lhs = step.a11_mod * step.a11_mod - 1.0;
            assert!(lhs <= b * (1.0 + 1e-12) + 1e-15, "bound fails at k={}", step.k);
        }
        // Pythagoras-like identity along the trace
        for step in &trace.steps {
            let gap = step.a11_mod * step.a11_mod - step.beta_norm * step.beta_norm;
            assert!((gap - 1.0).abs() < 1e-9, "identity fails at k={}", step.k);
        }
        // block-diagonal symplectic limit
        let limit = trace.limit.as_ref().unwrap();
        assert!(form::is_symplectic(limit, &form, 1e-8).unwrap());
        let (_, beta, alpha, _) = super::first_row_data(limit);
        assert!(beta <= 1e-9 && alpha <= 1e-9);
    }

    #[test]
    fn premise_violation_disables_bounds() {
        let form = HermitianForm::ball(1);
        // large delta: angles near pi; the iteration may blow up, so only
        // a few steps are taken
        let g = QMatrix::diagonal(&[angle(2.8), angle(2.2)]);
        let h = sample::random_symplectic(1, &form, 4, 1.5);
        let trace = run_probe(&g, &h, &form, 4, 1e-9, &tol(), false).unwrap();
        assert!(!trace.bound_checked);
        assert!(trace.bound.is_empty());
        assert_eq!(trace.steps.len(), 5);
    }

    #[test]
    fn non_diagonal_g_rejected() {
        let form = HermitianForm::ball(1);
        let g = sample::random_regular_elliptic(1, 3, &[0.5, 1.1], 0.4).unwrap();
        let err = run_probe(&g, &QMatrix::identity(2), &form, 10, 1e-9, &tol(), false)
            .unwrap_err();
        assert!(matches!(err, Error::NotNormalForm { .. }));
    }

    #[test]
    fn iterates_stay_symplectic() {
        let form = HermitianForm::ball(2);
        // delta = 2 sin(0.125) + 2 sin(0.275) ~ 0.79
        let g = QMatrix::diagonal(&[angle(0.25), angle(0.4), angle(0.55)]);
        let h = sample::random_symplectic(2, &form, 9, 0.25);
        let trace = run_probe(&g, &h, &form, 80, 1e-11, &tol(), false).unwrap();
        assert!(trace.bound_checked, "test setup should satisfy the premise");
        // recompute the iterates independently and check symplecticity
        let mut cur = h.clone();
        for _ in 0..trace.steps.len() - 1 {
            let inv = cur.inverse().unwrap();
            cur = &(&cur * &g) * &inv;
            assert!(form::is_symplectic(&cur, &form, 1e-8).unwrap());
        }
    }

    #[test]
    fn diagonalize_elliptic_roundtrip() {
        let form = HermitianForm::ball(2);
        let g = sample::random_regular_elliptic(2, 21, &[0.3, 0.9, 1.5], 0.7).unwrap();
        let (d, k) = diagonalize(&g, &form, &tol()).unwrap();
        let k_inv = form::form_conjugate_inverse(&k, &form);
        let round = &(&k_inv * &d) * &k;
        assert!(round.max_norm_diff(&g) < 1e-8);
        // D entries are the class representatives, negative class first
        let class = isometry::classify(&g, &form, &tol()).unwrap();
        let lam1 = class.eigen.classes[class.negative_class_index.unwrap()].rep;
        assert!((d[(0, 0)] - lam1).abs() < 1e-8);
    }

    #[test]
    fn diagonalize_loxodromic_orders_lambda1_first() {
        let form = HermitianForm::siegel(2);
        let g = sample::random_loxodromic(2, 31, 2.0, 0.0, &[0.6], 0.5).unwrap();
        let (d, k) = diagonalize(&g, &form, &tol()).unwrap();
        assert!((d[(0, 0)].abs() - 2.0).abs() < 1e-7);
        assert!((d[(1, 1)].abs() - 0.5).abs() < 1e-7);
        let k_inv = form::form_conjugate_inverse(&k, &form);
        let round = &(&k_inv * &d) * &k;
        assert!(round.max_norm_diff(&g) < 1e-7);
        // the produced conjugator is symplectic
        assert!(form::is_symplectic(&k, &form, 1e-7).unwrap());
    }

    #[test]
    fn diagonalize_rejects_parabolic() {
        let form = HermitianForm::siegel(2);
        let t = sample::heisenberg_normal_form(&[Quaternion::real(0.3)], Quaternion::i())
            .unwrap();
        assert!(matches!(
            diagonalize(&t, &form, &tol()),
            Err(Error::WrongKind { .. })
        ));
    }

    #[test]
    fn diagonal_loxodromic_is_its_own_form() {
        let form = HermitianForm::siegel(2);
        let g = QMatrix::diagonal(&[
            Quaternion::real(2.0),
            Quaternion::real(0.5),
            angle(0.4),
        ]);
        let (d, _) = diagonalize(&g, &form, &tol()).unwrap();
        assert!((d[(0, 0)] - Quaternion::real(2.0)).abs() < 1e-9);
        assert!((d[(1, 1)] - Quaternion::real(0.5)).abs() < 1e-9);
        assert!((d[(2, 2)] - angle(0.4)).abs() < 1e-9);
    }
}
