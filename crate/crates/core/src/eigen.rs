//! Right eigenvalues of quaternionic matrices via the complex adjoint.
//!
//! Writing `A = X + Y j` with complex `X`, `Y`, the complex adjoint is the
//! block matrix
//!
//! ```text
//! chi(A) = (  X       Y     )
//!          ( -conj(Y) conj(X) )
//! ```
//!
//! which is multiplicative for the split `q = (w + x i) + (y + z i) j`.
//! The spectrum of `chi(A)` is closed under conjugation, and each
//! quaternionic right-eigenvalue similarity class with representative
//! `lambda` (complex, `Im >= 0`) contributes the conjugate pair
//! `{lambda, conj(lambda)}` with its quaternionic multiplicity. A complex
//! eigenvector `u = (u1, u2)` of `chi(A)` for `lambda` maps back to the
//! quaternionic eigenvector `v = u1 - conj(u2) j` with `A v = v lambda`.

use crate::cmat::{self, C64, CMatrix};
use crate::error::Error;
use crate::form::HermitianForm;
use crate::qmat::QMatrix;
use crate::quat::Quaternion;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthSign {
    Negative,
    Zero,
    Positive,
}

/// One right-eigenvalue similarity class.
#[derive(Clone, Debug)]
pub struct EigenClass {
    /// Canonical complex representative with nonnegative imaginary part.
    pub rep: Quaternion,
    pub multiplicity: usize,
    /// Right-module-independent eigenvectors spanning the class eigenspace
    /// (fewer than `multiplicity` when the matrix is defective). When a
    /// form was supplied the vectors are ordered negative sign first.
    pub vectors: Vec<QMatrix>,
    /// Hermitian length signs of `vectors`, present when a form was given.
    pub vector_signs: Vec<LengthSign>,
    /// Sign of the class eigenspace: `Negative` if it contains a vector of
    /// negative Hermitian length, else `Zero` if a null one, else
    /// `Positive`.
    pub sign: Option<LengthSign>,
}

impl EigenClass {
    /// The designated eigenvector (negative-length first by construction).
    pub fn vector(&self) -> Option<&QMatrix> {
        self.vectors.first()
    }
}

#[derive(Clone, Debug)]
pub struct EigenData {
    /// Classes sorted by descending modulus of the representative, then by
    /// real and imaginary part.
    pub classes: Vec<EigenClass>,
    /// Matrix size; multiplicities sum to this.
    pub size: usize,
}

impl EigenData {
    /// Multiset of `(representative, multiplicity)` pairs.
    pub fn rep_multiset(&self) -> Vec<(Quaternion, usize)> {
        self.classes
            .iter()
            .map(|c| (c.rep, c.multiplicity))
            .collect()
    }

    pub fn index_of_sign(&self, sign: LengthSign) -> Option<usize> {
        self.classes.iter().position(|c| c.sign == Some(sign))
    }
}

/// The `2m x 2m` complex adjoint of an `m x m` quaternionic matrix.
pub fn complex_adjoint(a: &QMatrix) -> CMatrix {
    let m = a.rows();
    let mut chi = CMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..a.cols() {
            let (x, y) = a[(i, j)].complex_parts();
            chi[(i, j)] = x;
            chi[(i, j + m)] = y;
            chi[(i + m, j)] = -y.conj();
            chi[(i + m, j + m)] = x.conj();
        }
    }
    chi
}

/// Convert a complex eigenvector of `chi(A)` back to a quaternionic one.
fn quaternionic_vector(u: &[C64], m: usize) -> QMatrix {
    let mut v = QMatrix::zeros(m, 1);
    for i in 0..m {
        v[(i, 0)] = Quaternion::from_complex_parts(u[i], -u[i + m].conj());
    }
    v
}

/// Quaternion-valued Euclidean inner product of column vectors,
/// `sum conj(u_i) v_i` (right-linear in `v`).
pub fn qdot(u: &QMatrix, v: &QMatrix) -> Quaternion {
    assert_eq!(u.rows(), v.rows());
    let mut acc = Quaternion::default();
    for i in 0..u.rows() {
        acc += u[(i, 0)].conj() * v[(i, 0)];
    }
    acc
}

/// Reduce a list of quaternionic columns to a right-module-independent
/// spanning set by Gram-Schmidt with a relative drop tolerance.
fn right_module_reduce(vectors: Vec<QMatrix>, drop_tol: f64) -> Vec<QMatrix> {
    let mut basis: Vec<QMatrix> = Vec::new();
    for mut v in vectors {
        for u in &basis {
            let coeff = qdot(u, &v);
            v = &v - &u.scale_right(coeff);
        }
        let norm = v.frobenius_norm();
        if norm > drop_tol {
            basis.push(v.scale(1.0 / norm));
        }
    }
    basis
}

fn cluster_reps(values: &[C64], merge_tol: f64) -> Vec<(C64, usize)> {
    let mut reps: Vec<C64> = values
        .iter()
        .map(|z| C64::new(z.re, z.im.abs()))
        .collect();
    reps.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for z in reps {
        match clusters.last_mut() {
            Some((mean, count)) if (z - *mean).norm() <= merge_tol => {
                let n = *count as f64;
                *mean = (*mean * n + z) / (n + 1.0);
                *count += 1;
            }
            _ => clusters.push((z, 1)),
        }
    }
    // Conjugate symmetry of chi(A) makes every cluster even-sized; repair
    // tolerance-boundary splits by merging the closest odd clusters.
    loop {
        let odd: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| c % 2 == 1)
            .map(|(i, _)| i)
            .collect();
        if odd.is_empty() {
            break;
        }
        let mut best = (f64::INFINITY, 0, 0);
        for (ai, &i) in odd.iter().enumerate() {
            for &j in &odd[ai + 1..] {
                let d = (clusters[i].0 - clusters[j].0).norm();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let (_, i, j) = best;
        let (zi, ci) = clusters[i];
        let (zj, cj) = clusters[j];
        let total = (ci + cj) as f64;
        clusters[i] = ((zi * ci as f64 + zj * cj as f64) / total, ci + cj);
        clusters.remove(j);
    }
    clusters
}

/// Eigenvectors for one class: numerical null space of `chi(A) - rep I`,
/// with an inverse-iteration fallback when the elimination threshold misses
/// a nearly-singular direction.
fn class_vectors(chi: &CMatrix, rep: C64, m: usize, seed_index: usize) -> Vec<QMatrix> {
    let shifted = chi.sub_scalar_diag(rep);
    let mut null = cmat::null_space(&shifted, 1e-8);
    if null.is_empty() {
        let scale = chi.max_norm().max(1.0);
        let n = 2 * m;
        let mut x: Vec<C64> = (0..n)
            .map(|i| {
                let t = (i + 1) as f64 * (seed_index + 1) as f64;
                C64::new((t * 0.7391).sin(), (t * 1.3179).cos())
            })
            .collect();
        for _ in 0..3 {
            x = cmat::solve_clamped(&shifted, &x, 1e-14 * scale);
            let norm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in x.iter_mut() {
                *c /= norm;
            }
        }
        null.push(x);
    }
    null.iter().map(|u| quaternionic_vector(u, m)).collect()
}

/// Sign of the restriction of the form to a class eigenspace, vector by
/// vector: pivoted Gram-Schmidt with respect to the indefinite pairing,
/// taking the largest remaining |<v,v>| first. Vectors whose length falls
/// inside the zero band keep sign `Zero` and are not used as pivots.
fn classify_signs(
    vectors: Vec<QMatrix>,
    form: &HermitianForm,
    zero_band: f64,
) -> (Vec<QMatrix>, Vec<LengthSign>) {
    let mut work = vectors;
    let mut out: Vec<(QMatrix, LengthSign)> = Vec::new();
    loop {
        let mut best = 0.0;
        let mut best_idx = None;
        for (i, v) in work.iter().enumerate() {
            let len = crate::form::pairing_raw(v, v, form).re();
            if len.abs() > best {
                best = len.abs();
                best_idx = Some(i);
            }
        }
        match best_idx {
            Some(i) if best > zero_band => {
                let v = work.remove(i);
                let len = crate::form::pairing_raw(&v, &v, form).re();
                let sign = if len < 0.0 {
                    LengthSign::Negative
                } else {
                    LengthSign::Positive
                };
                let v = v.scale(1.0 / len.abs().sqrt());
                let vlen = crate::form::pairing_raw(&v, &v, form).re();
                for w in work.iter_mut() {
                    let coeff = crate::form::pairing_raw(&v, w, form) * (1.0 / vlen);
                    *w = &*w - &v.scale_right(coeff);
                }
                out.push((v, sign));
            }
            _ => {
                for v in work {
                    out.push((v, LengthSign::Zero));
                }
                break;
            }
        }
    }
    out.sort_by_key(|(_, s)| match s {
        LengthSign::Negative => 0,
        LengthSign::Zero => 1,
        LengthSign::Positive => 2,
    });
    out.into_iter().unzip()
}

/// Right-eigenvalue similarity classes of a square quaternionic matrix.
///
/// When `form` is given, each class also carries the Hermitian length
/// signs of its eigenvectors, with the zero band `tol.class` (relative to
/// unit Euclidean norm).
pub fn right_eigen(
    a: &QMatrix,
    form: Option<&HermitianForm>,
    tol: &Tolerances,
) -> Result<EigenData, Error> {
    a.check_square("right eigenvalues")?;
    let m = a.rows();
    let chi = complex_adjoint(a);
    let eigs = cmat::eigenvalues(&chi)?;
    let clusters = cluster_reps(&eigs, tol.merge);
    let mut classes = Vec::with_capacity(clusters.len());
    for (idx, (rep_mean, count)) in clusters.iter().enumerate() {
        let rep = C64::new(rep_mean.re, rep_mean.im.max(0.0));
        let multiplicity = count / 2;
        let raw = class_vectors(&chi, rep, m, idx);
        let mut vectors = right_module_reduce(raw, 1e-8);
        vectors.truncate(multiplicity.max(1));
        let (vectors, vector_signs, sign) = match form {
            Some(f) => {
                let (vs, signs) = classify_signs(vectors, f, tol.class);
                let class_sign = if signs.contains(&LengthSign::Negative) {
                    LengthSign::Negative
                } else if signs.contains(&LengthSign::Zero) {
                    LengthSign::Zero
                } else {
                    LengthSign::Positive
                };
                (vs, signs, Some(class_sign))
            }
            None => (vectors, Vec::new(), None),
        };
        classes.push(EigenClass {
            rep: Quaternion::complex(rep.re, rep.im),
            multiplicity,
            vectors,
            vector_signs,
            sign,
        });
    }
    classes.sort_by(|a, b| {
        b.rep
            .abs()
            .partial_cmp(&a.rep.abs())
            .unwrap()
            .then(a.rep.w.partial_cmp(&b.rep.w).unwrap())
            .then(a.rep.x.partial_cmp(&b.rep.x).unwrap())
    });
    Ok(EigenData { classes, size: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{self, Quaternion};
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn angle(theta: f64) -> Quaternion {
        Quaternion::complex(theta.cos(), theta.sin())
    }

    #[test]
    fn adjoint_is_multiplicative() {
        let a = QMatrix::from_rows(vec![
            vec![Quaternion::new(1.0, 2.0, -1.0, 0.5), Quaternion::j()],
            vec![Quaternion::k(), Quaternion::new(0.0, 0.3, 1.0, -2.0)],
        ]);
        let b = QMatrix::from_rows(vec![
            vec![Quaternion::new(0.5, 0.0, 1.0, 1.0), Quaternion::i()],
            vec![quat::ONE, Quaternion::new(-1.0, 1.0, 0.0, 0.25)],
        ]);
        let lhs = complex_adjoint(&(&a * &b));
        let rhs = complex_adjoint(&a).mul(&complex_adjoint(&b));
        let mut max = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                max = max.max((lhs[(i, j)] - rhs[(i, j)]).norm());
            }
        }
        assert!(max < 1e-13);
    }

    #[test]
    fn diagonal_complex_entries() {
        // diag(e^{i pi/3}, e^{-i pi/4}): the second entry is similar to
        // e^{i pi/4}
        let a = QMatrix::diagonal(&[angle(PI / 3.0), angle(-PI / 4.0)]);
        let data = right_eigen(&a, None, &tol()).unwrap();
        assert_eq!(data.classes.len(), 2);
        let reps: Vec<Quaternion> = data.classes.iter().map(|c| c.rep).collect();
        let expect = [angle(PI / 4.0), angle(PI / 3.0)];
        for e in expect {
            assert!(
                reps.iter().any(|r| (*r - e).abs() < 1e-10),
                "missing {e:?} in {reps:?}"
            );
        }
    }

    #[test]
    fn j_and_i_merge() {
        let a = QMatrix::diagonal(&[Quaternion::j(), Quaternion::i()]);
        let data = right_eigen(&a, None, &tol()).unwrap();
        assert_eq!(data.classes.len(), 1);
        assert_eq!(data.classes[0].multiplicity, 2);
        assert!((data.classes[0].rep - Quaternion::i()).abs() < 1e-10);
        assert_eq!(data.classes[0].vectors.len(), 2);
    }

    #[test]
    fn eigenvector_residuals_on_diagonal() {
        let a = QMatrix::diagonal(&[
            Quaternion::new(0.5, 0.25, -1.0, 0.0),
            Quaternion::real(2.0),
            angle(1.0),
        ]);
        let data = right_eigen(&a, None, &tol()).unwrap();
        assert_eq!(
            data.classes.iter().map(|c| c.multiplicity).sum::<usize>(),
            3
        );
        for class in &data.classes {
            for v in &class.vectors {
                let av = &a * v;
                let vr = v.scale_right(class.rep);
                assert!(
                    av.max_norm_diff(&vr) < 1e-9,
                    "residual too large for rep {:?}",
                    class.rep
                );
            }
        }
    }

    #[test]
    fn loxodromic_signs_under_siegel() {
        let form = HermitianForm::siegel(2);
        let a = QMatrix::diagonal(&[
            Quaternion::real(2.0),
            Quaternion::real(0.5),
            quat::ONE,
        ]);
        let data = right_eigen(&a, Some(&form), &tol()).unwrap();
        assert_eq!(data.classes.len(), 3);
        // moduli 2 and 1/2 classes have null eigenvectors, class 1 positive
        for class in &data.classes {
            let modulus = class.rep.abs();
            if (modulus - 1.0).abs() < 1e-9 {
                assert_eq!(class.sign, Some(LengthSign::Positive));
            } else {
                assert_eq!(class.sign, Some(LengthSign::Zero), "rep {:?}", class.rep);
            }
        }
    }

    #[test]
    fn negative_class_under_ball_form() {
        let form = HermitianForm::ball(2);
        let a = QMatrix::diagonal(&[angle(PI / 3.0), angle(PI / 4.0), angle(PI / 5.0)]);
        let data = right_eigen(&a, Some(&form), &tol()).unwrap();
        let neg = data.index_of_sign(LengthSign::Negative).unwrap();
        assert!((data.classes[neg].rep - angle(PI / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn merged_class_with_mixed_signs() {
        // diag(e^{i t}, e^{-i t}) under the ball form: one class of
        // multiplicity two whose eigenspace holds both a negative and a
        // positive vector.
        let form = HermitianForm::ball(1);
        let t = 0.7;
        let a = QMatrix::diagonal(&[angle(t), angle(-t)]);
        let data = right_eigen(&a, Some(&form), &tol()).unwrap();
        assert_eq!(data.classes.len(), 1);
        assert_eq!(data.classes[0].multiplicity, 2);
        assert_eq!(data.classes[0].sign, Some(LengthSign::Negative));
        assert_eq!(
            data.classes[0].vector_signs,
            vec![LengthSign::Negative, LengthSign::Positive]
        );
    }
}
