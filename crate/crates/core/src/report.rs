//! JSON views of results, shared by the CLI and the C bindings.
//!
//! Encodings: quaternions are `[w, x, y, z]`; matrices are
//! `{"rows": r, "cols": c, "entries": [...]}` row-major; point lifts are
//! `{"vector": [[w,x,y,z], ...]}`.

use crate::eigen::LengthSign;
use crate::error::Error;
use crate::form::HermitianForm;
use crate::isometry::{self, Classification};
use crate::model::PointLift;
use crate::qmat::QMatrix;
use crate::quat::Quaternion;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Serialize, Deserialize)]
pub struct LiftJson {
    pub vector: Vec<Quaternion>,
}

pub fn parse_matrix(text: &str) -> Result<QMatrix, Error> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidParameter(format!("matrix JSON: {e}")))
}

pub fn parse_lift(
    text: &str,
    form: &HermitianForm,
    tol: &Tolerances,
) -> Result<PointLift, Error> {
    let raw: LiftJson = serde_json::from_str(text)
        .map_err(|e| Error::InvalidParameter(format!("point lift JSON: {e}")))?;
    PointLift::new(QMatrix::column(raw.vector), form, tol.boundary)
}

pub fn lift_value(v: &QMatrix) -> Value {
    let entries: Vec<Quaternion> = (0..v.rows()).map(|i| v[(i, 0)]).collect();
    json!({ "vector": entries })
}

fn sign_str(s: Option<LengthSign>) -> Value {
    match s {
        Some(LengthSign::Negative) => json!("negative"),
        Some(LengthSign::Zero) => json!("zero"),
        Some(LengthSign::Positive) => json!("positive"),
        None => Value::Null,
    }
}

/// Classification, class representatives, applicable invariants and fixed
/// points as one JSON object.
pub fn classification_value(c: &Classification) -> Value {
    let classes: Vec<Value> = c
        .eigen
        .classes
        .iter()
        .map(|cl| {
            json!({
                "rep": cl.rep,
                "modulus": cl.rep.abs(),
                "multiplicity": cl.multiplicity,
                "sign": sign_str(cl.sign),
            })
        })
        .collect();
    let invariants = isometry::invariants(c)
        .map(|inv| serde_json::to_value(inv).expect("invariants serialize"))
        .unwrap_or(Value::Null);
    json!({
        "kind": c.kind.to_string(),
        "classes": classes,
        "negativeClassIndex": c.negative_class_index,
        "fixedPoints": c.fixed_points.iter().map(lift_value).collect::<Vec<_>>(),
        "invariants": invariants,
        "margin": c.margin,
        "multiplicityWarning": c.multiplicity_warning,
    })
}
