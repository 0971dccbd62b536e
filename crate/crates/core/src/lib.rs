//! Quaternionic hyperbolic geometry for Sp(n,1).
//!
//! The crate models the projectivized negative cone of a signature-(n,1)
//! quaternionic Hermitian form: quaternion and quaternionic-matrix algebra,
//! symplectic membership, right eigenvalues via the complex adjoint,
//! Bergman distance and cross-ratios, isometry classification with its
//! conjugacy invariants, and executable non-discreteness certificates
//! (elliptic, Cao-Parker, Shimizu, and the SL(2,C) specialization) together
//! with the conjugation-iteration probe behind the elliptic inequality.

pub mod certify;
pub mod cmat;
pub mod eigen;
pub mod embed;
pub mod error;
pub mod expm;
pub mod form;
pub mod isometry;
pub mod model;
pub mod probe;
pub mod qmat;
pub mod quat;
pub mod report;
pub mod sample;
pub mod tol;

pub use error::Error;
pub use form::{HermitianForm, Presentation};
pub use qmat::QMatrix;
pub use quat::Quaternion;
pub use tol::Tolerances;
