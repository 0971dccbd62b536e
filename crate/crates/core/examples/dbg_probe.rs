use qhyp::form::{self, HermitianForm};
use qhyp::probe::run_probe;
use qhyp::qmat::QMatrix;
use qhyp::quat::Quaternion;
use qhyp::sample;
use qhyp::tol::Tolerances;
use std::f64::consts::PI;

fn angle(t: f64) -> Quaternion { Quaternion::complex(t.cos(), t.sin()) }

fn main() {
    let form = HermitianForm::ball(1);
    let g = QMatrix::diagonal(&[angle(PI / 12.0), angle(PI / 10.0)]);
    let delta = 2.0 * (PI / 24.0f64).sin() + 2.0 * (PI / 20.0f64).sin();
    let mut scale = 0.6;
    let mut h = sample::random_symplectic(1, &form, 11, scale);
    while h[(0, 0)].abs() * delta > 0.9 {
        scale *= 0.7;
        h = sample::random_symplectic(1, &form, 11, scale);
    }
    println!("a0 = {}, delta = {}, product = {}", h[(0,0)].abs(), delta, h[(0,0)].abs()*delta);
    let trace = run_probe(&g, &h, &form, 400, 1e-9, &Tolerances::default(), false).unwrap();
    println!("converged={} elementary={} steps={}", trace.converged, trace.elementary_detected, trace.steps.len());
    for s in trace.steps.iter().take(30) {
        let gap = s.a11_mod * s.a11_mod - s.beta_norm * s.beta_norm;
        println!("k={:3} a11={:.12} beta={:.3e} alpha={:.3e} gap-1={:+.3e}", s.k, s.a11_mod, s.beta_norm, s.alpha_norm, gap - 1.0);
    }
    // check symplectic residual drift
    let mut cur = h.clone();
    for k in 1..=30 {
        let inv = form::form_conjugate_inverse(&cur, &form);
        cur = &(&cur * &g) * &inv;
        if k % 5 == 0 {
            println!("k={k} symp residual = {:.3e}", form::symplectic_residual(&cur, &form).unwrap());
        }
    }
}
