//! Command-line surface: classification, invariants, certificates, the
//! iteration probe, the invariant-comparison sweep, seeded sampling, and
//! distance / cross-ratio queries over JSON inputs.

use clap::{Parser, Subcommand, ValueEnum};
use qhyp::certify::{self, Certificate, Verdict};
use qhyp::embed;
use qhyp::error::Error;
use qhyp::form::{HermitianForm, Presentation};
use qhyp::isometry;
use qhyp::model;
use qhyp::probe;
use qhyp::qmat::QMatrix;
use qhyp::quat::Quaternion;
use qhyp::report;
use qhyp::sample;
use qhyp::tol::Tolerances;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qhyp", version, about = "Quaternionic hyperbolic geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance override, repeatable: --tol name=value (or --tol.name value)
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Exit with status 1 when a certificate verdict is NotApplicable
    #[arg(long, global = true)]
    strict: bool,
    /// Write the result to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Ball,
    Siegel,
}

impl FormArg {
    fn presentation(self) -> Presentation {
        match self {
            FormArg::Ball => Presentation::Ball,
            FormArg::Siegel => Presentation::Siegel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    Elliptic,
    Caoparker,
    Shimizu,
    Sl2c,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Symplectic,
    Loxodromic,
    Regularelliptic,
    Heisenberg,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an Sp(n,1) element and print its invariants
    Classify {
        #[arg(long, value_enum)]
        form: FormArg,
        /// QMatrix JSON file
        matrix: PathBuf,
    },
    /// Print the conjugacy invariants defined for the element's kind
    Invariants {
        #[arg(long, value_enum)]
        form: FormArg,
        matrix: PathBuf,
    },
    /// Evaluate a non-discreteness certificate
    Certify {
        #[arg(long, value_enum)]
        predicate: PredicateArg,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        /// First generator (elliptic / caoparker)
        #[arg(long)]
        g: Option<PathBuf>,
        /// Second generator (elliptic / caoparker / sl2c)
        #[arg(long)]
        h: Option<PathBuf>,
        /// Heisenberg translation in normal form (shimizu)
        #[arg(long)]
        t: Option<PathBuf>,
        /// Companion element (shimizu)
        #[arg(long)]
        a: Option<PathBuf>,
        /// Rotation angle in [0, pi] (sl2c)
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Run the conjugation-iteration probe on a diagonal elliptic g
    Probe {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_enum, default_value = "ball")]
        form: FormArg,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[arg(long, default_value_t = 1e-9)]
        conv_tol: f64,
        /// Also write (k, a11Mod, bound) rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Include the |u_1 - u_i| diagnostics per step
        #[arg(long)]
        u_diagnostics: bool,
    },
    /// Compare sin^2(theta/2) against sin^2(theta) over a grid (CSV)
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        max: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Emit a seeded random element as QMatrix JSON
    Sample {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// Falls back to QHYP_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
        /// Lie-algebra max-norm for symplectic samples
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        /// Comma-separated angles for regularelliptic (n+1 values)
        #[arg(long)]
        angles: Option<String>,
        /// |lambda_1| for loxodromic (> 1)
        #[arg(long)]
        modulus: Option<f64>,
        /// Angle of lambda_1 for loxodromic
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        /// Comma-separated unit-class angles for loxodromic (n-1 values)
        #[arg(long)]
        unit_angles: Option<String>,
        /// |zeta| for heisenberg
        #[arg(long, default_value_t = 0.0)]
        zeta_norm: f64,
        /// Coefficient of i in the imaginary part of s (heisenberg)
        #[arg(long, default_value_t = 1.0)]
        s_im: f64,
        /// Conjugator scale for the normal-form samplers
        #[arg(long, default_value_t = 0.5)]
        conj_scale: f64,
    },
    /// Bergman distance between two interior points
    Distance {
        #[arg(long, value_enum)]
        form: FormArg,
        z: PathBuf,
        w: PathBuf,
    },
    /// Quaternionic cross-ratio [z1, z2, z3, z4]: value and modulus
    Crossratio {
        #[arg(long, value_enum)]
        form: FormArg,
        z1: PathBuf,
        z2: PathBuf,
        z3: PathBuf,
        z4: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<QMatrix, Error> {
    report::parse_matrix(&read_file(path)?)
}

fn form_for(matrix: &QMatrix, arg: FormArg) -> Result<HermitianForm, Error> {
    if matrix.rows() < 2 {
        return Err(Error::InvalidParameter(
            "matrices must be at least 2x2".into(),
        ));
    }
    Ok(HermitianForm::new(arg.presentation(), matrix.rows() - 1))
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, Error> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("bad number {t:?}: {e}")))
        })
        .collect()
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, Error> {
    let mut tol = Tolerances::default();
    for item in overrides {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected name=value, got {item:?}")))?;
        let value: f64 = value
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("bad tolerance value {value:?}: {e}")))?;
        tol.set_by_name(name.trim(), value)
            .map_err(Error::InvalidParameter)?;
    }
    Ok(tol)
}

fn seed_or_env(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("QHYP_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

enum Output {
    Json(serde_json::Value),
    Text(String),
}

fn emit(out: &Option<PathBuf>, output: Output) -> Result<(), Error> {
    let text = match output {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            s.push('\n');
            s
        }
        Output::Text(t) => t,
    };
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn certificate_output(cert: &Certificate, strict: bool, out: &Option<PathBuf>) -> Result<u8, Error> {
    let value = serde_json::to_value(cert).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    emit(out, Output::Json(value))?;
    if strict && cert.verdict == Verdict::NotApplicable {
        return Ok(1);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let tol = tolerances(&cli.tol)?;
    match cli.command {
        Command::Classify { form, matrix } => {
            let m = read_matrix(&matrix)?;
            let f = form_for(&m, form)?;
            let c = isometry::classify(&m, &f, &tol)?;
            emit(&cli.out, Output::Json(report::classification_value(&c)))?;
            Ok(0)
        }
        Command::Invariants { form, matrix } => {
            let m = read_matrix(&matrix)?;
            let f = form_for(&m, form)?;
            let c = isometry::classify(&m, &f, &tol)?;
            let inv = isometry::invariants(&c)?;
            let value = serde_json::to_value(&inv)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            emit(&cli.out, Output::Json(json!({"kind": c.kind.to_string(), "invariants": value})))?;
            Ok(0)
        }
        Command::Certify {
            predicate,
            form,
            g,
            h,
            t,
            a,
            theta,
        } => {
            let need = |opt: Option<PathBuf>, name: &str| {
                opt.ok_or_else(|| {
                    Error::InvalidParameter(format!("--{name} is required for this predicate"))
                })
            };
            let cert = match predicate {
                PredicateArg::Elliptic => {
                    let g = read_matrix(&need(g, "g")?)?;
                    let h = read_matrix(&need(h, "h")?)?;
                    let f = form_for(&g, form.unwrap_or(FormArg::Ball))?;
                    certify::elliptic_certificate(&g, &h, &f, &tol)?
                }
                PredicateArg::Caoparker => {
                    let g = read_matrix(&need(g, "g")?)?;
                    let h = read_matrix(&need(h, "h")?)?;
                    let f = form_for(&g, form.unwrap_or(FormArg::Siegel))?;
                    certify::cao_parker_certificate(&g, &h, &f, &tol)?
                }
                PredicateArg::Shimizu => {
                    let t = read_matrix(&need(t, "t")?)?;
                    let a = read_matrix(&need(a, "a")?)?;
                    certify::shimizu_certificate(&t, &a, &tol)?
                }
                PredicateArg::Sl2c => {
                    let theta = theta.ok_or_else(|| {
                        Error::InvalidParameter("--theta is required for sl2c".into())
                    })?;
                    let h = read_matrix(&need(h, "h")?)?;
                    certify::sl2c_certificate(theta, &h, &tol)?
                }
            };
            certificate_output(&cert, cli.strict, &cli.out)
        }
        Command::Probe {
            g,
            h,
            form,
            max_steps,
            conv_tol,
            csv,
            u_diagnostics,
        } => {
            let g = read_matrix(&g)?;
            let h = read_matrix(&h)?;
            let f = form_for(&g, form)?;
            let trace = probe::run_probe(&g, &h, &f, max_steps, conv_tol, &tol, u_diagnostics)?;
            if let Some(csv_path) = csv {
                let mut text = String::from("k,a11Mod,bound\n");
                for (i, step) in trace.steps.iter().enumerate() {
                    let bound = trace
                        .bound
                        .get(i)
                        .map(|b| format!("{b:.16e}"))
                        .unwrap_or_default();
                    text.push_str(&format!("{},{:.16e},{}\n", step.k, step.a11_mod, bound));
                }
                std::fs::write(&csv_path, text).map_err(|e| {
                    Error::InvalidParameter(format!("cannot write {}: {e}", csv_path.display()))
                })?;
            }
            let value = serde_json::to_value(&trace)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            emit(&cli.out, Output::Json(value))?;
            Ok(0)
        }
        Command::Sweep { min, max, step } => {
            let rows = embed::comparison_sweep(min, max, step)?;
            let mut text = String::from("theta,sinHalfSq,sinSq,better\n");
            for r in rows {
                let better = match r.better {
                    embed::Better::New => "new",
                    embed::Better::CaoTan => "caotan",
                    embed::Better::Tie => "tie",
                };
                text.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{}\n",
                    r.theta, r.sin_half_sq, r.sin_sq, better
                ));
            }
            emit(&cli.out, Output::Text(text))?;
            Ok(0)
        }
        Command::Sample {
            kind,
            n,
            seed,
            scale,
            form,
            angles,
            modulus,
            angle,
            unit_angles,
            zeta_norm,
            s_im,
            conj_scale,
        } => {
            let seed = seed_or_env(seed);
            let matrix = match kind {
                KindArg::Symplectic => {
                    let f = HermitianForm::new(
                        form.unwrap_or(FormArg::Ball).presentation(),
                        n,
                    );
                    sample::random_symplectic(n, &f, seed, scale)
                }
                KindArg::Regularelliptic => {
                    let angles = parse_f64_list(&angles.ok_or_else(|| {
                        Error::InvalidParameter("--angles is required".into())
                    })?)?;
                    sample::random_regular_elliptic(n, seed, &angles, conj_scale)?
                }
                KindArg::Loxodromic => {
                    let modulus = modulus.ok_or_else(|| {
                        Error::InvalidParameter("--modulus is required".into())
                    })?;
                    let unit = parse_f64_list(unit_angles.as_deref().unwrap_or(""))?;
                    sample::random_loxodromic(n, seed, modulus, angle, &unit, conj_scale)?
                }
                KindArg::Heisenberg => {
                    if n < 1 {
                        return Err(Error::InvalidParameter("need n >= 1".into()));
                    }
                    // seeded direction for zeta at the requested norm
                    let mut rng = sample::SeededRng::substream(seed, 7);
                    let mut zeta: Vec<Quaternion> =
                        (0..n - 1).map(|_| rng.quaternion(1.0)).collect();
                    let norm: f64 = zeta.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
                    if norm > 0.0 && zeta_norm > 0.0 {
                        for q in zeta.iter_mut() {
                            *q = *q * (zeta_norm / norm);
                        }
                    } else {
                        for q in zeta.iter_mut() {
                            *q = Quaternion::default();
                        }
                    }
                    sample::random_heisenberg(n, seed, &zeta, Quaternion::i() * s_im, conj_scale)?
                }
            };
            let value = serde_json::to_value(&matrix)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            emit(&cli.out, Output::Json(value))?;
            Ok(0)
        }
        Command::Distance { form, z, w } => {
            let z_text = read_file(&z)?;
            let w_text = read_file(&w)?;
            let raw: report::LiftJson = serde_json::from_str(&z_text)
                .map_err(|e| Error::InvalidParameter(format!("point lift JSON: {e}")))?;
            let f = HermitianForm::new(form.presentation(), raw.vector.len() - 1);
            let z = report::parse_lift(&z_text, &f, &tol)?;
            let w = report::parse_lift(&w_text, &f, &tol)?;
            let rho = model::bergman_distance(&z, &w, &f)?;
            emit(&cli.out, Output::Json(json!({ "distance": rho })))?;
            Ok(0)
        }
        Command::Crossratio { form, z1, z2, z3, z4 } => {
            let texts = [
                read_file(&z1)?,
                read_file(&z2)?,
                read_file(&z3)?,
                read_file(&z4)?,
            ];
            let raw: report::LiftJson = serde_json::from_str(&texts[0])
                .map_err(|e| Error::InvalidParameter(format!("point lift JSON: {e}")))?;
            let f = HermitianForm::new(form.presentation(), raw.vector.len() - 1);
            let lifts: Vec<model::PointLift> = texts
                .iter()
                .map(|t| report::parse_lift(t, &f, &tol))
                .collect::<Result<_, _>>()?;
            let cr = model::cross_ratio(&lifts[0], &lifts[1], &lifts[2], &lifts[3], &f, tol.degenerate)?;
            let value = serde_json::to_value(cr)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            emit(&cli.out, Output::Json(value))?;
            Ok(0)
        }
    }
}

/// Rewrite `--tol.name value` and `--tol.name=value` into `--tol name=value`.
fn preprocess_args() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().peekable();
    while let Some(arg) = args.next() {
        if let Some(rest) = arg.strip_prefix("--tol.") {
            out.push("--tol".to_string());
            if rest.contains('=') {
                out.push(rest.to_string());
            } else {
                let value = args.next().unwrap_or_default();
                out.push(format!("{rest}={value}"));
            }
        } else {
            out.push(arg);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(preprocess_args());
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let kind = match &e {
                Error::DimensionMismatch { .. } | Error::NotSquare { .. } => "dimension",
                Error::NotSymplectic { .. } => "not-symplectic",
                Error::InvalidParameter(_) => "invalid-input",
                Error::DegenerateCrossRatio { .. } => "degenerate",
                _ => "error",
            };
            let payload = json!({ "error": { "kind": kind, "message": e.to_string() } });
            eprintln!("{payload}");
            ExitCode::from(2)
        }
    }
}
