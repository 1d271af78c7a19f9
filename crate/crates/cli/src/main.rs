//! Command line front end: loads matrices in the shared JSON format, runs the
//! library, prints one JSON report per invocation on standard output.
//!
//! Exit codes: 0 on success, 1 on input or parse errors (diagnostic on
//! standard error), 2 on numeric failures (partial report on standard
//! output).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qkrein::io::{matrix_json, read_matrix};
use qkrein::krein::{self, SteinProblem};
use qkrein::norms;
use qkrein::subspace::{
    classify_subspace, is_ortho_complemented, kansas_check, orthogonal_companion, SubspaceClass,
};
use qkrein::{Error, InnerProductSpace, QMatrix, Subspace};

#[derive(Parser)]
#[command(name = "qkrein", version, about = "Quaternionic indefinite inner product toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigendecomposition of a Hermitian quaternionic matrix
    Eig {
        /// Matrix file (JSON)
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Fundamental decomposition of a Gram matrix
    Decompose {
        /// Gram matrix file (JSON)
        #[arg(long)]
        gram: PathBuf,
    },
    /// Classify a subspace under the indefinite form
    Classify {
        #[arg(long)]
        gram: PathBuf,
        /// Subspace basis file; columns span the subspace
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Orthogonal companion of a subspace
    Companion {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Ortho-complementation test with certificates
    Orthocheck {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Self-polar norm iteration on a nondegenerate Gram matrix
    Selfpolar {
        #[arg(long)]
        gram: PathBuf,
        /// Relative decrement at which the iteration stops
        #[arg(long, default_value_t = norms::SELF_POLAR_TOL)]
        tol: f64,
        /// Iteration budget
        #[arg(long, default_value_t = norms::SELF_POLAR_MAX_ITER)]
        max_iter: usize,
    },
    /// Solve a Stein problem and verify the positive-subspace scaffold
    Stein {
        /// State map A (x by x)
        #[arg(long)]
        a: PathBuf,
        /// Output map C (y by x)
        #[arg(long)]
        c: PathBuf,
        /// Defect map N (u by x)
        #[arg(long)]
        n: PathBuf,
        /// Series truncation tolerance
        #[arg(long, default_value_t = krein::STEIN_TOL)]
        tol: f64,
        /// Series term budget
        #[arg(long, default_value_t = krein::STEIN_MAX_TERMS)]
        max_terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print_report(&report);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            if let Some(partial) = failure.partial {
                print_report(&partial);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn print_report(report: &Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serialization"));
}

struct Failure {
    code: u8,
    message: String,
    partial: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into(), partial: None }
    }

    fn numeric(message: impl Into<String>, partial: Option<Value>) -> Failure {
        Failure { code: 2, message: message.into(), partial }
    }
}

/// Library errors at command boundaries: contract violations on the inputs
/// are input errors, everything else is a numeric failure.
fn lift(command: &str, err: Error) -> Failure {
    match err {
        Error::NotHermitian { .. }
        | Error::NotSquare { .. }
        | Error::DimensionMismatch { .. } => Failure::input(err.to_string()),
        Error::SelfPolarStalled { iterations, ref history } => {
            let partial = json!({
                "command": command,
                "error": err.to_string(),
                "iterations": iterations,
                "history": history,
            });
            Failure::numeric(err.to_string(), Some(partial))
        }
        Error::IndefiniteMetric { ref eigenvalues } => {
            let partial = json!({
                "command": command,
                "error": err.to_string(),
                "stein_solution_spectrum": eigenvalues,
            });
            Failure::numeric(err.to_string(), Some(partial))
        }
        other => {
            let partial = json!({ "command": command, "error": other.to_string() });
            Failure::numeric(other.to_string(), Some(partial))
        }
    }
}

fn load_matrix(path: &Path) -> Result<QMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    read_matrix(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_space(command: &str, path: &Path) -> Result<InnerProductSpace, Failure> {
    let gram = load_matrix(path)?;
    if !gram.is_hermitian() {
        return Err(Failure::input(format!(
            "{}: Gram matrix must be Hermitian (residual {:e})",
            path.display(),
            gram.hermitian_residual()
        )));
    }
    InnerProductSpace::new(gram).map_err(|e| lift(command, e))
}

fn load_subspace(space: &InnerProductSpace, path: &Path) -> Result<Subspace, Failure> {
    let basis = load_matrix(path)?;
    if basis.rows() != space.dim() {
        return Err(Failure::input(format!(
            "{}: subspace lives in dimension {}, the space has dimension {}",
            path.display(),
            basis.rows(),
            space.dim()
        )));
    }
    Ok(Subspace::span(&basis))
}

fn class_name(tag: SubspaceClass) -> &'static str {
    match tag {
        SubspaceClass::StrictlyPositive => "strictly-positive",
        SubspaceClass::Positive => "positive",
        SubspaceClass::Neutral => "neutral",
        SubspaceClass::Negative => "negative",
        SubspaceClass::StrictlyNegative => "strictly-negative",
        SubspaceClass::Indefinite => "indefinite",
    }
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Eig { matrix } => {
            let m = load_matrix(&matrix)?;
            let eig = m.hermitian_eig().map_err(|e| lift("eig", e))?;
            Ok(json!({
                "command": "eig",
                "inputs": { "matrix": matrix.display().to_string() },
                "lambdas": eig.lambdas,
                "vectors": matrix_json(&eig.vectors),
                "tolerances": {
                    "hermitian_rel": qkrein::matrix::HERMITIAN_REL,
                    "jacobi_off_rel": qkrein::cmatrix::JACOBI_OFF_REL,
                },
            }))
        }
        Command::Decompose { gram } => {
            let space = load_space("decompose", &gram)?;
            let d = space.fundamental_decomposition();
            Ok(json!({
                "command": "decompose",
                "inputs": { "gram": gram.display().to_string() },
                "signature": [d.signature.plus, d.signature.minus, d.signature.zero],
                "lambdas": d.lambdas,
                "plus": matrix_json(d.plus.basis()),
                "minus": matrix_json(d.minus.basis()),
                "neutral": matrix_json(d.neutral.basis()),
                "symmetry": matrix_json(&d.symmetry),
                "degenerate": space.is_degenerate(),
                "tolerances": { "degeneracy_rel": qkrein::space::DEGENERACY_REL },
            }))
        }
        Command::Classify { gram, subspace } => {
            let space = load_space("classify", &gram)?;
            let sub = load_subspace(&space, &subspace)?;
            let report = classify_subspace(&space, &sub).map_err(|e| lift("classify", e))?;
            Ok(json!({
                "command": "classify",
                "inputs": {
                    "gram": gram.display().to_string(),
                    "subspace": subspace.display().to_string(),
                },
                "dimension": sub.dim(),
                "tag": class_name(report.tag),
                "degenerate": report.degenerate,
                "uniform_constant": report.uniform_constant,
                "tolerances": { "degeneracy_rel": qkrein::space::DEGENERACY_REL },
            }))
        }
        Command::Companion { gram, subspace } => {
            let space = load_space("companion", &gram)?;
            let sub = load_subspace(&space, &subspace)?;
            let comp = orthogonal_companion(&space, &sub).map_err(|e| lift("companion", e))?;
            Ok(json!({
                "command": "companion",
                "inputs": {
                    "gram": gram.display().to_string(),
                    "subspace": subspace.display().to_string(),
                },
                "dimension": comp.dim(),
                "basis": matrix_json(comp.basis()),
            }))
        }
        Command::Orthocheck { gram, subspace } => {
            let space = load_space("orthocheck", &gram)?;
            let sub = load_subspace(&space, &subspace)?;
            let cert = is_ortho_complemented(&space, &sub).map_err(|e| lift("orthocheck", e))?;
            let kansas = kansas_check(&space, &sub).map_err(|e| lift("orthocheck", e))?;
            Ok(json!({
                "command": "orthocheck",
                "inputs": {
                    "gram": gram.display().to_string(),
                    "subspace": subspace.display().to_string(),
                },
                "ortho_complemented": cert.complemented,
                "span_rank": cert.span_rank,
                "ambient_dim": cert.ambient_dim,
                "gram_nonsingular": cert.gram_nonsingular,
                "kansas": {
                    "isotropic_contained": kansas.isotropic_contained,
                    "quotient_complemented": kansas.quotient_complemented,
                    "conjunction": kansas.conjunction(),
                },
            }))
        }
        Command::Selfpolar { gram, tol, max_iter } => {
            if tol <= 0.0 {
                return Err(Failure::input("--tol must be positive"));
            }
            let space = load_space("selfpolar", &gram)?;
            let result =
                norms::self_polar(&space, tol, max_iter).map_err(|e| lift("selfpolar", e))?;
            Ok(json!({
                "command": "selfpolar",
                "inputs": { "gram": gram.display().to_string() },
                "hinf": matrix_json(result.hinf.matrix()),
                "iterations": result.iterations,
                "history": result.history,
                "tolerances": { "tol": tol, "max_iter": max_iter },
            }))
        }
        Command::Stein { a, c, n, tol, max_terms } => {
            if tol <= 0.0 {
                return Err(Failure::input("--tol must be positive"));
            }
            let a_mat = load_matrix(&a)?;
            let c_mat = load_matrix(&c)?;
            let n_mat = load_matrix(&n)?;
            let problem =
                SteinProblem::new(a_mat, c_mat, n_mat).map_err(|e| lift("stein", e))?;
            let series =
                krein::stein_solve_series(&problem, tol, max_terms).map_err(|e| lift("stein", e))?;
            let direct = krein::stein_solve_direct(&problem).map_err(|e| lift("stein", e))?;
            let solver_gap = series.sub(&direct).frobenius_norm();
            let scaffold = krein::build_scaffold(&problem).map_err(|e| lift("stein", e))?;
            let report = krein::verify_sofsof(&scaffold).map_err(|e| lift("stein", e))?;
            Ok(json!({
                "command": "stein",
                "inputs": {
                    "a": a.display().to_string(),
                    "c": c.display().to_string(),
                    "n": n.display().to_string(),
                },
                "p": matrix_json(&scaffold.p),
                "jtilde": matrix_json(&scaffold.jtilde),
                "k0_basis": matrix_json(scaffold.k0.basis()),
                "solver_gap": solver_gap,
                "report": {
                    "stein_identity_residual": report.stein_identity_residual,
                    "stein_identity_ok": report.stein_identity_ok,
                    "tag": class_name(report.classification.tag),
                    "uniform_constant": report.classification.uniform_constant,
                    "uniformly_positive": report.uniformly_positive,
                    "ortho_complemented": report.ortho.complemented,
                    "span_rank": report.ortho.span_rank,
                    "companion_dim": report.companion_dim,
                    "companion_spectrum": report.companion_spectrum,
                    "companion_is_krein": report.companion_is_krein,
                    "companion_pontryagin_index": report.companion_pontryagin_index,
                    "all_passed": report.all_passed,
                },
                "tolerances": {
                    "tol": tol,
                    "max_terms": max_terms,
                    "stein_identity_rel": krein::STEIN_IDENTITY_REL,
                    "stability_margin": krein::STABILITY_MARGIN,
                },
            }))
        }
    }
}
