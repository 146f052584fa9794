//! Command-line front end: reads an ARMA model from a JSON file, runs the
//! requested computation, and emits JSON on stdout (all floats printed
//! with 17 significant digits so they re-parse bit-exactly).
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 4 singular verdict under `--fail-on-singular`.

use armafisher::bezout::{bezout_matrix, kernel_basis, KernelBasis};
use armafisher::fisher::{
    fisher_information, identifiability_report, ArmaModel, IdentReport, Verdict,
};
use armafisher::mc_oracle::{simulate_score_covariance, SimConfig};
use armafisher::poly::Polynomial;
use armafisher::statespace::{build_score_system, transformed_pair};
use armafisher::stein::{
    e_p_vector, outer, solve_stein, solve_stein_kron, stein_quartet, DEFAULT_STEIN_TOL,
    MAX_KRON_DIM,
};
use armafisher::structmat::{det_lu, sylvester};
use armafisher::Error as CoreError;
use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "armafisher",
    about = "Fisher information and identifiability diagnostics for stationary ARMA models",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON model file: {"ar": [a1,..,ap], "ma": [c1,..,cq], "sigma2": 1.0}
    #[arg(long)]
    model: PathBuf,
    /// Relative tolerance for rank decisions and root matching
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Asymptotic Fisher information matrix and its rank
    Fisher {
        #[command(flatten)]
        common: Common,
        /// Cross-check the Stein solve against the Kronecker oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Bezout matrix of the MA and AR polynomials (requires p = q)
    Bezout {
        #[command(flatten)]
        common: Common,
    },
    /// Sylvester resultant matrix and its determinant
    Resultant {
        #[command(flatten)]
        common: Common,
    },
    /// Kernel basis of the Bezout matrix (requires p = q)
    Kernel {
        #[command(flatten)]
        common: Common,
    },
    /// Stein solution matrices: I and P always, H and Q when p = q
    Stein {
        #[command(flatten)]
        common: Common,
        /// Cross-check every Stein solve against the Kronecker oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Full identifiability report
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// Cross-check the Fisher Stein solve against the Kronecker oracle
        #[arg(long)]
        oracle: bool,
        /// Exit with code 4 when the verdict is singular
        #[arg(long)]
        fail_on_singular: bool,
    },
    /// Monte Carlo estimate of the Fisher matrix from the score recursion
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Retained steps per replication
        #[arg(long, default_value_t = 100_000)]
        horizon: usize,
        #[arg(long, default_value_t = 2000)]
        burn_in: usize,
        #[arg(long, default_value_t = 1)]
        replications: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Numerical(String),
    SingularVerdict,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    ar: Vec<f64>,
    ma: Vec<f64>,
    sigma2: Option<f64>,
}

fn load_model(path: &PathBuf) -> CliResult<ArmaModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read model file {path:?}: {e}")))?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("model file {path:?} is not valid: {e}")))?;
    let ar = Polynomial::from_tail(&file.ar);
    let ma = Polynomial::from_tail(&file.ma);
    Ok(ArmaModel::new(ar, ma, file.sigma2.unwrap_or(1.0))?)
}

/// serde_json formatter printing every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn emit(value: &Value) -> CliResult<()> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let mut ser = serde_json::Serializer::with_formatter(&mut lock, Sig17);
    value
        .serialize(&mut ser)
        .and_then(|_| writeln!(lock).map_err(serde_json::Error::io))
        .map_err(|e| CliError::Numerical(format!("cannot write output: {e}")))
}

fn mat_json(m: &DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
            .collect(),
    )
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn roots_json(roots: &[(Complex64, usize)]) -> Value {
    Value::Array(
        roots
            .iter()
            .map(|&(z, m)| json!({"re": z.re, "im": z.im, "multiplicity": m}))
            .collect(),
    )
}

fn kernel_json(kb: &KernelBasis) -> Value {
    Value::Array(
        kb.vectors
            .iter()
            .map(|v| Value::Array(v.iter().map(|&z| complex_json(z)).collect()))
            .collect(),
    )
}

fn rank_with_tol(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    if sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * sv[0]).count()
}

/// Cross-checks a doubling solve against the Kronecker oracle.
fn oracle_check(name: &str, a: &DMatrix<f64>, q: &DMatrix<f64>, x: &DMatrix<f64>) -> CliResult<()> {
    if a.nrows() > MAX_KRON_DIM {
        return Err(CliError::Validation(format!(
            "--oracle requires state dimension ≤ {MAX_KRON_DIM}, got {}",
            a.nrows()
        )));
    }
    let kron = solve_stein_kron(a, q)?;
    let err = (x - &kron.x).norm() / kron.x.norm().max(1.0);
    if err > 1e-10 {
        return Err(CliError::Numerical(format!(
            "oracle disagreement on {name}: relative error {err:.3e}"
        )));
    }
    eprintln!("oracle check {name}: agree to {err:.3e}");
    Ok(())
}

fn require_equal_degrees(model: &ArmaModel) -> CliResult<(usize, usize)> {
    let (p, q) = (model.p(), model.q());
    if p != q {
        return Err(CliError::Validation(format!(
            "equal degrees required (p=q), got p={p}, q={q}"
        )));
    }
    Ok((p, q))
}

fn run_fisher(common: &Common, oracle: bool) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let fisher = fisher_information(&model)?;
    if oracle {
        let sys = build_score_system(model.ar(), model.ma())?;
        oracle_check("I", &sys.f, &outer(&sys.b_in), &fisher)?;
    }
    emit(&json!({
        "fisher": mat_json(&fisher),
        "rank": rank_with_tol(&fisher, common.tol),
    }))
}

fn run_bezout(common: &Common) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let (p, _) = require_equal_degrees(&model)?;
    if p == 0 {
        return Err(CliError::Validation(
            "degree must be at least 1 for the Bezout matrix".into(),
        ));
    }
    let bz = bezout_matrix(model.ma(), model.ar())?;
    emit(&json!({
        "n": bz.n,
        "bezout": mat_json(&bz.entries),
        "rank": rank_with_tol(&bz.entries, common.tol),
    }))
}

fn run_resultant(common: &Common) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let r = sylvester(model.ma(), model.ar())?;
    let (det, singular) = det_lu(&r);
    emit(&json!({
        "resultant": mat_json(&r),
        "det": det,
        "singular": singular,
    }))
}

fn run_kernel(common: &Common) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let (p, _) = require_equal_degrees(&model)?;
    if p == 0 {
        return Err(CliError::Validation(
            "degree must be at least 1 for the Bezout kernel".into(),
        ));
    }
    let kb = kernel_basis(model.ma(), model.ar(), common.tol)?;
    emit(&json!({
        "commonRoots": roots_json(&kb.common_roots),
        "vectors": kernel_json(&kb),
    }))
}

fn run_stein(common: &Common, oracle: bool) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let sys = build_score_system(model.ar(), model.ma())?;
    let m = model.p() + model.q();
    let e = DVector::from_fn(m, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let sol_i = solve_stein(&sys.f, &outer(&sys.b_in), DEFAULT_STEIN_TOL)?;
    let sol_p = solve_stein(&sys.g, &outer(&e), DEFAULT_STEIN_TOL)?;
    if oracle {
        oracle_check("I", &sys.f, &outer(&sys.b_in), &sol_i.x)?;
        oracle_check("P", &sys.g, &outer(&e), &sol_p.x)?;
    }

    let mut out = Map::new();
    let mut residuals = Map::new();
    out.insert("i".into(), mat_json(&sol_i.x));
    out.insert("p".into(), mat_json(&sol_p.x));
    residuals.insert("i".into(), json!(sol_i.residual));
    residuals.insert("p".into(), json!(sol_p.residual));

    if model.p() == model.q() && model.p() >= 1 {
        let quartet = stein_quartet(model.ar(), model.ma())?;
        if oracle {
            let tp = transformed_pair(model.ar(), model.ma())?;
            let ep = outer(&e_p_vector(model.p()));
            oracle_check("H", &tp.g_m, &ep, &quartet.h)?;
            oracle_check("Q", &tp.f_n, &ep, &quartet.q)?;
        }
        out.insert("h".into(), mat_json(&quartet.h));
        out.insert("q".into(), mat_json(&quartet.q));
    } else {
        eprintln!("H and Q omitted: they require equal degrees (p=q)");
    }
    out.insert("residuals".into(), Value::Object(residuals));
    emit(&Value::Object(out))
}

fn report_json(report: &IdentReport) -> Value {
    let mut out = Map::new();
    out.insert("fisher".into(), mat_json(&report.fisher));
    out.insert("rank".into(), json!(report.rank));
    out.insert("resultantDet".into(), json!(report.resultant_det));
    if let Some(br) = report.bezout_rank {
        out.insert("bezoutRank".into(), json!(br));
    }
    out.insert("commonRoots".into(), roots_json(&report.common_roots));
    if let Some(kb) = &report.kernel_basis {
        out.insert("kernelBasis".into(), kernel_json(kb));
    }
    out.insert(
        "verdict".into(),
        json!(match report.verdict {
            Verdict::Identifiable => "identifiable",
            Verdict::Singular => "singular",
        }),
    );
    out.insert("borderline".into(), json!(report.borderline));
    out.insert(
        "singularValues".into(),
        Value::Array(report.singular_values.iter().map(|&s| json!(s)).collect()),
    );
    out.insert("svGap".into(), json!(report.sv_gap));
    Value::Object(out)
}

fn run_diagnose(common: &Common, oracle: bool, fail_on_singular: bool) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let report = identifiability_report(&model, common.tol)?;
    if oracle {
        let sys = build_score_system(model.ar(), model.ma())?;
        oracle_check("I", &sys.f, &outer(&sys.b_in), &report.fisher)?;
    }
    if report.borderline {
        eprintln!("borderline verdict: rank test and root test disagree; reporting singular");
    }
    emit(&report_json(&report))?;
    if fail_on_singular && report.verdict == Verdict::Singular {
        return Err(CliError::SingularVerdict);
    }
    Ok(())
}

fn run_simulate(
    common: &Common,
    seed: u64,
    horizon: usize,
    burn_in: usize,
    replications: usize,
) -> CliResult<()> {
    let model = load_model(&common.model)?;
    let cfg = SimConfig {
        model,
        horizon,
        burn_in,
        seed,
        replications,
    };
    eprintln!(
        "simulating {replications} replication(s) of {horizon} steps (burn-in {burn_in}, seed {seed})"
    );
    let info = simulate_score_covariance(&cfg)?;
    emit(&json!({
        "mean": mat_json(&info.mean),
        "stderr": mat_json(&info.stderr),
        "samples": info.samples,
        "seed": seed,
        "horizon": horizon,
        "burnIn": burn_in,
        "replications": replications,
    }))
}

fn dispatch(cmd: &Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Fisher { common, oracle } => run_fisher(common, *oracle),
        Cmd::Bezout { common } => run_bezout(common),
        Cmd::Resultant { common } => run_resultant(common),
        Cmd::Kernel { common } => run_kernel(common),
        Cmd::Stein { common, oracle } => run_stein(common, *oracle),
        Cmd::Diagnose {
            common,
            oracle,
            fail_on_singular,
        } => run_diagnose(common, *oracle, *fail_on_singular),
        Cmd::Simulate {
            common,
            seed,
            horizon,
            burn_in,
            replications,
        } => run_simulate(common, *seed, *horizon, *burn_in, *replications),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::SingularVerdict) => {
            eprintln!("model is singular (--fail-on-singular)");
            ExitCode::from(4)
        }
    }
}
