//! Command-line front end for `qmaxent`.
//!
//! [`run`] parses arguments, dispatches to the library, and writes a JSON
//! result (or a one-line JSON error) to the supplied streams. It never
//! panics on bad input; every failure maps to one exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | usage, parse, or validation error |
//! | 3 | infeasible constraints |
//! | 4 | numerical failure |

pub mod document;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qmaxent::{
    closed_form_flow, expectation, flow_to_constraint, integrate_flow, metric_forms,
    metric_vectors, relative_entropy, solve_maxent, solve_prior_tilt, trace_distance,
    von_neumann_entropy, ConstraintSet64, Error, OneForm64, SolverOptions64,
};
use serde::Serialize;
use thiserror::Error as ThisError;

use document::{Mode, OperatorDocument, ProblemDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Invalid(_) => EXIT_INPUT,
            CliError::Library(e) => library_error(e).0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Invalid(_) => "invalid_input",
            CliError::Library(e) => library_error(e).1,
        }
    }
}

/// Exit code and machine-readable kind of a library error.
fn library_error(e: &Error) -> (i32, &'static str) {
    match e {
        Error::NonSquare { .. } => (EXIT_INPUT, "non_square"),
        Error::EmptyOperator => (EXIT_INPUT, "empty_operator"),
        Error::NonFinite { .. } => (EXIT_INPUT, "non_finite"),
        Error::NotHermitian { .. } => (EXIT_INPUT, "not_hermitian"),
        Error::TraceNotOne { .. } => (EXIT_INPUT, "trace_not_one"),
        Error::NotPositive { .. } => (EXIT_INPUT, "not_positive"),
        Error::DimMismatch { .. } => (EXIT_INPUT, "dim_mismatch"),
        Error::SupportViolation { .. } => (EXIT_INPUT, "support_violation"),
        Error::DependentConstraints { .. } => (EXIT_INPUT, "dependent_constraints"),
        Error::NotTraceless { .. } => (EXIT_INPUT, "not_traceless"),
        Error::StepInvalid { .. } => (EXIT_INPUT, "step_invalid"),
        Error::InvalidArgument(_) => (EXIT_INPUT, "invalid_argument"),
        Error::Infeasible { .. } => (EXIT_INFEASIBLE, "infeasible"),
        Error::ConvergenceFailure => (EXIT_NUMERICAL, "convergence_failure"),
        Error::MaxIterExceeded { .. } => (EXIT_NUMERICAL, "max_iter_exceeded"),
        Error::SingularBase { .. } => (EXIT_NUMERICAL, "singular_base"),
        Error::Overflow { .. } => (EXIT_NUMERICAL, "overflow"),
        Error::PositivityLoss { .. } => (EXIT_NUMERICAL, "positivity_loss"),
        Error::DomainError { .. } => (EXIT_NUMERICAL, "domain_error"),
        Error::NonRealResult { .. } => (EXIT_NUMERICAL, "non_real_result"),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qmaxent",
    version,
    about = "Quantum maximum-entropy estimation and entropic flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Suppress the result document on standard output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// MaxEnt estimate from expectation-value constraints.
    Estimate(SolveArgs),
    /// Tilt a prior along one observable to reach its target.
    Tilt(SolveArgs),
    /// Integrate the entropic flow of one observable from the prior.
    Flow(FlowArgs),
    /// Metric between the problem's observables at the prior.
    Metric(ProblemArg),
    /// Von Neumann entropy of a state.
    Entropy(StateArg),
    /// Relative entropy of a state with respect to a prior.
    RelEntropy(RelEntropyArgs),
}

#[derive(Debug, Args)]
struct ProblemArg {
    #[arg(long)]
    problem: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// End of the flow parameter range; when absent the problem's single
    /// target is reached instead.
    #[arg(long, allow_negative_numbers = true)]
    lambda_end: Option<f64>,
    /// Write the sampled trajectory as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct StateArg {
    #[arg(long)]
    state: PathBuf,
}

#[derive(Debug, Args)]
struct RelEntropyArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    prior: PathBuf,
}

#[derive(Serialize)]
struct EstimateResult {
    command: &'static str,
    dim: usize,
    estimate: OperatorDocument,
    multipliers: Vec<f64>,
    lambda0: f64,
    targets: Vec<f64>,
    achieved: Vec<f64>,
    entropy_nats: f64,
    iterations: usize,
    residual: f64,
}

#[derive(Serialize)]
struct TiltResult {
    command: &'static str,
    dim: usize,
    estimate: OperatorDocument,
    lambda: f64,
    target: f64,
    achieved: f64,
    iterations: usize,
    residual: f64,
}

#[derive(Serialize)]
struct FlowResult {
    command: &'static str,
    dim: usize,
    lambda_end: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<f64>,
    step: f64,
    samples: usize,
    final_state: OperatorDocument,
    final_mean: f64,
    max_trace_error: f64,
    closed_form_distance: f64,
}

#[derive(Serialize)]
struct MetricResult {
    command: &'static str,
    dim: usize,
    /// `g(A_i, A_j)` with the observables read as 1-forms.
    forms: Vec<Vec<f64>>,
    /// `g(A_i, A_j)` with the observables read as displacements.
    vectors: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct EntropyResult {
    command: &'static str,
    entropy_nats: f64,
}

#[derive(Serialize)]
struct RelEntropyResult {
    command: &'static str,
    relative_entropy_nats: f64,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    error: &'a str,
    exit_code: i32,
    message: String,
}

/// Runs the tool with `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            return report(&CliError::Usage(first.to_string()), stderr);
        }
    };
    match execute(&cli) {
        Ok(json) => match emit(&cli, &json, stdout) {
            Ok(()) => EXIT_OK,
            Err(e) => report(&e, stderr),
        },
        Err(e) => report(&e, stderr),
    }
}

fn report(e: &CliError, stderr: &mut dyn Write) -> i32 {
    let code = e.exit_code();
    let doc = ErrorDocument {
        error: e.kind(),
        exit_code: code,
        message: e.to_string(),
    };
    let line =
        serde_json::to_string(&doc).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", e.kind()));
    let _ = writeln!(stderr, "{line}");
    code
}

fn emit(cli: &Cli, json: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Some(path) = &cli.output {
        return write_file(path, json);
    }
    if !cli.quiet {
        stdout
            .write_all(json.as_bytes())
            .map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("result documents contain only finite numbers");
    s.push('\n');
    s
}

/// Shortest representation that parses back to the same `f64`.
fn number(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn solver_options(tol: f64, max_iter: usize) -> Result<SolverOptions64, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Invalid(format!(
            "--tol must be positive and finite, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(CliError::Invalid("--max-iter must be at least 1".into()));
    }
    Ok(SolverOptions64 { tol, max_iter })
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Tilt(a) => tilt(a),
        Command::Flow(a) => flow(a),
        Command::Metric(a) => metric(a),
        Command::Entropy(a) => {
            let rho = read_json::<OperatorDocument>(&a.state)?.to_density("state")?;
            Ok(to_json(&EntropyResult {
                command: "entropy",
                entropy_nats: von_neumann_entropy(&rho)?,
            }))
        }
        Command::RelEntropy(a) => {
            let rho = read_json::<OperatorDocument>(&a.state)?.to_density("state")?;
            let prior = read_json::<OperatorDocument>(&a.prior)?.to_density("prior")?;
            Ok(to_json(&RelEntropyResult {
                command: "rel-entropy",
                relative_entropy_nats: relative_entropy(&rho, &prior)?,
            }))
        }
    }
}

fn estimate(a: &SolveArgs) -> Result<String, CliError> {
    let opts = solver_options(a.tol, a.max_iter)?;
    let doc: ProblemDocument = read_json(&a.problem)?;
    doc.expect_mode(&[Mode::Maxent], "estimate")?;
    if doc.prior.is_some() {
        return Err(CliError::Invalid(
            "estimate does not take a prior; use the tilt subcommand".into(),
        ));
    }
    if doc.observables.len() != doc.targets.len() {
        return Err(CliError::Invalid(format!(
            "{} observables but {} targets",
            doc.observables.len(),
            doc.targets.len()
        )));
    }
    let dim = doc.dim()?;
    let cs = ConstraintSet64::new(doc.observables()?, doc.targets.clone(), dim)?;
    let sol = solve_maxent(&cs, opts)?;
    Ok(to_json(&EstimateResult {
        command: "estimate",
        dim,
        estimate: OperatorDocument::from_density(&sol.estimate, None),
        multipliers: sol.multipliers,
        lambda0: sol.lambda0,
        targets: doc.targets,
        achieved: sol.achieved,
        entropy_nats: sol.s_max,
        iterations: sol.iterations,
        residual: sol.residual,
    }))
}

fn single_target(doc: &ProblemDocument, command: &str) -> Result<f64, CliError> {
    match doc.targets.as_slice() {
        [t] => Ok(*t),
        ts => Err(CliError::Invalid(format!(
            "{command} requires exactly one target, found {}",
            ts.len()
        ))),
    }
}

fn tilt(a: &SolveArgs) -> Result<String, CliError> {
    let opts = solver_options(a.tol, a.max_iter)?;
    let doc: ProblemDocument = read_json(&a.problem)?;
    doc.expect_mode(&[Mode::PriorTilt], "tilt")?;
    let obs = doc.single_observable("tilt")?;
    let target = single_target(&doc, "tilt")?;
    let dim = doc.dim()?;
    let prior = doc.prior_or_mixed(dim)?;
    let sol = solve_prior_tilt(&prior, &obs, target, opts)?;
    Ok(to_json(&TiltResult {
        command: "tilt",
        dim,
        estimate: OperatorDocument::from_density(&sol.estimate, None),
        lambda: sol.lambda,
        target,
        achieved: sol.achieved,
        iterations: sol.iterations,
        residual: sol.residual,
    }))
}

fn flow(a: &FlowArgs) -> Result<String, CliError> {
    let doc: ProblemDocument = read_json(&a.problem)?;
    doc.expect_mode(&[Mode::Flow, Mode::PriorTilt], "flow")?;
    let obs = doc.single_observable("flow")?;
    let dim = doc.dim()?;
    let prior = doc.prior_or_mixed(dim)?;
    let (lambda_end, target) = match a.lambda_end {
        Some(l) => (l, None),
        None => {
            let target = single_target(&doc, "flow without --lambda-end")?;
            let opts = solver_options(a.tol, a.max_iter)?;
            (
                flow_to_constraint(&prior, &obs, target, opts)?.0,
                Some(target),
            )
        }
    };
    let exact = closed_form_flow(&prior, &obs, lambda_end)?;
    let traj = integrate_flow(&prior, &obs, lambda_end, a.step)?;
    let last = traj.last();

    let mut csv = String::from("lambda,mean,trace_error\n");
    let mut max_trace_error = 0.0f64;
    for s in &traj.samples {
        let err = (s.state.as_operator().trace() - 1.0).abs();
        max_trace_error = max_trace_error.max(err);
        let _ = writeln!(
            csv,
            "{},{},{}",
            number(s.lambda),
            number(s.mean),
            number(err)
        );
    }
    if let Some(path) = &a.csv {
        write_file(path, &csv)?;
    }
    Ok(to_json(&FlowResult {
        command: "flow",
        dim,
        lambda_end,
        target,
        step: traj.step,
        samples: traj.samples.len(),
        final_state: OperatorDocument::from_density(&last.state, None),
        final_mean: expectation(&last.state, &obs)?,
        max_trace_error,
        closed_form_distance: trace_distance(&last.state, &exact)?,
    }))
}

fn metric(a: &ProblemArg) -> Result<String, CliError> {
    let doc: ProblemDocument = read_json(&a.problem)?;
    doc.expect_mode(&[Mode::Metric], "metric")?;
    let obs = doc.observables()?;
    if obs.is_empty() {
        return Err(CliError::Invalid(
            "metric requires at least one observable".into(),
        ));
    }
    let dim = doc.dim()?;
    let rho = doc.prior_or_mixed(dim)?;
    let mut forms = vec![vec![0.0; obs.len()]; obs.len()];
    let mut vectors = vec![vec![0.0; obs.len()]; obs.len()];
    for (i, x) in obs.iter().enumerate() {
        for (j, y) in obs.iter().enumerate() {
            forms[i][j] =
                metric_forms(&rho, &OneForm64::new(x.clone()), &OneForm64::new(y.clone()))?;
            vectors[i][j] = metric_vectors(&rho, x, y)?;
        }
    }
    Ok(to_json(&MetricResult {
        command: "metric",
        dim,
        forms,
        vectors,
    }))
}
