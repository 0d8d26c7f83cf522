//! Command-line front end.
//!
//! Every output file starts with the resolved configuration as `#` comment
//! lines, and reports go to stdout as `key=value` lines. Failures print a
//! single `error: <code>: <detail>` line to stderr and exit with
//!
//! | code               | exit |
//! |--------------------|------|
//! | `usage`            | 2    |
//! | `io`, `parse`, `numeric` | 1 |
//! | `genericity`       | 3    |
//! | `zero-probability` | 4    |

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fitting::{self, FitError, FitProblem};
use crate::hamiltonian::{EmbeddingMode, ModelError, ReferenceState, ResonanceSystem};
use crate::numerics::text::{fmt_f64, parse_matrix, parse_vector, write_vector, FormatError};
use crate::numerics::{hermitian_eig, CVector};
use crate::prony::{self, PronyError, PronyParams, SignalSeries};
use crate::resonance::{
    algorithm2_iterate, collapse_algorithm1, sampled_result, sweep_algorithm1, sweep_algorithm2, write_csv,
    Algorithm2Params, MeasurementMode, ResonanceError, SweepPlan,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("genericity condition violated, margin={margin:e}")]
    Genericity { margin: f64 },
    #[error("probe decay probability {p:e} too small to condition on")]
    ZeroProbability { p: f64 },
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Genericity { .. } => "genericity",
            CliError::ZeroProbability { .. } => "zero-probability",
            CliError::Numeric(_) => "numeric",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Genericity { .. } => 3,
            CliError::ZeroProbability { .. } => 4,
            _ => 1,
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        match e {
            FitError::GenericityViolated { margin } => CliError::Genericity { margin },
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Fit(f) => f.into(),
            ModelError::CouplingOutOfRange { .. } | ModelError::NonFinite { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ResonanceError> for CliError {
    fn from(e: ResonanceError) -> Self {
        match e {
            ResonanceError::Model(m) => m.into(),
            ResonanceError::ZeroProbability { p } => CliError::ZeroProbability { p },
            ResonanceError::InvalidPlan(msg) => CliError::Usage(msg),
            ResonanceError::InvalidTime(t) => CliError::Usage(format!("invalid evolution time {t}")),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<PronyError> for CliError {
    fn from(e: PronyError) -> Self {
        match e {
            PronyError::Format(f) => CliError::Parse(f.to_string()),
            PronyError::Fit(f) => f.into(),
            PronyError::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "tls-resonance",
    version,
    about = "Total least squares fitting and probe-qubit resonance simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a damped-exponential signal file.
    PronyGen(PronyGenArgs),
    /// Build the Hankel prediction system from a signal file.
    LpBuild(LpBuildArgs),
    /// Solve A x ~ b by LS or TLS.
    Fit(FitArgs),
    /// Sweep the probe frequency and record decay probabilities.
    Sweep(SweepArgs),
    /// Run the state preparation step and report its fidelity.
    Prepare(PrepareArgs),
    /// Characteristic roots of a predictor vector.
    Roots(RootsArgs),
    /// Eigenvalues of D = C^dagger C.
    Eig(ProblemArgs),
}

#[derive(Debug, Args)]
struct PronyGenArgs {
    #[arg(long, conflicts_with = "params", required_unless_present = "params")]
    preset: Option<String>,
    #[arg(long)]
    params: Option<PathBuf>,
    /// Number of samples K.
    #[arg(long, default_value_t = 267)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct LpBuildArgs {
    #[arg(long)]
    signal: PathBuf,
    #[arg(long = "N")]
    n: usize,
    #[arg(long = "M")]
    m: usize,
    #[arg(long = "out-A")]
    out_a: PathBuf,
    #[arg(long = "out-b")]
    out_b: PathBuf,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "b")]
    b: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Ls,
    Tls,
    TlsClosed,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Embedding {
    Exact,
    Qubit,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Deterministic,
    Sampled,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    algorithm: u8,
    #[arg(long, allow_hyphen_values = true)]
    epsilon0: f64,
    #[arg(long)]
    coupling: f64,
    /// Evolution time; algorithm 2 defaults to pi / (2 c).
    #[arg(long)]
    time: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    embedding: Embedding,
    /// `b`, `ls`, `ls-augmented` or `file:<path>`.
    #[arg(long = "ref")]
    reference: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long = "omega-min", allow_hyphen_values = true)]
    omega_min: f64,
    #[arg(long = "omega-max", allow_hyphen_values = true)]
    omega_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value = "deterministic")]
    mode: Mode,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct PrepareArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Probe frequency; defaults to the ground-state resonance.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Number of consecutive successful measurements (algorithm 2).
    #[arg(long, default_value_t = 1)]
    iterations: usize,
}

#[derive(Debug, Args)]
struct RootsArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long = "T")]
    t: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_err(path: &Path, e: FormatError) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

fn load_problem(args: &ProblemArgs) -> Result<FitProblem> {
    let a = parse_matrix(&read(&args.a)?).map_err(|e| parse_err(&args.a, e))?;
    let b = parse_vector(&read(&args.b)?).map_err(|e| parse_err(&args.b, e))?;
    FitProblem::new(a, b).map_err(|e| CliError::Usage(e.to_string()))
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

/// `key=value` lines echoed as file comments.
struct Config(Vec<(String, String)>);

impl Config {
    fn new(command: &str) -> Self {
        Self(vec![("command".into(), command.into())])
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    fn comments(&self) -> Vec<String> {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect()
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Parses arguments and runs one subcommand, writing reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return Ok(());
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    let mut report = Vec::new();
    match cli.command {
        Command::PronyGen(a) => prony_gen(a, &mut report)?,
        Command::LpBuild(a) => lp_build(a, &mut report)?,
        Command::Fit(a) => fit(a, &mut report)?,
        Command::Sweep(a) => sweep(a, &mut report)?,
        Command::Prepare(a) => prepare(a, &mut report)?,
        Command::Roots(a) => roots(a, &mut report)?,
        Command::Eig(a) => eig(a, &mut report)?,
    }
    for line in report {
        writeln!(out, "{line}").map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    }
    Ok(())
}

/// Process entry point: returns the exit code.
pub fn main() -> i32 {
    let mut stdout = std::io::stdout();
    match run(std::env::args_os(), &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            let detail = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {detail}", e.code());
            e.exit_code()
        }
    }
}

fn kv(report: &mut Vec<String>, key: &str, value: impl std::fmt::Display) {
    report.push(format!("{key}={value}"));
}

fn prony_gen(a: PronyGenArgs, report: &mut Vec<String>) -> Result<()> {
    let mut cfg = Config::new("prony-gen");
    let params = match (&a.preset, &a.params) {
        (Some(name), _) => {
            cfg.set("preset", name);
            PronyParams::preset(name).ok_or_else(|| CliError::Usage(format!("unknown preset {name:?}")))?
        }
        (None, Some(path)) => {
            cfg.set("params", path_str(path));
            PronyParams::parse(&read(path)?)?
        }
        (None, None) => return Err(CliError::Usage("one of --preset or --params is required".into())),
    };
    if a.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    cfg.set("count", a.count)
        .set("T", fmt_f64(params.t))
        .set("modes", params.p());
    let s = prony::gen_signal(&params, a.count);
    write(&a.out, &s.write(&cfg.comments()))?;
    kv(report, "count", a.count);
    kv(report, "s0_re", fmt_f64(s.samples[0].re));
    kv(report, "s0_im", fmt_f64(s.samples[0].im));
    kv(report, "max_imag", fmt_f64(s.max_imag()));
    Ok(())
}

fn lp_build(a: LpBuildArgs, report: &mut Vec<String>) -> Result<()> {
    let s = SignalSeries::parse(&read(&a.signal)?).map_err(|e| match e {
        PronyError::Format(f) => parse_err(&a.signal, f),
        other => other.into(),
    })?;
    let p = prony::build_lp_system(&s, a.n, a.m)?;
    let mut cfg = Config::new("lp-build");
    cfg.set("signal", path_str(&a.signal)).set("N", a.n).set("M", a.m);
    write(&a.out_a, &crate::numerics::text::write_matrix(p.a(), &cfg.comments()))?;
    write(&a.out_b, &write_vector(p.b(), &cfg.comments()))?;
    kv(report, "rows", p.rows());
    kv(report, "cols", p.unknowns());
    Ok(())
}

fn fit(a: FitArgs, report: &mut Vec<String>) -> Result<()> {
    let p = load_problem(&a.problem)?;
    let mut cfg = Config::new("fit");
    cfg.set("A", path_str(&a.problem.a)).set("b", path_str(&a.problem.b));
    let (x, tls) = match a.method {
        Method::Ls => {
            cfg.set("method", "ls");
            (fitting::ls_solve(&p)?.x, fitting::tls_solve(&p).ok())
        }
        Method::Tls => {
            cfg.set("method", "tls");
            let sol = fitting::tls_solve(&p)?;
            (sol.x.clone(), Some(sol))
        }
        Method::TlsClosed => {
            cfg.set("method", "tls-closed");
            let sol = fitting::tls_solve(&p)?;
            (fitting::tls_closed_form(&p, sol.sigma_min)?, Some(sol))
        }
    };
    write(&a.out, &write_vector(&x, &cfg.comments()))?;
    if let Some(sol) = &tls {
        let bound = fitting::ls_tls_bound(&p)?;
        kv(report, "sigma_min", fmt_f64(sol.sigma_min));
        kv(report, "sigma_min_sq", fmt_f64(sol.sigma_min * sol.sigma_min));
        kv(report, "genericity_margin", fmt_f64(sol.genericity_margin));
        kv(report, "bound_lhs", fmt_f64(bound.lhs));
        kv(report, "bound_rhs", fmt_f64(bound.rhs));
        kv(
            report,
            "identity_residual",
            fmt_f64(fitting::ls_tls_identity_residual(&p)?),
        );
    }
    let residual = p.a().mul_vec(&x).sub(p.b()).norm();
    kv(report, "residual_norm", fmt_f64(residual));
    kv(report, "fit_quality", fmt_f64(fitting::fit_quality(&p, &x)?));
    Ok(())
}

struct Simulation {
    system: ResonanceSystem,
    reference: CVector,
    time: f64,
    cfg: Config,
}

fn setup(sim: &SimArgs, command: &str) -> Result<Simulation> {
    let epsilon0 = finite("epsilon0", sim.epsilon0)?;
    let coupling = finite("coupling", sim.coupling)?;
    let p = load_problem(&sim.problem)?;
    let mode = match sim.embedding {
        Embedding::Exact => EmbeddingMode::Exact,
        Embedding::Qubit => EmbeddingMode::Qubit,
    };
    let system = ResonanceSystem::new(p, mode)?;
    let default_ref = if sim.algorithm == 1 { "b" } else { "ls" };
    let ref_name = sim.reference.clone().unwrap_or_else(|| default_ref.into());
    let which = match ref_name.as_str() {
        "b" => ReferenceState::B,
        "ls" => ReferenceState::Ls,
        "ls-augmented" => ReferenceState::LsAugmented,
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let path = Path::new(path);
                ReferenceState::Custom(parse_vector(&read(path)?).map_err(|e| parse_err(path, e))?)
            }
            None => return Err(CliError::Usage(format!("unknown --ref {other:?}"))),
        },
    };
    let reference = system.reference(&which)?;
    let time = match (sim.time, sim.algorithm) {
        (Some(t), _) => finite("time", t)?,
        (None, 1) => return Err(CliError::Usage("--time is required for algorithm 1".into())),
        (None, _) => {
            if coupling <= 0.0 {
                return Err(CliError::Usage(
                    "--coupling must be positive to derive tau = pi/(2c)".into(),
                ));
            }
            PI / (2.0 * coupling)
        }
    };
    let mut cfg = Config::new(command);
    cfg.set("algorithm", sim.algorithm)
        .set("A", path_str(&sim.problem.a))
        .set("b", path_str(&sim.problem.b))
        .set("epsilon0", fmt_f64(epsilon0))
        .set("coupling", fmt_f64(coupling))
        .set("time", fmt_f64(time))
        .set("embedding", format!("{:?}", sim.embedding).to_lowercase())
        .set("ref", &ref_name)
        .set("register_dim", system.register_dim());
    Ok(Simulation {
        system,
        reference,
        time,
        cfg,
    })
}

fn sweep(a: SweepArgs, report: &mut Vec<String>) -> Result<()> {
    let Simulation {
        system,
        reference,
        time,
        mut cfg,
    } = setup(&a.sim, "sweep")?;
    let plan = SweepPlan::new(
        finite("omega-min", a.omega_min)?,
        finite("omega-max", a.omega_max)?,
        a.points,
        a.sim.epsilon0,
        a.sim.coupling,
        time,
    )?;
    let measurement = match a.mode {
        Mode::Deterministic => MeasurementMode::Deterministic,
        Mode::Sampled => {
            if a.shots == 0 {
                return Err(CliError::Usage("--shots must be at least 1".into()));
            }
            MeasurementMode::Sampled {
                shots: a.shots,
                seed: a.seed,
            }
        }
    };
    cfg.set("omega_min", fmt_f64(plan.omega_min))
        .set("omega_max", fmt_f64(plan.omega_max))
        .set("points", plan.points)
        .set("delta", fmt_f64(plan.delta()));
    let exact = if a.sim.algorithm == 1 {
        sweep_algorithm1(&system, &plan, &reference)?
    } else {
        sweep_algorithm2(&system, &plan, &reference)?
    };
    let result = match measurement {
        MeasurementMode::Deterministic => {
            cfg.set("mode", "deterministic");
            exact
        }
        MeasurementMode::Sampled { shots, seed } => {
            cfg.set("mode", "sampled").set("shots", shots).set("seed", seed);
            sampled_result(&exact, shots, seed)
        }
    };
    write(&a.sim.out, &write_csv(&result, &cfg.comments()))?;
    kv(report, "points", plan.points);
    kv(report, "delta", fmt_f64(plan.delta()));
    kv(report, "time", fmt_f64(time));
    kv(report, "max_p_decay", fmt_f64(result.max_p()));
    kv(report, "peaks", result.peaks.len());
    kv(report, "lambda_min", fmt_f64(system.lambda_min()));
    if let Some(d) = result.dominant() {
        kv(report, "dominant_omega", fmt_f64(d.omega));
        kv(report, "dominant_lambda", fmt_f64(d.lambda));
    }
    Ok(())
}

fn prepare(a: PrepareArgs, report: &mut Vec<String>) -> Result<()> {
    let Simulation {
        system,
        reference,
        time,
        mut cfg,
    } = setup(&a.sim, "prepare")?;
    let epsilon0 = a.sim.epsilon0;
    let omega = match a.omega {
        Some(w) => finite("omega", w)?,
        None => system.lambda_min() - epsilon0,
    };
    cfg.set("omega", fmt_f64(omega));
    let (state, fidelity, success) = if a.sim.algorithm == 1 {
        let out = collapse_algorithm1(&system, omega, epsilon0, a.sim.coupling, time, &reference)?;
        (out.register, out.fidelity, out.p_success)
    } else {
        if a.iterations == 0 {
            return Err(CliError::Usage("--iterations must be at least 1".into()));
        }
        cfg.set("iterations", a.iterations);
        let params = Algorithm2Params {
            epsilon0,
            coupling: a.sim.coupling,
            iterations: a.iterations,
            omega,
            tau: time,
        };
        let out = algorithm2_iterate(&system, &reference, &params)?;
        for (k, p) in out.per_step_probs.iter().enumerate() {
            kv(report, &format!("step_{}_prob", k + 1), fmt_f64(*p));
        }
        let fid = *out.fidelities.last().expect("at least one iteration");
        (out.state, fid, out.success_prob)
    };
    write(&a.sim.out, &write_vector(&state, &cfg.comments()))?;
    kv(report, "omega", fmt_f64(omega));
    kv(report, "fidelity", fmt_f64(fidelity));
    kv(report, "fidelity_deviation", fmt_f64(1.0 - fidelity));
    kv(report, "success_prob", fmt_f64(success));
    kv(report, "reference_overlap", fmt_f64(system.ground_fidelity(&reference)));
    Ok(())
}

fn roots(a: RootsArgs, report: &mut Vec<String>) -> Result<()> {
    let x = parse_vector(&read(&a.x)?).map_err(|e| parse_err(&a.x, e))?;
    let modes = prony::recover_modes(&x, finite("T", a.t)?)?;
    for m in modes {
        report.push(format!(
            "{} {} {} {}",
            fmt_f64(m.z.re),
            fmt_f64(m.z.im),
            fmt_f64(m.lambda.re),
            fmt_f64(m.lambda.im)
        ));
    }
    Ok(())
}

fn eig(a: ProblemArgs, report: &mut Vec<String>) -> Result<()> {
    let p = load_problem(&a)?;
    let d = p.augmented().d.symmetrized();
    let spectrum = hermitian_eig(&d)
        .map_err(|e| CliError::Numeric(e.to_string()))?
        .eigenvalues;
    kv(report, "dim", spectrum.len());
    for (k, l) in spectrum.iter().enumerate() {
        kv(report, &format!("lambda_{k}"), fmt_f64(*l));
    }
    if spectrum.len() >= 2 && spectrum[0] != 0.0 {
        kv(report, "gap_ratio", fmt_f64(spectrum[1] / spectrum[0]));
    }
    Ok(())
}
