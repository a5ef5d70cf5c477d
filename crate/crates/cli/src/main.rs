//! `zerofree`: construct extremal Blaschke products, evaluate and profile
//! functions on the strip midline, and run the certification routines.
//!
//! Exit codes: 0 success, 2 construction failure, 3 evaluation failure,
//! 4 hypothesis violation, 64 usage error.

mod output;
mod svg;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use zerofree::blaschke::{construct_prop23, construct_prop25, product_eval, ProductConfig, DEFAULT_ABSCISSA_CAP};
use zerofree::certify::{check_strip_zero_free, dyadic_estimate, geometric_grid, strip_ratio_profile, DyadicReport, RatioProfile};
use zerofree::factorization::{carleman_deficiency, carleman_functional, CarlemanTerms, Deficiency};
use zerofree::model::Root;
use zerofree::operator::{finite_rank_solve, inverse_norm_certificate, strip_grid, CoeffFamily, FiniteRankSpec};
use zerofree::quadrature::QuadratureSpec;
use zerofree::zeros::make_zero_set;
use zerofree::{ErrorKind, FunctionModel, RateFunction, SeparationParams, ZeroSet};

use output::{csv_string, to_json, Sink, StoredManifest, MANIFEST_SCHEMA};

const EXIT_CONSTRUCTION: u8 = 2;
const EXIT_EVALUATION: u8 = 3;
const EXIT_HYPOTHESIS: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(zerofree::Error),
    /// Some rows failed; the output was still written.
    PartialEvaluation(usize),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::PartialEvaluation(n) => write!(f, "{n} sample(s) failed to evaluate"),
        }
    }
}

impl From<zerofree::Error> for CliError {
    fn from(e: zerofree::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::PartialEvaluation(_) => EXIT_EVALUATION,
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Input => EXIT_USAGE,
                ErrorKind::Construction => EXIT_CONSTRUCTION,
                ErrorKind::Evaluation => EXIT_EVALUATION,
                ErrorKind::Hypothesis => EXIT_HYPOTHESIS,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "zerofree", version, about = "Blaschke products, strip lower bounds and inverse-norm certificates")]
struct Cli {
    /// Replay the arguments recorded in a manifest (outputs go to --out).
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    /// Directory for output files and manifest.json; stdout when absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Maximum number of quadrature panel bisections.
    #[arg(long, global = true, default_value_t = 20_000)]
    max_subdiv: usize,

    /// Radius beyond which integral tails are bounded analytically.
    #[arg(long, global = true, default_value_t = 1e6)]
    tail_radius: f64,

    /// Also emit an SVG plot where the command supports one.
    #[arg(long, global = true)]
    plot: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a product from the rate catalogue and print its node table.
    Construct(ConstructArgs),
    /// Evaluate a product or model at complex points.
    Eval(EvalArgs),
    /// Ratio profile log|f(x + i/2)| / x^p over a grid.
    Profile(ProfileArgs),
    /// Certification reports.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Solve (I + B(z)) f = g for a finite-rank spec.
    OperatorSolve(OperatorSolveArgs),
    /// Carleman functional terms (and optionally the deficiency) at radii r.
    Carleman(CarlemanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Prop23,
    Prop25,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Rate: "1/(1+x)", "1/(1+x)^p", "1/(1+log(1+x))", "const:c" or "table:x=y,...".
    #[arg(long)]
    rho: RateFunction,
    /// Number of nodes.
    #[arg(short, long)]
    n: usize,
    /// Growth order for prop25, strictly inside (1, 2).
    #[arg(long)]
    beta: Option<f64>,
    /// Largest abscissa searched for a node.
    #[arg(long, default_value_t = DEFAULT_ABSCISSA_CAP)]
    cap: f64,
}

#[derive(Args)]
struct Subject {
    /// Product config JSON written by `construct`.
    #[arg(long, value_name = "FILE", conflicts_with = "model")]
    config: Option<PathBuf>,
    /// Function model JSON.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Multiply the subject by (z - zero); "re,im", repeatable.
    #[arg(long = "inject-zero", value_parser = parse_complex)]
    inject_zero: Vec<Complex64>,
}

#[derive(Args)]
struct GridArgs {
    /// Geometric grid "x0:factor:count".
    #[arg(long, conflicts_with = "xs")]
    grid: Option<String>,
    /// Explicit comma-separated abscissae.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xs: Vec<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    subject: Subject,
    /// Evaluation point "re,im"; repeatable.
    #[arg(long = "z", value_parser = parse_complex, required = true, allow_hyphen_values = true)]
    points: Vec<Complex64>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    subject: Subject,
    #[command(flatten)]
    grid: GridArgs,
    /// Use the node abscissae of the config as the grid.
    #[arg(long)]
    nodes: bool,
    /// Exponent p of the ratio.
    #[arg(short, long, default_value_t = 2.0)]
    p: f64,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Strip zero-freeness plus the ratio profile on the midline.
    Strip(ProfileArgs),
    /// Dyadic estimate of sum mult Im l / |x - l|^2 for a separated zero set.
    Dyadic(DyadicArgs),
    /// Inverse-norm certificate for a finite-rank spec.
    Operator(OperatorCertArgs),
}

#[derive(Args)]
struct SeparationArgs {
    /// Sector slope k of Im z <= k |Re z|.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Separation constant c of |l - m| >= c (|l| + |m|)^{-1/4}.
    #[arg(long, default_value_t = 1.0)]
    c_sep: f64,
}

#[derive(Args)]
struct DyadicArgs {
    /// Zero set JSON: [{"re", "im", "mult"}, ...].
    #[arg(long, value_name = "FILE")]
    zeros: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    separation: SeparationArgs,
    /// Add a zero "re,im" to the set; repeatable.
    #[arg(long = "inject-zero", value_parser = parse_complex)]
    inject_zero: Vec<Complex64>,
}

#[derive(Args)]
struct OperatorCertArgs {
    /// Finite-rank spec JSON.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated eps values for the e^{eps x^2} envelope.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01")]
    eps: Vec<f64>,
    /// Separation witness "k,c" for the zeros of det(I + A).
    #[arg(long)]
    witness: Option<String>,
    /// Add a zero "re,im" to the first diagonal factor (blaschke_diag only).
    #[arg(long = "inject-zero", value_parser = parse_complex)]
    inject_zero: Vec<Complex64>,
}

#[derive(Args)]
struct OperatorSolveArgs {
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Point "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    /// Right-hand side JSON [[re, im], ...]; defaults to the first basis vector.
    #[arg(long, value_name = "FILE")]
    rhs: Option<PathBuf>,
}

#[derive(Args)]
struct CarlemanArgs {
    #[command(flatten)]
    subject: Subject,
    /// Comma-separated radii.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
    r: Vec<f64>,
    /// Also report the deficiency normalized by r^{beta - 1}.
    #[arg(long)]
    beta: Option<f64>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part {re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

const CONFIG_SCHEMA: &str = "zerofree.product_config.v1";

#[derive(Deserialize)]
struct ConfigDoc {
    schema: String,
    config: ProductConfig,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))
}

fn load_config(path: &Path) -> CliResult<ProductConfig> {
    let text = read(path)?;
    let cfg = match serde_json::from_str::<ConfigDoc>(&text) {
        Ok(doc) if doc.schema == CONFIG_SCHEMA => doc.config,
        Ok(doc) => return Err(CliError::Usage(format!("unsupported config schema {:?}", doc.schema))),
        Err(_) => parse_json(path, &text)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn load_model(path: &Path) -> CliResult<FunctionModel> {
    let text = read(path)?;
    #[derive(Deserialize)]
    struct ModelDoc {
        model: FunctionModel,
    }
    let model = match serde_json::from_str::<ModelDoc>(&text) {
        Ok(doc) => doc.model,
        Err(_) => parse_json(path, &text)?,
    };
    model.validate()?;
    Ok(model)
}

impl Subject {
    /// The subject model plus its product config when it was given as one.
    fn load(&self) -> CliResult<(FunctionModel, Option<ProductConfig>)> {
        let (mut model, cfg) = match (&self.config, &self.model) {
            (Some(c), None) => {
                let cfg = load_config(c)?;
                (FunctionModel::product(cfg.clone()), Some(cfg))
            }
            (None, Some(m)) => (load_model(m)?, None),
            _ => return Err(CliError::Usage("exactly one of --config or --model is required".into())),
        };
        if !self.inject_zero.is_empty() {
            let zeros = self.inject_zero.iter().map(|&z| Root::new(z, 1)).collect();
            model = model.times(FunctionModel::Rational { scale: Complex64::new(1.0, 0.0), zeros, poles: vec![] });
        }
        Ok((model, cfg))
    }
}

impl GridArgs {
    fn resolve(&self) -> CliResult<Vec<f64>> {
        match &self.grid {
            Some(g) => parse_grid(g),
            None if !self.xs.is_empty() => Ok(self.xs.clone()),
            None => Err(CliError::Usage("a grid is required: --grid x0:factor:count or --xs".into())),
        }
    }
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("grid must be \"x0:factor:count\", got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let x0: f64 = parts[0].parse().map_err(|_| bad())?;
    let factor: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    Ok(geometric_grid(x0, factor, count)?)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

/// Arguments to record in the manifest: everything but `--out` and `--manifest`.
fn recorded_args(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--out" || a == "--manifest" {
            it.next();
        } else if !(a.starts_with("--out=") || a.starts_with("--manifest=")) {
            out.push(a.clone());
        }
    }
    out
}

fn run(argv: Vec<String>) -> CliResult<()> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            if code == 0 {
                return Ok(());
            }
            // clap has already printed the diagnostic
            return Err(CliError::Usage(String::new()));
        }
    };
    if let Some(path) = &cli.manifest {
        let stored: StoredManifest = parse_json(path, &read(path)?)?;
        if stored.schema != MANIFEST_SCHEMA {
            return Err(CliError::Usage(format!("unsupported manifest schema {:?}", stored.schema)));
        }
        let mut replay = vec![argv[0].clone()];
        replay.extend(stored.args);
        if let Some(out) = &cli.out {
            replay.push("--out".into());
            replay.push(out.display().to_string());
        }
        return run(replay);
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Usage("a subcommand is required (see --help)".into()));
    };
    let q = QuadratureSpec {
        tol: cli.tol,
        max_subdiv: cli.max_subdiv,
        tail_radius: cli.tail_radius,
        ..QuadratureSpec::default()
    };
    q.validate()?;
    let mut sink = Sink::new(cli.out.clone())?;
    let name = match command {
        Command::Construct(a) => {
            cmd_construct(a, &mut sink)?;
            "construct"
        }
        Command::Eval(a) => {
            cmd_eval(a, &mut sink)?;
            "eval"
        }
        Command::Profile(a) => {
            let failed = cmd_profile(a, cli.plot, &mut sink)?;
            sink.finish("profile", &recorded_args(&argv), &q)?;
            return if failed > 0 { Err(CliError::PartialEvaluation(failed)) } else { Ok(()) };
        }
        Command::Certify(CertifyCommand::Strip(a)) => {
            cmd_certify_strip(a, cli.plot, &mut sink)?;
            "certify strip"
        }
        Command::Certify(CertifyCommand::Dyadic(a)) => {
            cmd_certify_dyadic(a, &mut sink)?;
            "certify dyadic"
        }
        Command::Certify(CertifyCommand::Operator(a)) => {
            cmd_certify_operator(a, &mut sink)?;
            "certify operator"
        }
        Command::OperatorSolve(a) => {
            cmd_operator_solve(a, &mut sink)?;
            "operator-solve"
        }
        Command::Carleman(a) => {
            cmd_carleman(a, &q, &mut sink)?;
            "carleman"
        }
    };
    sink.finish(name, &recorded_args(&argv), &q)
}

fn cmd_construct(a: &ConstructArgs, sink: &mut Sink) -> CliResult<()> {
    let cfg = match a.kind {
        Kind::Prop23 => construct_prop23(&a.rho, a.n, a.cap)?,
        Kind::Prop25 => {
            let beta = a.beta.ok_or_else(|| CliError::Usage("prop25 requires --beta".into()))?;
            construct_prop25(&a.rho, beta, a.n, a.cap)?
        }
    };
    println!("{:>4} {:>24} {:>40}", "n", "x_n", "k_n");
    for (i, node) in cfg.nodes.iter().enumerate() {
        println!("{:>4} {:>24} {:>40}", i + 1, node.x, node.k);
    }
    sink.emit("config.json", &to_json(CONFIG_SCHEMA, "config", &cfg)?, false)
}

#[derive(Serialize)]
struct EvalRow {
    z: Complex64,
    value: Complex64,
    log_modulus: f64,
    arg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_certified: Option<bool>,
}

fn cmd_eval(a: &EvalArgs, sink: &mut Sink) -> CliResult<()> {
    let (model, cfg) = a.subject.load()?;
    let rows = a
        .points
        .iter()
        .map(|&z| {
            let lv = model.log_eval(z)?;
            let tail = match (&cfg, a.subject.inject_zero.is_empty()) {
                (Some(cfg), true) => Some(product_eval(cfg, z, 1e-6)?),
                _ => None,
            };
            Ok(EvalRow {
                z,
                value: lv.value(),
                log_modulus: lv.log_modulus,
                arg: lv.arg,
                tail_bound: tail.map(|t| t.tail.value),
                tail_certified: tail.map(|t| t.tail_certified),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    sink.emit("eval.json", &to_json("zerofree.eval.v1", "values", &rows)?, true)
}

fn profile_grid(a: &ProfileArgs, cfg: Option<&ProductConfig>) -> CliResult<Vec<f64>> {
    if a.nodes {
        let cfg = cfg.ok_or_else(|| CliError::Usage("--nodes needs --config".into()))?;
        return Ok(cfg.nodes.iter().map(|n| n.x).collect());
    }
    a.grid.resolve()
}

fn profile_plot(profile_points: &[(f64, f64)], p: f64) -> String {
    let log_x = profile_points.len() > 2 && profile_points.iter().all(|&(x, _)| x > 0.0);
    svg::line_plot(&format!("log|f(x + i/2)| / x^{p}"), "x", "ratio", profile_points, log_x)
}

/// Returns the number of rows that failed to evaluate.
fn cmd_profile(a: &ProfileArgs, plot: bool, sink: &mut Sink) -> CliResult<usize> {
    let (model, cfg) = a.subject.load()?;
    let xs = profile_grid(a, cfg.as_ref())?;
    // validate the grid and exponent once through the library
    strip_ratio_profile(&FunctionModel::one(), &xs, a.p)?;
    let mut rows = Vec::with_capacity(xs.len());
    let mut failed = 0;
    for &x in &xs {
        match strip_ratio_profile(&model, &[x], a.p) {
            Ok(p) => {
                let s = p.samples[0];
                rows.push((x, s.log_modulus, s.ratio));
            }
            Err(e) => {
                eprintln!("x = {x}: {e}");
                failed += 1;
                rows.push((x, f64::NAN, f64::NAN));
            }
        }
    }
    let csv = csv_string(&["x", "logmod", "ratio"], |w| {
        for &(x, lm, r) in &rows {
            w.write_record([x.to_string(), lm.to_string(), r.to_string()])?;
        }
        Ok(())
    })?;
    sink.emit("profile.csv", &csv, true)?;
    if plot {
        let pts: Vec<(f64, f64)> = rows.iter().map(|&(x, _, r)| (x, r)).collect();
        if sink.has_dir() {
            sink.emit("profile.svg", &profile_plot(&pts, a.p), false)?;
        } else {
            eprintln!("--plot needs --out; skipping SVG");
        }
    }
    Ok(failed)
}

#[derive(Serialize)]
struct StripReport {
    zero_free: bool,
    min_ratio: Option<f64>,
    tail_max_abs: f64,
    profile: RatioProfile,
}

fn cmd_certify_strip(a: &ProfileArgs, plot: bool, sink: &mut Sink) -> CliResult<()> {
    let (model, cfg) = a.subject.load()?;
    check_strip_zero_free(&model)?;
    let xs = profile_grid(a, cfg.as_ref())?;
    let profile = strip_ratio_profile(&model, &xs, a.p)?;
    let report = StripReport {
        zero_free: true,
        min_ratio: profile.min_ratio(),
        tail_max_abs: profile.tail_max_abs(profile.samples.len() / 2),
        profile,
    };
    sink.emit("strip.json", &to_json("zerofree.strip_report.v1", "report", &report)?, true)?;
    if plot && sink.has_dir() {
        let pts: Vec<(f64, f64)> = report.profile.samples.iter().map(|s| (s.x, s.ratio)).collect();
        sink.emit("strip.svg", &profile_plot(&pts, a.p), false)?;
    }
    Ok(())
}

fn cmd_certify_dyadic(a: &DyadicArgs, sink: &mut Sink) -> CliResult<()> {
    let zs: ZeroSet = parse_json(&a.zeros, &read(&a.zeros)?)?;
    let zs = if a.inject_zero.is_empty() {
        zs
    } else {
        zs.union(&make_zero_set(a.inject_zero.iter().map(|&z| (z, 1)))?)
    };
    let p = SeparationParams::new(a.separation.k, a.separation.c_sep)?;
    let xs = a.grid.resolve()?;
    let reports = xs.iter().map(|&x| dyadic_estimate(&zs, x, &p)).collect::<zerofree::Result<Vec<DyadicReport>>>()?;
    let csv = csv_string(&["x", "n", "card", "A_n", "B_n", "total"], |w| {
        for r in &reports {
            for an in &r.annuli {
                w.write_record([
                    r.x.to_string(),
                    an.n.to_string(),
                    an.card.to_string(),
                    an.a_n.to_string(),
                    an.b_n.to_string(),
                    r.total.to_string(),
                ])?;
            }
        }
        Ok(())
    })?;
    sink.emit("dyadic.json", &to_json("zerofree.dyadic_report.v1", "reports", &reports)?, true)?;
    sink.emit("dyadic.csv", &csv, false)
}

fn load_spec(path: &Path) -> CliResult<FiniteRankSpec> {
    let spec: FiniteRankSpec = parse_json(path, &read(path)?)?;
    spec.validate()?;
    Ok(spec)
}

fn cmd_certify_operator(a: &OperatorCertArgs, sink: &mut Sink) -> CliResult<()> {
    let mut spec = load_spec(&a.spec)?;
    if !a.inject_zero.is_empty() {
        match &mut spec.coeff {
            CoeffFamily::BlaschkeDiag { factors, .. } if !factors.is_empty() => {
                factors[0].zeros.extend(a.inject_zero.iter().copied());
            }
            _ => return Err(CliError::Usage("--inject-zero needs a blaschke_diag coefficient family".into())),
        }
    }
    let witness = match &a.witness {
        Some(w) => {
            let (k, c) = w.split_once(',').ok_or_else(|| CliError::Usage(format!("witness must be \"k,c\", got {w:?}")))?;
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("bad witness {w:?}: {e}")));
            Some(SeparationParams::new(parse(k)?, parse(c)?)?)
        }
        None => None,
    };
    let xs = a.grid.resolve()?;
    let report = inverse_norm_certificate(&spec, &xs, &strip_grid(&xs), &a.eps, witness.as_ref())?;
    sink.emit("operator_certificate.json", &to_json("zerofree.inverse_certificate.v1", "report", &report)?, true)
}

#[derive(Serialize)]
struct SolveReport {
    z: Complex64,
    det: Complex64,
    residual: f64,
    f: Vec<Complex64>,
}

fn cmd_operator_solve(a: &OperatorSolveArgs, sink: &mut Sink) -> CliResult<()> {
    let spec = load_spec(&a.spec)?;
    let g: Vec<Complex64> = match &a.rhs {
        Some(path) => parse_json(path, &read(path)?)?,
        None => spec.basis[0].clone(),
    };
    let s = finite_rank_solve(&spec, a.z, &g)?;
    let report = SolveReport { z: a.z, det: s.det, residual: s.residual, f: s.f };
    sink.emit("solve.json", &to_json("zerofree.operator_solve.v1", "solution", &report)?, true)
}

#[derive(Serialize)]
struct CarlemanReport {
    terms: Vec<CarlemanTerms>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    deficiency: Vec<Deficiency>,
}

fn cmd_carleman(a: &CarlemanArgs, q: &QuadratureSpec, sink: &mut Sink) -> CliResult<()> {
    let (model, _) = a.subject.load()?;
    let terms = a.r.iter().map(|&r| carleman_functional(&model, r, q)).collect::<zerofree::Result<Vec<_>>>()?;
    let deficiency = match a.beta {
        Some(beta) => a.r.iter().map(|&r| carleman_deficiency(&model, r, beta, q)).collect::<zerofree::Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let report = CarlemanReport { terms, deficiency };
    sink.emit("carleman.json", &to_json("zerofree.carleman.v1", "report", &report)?, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1:2:4").unwrap(), vec![1.0, 2.0, 4.0, 8.0]);
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:0.5:3").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert!(parse_complex("1.5").is_err());
    }

    #[test]
    fn out_and_manifest_are_not_recorded() {
        let argv: Vec<String> = ["zerofree", "--out", "d", "construct", "--manifest=m", "-n", "3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(recorded_args(&argv), vec!["construct", "-n", "3"]);
    }
}
