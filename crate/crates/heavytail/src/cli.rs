//! Command-line driver. [`run`] maps an argument vector to an exit code:
//! 0 on success, 2 on usage errors, 3 when a result is numerically
//! indeterminate and 4 when the reproduction battery has failures.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use heavytail_core::bounds::{exclusion_check, necessary_bound, Violation};
use heavytail_core::classes::{class_membership, conjecture_scan_beta, conjecture_scan_stable, ClassConfig, Membership, ScanRow};
use heavytail_core::orders::{st_dominance, DominanceVerdict, Ecdf, Shape};
use heavytail_core::pooling::{deadly_pool_prob, DeadlyRiskSpec, PoolConfig};
use heavytail_core::stable_calculus::mix_params;
use heavytail_core::{DistributionSpec, SampleBatch, StableParams};
use serde::Serialize;

use crate::battery::{reproduce, BatteryConfig};
use crate::io::{self, Format};
use crate::parse::{self, ParseError};
use crate::Engine;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_REPRODUCTION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "heavytail", version, about = "Risk pooling experiments for infinite-mean distributions")]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SkewArgs {
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Tolerance on normalized second differences.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.01)]
    pub u_lo: f64,
    #[arg(long, default_value_t = 0.99)]
    pub u_hi: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,
    /// Number of comparison points.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership in the super-Pareto, super-Fréchet, super-Cauchy and H classes.
    CheckClass {
        /// Distribution: shorthand (`pareto:1`), JSON or `@file`.
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        skew: SkewArgs,
    },
    /// Empirical first-order stochastic dominance between two laws.
    Dominance {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Scale and shift of a pooled stable law.
    StableMix {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Comma-separated weights summing to one.
        #[arg(long)]
        weights: String,
    },
    /// Single risk against the pool of i.i.d. copies.
    Pool {
        /// Distribution of each risk.
        #[arg(long, required_unless_present = "config")]
        spec: Option<String>,
        /// Comma-separated weights summing to one.
        #[arg(long, required_unless_present = "config")]
        weights: Option<String>,
        /// JSON pool configuration; overrides --spec, --weights, --n, --confidence and --seed.
        #[arg(long, conflicts_with_all = ["spec", "weights"])]
        config: Option<PathBuf>,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Probability that a pool of deadly risks is infinite.
    Deadly {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        weights: String,
    },
    /// Necessary lower bound on F(query) from CDF constraints.
    Bounds {
        #[arg(long)]
        baseline: String,
        /// `x:F(x)` pairs, e.g. `2:0.4,4:0.8`.
        #[arg(long)]
        constraints: String,
        #[arg(long, allow_hyphen_values = true)]
        query: f64,
        /// Also report where this law violates the bound.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Skewness-order scans over stable laws.
    ConjectureScan {
        /// Tests Cauchy <=_skew S(α, 1) for each α.
        #[arg(long, default_value = "0.5,0.7,0.9")]
        alphas: String,
        /// Tests S(1, β₁) <=_skew S(1, β₂) for each `β₁:β₂`.
        #[arg(long, default_value = "0:1,-1:1", allow_hyphen_values = true)]
        beta_pairs: String,
        #[command(flatten)]
        skew: SkewArgs,
    },
    /// Runs the battery of worked examples; `--output` receives the JSON report.
    ReproducePaper {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(heavytail_core::Error),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(heavytail_core::Error::NumericalAccuracy { .. }) => EXIT_INDETERMINATE,
            CliError::Core(heavytail_core::Error::InternalConsistency(_)) => EXIT_FAILURE,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Other(_) => EXIT_FAILURE,
        }
    }
}

impl From<heavytail_core::Error> for CliError {
    fn from(e: heavytail_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Domain(d) => CliError::Core(d),
            ParseError::Io { .. } => CliError::Other(e.into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.into())
    }
}

/// Rendered result plus the exit code it implies.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

#[derive(Serialize)]
struct MixOutput {
    gamma: f64,
    delta: f64,
}

#[derive(Serialize)]
struct DeadlyOutput {
    p_infinity: f64,
}

#[derive(Serialize)]
struct BoundOutput {
    bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<Vec<Violation>>,
}

#[derive(Serialize)]
struct DominanceOutput<'a> {
    seed: u64,
    n: usize,
    confidence: f64,
    left: &'a DistributionSpec,
    right: &'a DistributionSpec,
    verdict: &'a DominanceVerdict,
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    u_range: (f64, f64),
    grid_size: usize,
    tolerance: f64,
    alpha_scan: &'a [ScanRow],
    beta_scan: &'a [ScanRow],
}

fn render<T: Serialize>(format: Format, value: &T, csv: impl FnOnce() -> Result<String, csv::Error>) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => io::to_json(value)?,
        Format::Csv => csv()?,
    })
}

fn skew_config(s: &SkewArgs) -> Result<ClassConfig, CliError> {
    if !(0.0 < s.u_lo && s.u_lo < s.u_hi && s.u_hi < 1.0) {
        return Err(CliError::Usage("need 0 < --u-lo < --u-hi < 1".into()));
    }
    if s.grid < 3 {
        return Err(CliError::Usage("--grid must be at least 3".into()));
    }
    Ok(ClassConfig {
        u_range: (s.u_lo, s.u_hi),
        grid_size: s.grid,
        tolerance: s.tol,
        ..ClassConfig::default()
    })
}

fn indeterminate_if(text: String, flag: bool) -> Outcome {
    Outcome {
        text,
        code: if flag { EXIT_INDETERMINATE } else { EXIT_OK },
    }
}

/// Executes a parsed command.
pub fn execute(cli: &Cli, engine: &Engine) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::CheckClass { spec, skew } => {
            let spec = parse::parse_spec(spec)?;
            let report = class_membership(&spec, &skew_config(skew)?)?;
            let text = render(fmt, &report, || io::class_report_csv(&report))?;
            let undecided = [
                report.super_pareto.membership,
                report.super_frechet.membership,
                report.super_cauchy.membership,
                report.class_h,
            ]
            .contains(&Membership::Indeterminate);
            Ok(indeterminate_if(text, undecided))
        }
        Command::Dominance { left, right, sample } => {
            let (l, r) = (parse::parse_spec(left)?, parse::parse_spec(right)?);
            let x = SampleBatch::new(engine.batch(&l, cli.seed, 0, sample.n)?, cli.seed);
            let y = SampleBatch::new(engine.batch(&r, cli.seed, 1, sample.n)?, cli.seed);
            let verdict = st_dominance(&x, &y, sample.confidence, sample.grid)?;
            let out = DominanceOutput {
                seed: cli.seed,
                n: sample.n,
                confidence: sample.confidence,
                left: &l,
                right: &r,
                verdict: &verdict,
            };
            let text = render(fmt, &out, || {
                let (ex, ey) = (Ecdf::new(&x), Ecdf::new(&y));
                io::csv_table(
                    &["t", "f_left", "f_right", "seed", "n", "confidence"],
                    verdict.grid.iter().map(|&t| (t, ex.eval(t), ey.eval(t), cli.seed, sample.n, sample.confidence)),
                )
            })?;
            Ok(Outcome::ok(text))
        }
        Command::StableMix { alpha, beta, weights } => {
            let m = mix_params(StableParams::new(*alpha, *beta)?, &parse::parse_weights(weights)?)?;
            let out = MixOutput {
                gamma: m.gamma,
                delta: m.delta,
            };
            Ok(Outcome::ok(render(fmt, &out, || io::csv_table(&["gamma", "delta"], [(m.gamma, m.delta)]))?))
        }
        Command::Pool {
            spec,
            weights,
            config,
            sample,
        } => {
            let cfg: PoolConfig = match config {
                Some(path) => serde_json::from_str(&parse::read_file(path)?).map_err(ParseError::from)?,
                None => {
                    let spec = parse::parse_spec(spec.as_deref().unwrap_or_default())?;
                    let mut c = PoolConfig::new(spec, parse::parse_weights(weights.as_deref().unwrap_or_default())?, sample.n, cli.seed);
                    c.confidence = sample.confidence;
                    c
                }
            };
            let report = engine.diversification_report(&cfg, sample.grid)?;
            for w in &report.warnings {
                log::warn!("{w}");
            }
            Ok(Outcome::ok(render(fmt, &report, || io::penalty_csv(&report))?))
        }
        Command::Deadly { p, weights } => {
            let d = DeadlyRiskSpec::new(*p, parse::parse_weights(weights)?)?;
            let p_inf = deadly_pool_prob(&d)?;
            let out = DeadlyOutput { p_infinity: p_inf };
            Ok(Outcome::ok(render(fmt, &out, || io::csv_table(&["p_infinity"], [(p_inf,)]))?))
        }
        Command::Bounds {
            baseline,
            constraints,
            query,
            spec,
        } => {
            let baseline = parse::parse_baseline(baseline)?;
            let set = parse::parse_constraints(constraints)?;
            let bound = necessary_bound(baseline, &set, *query)?;
            let violations = match spec {
                Some(s) => {
                    let f = parse::parse_spec(s)?;
                    let xs: Vec<f64> = set.points().iter().map(|p| p.0).collect();
                    Some(exclusion_check(&f, baseline, &xs, &[*query])?)
                }
                None => None,
            };
            let out = BoundOutput { bound, violations };
            Ok(Outcome::ok(render(fmt, &out, || io::csv_table(&["bound"], [(bound,)]))?))
        }
        Command::ConjectureScan {
            alphas,
            beta_pairs,
            skew,
        } => {
            let cfg = skew_config(skew)?;
            let alphas = parse::parse_reals(alphas)?;
            let pairs = parse::parse_pairs(beta_pairs)?;
            let (a_rows, b_rows) = engine.install(|| {
                rayon::join(
                    || conjecture_scan_stable(&alphas, cfg.u_range, cfg.grid_size, cfg.tolerance),
                    || conjecture_scan_beta(&pairs, cfg.u_range, cfg.grid_size, cfg.tolerance),
                )
            });
            let (a_rows, b_rows) = (a_rows?, b_rows?);
            let out = ScanOutput {
                u_range: cfg.u_range,
                grid_size: cfg.grid_size,
                tolerance: cfg.tolerance,
                alpha_scan: &a_rows,
                beta_scan: &b_rows,
            };
            let all: Vec<ScanRow> = a_rows.iter().chain(&b_rows).cloned().collect();
            let text = render(fmt, &out, || io::scan_csv(&all))?;
            Ok(indeterminate_if(text, all.iter().any(|r| r.verdict == Shape::Indeterminate)))
        }
        Command::ReproducePaper { n, confidence } => {
            let cfg = BatteryConfig {
                seed: cli.seed,
                n: *n,
                confidence: *confidence,
                ..BatteryConfig::default()
            };
            let report = reproduce(engine, &cfg);
            if let Some(path) = &cli.output {
                std::fs::write(path, io::to_json(&report)?)?;
            }
            Ok(Outcome {
                text: report.table(),
                code: if report.all_passed() { EXIT_OK } else { EXIT_REPRODUCTION },
            })
        }
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = Engine::from_env().map_err(CliError::from).and_then(|engine| execute(&cli, &engine));
    match result {
        Ok(out) => {
            let path = match cli.command {
                Command::ReproducePaper { .. } => None,
                _ => cli.output.as_deref(),
            };
            if let Err(e) = io::emit(path, &out.text) {
                eprintln!("error: {e}");
                return EXIT_FAILURE;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
