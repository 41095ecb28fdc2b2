//! Command-line arguments and the serializable run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use riemann_core::diophantine::{make_rational, CFExpansion, Rational};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "riemann", version, about = "Evaluate and analyse Riemann's non-differentiable function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct Common {
    /// Artifact format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed of every randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Validate and print the resolved configuration without computing.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dry_run: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        Self {
            command: cli.command,
            format: cli.common.format,
            output: cli.common.output,
            seed: cli.common.seed,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate φ, φ_D or R at one point.
    Eval(EvalArgs),
    /// Sample x ↦ φ(x/(2π)) on a uniform grid.
    Trace(TraceArgs),
    /// Continued fraction, convergents and approximation exponents.
    Cf(CfArgs),
    /// Irreducible fractions p/q in (0, 1) by denominator.
    Farey(FareyArgs),
    /// One-sided chord limits at a rational with q ≢ 2 (mod 4).
    Corner(CornerArgs),
    /// Chord winding at a rational with q ≡ 2 (mod 4).
    Spiral(SpiralArgs),
    /// Chord directions toward the convergents of an irrational.
    Cluster(ClusterArgs),
    /// Empirical constant of the √|h|/√q increment bound.
    #[command(name = "lemma-c")]
    LemmaC(LemmaArgs),
    /// Ball cover by Farey fractions and its check on random irrationals.
    Cover(CoverArgs),
    /// Partial sums of the cover's content majorant.
    #[command(name = "content-sum")]
    ContentSum(ContentArgs),
    /// Box-counting slope of a trace or of a control curve.
    Boxdim(BoxdimArgs),
    /// Cone test for tangents over a grid of directions.
    #[command(name = "cone-scan")]
    ConeScan(ConeArgs),
    /// Run every acceptance criterion and bundle the results.
    Report(ReportArgs),
    /// Re-run the configuration stored in an artifact or config file.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Trace(_) => "trace",
            Command::Cf(_) => "cf",
            Command::Farey(_) => "farey",
            Command::Corner(_) => "corner",
            Command::Spiral(_) => "spiral",
            Command::Cluster(_) => "cluster",
            Command::LemmaC(_) => "lemma-c",
            Command::Cover(_) => "cover",
            Command::ContentSum(_) => "content-sum",
            Command::Boxdim(_) => "boxdim",
            Command::ConeScan(_) => "cone-scan",
            Command::Report(_) => "report",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    Phi,
    PhiD,
    R,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = Function::Phi)]
    pub function: Function,
    /// Time t (φ and φ_D).
    #[arg(long, conflicts_with = "x")]
    pub t: Option<f64>,
    /// Parameter x = 2πt as a real or an exact `p/q` (φ and R).
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum TraceMethod {
    /// FFT on aligned grids, direct summation otherwise.
    Auto,
    Direct,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct TraceArgs {
    #[arg(long, default_value_t = 0.0)]
    pub x_lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x_hi: f64,
    #[arg(long, default_value_t = 100_001)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = TraceMethod::Auto)]
    pub method: TraceMethod,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[command(allow_negative_numbers = true)]
pub struct CfArgs {
    /// `p/q`, a decimal, `golden`, `sqrt:N` or `cf:a0;a1,a2,...`.
    #[arg(long)]
    pub value: String,
    /// Number of convergents.
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Error budget of a decimal value.
    #[arg(long, default_value_t = 0.0)]
    pub budget: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct FareyArgs {
    #[arg(long, default_value_t = 2)]
    pub q_min: u64,
    #[arg(long)]
    pub q_max: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[command(allow_negative_numbers = true)]
pub struct CornerArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: u64,
    /// Largest offset in x units; defaults to min(1e-2, 1/q²).
    #[arg(long)]
    pub h_max: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub h_min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[command(allow_negative_numbers = true)]
pub struct SpiralArgs {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: u64,
    /// Largest offset in x units; defaults to min(1e-2, 1/q²).
    #[arg(long)]
    pub h_max: Option<f64>,
    #[arg(long, default_value_t = 1e-7)]
    pub h_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub ratio: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ClusterArgs {
    /// `golden`, `sqrt:N` or `cf:a0;a1,a2,...`.
    #[arg(long, default_value = "golden")]
    pub rho: String,
    #[arg(long, default_value_t = 1e-2)]
    pub h_max: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub h_min: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 20)]
    pub q_max: u64,
    #[arg(long, default_value_t = 8)]
    pub h_per_q: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct CoverArgs {
    #[arg(long, default_value_t = 10)]
    pub q0: u64,
    #[arg(long, default_value_t = 100)]
    pub qmax: u64,
    /// Radius constant; defaults to twice the lemma constant from q ≤ 20.
    #[arg(long)]
    pub c_used: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub exponent: f64,
    /// Random irrationals checked against the cover.
    #[arg(long, default_value_t = 0)]
    pub verify: usize,
    /// Emit every ball (centers are evaluated).
    #[arg(long)]
    pub balls: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ContentArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub q0: u64,
    #[arg(long, default_value_t = 10_000)]
    pub qmax: u64,
    #[arg(long, default_value_t = 1.0)]
    pub c_used: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    /// One period of φ.
    Phi,
    /// Smooth control: a parabola arc.
    Smooth,
    /// Area control: a raster filling the unit square.
    Square,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct BoxdimArgs {
    #[arg(long, value_enum, default_value_t = Curve::Phi)]
    pub curve: Curve,
    /// log2 of the number of trace intervals.
    #[arg(long, default_value_t = 20)]
    pub log2_n: u32,
    /// Number of halving scales.
    #[arg(long, default_value_t = 6)]
    pub scales: usize,
    /// Largest scale as a fraction of the diameter.
    #[arg(long, default_value_t = 0.25)]
    pub top: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ConeArgs {
    /// Point in [0, 1): `p/q`, a decimal or `golden` (its fractional part).
    #[arg(long, default_value = "1/2")]
    pub x0: String,
    #[arg(long, default_value_t = 16)]
    pub directions: usize,
    /// Full opening in degrees.
    #[arg(long, default_value_t = 20.0)]
    pub opening_deg: f64,
    /// Comma-separated decreasing ball radii.
    #[arg(long, default_value = "0.05,0.03,0.02,0.01,0.006")]
    pub h_list: String,
    /// log2 of the number of trace intervals over one period.
    #[arg(long, default_value_t = 22)]
    pub log2_n: u32,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ReportArgs {
    /// Comma-separated criterion ids; all when absent.
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ReplayArgs {
    /// A JSON or CSV artifact, or a bare JSON run configuration.
    pub path: PathBuf,
}

/// A real number given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum RealSpec {
    Exact(Rational),
    Decimal(f64),
    Expansion(CFExpansion),
}

impl RealSpec {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealSpec::Exact(r) => r.to_f64(),
            RealSpec::Decimal(x) => *x,
            RealSpec::Expansion(cf) => cf.to_f64(),
        }
    }
}

fn bad(name: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid --{name}: {reason}"))
}

pub fn parse_rational(name: &str, s: &str) -> Result<Rational, CliError> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|e| bad(name, e))?;
    let q: BigInt = q.parse().map_err(|e| bad(name, e))?;
    make_rational(p, q).map_err(|e| bad(name, e))
}

pub fn parse_real(name: &str, s: &str) -> Result<RealSpec, CliError> {
    let s = s.trim();
    if s == "golden" {
        return Ok(RealSpec::Expansion(CFExpansion::golden()));
    }
    if let Some(n) = s.strip_prefix("sqrt:") {
        let n: u64 = n.parse().map_err(|e| bad(name, e))?;
        return CFExpansion::sqrt(n).map(RealSpec::Expansion).map_err(|e| bad(name, e));
    }
    if let Some(body) = s.strip_prefix("cf:") {
        let (a0, rest) = body.split_once(';').unwrap_or((body, ""));
        let a0: BigInt = a0.trim().parse().map_err(|e| bad(name, e))?;
        let quotients = rest
            .split(',')
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<BigInt>().map_err(|e| bad(name, e)))
            .collect::<Result<Vec<_>, _>>()?;
        return CFExpansion::from_quotients(a0, quotients)
            .map(RealSpec::Expansion)
            .map_err(|e| bad(name, e));
    }
    if s.contains('/') || s.parse::<i64>().is_ok() {
        return parse_rational(name, s).map(RealSpec::Exact);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(RealSpec::Decimal(x)),
        _ => Err(bad(name, format!("cannot read `{s}` as a number"))),
    }
}

pub fn parse_list(name: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| bad(name, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_specs() {
        assert!(matches!(parse_real("x", "1/3").unwrap(), RealSpec::Exact(_)));
        assert!(matches!(parse_real("x", "2").unwrap(), RealSpec::Exact(_)));
        assert_eq!(parse_real("x", "0.25").unwrap(), RealSpec::Decimal(0.25));
        let g = parse_real("x", "golden").unwrap().to_f64();
        assert!((g - 1.618_033_988_749_895).abs() < 1e-15);
        let s = parse_real("x", "sqrt:2").unwrap().to_f64();
        assert!((s - std::f64::consts::SQRT_2).abs() < 1e-15);
        let c = parse_real("x", "cf:0;2,2").unwrap().to_f64();
        assert!((c - 0.4).abs() < 0.05);
        assert!(parse_real("x", "abc").is_err());
        assert!(parse_real("x", "1/0").is_err());
        assert!(parse_real("x", "sqrt:4").is_err());
    }

    #[test]
    fn run_config_round_trips_through_json() {
        let cli = Cli::parse_from(["riemann", "--seed", "7", "corner", "--p", "1", "--q", "3"]);
        let cfg = RunConfig::from_cli(cli);
        let s = serde_json::to_string(&cfg).unwrap();
        assert!(s.contains("\"subcommand\":\"corner\""));
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::parse_from(["riemann", "eval", "--t", "-0.25"]);
        assert!(matches!(cli.command, Command::Eval(EvalArgs { t: Some(t), .. }) if t == -0.25));
    }
}
