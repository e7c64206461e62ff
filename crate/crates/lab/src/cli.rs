//! Command-line surface. Parameter values stay optional here; the runner
//! resolves flags against the config file and built-in defaults, so that
//! every output header records the full effective parameter set.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "mcp-lab",
    version,
    about = "Multitype contact process laboratory: thresholds, sweeps, dominance tests, coupled runs, survival experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed; a random one is drawn and recorded when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Monte Carlo replicas (per-command default otherwise).
    #[arg(long, global = true)]
    pub replicas: Option<u32>,

    /// Worker threads for replica-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file; results also print to stdout in summary form.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output file format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// `key = value` config file; explicit flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn canon(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("expected json|csv, got `{other}`")),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.canon())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form thresholds for one parameter point: the dominated rate,
    /// the consistency bound c*, the sufficient multiplier bound, the
    /// mapped modulated-process parameters, and the survival verdict.
    Thresholds(ThresholdsArgs),
    /// Evaluate the thresholds over a 1- or 2-axis parameter grid.
    Sweep(SweepArgs),
    /// Tail-dominance test of the modulated point process against a
    /// Poisson reference.
    Dominance(DominanceArgs),
    /// Coupled-run invariant suite; exits nonzero on any violation.
    Couple(CoupleArgs),
    /// Monte Carlo survival estimation, optionally paired across the
    /// process chain on matched seeds.
    Survive(SurviveArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Thresholds(_) => "thresholds",
            Command::Sweep(_) => "sweep",
            Command::Dominance(_) => "dominance",
            Command::Couple(_) => "couple",
            Command::Survive(_) => "survive",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct ThresholdsArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    /// Critical-value reference: lower | upper | literature | <number>.
    #[arg(long = "lambda-c")]
    pub lambda_c: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// Primary axis, `name:min:max:steps[:linear|log]` over c, alpha or beta.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Optional second axis (distinct parameter).
    #[arg(long)]
    pub sweep2: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long = "lambda-c")]
    pub lambda_c: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct DominanceArgs {
    /// Modulated-process parameters, given directly ...
    #[arg(long)]
    pub alpha0: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// ... or mapped from contact-process parameters.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    /// Poisson reference rate; defaults to the domination bound.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Significance threshold in standard errors.
    #[arg(long)]
    pub z: Option<f64>,
    /// Comma-separated comparison times.
    #[arg(long = "time-grid")]
    pub time_grid: Option<String>,
    /// Largest count in the tail grid (default: 99.99% Poisson quantile).
    #[arg(long = "k-max")]
    pub k_max: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct CoupleArgs {
    /// Which coupling: cpree-mcp | attractive | prop1.
    #[arg(long)]
    pub which: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    /// Extra type-1 death rate for the perturbed coupling
    /// (default: alpha - 1).
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub side: Option<u32>,
    /// periodic | free.
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Comma-separated occupancy checkpoint times (default T/4,T/2,T).
    #[arg(long)]
    pub checkpoints: Option<String>,
    /// Self-test hook: corrupt one site mid-run in replica 0 and expect the
    /// violation to be detected (exit becomes nonzero).
    #[arg(long = "inject-fault", default_value_t = false)]
    pub inject_fault: bool,
}

#[derive(Debug, clap::Args)]
pub struct SurviveArgs {
    /// cp | mcp | cpree | perturbed | paired.
    #[arg(long)]
    pub process: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<u32>,
    /// Contact-process birth rate (default: the domination bound).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Extra type-1 death rate for the perturbed process
    /// (default: alpha - 1).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// single | all2 | product:p1,p2.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub side: Option<u32>,
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub horizon: Option<f64>,
}

/// Which coupling to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    CpreeMcp,
    Attractive,
    Prop1,
}

impl FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cpree-mcp" => Ok(Which::CpreeMcp),
            "attractive" => Ok(Which::Attractive),
            "prop1" => Ok(Which::Prop1),
            other => Err(format!("expected cpree-mcp|attractive|prop1, got `{other}`")),
        }
    }
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Which::CpreeMcp => "cpree-mcp",
            Which::Attractive => "attractive",
            Which::Prop1 => "prop1",
        })
    }
}

/// Survival process selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessSel {
    Cp,
    Mcp,
    Cpree,
    Perturbed,
    Paired,
}

impl FromStr for ProcessSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cp" => Ok(ProcessSel::Cp),
            "mcp" => Ok(ProcessSel::Mcp),
            "cpree" => Ok(ProcessSel::Cpree),
            "perturbed" => Ok(ProcessSel::Perturbed),
            "paired" => Ok(ProcessSel::Paired),
            other => Err(format!("expected cp|mcp|cpree|perturbed|paired, got `{other}`")),
        }
    }
}

impl std::fmt::Display for ProcessSel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProcessSel::Cp => "cp",
            ProcessSel::Mcp => "mcp",
            ProcessSel::Cpree => "cpree",
            ProcessSel::Perturbed => "perturbed",
            ProcessSel::Paired => "paired",
        })
    }
}

/// Initial-condition selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSel {
    Single,
    All2,
    Product { p1: f64, p2: f64 },
}

impl InitSel {
    pub fn to_spec(self) -> mcp_core::processes::InitSpec {
        match self {
            InitSel::Single => mcp_core::processes::InitSpec::SingleSeedAtOrigin,
            InitSel::All2 => mcp_core::processes::InitSpec::All2,
            InitSel::Product { p1, p2 } => mcp_core::processes::InitSpec::Product { p1, p2 },
        }
    }
}

impl FromStr for InitSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(InitSel::Single),
            "all2" => Ok(InitSel::All2),
            other => {
                let spec = other
                    .strip_prefix("product:")
                    .ok_or_else(|| format!("expected single|all2|product:p1,p2, got `{other}`"))?;
                let (p1, p2) = spec
                    .split_once(',')
                    .ok_or_else(|| "product takes two probabilities, `product:p1,p2`".to_string())?;
                let parse = |v: &str| {
                    v.parse::<f64>().map_err(|_| format!("bad probability `{v}` in init spec"))
                };
                Ok(InitSel::Product { p1: parse(p1)?, p2: parse(p2)? })
            }
        }
    }
}

impl std::fmt::Display for InitSel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitSel::Single => f.write_str("single"),
            InitSel::All2 => f.write_str("all2"),
            InitSel::Product { p1, p2 } => write!(f, "product:{p1},{p2}"),
        }
    }
}

/// Boundary selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySel(pub mcp_core::graphical::Boundary);

impl FromStr for BoundarySel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "periodic" => Ok(BoundarySel(mcp_core::graphical::Boundary::Periodic)),
            "free" => Ok(BoundarySel(mcp_core::graphical::Boundary::Free)),
            other => Err(format!("expected periodic|free, got `{other}`")),
        }
    }
}

impl std::fmt::Display for BoundarySel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self.0 {
            mcp_core::graphical::Boundary::Periodic => "periodic",
            mcp_core::graphical::Boundary::Free => "free",
        })
    }
}

/// One sweep axis: `name:min:max:steps[:linear|log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub steps: u32,
    pub log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    C,
    Alpha,
    Beta,
}

impl AxisName {
    pub fn key(&self) -> &'static str {
        match self {
            AxisName::C => "c",
            AxisName::Alpha => "alpha",
            AxisName::Beta => "beta",
        }
    }
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps as usize;
        (0..n)
            .map(|i| {
                let frac = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + frac * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + frac * (self.max - self.min)
                }
            })
            .collect()
    }
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(format!("expected name:min:max:steps[:linear|log], got `{s}`"));
        }
        let name = match parts[0] {
            "c" => AxisName::C,
            "alpha" => AxisName::Alpha,
            "beta" => AxisName::Beta,
            other => return Err(format!("sweep axis must be c|alpha|beta, got `{other}`")),
        };
        let min = parts[1].parse::<f64>().map_err(|_| format!("bad axis min `{}`", parts[1]))?;
        let max = parts[2].parse::<f64>().map_err(|_| format!("bad axis max `{}`", parts[2]))?;
        let steps =
            parts[3].parse::<u32>().map_err(|_| format!("bad axis steps `{}`", parts[3]))?;
        let log = match parts.get(4).copied().unwrap_or("linear") {
            "linear" => false,
            "log" => true,
            other => return Err(format!("axis scale must be linear|log, got `{other}`")),
        };
        if steps < 2 {
            return Err("axis needs at least 2 steps".to_string());
        }
        if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
            return Err(format!("axis range must satisfy 0 < min < max, got {min}..{max}"));
        }
        Ok(AxisSpec { name, min, max, steps, log })
    }
}

impl std::fmt::Display for AxisSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}",
            self.name.key(),
            self.min,
            self.max,
            self.steps,
            if self.log { "log" } else { "linear" }
        )
    }
}

/// Comma-separated float list (time grids, checkpoints).
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|_| format!("bad number `{tok}` in list")))
        .collect()
}

/// Canonical encoding of a float list.
pub fn canon_f64_list(xs: &[f64]) -> String {
    xs.iter().map(|x| crate::output::canon_f64(*x)).collect::<Vec<_>>().join(",")
}
