//! Command-line front end: bound evaluation, parameter search, sweeps and
//! Monte Carlo simulation driven by a flat JSON config.

mod config;

pub use config::{Format, GridField, RunConfig};

use clap::{Args, Parser, Subcommand};
use dpcbound::bounds::evaluate;
use dpcbound::opt::{optimize, sweep, Objective, OptResult, SweepPoint, SweepVar};
use dpcbound::sim::run_trials;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "dpcbound", version, about = "Finite-blocklength bounds for joint eMBB/URLLC transmission")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate all bounds at a fixed split and thresholds (JSON).
    Bound(CommonArgs),
    /// Optimize the configured objective for one configuration.
    Optimize(CommonArgs),
    /// Optimize over the arrival probabilities in `sweep_values`.
    SweepRho(CommonArgs),
    /// Optimize over the mini-slot lengths in `sweep_values` (n_e = ratio · n_U).
    SweepBlocklength(CommonArgs),
    /// Monte Carlo simulation at a fixed split and thresholds (JSON).
    Simulate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub appendix_mu: bool,
}

/// Error with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub name: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, name: &str, message: String) -> Self {
        CliError { code, name: name.to_string(), message }
    }

    pub fn config(message: String) -> Self {
        CliError::new(2, "InvalidConfig", message)
    }
}

impl From<dpcbound::Error> for CliError {
    fn from(e: dpcbound::Error) -> Self {
        let code = if e.is_validation() { 2 } else { 3 };
        CliError::new(code, e.name(), e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error: {}: {}", self.name, self.message)
    }
}

pub const CSV_HEADER: &str =
    "sweep_value,eps_U,eps_TIN,eps_SIC,eps_TS,alpha,beta_e,delta_b,gamma_U,gamma_e,gamma_e_tilde,feasible";

/// Shortest round-trip decimal form.
pub fn fmt_num(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// One CSV/JSON output row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub sweep_value: f64,
    #[serde(rename = "eps_U")]
    pub eps_u: Option<f64>,
    #[serde(rename = "eps_TIN")]
    pub eps_tin: Option<f64>,
    #[serde(rename = "eps_SIC")]
    pub eps_sic: Option<f64>,
    #[serde(rename = "eps_TS")]
    pub eps_ts: Option<f64>,
    pub alpha: Option<f64>,
    pub beta_e: Option<f64>,
    pub delta_b: Option<f64>,
    #[serde(rename = "gamma_U")]
    pub gamma_u: Option<f64>,
    pub gamma_e: Option<f64>,
    pub gamma_e_tilde: Option<f64>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    fn build(value: f64, main: &dpcbound::Result<OptResult>, ts: Option<&dpcbound::Result<OptResult>>) -> Row {
        let eps_ts = ts.and_then(|r| r.as_ref().ok()).map(|r| r.eps_e);
        match main {
            Ok(r) => {
                let (eps_tin, eps_sic) = match r.objective {
                    Objective::Ts => (None, None),
                    _ => (r.eps_tin, r.eps_sic),
                };
                let eps_ts = if r.objective == Objective::Ts { Some(r.eps_e) } else { eps_ts };
                let s = r.best_split;
                Row {
                    sweep_value: value,
                    eps_u: Some(r.eps_u),
                    eps_tin,
                    eps_sic,
                    eps_ts,
                    alpha: s.map(|s| s.alpha),
                    beta_e: s.map(|s| s.beta_e),
                    delta_b: s.map(|s| s.delta_b),
                    gamma_u: Some(r.best_thr.gamma_u),
                    gamma_e: Some(r.best_thr.gamma_e),
                    gamma_e_tilde: s.map(|_| r.best_thr.gamma_e_tilde),
                    feasible: r.feasible,
                    error: None,
                }
            }
            Err(e) => Row {
                sweep_value: value,
                eps_u: None,
                eps_tin: None,
                eps_sic: None,
                eps_ts,
                alpha: None,
                beta_e: None,
                delta_b: None,
                gamma_u: None,
                gamma_e: None,
                gamma_e_tilde: None,
                feasible: false,
                error: Some(format!("{}: {}", e.name(), e)),
            },
        }
    }

    pub fn to_csv(&self) -> String {
        [
            fmt_num(self.sweep_value),
            opt_num(self.eps_u),
            opt_num(self.eps_tin),
            opt_num(self.eps_sic),
            opt_num(self.eps_ts),
            opt_num(self.alpha),
            opt_num(self.beta_e),
            opt_num(self.delta_b),
            opt_num(self.gamma_u),
            opt_num(self.gamma_e),
            opt_num(self.gamma_e_tilde),
            if self.feasible { "1" } else { "0" }.to_string(),
        ]
        .join(",")
    }
}

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.to_csv());
    }
    s
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::new(3, "Serialization", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    rows: &'a [Row],
    results: Vec<Option<&'a OptResult>>,
    baseline: Vec<Option<&'a OptResult>>,
}

#[derive(Serialize)]
struct Triple<T> {
    #[serde(rename = "eps_U")]
    eps_u: T,
    #[serde(rename = "eps_TIN")]
    eps_tin: T,
    #[serde(rename = "eps_SIC")]
    eps_sic: T,
}

#[derive(Serialize)]
struct SimDocument {
    seed: u64,
    n_trials: u64,
    simulation: dpcbound::sim::SimReport,
    bounds: Triple<f64>,
    within_bound: Triple<bool>,
}

struct Loaded {
    cfg: RunConfig,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn load(args: &CommonArgs) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::new(4, "Io", format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.appendix_mu {
        cfg.appendix_mu = Some(true);
    }
    let format = args.format.or(cfg.format);
    let out = args.out.clone().or_else(|| cfg.output_path.clone());
    Ok(Loaded { cfg, format, out })
}

fn require_json(format: Option<Format>, cmd: &str) -> Result<(), CliError> {
    if format == Some(Format::Csv) {
        return Err(CliError::config(format!("{cmd} only emits JSON; use --format json")));
    }
    Ok(())
}

/// Runs the TS baseline alongside a scheme objective.
fn baseline_spec(spec: &dpcbound::opt::SearchSpec) -> dpcbound::opt::SearchSpec {
    let mut ts = spec.clone();
    ts.objective = Objective::Ts;
    ts
}

fn run_sweep(l: &Loaded, var: SweepVar) -> Result<String, CliError> {
    let template = l.cfg.system()?;
    let spec = l.cfg.search(&template)?;
    let values = l.cfg.sweep_values.clone().unwrap_or_default();
    if values.is_empty() {
        return Err(CliError::new(2, "InvalidSearch", "sweep_values must be a nonempty list".into()));
    }
    let main = sweep(&template, var, &values, &spec)?;
    let ts: Option<Vec<SweepPoint>> = match spec.objective {
        Objective::Ts => None,
        _ => Some(sweep(&template, var, &values, &baseline_spec(&spec))?),
    };
    emit_points(l.format.unwrap_or(Format::Csv), &main, ts.as_deref())
}

fn emit_points(format: Format, main: &[SweepPoint], ts: Option<&[SweepPoint]>) -> Result<String, CliError> {
    let rows: Vec<Row> = main
        .iter()
        .enumerate()
        .map(|(i, p)| Row::build(p.value, &p.result, ts.map(|t| &t[i].result)))
        .collect();
    match format {
        Format::Csv => Ok(rows_to_csv(&rows)),
        Format::Json => to_json(&SweepDocument {
            rows: &rows,
            results: main.iter().map(|p| p.result.as_ref().ok()).collect(),
            baseline: ts.map_or_else(Vec::new, |t| t.iter().map(|p| p.result.as_ref().ok()).collect()),
        }),
    }
}

fn cmd_bound(l: &Loaded) -> Result<String, CliError> {
    require_json(l.format, "bound")?;
    let sys = l.cfg.system()?;
    let split = l.cfg.split(&sys)?;
    let thr = l.cfg.thresholds()?;
    to_json(&evaluate(&sys, &split, &thr, l.cfg.options())?)
}

fn cmd_optimize(l: &Loaded) -> Result<String, CliError> {
    let sys = l.cfg.system()?;
    let spec = l.cfg.search(&sys)?;
    let main = SweepPoint { value: sys.rho, result: optimize(&sys, &spec) };
    if let Err(e) = &main.result {
        return Err(e.clone().into());
    }
    let ts = match spec.objective {
        Objective::Ts => None,
        _ => Some(vec![SweepPoint { value: sys.rho, result: optimize(&sys, &baseline_spec(&spec)) }]),
    };
    emit_points(l.format.unwrap_or(Format::Csv), std::slice::from_ref(&main), ts.as_deref())
}

fn cmd_simulate(l: &Loaded) -> Result<String, CliError> {
    require_json(l.format, "simulate")?;
    let sys = l.cfg.system()?;
    let split = l.cfg.split(&sys)?;
    let thr = l.cfg.thresholds()?;
    let n_trials = l.cfg.n_trials.unwrap_or(10_000);
    if n_trials == 0 {
        return Err(CliError::config("n_trials must be >= 1".into()));
    }
    let seed = l.cfg.seed.unwrap_or(0);
    let report = run_trials(&sys, &split, &thr, n_trials, seed, &l.cfg.sim_options())?;
    let b = evaluate(&sys, &split, &thr, l.cfg.options())?;
    let bounds = Triple { eps_u: b.eps_u, eps_tin: b.eps_tin, eps_sic: b.eps_sic };
    let within_bound = Triple {
        eps_u: report.eps_u.ci_low <= b.eps_u,
        eps_tin: report.eps_tin.ci_low <= b.eps_tin,
        eps_sic: report.eps_sic.ci_low <= b.eps_sic,
    };
    to_json(&SimDocument { seed, n_trials, simulation: report, bounds, within_bound })
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    let res = match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| format!("stdout: {e}"))
        }
    };
    res.map_err(|m| CliError::new(4, "Io", m))
}

/// Executes a parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let (args, f): (&CommonArgs, fn(&Loaded) -> Result<String, CliError>) = match &cli.command {
        Command::Bound(a) => (a, cmd_bound),
        Command::Optimize(a) => (a, cmd_optimize),
        Command::SweepRho(a) => (a, |l| run_sweep(l, SweepVar::Rho)),
        Command::SweepBlocklength(a) => {
            (a, |l| run_sweep(l, SweepVar::Blocklength { ratio: l.cfg.blocklength_ratio.unwrap_or(3) }))
        }
        Command::Simulate(a) => (a, cmd_simulate),
    };
    let loaded = load(args)?;
    let text = f(&loaded)?;
    write_output(loaded.out.as_ref(), &text)
}
