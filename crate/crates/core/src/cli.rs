//! The `gdw` command line.
//!
//! Every subcommand is a thin layer over the library. Machine-readable
//! output embeds a [`RunManifest`] so a result file is enough to rerun it.
//! Exit codes: 0 success (for `certify`: certified), 1 usage, I/O or
//! validation error, 2 `certify` ran but did not certify.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::certify::{
    certify_estimate, estimate_asp, estimate_from_counts, ingest_click_log, CertificationReport, Verdict,
    DEFAULT_SIGMA_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::mub::{build_mub, Basis};
use crate::oracles::{classical_rac_search, tradeoff_grid_check, two_factor_grid_bound, DecoderSearch};
use crate::sim::{fom_closed_form, simulate, simulate_with_log, ClickTally, SimConfig};
use crate::solver::{bound_table, solve_bound, solve_many, BoundResult, SolverConfig};
use crate::structure::{Filter, Kind, ProductStructure};
use crate::tradeoff::{sample_curve, tradeoff};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "GDW_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gdw", version, about = "Gamut dimension witness bounds, MUB encoders, click simulation and certification")]
pub struct Cli {
    /// JSON object of parameter defaults, keyed by flag name; flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal ASP for every product structure of a dimension.
    Bounds(BoundsArgs),
    /// Evaluate or sample a trade-off function.
    Tradeoff(TradeoffArgs),
    /// Export one of the +-1 MUB matrices for d = 4^k.
    Mub(MubArgs),
    /// Simulate the single-detector experiment.
    Simulate(SimulateArgs),
    /// Score click counts against the bounds of a dimension.
    Certify(CertifyArgs),
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub dim: u64,
    /// Skip structures with classical factors.
    #[arg(long)]
    pub quantum_only: bool,
    /// Comma-separated structures to solve instead of the full enumeration.
    #[arg(long, value_name = "LIST")]
    pub structures: Option<String>,
    /// Local search box tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub out: Option<OutFormat>,
    /// Decimals in table and CSV output.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Q,
    C,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Q => Kind::Quantum,
            KindArg::C => Kind::Classical,
        }
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("point").required(true).args(["z", "curve"]))]
pub struct TradeoffArgs {
    #[arg(long)]
    pub dim: u64,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Evaluate at a single point.
    #[arg(long)]
    pub z: Option<f64>,
    /// Emit N+1 rows `z,m` evenly covering [1/d, 1].
    #[arg(long, value_name = "N")]
    pub curve: Option<usize>,
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MubFormat {
    Csv,
    Pm1,
}

#[derive(Debug, Args)]
pub struct MubArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub basis: u8,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pm1")]
    pub format: MubFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub visibility: Option<f64>,
    #[arg(long)]
    pub rounds: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the per-round click log here.
    #[arg(long, value_name = "PATH")]
    pub log: Option<PathBuf>,
    /// Sample photon numbers explicitly (slower; for cross-validation).
    #[arg(long)]
    pub photon_counting: bool,
    #[arg(long, value_enum)]
    pub out: Option<OutFormat>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["counts", "log"]))]
pub struct CertifyArgs {
    /// Click counts `D1,D2`.
    #[arg(long, value_name = "D1,D2")]
    pub counts: Option<String>,
    /// Click log written by `simulate --log`.
    #[arg(long, value_name = "PATH")]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub dim: u64,
    /// z-score needed to call a bound violated.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Output of `bounds --out json`; computed on the fly when omitted.
    #[arg(long, value_name = "PATH")]
    pub bounds_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub out: Option<OutFormat>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exhaustive classical 2-dit RAC optimum.
    ClassicalRac {
        #[arg(long)]
        dim: u64,
        /// Restrict Bob to outputting the received symbol.
        #[arg(long)]
        identity_decoder: bool,
    },
    /// Sweep the trade-off-achieving states.
    Tradeoff {
        #[arg(long)]
        dim: u64,
        #[arg(long, default_value_t = 10_000)]
        resolution: usize,
    },
    /// Lattice maximum of a two-factor objective, next to the solver's value.
    GridBound {
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = 10_000)]
        resolution: usize,
    },
}

/// Parameter defaults read from a `--config` file. Keys are flag names.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ConfigOverrides {
    pub k: Option<u32>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub visibility: Option<f64>,
    pub rounds: Option<u64>,
    pub seed: Option<u64>,
    pub photon_counting: Option<bool>,
    pub tol: Option<f64>,
    pub objective_tol: Option<f64>,
    pub grid_starts: Option<usize>,
    pub random_starts: Option<usize>,
    pub precision: Option<usize>,
    pub sigma: Option<f64>,
}

const CONFIG_KEYS: &[&str] = &[
    "k",
    "mu",
    "nu",
    "visibility",
    "rounds",
    "seed",
    "photon-counting",
    "tol",
    "objective-tol",
    "grid-starts",
    "random-starts",
    "precision",
    "sigma",
];

impl ConfigOverrides {
    /// Parses a flat JSON object; unknown keys are an error naming all of them.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        let map: Map<String, Value> = serde_json::from_str(text)?;
        let unknown: Vec<&str> = map
            .keys()
            .map(String::as_str)
            .filter(|k| !CONFIG_KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!("unknown config keys: {}", unknown.join(", "))));
        }
        Ok(serde_json::from_value(Value::Object(map))?)
    }

    /// Solver settings: `tol`/`seed` flags first, then this file, then defaults.
    pub fn solver_config(&self, tol: Option<f64>, seed: Option<u64>) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            box_tolerance: tol.or(self.tol).unwrap_or(d.box_tolerance),
            objective_tolerance: self.objective_tol.unwrap_or(d.objective_tolerance),
            multistart_grid: self.grid_starts.unwrap_or(d.multistart_grid),
            random_starts: self.random_starts.unwrap_or(d.random_starts),
            seed: seed.or(self.seed).unwrap_or(d.seed),
            max_iterations: d.max_iterations,
        }
    }

    /// Simulation settings; a missing seed is drawn from system entropy.
    pub fn sim_config(&self, args: &SimulateArgs) -> SimConfig {
        let d = SimConfig::default();
        SimConfig {
            k: args.k.or(self.k).unwrap_or(d.k),
            mu: args.mu.or(self.mu).unwrap_or(d.mu),
            nu: args.nu.or(self.nu).unwrap_or(d.nu),
            visibility: args.visibility.or(self.visibility).unwrap_or(d.visibility),
            rounds: args.rounds.or(self.rounds).unwrap_or(d.rounds),
            seed: args.seed.or(self.seed).unwrap_or_else(rand::random),
            photon_counting: args.photon_counting || self.photon_counting.unwrap_or(false),
        }
    }
}

pub fn load_config(path: &Path) -> Result<ConfigOverrides> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    ConfigOverrides::from_json(&text)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tool_version: String,
    pub seed: u64,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seed: u64) -> Self {
        let parameters = match parameters {
            Value::Object(m) => m.into_iter().collect(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        Self {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

/// Schema of `bounds --out json`, also accepted by `certify --bounds-file`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub dim: u64,
    pub results: Vec<BoundResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub manifest: RunManifest,
    pub config: SimConfig,
    pub tally: ClickTally,
    pub fom: Option<f64>,
    pub fom_closed_form: f64,
    pub noise_model: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationDocument {
    pub manifest: RunManifest,
    #[serde(flatten)]
    pub report: CertificationReport,
}

const NOISE_MODEL: &str = "white noise q -> V q + (1 - V)/d (modelling convention)";

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // Already-initialised pools (repeated in-process calls) keep their size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `argv` (program name first) and runs it against stdout/stderr.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`dispatch`] with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_stdout = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if to_stdout {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return if to_stdout { EXIT_OK } else { EXIT_ERROR };
        }
    };
    configure_threads();
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let overrides = match &cli.config {
        Some(path) => load_config(path)?,
        None => ConfigOverrides::default(),
    };
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, &overrides, out),
        Command::Tradeoff(a) => cmd_tradeoff(a, &overrides, out),
        Command::Mub(a) => cmd_mub(a, out, err),
        Command::Simulate(a) => cmd_simulate(a, &overrides, out, err),
        Command::Certify(a) => cmd_certify(a, &overrides, out),
        Command::Oracle(o) => cmd_oracle(o, out),
    }
}

fn parse_structure_list(list: &str) -> Result<Vec<ProductStructure>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn cmd_bounds(a: &BoundsArgs, o: &ConfigOverrides, out: &mut dyn Write) -> Result<i32> {
    let config = o.solver_config(a.tol, a.seed);
    let precision = a.precision.or(o.precision).unwrap_or(6);
    let filter = if a.quantum_only { Filter::QuantumOnly } else { Filter::All };
    let results = match &a.structures {
        Some(list) => {
            let structures = parse_structure_list(list)?;
            if let Some(s) = structures.iter().find(|s| s.total_dim() != a.dim) {
                return Err(Error::Config(format!("{s} does not have dimension {}", a.dim)));
            }
            solve_many(&structures, &config)?
        }
        None => bound_table(a.dim, filter, &config)?,
    };
    match a.out {
        Some(OutFormat::Json) => {
            let manifest = RunManifest::new(
                "bounds",
                json!({
                    "dim": a.dim,
                    "quantum_only": a.quantum_only,
                    "structures": a.structures,
                    "solver": config,
                }),
                config.seed,
            );
            let doc = BoundsDocument {
                manifest: Some(manifest),
                dim: a.dim,
                results,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Some(OutFormat::Csv) => {
            for r in &results {
                writeln!(out, "{},{:.*}", r.structure, precision, r.asp)?;
            }
        }
        None => {
            let width = results
                .iter()
                .map(|r| r.structure.to_string().len())
                .max()
                .unwrap_or(0)
                .max(9);
            writeln!(out, "{:<width$}  optimal ASP", "structure")?;
            for r in &results {
                writeln!(out, "{:<width$}  {:.*}", r.structure.to_string(), precision, r.asp)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tradeoff(a: &TradeoffArgs, o: &ConfigOverrides, out: &mut dyn Write) -> Result<i32> {
    let kind = Kind::from(a.kind);
    let precision = a.precision.or(o.precision).unwrap_or(6);
    if let Some(z) = a.z {
        writeln!(out, "{:.*}", precision, tradeoff(kind, a.dim, z)?)?;
    } else if let Some(n) = a.curve {
        for (z, m) in sample_curve(kind, a.dim, n)? {
            writeln!(out, "{z:.precision$},{m:.precision$}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_mub(a: &MubArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mubs = build_mub(a.k)?;
    let basis = Basis::from_index(u64::from(a.basis)).expect("clap restricts basis to 1..=2");
    let write_to = |w: &mut dyn Write| -> Result<()> {
        match a.format {
            MubFormat::Pm1 => mubs.write_pm1(basis, w),
            MubFormat::Csv => mubs.write_csv(basis, w),
        }
    };
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::File {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            write_to(&mut w)?;
            w.flush()?;
            writeln!(err, "wrote basis {} of d={} to {}", a.basis, mubs.dim(), path.display())?;
        }
        None => write_to(out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(a: &SimulateArgs, o: &ConfigOverrides, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = o.sim_config(a);
    config.validate()?;
    if config.expected_d1() < 100.0 {
        writeln!(
            err,
            "warning: only {:.1} D1 clicks expected; consider more rounds",
            config.expected_d1()
        )?;
    }
    let tally = match &a.log {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::File {
                path: path.clone(),
                source,
            })?;
            simulate_with_log(&config, BufWriter::new(file))?
        }
        None => simulate(&config)?,
    };
    let closed = fom_closed_form(config.effective_q(), config.dim(), config.nu_mu())?;
    let fom = tally.figure_of_merit();
    match a.out {
        Some(OutFormat::Json) => {
            let manifest = RunManifest::new("simulate", serde_json::to_value(&config)?, config.seed);
            let doc = SimulationDocument {
                manifest,
                config,
                tally,
                fom,
                fom_closed_form: closed,
                noise_model: NOISE_MODEL.to_string(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Some(OutFormat::Csv) => {
            writeln!(out, "X1,X2,D1,D2")?;
            writeln!(out, "{},{},{},{}", tally.x1, tally.x2, tally.d1, tally.d2)?;
        }
        None => {
            writeln!(
                out,
                "d={} mu={} nu={} visibility={} rounds={} seed={}",
                config.dim(),
                config.mu,
                config.nu,
                config.visibility,
                config.rounds,
                config.seed
            )?;
            writeln!(out, "X1={} X2={} D1={} D2={}", tally.x1, tally.x2, tally.d1, tally.d2)?;
            match fom {
                Some(f) => writeln!(out, "D1/(D1+D2) = {f:.6}  (closed form {closed:.6})")?,
                None => writeln!(out, "no clicks (closed form {closed:.6})")?,
            }
            if config.visibility < 1.0 {
                writeln!(out, "noise model: {NOISE_MODEL}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_counts(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Config(format!("--counts expects D1,D2 with non-negative integers, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn cmd_certify(a: &CertifyArgs, o: &ConfigOverrides, out: &mut dyn Write) -> Result<i32> {
    let threshold = a.sigma.or(o.sigma).unwrap_or(DEFAULT_SIGMA_THRESHOLD);
    let estimate = match (&a.counts, &a.log) {
        (Some(c), _) => {
            let (d1, d2) = parse_counts(c)?;
            estimate_from_counts(d1, d2)?
        }
        (None, Some(path)) => estimate_asp(&ingest_click_log(path, Some(a.dim))?)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let solver = o.solver_config(None, None);
    let bounds = match &a.bounds_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::File {
                path: path.clone(),
                source,
            })?;
            let doc: BoundsDocument = serde_json::from_str(&text)?;
            if doc.dim != a.dim {
                return Err(Error::Config(format!(
                    "bounds file is for d={}, not d={}",
                    doc.dim, a.dim
                )));
            }
            doc.results
        }
        None => bound_table(a.dim, Filter::All, &solver)?,
    };
    let report = certify_estimate(estimate, a.dim, &bounds, threshold)?;
    let code = if report.is_certified() { EXIT_OK } else { EXIT_NOT_CERTIFIED };
    match a.out {
        Some(OutFormat::Json) => {
            let manifest = RunManifest::new(
                "certify",
                json!({
                    "dim": a.dim,
                    "counts": a.counts,
                    "log": a.log,
                    "bounds_file": a.bounds_file,
                    "sigma": threshold,
                    "solver": a.bounds_file.is_none().then_some(&solver),
                }),
                solver.seed,
            );
            serde_json::to_writer_pretty(&mut *out, &CertificationDocument { manifest, report })?;
            writeln!(out)?;
        }
        Some(OutFormat::Csv) => {
            writeln!(out, "structure,asp,z_score,violated")?;
            for b in &report.bounds {
                writeln!(out, "{},{:.6},{:.3},{}", b.structure, b.asp, b.z_score, b.violated)?;
            }
        }
        None => {
            writeln!(out, "p = {:.6} +- {:.6}  (threshold {} sigma)", report.p_hat, report.sigma, threshold)?;
            writeln!(out, "{:<24} {:>10} {:>9}  violated", "structure", "bound", "z")?;
            for b in &report.bounds {
                writeln!(
                    out,
                    "{:<24} {:>10.6} {:>9.3}  {}",
                    b.structure.to_string(),
                    b.asp,
                    b.z_score,
                    if b.violated { "yes" } else { "no" }
                )?;
            }
            let verdict = match &report.verdict {
                Verdict::IrreducibleQuantum(d) => format!("irreducible {d}-dimensional quantum system"),
                Verdict::ViolatesOnly(list) => format!("not certified; violates only {} bound(s)", list.len()),
                Verdict::Inconclusive => "inconclusive".to_string(),
            };
            writeln!(out, "verdict: {verdict}")?;
        }
    }
    Ok(code)
}

fn cmd_oracle(cmd: &OracleCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        OracleCommand::ClassicalRac { dim, identity_decoder } => {
            let search = if *identity_decoder {
                DecoderSearch::IdentityOnly
            } else {
                DecoderSearch::All
            };
            let value = classical_rac_search(*dim, search)?;
            let formula = 0.5 * (1.0 + 1.0 / *dim as f64);
            writeln!(out, "exhaustive {value:.12}  formula {formula:.12}  diff {:.3e}", (value - formula).abs())?;
            Ok(if value == formula { EXIT_OK } else { EXIT_ERROR })
        }
        OracleCommand::Tradeoff { dim, resolution } => {
            let check = tradeoff_grid_check(*dim, *resolution)?;
            for r in [&check.curve, &check.optimum] {
                writeln!(
                    out,
                    "{:<17} {}  oracle {:.12}  analytic {:.12}  diff {:.3e}  {}",
                    r.name,
                    r.instance,
                    r.oracle_value,
                    r.analytic_value,
                    r.abs_diff,
                    if r.passed() { "ok" } else { "FAIL" }
                )?;
            }
            writeln!(out, "max excess over curve {:.3e}", check.max_excess)?;
            Ok(if check.curve.passed() && check.optimum.passed() {
                EXIT_OK
            } else {
                EXIT_ERROR
            })
        }
        OracleCommand::GridBound { structure, resolution } => {
            let s: ProductStructure = structure.parse()?;
            let grid = two_factor_grid_bound(&s, *resolution)?;
            let solved = solve_bound(&s, &SolverConfig::default())?;
            writeln!(
                out,
                "{s}  grid {grid:.9}  solver {:.9}  diff {:.3e}",
                solved.asp,
                (grid - solved.asp).abs()
            )?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["gdw"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_file_keys_are_checked() {
        assert_eq!(ConfigOverrides::from_json("").unwrap(), ConfigOverrides::default());
        assert_eq!(ConfigOverrides::from_json("{}").unwrap(), ConfigOverrides::default());
        let e = ConfigOverrides::from_json(r#"{"muu":0.4,"nu":0.1,"sed":3}"#).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("muu") && msg.contains("sed"), "{msg}");
        let o = ConfigOverrides::from_json(r#"{"mu":0.4,"nu":0.13,"grid-starts":2}"#).unwrap();
        assert_eq!(o.mu, Some(0.4));
        assert_eq!(o.grid_starts, Some(2));
    }

    #[test]
    fn flags_override_file_values() {
        let o = ConfigOverrides::from_json(r#"{"mu":0.4,"nu":0.13,"rounds":5}"#).unwrap();
        let args = SimulateArgs {
            k: None,
            mu: None,
            nu: Some(0.2),
            visibility: None,
            rounds: Some(1_000_000),
            seed: Some(1),
            log: None,
            photon_counting: false,
            out: None,
        };
        let c = o.sim_config(&args);
        assert_eq!((c.mu, c.nu, c.rounds, c.seed, c.k), (0.4, 0.2, 1_000_000, 1, 5));
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(!err.is_empty());
        let (code, _, _) = run_capture(&["tradeoff", "--dim", "4", "--kind", "q"]);
        assert_eq!(code, EXIT_ERROR);
        let (code, _, err) = run_capture(&["tradeoff", "--dim", "4", "--kind", "q", "--z", "0.1"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("outside"));
    }

    #[test]
    fn tradeoff_point_and_curve() {
        let (code, out, _) = run_capture(&["tradeoff", "--dim", "4", "--kind", "q", "--z", "0.25"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1.000000\n");
        let (_, out, _) = run_capture(&["tradeoff", "--dim", "2", "--kind", "c", "--curve", "4"]);
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0], "0.500000,1.000000");
        assert_eq!(rows[4], "1.000000,0.500000");
    }

    #[test]
    fn counts_parsing() {
        assert_eq!(parse_counts("12, 30").unwrap(), (12, 30));
        assert!(parse_counts("12").is_err());
        assert!(parse_counts("-1,3").is_err());
    }
}
