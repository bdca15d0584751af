//! Command-line front end.
//!
//! Every run writes one artifact: JSON by default, or a CSV projection with
//! a `#` preamble carrying the tool version, seed and input digests. The
//! thread count and output path are not echoed, so artifacts from runs that
//! differ only in those are byte-identical.

mod commands;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::extremal::{Forbidden, SearchMode};
use crate::roots::RootMethod;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the fixture directory.
pub const FIXTURES_ENV: &str = "TURANLAB_FIXTURES";

pub fn default_fixtures_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

#[derive(Parser, Debug)]
#[command(name = "turanlab", version, about = "Desk-scale hypergraph Turán toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "command")]
pub enum Command {
    /// Generate a hypergraph.
    Gen(GenArgs),
    /// Test for K_{s,t}^{(r)} and for the four-edge configuration.
    Check(CheckArgs),
    /// Root reports for every s-set.
    Roots(RootsArgs),
    /// Extract a regular subgraph.
    Regularize(RegularizeArgs),
    /// Build the dense part digraph.
    Digraph(DigraphArgs),
    /// Exact ex(n, K_{s,t}^{(r)}).
    Turan(TuranArgs),
    /// Exact maximum size without the four-edge configuration.
    Fr(FrArgs),
    /// Run the invariant suite on the fixtures and a seeded random battery.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Check(_) => "check",
            Command::Roots(_) => "roots",
            Command::Regularize(_) => "regularize",
            Command::Digraph(_) => "digraph",
            Command::Turan(_) => "turan",
            Command::Fr(_) => "fr",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Star,
    RandomMaximal,
    CompletePartite,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForbidArg {
    Kst,
    Quadruple,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Vertex count of a general host.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Part sizes of a partite host, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub parts: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = ForbidArg::Kst)]
    pub forbid: ForbidArg,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Edge probability for `random`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Emit the text format instead of an artifact.
    #[arg(long)]
    pub text: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Matching,
    Exact,
}

impl From<MethodArg> for RootMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Matching => RootMethod::Matching,
            MethodArg::Exact => RootMethod::Exact,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RootsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Report s-sets with more than (t-1)(r-1) roots.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Matching)]
    pub method: MethodArg,
    #[arg(long, default_value_t = crate::roots::DEFAULT_EXACT_BUDGET)]
    pub exact_budget: usize,
    /// Include s-sets with an empty common neighbourhood.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RegularizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Replaces 4r·log₂^r n in the deletion threshold.
    #[arg(long, alias = "threshold-divisor")]
    pub deletion_divisor: Option<f64>,
    #[arg(long, default_value_t = crate::regularity::DEFAULT_PARTITION_RETRIES)]
    pub retries: usize,
    /// Also write the regular subgraph in the text format.
    #[arg(long)]
    pub subgraph_output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DensityArgs {
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Defaults to (s+1)·epsilon.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Defaults to 4r·log₂^r n.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub codegree_threshold: Option<f64>,
    #[arg(long)]
    pub sset_threshold: Option<f64>,
    #[arg(long)]
    pub zero_threshold: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub margin: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Matching)]
    pub root_method: MethodArg,
    #[arg(long, default_value_t = crate::roots::DEFAULT_EXACT_BUDGET)]
    pub exact_budget: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DigraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub density: DensityArgs,
    /// Fail parts whose host is not certified regular.
    #[arg(long)]
    pub require_regular: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    All,
    Partite,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => SearchMode::All,
            ModeArg::Partite => SearchMode::Partite,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = crate::extremal::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub ceiling: Option<usize>,
    #[arg(long, default_value_t = crate::extremal::DEFAULT_WITNESS_LIMIT)]
    pub witnesses: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TuranArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    pub mode: ModeArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FrArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Defaults to $TURANLAB_FIXTURES, then the repository fixtures.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Size of the seeded random battery.
    #[arg(long, default_value_t = 24)]
    pub random_instances: usize,
    #[arg(long, default_value_t = crate::extremal::DEFAULT_BUDGET)]
    pub budget: u64,
}

/// Failure classes, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

pub(crate) fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub(crate) fn digest(path: &str, bytes: &[u8]) -> InputDigest {
    InputDigest {
        path: path.to_string(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

/// Reads a hypergraph file. Unreadable files are I/O errors; malformed
/// contents are configuration errors.
pub(crate) fn read_input(path: &Path) -> Result<(crate::Hypergraph, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let g = crate::Hypergraph::from_text(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((g, digest(&path.display().to_string(), &bytes)))
}

/// What a command produced, before it is wrapped into an artifact.
pub(crate) struct Produced {
    pub result: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub table: Table,
    /// Raw text replacing the artifact.
    pub raw: Option<String>,
    pub violation: Option<String>,
}

#[derive(Default)]
pub(crate) struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub(crate) fn join(vs: &[crate::Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct Artifact<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a Command,
    inputs: &'a [InputDigest],
    result: &'a serde_json::Value,
}

fn render(cli: &Cli, produced: &Produced) -> Result<Vec<u8>, CliError> {
    if let Some(raw) = &produced.raw {
        return Ok(raw.clone().into_bytes());
    }
    match cli.global.format {
        Format::Json => {
            let artifact = Artifact {
                tool: "turanlab",
                version: VERSION,
                command: cli.command.name(),
                seed: cli.global.seed,
                config: &cli.command,
                inputs: &produced.inputs,
                result: &produced.result,
            };
            let mut out = serde_json::to_vec_pretty(&artifact).map_err(config_err)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = Vec::new();
            let config = serde_json::to_string(&cli.command).map_err(config_err)?;
            writeln!(out, "# turanlab {VERSION} {} seed={} config={config}", cli.command.name(), cli.global.seed)
                .map_err(|e| CliError::Io(e.to_string()))?;
            for input in &produced.inputs {
                writeln!(out, "# input {} sha256={}", input.path, input.sha256).map_err(|e| CliError::Io(e.to_string()))?;
            }
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(&produced.table.header).map_err(io)?;
            for row in &produced.table.rows {
                w.write_record(row).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let produced = commands::dispatch(cli)?;
    let bytes = render(cli, &produced)?;
    match &cli.global.output {
        Some(path) => fs::write(path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    match produced.violation {
        Some(v) => Err(CliError::Invariant(v)),
        None => Ok(()),
    }
}

/// Runs a parsed command line inside a pool of the requested size.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.global.threads {
        Some(0) => Err(CliError::Config("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(config_err)?
            .install(|| execute(cli)),
        None => execute(cli),
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("turanlab: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn forbidden(kind: ForbidArg, r: usize, s: usize, t: usize) -> Result<Forbidden, CliError> {
    Ok(match kind {
        ForbidArg::Kst => Forbidden::Kst(crate::PatternParams::new(r, s, t).map_err(config_err)?),
        ForbidArg::Quadruple => Forbidden::Quadruple,
    })
}
