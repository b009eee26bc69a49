//! The `workbench` command line: argument parsing, configuration, dispatch to
//! `workbench-core`, and report/chart emission.
//!
//! Exit codes: 0 success or certified, 1 counterexample or failed check,
//! 2 usage or input error.

pub mod chart;
mod commands;
pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use chart::Chart;
use config::RunConfig;
use report::{InputDigest, Report, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "workbench", version, about = "Exact computations for secondary homological stability")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record wall-clock time in JSON reports (makes them nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a stability range a·d ≤ b·g + e, or the catalog, and test bidegrees against it.
    Ranges(commands::grading::RangesArgs),
    /// Bidegrees with d ≥ g − 1 on or below a slope line.
    SlopeBox(commands::grading::SlopeBoxArgs),
    /// Basis of the free graded Lie algebra on a generator file.
    LieBasis(commands::freealg::LieBasisArgs),
    /// Betti numbers of the free Gerstenhaber algebra (ℚ) or free E₂-algebra (𝔽₂).
    Betti(commands::freealg::BettiArgs),
    /// Homology of a preset or file-defined bigraded complex.
    Homology(commands::cdga::HomologyArgs),
    /// Certify that homology vanishes strictly below a slope line.
    VanishCheck(commands::cdga::VanishArgs),
    /// Tautological classes: Gysin maps, coproducts, pairings, the relation ledger.
    #[command(subcommand)]
    Taut(commands::taut::TautCmd),
    /// The poset Nerve Theorem on a concrete instance.
    #[command(subcommand)]
    Nerve(commands::posets::NerveCmd),
    /// Poset homology and randomized theorem campaigns.
    #[command(subcommand)]
    Poset(commands::posets::PosetCmd),
    /// Sp₄(𝔽₂) acting on totally non-orthogonal 5-subsets.
    #[command(subcommand)]
    Sp4(commands::groups::Sp4Cmd),
    /// Abelianization of a group presentation or an abelian presentation.
    Abelianize(commands::groups::AbelianizeArgs),
    /// Linear algebra utilities.
    #[command(subcommand)]
    La(commands::groups::LaCmd),
    /// Charts in the layout of the reference figures.
    #[command(subcommand)]
    Report(commands::figures::ReportCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Tsv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Per-run state handed to every command: the configuration and a record of
/// the files read.
pub(crate) struct Ctx {
    pub cfg: RunConfig,
    inputs: Vec<InputDigest>,
}

impl Ctx {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(InputDigest::of(&path.display().to_string(), &bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Status {
    Ok,
    Certified,
    Counterexample,
    Failed,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Certified => "certified",
            Status::Counterexample => "counterexample",
            Status::Failed => "failed",
        }
    }

    fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Certified => 0,
            Status::Counterexample | Status::Failed => 1,
        }
    }
}

/// Rows for CSV/TSV output.
#[derive(Clone, Debug, Default)]
pub(crate) struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, sep: char) -> String {
        let field = |s: &str| -> String {
            if sep == ',' && s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else if sep == '\t' {
                s.replace(['\t', '\n'], " ")
            } else {
                s.to_string()
            }
        };
        let mut out = String::new();
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = r.iter().map(|c| field(c)).collect();
            out.push_str(&cells.join(&sep.to_string()));
            out.push('\n');
        }
        out
    }
}

pub(crate) struct Outcome {
    pub status: Status,
    pub params: BTreeMap<String, String>,
    pub result: Value,
    pub text: String,
    pub table: Option<Table>,
    pub chart: Option<Chart>,
}

impl Outcome {
    pub fn new(result: impl Serialize, text: impl Into<String>) -> Self {
        Outcome {
            status: Status::Ok,
            params: BTreeMap::new(),
            result: serde_json::to_value(result).expect("results serialize"),
            text: text.into(),
            table: None,
            chart: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn chart(mut self, c: Chart) -> Self {
        self.chart = Some(c);
        self
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> (String, Result<Outcome>) {
    use commands::*;
    match cmd {
        Command::Ranges(a) => ("ranges".into(), grading::ranges(a, ctx)),
        Command::SlopeBox(a) => ("slope-box".into(), grading::slope_box(a, ctx)),
        Command::LieBasis(a) => ("lie-basis".into(), freealg::lie_basis(a, ctx)),
        Command::Betti(a) => ("betti".into(), freealg::betti(a, ctx)),
        Command::Homology(a) => ("homology".into(), cdga::homology(a, ctx)),
        Command::VanishCheck(a) => ("vanish-check".into(), cdga::vanish_check(a, ctx)),
        Command::Taut(c) => (format!("taut {}", c.name()), taut::run(c, ctx)),
        Command::Nerve(c) => (format!("nerve {}", c.name()), posets::nerve(c, ctx)),
        Command::Poset(c) => (format!("poset {}", c.name()), posets::poset(c, ctx)),
        Command::Sp4(c) => (format!("sp4 {}", c.name()), groups::sp4(c, ctx)),
        Command::Abelianize(a) => ("abelianize".into(), groups::abelianize(a, ctx)),
        Command::La(c) => (format!("la {}", c.name()), groups::la(c, ctx)),
        Command::Report(c) => (format!("report {}", c.name()), figures::run(c, ctx)),
    }
}

/// Sizes the global rayon pool from `WORKBENCH_THREADS`. A pool that already
/// exists (a second in-process run) is left alone.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("WORKBENCH_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| anyhow!("WORKBENCH_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        bail!("WORKBENCH_THREADS must be a positive integer, got `{v}`");
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one invocation and returns its exit code. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    configure_threads()?;
    let mut ctx = Ctx {
        cfg: RunConfig::default(),
        inputs: Vec::new(),
    };
    if let Some(p) = &cli.config {
        let text = ctx.read(p)?;
        ctx.cfg = RunConfig::parse(&text, p.parent().unwrap_or(Path::new("."))).with_context(|| format!("in config {}", p.display()))?;
    }
    let format = ctx.cfg.pick(cli.format, "format")?.unwrap_or(Format::Text);
    let timing = cli.timing || ctx.cfg.parsed::<bool>("timing")?.unwrap_or(false);
    let (command, outcome) = dispatch(cli.command, &mut ctx);
    let outcome = outcome?;
    let code = outcome.status.exit_code();
    let body = match format {
        Format::Text => {
            let mut s = outcome.text.clone();
            if !s.is_empty() && !s.ends_with('\n') {
                s.push('\n');
            }
            if let Some(c) = &outcome.chart {
                s.push('\n');
                s.push_str(&c.to_ascii());
            }
            s
        }
        Format::Json => Report {
            schema_version: SCHEMA_VERSION,
            tool: "workbench",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.clone(),
            parameters: outcome.params,
            inputs: ctx.inputs,
            status: outcome.status.name(),
            exit_code: code,
            result: outcome.result,
            wall_clock_ms: timing.then(|| start.elapsed().as_millis()),
        }
        .to_json(),
        Format::Csv | Format::Tsv => match &outcome.table {
            Some(t) => t.render(if format == Format::Csv { ',' } else { '\t' }),
            None => bail!("`{command}` has no tabular output; use text or json"),
        },
        Format::Svg => match &outcome.chart {
            Some(c) => c.to_svg(),
            None => bail!("`{command}` has no chart; use text or json"),
        },
    };
    out.write_all(body.as_bytes())?;
    Ok(code)
}
