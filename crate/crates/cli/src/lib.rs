//! `qwpps` command line: walks, pre/post-selection analysis, counterfactual
//! trajectories and the regression tables.
//!
//! Exit codes: 0 success, 1 runtime failure (including failed checks), 2
//! usage error.

pub mod fmt;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwpps_core::distributions::{classical_rw_distribution, figure_one, hadamard_walk, CoinInit, SpatialDistribution};
use qwpps_core::pps::{TwoStateSystem, Witness};
use qwpps_core::regression::{verify_bundle, CheckOutcome};
use qwpps_core::scenario_file::ScenarioFile;
use qwpps_core::scenarios::{self, ScenarioBundle, ScenarioParams};
use qwpps_core::Error;

use crate::fmt::{g17, Style};
use crate::report::{DistributionJson, PpsReportJson, SitePoint, Snapshot, VerifyReportJson, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qwpps", version, about = "Quantum walks with pre- and post-selection")]
struct Cli {
    /// Print check details and witness lists.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spatial distribution of a walk on the line.
    Simulate(SimulateArgs),
    /// Certainty table, paradox witnesses and post-selection statistics.
    Pps(PpsArgs),
    /// Counterfactual trajectories through the certain positions.
    Trajectories(TrajectoriesArgs),
    /// Check every built-in scenario against its expectation table.
    Verify(VerifyArgs),
    /// List built-in scenarios and their parameters.
    List,
    /// Write scenario documents or figure data.
    #[command(subcommand)]
    Export(ExportCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Walk {
    HadamardLine,
    ClassicalLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoinStart {
    Zero,
    One,
    Plus,
    PlusI,
}

impl CoinStart {
    fn init(self) -> CoinInit {
        match self {
            CoinStart::Zero => CoinInit::Zero,
            CoinStart::One => CoinInit::One,
            CoinStart::Plus => CoinInit::Plus,
            CoinStart::PlusI => CoinInit::PlusI,
        }
    }

    fn name(self) -> &'static str {
        match self {
            CoinStart::Zero => "zero",
            CoinStart::One => "one",
            CoinStart::Plus => "plus",
            CoinStart::PlusI => "plus-i",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    walk: Walk,
    #[arg(long, value_name = "T")]
    steps: usize,
    /// Initial coin state of the quantum walk.
    #[arg(long, value_enum, default_value = "plus-i")]
    coin_init: CoinStart,
    /// Emit the distribution after every step, not only the last.
    #[arg(long)]
    series: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: DataFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
#[group(skip)]
struct ScenarioArgs {
    /// Built-in scenario name (see `qwpps list`).
    #[arg(long, value_name = "NAME", required_unless_present = "file", conflicts_with = "file")]
    scenario: Option<String>,
    /// Scenario JSON document.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["steps", "s"])]
    file: Option<PathBuf>,
    /// Horizon T (time points for scenario3).
    #[arg(long, value_name = "T")]
    steps: Option<usize>,
    /// Oscillation half-width for scenario2.
    #[arg(long = "s", value_name = "S")]
    s: Option<usize>,
}

#[derive(Debug, Args)]
struct PpsArgs {
    #[command(flatten)]
    source: ScenarioArgs,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TrajectoriesArgs {
    #[command(flatten)]
    source: ScenarioArgs,
    /// Maximum number of trajectories listed; 0 prints the count only.
    #[arg(long, default_value_t = 100)]
    cap: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Restrict to these scenarios (repeatable).
    #[arg(long, value_name = "NAME")]
    only: Vec<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum ExportCommand {
    /// Scenario as a JSON document readable by `--file`.
    Scenario {
        #[command(flatten)]
        source: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CSV `x,p_quantum,p_classical` for the Hadamard walk against the
    /// classical walk, on sites of the parity of T.
    Figure {
        #[arg(long, value_name = "T", default_value_t = 100)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::UnknownScenario(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Runs without colour.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, out, err, Style::default())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, style: Style) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, style) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "qwpps: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, style: Style) -> CmdResult<i32> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Simulate(a) => emit(out, a.output.output.as_deref(), &simulate(a)?).map(|_| EXIT_OK),
        Command::Pps(a) => emit(out, a.output.output.as_deref(), &pps(a, verbose)?).map(|_| EXIT_OK),
        Command::Trajectories(a) => emit(out, a.output.output.as_deref(), &trajectories(a)?).map(|_| EXIT_OK),
        Command::Verify(a) => {
            let bundles = select_bundles(&a.only)?;
            let style = if a.output.output.is_some() {
                Style::default()
            } else {
                style
            };
            let (text, passed) = verify_text(&bundles, a.format, style, verbose)?;
            emit(out, a.output.output.as_deref(), &text)?;
            Ok(verify_exit(passed))
        }
        Command::List => emit(out, None, &list()).map(|_| EXIT_OK),
        Command::Export(ExportCommand::Scenario { source, output }) => {
            let (name, sys) = resolve(source)?;
            let text = ScenarioFile::from_system(&name, &sys).to_json()? + "\n";
            emit(out, output.output.as_deref(), &text).map(|_| EXIT_OK)
        }
        Command::Export(ExportCommand::Figure { steps, output }) => {
            let mut text = String::from("x,p_quantum,p_classical\n");
            for (x, q, c) in figure_one(*steps)? {
                let _ = writeln!(text, "{x},{},{}", g17(q), g17(c));
            }
            emit(out, output.output.as_deref(), &text).map(|_| EXIT_OK)
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CmdResult<()> {
    let res = match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(Failure::Runtime)
}

fn json<T: serde::Serialize>(value: &T) -> CmdResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn simulate(a: &SimulateArgs) -> CmdResult<String> {
    let times: Vec<usize> = if a.series {
        (0..=a.steps).collect()
    } else {
        vec![a.steps]
    };
    let dists: Vec<SpatialDistribution> = times
        .iter()
        .map(|&t| match a.walk {
            Walk::HadamardLine => hadamard_walk(t, a.coin_init.init()),
            Walk::ClassicalLine => Ok(classical_rw_distribution(t)),
        })
        .collect::<qwpps_core::Result<_>>()?;
    let nonzero = |d: &SpatialDistribution| d.iter().filter(|(_, p)| *p > 0.0).collect::<Vec<_>>();
    let mut text = String::new();
    match a.format {
        DataFormat::Csv => {
            text.push_str(if a.series { "t,x,p\n" } else { "x,p\n" });
            for d in &dists {
                for (x, p) in nonzero(d) {
                    if a.series {
                        let _ = write!(text, "{},", d.steps());
                    }
                    let _ = writeln!(text, "{},{}", x.index, g17(p));
                }
            }
        }
        DataFormat::Table => {
            for d in &dists {
                let _ = writeln!(
                    text,
                    "t = {}  mean {:.6}  std_dev {:.6}",
                    d.steps(),
                    d.mean(),
                    d.std_dev()
                );
                let _ = writeln!(text, "{:>6}  {:>20}", "x", "p");
                for (x, p) in nonzero(d) {
                    let _ = writeln!(text, "{:>6}  {:>20.15}", x.index, p);
                }
            }
        }
        DataFormat::Json => {
            let doc = DistributionJson {
                schema: report::DISTRIBUTION_SCHEMA,
                schema_version: SCHEMA_VERSION,
                walk: match a.walk {
                    Walk::HadamardLine => "hadamard-line",
                    Walk::ClassicalLine => "classical-line",
                },
                coin_init: (a.walk == Walk::HadamardLine).then(|| a.coin_init.name()),
                steps: a.steps,
                snapshots: dists
                    .iter()
                    .map(|d| Snapshot {
                        t: d.steps(),
                        mean: d.mean(),
                        std_dev: d.std_dev(),
                        distribution: nonzero(d)
                            .into_iter()
                            .map(|(x, p)| SitePoint { x: x.index, p })
                            .collect(),
                    })
                    .collect(),
            };
            text = json(&doc)?;
        }
    }
    Ok(text)
}

fn params(a: &ScenarioArgs) -> ScenarioParams {
    ScenarioParams { steps: a.steps, s: a.s }
}

fn resolve(a: &ScenarioArgs) -> CmdResult<(String, TwoStateSystem)> {
    if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        let file = ScenarioFile::from_json(&text)?;
        let sys = file.to_system()?;
        return Ok((file.name, sys));
    }
    let name = a.scenario.as_deref().expect("clap enforces a source");
    let bundle = scenarios::build(name, params(a))?;
    Ok((bundle.name, bundle.system))
}

fn set(topo: &qwpps_core::hilbert::Topology, ps: &[qwpps_core::hilbert::Position]) -> String {
    let names: Vec<String> = ps.iter().map(|p| topo.format(*p)).collect();
    format!("{{{}}}", names.join(", "))
}

fn pps(a: &PpsArgs, verbose: bool) -> CmdResult<String> {
    let (name, sys) = resolve(&a.source)?;
    let report = sys.detect_paradox()?;
    if a.format == ReportFormat::Json {
        return json(&PpsReportJson::new(&name, &sys, &report)?);
    }
    let topo = sys.topology();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "scenario {name}  horizon {}  coins {}",
        report.horizon,
        sys.n_coins()
    );
    let _ = writeln!(
        text,
        "overlap re {} im {}  postselection {}",
        g17(report.overlap.re),
        g17(report.overlap.im),
        g17(report.postselection_probability)
    );
    let width = report
        .steps
        .iter()
        .map(|s| set(topo, &s.certain).len())
        .max()
        .unwrap_or(0)
        .max("certain".len());
    let _ = writeln!(text, "{:>4}  {:<width$}  impossible", "t", "certain");
    for s in &report.steps {
        let _ = writeln!(
            text,
            "{:>4}  {:<width$}  {}",
            s.t,
            set(topo, &s.certain),
            set(topo, &s.impossible)
        );
    }
    let same = report
        .witnesses
        .iter()
        .filter(|w| matches!(w, Witness::SameTime { .. }))
        .count();
    let _ = writeln!(
        text,
        "paradox {}  witnesses {} (same-time {}, cross-time {})  exclusivity {}",
        if report.paradox_found { "yes" } else { "no" },
        report.witnesses.len(),
        same,
        report.witnesses.len() - same,
        match report.exclusivity_scope {
            qwpps_core::pps::ExclusivityScope::Operator => "operator",
            qwpps_core::pps::ExclusivityScope::Support => "support",
        }
    );
    if verbose {
        for w in &report.witnesses {
            let _ = match w {
                Witness::SameTime { t, first, second } => {
                    writeln!(text, "  t={t}: {} and {}", topo.format(*first), topo.format(*second))
                }
                Witness::CrossTime {
                    earlier,
                    later,
                    basis,
                    velocity,
                } => writeln!(
                    text,
                    "  t={}: {} then t={}: {} ({}, velocity {})",
                    earlier.t,
                    topo.format(earlier.position),
                    later.t,
                    topo.format(later.position),
                    basis.as_str(),
                    velocity.map_or("n/a".to_string(), g17)
                ),
            };
        }
    }
    let _ = writeln!(text, "trajectories {}", report.trajectory_count);
    Ok(text)
}

fn trajectories(a: &TrajectoriesArgs) -> CmdResult<String> {
    let (_, sys) = resolve(&a.source)?;
    let set = sys.enumerate_trajectories(a.cap)?;
    let topo = sys.topology();
    let mut text = String::new();
    for t in &set.sample {
        text.push_str(&t.format(topo));
        if t.has_leap(topo) {
            text.push_str("  leap");
        }
        if t.hops_components() {
            text.push_str("  hop");
        }
        text.push('\n');
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        text,
        "total {}  leap-free {}  leap {}  component-hop {}",
        set.count,
        set.leap_free_count,
        yes(set.any_leap),
        yes(set.any_component_hop)
    );
    Ok(text)
}

fn select_bundles(only: &[String]) -> CmdResult<Vec<ScenarioBundle>> {
    let infos = scenarios::list_scenarios();
    for name in only {
        if !infos.iter().any(|i| i.name == name) {
            return Err(Error::UnknownScenario(name.clone()).into());
        }
    }
    infos
        .iter()
        .filter(|i| only.is_empty() || only.iter().any(|n| n == i.name))
        .map(|i| scenarios::build(i.name, ScenarioParams::default()).map_err(Failure::from))
        .collect()
}

fn verify_exit(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_RUNTIME
    }
}

/// `verify` over caller-supplied bundles, writing the table to `out`.
pub fn verify_command(bundles: &[ScenarioBundle], format: VerifyFormat, out: &mut dyn Write) -> i32 {
    match verify_text(bundles, format, Style::default(), false) {
        Ok((text, passed)) => match out.write_all(text.as_bytes()) {
            Ok(()) => verify_exit(passed),
            Err(_) => EXIT_RUNTIME,
        },
        Err(f) => f.code(),
    }
}

/// Renders the verification matrix; the flag is true iff every check passed.
pub fn verify_text(
    bundles: &[ScenarioBundle],
    format: impl Into<VerifyFormat>,
    style: Style,
    verbose: bool,
) -> CmdResult<(String, bool)> {
    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    for b in bundles {
        outcomes.extend(verify_bundle(b)?);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let text = match format.into() {
        VerifyFormat::Json => json(&VerifyReportJson::new(&outcomes))?,
        VerifyFormat::Table => {
            let mut text = String::new();
            let name_w = outcomes.iter().map(|o| o.scenario.len()).max().unwrap_or(0);
            for o in &outcomes {
                let _ = write!(
                    text,
                    "{}  {:<name_w$}  {:<7}  {}",
                    style.status(o.passed),
                    o.scenario,
                    o.provenance.as_str(),
                    o.check
                );
                if verbose || !o.passed {
                    let _ = write!(text, "  [{}]", o.detail);
                }
                text.push('\n');
            }
            for b in bundles {
                let mine: Vec<&CheckOutcome> = outcomes.iter().filter(|o| o.scenario == b.name).collect();
                let ok = mine.iter().filter(|o| o.passed).count();
                let _ = writeln!(text, "{:<name_w$}  {ok}/{} passed", b.name, mine.len());
            }
            if failed == 0 {
                let _ = writeln!(text, "all {} checks passed", outcomes.len());
            } else {
                let _ = writeln!(text, "{failed} of {} checks failed", outcomes.len());
            }
            text
        }
    };
    Ok((text, failed == 0))
}

/// Output form of [`verify_text`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyFormat {
    Table,
    Json,
}

impl From<ReportFormat> for VerifyFormat {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Table => VerifyFormat::Table,
            ReportFormat::Json => VerifyFormat::Json,
        }
    }
}

fn list() -> String {
    let mut text = String::new();
    for i in scenarios::list_scenarios() {
        let params: Vec<String> = i
            .params
            .iter()
            .map(|p| format!("--{} {} ({})", p.name, p.default, p.constraint))
            .collect();
        let _ = writeln!(text, "{:<16} {}", i.name, i.summary);
        for p in params {
            let _ = writeln!(text, "{:<16}   {p}", "");
        }
    }
    text
}
