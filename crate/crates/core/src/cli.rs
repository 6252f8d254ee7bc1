// Copyright contributors to the qmap project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `qmap` command-line driver.
//!
//! Exit codes: 0 on success, 1 for input or validation errors, 2 when the
//! tool's own output fails an internal check.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decompose::{expand_mct, lower_circuit, DecomposeConfig};
use crate::metrics::{
    benchmark, place, run_pipeline, run_with_grid, CircuitFamily, CostReport, PipelineConfig, Strategy,
};
use crate::placement::{Grid, PlacementConfig};
use crate::qasm::{emit_qasm, emit_qasm_with_comments, parse_qasm, Circuit, Gate};
use crate::routing::{GateOrigin, RoutedCircuit, RoutingConfig};
use crate::verify::{self, AdjacencyVerdict};

#[derive(Debug, Parser)]
#[command(
    name = "qmap",
    version,
    about = "Place and route quantum circuits on nearest-neighbor grids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place, route, and report.
    Run(RunArgs),
    /// Compute the placement grid only.
    Place(RunArgs),
    /// Route against a placement read from a grid CSV file.
    Route(RouteArgs),
    /// Check the gate lowerings (and an input circuit's lowering, if given).
    Verify(VerifyArgs),
    /// Compare placement strategies on seeded random circuits.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Longpath,
    Identity,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Defaults to standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Lower toffoli, fredkin, and mct gates before routing.
    #[arg(long)]
    pub decompose: bool,
    #[arg(long)]
    pub no_restore: bool,
    #[arg(long)]
    pub no_cancel: bool,
    /// Print a cost report to standard error (standard output when -o is set).
    #[arg(long, value_enum)]
    pub report: Option<ReportFormat>,
    /// Write a comment before each gate's inserted swaps.
    #[arg(long)]
    pub annotate: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "longpath")]
    pub strategy: StrategyArg,
    /// Required by the random strategy.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the interaction matrix as CSV.
    #[arg(long, value_name = "PATH")]
    pub dump_graph: Option<PathBuf>,
    /// Write the initial placement as row-major CSV (-1 for empty cells).
    #[arg(long, value_name = "PATH")]
    pub dump_grid: Option<PathBuf>,
    /// Print the initial placement as text art.
    #[arg(long)]
    pub show_grid: bool,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Placement CSV, as written by `--dump-grid`.
    #[arg(long, value_name = "PATH")]
    pub grid: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 9)]
    pub qubits: usize,
    #[arg(long, default_value_t = 100)]
    pub gates: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub report: ReportFormat,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_qasm(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, text: &str) -> Result<(), CliError> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string()))
    }

    fn err(&mut self, text: &str) -> Result<(), CliError> {
        self.err
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

impl CommonArgs {
    fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            decompose: self.decompose.then(DecomposeConfig::full),
            placement: PlacementConfig {
                rows: self.rows,
                cols: self.cols,
            },
            routing: RoutingConfig {
                restore: !self.no_restore,
                cancel: !self.no_cancel,
                ..RoutingConfig::default()
            },
        }
    }

    /// Routed QASM goes to `-o` or stdout; the report goes to stdout when the
    /// circuit went to a file and to stderr otherwise.
    fn emit(&self, io: &mut Io<'_>, routed: &RoutedCircuit, report: &CostReport) -> Result<(), CliError> {
        let text = if self.annotate {
            emit_qasm_with_comments(&routed.circuit, &route_comments(&routed.origins))
        } else {
            emit_qasm(&routed.circuit)
        };
        let report_text = self.report.map(|f| match f {
            ReportFormat::Text => report.to_text(),
            ReportFormat::Json => report.to_json() + "\n",
        });
        match &self.output {
            Some(path) => {
                write_file(path, &text)?;
                if let Some(r) = report_text {
                    io.out(&r)?;
                }
            }
            None => {
                io.out(&text)?;
                if let Some(r) = report_text {
                    io.err(&r)?;
                }
            }
        }
        Ok(())
    }
}

fn route_comments(origins: &[GateOrigin]) -> BTreeMap<usize, Vec<String>> {
    let mut notes = BTreeMap::new();
    let mut prev: Option<GateOrigin> = None;
    for (k, &o) in origins.iter().enumerate() {
        let starts_group = match (prev, o) {
            (_, GateOrigin::Source(_)) => false,
            (Some(p), o) => p != o,
            (None, _) => true,
        };
        if starts_group {
            notes
                .entry(k)
                .or_insert_with(Vec::new)
                .push(format!("route for line {}", o.source_index()));
        }
        prev = Some(o);
    }
    notes
}

fn check_replay(routed: &RoutedCircuit) -> Result<(), CliError> {
    match verify::replay_adjacency(routed) {
        AdjacencyVerdict::Pass => Ok(()),
        AdjacencyVerdict::Violation { gate_index, reason } => Err(CliError::Internal(format!(
            "routed circuit fails adjacency at gate {gate_index}: {reason}"
        ))),
    }
}

fn strategy_of(args: &RunArgs) -> Result<Strategy, CliError> {
    Ok(match args.strategy {
        StrategyArg::Longpath => Strategy::LongPath,
        StrategyArg::Identity => Strategy::Identity,
        StrategyArg::Random => Strategy::Random(
            args.seed
                .ok_or_else(|| CliError::Input("--strategy random requires --seed".into()))?,
        ),
    })
}

fn cmd_run(args: &RunArgs, io: &mut Io<'_>, route: bool) -> Result<(), CliError> {
    let circuit = read_circuit(&args.common.input)?;
    let cfg = args.common.pipeline_config();
    let strategy = strategy_of(args)?;
    let placement = if route {
        let out = run_pipeline(&circuit, strategy, &cfg)?;
        check_replay(&out.routed)?;
        args.common.emit(io, &out.routed, &out.report)?;
        out.placement
    } else {
        place(&circuit, strategy, &cfg)?
    };
    if let Some(path) = &args.dump_graph {
        write_file(path, &placement.graph.to_csv())?;
    }
    if let Some(path) = &args.dump_grid {
        write_file(path, &placement.grid.to_csv())?;
    }
    if !route {
        let art = placement.grid.to_string();
        match &args.common.output {
            Some(path) => write_file(path, &placement.grid.to_csv())?,
            None if !args.show_grid => io.out(&placement.grid.to_csv())?,
            None => {}
        }
        if args.show_grid {
            io.out(&art)?;
        }
    } else if args.show_grid {
        io.err(&placement.grid.to_string())?;
    }
    Ok(())
}

fn cmd_route(args: &RouteArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let circuit = read_circuit(&args.common.input)?;
    let grid = Grid::from_csv(&read(&args.grid)?)?;
    let (routed, report) = run_with_grid(&circuit, &grid, &args.common.pipeline_config())?;
    check_replay(&routed)?;
    args.common.emit(io, &routed, &report)
}

/// Built-in lowering checks: Toffoli and Fredkin against their 3-qubit
/// unitaries, MCT with 3 and 4 controls on all basis states.
pub fn self_checks() -> Vec<(String, bool)> {
    let mct = |n: usize| {
        Circuit::new(n, vec![Gate::new(crate::Opcode::Mct, (0..n).collect()).expect("valid")]).expect("valid")
    };
    vec![
        ("toffoli", Circuit::new(3, vec![Gate::toffoli(0, 1, 2)]).expect("valid")),
        ("fredkin", Circuit::new(3, vec![Gate::fredkin(0, 1, 2)]).expect("valid")),
        ("mct k=3", mct(4)),
        ("mct k=4", mct(5)),
    ]
    .into_iter()
    .map(|(name, c)| (name.to_string(), check_lowering(&c).unwrap_or(false)))
    .collect()
}

/// Dense check of the full lowering when it fits, otherwise a basis-state
/// check of the MCT expansion (Toffoli and Fredkin networks are covered by
/// [`self_checks`]).
fn check_lowering(circuit: &Circuit) -> crate::Result<bool> {
    const TOL: f64 = 1e-9;
    let lowered = lower_circuit(circuit, DecomposeConfig::full())?;
    if lowered.qubit_count() <= verify::DENSE_QUBIT_LIMIT {
        return verify::lowering_preserves_action(circuit, &lowered, TOL);
    }
    let (expanded, _) = expand_mct(circuit)?;
    verify::lowering_preserves_action(circuit, &expanded, TOL)
}

fn cmd_verify(args: &VerifyArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let mut results = self_checks();
    if let Some(path) = &args.input {
        let circuit = read_circuit(path)?;
        let ok = check_lowering(&circuit)?;
        results.push((format!("{}", path.display()), ok));
    }
    let mut failed = 0;
    for (name, ok) in &results {
        io.out(&format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }))?;
        failed += usize::from(!ok);
    }
    if failed > 0 {
        return Err(CliError::Internal(format!("{failed} lowering check(s) failed")));
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, io: &mut Io<'_>) -> Result<(), CliError> {
    let family = CircuitFamily::skewed(args.qubits, args.gates);
    let cfg = PipelineConfig {
        placement: PlacementConfig {
            rows: args.rows,
            cols: args.cols,
        },
        ..PipelineConfig::default()
    };
    let table = benchmark(&family, args.trials, args.seed, &cfg)?;
    io.out(&match args.report {
        ReportFormat::Text => table.to_text(),
        ReportFormat::Json => table.to_json() + "\n",
    })
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mut io = Io { out, err };
    match &cli.command {
        Command::Run(a) => cmd_run(a, &mut io, true),
        Command::Place(a) => cmd_run(a, &mut io, false),
        Command::Route(a) => cmd_route(a, &mut io),
        Command::Verify(a) => cmd_verify(a, &mut io),
        Command::Bench(a) => cmd_bench(a, &mut io),
    }
}

/// Parses `args`, runs, and returns the process exit code. Diagnostics are a
/// single line on `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "qmap: {}", e.message());
            e.exit_code()
        }
    }
}
