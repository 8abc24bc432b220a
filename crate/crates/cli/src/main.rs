//! `hypercut`: generate circuits, partition them, run sweeps, export hypergraphs.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad arguments or config,
//! 3 input parse failure, 4 partition precondition failure.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercut::analysis::{self, SweepConfig, DEFAULT_N_LIST};
use hypercut::generators::{gen_random, GateSet, GateSetName};
use hypercut::hypergraph::{dual, export_hmetis, import_hmetis, primal_from_circuit, Hypergraph};
use hypercut::partition::{spatial_cut_hypergraph, temporal_cut_hypergraph, CutReport};
use hypercut::{
    emit_qasm, parse_qasm, spatial_cut, temporal_cut, Circuit, Family, Heuristic,
    PartitionOptions, Seed, TemporalReport, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "hypercut", version, about = "Hypergraph bipartitioning of quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic circuit as OpenQASM 2.0.
    Generate(GenerateArgs),
    /// Spatially or temporally bipartition a circuit or hypergraph.
    Partition(PartitionArgs),
    /// Run a sweep described by a JSON config and write one row per run.
    Sweep(SweepArgs),
    /// Write the primal (or dual) hypergraph of an input.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Full,
    Random,
    Qft,
    Qpe,
    Grover,
}

#[derive(Clone, Copy, ValueEnum)]
enum GateSetArg {
    Native,
    Independent,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    Fm,
    Kl,
    Midcut,
    Oracle,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Heuristic {
        match h {
            HeuristicArg::Fm => Heuristic::Fm,
            HeuristicArg::Kl => Heuristic::Kl,
            HeuristicArg::Midcut => Heuristic::Midcut,
            HeuristicArg::Oracle => Heuristic::Oracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Spatial,
    Temporal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Auto,
    Qasm,
    Json,
    Hmetis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Hmetis,
    Json,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Gate set for random circuits.
    #[arg(long, value_enum)]
    gateset: Option<GateSetArg>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random circuits stop once depth reaches ceil(depth_factor * n).
    #[arg(long, default_value_t = 2.0)]
    depth_factor: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// OpenQASM 2.0 circuit, JSON hypergraph or hMETIS file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    input_format: InputFormat,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Mode::Spatial)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Fm)]
    heuristic: HeuristicArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Use only random starts.
    #[arg(long)]
    no_midcut_start: bool,
    /// Allowed imbalance; 0 keeps the two blocks within one vertex.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a line plot of median reduction against n.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the median summary here instead of stderr.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Replace the config's n list with every n from 4 to 120.
    #[arg(long)]
    all_n: bool,
    /// Record wall time per row (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = ExportFormat::Hmetis)]
    format: ExportFormat,
    /// Export the dual (gate-vertex) hypergraph.
    #[arg(long)]
    dual: bool,
    /// Leave single-qubit gates out of circuit inputs.
    #[arg(long)]
    no_unary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Io(String),
    Args(String),
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Args(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) | Failure::Args(m) | Failure::Parse(m) | Failure::Precondition(m) => {
                f.write_str(m)
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn precondition(e: impl fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

enum Input {
    Circuit(Circuit),
    Hypergraph(Hypergraph),
}

fn load_input(args: &InputArgs) -> Result<Input, Failure> {
    let text = read_file(&args.input)?;
    let format = match args.input_format {
        InputFormat::Auto => match args.input.extension().and_then(|e| e.to_str()) {
            Some("json") => InputFormat::Json,
            Some("hgr") => InputFormat::Hmetis,
            Some("qasm") => InputFormat::Qasm,
            _ if text.trim_start().starts_with('{') => InputFormat::Json,
            _ => InputFormat::Qasm,
        },
        f => f,
    };
    let name = args.input.display();
    match format {
        InputFormat::Qasm => parse_qasm(&text)
            .map(Input::Circuit)
            .map_err(|e| Failure::Parse(format!("{name}: {e}"))),
        InputFormat::Json => Hypergraph::from_json(&text)
            .map(Input::Hypergraph)
            .map_err(|e| Failure::Parse(format!("{name}: {e}"))),
        InputFormat::Hmetis => import_hmetis(text.as_bytes())
            .map(Input::Hypergraph)
            .map_err(|e| Failure::Parse(format!("{name}: {e}"))),
        InputFormat::Auto => unreachable!("resolved above"),
    }
}

fn cmd_generate(args: GenerateArgs) -> Outcome {
    let seed = Seed(args.seed);
    let circuit = match (args.family, args.gateset) {
        (FamilyArg::Random, gs) => {
            let name = match gs.unwrap_or(GateSetArg::Native) {
                GateSetArg::Native => GateSetName::Native,
                GateSetArg::Independent => GateSetName::Independent,
            };
            gen_random(args.n, &GateSet::by_name(name), seed, args.depth_factor)
        }
        (_, Some(_)) => {
            return Err(Failure::Args("--gateset only applies to --family random".into()))
        }
        (FamilyArg::Full, None) => Family::Full.generate(args.n, seed),
        (FamilyArg::Qft, None) => Family::Qft.generate(args.n, seed),
        (FamilyArg::Qpe, None) => Family::Qpe.generate(args.n, seed),
        (FamilyArg::Grover, None) => Family::Grover.generate(args.n, seed),
    }
    .map_err(|e| Failure::Args(e.to_string()))?;
    write_output(args.out.as_deref(), emit_qasm(&circuit).as_bytes())
}

fn join(items: impl IntoIterator<Item = impl ToString>) -> String {
    items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn cut_fields(r: &CutReport) -> Vec<String> {
    vec![
        r.heuristic.to_string(),
        r.seed.to_string(),
        r.restarts.to_string(),
        r.baseline_cut.to_string(),
        r.cut_count.to_string(),
        format!("{:.4}", r.reduction_pct),
        join(&r.cut_ids),
        join(&r.blocks[0]),
        join(&r.blocks[1]),
    ]
}

const CUT_HEADER: [&str; 9] = [
    "heuristic",
    "seed",
    "restarts",
    "baseline_cut",
    "cut_count",
    "reduction_pct",
    "cut_ids",
    "block_a",
    "block_b",
];

fn csv_document(header: &[&str], row: &[String]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    w.write_record(row).expect("writing to memory");
    w.into_inner().expect("writing to memory")
}

fn render_spatial(r: &CutReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => json_document(r),
        ReportFormat::Csv => csv_document(&CUT_HEADER, &cut_fields(r)),
    }
}

fn render_temporal(r: &TemporalReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => json_document(r),
        ReportFormat::Csv => {
            let mut header = CUT_HEADER.to_vec();
            header.extend(["segment_a", "segment_b", "precedence_feasible"]);
            let mut row = cut_fields(&r.cut);
            row.push(join(&r.segments[0]));
            row.push(join(&r.segments[1]));
            row.push(r.precedence_feasible.to_string());
            csv_document(&header, &row)
        }
    }
}

fn json_document<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s.into_bytes()
}

fn cmd_partition(args: PartitionArgs) -> Outcome {
    if !(args.epsilon.is_finite() && args.epsilon >= 0.0) {
        return Err(Failure::Args(format!("--epsilon must be >= 0, got {}", args.epsilon)));
    }
    let input = load_input(&args.input)?;
    let opts = PartitionOptions {
        seed: Seed(args.seed),
        restarts: args.restarts,
        include_midcut_start: !args.no_midcut_start,
        epsilon: args.epsilon,
    };
    let heuristic = Heuristic::from(args.heuristic);
    let bytes = match (args.mode, &input) {
        (Mode::Spatial, Input::Circuit(c)) => {
            render_spatial(&spatial_cut(c, heuristic, &opts).map_err(precondition)?, args.format)
        }
        (Mode::Spatial, Input::Hypergraph(h)) => render_spatial(
            &spatial_cut_hypergraph(h, heuristic, &opts).map_err(precondition)?,
            args.format,
        ),
        (Mode::Temporal, Input::Circuit(c)) => {
            render_temporal(&temporal_cut(c, heuristic, &opts).map_err(precondition)?, args.format)
        }
        (Mode::Temporal, Input::Hypergraph(h)) => render_temporal(
            &temporal_cut_hypergraph(h, heuristic, &opts).map_err(precondition)?,
            args.format,
        ),
    };
    write_output(args.out.as_deref(), &bytes)
}

fn cmd_sweep(args: SweepArgs) -> Outcome {
    let text = read_file(&args.config)?;
    let mut config = SweepConfig::from_json(&text)
        .map_err(|e| Failure::Args(format!("{}: {e}", args.config.display())))?;
    if args.all_n {
        config.n_list = (4..=*DEFAULT_N_LIST.last().expect("non-empty")).collect();
    }
    config.timing |= args.timing;

    let rows = analysis::run_sweep(&config);
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: {} n={} seed={} {}: {}",
            r.family,
            r.n,
            r.seed,
            r.heuristic,
            r.error.as_deref().unwrap_or_default()
        );
    }
    let bytes = match args.format {
        ReportFormat::Csv => analysis::to_csv_string(&rows).into_bytes(),
        ReportFormat::Json => {
            let mut s = analysis::to_json_string(&rows);
            s.push('\n');
            s.into_bytes()
        }
    };
    write_output(args.out.as_deref(), &bytes)?;

    let summary = analysis::summarize(&rows);
    let text = analysis::summary_text(&summary);
    match &args.summary {
        Some(path) => write_output(Some(path), text.as_bytes())?,
        None => eprint!("{text}"),
    }
    if let Some(path) = &args.svg {
        write_output(Some(path), analysis::summary_svg(&summary).as_bytes())?;
    }
    if !rows.is_empty() && rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::Precondition("every sweep row failed".into()));
    }
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Outcome {
    let mut h = match load_input(&args.input)? {
        Input::Circuit(c) => primal_from_circuit(&c, !args.no_unary),
        Input::Hypergraph(h) => h,
    };
    if args.dual {
        h = dual(&h).map_err(precondition)?;
    }
    let bytes = match args.format {
        ExportFormat::Hmetis => {
            let mut buf = Vec::new();
            export_hmetis(&h, &mut buf).map_err(precondition)?;
            buf
        }
        ExportFormat::Json => {
            if h.is_empty() {
                return Err(Failure::Precondition("empty hypergraph cannot be exported".into()));
            }
            let mut s = h.to_json();
            s.push('\n');
            s.into_bytes()
        }
    };
    write_output(args.out.as_deref(), &bytes)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Export(a) => cmd_export(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hypercut: {f}");
            ExitCode::from(f.code())
        }
    }
}
