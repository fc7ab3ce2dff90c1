//! `snpsim` command-line tool: generate models, run them in any format,
//! benchmark the matrix formats and report storage sizes.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid model or instance,
//! 3 simulation or I/O failure.

mod bench;
mod family;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use snpsim::{
    storage_count, system_to_json, ElementWidths, Engine, Format, GenError, RecordMode, Selection,
    SimError, SimOptions, StorageFormat,
};

use bench::BenchArgs;
use family::{Family, FamilyParams, ModelSource};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidOptions(m) => CliError::Usage(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn io_error(path: &std::path::Path, e: io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "snpsim", version, about = "Spiking neural P system simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated model file
    Generate(GenerateArgs),
    /// Simulate a model and print a summary line
    Run(RunArgs),
    /// Time the matrix formats over a range of sizes and write CSV
    Bench(BenchArgs),
    /// Print storage element counts and byte estimates
    Size(SizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    /// Lowest-numbered applicable rule of each neuron
    First,
    /// Seeded uniform choice among applicable rules
    Random,
}

impl SelectionArg {
    pub fn with_seed(self, seed: u64) -> Selection {
        match self {
            SelectionArg::First => Selection::FirstApplicable,
            SelectionArg::Random => Selection::SeededRandom(seed),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct WidthArgs {
    /// Bytes per matrix element
    #[arg(long, default_value_t = 4)]
    pub matrix_width: u32,
    /// Bytes per vector element
    #[arg(long, default_value_t = 8)]
    pub vector_width: u32,
}

impl WidthArgs {
    pub fn get(&self) -> ElementWidths {
        ElementWidths {
            matrix: self.matrix_width,
            vector: self.vector_width,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if omitted
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: FamilyParams,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: ModelSource,
    #[arg(long, default_value = "compressed")]
    format: Format,
    /// Step limit L
    #[arg(short = 'L', long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "first")]
    selection: SelectionArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Write every configuration, one per line
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SizeArgs {
    #[command(flatten)]
    source: ModelSource,
    /// Storage format, or all three if omitted
    #[arg(long)]
    format: Option<StorageFormat>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    widths: WidthArgs,
}

fn generate(args: &GenerateArgs) -> Result<(), CliError> {
    let model = args.params.build(args.family, args.seed)?;
    let text = system_to_json(&model.system);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e))?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string()))?,
    }
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let model = args.source.load(args.seed)?;
    let engine = Engine::with_workers(&model.system, args.format, args.workers as usize)?;
    let options = SimOptions::new(args.steps)
        .with_selection(args.selection.with_seed(args.seed))
        .with_record(RecordMode::ConfigsOnly);
    let trace = engine.run(&options)?;
    if let Some(path) = &args.trace_out {
        let file = File::create(path).map_err(|e| io_error(path, e))?;
        let mut out = BufWriter::new(file);
        trace
            .write_configs(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| io_error(path, e))?;
    }
    let decoded = model.decoder.describe(trace.final_config());
    let mut line = format!(
        "model={} format={} steps={} halt={}",
        model.id,
        args.format,
        trace.steps(),
        trace.halt
    );
    if !decoded.is_empty() {
        line.push(' ');
        line.push_str(&decoded);
    }
    println!("{line}");
    Ok(())
}

fn size(args: &SizeArgs) -> Result<(), CliError> {
    let model = args.source.load(args.seed)?;
    let stats = model.system.stats();
    let formats = args.format.map_or(StorageFormat::ALL.to_vec(), |f| vec![f]);
    println!(
        "model={} q={} m={} max_out_degree={}",
        model.id, stats.q, stats.m, stats.max_out_degree
    );
    for f in formats {
        let count = storage_count(f, &stats);
        println!(
            "{f} elements={} bytes={}",
            count.total(),
            count.bytes(args.widths.get())
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Run(a) => run(a),
        Command::Bench(a) => bench::run(a),
        Command::Size(a) => size(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
