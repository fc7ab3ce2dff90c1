use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;
use snpsim::{storage_count, Engine, Format, SimOptions};

use crate::family::{Family, FamilyParams};
use crate::CliError;

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short, long, value_enum)]
    pub family: Family,
    /// Sizes as a comma-separated list; items may be ranges A..B or A..B:STEP (inclusive)
    #[arg(long, value_parser = parse_sizes, default_value = "50..200:50")]
    pub sizes: Sizes,
    #[arg(long, value_delimiter = ',', default_value = "sparse,ell,compressed")]
    pub formats: Vec<Format>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    /// Step limit per run
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    /// Seed for instance generation and, with --selection random, rule choice
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "first")]
    pub selection: crate::SelectionArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Write the table here instead of standard output
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    #[command(flatten)]
    pub widths: crate::WidthArgs,
    #[command(flatten)]
    pub params: FamilyParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

pub fn parse_sizes(text: &str) -> Result<Sizes, String> {
    let mut sizes = Vec::new();
    for item in text.split(',').map(str::trim) {
        let number = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{s}` is not a size"))
        };
        match item.split_once("..") {
            None => sizes.push(number(item)?),
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (number(hi)?, number(step)?),
                    None => (number(rest)?, 1),
                };
                let lo = number(lo)?;
                if step == 0 || lo > hi {
                    return Err(format!("empty size range `{item}`"));
                }
                sizes.extend((lo..=hi).step_by(step));
            }
        }
    }
    if sizes.contains(&0) {
        return Err("sizes must be at least 1".into());
    }
    Ok(Sizes(sizes))
}

#[derive(Debug, Serialize)]
struct BenchRecord<'a> {
    model: &'a str,
    family: &'a str,
    size: usize,
    format: Format,
    steps: u64,
    wall_ms: f64,
    elements: u128,
    bytes: u128,
    halt: String,
    seed: u64,
    rep: u64,
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    if let Some(f) = args.formats.iter().find(|f| f.storage().is_none()) {
        return Err(CliError::Usage(format!(
            "bench measures matrix formats only, not {f}"
        )));
    }
    let out: Box<dyn Write> = match &args.csv_out {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut csv = csv::Writer::from_writer(out);
    let selection = args.selection.with_seed(args.seed);
    let options = SimOptions::new(args.steps).with_selection(selection);
    let widths = args.widths.get();
    for &size in &args.sizes.0 {
        let model = args.params.with_size(size).build(args.family, args.seed)?;
        let stats = model.system.stats();
        for &format in &args.formats {
            let built = Instant::now();
            let engine = Engine::with_workers(&model.system, format, args.workers as usize)?;
            eprintln!(
                "build {} {format}: {:.3} ms",
                model.id,
                built.elapsed().as_secs_f64() * 1e3
            );
            let count = storage_count(format.storage().expect("checked above"), &stats);
            for rep in 0..args.reps {
                let start = Instant::now();
                let trace = engine.run(&options)?;
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                csv.serialize(BenchRecord {
                    model: &model.id,
                    family: args.family.name(),
                    size,
                    format,
                    steps: trace.steps(),
                    wall_ms,
                    elements: count.total(),
                    bytes: count.bytes(widths),
                    halt: trace.halt.to_string(),
                    seed: args.seed,
                    rep,
                })
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            }
        }
        csv.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}
