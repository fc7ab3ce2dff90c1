use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use snpsim::{
    gen_random, gen_sort, gen_subset_sum, system_from_json, RandomBounds, SnpSystem, SortInstance,
    SubsetSumInstance,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Sort,
    Subsetsum,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sort => "sort",
            Family::Subsetsum => "subsetsum",
            Family::Random => "random",
        }
    }
}

/// Parameters shared by every command that builds a system from a family.
#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    /// Instance size: numbers to sort or to choose from, or the neuron bound for random systems
    #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    /// Explicit values (comma-separated) instead of the default instance of size n
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Option<Vec<u64>>,
    /// Subset-sum target; defaults to the sum of a random fifth of the values
    #[arg(long)]
    pub target: Option<u64>,
    /// Upper bound on subset-sum values when they are drawn at random
    #[arg(long, default_value_t = 50)]
    pub value_max: u64,
    #[arg(long, default_value_t = 4)]
    pub rules_max: usize,
    #[arg(long, default_value_t = 8)]
    pub degree_max: usize,
    #[arg(long, default_value_t = 20)]
    pub spikes_max: u64,
    #[arg(long, default_value_t = 3)]
    pub delay_max: u64,
}

/// How to read the answer out of a finished computation.
#[derive(Debug, Clone)]
pub enum Decoder {
    Sort(SortInstance),
    SubsetSum(SubsetSumInstance),
    Output(Option<usize>),
}

impl Decoder {
    pub fn describe(&self, config: &[i64]) -> String {
        let join = |v: Vec<String>| v.join(" ");
        match self {
            Decoder::Sort(inst) => format!(
                "sorted: {}",
                join(inst.decode(config).iter().map(i64::to_string).collect())
            ),
            Decoder::SubsetSum(inst) => {
                let layout = inst.layout();
                let chosen = layout
                    .chosen(config)
                    .iter()
                    .map(|&i| inst.values[i].to_string())
                    .collect();
                format!(
                    "accepted: {} chosen: [{}]",
                    layout.accepted(config),
                    join(chosen)
                )
            }
            Decoder::Output(Some(n)) => format!("output neuron {}: {}", n + 1, config[*n]),
            Decoder::Output(None) => String::new(),
        }
    }
}

pub struct Model {
    pub id: String,
    pub system: SnpSystem,
    pub decoder: Decoder,
}

impl FamilyParams {
    fn size(&self, family: Family) -> Result<usize, CliError> {
        match (self.n, &self.values) {
            (Some(n), _) => Ok(n as usize),
            (None, Some(v)) if family != Family::Random => Ok(v.len()),
            _ => Err(CliError::Usage(format!(
                "family {} needs --n",
                family.name()
            ))),
        }
    }

    pub fn with_size(&self, n: usize) -> FamilyParams {
        FamilyParams {
            n: Some(n as u64),
            values: None,
            ..self.clone()
        }
    }

    pub fn build(&self, family: Family, seed: u64) -> Result<Model, CliError> {
        let n = self.size(family)?;
        let id = format!("{}-{n}", family.name());
        let (system, decoder) = match family {
            Family::Sort => {
                let inst = match &self.values {
                    Some(v) => SortInstance { values: v.clone() },
                    None => SortInstance::descending(n),
                };
                (gen_sort(&inst)?, Decoder::Sort(inst))
            }
            Family::Subsetsum => {
                let mut inst = match &self.values {
                    Some(v) => SubsetSumInstance::new(v.clone(), v.iter().sum::<u64>() / 2),
                    None => SubsetSumInstance::random_in(n, self.value_max, seed),
                };
                if let Some(t) = self.target {
                    inst.target = t;
                }
                (gen_subset_sum(&inst)?, Decoder::SubsetSum(inst))
            }
            Family::Random => {
                let bounds = RandomBounds::new(
                    n,
                    self.rules_max,
                    self.degree_max,
                    self.spikes_max,
                    self.delay_max,
                );
                let sys = gen_random(bounds, seed)?;
                let out = sys.output_neuron();
                (sys, Decoder::Output(out))
            }
        };
        Ok(Model {
            id,
            system,
            decoder,
        })
    }
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let system = system_from_json(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let id = path
        .file_stem()
        .map_or_else(|| "model".into(), |s| s.to_string_lossy().into_owned());
    let decoder = Decoder::Output(system.output_neuron());
    Ok(Model {
        id,
        system,
        decoder,
    })
}

/// Either a model file or a family with parameters.
#[derive(Debug, Clone, Args)]
pub struct ModelSource {
    /// Model file to load
    #[arg(short, long, conflicts_with = "family")]
    pub model: Option<PathBuf>,
    /// Generate the model from a family instead
    #[arg(short, long, value_enum)]
    pub family: Option<Family>,
    #[command(flatten)]
    pub params: FamilyParams,
}

impl ModelSource {
    pub fn load(&self, seed: u64) -> Result<Model, CliError> {
        match (&self.model, self.family) {
            (Some(path), _) => load_model(path),
            (None, Some(family)) => self.params.build(family, seed),
            (None, None) => Err(CliError::Usage(
                "give a model file (--model) or a family (--family)".into(),
            )),
        }
    }
}
