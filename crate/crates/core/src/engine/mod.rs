//! The simulation loop: spiking vector, transition step, delay update,
//! halting check.
//!
//! Semantics with delays: a rule selected at step `k` in an open neuron
//! consumes and emits during step `k`; the neuron is then closed for the
//! rule's delay. While closed it selects nothing and incoming spikes are
//! lost. When nothing fires but some neuron is still closed, the step counter
//! still advances so the closed neurons can reopen.

pub mod kernels;

use std::borrow::Cow;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{
    build_compressed, build_ell, build_rule_vector, build_sparse, EllMatrix, NeuronRuleMap,
    RuleVector, SparseMatrix, StorageFormat, SynapseMatrix,
};
use crate::model::{NeuronId, RuleId, SnpSystem};
use crate::oracle;
use crate::selection::Selection;

use kernels::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("neuron {neuron} would hold {spikes} spikes after step {step}")]
    NegativeSpikes {
        step: u64,
        neuron: NeuronId,
        spikes: i64,
    },
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("cannot start worker pool: {0}")]
    Workers(String),
}

/// Simulator back end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Sparse,
    Ell,
    Compressed,
    Oracle,
}

impl Format {
    pub const ALL: [Format; 4] = [
        Format::Sparse,
        Format::Ell,
        Format::Compressed,
        Format::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Format::Sparse => "sparse",
            Format::Ell => "ell",
            Format::Compressed => "compressed",
            Format::Oracle => "oracle",
        }
    }

    /// Matrix layout used by this back end; the oracle has none.
    pub fn storage(self) -> Option<StorageFormat> {
        match self {
            Format::Sparse => Some(StorageFormat::Sparse),
            Format::Ell => Some(StorageFormat::Ell),
            Format::Compressed => Some(StorageFormat::Compressed),
            Format::Oracle => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Format::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown format `{s}` (expected sparse, ell, compressed or oracle)")
            })
    }
}

/// Which rules fire in a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpikingVector {
    /// One flag per rule.
    Flags(Vec<bool>),
    /// One optional rule per neuron.
    Rules(Vec<Option<RuleId>>),
}

impl SpikingVector {
    pub fn from_selection(selected: &[Option<RuleId>], rule_count: usize) -> Self {
        SpikingVector::Flags(selection_flags(selected, rule_count))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SpikingVector::Flags(f) => !f.iter().any(|&b| b),
            SpikingVector::Rules(r) => r.iter().all(Option::is_none),
        }
    }

    /// The rule fired by each neuron.
    pub fn per_neuron(&self, map: &NeuronRuleMap) -> Vec<Option<RuleId>> {
        match self {
            SpikingVector::Flags(f) => kernels::fired_per_neuron(f, map),
            SpikingVector::Rules(r) => r.clone(),
        }
    }
}

fn selection_flags(selected: &[Option<RuleId>], rule_count: usize) -> Vec<bool> {
    let mut flags = vec![false; rule_count];
    for &r in selected.iter().flatten() {
        flags[r] = true;
    }
    flags
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RecordMode {
    #[default]
    ConfigsOnly,
    ConfigsAndDelays,
    /// Configurations, delays and the rules that fired into each record.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    /// Step limit `L`, at least 1.
    pub max_steps: u64,
    pub selection: Selection,
    pub record: RecordMode,
}

impl SimOptions {
    pub fn new(max_steps: u64) -> Self {
        SimOptions {
            max_steps,
            selection: Selection::FirstApplicable,
            record: RecordMode::ConfigsOnly,
        }
    }

    pub fn with_selection(mut self, selection: Selection) -> Self {
        self.selection = selection;
        self
    }

    pub fn with_record(mut self, record: RecordMode) -> Self {
        self.record = record;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.max_steps == 0 {
            return Err(SimError::InvalidOptions(
                "the step limit must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Configuration, delays and step counter at a step boundary, plus the
/// spiking vector that produced it (empty at step 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    pub config: Vec<i64>,
    pub delays: Vec<u64>,
    pub spiking: SpikingVector,
    pub step: u64,
}

impl SimState {
    pub fn initial(system: &SnpSystem) -> Self {
        SimState {
            config: system.initial_spikes().iter().map(|&s| s as i64).collect(),
            delays: vec![0; system.neuron_count()],
            spiking: SpikingVector::Rules(vec![None; system.neuron_count()]),
            step: 0,
        }
    }

    pub fn all_open(&self) -> bool {
        !kernels::any_closed(&self.delays)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaltReason {
    StepLimit,
    NoApplicableRules,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::StepLimit => "StepLimit",
            HaltReason::NoApplicableRules => "NoApplicableRules",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub config: Vec<i64>,
    pub delays: Option<Vec<u64>>,
    /// Rule fired by each neuron in the step that produced this record.
    pub fired: Option<Vec<Option<RuleId>>>,
}

impl TraceRecord {
    pub fn capture(
        mode: RecordMode,
        config: &[i64],
        delays: &[u64],
        fired: &[Option<RuleId>],
    ) -> Self {
        TraceRecord {
            config: config.to_vec(),
            delays: (mode != RecordMode::ConfigsOnly).then(|| delays.to_vec()),
            fired: (mode == RecordMode::Full).then(|| fired.to_vec()),
        }
    }
}

/// One computation: `C_0 .. C_k` and why it stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub halt: HaltReason,
}

impl Trace {
    /// Number of transition steps taken.
    pub fn steps(&self) -> u64 {
        self.records.len() as u64 - 1
    }

    pub fn final_config(&self) -> &[i64] {
        &self
            .records
            .last()
            .expect("a trace holds at least C_0")
            .config
    }

    pub fn configs(&self) -> impl Iterator<Item = &[i64]> {
        self.records.iter().map(|r| r.config.as_slice())
    }

    /// One configuration per line, space-separated.
    pub fn write_configs<W: Write>(&self, mut out: W) -> io::Result<()> {
        for config in self.configs() {
            let mut first = true;
            for v in config {
                if !first {
                    out.write_all(b" ")?;
                }
                write!(out, "{v}")?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn configs_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_configs(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ASCII output")
    }
}

enum Kernel {
    Sparse(SparseMatrix),
    Ell(EllMatrix),
    Compressed(SynapseMatrix),
    Oracle(SnpSystem),
}

/// A system prepared for one back end. Built once, run many times.
pub struct Engine {
    format: Format,
    initial: SimState,
    rv: RuleVector,
    map: NeuronRuleMap,
    kernel: Kernel,
    pool: Option<ThreadPool>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("format", &self.format)
            .field("neurons", &self.initial.config.len())
            .field("rules", &self.rv.len())
            .field("workers", &self.workers())
            .finish()
    }
}

impl Engine {
    /// Sequential engine.
    pub fn new(system: &SnpSystem, format: Format) -> Self {
        let (rv, map) = build_rule_vector(system);
        let kernel = match format {
            Format::Sparse => Kernel::Sparse(build_sparse(system)),
            Format::Ell => Kernel::Ell(build_ell(system)),
            Format::Compressed => Kernel::Compressed(build_compressed(system)),
            Format::Oracle => Kernel::Oracle(system.clone()),
        };
        Engine {
            format,
            initial: SimState::initial(system),
            rv,
            map,
            kernel,
            pool: None,
        }
    }

    /// Engine whose kernels run on `workers` threads; `1` is the sequential mode.
    pub fn with_workers(
        system: &SnpSystem,
        format: Format,
        workers: usize,
    ) -> Result<Self, SimError> {
        let mut engine = Engine::new(system, format);
        if workers == 0 {
            return Err(SimError::InvalidOptions(
                "worker count must be at least 1".into(),
            ));
        }
        if workers > 1 && format != Format::Oracle {
            let pool = ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| SimError::Workers(e.to_string()))?;
            engine.pool = Some(pool);
        }
        Ok(engine)
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn workers(&self) -> usize {
        self.pool
            .as_ref()
            .map_or(1, ThreadPool::current_num_threads)
    }

    pub fn rule_vector(&self) -> &RuleVector {
        &self.rv
    }

    pub fn neuron_rule_map(&self) -> &NeuronRuleMap {
        &self.map
    }

    pub fn initial_state(&self) -> &SimState {
        &self.initial
    }

    fn exec(&self) -> Exec<'_> {
        self.pool.as_ref().map_or(Exec::Sequential, Exec::Parallel)
    }

    /// Spiking vector for `state`, in the form this back end consumes.
    pub fn spiking_vector(&self, state: &SimState, selection: Selection) -> SpikingVector {
        let (config, delays, step, exec) = (&state.config, &state.delays, state.step, self.exec());
        match self.kernel {
            Kernel::Compressed(_) | Kernel::Oracle(_) => {
                kernels::sv_calc_rules(config, delays, &self.rv, &self.map, selection, step, exec)
            }
            _ => kernels::sv_calc_flags(config, delays, &self.rv, &self.map, selection, step, exec),
        }
    }

    /// Applies `spiking` to `state` and advances the step counter.
    pub fn advance(&self, state: &SimState, spiking: SpikingVector) -> Result<SimState, SimError> {
        let exec = self.exec();
        let (config, delays, k) = (&state.config, &state.delays, state.step);
        let fired = spiking.per_neuron(&self.map);
        let next_config = if spiking.is_empty() {
            config.clone()
        } else {
            let flags = match &spiking {
                SpikingVector::Flags(f) => Cow::Borrowed(f.as_slice()),
                SpikingVector::Rules(_) => Cow::Owned(selection_flags(&fired, self.rv.len())),
            };
            match &self.kernel {
                Kernel::Sparse(m) => {
                    kernels::step_sparse(config, delays, &flags, m, &self.rv, k, exec)?
                }
                Kernel::Ell(m) => kernels::step_ell(config, delays, &flags, m, &self.rv, k, exec)?,
                Kernel::Compressed(m) => {
                    kernels::step_compressed(config, delays, &fired, m, &self.rv, k, exec)?
                }
                Kernel::Oracle(sys) => oracle::apply(sys, config, delays, &fired, k)?,
            }
        };
        Ok(SimState {
            config: next_config,
            delays: kernels::update_delays(delays, &fired, &self.rv),
            spiking,
            step: k + 1,
        })
    }

    /// Runs one computation from the initial configuration.
    pub fn run(&self, options: &SimOptions) -> Result<Trace, SimError> {
        options.validate()?;
        if let Kernel::Oracle(system) = &self.kernel {
            return oracle::oracle_simulate(system, options);
        }
        let q = self.initial.config.len();
        let mut state = self.initial.clone();
        let mut records = vec![TraceRecord::capture(
            options.record,
            &state.config,
            &state.delays,
            &vec![None; q],
        )];
        let halt = loop {
            let spiking = self.spiking_vector(&state, options.selection);
            if spiking.is_empty() && state.all_open() {
                break HaltReason::NoApplicableRules;
            }
            if state.step >= options.max_steps {
                break HaltReason::StepLimit;
            }
            state = self.advance(&state, spiking)?;
            let fired = match options.record {
                RecordMode::Full => state.spiking.per_neuron(&self.map),
                _ => Vec::new(),
            };
            records.push(TraceRecord::capture(
                options.record,
                &state.config,
                &state.delays,
                &fired,
            ));
        };
        Ok(Trace { records, halt })
    }
}

/// Prepares `system` for `format` and runs it sequentially.
pub fn simulate(
    system: &SnpSystem,
    format: Format,
    options: &SimOptions,
) -> Result<Trace, SimError> {
    Engine::new(system, format).run(options)
}
