//! JSON model files. Neuron indices in the file are 1-based.
//!
//! ```json
//! {
//!   "version": 1,
//!   "q": 2,
//!   "initial_spikes": [2, 0],
//!   "rules": [[1, "exactly", 2, 2, 1, 0]],
//!   "synapses": [[1, 2]],
//!   "output_neuron": 2
//! }
//! ```
//!
//! A rule entry is `[neuron, kind, threshold, consumed, produced, delay]`
//! with `kind` one of `"at_least"` or `"exactly"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, NeuronId, RegEx, RegexKind, SnpSystem};

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("malformed model file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported model file version {0} (expected {MODEL_FILE_VERSION})")]
    Version(u32),
    #[error("q is {q} but {found} initial spike counts are listed")]
    NeuronCount { q: usize, found: usize },
    #[error("neuron index 0 in {0}; indices start at 1")]
    ZeroIndex(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEntry(pub usize, pub RegexKind, pub u64, pub u64, pub u64, pub u64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    pub q: usize,
    pub initial_spikes: Vec<u64>,
    pub rules: Vec<RuleEntry>,
    pub synapses: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_neuron: Option<usize>,
}

fn zero_based(index: usize, what: &'static str) -> Result<NeuronId, ModelFileError> {
    index.checked_sub(1).ok_or(ModelFileError::ZeroIndex(what))
}

impl ModelFile {
    pub fn from_system(system: &SnpSystem) -> Self {
        ModelFile {
            version: MODEL_FILE_VERSION,
            q: system.neuron_count(),
            initial_spikes: system.initial_spikes().to_vec(),
            rules: system
                .rules()
                .iter()
                .map(|r| {
                    RuleEntry(
                        r.neuron + 1,
                        r.regex.kind,
                        r.regex.threshold,
                        r.consumed,
                        r.produced,
                        r.delay,
                    )
                })
                .collect(),
            synapses: system
                .synapses()
                .iter()
                .map(|&(a, b)| (a + 1, b + 1))
                .collect(),
            output_neuron: system.output_neuron().map(|n| n + 1),
        }
    }

    pub fn to_system(&self) -> Result<SnpSystem, ModelFileError> {
        if self.version != MODEL_FILE_VERSION {
            return Err(ModelFileError::Version(self.version));
        }
        if self.q != self.initial_spikes.len() {
            return Err(ModelFileError::NeuronCount {
                q: self.q,
                found: self.initial_spikes.len(),
            });
        }
        let mut b = SnpSystem::builder();
        for &s in &self.initial_spikes {
            b.add_neuron(s);
        }
        for &RuleEntry(neuron, kind, threshold, c, p, d) in &self.rules {
            let neuron = zero_based(neuron, "rules")?;
            b.add_rule(neuron, RegEx { kind, threshold }, c, p, d)?;
        }
        for &(from, to) in &self.synapses {
            b.add_synapse(zero_based(from, "synapses")?, zero_based(to, "synapses")?)?;
        }
        if let Some(out) = self.output_neuron {
            b.set_output_neuron(zero_based(out, "output_neuron")?)?;
        }
        Ok(b.build()?)
    }
}

pub fn system_to_json(system: &SnpSystem) -> String {
    let mut text = serde_json::to_string_pretty(&ModelFile::from_system(system))
        .expect("model files always serialize");
    text.push('\n');
    text
}

pub fn system_from_json(text: &str) -> Result<SnpSystem, ModelFileError> {
    serde_json::from_str::<ModelFile>(text)?.to_system()
}
