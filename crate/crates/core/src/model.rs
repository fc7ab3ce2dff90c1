//! Spiking neural P systems with delays: rules, neurons, synapses and the
//! builder that validates them.
//!
//! Indices are 0-based everywhere in this crate. Spike counts are stored as
//! `u64` in the model and promoted to `i64` by the matrix and engine layers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a neuron inside a system.
pub type NeuronId = usize;

/// Index of a rule inside a system (after grouping by neuron).
pub type RuleId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown neuron {neuron} (system has {count} neurons)")]
    UnknownNeuron { neuron: NeuronId, count: usize },
    #[error("reflexive synapse on neuron {0}")]
    ReflexiveSynapse(NeuronId),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
}

/// How a rule's regular expression compares the neuron's spike count with
/// its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegexKind {
    /// `a^t a*`: at least `t` spikes. `t = 0` is `a*`, `t = 1` is `a+`.
    AtLeast,
    /// `a^t`: exactly `t` spikes.
    Exactly,
}

/// One of the three supported regular expressions over `{a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegEx {
    pub kind: RegexKind,
    pub threshold: u64,
}

impl RegEx {
    pub const fn at_least(threshold: u64) -> Self {
        RegEx {
            kind: RegexKind::AtLeast,
            threshold,
        }
    }

    pub const fn exactly(threshold: u64) -> Self {
        RegEx {
            kind: RegexKind::Exactly,
            threshold,
        }
    }

    /// Whether `spikes` belongs to the language of this expression.
    pub fn matches(&self, spikes: u64) -> bool {
        match self.kind {
            RegexKind::AtLeast => spikes >= self.threshold,
            RegexKind::Exactly => spikes == self.threshold,
        }
    }
}

/// `E/a^c -> a^p; d`, or a forgetting rule `a^c -> λ` when `produced == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub neuron: NeuronId,
    pub regex: RegEx,
    pub consumed: u64,
    pub produced: u64,
    pub delay: u64,
}

impl Rule {
    pub fn is_forgetting(&self) -> bool {
        self.produced == 0
    }

    fn check(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidRule(msg));
        if self.consumed == 0 {
            return bad("consumed spikes must be at least 1".into());
        }
        if self.regex.kind == RegexKind::Exactly && self.regex.threshold == 0 {
            return bad("an exact expression needs a threshold of at least 1".into());
        }
        if self.is_forgetting() {
            if self.delay != 0 {
                return bad(format!("forgetting rule with delay {}", self.delay));
            }
            if self.regex != RegEx::exactly(self.consumed) {
                return bad(format!(
                    "forgetting rule a^{} must use the expression a^{}",
                    self.consumed, self.consumed
                ));
            }
        } else if self.produced > self.consumed {
            return bad(format!(
                "produces {} spikes but consumes only {}",
                self.produced, self.consumed
            ));
        }
        for (name, v) in [
            ("threshold", self.regex.threshold),
            ("consumed", self.consumed),
            ("produced", self.produced),
        ] {
            if v > i64::MAX as u64 {
                return bad(format!("{name} {v} does not fit a signed 64-bit count"));
            }
        }
        Ok(())
    }
}

/// Structural statistics of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    /// Number of neurons.
    pub q: usize,
    /// Number of rules.
    pub m: usize,
    pub max_out_degree: usize,
    /// Row count of the ELL matrix (`max_out_degree + 1`).
    pub z_ell: usize,
    /// Row count of the synapse matrix (`max_out_degree`).
    pub z_compressed: usize,
}

/// A validated, immutable SN P system.
///
/// Rules are grouped contiguously by neuron, in ascending neuron order, and
/// keep their insertion order within a neuron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpSystem {
    initial_spikes: Vec<u64>,
    rules: Vec<Rule>,
    synapses: BTreeSet<(NeuronId, NeuronId)>,
    output_neuron: Option<NeuronId>,
}

impl SnpSystem {
    pub fn builder() -> SystemBuilder {
        SystemBuilder::default()
    }

    pub fn neuron_count(&self) -> usize {
        self.initial_spikes.len()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn initial_spikes(&self) -> &[u64] {
        &self.initial_spikes
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Index range of the rules of `neuron`, in selection order.
    pub fn rule_range(&self, neuron: NeuronId) -> std::ops::Range<RuleId> {
        let start = self.rules.partition_point(|r| r.neuron < neuron);
        let end = self.rules.partition_point(|r| r.neuron <= neuron);
        start..end
    }

    pub fn rules_of(&self, neuron: NeuronId) -> &[Rule] {
        &self.rules[self.rule_range(neuron)]
    }

    pub fn synapses(&self) -> &BTreeSet<(NeuronId, NeuronId)> {
        &self.synapses
    }

    /// Out-neighbours of `neuron`, ascending.
    pub fn targets(&self, neuron: NeuronId) -> impl Iterator<Item = NeuronId> + '_ {
        self.synapses
            .range((neuron, 0)..=(neuron, NeuronId::MAX))
            .map(|&(_, to)| to)
    }

    pub fn out_degree(&self, neuron: NeuronId) -> usize {
        self.targets(neuron).count()
    }

    pub fn output_neuron(&self) -> Option<NeuronId> {
        self.output_neuron
    }

    pub fn stats(&self) -> Stats {
        let mut degree = vec![0usize; self.neuron_count()];
        for &(from, _) in &self.synapses {
            degree[from] += 1;
        }
        let max_out_degree = degree.into_iter().max().unwrap_or(0);
        Stats {
            q: self.neuron_count(),
            m: self.rule_count(),
            max_out_degree,
            z_ell: max_out_degree + 1,
            z_compressed: max_out_degree,
        }
    }

    /// Re-opens the builder with this system's contents.
    pub fn to_builder(&self) -> SystemBuilder {
        SystemBuilder {
            initial_spikes: self.initial_spikes.clone(),
            rules: self.rules.clone(),
            synapses: self.synapses.clone(),
            output_neuron: self.output_neuron,
        }
    }
}

/// Incremental construction of an [`SnpSystem`].
#[derive(Debug, Clone, Default)]
pub struct SystemBuilder {
    initial_spikes: Vec<u64>,
    rules: Vec<Rule>,
    synapses: BTreeSet<(NeuronId, NeuronId)>,
    output_neuron: Option<NeuronId>,
}

impl SystemBuilder {
    pub fn neuron_count(&self) -> usize {
        self.initial_spikes.len()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn initial_spikes(&self) -> &[u64] {
        &self.initial_spikes
    }

    pub fn add_neuron(&mut self, initial_spikes: u64) -> NeuronId {
        self.initial_spikes.push(initial_spikes);
        self.initial_spikes.len() - 1
    }

    fn known(&self, neuron: NeuronId) -> Result<(), ModelError> {
        if neuron < self.neuron_count() {
            Ok(())
        } else {
            Err(ModelError::UnknownNeuron {
                neuron,
                count: self.neuron_count(),
            })
        }
    }

    /// Appends a rule to `neuron` and returns its insertion index.
    pub fn add_rule(
        &mut self,
        neuron: NeuronId,
        regex: RegEx,
        consumed: u64,
        produced: u64,
        delay: u64,
    ) -> Result<usize, ModelError> {
        self.known(neuron)?;
        let rule = Rule {
            neuron,
            regex,
            consumed,
            produced,
            delay,
        };
        rule.check()?;
        self.rules.push(rule);
        Ok(self.rules.len() - 1)
    }

    /// Appends the forgetting rule `a^spikes -> λ`.
    pub fn add_forgetting_rule(
        &mut self,
        neuron: NeuronId,
        spikes: u64,
    ) -> Result<usize, ModelError> {
        self.add_rule(neuron, RegEx::exactly(spikes), spikes, 0, 0)
    }

    /// Inserts the synapse `from -> to`. Inserting an existing synapse is a no-op.
    pub fn add_synapse(&mut self, from: NeuronId, to: NeuronId) -> Result<(), ModelError> {
        if from == to {
            return Err(ModelError::ReflexiveSynapse(from));
        }
        self.known(from)?;
        self.known(to)?;
        self.synapses.insert((from, to));
        Ok(())
    }

    pub fn set_output_neuron(&mut self, neuron: NeuronId) -> Result<(), ModelError> {
        self.known(neuron)?;
        self.output_neuron = Some(neuron);
        Ok(())
    }

    /// Validates and freezes the system. Rules are stably regrouped by neuron.
    pub fn build(mut self) -> Result<SnpSystem, ModelError> {
        let q = self.neuron_count();
        for rule in &self.rules {
            self.known(rule.neuron)?;
            rule.check()?;
        }
        for &(from, to) in &self.synapses {
            if from == to {
                return Err(ModelError::ReflexiveSynapse(from));
            }
            if from >= q || to >= q {
                return Err(ModelError::UnknownNeuron {
                    neuron: from.max(to),
                    count: q,
                });
            }
        }
        if let Some(out) = self.output_neuron {
            self.known(out)?;
        }
        self.rules.sort_by_key(|r| r.neuron);
        Ok(SnpSystem {
            initial_spikes: self.initial_spikes,
            rules: self.rules,
            synapses: self.synapses,
            output_neuron: self.output_neuron,
        })
    }
}
