//! Benchmark families (sorting, subset sum) and random systems.

use std::collections::HashSet;
use std::ops::Range;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ModelError, NeuronId, RegEx, SnpSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GenError> {
    Err(GenError::InvalidInstance(msg.into()))
}

/// `n` distinct positive numbers to sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortInstance {
    pub values: Vec<u64>,
}

impl SortInstance {
    /// Worst case: `n, n-1, .., 1`.
    pub fn descending(n: usize) -> Self {
        SortInstance {
            values: (1..=n as u64).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.values.is_empty() {
            return invalid("a sorting instance needs at least one value");
        }
        if self.values.contains(&0) {
            return invalid("sorting values must be positive");
        }
        let mut seen = HashSet::new();
        if let Some(v) = self.values.iter().find(|v| !seen.insert(**v)) {
            return invalid(format!("duplicate value {v}"));
        }
        Ok(())
    }

    /// Neurons whose final spike counts hold the sorted values, smallest first.
    pub fn output_neurons(&self) -> Range<NeuronId> {
        2 * self.n()..3 * self.n()
    }

    /// Reads the sorted sequence from a final configuration.
    pub fn decode(&self, config: &[i64]) -> Vec<i64> {
        config[self.output_neurons()].to_vec()
    }
}

/// Sorter on `3n` neurons: inputs `i_1..i_n`, sorting layer `s_1..s_n`,
/// outputs `o_1..o_n`, in that order.
///
/// Every step each non-empty input sends one spike to every `s_j`, so the
/// sorting layer sees how many inputs are still non-empty. `s_j` fires only
/// when that count is exactly `n+1-j` and forgets every other count; it
/// feeds `o_j..o_n`. Output `o_j` ends up holding the `j`-th smallest value.
pub fn gen_sort(instance: &SortInstance) -> Result<SnpSystem, GenError> {
    instance.validate()?;
    let n = instance.n() as u64;
    let mut b = SnpSystem::builder();
    let inputs: Vec<_> = instance.values.iter().map(|&v| b.add_neuron(v)).collect();
    let sorters: Vec<_> = (0..n).map(|_| b.add_neuron(0)).collect();
    let outputs: Vec<_> = (0..n).map(|_| b.add_neuron(0)).collect();

    for &i in &inputs {
        b.add_rule(i, RegEx::at_least(1), 1, 1, 0)?;
        for &s in &sorters {
            b.add_synapse(i, s)?;
        }
    }
    for (j, &s) in sorters.iter().enumerate() {
        let k = n - j as u64;
        b.add_rule(s, RegEx::exactly(k), k, 1, 0)?;
        for other in (k + 1..=n).chain((1..k).rev()) {
            b.add_forgetting_rule(s, other)?;
        }
        for &o in &outputs[j..] {
            b.add_synapse(s, o)?;
        }
    }
    Ok(b.build()?)
}

/// Numbers `V` and target `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub values: Vec<u64>,
    pub target: u64,
}

impl SubsetSumInstance {
    pub fn new(values: Vec<u64>, target: u64) -> Self {
        SubsetSumInstance { values, target }
    }

    /// `n` values drawn uniformly from `0..=50`, target equal to the sum of
    /// a random fifth of them.
    pub fn random(n: usize, seed: u64) -> Self {
        Self::random_in(n, 50, seed)
    }

    pub fn random_in(n: usize, value_max: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=value_max)).collect();
        let picked = sample(&mut rng, n, n / 5);
        let target = picked.iter().map(|i| values[i]).sum();
        SubsetSumInstance { values, target }
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    fn validate(&self) -> Result<(), GenError> {
        let total = self
            .values
            .iter()
            .try_fold(0u64, |acc, &v| acc.checked_add(v));
        match total {
            None => invalid("sum of values overflows"),
            Some(t) if self.target > t => invalid(format!(
                "target {} exceeds the sum of values {t}",
                self.target
            )),
            _ => Ok(()),
        }
    }

    /// Where each part of the generated system lives.
    pub fn layout(&self) -> SubsetSumLayout {
        let mut next = 2;
        let numbers = self
            .values
            .iter()
            .map(|&v| {
                let timer = next;
                let chain = timer + 2..timer + 2 + v as usize;
                next = chain.end;
                NumberNeurons {
                    timer,
                    chooser: timer + 1,
                    chain,
                }
            })
            .collect();
        SubsetSumLayout {
            clock: 0,
            acc: 1,
            numbers,
            complement: self.target == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberNeurons {
    pub timer: NeuronId,
    pub chooser: NeuronId,
    /// One neuron per unit of the value.
    pub chain: Range<NeuronId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumLayout {
    pub clock: NeuronId,
    /// Output neuron.
    pub acc: NeuronId,
    pub numbers: Vec<NumberNeurons>,
    /// With `S = 0` the system checks that the numbers not fed to the
    /// accumulator sum to zero, i.e. the fed ones sum to `ΣV`.
    pub complement: bool,
}

impl SubsetSumLayout {
    /// The output neuron fired, which happens only when the chosen subset
    /// sums to the target.
    pub fn accepted(&self, config: &[i64]) -> bool {
        config[self.acc] == 0
    }

    /// Indices of the numbers in the chosen subset. Zero values never show
    /// up, since they have no chain.
    pub fn chosen(&self, config: &[i64]) -> Vec<usize> {
        self.numbers
            .iter()
            .enumerate()
            .filter(|(_, num)| !num.chain.is_empty())
            .filter(|(_, num)| (config[num.chain.end - 1] == 0) != self.complement)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Non-uniform subset-sum system with `ΣV + 2n + 2` neurons and
/// `ΣV + 4n + 2` rules.
///
/// A clock holding `v_max - v_min` spikes ticks every timer once per step.
/// The timer of number `i` starts with 2 spikes and fires on exactly
/// `v_max - v_i + 2`, so the choosers are triggered in decreasing order of
/// value and every chain finishes at the same step. After firing, the timer
/// stays closed until the clock is empty and then forgets its one leftover
/// tick. The chooser either fires into the chain (take) or forgets (skip).
/// Chain neuron `j` holds one spike of its own, fires on exactly `j` spikes
/// and passes `j` on, so a taken chain of length `v_i` delivers `v_i` spikes
/// to the accumulator. The accumulator starts with 1 spike and fires on
/// exactly `1 + S`.
pub fn gen_subset_sum(instance: &SubsetSumInstance) -> Result<SnpSystem, GenError> {
    instance.validate()?;
    let layout = instance.layout();
    let v_max = instance.values.iter().copied().max().unwrap_or(0);
    let v_min = instance.values.iter().copied().min().unwrap_or(0);
    let ticks = v_max - v_min;
    let goal = if layout.complement {
        instance.total()
    } else {
        instance.target
    };

    let mut b = SnpSystem::builder();
    let clock = b.add_neuron(ticks);
    let acc = b.add_neuron(1);
    debug_assert_eq!((clock, acc), (layout.clock, layout.acc));
    b.add_rule(clock, RegEx::at_least(1), 1, 1, 0)?;
    b.add_rule(acc, RegEx::exactly(goal + 1), goal + 1, 1, 0)?;
    b.set_output_neuron(acc)?;

    for (&v, num) in instance.values.iter().zip(&layout.numbers) {
        let timer = b.add_neuron(2);
        let chooser = b.add_neuron(0);
        for _ in num.chain.clone() {
            b.add_neuron(1);
        }
        let wait = v_max - v;
        b.add_rule(timer, RegEx::exactly(wait + 2), wait + 2, 1, ticks - wait)?;
        b.add_forgetting_rule(timer, 1)?;
        b.add_synapse(clock, timer)?;
        b.add_synapse(timer, chooser)?;

        b.add_rule(chooser, RegEx::exactly(1), 1, 1, 0)?;
        b.add_forgetting_rule(chooser, 1)?;
        if let Some(first) = num.chain.clone().next() {
            b.add_synapse(chooser, first)?;
        }
        for (j, k) in num.chain.clone().enumerate() {
            let j = j as u64 + 1;
            if j == 1 {
                b.add_rule(k, RegEx::exactly(2), 2, 1, 0)?;
            } else {
                b.add_rule(k, RegEx::exactly(j), j, j, 0)?;
            }
            b.add_synapse(k, if k + 1 == num.chain.end { acc } else { k + 1 })?;
        }
    }
    Ok(b.build()?)
}

/// Upper bounds for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomBounds {
    pub q_max: usize,
    pub rules_per_neuron_max: usize,
    pub out_degree_max: usize,
    pub spikes_max: u64,
    pub delay_max: u64,
}

impl RandomBounds {
    pub fn new(
        q_max: usize,
        rules_per_neuron_max: usize,
        out_degree_max: usize,
        spikes_max: u64,
        delay_max: u64,
    ) -> Self {
        RandomBounds {
            q_max,
            rules_per_neuron_max,
            out_degree_max,
            spikes_max,
            delay_max,
        }
    }
}

impl Default for RandomBounds {
    fn default() -> Self {
        RandomBounds::new(50, 4, 8, 20, 3)
    }
}

/// Random valid system within `bounds`, reproducible from `seed`.
///
/// Every firing rule has a threshold at least as large as what it consumes,
/// so spike counts never go negative. About a third of the rules are exact
/// matches, a third threshold rules and a third forgetting rules.
pub fn gen_random(bounds: RandomBounds, seed: u64) -> Result<SnpSystem, GenError> {
    let RandomBounds {
        q_max,
        rules_per_neuron_max,
        out_degree_max,
        spikes_max,
        delay_max,
    } = bounds;
    if q_max == 0 || rules_per_neuron_max == 0 || out_degree_max == 0 || spikes_max == 0 {
        return invalid("random bounds other than the delay must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rng.gen_range(1..=q_max);
    let mut b = SnpSystem::builder();
    for _ in 0..q {
        b.add_neuron(rng.gen_range(0..=spikes_max));
    }
    for n in 0..q {
        for _ in 0..rng.gen_range(0..=rules_per_neuron_max) {
            let threshold = rng.gen_range(1..=spikes_max);
            match rng.gen_range(0..3) {
                0 => {
                    b.add_forgetting_rule(n, threshold)?;
                }
                kind => {
                    let regex = if kind == 1 {
                        RegEx::exactly(threshold)
                    } else {
                        RegEx::at_least(threshold)
                    };
                    let consumed = rng.gen_range(1..=threshold);
                    let produced = rng.gen_range(1..=consumed);
                    let delay = rng.gen_range(0..=delay_max);
                    b.add_rule(n, regex, consumed, produced, delay)?;
                }
            }
        }
        let degree = rng.gen_range(0..=out_degree_max.min(q - 1));
        for t in sample(&mut rng, q - 1, degree) {
            // Skip over `n` itself.
            b.add_synapse(n, if t >= n { t + 1 } else { t })?;
        }
    }
    Ok(b.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{simulate, Format, HaltReason, SimOptions};
    use crate::selection::Selection;

    #[test]
    fn sort_stats() {
        for n in [1usize, 3, 100] {
            let s = gen_sort(&SortInstance::descending(n)).unwrap().stats();
            assert_eq!((s.q, s.m, s.max_out_degree), (3 * n, n + n * n, n));
        }
    }

    #[test]
    fn sort_rejects_duplicates_and_zero() {
        let dup = SortInstance {
            values: vec![3, 1, 3],
        };
        assert!(matches!(gen_sort(&dup), Err(GenError::InvalidInstance(_))));
        assert!(gen_sort(&SortInstance { values: vec![2, 0] }).is_err());
        assert!(gen_sort(&SortInstance { values: vec![] }).is_err());
    }

    #[test]
    fn sort_arbitrary_values() {
        let inst = SortInstance {
            values: vec![7, 2, 9, 4],
        };
        let sys = gen_sort(&inst).unwrap();
        let t = simulate(&sys, Format::Oracle, &SimOptions::new(100)).unwrap();
        assert_eq!(t.halt, HaltReason::NoApplicableRules);
        assert_eq!(inst.decode(t.final_config()), vec![2, 4, 7, 9]);
    }

    #[test]
    fn subset_sum_stats_and_edges() {
        let inst = SubsetSumInstance::new((1..=100).collect(), 17);
        let s = gen_subset_sum(&inst).unwrap().stats();
        assert_eq!((s.q, s.m, s.max_out_degree), (5252, 5452, 100));

        let s = gen_subset_sum(&SubsetSumInstance::new(vec![], 0))
            .unwrap()
            .stats();
        assert_eq!((s.q, s.m, s.max_out_degree), (2, 2, 0));

        let s = gen_subset_sum(&SubsetSumInstance::new(vec![4], 4))
            .unwrap()
            .stats();
        assert_eq!((s.q, s.m, s.max_out_degree), (8, 10, 1));

        assert!(gen_subset_sum(&SubsetSumInstance::new(vec![1, 2], 4)).is_err());
    }

    /// Runs every seed in `seeds` and collects (accepted, chosen subset).
    fn outcomes(inst: &SubsetSumInstance, seeds: Range<u64>) -> Vec<(bool, Vec<usize>)> {
        let sys = gen_subset_sum(inst).unwrap();
        let layout = inst.layout();
        seeds
            .map(|seed| {
                let opts = SimOptions::new(500).with_selection(Selection::SeededRandom(seed));
                let t = simulate(&sys, Format::Oracle, &opts).unwrap();
                assert_eq!(t.halt, HaltReason::NoApplicableRules);
                let c = t.final_config();
                (layout.accepted(c), layout.chosen(c))
            })
            .collect()
    }

    #[test]
    fn subset_sum_accepts_exactly_matching_subsets() {
        let inst = SubsetSumInstance::new(vec![3, 1, 5, 2], 6);
        let runs = outcomes(&inst, 0..300);
        let mut seen = HashSet::new();
        for (accepted, chosen) in runs {
            let sum: u64 = chosen.iter().map(|&i| inst.values[i]).sum();
            assert_eq!(accepted, sum == inst.target, "{chosen:?}");
            seen.insert(chosen);
        }
        assert_eq!(seen.len(), 16, "every subset should be reachable");
    }

    #[test]
    fn subset_sum_zero_target_uses_complement() {
        let inst = SubsetSumInstance::new(vec![2, 0, 3], 0);
        for (accepted, chosen) in outcomes(&inst, 0..100) {
            let sum: u64 = chosen.iter().map(|&i| inst.values[i]).sum();
            assert_eq!(accepted, sum == 0);
        }
    }

    #[test]
    fn random_subset_sum_instances_are_valid() {
        for seed in 0..20 {
            let inst = SubsetSumInstance::random(30, seed);
            assert!(inst.values.iter().all(|&v| v <= 50));
            assert!(inst.target <= inst.total());
            gen_subset_sum(&inst).unwrap();
        }
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let bounds = RandomBounds::default();
        for seed in 0..200 {
            let a = gen_random(bounds, seed).unwrap();
            assert_eq!(a, gen_random(bounds, seed).unwrap());
            let s = a.stats();
            assert!(s.q <= 50 && s.max_out_degree <= 8);
            assert!(a.initial_spikes().iter().all(|&x| x <= 20));
            assert!(a.rules().iter().all(|r| r.delay <= 3));
            assert!((0..s.q).all(|n| a.rules_of(n).len() <= 4));
        }
    }

    #[test]
    fn random_covers_every_rule_kind() {
        let (mut exact, mut forget, mut threshold) = (0, 0, 0);
        for seed in 0..50 {
            for r in gen_random(RandomBounds::default(), seed).unwrap().rules() {
                match (r.is_forgetting(), r.regex.kind) {
                    (true, _) => forget += 1,
                    (false, crate::model::RegexKind::Exactly) => exact += 1,
                    _ => threshold += 1,
                }
            }
        }
        assert!(exact > 0 && forget > 0 && threshold > 0);
    }

    #[test]
    fn random_rejects_zero_bounds() {
        assert!(gen_random(RandomBounds::new(0, 1, 1, 1, 0), 1).is_err());
        assert!(gen_random(RandomBounds::new(1, 1, 1, 1, 0), 1).is_ok());
    }
}
