//! Per-step kernels. Each is a data-parallel map (over neurons or rules)
//! followed by an implicit barrier when the call returns.

use std::sync::atomic::{AtomicI64, Ordering};

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::matrix::{EllMatrix, NeuronRuleMap, RuleVector, SparseMatrix, SynapseMatrix};
use crate::model::{NeuronId, RuleId};
use crate::selection::Selection;

use super::{SimError, SpikingVector};

/// Where a kernel runs.
#[derive(Clone, Copy)]
pub enum Exec<'a> {
    Sequential,
    Parallel(&'a ThreadPool),
}

impl std::fmt::Debug for Exec<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exec::Sequential => f.write_str("Sequential"),
            Exec::Parallel(pool) => write!(f, "Parallel({})", pool.current_num_threads()),
        }
    }
}

impl Exec<'_> {
    fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        }
    }

    fn for_each<F>(self, n: usize, f: F)
    where
        F: Fn(usize) + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).for_each(f),
            Exec::Parallel(pool) => pool.install(|| (0..n).into_par_iter().for_each(f)),
        }
    }
}

/// Selected rule of every open neuron, `None` for closed or inactive neurons.
pub fn select_rules(
    config: &[i64],
    delays: &[u64],
    rv: &RuleVector,
    map: &NeuronRuleMap,
    selection: Selection,
    step: u64,
    exec: Exec<'_>,
) -> Vec<Option<RuleId>> {
    exec.map(config.len(), |nid| {
        if delays[nid] != 0 {
            return None;
        }
        let n = config[nid];
        let rules = map.rules(nid);
        match selection {
            Selection::FirstApplicable => rules.into_iter().find(|&r| rv.applicable(r, n)),
            Selection::SeededRandom(_) => {
                let count = rules.clone().filter(|&r| rv.applicable(r, n)).count();
                if count == 0 {
                    return None;
                }
                let k = selection.pick(step, nid, count);
                rules.filter(|&r| rv.applicable(r, n)).nth(k)
            }
        }
    })
}

/// Spiking vector with one flag per rule (sparse and ELL kernels).
pub fn sv_calc_flags(
    config: &[i64],
    delays: &[u64],
    rv: &RuleVector,
    map: &NeuronRuleMap,
    selection: Selection,
    step: u64,
    exec: Exec<'_>,
) -> SpikingVector {
    let selected = select_rules(config, delays, rv, map, selection, step, exec);
    SpikingVector::from_selection(&selected, rv.len())
}

/// Spiking vector with one rule slot per neuron (compressed kernel).
pub fn sv_calc_rules(
    config: &[i64],
    delays: &[u64],
    rv: &RuleVector,
    map: &NeuronRuleMap,
    selection: Selection,
    step: u64,
    exec: Exec<'_>,
) -> SpikingVector {
    SpikingVector::Rules(select_rules(config, delays, rv, map, selection, step, exec))
}

fn check_non_negative(config: Vec<i64>, step: u64) -> Result<Vec<i64>, SimError> {
    match config.iter().position(|&v| v < 0) {
        Some(neuron) => Err(SimError::NegativeSpikes {
            step,
            neuron,
            spikes: config[neuron],
        }),
        None => Ok(config),
    }
}

fn unload(acc: Vec<AtomicI64>) -> Vec<i64> {
    acc.into_iter().map(AtomicI64::into_inner).collect()
}

/// `C' = S·M + C` restricted to open neurons. One task per destination neuron
/// scans every rule of its column.
pub fn step_sparse(
    config: &[i64],
    delays: &[u64],
    flags: &[bool],
    matrix: &SparseMatrix,
    rv: &RuleVector,
    step: u64,
    exec: Exec<'_>,
) -> Result<Vec<i64>, SimError> {
    let next = exec.map(config.len(), |nid| {
        if delays[nid] != 0 {
            return config[nid];
        }
        let mut spikes = config[nid];
        for (r, &active) in flags.iter().enumerate() {
            // The source-open test never fails for a rule selected this step.
            if active && delays[rv.nid[r]] == 0 {
                spikes += matrix.get(r, nid);
            }
        }
        spikes
    });
    check_non_negative(next, step)
}

/// One task per active rule walks its ELL column and scatters into the shared
/// configuration with atomic adds.
pub fn step_ell(
    config: &[i64],
    delays: &[u64],
    flags: &[bool],
    matrix: &EllMatrix,
    rv: &RuleVector,
    step: u64,
    exec: Exec<'_>,
) -> Result<Vec<i64>, SimError> {
    let acc: Vec<AtomicI64> = config.iter().map(|&v| AtomicI64::new(v)).collect();
    exec.for_each(flags.len(), |r| {
        if !flags[r] || delays[rv.nid[r]] != 0 {
            return;
        }
        matrix.walk_column(r, |entry| {
            if delays[entry.neuron] == 0 {
                acc[entry.neuron].fetch_add(entry.amount, Ordering::Relaxed);
            }
        });
    });
    check_non_negative(unload(acc), step)
}

/// One task per neuron with a selected rule: consume locally, then send `p`
/// to every open out-neighbour listed in the synapse matrix.
pub fn step_compressed(
    config: &[i64],
    delays: &[u64],
    selected: &[Option<RuleId>],
    matrix: &SynapseMatrix,
    rv: &RuleVector,
    step: u64,
    exec: Exec<'_>,
) -> Result<Vec<i64>, SimError> {
    let acc: Vec<AtomicI64> = config.iter().map(|&v| AtomicI64::new(v)).collect();
    exec.for_each(selected.len(), |nid| {
        let Some(r) = selected[nid] else { return };
        if delays[nid] != 0 {
            return;
        }
        acc[nid].fetch_sub(rv.c[r], Ordering::Relaxed);
        let p = rv.p[r];
        for to in matrix.column(nid).iter().map_while(|cell| *cell) {
            if delays[to] == 0 {
                acc[to].fetch_add(p, Ordering::Relaxed);
            }
        }
    });
    check_non_negative(unload(acc), step)
}

/// Closed neurons count down; a neuron that just fired a rule with a delay
/// closes for that many steps.
pub fn update_delays(delays: &[u64], fired: &[Option<RuleId>], rv: &RuleVector) -> Vec<u64> {
    delays
        .iter()
        .zip(fired)
        .map(|(&d, rule)| match (d, rule) {
            (d, _) if d > 0 => d - 1,
            (_, Some(r)) => rv.d[*r],
            _ => 0,
        })
        .collect()
}

/// Neurons whose delay counter is non-zero.
pub fn any_closed(delays: &[u64]) -> bool {
    delays.iter().any(|&d| d != 0)
}

/// Rule fired by each neuron, recovered from a flag-form spiking vector.
pub fn fired_per_neuron(flags: &[bool], map: &NeuronRuleMap) -> Vec<Option<RuleId>> {
    (0..map.neuron_count())
        .map(|nid: NeuronId| map.rules(nid).find(|&r| flags[r]))
        .collect()
}
