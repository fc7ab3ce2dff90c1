//! Direct rule-by-rule simulator. It works on the rule list and synapse set
//! of the system, never on a transition matrix, so it can check the matrix
//! back ends.

use crate::engine::{HaltReason, SimError, SimOptions, Trace, TraceRecord};
use crate::model::{NeuronId, RuleId, SnpSystem};
use crate::selection::Selection;

/// Rule chosen by each neuron at `step`. Closed neurons choose nothing.
pub fn select(
    system: &SnpSystem,
    config: &[i64],
    delays: &[u64],
    selection: Selection,
    step: u64,
) -> Vec<Option<RuleId>> {
    (0..system.neuron_count())
        .map(|n| {
            if delays[n] > 0 || config[n] < 0 {
                return None;
            }
            let spikes = config[n] as u64;
            let candidates: Vec<RuleId> = system
                .rule_range(n)
                .filter(|&r| system.rules()[r].regex.matches(spikes))
                .collect();
            if candidates.is_empty() {
                None
            } else {
                Some(candidates[selection.pick(step, n, candidates.len())])
            }
        })
        .collect()
}

/// New configuration after the chosen rules fire.
pub fn apply(
    system: &SnpSystem,
    config: &[i64],
    delays: &[u64],
    fired: &[Option<RuleId>],
    step: u64,
) -> Result<Vec<i64>, SimError> {
    let mut next = config.to_vec();
    for (n, rule) in fired.iter().enumerate() {
        let Some(r) = *rule else { continue };
        if delays[n] > 0 {
            continue;
        }
        let rule = &system.rules()[r];
        next[n] -= rule.consumed as i64;
        for to in system.targets(n) {
            if delays[to] == 0 {
                next[to] += rule.produced as i64;
            }
        }
    }
    if let Some(neuron) = next.iter().position(|&v| v < 0) {
        return Err(SimError::NegativeSpikes {
            step,
            neuron,
            spikes: next[neuron],
        });
    }
    Ok(next)
}

fn next_delays(system: &SnpSystem, delays: &[u64], fired: &[Option<RuleId>]) -> Vec<u64> {
    (0..delays.len())
        .map(|n| {
            if delays[n] > 0 {
                delays[n] - 1
            } else {
                fired[n].map_or(0, |r| system.rules()[r].delay)
            }
        })
        .collect()
}

/// Next configuration, next delays and the rule fired by each neuron.
pub type Transition = (Vec<i64>, Vec<u64>, Vec<Option<RuleId>>);

/// One transition.
pub fn oracle_step(
    system: &SnpSystem,
    config: &[i64],
    delays: &[u64],
    selection: Selection,
    step: u64,
) -> Result<Transition, SimError> {
    let fired = select(system, config, delays, selection, step);
    let next = apply(system, config, delays, &fired, step)?;
    Ok((next, next_delays(system, delays, &fired), fired))
}

/// Full computation with the same halting rules as the matrix engine.
pub fn oracle_simulate(system: &SnpSystem, options: &SimOptions) -> Result<Trace, SimError> {
    options.validate()?;
    let q = system.neuron_count();
    let mut config: Vec<i64> = system.initial_spikes().iter().map(|&s| s as i64).collect();
    let mut delays = vec![0u64; q];
    let mut records = vec![TraceRecord::capture(
        options.record,
        &config,
        &delays,
        &vec![None; q],
    )];
    let mut step = 0u64;
    let halt = loop {
        let fired = select(system, &config, &delays, options.selection, step);
        let idle = fired.iter().all(Option::is_none);
        if idle && delays.iter().all(|&d| d == 0) {
            break HaltReason::NoApplicableRules;
        }
        if step >= options.max_steps {
            break HaltReason::StepLimit;
        }
        config = apply(system, &config, &delays, &fired, step)?;
        delays = next_delays(system, &delays, &fired);
        step += 1;
        records.push(TraceRecord::capture(
            options.record,
            &config,
            &delays,
            &fired,
        ));
    };
    Ok(Trace { records, halt })
}

/// Spikes held by the output neuron at the end of `trace`, if the system has one.
pub fn output_spikes(system: &SnpSystem, trace: &Trace) -> Option<i64> {
    system
        .output_neuron()
        .map(|n: NeuronId| trace.final_config()[n])
}
