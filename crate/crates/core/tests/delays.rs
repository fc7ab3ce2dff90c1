use snpsim::oracle::oracle_simulate;
use snpsim::{simulate, Format, HaltReason, RecordMode, RegEx, SimOptions, SnpSystem};

fn delays_of(trace: &snpsim::Trace, n: usize) -> Vec<u64> {
    trace
        .records
        .iter()
        .map(|r| r.delays.as_ref().unwrap()[n])
        .collect()
}

fn counts_of(trace: &snpsim::Trace, n: usize) -> Vec<i64> {
    trace.records.iter().map(|r| r.config[n]).collect()
}

fn full(steps: u64) -> SimOptions {
    SimOptions::new(steps).with_record(RecordMode::Full)
}

#[test]
fn delayed_neuron_cannot_fire_while_closed() {
    // a+/a -> a; 2 with 3 spikes: fires at 0, closed at 1 and 2, fires at 3.
    let mut b = SnpSystem::builder();
    let n = b.add_neuron(3);
    let sink = b.add_neuron(0);
    b.add_rule(n, RegEx::at_least(1), 1, 1, 2).unwrap();
    b.add_synapse(n, sink).unwrap();
    let sys = b.build().unwrap();
    let t = oracle_simulate(&sys, &full(20)).unwrap();
    let fired: Vec<_> = t
        .records
        .iter()
        .skip(1)
        .map(|r| r.fired.as_ref().unwrap()[n])
        .collect();
    assert_eq!(fired, [Some(0), None, None].repeat(3));
    assert_eq!(delays_of(&t, n), vec![0, 2, 1, 0, 2, 1, 0, 2, 1, 0]);
    assert_eq!(counts_of(&t, sink), vec![0, 1, 1, 1, 2, 2, 2, 3, 3, 3]);
    assert_eq!(t.halt, HaltReason::NoApplicableRules);
}

#[test]
fn spikes_sent_to_closed_neuron_are_lost() {
    // `src` sends one spike per step; `dst` closes for 3 steps after firing once.
    let mut b = SnpSystem::builder();
    let src = b.add_neuron(5);
    let dst = b.add_neuron(1);
    b.add_rule(src, RegEx::at_least(1), 1, 1, 0).unwrap();
    b.add_rule(dst, RegEx::exactly(1), 1, 1, 3).unwrap();
    b.add_synapse(src, dst).unwrap();
    let sys = b.build().unwrap();
    let t = oracle_simulate(&sys, &full(3)).unwrap();
    // Step 0: both open, dst fires and receives. Steps 1 and 2: dst closed.
    assert_eq!(counts_of(&t, dst), vec![1, 1, 1, 1]);
    assert_eq!(delays_of(&t, dst), vec![0, 3, 2, 1]);
    assert_eq!(counts_of(&t, src), vec![5, 4, 3, 2]);
}

#[test]
fn idle_steps_reopen_neurons_and_terminate() {
    let mut b = SnpSystem::builder();
    let n = b.add_neuron(1);
    b.add_rule(n, RegEx::exactly(1), 1, 1, 3).unwrap();
    let sys = b.build().unwrap();
    let t = oracle_simulate(&sys, &full(1000)).unwrap();
    assert_eq!(t.halt, HaltReason::NoApplicableRules);
    assert_eq!(t.steps(), 4);
    assert_eq!(delays_of(&t, n), vec![0, 3, 2, 1, 0]);
    let idle: Vec<_> = t.records[2..]
        .iter()
        .map(|r| r.fired.as_ref().unwrap()[n])
        .collect();
    assert_eq!(idle, vec![None, None, None]);
}

#[test]
fn matrix_back_ends_follow_delay_semantics() {
    let mut b = SnpSystem::builder();
    let src = b.add_neuron(5);
    let dst = b.add_neuron(1);
    let out = b.add_neuron(0);
    b.add_rule(src, RegEx::at_least(1), 1, 1, 0).unwrap();
    b.add_rule(dst, RegEx::at_least(1), 1, 1, 2).unwrap();
    b.add_forgetting_rule(out, 2).unwrap();
    b.add_synapse(src, dst).unwrap();
    b.add_synapse(dst, out).unwrap();
    b.add_synapse(src, out).unwrap();
    let sys = b.build().unwrap();
    let opts = full(30);
    let reference = oracle_simulate(&sys, &opts).unwrap();
    for f in [Format::Sparse, Format::Ell, Format::Compressed] {
        assert_eq!(simulate(&sys, f, &opts).unwrap(), reference, "{f}");
    }
}
