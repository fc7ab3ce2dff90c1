#![allow(dead_code)]

use snpsim::{EllEntry, RandomBounds};

// Neuron indices of the 3-number sorter.
pub const I1: usize = 0;
pub const I2: usize = 1;
pub const I3: usize = 2;
pub const S1: usize = 3;
pub const S2: usize = 4;
pub const S3: usize = 5;
pub const O1: usize = 6;
pub const O2: usize = 7;
pub const O3: usize = 8;

/// Transition matrix of the 3-number sorter, rules by neurons.
#[rustfmt::skip]
pub const SORT3_SPARSE: [[i64; 9]; 12] = [
    [-1, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, -1, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, -1, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, -3, 0, 0, 1, 1, 1],
    [0, 0, 0, -2, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, 1, 1],
    [0, 0, 0, 0, -3, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0, 1],
    [0, 0, 0, 0, 0, -2, 0, 0, 0],
    [0, 0, 0, 0, 0, -3, 0, 0, 0],
];

const fn e(amount: i64, neuron: usize) -> Option<EllEntry> {
    Some(EllEntry { neuron, amount })
}

/// ELL matrix of the 3-number sorter: 4 rows, one column per rule.
#[rustfmt::skip]
pub const SORT3_ELL: [[Option<EllEntry>; 12]; 4] = [
    [e(-1, I1), e(-1, I2), e(-1, I3), e(-3, S1), e(-2, S1), e(-1, S1), e(-2, S2), e(-3, S2), e(-1, S2), e(-1, S3), e(-2, S3), e(-3, S3)],
    [e(1, S1),  e(1, S1),  e(1, S1),  e(1, O1),  None,      None,      e(1, O2),  None,      None,      e(1, O3),  None,      None],
    [e(1, S2),  e(1, S2),  e(1, S2),  e(1, O2),  None,      None,      e(1, O3),  None,      None,      None,      None,      None],
    [e(1, S3),  e(1, S3),  e(1, S3),  e(1, O3),  None,      None,      None,      None,      None,      None,      None,      None],
];

/// Synapse matrix of the 3-number sorter: 3 rows, one column per neuron.
#[rustfmt::skip]
pub const SORT3_SYNAPSES: [[Option<usize>; 9]; 3] = [
    [Some(S1), Some(S1), Some(S1), Some(O1), Some(O2), Some(O3), None, None, None],
    [Some(S2), Some(S2), Some(S2), Some(O2), Some(O3), None,     None, None, None],
    [Some(S3), Some(S3), Some(S3), Some(O3), None,     None,     None, None, None],
];

/// Bounds of the random corpus used by the equivalence checks.
pub const CORPUS_BOUNDS: RandomBounds = RandomBounds {
    q_max: 50,
    rules_per_neuron_max: 4,
    out_degree_max: 8,
    spikes_max: 20,
    delay_max: 3,
};
