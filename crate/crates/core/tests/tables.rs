mod common;

use common::*;
use snpsim::{build_compressed, build_ell, build_sparse, gen_sort, SortInstance};

fn sort3() -> snpsim::SnpSystem {
    gen_sort(&SortInstance::descending(3)).unwrap()
}

#[test]
fn sparse_matrix_of_three_number_sorter() {
    let m = build_sparse(&sort3());
    assert_eq!((m.rows(), m.cols()), (12, 9));
    assert_eq!(m.element_count(), 108);
    for (r, row) in SORT3_SPARSE.iter().enumerate() {
        assert_eq!(m.row(r), row, "rule {}", r + 1);
    }
    let zeros = SORT3_SPARSE.iter().flatten().filter(|&&v| v == 0).count();
    assert_eq!(zeros, 81, "three quarters of the matrix is zero");
}

#[test]
fn ell_matrix_of_three_number_sorter() {
    let m = build_ell(&sort3());
    assert_eq!((m.rows(), m.cols()), (4, 12));
    for (row, expected) in SORT3_ELL.iter().enumerate() {
        for (rule, cell) in expected.iter().enumerate() {
            assert_eq!(m.get(row, rule), *cell, "row {row}, rule {}", rule + 1);
        }
    }
    let filled = (0..12)
        .map(|r| m.column(r).iter().flatten().count())
        .sum::<usize>();
    assert_eq!(filled, 12 + 9 + 3 + 2 + 1);
}

#[test]
fn synapse_matrix_of_three_number_sorter() {
    let m = build_compressed(&sort3());
    assert_eq!((m.rows(), m.cols()), (3, 9));
    for (row, expected) in SORT3_SYNAPSES.iter().enumerate() {
        for (neuron, cell) in expected.iter().enumerate() {
            assert_eq!(m.get(row, neuron), *cell, "row {row}, neuron {neuron}");
        }
    }
}

#[test]
fn ell_and_sparse_agree_on_every_rule() {
    let sys = sort3();
    let (sparse, ell) = (build_sparse(&sys), build_ell(&sys));
    for r in 0..sys.rule_count() {
        let mut row = vec![0; 9];
        ell.walk_column(r, |e| row[e.neuron] += e.amount);
        assert_eq!(row, sparse.row(r));
    }
}
