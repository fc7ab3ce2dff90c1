use snpsim::{
    gen_sort, gen_subset_sum, simulate, storage_elements, Engine, Format, HaltReason, Selection,
    SimOptions, SortInstance, StorageFormat, SubsetSumInstance,
};

#[test]
fn sorting_descending_inputs_in_every_format() {
    for n in [1usize, 3, 5, 10, 100] {
        let inst = SortInstance::descending(n);
        let sys = gen_sort(&inst).unwrap();
        let expected: Vec<i64> = (1..=n as i64).collect();
        for format in Format::ALL {
            let t = simulate(&sys, format, &SimOptions::new(10 * n as u64 + 10)).unwrap();
            assert_eq!(t.halt, HaltReason::NoApplicableRules, "n={n} {format}");
            assert_eq!(inst.decode(t.final_config()), expected, "n={n} {format}");
        }
    }
}

#[test]
fn sorter_storage_sizes() {
    let sys = gen_sort(&SortInstance::descending(100)).unwrap();
    // m·q + 3m + 2q + 1 with q = 300, m = 10100.
    assert_eq!(storage_elements(StorageFormat::Sparse, &sys), 3_060_901);
    assert_eq!(storage_elements(StorageFormat::Ell, &sys), 2_071_101);
    assert_eq!(storage_elements(StorageFormat::Compressed, &sys), 71_301);
}

#[test]
fn subset_sum_storage_sizes() {
    let sys = gen_subset_sum(&SubsetSumInstance::new((1..=100).collect(), 2525)).unwrap();
    assert_eq!(storage_elements(StorageFormat::Sparse, &sys), 28_660_765);
    assert_eq!(storage_elements(StorageFormat::Ell, &sys), 1_128_165);
    assert_eq!(storage_elements(StorageFormat::Compressed, &sys), 562_765);
}

#[test]
fn subset_sum_stats_in_random_regime() {
    for seed in 0..50 {
        let n = 1 + (seed as usize * 7) % 50;
        let inst = SubsetSumInstance::random(n, seed);
        let s = gen_subset_sum(&inst).unwrap().stats();
        let sum = inst.total() as usize;
        assert_eq!(
            (s.q, s.m),
            (sum + 2 * n + 2, sum + 4 * n + 2),
            "seed {seed}"
        );
        assert_eq!(s.max_out_degree, n);
    }
}

#[test]
fn subset_sum_take_take_path_accepts() {
    let inst = SubsetSumInstance::new(vec![1, 2], 3);
    let sys = gen_subset_sum(&inst).unwrap();
    let layout = inst.layout();
    let accepting: Vec<u64> = (0..200)
        .filter(|&seed| {
            let opts = SimOptions::new(100).with_selection(Selection::SeededRandom(seed));
            let t = simulate(&sys, Format::Compressed, &opts).unwrap();
            layout.accepted(t.final_config())
        })
        .collect();
    assert!(!accepting.is_empty());
    // Roughly one path in four takes both numbers.
    assert!(
        (20..=80).contains(&accepting.len()),
        "{} accepting seeds",
        accepting.len()
    );
}

#[test]
fn subset_sum_first_applicable_takes_everything() {
    let inst = SubsetSumInstance::new(vec![4, 1, 3], 8);
    let sys = gen_subset_sum(&inst).unwrap();
    let t = simulate(&sys, Format::Ell, &SimOptions::new(100)).unwrap();
    assert_eq!(inst.layout().chosen(t.final_config()), vec![0, 1, 2]);
    assert!(inst.layout().accepted(t.final_config()));
}

#[test]
fn sorter_traces_do_not_depend_on_worker_count() {
    let sys = gen_sort(&SortInstance::descending(100)).unwrap();
    let opts = SimOptions::new(1000);
    for format in [Format::Sparse, Format::Ell, Format::Compressed] {
        let texts: Vec<String> = [1, 2, 8]
            .iter()
            .map(|&w| {
                Engine::with_workers(&sys, format, w)
                    .unwrap()
                    .run(&opts)
                    .unwrap()
                    .configs_text()
            })
            .collect();
        assert!(texts.windows(2).all(|p| p[0] == p[1]), "{format}");
    }
}

#[test]
fn compressed_is_smallest_for_both_families() {
    for n in [50usize, 200, 500] {
        let sys = gen_sort(&SortInstance::descending(n)).unwrap();
        let [s, e, c] = StorageFormat::ALL.map(|f| storage_elements(f, &sys));
        assert!(c < e && e < s, "sort {n}: {s} {e} {c}");
    }
    for n in [100usize, 500] {
        let sys = gen_subset_sum(&SubsetSumInstance::random(n, n as u64)).unwrap();
        let [s, e, c] = StorageFormat::ALL.map(|f| storage_elements(f, &sys));
        assert!(c < e && e < s, "subset sum {n}: {s} {e} {c}");
    }
}
