use hqis_core::parallel::Execution;
use hqis_core::sampling::sample_shots;

#[test]
fn hundred_thousand_shots() {
    let r = sample_shots(100_000, 0, Execution::Parallel).unwrap();
    assert_eq!(r.bell_counts.values().sum::<u64>(), 100_000);
    for (bell, f) in &r.bell_frequencies {
        assert!((0.24..=0.26).contains(f), "{bell}: {f}");
    }
    assert!(
        r.bell_p_value > 0.001,
        "bell chi-square {}",
        r.bell_chi_square
    );
    assert!(r.zz_p_value > 0.001, "zz chi-square {}", r.zz_chi_square);
    assert_eq!(r.x_anticorrelated, 0);
    assert_eq!(r.x_correlated, 100_000);
    for (bell, row) in &r.zz_counts {
        assert_eq!(row.iter().sum::<u64>(), r.bell_counts[bell]);
    }
}

#[test]
fn sampling_is_reproducible_across_modes() {
    let a = sample_shots(5_000, 42, Execution::Parallel).unwrap();
    let b = sample_shots(5_000, 42, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_shots(5_000, 43, Execution::Sequential).unwrap());
}
