//! Acceptance suite: one test per headline criterion, each printing a
//! PASS line with the measured values (visible under `--nocapture`).
//!
//! Heavy sweeps are computed once and shared across criteria; everything
//! that is timed or expensive is funneled through one gate so wall-clock
//! assertions are not distorted by parallel test threads.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use mhg_core::convolution::{event_prob_convolution, sweep_oracle_equivalence};
use mhg_core::hypergeom::{event_prob_enumerate, ColumnSums, MhgSpec};
use mhg_core::multinomial::{
    sweep_censored_moments, sweep_zero_reduction_pairs, variance_reduction,
    MomentSweepBounds, MomentSweepOutcome, MultinomialSpec,
};
use mhg_core::numeric::{decimal_string, parse_rational, rational, Rational};
use mhg_core::ordering::{
    check_asymmetric_pair, scan_over_n, sweep_core_ordering, OrderingSweepBounds,
    OrderingSweepOutcome,
};
use mhg_core::simplex::{Rect, SymmetricCore};

fn heavy_gate() -> MutexGuard<'static, ()> {
    static GATE: Mutex<()> = Mutex::new(());
    GATE.lock().unwrap()
}

// A 52-item population in 13 categories of 4; the core keeps every count
// in {1, 2, 3}.
fn deck_sums() -> ColumnSums {
    ColumnSums::new(vec![4; 13])
}

fn deck_core() -> SymmetricCore {
    SymmetricCore::new(deck_sums(), &[1; 13]).unwrap()
}

fn deck_probs() -> &'static Vec<Rational> {
    static PROBS: OnceLock<Vec<Rational>> = OnceLock::new();
    PROBS.get_or_init(|| scan_over_n(&deck_sums(), deck_core().rect()))
}

// |value - millionths/10^6| <= 5/10^7, checked in exact arithmetic.
fn matches_six_digits(value: &Rational, millionths: i64) -> bool {
    let target = rational(millionths, 1_000_000).unwrap();
    let tolerance = rational(5, 10_000_000).unwrap();
    (value - target).abs() <= tolerance
}

fn ordering_sweep() -> &'static (OrderingSweepOutcome, Duration) {
    static SWEEP: OnceLock<(OrderingSweepOutcome, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let _gate = heavy_gate();
        let start = Instant::now();
        let outcome = sweep_core_ordering(&OrderingSweepBounds::default());
        (outcome, start.elapsed())
    })
}

fn moment_sweep() -> &'static (MomentSweepOutcome, Duration) {
    static SWEEP: OnceLock<(MomentSweepOutcome, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let _gate = heavy_gate();
        let start = Instant::now();
        let outcome = sweep_censored_moments(&MomentSweepBounds::default());
        (outcome, start.elapsed())
    })
}

#[test]
fn criterion_01_deck_center_probability() {
    let _gate = heavy_gate();
    let spec = MhgSpec::new(26, deck_sums()).unwrap();
    let rect = deck_core().rect().clone();
    let start = Instant::now();
    let by_convolution = event_prob_convolution(&spec, &rect);
    let by_enumeration = event_prob_enumerate(&spec, &rect);
    let elapsed = start.elapsed();
    assert_eq!(
        by_convolution, by_enumeration,
        "convolution and enumeration disagree at n=26"
    );
    assert!(
        matches_six_digits(&by_convolution, 231_453),
        "P_26 = {by_convolution} is not 0.231453 to six digits"
    );
    assert!(
        elapsed < Duration::from_secs(1),
        "took {elapsed:?}, expected under 1s"
    );
    println!(
        "PASS criterion 01: P_26 = {} = {} by both paths in {elapsed:?}",
        by_convolution,
        decimal_string(&by_convolution, 6)
    );
}

#[test]
fn criterion_02_deck_neighbor_probabilities() {
    let _gate = heavy_gate();
    let start = Instant::now();
    let probs = deck_probs();
    let (p25, p27) = (&probs[25], &probs[27]);
    let elapsed = start.elapsed();
    assert_eq!(p25, p27, "P_25 and P_27 must coincide exactly");
    assert!(
        matches_six_digits(p25, 225_406),
        "P_25 = {p25} is not 0.225406 to six digits"
    );
    assert!(
        elapsed < Duration::from_secs(1),
        "took {elapsed:?}, expected under 1s"
    );
    println!(
        "PASS criterion 02: P_25 = P_27 = {} = {} in {elapsed:?}",
        p25,
        decimal_string(p25, 6)
    );
}

#[test]
fn criterion_03_deck_impossible_sample_sizes() {
    let probs = deck_probs();
    for n in 40..=52usize {
        assert!(
            probs[n].is_zero(),
            "P_{n} = {} but no sample of that size fits the core",
            probs[n]
        );
    }
    println!("PASS criterion 03: P_n = 0 for all 40 <= n <= 52");
}

#[test]
fn criterion_04_asymmetric_counterexample() {
    let sums = ColumnSums::new(vec![4, 6]);
    let rect: Rect = "0:3,3:6".parse().unwrap();
    let cmp = check_asymmetric_pair(&sums, &rect, 5, 6).unwrap();
    assert_eq!(cmp.prob_n, rational(31, 42).unwrap());
    assert_eq!(cmp.prob_n_prime, rational(13, 14).unwrap());
    assert!(
        cmp.violated,
        "the asymmetric rectangle must violate the ordering"
    );
    println!(
        "PASS criterion 04: P_5 = 31/42 < P_6 = 13/14 for an asymmetric rectangle, violation reported"
    );
}

#[test]
fn criterion_05_symmetric_core_ordering_sweep() {
    let (outcome, elapsed) = ordering_sweep();
    assert!(outcome.cores > 1_000, "sweep looks truncated: {outcome:?}");
    assert_eq!(
        outcome.upper_violations, 0,
        "{:?}",
        outcome.first_findings
    );
    assert_eq!(
        outcome.lower_violations, 0,
        "{:?}",
        outcome.first_findings
    );
    assert!(
        *elapsed <= Duration::from_secs(300),
        "took {elapsed:?}, expected at most 5 minutes"
    );
    println!(
        "PASS criterion 05: ordering holds over all pairs for {} cores in {elapsed:?}",
        outcome.cores
    );
}

#[test]
fn criterion_06_convolution_matches_enumeration() {
    let _gate = heavy_gate();
    let start = Instant::now();
    let outcome = sweep_oracle_equivalence(3, 5);
    let elapsed = start.elapsed();
    assert!(
        outcome.comparisons > 100_000,
        "sweep looks truncated: {outcome:?}"
    );
    assert_eq!(outcome.mismatches, 0, "{:?}", outcome.first_findings);
    println!(
        "PASS criterion 06: both probability paths agree on {} comparisons in {elapsed:?}",
        outcome.comparisons
    );
}

#[test]
fn criterion_07_ratio_inequality_sweep() {
    let (outcome, _) = ordering_sweep();
    assert_eq!(outcome.ratio_violations, 0, "{:?}", outcome.first_findings);
    assert_eq!(outcome.ratio_mismatches, 0, "{:?}", outcome.first_findings);
    println!(
        "PASS criterion 07: ratio inequality holds and matches adjacent comparisons for {} cores",
        outcome.cores
    );
}

#[test]
fn criterion_08_sample_size_symmetry() {
    let (outcome, _) = ordering_sweep();
    assert_eq!(
        outcome.symmetry_violations, 0,
        "{:?}",
        outcome.first_findings
    );
    println!(
        "PASS criterion 08: P_n = P_(t-n) across the sweep of {} cores",
        outcome.cores
    );
}

#[test]
fn criterion_09_variance_reduction_signs() {
    // Unconstrained rectangles reduce nothing, for any combination.
    let spec = MultinomialSpec::new(
        4,
        vec![
            rational(1, 6).unwrap(),
            rational(1, 3).unwrap(),
            rational(1, 2).unwrap(),
        ],
    )
    .unwrap();
    let full = Rect::full(&[4, 4, 4]);
    for c_text in [["1", "0", "0"], ["1", "-2", "1/3"], ["-1/2", "0", "5"]] {
        let c: Vec<Rational> = c_text.iter().map(|t| parse_rational(t).unwrap()).collect();
        let reduction = variance_reduction(&spec, &full, &c).unwrap();
        assert!(
            reduction.is_zero(),
            "full rectangle must reduce nothing, got {reduction} for c={c_text:?}"
        );
    }

    // The family with one upper bound on the third count and the
    // combination (-p_2, p_1, 0): reduction exactly zero everywhere.
    let pairs = {
        let _gate = heavy_gate();
        sweep_zero_reduction_pairs(8, 8)
    };
    assert_eq!(pairs.cells, 1_620, "pair family looks truncated");
    assert_eq!(pairs.zero_probability_cells, 36);
    assert_eq!(pairs.failures, 0, "{:?}", pairs.first_findings);

    // Component projections across the grid sweep: zero reduction exactly
    // for sure events, pinned components, and events that factor into the
    // cylinder pinning their zero components; strictly positive otherwise.
    let (outcome, elapsed) = moment_sweep();
    assert_eq!(
        outcome.sure_event_nonzero, 0,
        "{:?}",
        outcome.first_findings
    );
    assert_eq!(outcome.pinned_nonzero, 0, "{:?}", outcome.first_findings);
    assert_eq!(
        outcome.factorized_nonzero, 0,
        "{:?}",
        outcome.first_findings
    );
    assert_eq!(
        outcome.interior_nonpositive, 0,
        "{:?}",
        outcome.first_findings
    );
    assert_eq!(
        outcome.classifier_failures, 0,
        "{:?}",
        outcome.first_findings
    );
    println!(
        "PASS criterion 09: reduction signs verified on {} grid cells ({} zero-probability) in {elapsed:?}, plus {} zero-reduction pairs",
        outcome.cells, outcome.zero_probability_cells, pairs.cells
    );
}

#[test]
fn criterion_10_moment_paths_cross_validate() {
    let (outcome, elapsed) = moment_sweep();
    assert!(
        outcome.cells > 1_000_000,
        "sweep looks truncated: {} cells",
        outcome.cells
    );
    assert_eq!(
        outcome.cross_validation_failures, 0,
        "{:?}",
        outcome.first_findings
    );
    assert_eq!(
        outcome.invariant_failures, 0,
        "{:?}",
        outcome.first_findings
    );
    println!(
        "PASS criterion 10: summation and series moments agree on {} cells in {elapsed:?}",
        outcome.cells
    );
}
