use proptest::prelude::*;

use pm_statkit::pmspace::PmSpace;
use pm_statkit::statconv::{
    extract_full_density_subsequence, is_stat_cauchy, limit_candidates, limit_points, splice_on_null_set,
    stat_converges_to, strong_tail_check, SequenceSpec, StatConfig,
};
use pm_statkit::summability::{density, DensityConfig, IndexSet, SummabilityMatrix};
use pm_statkit::trifn::TriangleFunction;
use pm_statkit::Verdict;

fn reals() -> PmSpace<f64> {
    PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min())
}

fn perturbed(set: IndexSet, base: f64, value: f64, n: usize) -> SequenceSpec<f64> {
    SequenceSpec::new(reals(), "x", n, move |k| if set.contains(k) { value } else { base })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn null_perturbations_keep_the_limit(base in -3i32..3, jump in 1i32..6) {
        let (base, value) = (base as f64 * 0.5, (base + jump) as f64 * 0.5);
        let x = perturbed(IndexSet::squares(), base, value, 100_000);
        let a = SummabilityMatrix::cesaro();
        let cfg = StatConfig::default();
        prop_assert_eq!(stat_converges_to(&x, &base, &a, &cfg).unwrap().verdict, Verdict::Pass);
        prop_assert_eq!(is_stat_cauchy(&x, &a, &cfg).unwrap().verdict, Verdict::Pass);
        let grid: Vec<f64> = (-8..=12).map(|i| i as f64 * 0.5).collect();
        let passing: Vec<f64> = limit_candidates(&x, &grid, &a, &cfg).unwrap().into_iter().filter(|c| c.1.is_pass()).map(|c| c.0).collect();
        prop_assert_eq!(passing, vec![base]);
    }

    #[test]
    fn progressions_block_convergence(step in 2usize..6, offset in 0usize..6) {
        let set = IndexSet::progression(step, offset).unwrap();
        let x = perturbed(set, 0.0, 1.0, 30_000);
        let a = SummabilityMatrix::cesaro();
        let cfg = StatConfig::default();
        let r = stat_converges_to(&x, &0.0, &a, &cfg).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Fail);
        prop_assert!((r.exceptions[0].estimate.value - 1.0 / step as f64).abs() < 1e-3);
        prop_assert_eq!(is_stat_cauchy(&x, &a, &cfg).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn complement_densities_sum_to_row_sums(step in 2usize..7, offset in 0usize..7) {
        let a = SummabilityMatrix::from_id("lambda:half").unwrap();
        let b = IndexSet::progression(step, offset).unwrap();
        let cfg = DensityConfig::default();
        let (d, c) = (density(&a, &b, 20_000, &cfg).unwrap(), density(&a, &b.complement(), 20_000, &cfg).unwrap());
        for (&(n, x), &(_, y)) in d.partial_sums.iter().zip(&c.partial_sums) {
            prop_assert!((x + y - a.row_sum(n)).abs() < 1e-9);
        }
    }
}

#[test]
fn roundtrip_under_lambda_means() {
    let a = SummabilityMatrix::from_id("lambda:sqrt").unwrap();
    let cfg = StatConfig::default();
    let x = perturbed(IndexSet::squares(), 1.0, 4.0, 100_000);
    let fd = extract_full_density_subsequence(&x, &1.0, &a, &cfg).unwrap();
    assert_eq!(fd.verdict, Verdict::Pass);
    let g = splice_on_null_set(&x, &1.0, &fd.set);
    assert!(strong_tail_check(&g, &1.0, &cfg).passed);
    assert_eq!(stat_converges_to(&g, &1.0, &a, &cfg).unwrap().verdict, Verdict::Pass);
}

#[test]
fn divergent_sequences_fail_the_construction() {
    let x = SequenceSpec::new(reals(), "alt", 50_000, |k| if k % 2 == 0 { 0.0 } else { 1.0 });
    let fd = extract_full_density_subsequence(&x, &0.0, &SummabilityMatrix::cesaro(), &StatConfig::default());
    assert!(fd.map_or(true, |f| f.verdict != Verdict::Pass));
}

#[test]
fn cluster_points_of_a_three_valued_sequence() {
    let sq = IndexSet::squares();
    let x = SequenceSpec::new(reals(), "x", 60_000, move |k| match k {
        k if sq.contains(k) => 7.0,
        k if k % 3 == 0 => 2.0,
        _ => 0.0,
    });
    let grid: Vec<f64> = (0..=16).map(|i| i as f64 * 0.5).collect();
    let r = limit_points(&x, &SummabilityMatrix::cesaro(), &grid, &StatConfig::default()).unwrap();
    assert_eq!(r.gamma, vec![0.0, 2.0]);
    assert_eq!(r.lambda, vec![0.0, 2.0]);
    assert_eq!(r.ordinary, vec![0.0, 2.0, 7.0]);
    assert!(r.containments_hold());
}
