use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pm_statkit::levy::{sample, sandwich_holds};
use pm_statkit::trifn::TriangleFunction;
use pm_statkit::{distance_to_eps0, levy_distance, Ddf};

fn d(f: &Ddf, g: &Ddf) -> f64 {
    levy_distance(f, g, 1e-12).unwrap().value
}

fn ddf(seed: u64, kind: u8) -> Ddf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind % 3 {
        0 => sample::step(&mut rng, 6, 3.0),
        1 => sample::grid_step(&mut rng, 8),
        _ => sample::linear(&mut rng, 4, 2.0),
    }
}

/// Smallest `a` on a bisection whose sandwich holds at every point of a
/// uniform grid of spacing `h` inside `[0, 1/a)`; can only miss violations
/// narrower than `h`.
fn grid_levy(f: &Ddf, g: &Ddf, h: f64) -> f64 {
    let xs: Vec<f64> = (0..=(60.0 / h) as usize).map(|i| i as f64 * h).collect();
    let eval = |p: &Ddf, x: f64| if x > 0.0 { p.eval(x) } else { 0.0 };
    let inside =
        |p: &Ddf, q: &Ddf, a: f64, x: f64| eval(p, x - a) - a <= eval(q, x) && eval(q, x) <= eval(p, x + a) + a;
    let holds = |a: f64| xs.iter().take_while(|&&x| x < 1.0 / a).all(|&x| inside(f, g, a, x) && inside(g, f, a, x));
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), k in 0u8..3) {
        let (f, g, h) = (ddf(s1, k), ddf(s2, k + 1), ddf(s3, k + 2));
        prop_assert_eq!(d(&f, &f), 0.0);
        prop_assert!((d(&f, &g) - d(&g, &f)).abs() <= 2e-9);
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h) + 5e-9);
        prop_assert!((0.0..=1.0).contains(&d(&f, &g)));
    }

    #[test]
    fn closed_form_matches_bisection(s in any::<u64>(), k in 0u8..3) {
        let f = ddf(s, k);
        prop_assert!((distance_to_eps0(&f) - d(&f, &Ddf::eps0())).abs() <= 1e-9);
    }

    #[test]
    fn unit_steps_sit_at_their_jump(q in 0.0f64..3.0) {
        let f = Ddf::unit_step(q).unwrap();
        prop_assert!((distance_to_eps0(&f) - q.min(1.0)).abs() <= 1e-12);
    }

    #[test]
    fn returned_distance_is_a_sandwich(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (f, g) = (ddf(s1, 0), ddf(s2, 2));
        let v = d(&f, &g);
        prop_assert!(sandwich_holds(&f, &g, (v + 1e-9).min(1.0)));
        prop_assert!(v <= 1e-9 || !sandwich_holds(&f, &g, v - 1e-9));
    }

    #[test]
    fn min_convolution_adds_unit_steps(a in 0.0f64..1.5, b in 0.0f64..1.5) {
        let sum = TriangleFunction::min().apply(&Ddf::unit_step(a).unwrap(), &Ddf::unit_step(b).unwrap());
        prop_assert!(d(&sum, &Ddf::unit_step(a + b).unwrap()) <= 1e-9);
    }

    #[test]
    fn shifting_moves_distance_to_eps0_by_at_most_the_shift(s in any::<u64>(), delta in 0.0f64..0.5) {
        let f = ddf(s, 0);
        let moved = f.shifted(delta).unwrap();
        let (before, after) = (distance_to_eps0(&f), distance_to_eps0(&moved));
        prop_assert!(after >= before - 1e-12 && after <= before + delta + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn agrees_with_grid_oracle(s1 in any::<u64>(), s2 in any::<u64>(), k in 0u8..3) {
        let (f, g) = (ddf(s1, k), ddf(s2, k + 1));
        let h = 1e-3;
        let oracle = grid_levy(&f, &g, h);
        let v = d(&f, &g);
        prop_assert!(oracle <= v + 1e-8 && v <= oracle + 2.0 * h, "oracle {} vs {}", oracle, v);
    }
}
