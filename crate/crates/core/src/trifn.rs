//! t-norms and the triangle functions they induce on distance distribution
//! functions.
//!
//! The built-in triangle functions are sup-convolutions
//! `τ_T(f, g)(x) = sup_{u + v = x} T(f(u), g(v))`. When both inputs are step
//! functions the result is a step function whose jumps sit at sums of knot
//! positions, and it is computed exactly. Otherwise the convolution is
//! sampled on a uniform grid of `grid_resolution` points (plus all knot
//! sums) and returned as a piecewise-linear DDF.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::levy::{check_points, levy_distance, sandwich_holds, Ddf};

pub const DEFAULT_GRID_RESOLUTION: usize = 512;
pub const MIN_GRID_RESOLUTION: usize = 16;

/// Relative spacing under which two knot sums are merged.
const MERGE: f64 = 1e-12;

/// A t-norm on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TNorm {
    Min,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::Min => "min",
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
        }
    }
}

type CustomFn = dyn Fn(&Ddf, &Ddf) -> Ddf + Send + Sync;

#[derive(Clone)]
enum Kind {
    Sup(TNorm),
    Custom { name: String, op: Arc<CustomFn> },
}

/// A binary operation on DDFs intended to satisfy the triangle-function
/// axioms. Built-ins do; custom operations are taken on trust and can be
/// audited with [`TriangleFunction::check_axioms`].
#[derive(Clone)]
pub struct TriangleFunction {
    kind: Kind,
    grid_resolution: usize,
}

impl fmt::Debug for TriangleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriangleFunction")
            .field("name", &self.name())
            .field("grid_resolution", &self.grid_resolution)
            .finish()
    }
}

impl TriangleFunction {
    pub fn sup_convolution(t: TNorm) -> Self {
        TriangleFunction { kind: Kind::Sup(t), grid_resolution: DEFAULT_GRID_RESOLUTION }
    }

    pub fn min() -> Self {
        Self::sup_convolution(TNorm::Min)
    }

    pub fn product() -> Self {
        Self::sup_convolution(TNorm::Product)
    }

    pub fn lukasiewicz() -> Self {
        Self::sup_convolution(TNorm::Lukasiewicz)
    }

    /// Wraps an arbitrary operation.
    pub fn custom<F>(name: impl Into<String>, op: F) -> Self
    where
        F: Fn(&Ddf, &Ddf) -> Ddf + Send + Sync + 'static,
    {
        TriangleFunction {
            kind: Kind::Custom { name: name.into(), op: Arc::new(op) },
            grid_resolution: DEFAULT_GRID_RESOLUTION,
        }
    }

    /// Parses the configuration names `min`, `product` and `lukasiewicz`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "min" => Ok(Self::min()),
            "product" => Ok(Self::product()),
            "lukasiewicz" => Ok(Self::lukasiewicz()),
            other => domain(format!("unknown triangle function `{other}` (expected min, product or lukasiewicz)")),
        }
    }

    pub fn with_grid_resolution(mut self, n: usize) -> Result<Self> {
        if n < MIN_GRID_RESOLUTION {
            return domain(format!("grid resolution {n} is below the minimum {MIN_GRID_RESOLUTION}"));
        }
        self.grid_resolution = n;
        Ok(self)
    }

    pub fn grid_resolution(&self) -> usize {
        self.grid_resolution
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Sup(t) => format!("tau_{}", t.name()),
            Kind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn tnorm(&self) -> Option<TNorm> {
        match self.kind {
            Kind::Sup(t) => Some(t),
            Kind::Custom { .. } => None,
        }
    }

    pub fn apply(&self, f: &Ddf, g: &Ddf) -> Ddf {
        match &self.kind {
            Kind::Sup(t) => sup_convolve(*t, f, g, self.grid_resolution),
            Kind::Custom { op, .. } => op(f, g),
        }
    }

    /// Checks associativity, commutativity, monotonicity in each place and
    /// the identity `ε_0` on all pairs and triples drawn from `samples`.
    ///
    /// Equalities are judged in the Lévy metric (`d_L ≤ tol`); an inequality
    /// `A ≤ B` is judged as `A(x) ≤ B(x + tol) + tol` at every breakpoint.
    #[allow(clippy::needless_range_loop)]
    pub fn check_axioms(&self, samples: &[Ddf], tol: f64) -> Result<AxiomReport> {
        if samples.len() < 3 {
            return domain(format!("axiom check needs at least 3 samples, got {}", samples.len()));
        }
        if !(tol > 0.0) {
            return domain(format!("tolerance {tol} must be positive"));
        }
        let n = samples.len();
        let products: Vec<Vec<Ddf>> =
            (0..n).map(|i| (0..n).map(|j| self.apply(&samples[i], &samples[j])).collect()).collect();

        let mut commutativity = AxiomOutcome::new("commutativity");
        for i in 0..n {
            for j in i + 1..n {
                commutativity.record_equal(&products[i][j], &products[j][i], tol, || vec![i, j]);
            }
        }

        let mut associativity = AxiomOutcome::new("associativity");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.apply(&products[i][j], &samples[k]);
                    let right = self.apply(&samples[i], &products[j][k]);
                    associativity.record_equal(&left, &right, tol, || vec![i, j, k]);
                }
            }
        }

        let mut monotonicity = AxiomOutcome::new("monotonicity");
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let upper = samples[i].pointwise_max(&samples[j]);
                for k in 0..n {
                    let raised_first = self.apply(&upper, &samples[k]);
                    monotonicity.record_le(&products[i][k], &raised_first, tol, || vec![i, j, k]);
                    let raised_second = self.apply(&samples[k], &upper);
                    monotonicity.record_le(&products[k][i], &raised_second, tol, || vec![k, i, j]);
                }
            }
        }

        let mut identity = AxiomOutcome::new("identity");
        let e0 = Ddf::eps0();
        for (i, f) in samples.iter().enumerate() {
            identity.record_equal(&self.apply(&e0, f), f, tol, || vec![i]);
            identity.record_equal(&self.apply(f, &e0), f, tol, || vec![i]);
        }

        Ok(AxiomReport { tau: self.name(), tol, associativity, commutativity, monotonicity, identity })
    }

    /// Lévy change of `τ(f, g)` when `f` is shifted right by each `delta`.
    /// A measured continuity modulus; nothing is asserted about it.
    pub fn continuity_modulus(&self, f: &Ddf, g: &Ddf, deltas: &[f64]) -> Result<Vec<(f64, f64)>> {
        let base = self.apply(f, g);
        deltas
            .iter()
            .map(|&d| {
                let moved = self.apply(&f.shifted(d)?, g);
                Ok((d, levy_distance(&base, &moved, 1e-9)?.value))
            })
            .collect()
    }
}

/// Result of one axiom over all tested tuples.
#[derive(Clone, Debug)]
pub struct AxiomOutcome {
    pub axiom: &'static str,
    pub passed: bool,
    pub checked: usize,
    /// Largest Lévy distance (equalities) or value excess (inequalities) seen.
    pub worst: f64,
    /// Sample indices of the first failing tuple.
    pub witness: Option<Vec<usize>>,
}

impl AxiomOutcome {
    fn new(axiom: &'static str) -> Self {
        AxiomOutcome { axiom, passed: true, checked: 0, worst: 0.0, witness: None }
    }

    fn fail(&mut self, witness: impl FnOnce() -> Vec<usize>) {
        if self.passed {
            self.witness = Some(witness());
        }
        self.passed = false;
    }

    fn record_equal(&mut self, a: &Ddf, b: &Ddf, tol: f64, witness: impl FnOnce() -> Vec<usize>) {
        self.checked += 1;
        if a == b {
            return;
        }
        let d = levy_distance(a, b, (tol * 0.1).min(1e-9)).map(|d| d.value).unwrap_or(1.0);
        self.worst = self.worst.max(d);
        if !sandwich_holds(a, b, tol) {
            self.fail(witness);
        }
    }

    fn record_le(&mut self, lower: &Ddf, upper: &Ddf, tol: f64, witness: impl FnOnce() -> Vec<usize>) {
        self.checked += 1;
        let excess =
            check_points(lower, upper).into_iter().map(|x| lower.eval(x) - upper.eval(x + tol)).fold(0.0, f64::max);
        self.worst = self.worst.max(excess);
        if lower.dominated_by(upper, tol).is_some() {
            self.fail(witness);
        }
    }
}

/// Per-axiom outcomes of [`TriangleFunction::check_axioms`].
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub tau: String,
    pub tol: f64,
    pub associativity: AxiomOutcome,
    pub commutativity: AxiomOutcome,
    pub monotonicity: AxiomOutcome,
    pub identity: AxiomOutcome,
}

impl AxiomReport {
    pub fn outcomes(&self) -> [&AxiomOutcome; 4] {
        [&self.associativity, &self.commutativity, &self.monotonicity, &self.identity]
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes().iter().all(|o| o.passed)
    }
}

fn sup_convolve(t: TNorm, f: &Ddf, g: &Ddf, resolution: usize) -> Ddf {
    let tail = t.apply(f.tail(), g.tail());
    let t_max = f.last_knot() + g.last_knot();
    if t_max == 0.0 {
        return Ddf::from_knots([(0.0, 0.0, tail)]).expect("single knot at 0");
    }
    let sums = knot_sums(f, g);
    if f.is_step() && g.is_step() {
        step_convolve(t, f, g, &sums, tail)
    } else {
        grid_convolve(t, f, g, &sums, t_max, resolution, tail)
    }
}

fn knot_sums(f: &Ddf, g: &Ddf) -> Vec<f64> {
    let mut sums: Vec<f64> = f.knots().iter().flat_map(|a| g.knots().iter().map(move |b| a.t + b.t)).collect();
    sums.sort_by(f64::total_cmp);
    dedup_close(&mut sums);
    sums
}

fn dedup_close(xs: &mut Vec<f64>) {
    xs.dedup_by(|b, a| (*b - *a) <= MERGE * a.max(1.0));
}

/// `τ_T(f, g)(x)` from one-sided limits at the knots of either argument.
/// Exact for step functions.
fn knot_candidates(t: TNorm, f: &Ddf, g: &Ddf, x: f64) -> f64 {
    let mut best = 0.0_f64;
    for k in f.knots() {
        if k.t < x {
            best = best.max(t.apply(k.right, g.eval_snapped(x - k.t, false)));
        }
    }
    for k in g.knots() {
        if k.t < x {
            best = best.max(t.apply(f.eval_snapped(x - k.t, false), k.right));
        }
    }
    best
}

fn step_convolve(t: TNorm, f: &Ddf, g: &Ddf, sums: &[f64], tail: f64) -> Ddf {
    // Constant on each (s_m, s_{m+1}]; evaluate at interior midpoints.
    let mut interior: Vec<f64> = sums.windows(2).map(|w| knot_candidates(t, f, g, 0.5 * (w[0] + w[1]))).collect();
    interior.push(tail);
    let mut running = 0.0_f64;
    for v in &mut interior {
        running = running.max(*v);
        *v = running;
    }
    let knots = sums.iter().enumerate().map(|(m, &s)| {
        let left = if m == 0 { 0.0 } else { interior[m - 1] };
        (s, left, interior[m])
    });
    Ddf::from_knots(knots).expect("monotone by construction").simplified()
}

fn grid_convolve(t: TNorm, f: &Ddf, g: &Ddf, sums: &[f64], t_max: f64, n: usize, tail: f64) -> Ddf {
    let h = t_max / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let fg: Vec<f64> = grid.iter().map(|&u| f.eval(u)).collect();
    let gg: Vec<f64> = grid.iter().map(|&u| g.eval(u)).collect();

    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(n + sums.len());
    for k in 1..n {
        let mut v = knot_candidates(t, f, g, grid[k]);
        for i in 0..=k {
            v = v.max(t.apply(fg[i], gg[k - i]));
        }
        samples.push((grid[k], v));
    }
    for &s in sums {
        if s <= 0.0 || s >= t_max {
            continue;
        }
        let mut v = knot_candidates(t, f, g, s);
        for &u in grid.iter().take_while(|&&u| u <= s) {
            v = v.max(t.apply(fg[(u / h).round() as usize], g.eval(s - u)));
        }
        samples.push((s, v));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|b, a| {
        if (b.0 - a.0) <= MERGE * a.0.max(1.0) {
            a.1 = a.1.max(b.1);
            true
        } else {
            false
        }
    });

    let at_zero = t.apply(f.eval_right(0.0), g.eval_right(0.0));
    let mut running = at_zero;
    let mut knots = vec![(0.0, 0.0, at_zero)];
    for (x, v) in samples {
        running = running.max(v);
        knots.push((x, running, running));
    }
    if let Some(last) = knots.last_mut() {
        last.2 = last.2.max(tail);
    }
    Ddf::from_knots(knots).expect("monotone by construction").simplified()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::levy::sample;

    /// Brute-force sup over `u` on a fine grid, approaching every grid point
    /// from both sides. Independent of the knot bookkeeping above.
    fn brute_sup(t: TNorm, f: &Ddf, g: &Ddf, x: f64) -> f64 {
        let n = 20_000;
        let mut best = 0.0_f64;
        for i in 0..=n {
            let u = x * i as f64 / n as f64;
            for du in [-1e-9, 0.0, 1e-9] {
                let uu = u + du;
                best = best.max(t.apply(f.eval(uu), g.eval(x - uu)));
            }
        }
        best
    }

    #[test]
    fn unit_steps_add_under_min() {
        let tau = TriangleFunction::min();
        let h = tau.apply(&Ddf::unit_step(0.3).unwrap(), &Ddf::unit_step(0.5).unwrap());
        let expected = Ddf::unit_step(0.8).unwrap();
        for i in 0..=200 {
            let x = i as f64 * 0.01;
            assert_eq!(h.eval(x), expected.eval(x), "x = {x}");
        }
        assert!(levy_distance(&h, &expected, 1e-9).unwrap().value < 1e-8);
    }

    #[test]
    fn step_path_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in [TNorm::Min, TNorm::Product, TNorm::Lukasiewicz] {
            for _ in 0..20 {
                let f = sample::step(&mut rng, 4, 2.0);
                let g = sample::step(&mut rng, 4, 2.0);
                let h = sup_convolve(t, &f, &g, DEFAULT_GRID_RESOLUTION);
                for i in 1..80 {
                    let x = i as f64 * 0.0537;
                    let want = brute_sup(t, &f, &g, x);
                    assert!((h.eval(x) - want).abs() < 1e-12, "{t:?} x={x} got {} want {want}", h.eval(x));
                }
            }
        }
    }

    #[test]
    fn grid_path_tracks_brute_force() {
        let f = Ddf::ramp(1.0).unwrap();
        let g = Ddf::ramp(2.0).unwrap();
        let h = TriangleFunction::min().apply(&f, &g);
        // min(u, v/2) maximized on u + v = x at u = x/3.
        for i in 1..30 {
            let x = i as f64 * 0.1;
            let want = brute_sup(TNorm::Min, &f, &g, x);
            assert!((want - (x / 3.0).min(1.0)).abs() < 1e-3);
            assert!((h.eval(x) - want).abs() < 5e-3, "x={x}");
        }
    }

    #[test]
    fn eps0_is_identity_for_builtins() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e0 = Ddf::eps0();
        for tau in [TriangleFunction::min(), TriangleFunction::product(), TriangleFunction::lukasiewicz()] {
            for _ in 0..20 {
                let f = sample::step(&mut rng, 5, 3.0);
                assert!(levy_distance(&tau.apply(&e0, &f), &f, 1e-9).unwrap().value < 1e-8);
                let g = sample::linear(&mut rng, 4, 3.0);
                let h = tau.apply(&g, &e0);
                for i in 0..100 {
                    let x = i as f64 * 0.035;
                    assert!((h.eval(x) - g.eval(x)).abs() < 1e-9, "{} x={x}", tau.name());
                }
            }
        }
    }

    #[test]
    fn commutes_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tau = TriangleFunction::product();
        for _ in 0..20 {
            let f = sample::linear(&mut rng, 3, 2.0);
            let g = sample::step(&mut rng, 3, 2.0);
            assert_eq!(tau.apply(&f, &g), tau.apply(&g, &f));
        }
    }

    #[test]
    fn axioms_hold_for_builtins_on_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let samples: Vec<Ddf> = (0..5).map(|_| sample::step(&mut rng, 3, 2.0)).collect();
        for tau in [TriangleFunction::min(), TriangleFunction::product(), TriangleFunction::lukasiewicz()] {
            let r = tau.check_axioms(&samples, 1e-6).unwrap();
            assert!(r.all_passed(), "{r:#?}");
        }
    }

    #[test]
    fn shifted_operation_fails_identity_only() {
        let base = TriangleFunction::min();
        let e1 = Ddf::unit_step(1.0).unwrap();
        let tau = TriangleFunction::custom("min_shifted_by_one", move |f, g| base.apply(&base.apply(f, g), &e1));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples: Vec<Ddf> = (0..4).map(|_| sample::step(&mut rng, 3, 2.0)).collect();
        let r = tau.check_axioms(&samples, 1e-6).unwrap();
        assert!(!r.identity.passed);
        assert!(r.identity.witness.is_some());
        assert!(r.commutativity.passed && r.associativity.passed && r.monotonicity.passed);
    }

    #[test]
    fn check_axioms_needs_three_samples() {
        let s = vec![Ddf::eps0(), Ddf::eps0()];
        assert!(TriangleFunction::min().check_axioms(&s, 1e-6).is_err());
    }

    #[test]
    fn all_mass_at_zero_or_infinity() {
        let inf = Ddf::unit_step(f64::INFINITY).unwrap();
        let h = TriangleFunction::min().apply(&inf, &Ddf::eps0());
        assert_eq!(h, inf);
        let half = Ddf::from_knots([(0.0, 0.0, 0.5)]).unwrap();
        let h = TriangleFunction::product().apply(&half, &half);
        assert_eq!(h.eval(1.0), 0.25);
    }

    #[test]
    fn grid_resolution_floor() {
        assert!(TriangleFunction::min().with_grid_resolution(8).is_err());
        assert_eq!(TriangleFunction::min().with_grid_resolution(16).unwrap().grid_resolution(), 16);
    }

    #[test]
    fn continuity_modulus_shrinks_with_delta() {
        let tau = TriangleFunction::min();
        let f = Ddf::unit_step(0.4).unwrap();
        let g = Ddf::ramp(1.0).unwrap();
        let m = tau.continuity_modulus(&f, &g, &[0.1, 0.01, 0.001]).unwrap();
        assert!(m[0].1 >= m[1].1 && m[1].1 >= m[2].1, "{m:?}");
        assert!(m[2].1 < 2e-3);
    }

    #[test]
    fn parses_config_names() {
        assert_eq!(TriangleFunction::from_name("lukasiewicz").unwrap().name(), "tau_lukasiewicz");
        assert!(TriangleFunction::from_name("max").is_err());
    }
}
