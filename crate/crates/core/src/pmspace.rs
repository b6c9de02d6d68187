//! Probabilistic metric spaces `(X, F, τ)`.
//!
//! Points are opaque values compared with `==`. The distance assignment `F`
//! is a closure, so a space can range over an explicit finite set or over a
//! scalar ground set such as the reals; the finite-set operations below take
//! the points to examine as an argument.
//!
//! The strong neighbourhood `N_ξ(t)` is `{η : F_ξη(t) > 1 - t}`, which is the
//! same set as `{η : d_L(F_ξη, ε_0) < t}`; [`PmSpace::gap`] computes that Lévy
//! distance in closed form. Strong vicinities `V(u)` are the pair sets
//! `{(p, q) : F_pq(u) > 1 - u}`. The vicinity family written `U(t)` in some
//! formulations of strong Cauchyness is this same `V`.

use std::fmt::{self, Debug};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::levy::{distance_to_eps0, sandwich_holds, Ddf};
use crate::trifn::TriangleFunction;

/// Requirements on point types.
pub trait Point: Clone + PartialEq + Debug + Send + Sync + 'static {}
impl<T: Clone + PartialEq + Debug + Send + Sync + 'static> Point for T {}

/// Deepest halving step tried by [`PmSpace::find_vicinity_alpha`].
pub const VICINITY_DEPTH: u32 = 20;

/// Slack under which the neighbourhood test and the Lévy test may disagree.
const TIE: f64 = 1e-12;

type DistanceFn<P> = dyn Fn(&P, &P) -> Ddf + Send + Sync;

#[derive(Clone)]
pub struct PmSpace<P> {
    label: String,
    distance: Arc<DistanceFn<P>>,
    tau: TriangleFunction,
}

impl<P> Debug for PmSpace<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PmSpace").field("label", &self.label).field("tau", &self.tau).finish()
    }
}

impl<P: Point> PmSpace<P> {
    /// `F(a, b) = ε_{d(a, b)}`.
    ///
    /// A NaN distance maps to `ε_∞` and a negative one to `ε_0`, so that a
    /// broken metric surfaces in [`verify_axioms`](Self::verify_axioms).
    pub fn metric_induced<M>(label: impl Into<String>, metric: M, tau: TriangleFunction) -> Self
    where
        M: Fn(&P, &P) -> f64 + Send + Sync + 'static,
    {
        let distance = move |a: &P, b: &P| {
            let d = metric(a, b);
            let d = if d.is_nan() { f64::INFINITY } else { d.max(0.0) };
            Ddf::unit_step(d).expect("distance sanitized above")
        };
        PmSpace { label: label.into(), distance: Arc::new(distance), tau }
    }

    /// The simple space generated by `profile`: `F(a, b)(t) = G(t / d(a, b))`
    /// and `F(a, a) = ε_0`.
    ///
    /// `G` must be strictly increasing wherever it is below 1 and reach 1.
    pub fn simple<M>(label: impl Into<String>, metric: M, profile: Ddf, tau: TriangleFunction) -> Result<Self>
    where
        M: Fn(&P, &P) -> f64 + Send + Sync + 'static,
    {
        if profile.is_eps0() {
            return domain("the profile of a simple space cannot be ε_0");
        }
        if profile.tail() < 1.0 {
            return domain("the profile of a simple space must reach 1");
        }
        let flat = profile.knots().windows(2).any(|w| w[0].right < 1.0 && w[1].left <= w[0].right);
        if flat {
            return domain("the profile of a simple space must be strictly increasing below 1");
        }
        let distance = move |a: &P, b: &P| {
            let d = metric(a, b);
            if d.is_nan() {
                Ddf::unit_step(f64::INFINITY).expect("valid")
            } else if d <= 0.0 || !d.is_finite() {
                Ddf::unit_step(if d <= 0.0 { 0.0 } else { f64::INFINITY }).expect("valid")
            } else {
                profile.scaled(d).expect("positive finite scale")
            }
        };
        Ok(PmSpace { label: label.into(), distance: Arc::new(distance), tau })
    }

    /// A space with an arbitrary distance assignment.
    pub fn from_fn<F>(label: impl Into<String>, distance: F, tau: TriangleFunction) -> Self
    where
        F: Fn(&P, &P) -> Ddf + Send + Sync + 'static,
    {
        PmSpace { label: label.into(), distance: Arc::new(distance), tau }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tau(&self) -> &TriangleFunction {
        &self.tau
    }

    /// `F_ab`.
    pub fn distance(&self, a: &P, b: &P) -> Ddf {
        (self.distance)(a, b)
    }

    /// `d_L(F_ab, ε_0)`, the quantity every statistical diagnostic thresholds.
    pub fn gap(&self, a: &P, b: &P) -> f64 {
        distance_to_eps0(&self.distance(a, b))
    }

    /// Whether `eta` lies in the strong `t`-neighbourhood of `xi`.
    pub fn in_strong_neighborhood(&self, xi: &P, t: f64, eta: &P) -> Result<bool> {
        if !(t > 0.0) {
            return domain(format!("neighbourhood radius {t} must be positive"));
        }
        let f = self.distance(xi, eta);
        let inside = f.eval(t) > 1.0 - t;
        debug_assert!(
            {
                let g = distance_to_eps0(&f);
                (g < t) == inside || (g - t).abs() <= TIE
            },
            "neighbourhood test disagrees with the Lévy test at t = {t}"
        );
        Ok(inside)
    }

    /// Whether `(p, q)` lies in the strong vicinity `V(u)`.
    pub fn in_vicinity(&self, p: &P, q: &P, u: f64) -> Result<bool> {
        self.in_strong_neighborhood(p, u, q)
    }

    /// Checks the four PM-space axioms over all pairs and triples of `points`.
    ///
    /// `a ≠ b ⇒ F_ab ≠ ε_0` is read as `d_L(F_ab, ε_0) > tol`; symmetry as
    /// `d_L(F_ab, F_ba) ≤ tol`; the triangle axiom as
    /// `τ(F_ab, F_bc)(x) ≤ F_ac(x + tol) + tol` at every breakpoint.
    pub fn verify_axioms(&self, points: &[P], tol: f64) -> Result<PmAxiomReport<P>> {
        if points.len() < 2 {
            return domain(format!("axiom check needs at least 2 points, got {}", points.len()));
        }
        if !(tol > 0.0) {
            return domain(format!("tolerance {tol} must be positive"));
        }
        let n = points.len();
        let table: Vec<Vec<Ddf>> =
            points.par_iter().map(|a| points.iter().map(|b| self.distance(a, b)).collect()).collect();
        let witness = |idx: &[usize]| idx.iter().map(|&i| points[i].clone()).collect::<Vec<P>>();

        let mut identity = AxiomCheck::new("P-1 F(a,a) = ε_0");
        let mut separation = AxiomCheck::new("P-2 a ≠ b ⇒ F(a,b) ≠ ε_0");
        let mut symmetry = AxiomCheck::new("P-3 F(a,b) = F(b,a)");
        for i in 0..n {
            identity.record(distance_to_eps0(&table[i][i]) <= tol, || witness(&[i]));
            for j in 0..n {
                if i == j {
                    continue;
                }
                if points[i] != points[j] {
                    separation.record(distance_to_eps0(&table[i][j]) > tol, || witness(&[i, j]));
                }
                if i < j {
                    let same = table[i][j] == table[j][i] || sandwich_holds(&table[i][j], &table[j][i], tol);
                    symmetry.record(same, || witness(&[i, j]));
                }
            }
        }

        let failures: Vec<(usize, usize, usize)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let table = &table;
                (0..n).flat_map(move |b| {
                    (0..n).filter_map(move |c| {
                        let composed = self.tau.apply(&table[a][b], &table[b][c]);
                        composed.dominated_by(&table[a][c], tol).map(|_| (a, b, c))
                    })
                })
            })
            .collect();
        let triangle = AxiomCheck {
            axiom: "P-4 F(a,c) ≥ τ(F(a,b), F(b,c))",
            passed: failures.is_empty(),
            checked: n * n * n,
            violations: failures.len(),
            witness: failures.first().map(|&(a, b, c)| witness(&[a, b, c])),
        };

        Ok(PmAxiomReport { tau: self.tau.name(), tol, identity, separation, symmetry, triangle })
    }

    /// Largest `α ∈ {u/2, u/4, …, u/2^20}` such that, over all triples of
    /// `points`, `gap(p, q) < α` and `gap(q, r) < α` imply `gap(p, r) < u`.
    pub fn find_vicinity_alpha(&self, u: f64, points: &[P]) -> Result<f64> {
        let gaps: Vec<Vec<f64>> = points.par_iter().map(|p| points.iter().map(|q| self.gap(p, q)).collect()).collect();
        vicinity_alpha_from_gaps(u, &gaps)
    }
}

/// [`PmSpace::find_vicinity_alpha`] over a precomputed gap matrix.
pub fn vicinity_alpha_from_gaps(u: f64, gaps: &[Vec<f64>]) -> Result<f64> {
    if !(u > 0.0) {
        return domain(format!("vicinity radius {u} must be positive"));
    }
    let n = gaps.len();
    let mut alpha = u;
    for _ in 0..VICINITY_DEPTH {
        alpha *= 0.5;
        let ok = (0..n).into_par_iter().all(|q| {
            let into: Vec<usize> = (0..n).filter(|&p| gaps[p][q] < alpha).collect();
            let out: Vec<usize> = (0..n).filter(|&r| gaps[q][r] < alpha).collect();
            into.iter().all(|&p| out.iter().all(|&r| gaps[p][r] < u))
        });
        if ok {
            return Ok(alpha);
        }
    }
    Err(Error::VicinityExhausted { smallest_alpha: alpha })
}

/// Outcome of one axiom in [`PmSpace::verify_axioms`].
#[derive(Clone, Debug)]
pub struct AxiomCheck<P> {
    pub axiom: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub violations: usize,
    /// Points of the first violating pair or triple.
    pub witness: Option<Vec<P>>,
}

impl<P> AxiomCheck<P> {
    fn new(axiom: &'static str) -> Self {
        AxiomCheck { axiom, passed: true, checked: 0, violations: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<P>) {
        self.checked += 1;
        if !ok {
            if self.passed {
                self.witness = Some(witness());
            }
            self.passed = false;
            self.violations += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct PmAxiomReport<P> {
    pub tau: String,
    pub tol: f64,
    pub identity: AxiomCheck<P>,
    pub separation: AxiomCheck<P>,
    pub symmetry: AxiomCheck<P>,
    pub triangle: AxiomCheck<P>,
}

impl<P> PmAxiomReport<P> {
    pub fn checks(&self) -> [&AxiomCheck<P>; 4] {
        [&self.identity, &self.separation, &self.symmetry, &self.triangle]
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn reals() -> PmSpace<f64> {
        PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min())
    }

    #[test]
    fn metric_induced_distances_are_unit_steps() {
        let s = reals();
        assert!(s.distance(&0.7, &0.7).is_eps0());
        assert_eq!(s.distance(&0.0, &1.0), Ddf::unit_step(1.0).unwrap());
    }

    #[test]
    fn metric_induced_axioms_on_random_reals() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<f64> = (0..20).map(|_| rng.random_range(-3.0..3.0)).collect();
        let r = reals().verify_axioms(&pts, 1e-9).unwrap();
        assert!(r.all_passed(), "{r:#?}");
        assert!(reals().verify_axioms(&[0.0, 1.0, 2.0], 1e-9).unwrap().all_passed());
    }

    #[test]
    fn simple_space_with_ramp() {
        let s =
            PmSpace::simple("ramp", |a: &f64, b: &f64| (a - b).abs(), Ddf::ramp(1.0).unwrap(), TriangleFunction::min())
                .unwrap();
        assert!(s.distance(&1.0, &1.0).is_eps0());
        assert_eq!(s.distance(&0.0, &2.0).eval(1.0), 0.5);
        let pts: Vec<f64> = (0..10).map(|i| i as f64 * 0.37).collect();
        let r = s.verify_axioms(&pts, 1e-6).unwrap();
        assert!(r.all_passed(), "{r:#?}");
    }

    #[test]
    fn simple_space_rejects_flat_profiles() {
        let m = |a: &f64, b: &f64| (a - b).abs();
        let tau = TriangleFunction::min;
        assert!(PmSpace::simple("s", m, Ddf::eps0(), tau()).is_err());
        assert!(PmSpace::simple("s", m, Ddf::unit_step(1.0).unwrap(), tau()).is_err());
        let capped = Ddf::from_knots([(0.0, 0.0, 0.0), (1.0, 0.5, 0.5)]).unwrap();
        assert!(PmSpace::simple("s", m, capped, tau()).is_err());
    }

    #[test]
    fn collapsed_distance_breaks_separation() {
        let s = PmSpace::from_fn(
            "collapsed",
            |a: &u8, b: &u8| {
                if a == b || (a.min(b), a.max(b)) == (&0, &1) {
                    Ddf::eps0()
                } else {
                    Ddf::unit_step(1.0).unwrap()
                }
            },
            TriangleFunction::min(),
        );
        let r = s.verify_axioms(&[0, 1, 2], 1e-9).unwrap();
        assert!(!r.separation.passed);
        assert_eq!(r.separation.witness, Some(vec![0, 1]));
        assert!(r.identity.passed && r.symmetry.passed);
    }

    #[test]
    fn asymmetric_distance_breaks_symmetry() {
        let s = PmSpace::from_fn(
            "lopsided",
            |a: &u8, b: &u8| match a.cmp(b) {
                std::cmp::Ordering::Equal => Ddf::eps0(),
                std::cmp::Ordering::Less => Ddf::unit_step(0.2).unwrap(),
                std::cmp::Ordering::Greater => Ddf::unit_step(0.6).unwrap(),
            },
            TriangleFunction::min(),
        );
        let r = s.verify_axioms(&[0, 1, 2], 1e-9).unwrap();
        assert!(!r.symmetry.passed);
        assert!(r.symmetry.witness.is_some());
    }

    #[test]
    fn squared_distance_breaks_triangle() {
        let s = PmSpace::metric_induced("squared", |a: &f64, b: &f64| (a - b).powi(2), TriangleFunction::min());
        let r = s.verify_axioms(&[0.0, 0.5, 1.0], 1e-9).unwrap();
        assert!(!r.triangle.passed);
        assert_eq!(r.triangle.witness, Some(vec![0.0, 0.5, 1.0]));
    }

    #[test]
    fn neighbourhoods_of_reals() {
        let s = reals();
        for t in [0.01, 0.3, 0.9, 2.0] {
            assert!(s.in_strong_neighborhood(&1.5, t, &1.5).unwrap());
        }
        // Below t < 1 the neighbourhood is the open ball of radius t.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let (x, y) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
            let t = rng.random_range(0.01..0.99);
            assert_eq!(s.in_strong_neighborhood(&x, t, &y).unwrap(), (x - y).abs() < t);
        }
        assert!(!s.in_strong_neighborhood(&0.0, 0.25, &0.25).unwrap());
        assert!(s.in_strong_neighborhood(&0.0, 0.0, &0.0).is_err());
    }

    #[test]
    fn neighbourhoods_grow_with_radius() {
        let s = reals();
        let pts: Vec<f64> = (0..30).map(|i| i as f64 * 0.07).collect();
        let ts = [0.05, 0.1, 0.3, 0.6, 1.2];
        for w in ts.windows(2) {
            for p in &pts {
                for q in &pts {
                    if s.in_strong_neighborhood(p, w[0], q).unwrap() {
                        assert!(s.in_strong_neighborhood(p, w[1], q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn vicinity_alpha_for_reals() {
        let s = reals();
        let pts: Vec<f64> = (0..25).map(|i| i as f64 * 0.05).collect();
        assert_eq!(s.find_vicinity_alpha(0.5, &pts).unwrap(), 0.25);
        assert_eq!(s.find_vicinity_alpha(0.3, &[4.0]).unwrap(), 0.15);
        assert!(s.find_vicinity_alpha(0.0, &pts).is_err());
    }

    #[test]
    fn vicinity_alpha_for_squared_distance_is_smaller_and_verified() {
        let s = PmSpace::metric_induced("squared", |a: &f64, b: &f64| (a - b).powi(2), TriangleFunction::min());
        let pts: Vec<f64> = (0..40).map(|i| i as f64 * 0.025).collect();
        let u = 0.1;
        let alpha = s.find_vicinity_alpha(u, &pts).unwrap();
        assert!(alpha < u / 2.0);
        for p in &pts {
            for q in &pts {
                for r in &pts {
                    if s.gap(p, q) < alpha && s.gap(q, r) < alpha {
                        assert!(s.gap(p, r) < u);
                    }
                }
            }
        }
    }

    #[test]
    fn vicinity_search_can_exhaust() {
        // Distinct points at gap zero violate separation; no α rescues them.
        let gaps = vec![vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 0.0], vec![0.5, 0.0, 0.0]];
        match vicinity_alpha_from_gaps(0.4, &gaps) {
            Err(Error::VicinityExhausted { smallest_alpha }) => assert!(smallest_alpha < 1e-6),
            other => panic!("{other:?}"),
        }
    }
}
