//! Distance distribution functions and the modified Lévy metric.
//!
//! A [`Ddf`] is a nondecreasing, left-continuous function on `[0, ∞]` with
//! `f(0) = 0` and `f(∞) = 1`. It is stored as an ascending list of knots
//! `(t, f(t⁻), f(t⁺))`; between consecutive knots the function interpolates
//! linearly from the right value of the left knot to the left value of the
//! right knot. A step function is the special case where those two values
//! coincide, so the unit steps `ε_q` and every metric-induced distance are
//! represented exactly. Past the last knot the function is constant; the
//! value at `∞` is always 1 and is never stored as a knot.
//!
//! The Lévy distance `d_L(f, g)` is the infimum of `a ∈ (0, 1]` for which
//! the sandwich inequalities
//!
//! ```text
//! f(ξ - a) - a ≤ g(ξ) ≤ f(ξ + a) + a   and   g(ξ - a) - a ≤ f(ξ) ≤ g(ξ + a) + a
//! ```
//!
//! hold on `(-1/a, 1/a)`. Feasibility is monotone in `a`, so
//! [`levy_distance`] bisects on it; for a fixed `a` both sides are piecewise
//! linear in `ξ` and the inequalities only need checking at breakpoints
//! (from both sides) and at the open-interval endpoints.
//!
//! Arguments `ξ ≤ 0` evaluate to 0, which extends elements of `D⁺` to the
//! whole line the way the metric on distribution functions expects.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default bisection tolerance for [`levy_distance`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Slack absorbed by the sandwich comparisons; interpolated values carry
/// rounding error of a few ulps.
const SANDWICH_SLACK: f64 = 1e-14;

/// Relative distance under which an argument is treated as sitting on a knot.
const SNAP: f64 = 1e-12;

/// One knot of a [`Ddf`]: position, left limit and right limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Knot {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

/// A distance distribution function (an element of `D⁺`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DdfRecord", into = "DdfRecord")]
pub struct Ddf {
    knots: Vec<Knot>,
}

/// Structured-text form of a [`Ddf`]: `knots = [[t, left, right], ...]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdfRecord {
    pub knots: Vec<[f64; 3]>,
}

impl TryFrom<DdfRecord> for Ddf {
    type Error = Error;

    fn try_from(rec: DdfRecord) -> Result<Self> {
        Ddf::from_knots(rec.knots.iter().map(|k| (k[0], k[1], k[2])))
    }
}

impl From<Ddf> for DdfRecord {
    fn from(f: Ddf) -> Self {
        DdfRecord { knots: f.knots.iter().map(|k| [k.t, k.left, k.right]).collect() }
    }
}

/// Result of [`levy_distance`]: the estimate and the half-width of the
/// final bisection bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevyDistance {
    pub value: f64,
    pub tolerance: f64,
}

impl Ddf {
    /// Builds a DDF from `(t, left, right)` triples.
    ///
    /// A knot at `t = 0` with left value 0 is prepended when missing.
    pub fn from_knots<I>(knots: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let mut out: Vec<Knot> = Vec::new();
        for (t, left, right) in knots {
            if !t.is_finite() || t < 0.0 {
                return domain(format!("knot position {t} must be finite and nonnegative"));
            }
            for v in [left, right] {
                if !(0.0..=1.0).contains(&v) {
                    return domain(format!("knot value {v} at t = {t} lies outside [0, 1]"));
                }
            }
            if left > right {
                return domain(format!("knot at t = {t} decreases ({left} > {right})"));
            }
            if let Some(prev) = out.last() {
                if t <= prev.t {
                    return domain(format!("knot positions must ascend strictly ({} then {t})", prev.t));
                }
                if left < prev.right {
                    return domain(format!("function decreases between t = {} and t = {t}", prev.t));
                }
            } else if t > 0.0 {
                out.push(Knot { t: 0.0, left: 0.0, right: 0.0 });
            }
            out.push(Knot { t, left, right });
        }
        match out.first() {
            None => domain("a DDF needs at least one knot"),
            Some(k) if k.left != 0.0 => domain("f(0) must be 0"),
            Some(_) => Ok(Ddf { knots: out }),
        }
    }

    /// A step function jumping to `value` just after each `t` (cumulative).
    pub fn step(jumps: &[(f64, f64)]) -> Result<Self> {
        let mut prev = 0.0;
        let mut knots = Vec::with_capacity(jumps.len());
        for &(t, v) in jumps {
            knots.push((t, prev, v));
            prev = v;
        }
        Ddf::from_knots(knots)
    }

    /// The unit step `ε_q`; `q = ∞` gives `ε_∞`, which is 0 at every finite
    /// argument.
    pub fn unit_step(q: f64) -> Result<Self> {
        if q.is_nan() || q < 0.0 {
            return domain(format!("unit step location {q} must be nonnegative"));
        }
        if q == f64::INFINITY {
            return Ok(Ddf { knots: vec![Knot { t: 0.0, left: 0.0, right: 0.0 }] });
        }
        if q == 0.0 {
            return Ok(Ddf::eps0());
        }
        Ok(Ddf { knots: vec![Knot { t: 0.0, left: 0.0, right: 0.0 }, Knot { t: q, left: 0.0, right: 1.0 }] })
    }

    /// `ε_0`, the identity of every triangle function.
    pub fn eps0() -> Self {
        Ddf { knots: vec![Knot { t: 0.0, left: 0.0, right: 1.0 }] }
    }

    /// The ramp `t ↦ min(t / scale, 1)`.
    pub fn ramp(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return domain(format!("ramp scale {scale} must be positive"));
        }
        Ddf::from_knots([(0.0, 0.0, 0.0), (scale, 1.0, 1.0)])
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// Position of the last knot.
    pub fn last_knot(&self) -> f64 {
        self.knots[self.knots.len() - 1].t
    }

    /// `lim_{t→∞} f(t)` over finite arguments.
    pub fn tail(&self) -> f64 {
        self.knots[self.knots.len() - 1].right
    }

    /// True when the function is piecewise constant.
    pub fn is_step(&self) -> bool {
        self.knots.windows(2).all(|w| w[1].left == w[0].right)
    }

    pub fn is_eps0(&self) -> bool {
        self.knots.len() == 1 && self.knots[0].right == 1.0
    }

    /// `f(t)`, honouring left-continuity at knots.
    pub fn eval(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return 1.0;
        }
        if !(t > 0.0) {
            return 0.0;
        }
        let i = self.knots.partition_point(|k| k.t < t);
        if i < self.knots.len() && self.knots[i].t == t {
            return self.knots[i].left;
        }
        self.between(i, t)
    }

    /// The right limit `f(t⁺)`.
    pub fn eval_right(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return 1.0;
        }
        if t < 0.0 || t.is_nan() {
            return 0.0;
        }
        let i = self.knots.partition_point(|k| k.t < t);
        if i < self.knots.len() && self.knots[i].t == t {
            return self.knots[i].right;
        }
        self.between(i, t)
    }

    /// Like [`eval`](Self::eval)/[`eval_right`](Self::eval_right) but an
    /// argument within rounding distance of a knot is treated as the knot.
    pub(crate) fn eval_snapped(&self, t: f64, right: bool) -> f64 {
        if t.is_finite() && t > -SNAP {
            let i = self.knots.partition_point(|k| k.t < t);
            for j in [i.wrapping_sub(1), i] {
                if let Some(k) = self.knots.get(j) {
                    if (k.t - t).abs() <= SNAP * k.t.max(1.0) {
                        return if right { k.right } else { k.left };
                    }
                }
            }
        }
        if right {
            self.eval_right(t)
        } else {
            self.eval(t)
        }
    }

    // Value strictly between knot i-1 and knot i (or past the last knot).
    fn between(&self, i: usize, t: f64) -> f64 {
        let a = &self.knots[i - 1];
        match self.knots.get(i) {
            None => a.right,
            Some(b) if b.left == a.right => a.right,
            Some(b) => {
                let v = a.right + (b.left - a.right) * (t - a.t) / (b.t - a.t);
                v.clamp(a.right, b.left)
            }
        }
    }

    /// `t ↦ f(t / scale)`.
    pub fn scaled(&self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return domain(format!("scale {scale} must be positive"));
        }
        Ok(Ddf { knots: self.knots.iter().map(|k| Knot { t: k.t * scale, ..*k }).collect() })
    }

    /// Moves every positive knot right by `delta ≥ 0`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return domain(format!("shift {delta} must be finite and nonnegative"));
        }
        if delta == 0.0 {
            return Ok(self.clone());
        }
        let mut knots = vec![Knot { t: 0.0, left: 0.0, right: 0.0 }];
        let k0 = self.knots[0];
        if k0.right > 0.0 {
            // The jump at 0 moves to delta.
            knots.push(Knot { t: delta, left: 0.0, right: k0.right });
        }
        knots.extend(self.knots[1..].iter().map(|k| Knot { t: k.t + delta, ..*k }));
        Ok(Ddf { knots })
    }

    /// Pointwise maximum, evaluated exactly for step functions.
    pub fn pointwise_max(&self, other: &Ddf) -> Ddf {
        let pts = merged_positions(self, other);
        let knots = pts
            .iter()
            .map(|&t| Knot {
                t,
                left: self.eval(t).max(other.eval(t)),
                right: self.eval_right(t).max(other.eval_right(t)),
            })
            .collect();
        Ddf { knots }
    }

    /// Drops knots that neither jump nor bend.
    pub fn simplified(mut self) -> Ddf {
        let mut out: Vec<Knot> = Vec::with_capacity(self.knots.len());
        let n = self.knots.len();
        for (i, k) in self.knots.iter().enumerate() {
            let redundant = i > 0
                && k.left == k.right
                && out.last().is_some_and(|p| p.right == k.left)
                && (i + 1 == n || self.knots[i + 1].left == k.right);
            if !redundant {
                out.push(*k);
            }
        }
        self.knots = out;
        self
    }

    /// Checks `upper ≥ self` at every breakpoint of either function (and
    /// between them), allowing `tol` of slack in both argument and value.
    /// Returns the first argument where the bound fails.
    pub fn dominated_by(&self, upper: &Ddf, tol: f64) -> Option<f64> {
        let pts = check_points(self, upper);
        pts.into_iter().find(|&x| self.eval(x) > upper.eval(x + tol) + tol)
    }
}

// Sorted, deduplicated knot positions of both functions.
fn merged_positions(f: &Ddf, g: &Ddf) -> Vec<f64> {
    let mut pts: Vec<f64> = f.knots.iter().chain(&g.knots).map(|k| k.t).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Knot positions of both functions, the midpoints between consecutive
/// positions and one point past the end.
pub(crate) fn check_points(f: &Ddf, g: &Ddf) -> Vec<f64> {
    let pts = merged_positions(f, g);
    let mut out = Vec::with_capacity(2 * pts.len() + 1);
    for w in pts.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    let last = *pts.last().expect("DDFs always have a knot at 0");
    out.push(last);
    out.push(last + 1.0);
    out
}

/// `d_L(f, ε_0)` in closed form: `inf { t > 0 : f(t) > 1 - t }`.
///
/// `h(t) = f(t) + t - 1` is strictly increasing, so the walk over knots stops
/// at the first segment where it turns positive.
pub fn distance_to_eps0(f: &Ddf) -> f64 {
    let knots = &f.knots;
    for (i, k) in knots.iter().enumerate() {
        if k.right + k.t - 1.0 > 0.0 {
            return k.t;
        }
        let Some(next) = knots.get(i + 1) else {
            // Constant tail: crossing at 1 - right, never before this knot.
            return (1.0 - k.right).max(k.t);
        };
        if next.left + next.t - 1.0 > 0.0 {
            let slope = (next.left - k.right) / (next.t - k.t);
            let t = k.t + (1.0 - k.t - k.right) / (1.0 + slope);
            return t.clamp(k.t, next.t);
        }
    }
    unreachable!("the tail segment always returns")
}

/// Bisection estimate of the Lévy distance, with `|value - d_L| ≤ tol`.
pub fn levy_distance(f: &Ddf, g: &Ddf, tol: f64) -> Result<LevyDistance> {
    if !(tol.is_finite() && tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    if f == g {
        return Ok(LevyDistance { value: 0.0, tolerance: tol });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if sandwich_holds(f, g, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(LevyDistance { value: 0.5 * (lo + hi), tolerance: 0.5 * (hi - lo) })
}

/// Whether the Lévy sandwich inequalities hold at slack `a`.
pub fn sandwich_holds(f: &Ddf, g: &Ddf, a: f64) -> bool {
    one_sided(f, g, a) && one_sided(g, f, a)
}

#[derive(Clone, Copy)]
enum Arg {
    Knot(usize),
    Point(f64),
}

fn at(f: &Ddf, arg: Arg, right: bool) -> f64 {
    match (arg, right) {
        (Arg::Knot(i), false) => f.knots[i].left,
        (Arg::Knot(i), true) => f.knots[i].right,
        (Arg::Point(x), false) => f.eval(x),
        (Arg::Point(x), true) => f.eval_right(x),
    }
}

// f(ξ - a) - a ≤ g(ξ) ≤ f(ξ + a) + a on (-1/a, 1/a).
fn one_sided(f: &Ddf, g: &Ddf, a: f64) -> bool {
    let bound = 1.0 / a;
    // Each event fixes ξ and the arguments of g(ξ), f(ξ - a), f(ξ + a).
    let check = |xi: f64, gx: Arg, fm: Arg, fp: Arg, sides: &[bool]| -> bool {
        if !(xi > -bound && xi < bound) {
            return true;
        }
        sides.iter().all(|&right| {
            let gv = at(g, gx, right);
            at(f, fm, right) - a <= gv + SANDWICH_SLACK && gv <= at(f, fp, right) + a + SANDWICH_SLACK
        })
    };
    let both = [false, true];
    for (j, k) in g.knots.iter().enumerate() {
        let xi = k.t;
        if !check(xi, Arg::Knot(j), Arg::Point(xi - a), Arg::Point(xi + a), &both) {
            return false;
        }
    }
    for (i, k) in f.knots.iter().enumerate() {
        let xi = k.t + a;
        if !check(xi, Arg::Point(xi), Arg::Knot(i), Arg::Point(k.t + 2.0 * a), &both) {
            return false;
        }
        let xi = k.t - a;
        if !check(xi, Arg::Point(xi), Arg::Point(k.t - 2.0 * a), Arg::Knot(i), &both) {
            return false;
        }
    }
    // Open endpoints: the inequality must hold in the limit from inside.
    let holds = |xi: f64, right: bool| {
        let ev = |h: &Ddf, x: f64| if right { h.eval_right(x) } else { h.eval(x) };
        let gv = ev(g, xi);
        ev(f, xi - a) - a <= gv + SANDWICH_SLACK && gv <= ev(f, xi + a) + a + SANDWICH_SLACK
    };
    holds(-bound, true) && holds(bound, false)
}

/// Random DDF generators for tests and examples.
pub mod sample {
    use rand::Rng;

    use super::Ddf;

    /// A step DDF with between 1 and `max_jumps` jumps placed in `(0, span)`.
    ///
    /// About one in five samples also jumps at 0 and one in four keeps some
    /// mass at infinity.
    pub fn step<R: Rng + ?Sized>(rng: &mut R, max_jumps: usize, span: f64) -> Ddf {
        let n = rng.random_range(1..=max_jumps.max(1));
        let mut ts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..span).max(1e-6)).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let top: f64 = if rng.random_bool(0.25) { rng.random_range(0.3..1.0) } else { 1.0 };
        let mut vs: Vec<f64> = (0..ts.len()).map(|_| rng.random_range(0.0..top)).collect();
        vs.sort_by(f64::total_cmp);
        if let Some(v) = vs.last_mut() {
            *v = top;
        }
        let mut jumps = Vec::with_capacity(ts.len() + 1);
        if rng.random_bool(0.2) {
            jumps.push((0.0, vs[0] * rng.random_range(0.0..1.0)));
        }
        jumps.extend(ts.into_iter().zip(vs));
        // Values are sorted, so jumps are nondecreasing.
        let mut prev = 0.0;
        let knots: Vec<_> = jumps
            .into_iter()
            .map(|(t, v)| {
                let v = f64::max(v, prev);
                let k = (t, prev, v);
                prev = v;
                k
            })
            .collect();
        Ddf::from_knots(knots).expect("generated knots are valid")
    }

    /// A step DDF whose knots sit on the grid `{0.01, 0.02, ...}`, so that
    /// ties with grid-valued query points actually occur.
    pub fn grid_step<R: Rng + ?Sized>(rng: &mut R, max_jumps: usize) -> Ddf {
        let n = rng.random_range(1..=max_jumps.max(1));
        let mut cells: Vec<u32> = (0..n).map(|_| rng.random_range(1..150)).collect();
        cells.sort_unstable();
        cells.dedup();
        let mut vs: Vec<u32> = (0..cells.len()).map(|_| rng.random_range(1..=100)).collect();
        vs.sort_unstable();
        let mut prev = 0.0;
        let knots: Vec<_> = cells
            .into_iter()
            .zip(vs)
            .map(|(c, v)| {
                let v = f64::from(v) / 100.0;
                let k = (f64::from(c) / 100.0, prev, v);
                prev = v;
                k
            })
            .collect();
        Ddf::from_knots(knots).expect("generated knots are valid")
    }

    /// A continuous piecewise-linear DDF with up to `max_knots` interior knots.
    pub fn linear<R: Rng + ?Sized>(rng: &mut R, max_knots: usize, span: f64) -> Ddf {
        let n = rng.random_range(1..=max_knots.max(1));
        let mut ts: Vec<f64> = (0..n).map(|_| rng.random_range(1e-3..span)).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut vs: Vec<f64> = (0..ts.len()).map(|_| rng.random_range(0.0..1.0)).collect();
        vs.sort_by(f64::total_cmp);
        if rng.random_bool(0.7) {
            if let Some(v) = vs.last_mut() {
                *v = 1.0;
            }
        }
        let knots = std::iter::once((0.0, 0.0, 0.0)).chain(ts.into_iter().zip(vs).map(|(t, v)| (t, v, v)));
        Ddf::from_knots(knots).expect("generated knots are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp1() -> Ddf {
        Ddf::ramp(1.0).unwrap()
    }

    #[test]
    fn unit_step_is_half_open() {
        let e0 = Ddf::unit_step(0.0).unwrap();
        assert_eq!(e0.eval(0.5), 1.0);
        assert_eq!(e0.eval(0.0), 0.0);
        let e2 = Ddf::unit_step(2.0).unwrap();
        assert_eq!(e2.eval(2.0), 0.0);
        assert_eq!(e2.eval(2.001), 1.0);
        assert_eq!(e2.eval_right(2.0), 1.0);
    }

    #[test]
    fn unit_step_rejects_negative_location() {
        assert!(matches!(Ddf::unit_step(-0.1), Err(Error::Domain(_))));
        assert!(Ddf::unit_step(f64::NAN).is_err());
    }

    #[test]
    fn eps_infinity_vanishes_at_finite_arguments() {
        let e = Ddf::unit_step(f64::INFINITY).unwrap();
        assert_eq!(e.eval(1e300), 0.0);
        assert_eq!(e.eval(f64::INFINITY), 1.0);
        assert_eq!(distance_to_eps0(&e), 1.0);
    }

    #[test]
    fn eval_basics() {
        assert_eq!(ramp1().eval(0.25), 0.25);
        assert_eq!(Ddf::unit_step(1.0).unwrap().eval(1.0), 0.0);
        for f in [ramp1(), Ddf::eps0(), Ddf::unit_step(3.0).unwrap()] {
            assert_eq!(f.eval(f64::INFINITY), 1.0);
            assert_eq!(f.eval(0.0), 0.0);
            assert_eq!(f.eval(-2.0), 0.0);
        }
    }

    #[test]
    fn invalid_knots_are_rejected() {
        assert!(Ddf::from_knots([(0.0, 0.2, 0.3)]).is_err(), "f(0) must be 0");
        assert!(Ddf::from_knots([(1.0, 0.5, 0.4)]).is_err(), "jump down");
        assert!(Ddf::from_knots([(1.0, 0.0, 0.5), (2.0, 0.4, 0.6)]).is_err(), "decrease");
        assert!(Ddf::from_knots([(1.0, 0.0, 0.5), (1.0, 0.5, 0.6)]).is_err(), "repeat");
        assert!(Ddf::from_knots([(1.0, 0.0, 1.5)]).is_err(), "above 1");
        assert!(Ddf::from_knots(std::iter::empty()).is_err());
    }

    #[test]
    fn record_roundtrip_and_validation() {
        let f = Ddf::step(&[(0.5, 0.25), (1.5, 1.0)]).unwrap();
        let text = toml::to_string(&f).unwrap();
        let back: Ddf = toml::from_str(&text).unwrap();
        assert_eq!(back, f);
        let bad: std::result::Result<Ddf, _> = toml::from_str("knots = [[0.0, 0.5, 0.5]]");
        assert!(bad.is_err());
    }

    #[test]
    fn levy_identity_and_unit_step_shift() {
        let e0 = Ddf::eps0();
        assert!(levy_distance(&e0, &e0, DEFAULT_TOL).unwrap().value <= DEFAULT_TOL);
        let e3 = Ddf::unit_step(0.3).unwrap();
        let d = levy_distance(&e3, &e0, DEFAULT_TOL).unwrap();
        assert!((d.value - 0.3).abs() <= DEFAULT_TOL, "{d:?}");
    }

    #[test]
    fn levy_rejects_nonpositive_tolerance() {
        let e0 = Ddf::eps0();
        assert!(levy_distance(&e0, &e0, 0.0).is_err());
        assert!(levy_distance(&e0, &e0, -1.0).is_err());
    }

    #[test]
    fn levy_to_eps_infinity_is_one() {
        let d = levy_distance(&Ddf::unit_step(f64::INFINITY).unwrap(), &Ddf::eps0(), 1e-9).unwrap();
        assert!((d.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn distance_to_eps0_closed_forms() {
        assert_eq!(distance_to_eps0(&Ddf::eps0()), 0.0);
        assert!((distance_to_eps0(&ramp1()) - 0.5).abs() < 1e-15);
        assert_eq!(distance_to_eps0(&Ddf::unit_step(0.4).unwrap()), 0.4);
        assert_eq!(distance_to_eps0(&Ddf::unit_step(2.5).unwrap()), 1.0);
        // Ramp of scale d crosses 1 - t at d / (1 + d).
        let r = Ddf::ramp(2.0).unwrap();
        assert!((distance_to_eps0(&r) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_moves_jump_at_zero() {
        let f = Ddf::step(&[(0.0, 0.5), (1.0, 1.0)]).unwrap();
        let g = f.shifted(0.1).unwrap();
        assert_eq!(g.eval(0.05), 0.0);
        assert_eq!(g.eval(0.2), 0.5);
        assert_eq!(g.eval(1.1), 0.5);
        assert_eq!(g.eval(1.2), 1.0);
    }

    #[test]
    fn simplified_keeps_values() {
        let f = Ddf::from_knots([(0.0, 0.0, 0.2), (0.5, 0.2, 0.2), (1.0, 0.2, 1.0)]).unwrap();
        let s = f.clone().simplified();
        assert_eq!(s.knots().len(), 2);
        for x in [0.0, 0.1, 0.5, 0.9, 1.0, 1.1] {
            assert_eq!(f.eval(x), s.eval(x));
        }
    }

    #[test]
    fn domination_with_slack() {
        let lo = Ddf::unit_step(1.0).unwrap();
        let hi = Ddf::unit_step(0.5).unwrap();
        assert_eq!(lo.dominated_by(&hi, 1e-9), None);
        assert!(hi.dominated_by(&lo, 1e-9).is_some());
    }
}
