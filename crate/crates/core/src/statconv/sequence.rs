use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::pmspace::{PmSpace, Point};
use crate::summability::IndexSet;

/// Sequences with at most this many distinct values get a code table, so
/// per-term distances are computed once per value.
pub const DISTINCT_CAP: usize = 256;

/// Distinct values of a sequence and the value code of each term.
#[derive(Clone, Debug)]
pub struct ValueCodes<P> {
    pub values: Vec<P>,
    /// `codes[k - 1]` indexes `values`.
    pub codes: Vec<u16>,
}

/// A finite truncation `x_1, …, x_N` of a sequence in a PM space.
#[derive(Clone)]
pub struct SequenceSpec<P> {
    space: PmSpace<P>,
    label: String,
    points: Arc<Vec<P>>,
    codes: Option<Arc<ValueCodes<P>>>,
}

impl<P: Point> fmt::Debug for SequenceSpec<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSpec")
            .field("label", &self.label)
            .field("len", &self.points.len())
            .field("space", &self.space.label())
            .finish()
    }
}

impl<P: Point> SequenceSpec<P> {
    /// Materializes `generator(k)` for `k = 1..=len`.
    pub fn new<G>(space: PmSpace<P>, label: impl Into<String>, len: usize, generator: G) -> Self
    where
        G: Fn(usize) -> P + Sync,
    {
        let points: Vec<P> = (1..=len).into_par_iter().map(&generator).collect();
        Self::from_points(space, label, points)
    }

    pub fn from_points(space: PmSpace<P>, label: impl Into<String>, points: Vec<P>) -> Self {
        let codes = value_codes(&points).map(Arc::new);
        SequenceSpec { space, label: label.into(), points: Arc::new(points), codes }
    }

    pub fn space(&self) -> &PmSpace<P> {
        &self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `x_k`, indexed from 1.
    pub fn point(&self, k: usize) -> &P {
        &self.points[k - 1]
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn value_codes(&self) -> Option<&ValueCodes<P>> {
        self.codes.as_deref()
    }

    /// Distinct values in order of first appearance, when there are at most
    /// [`DISTINCT_CAP`] of them.
    pub fn distinct_values(&self) -> Option<&[P]> {
        self.codes.as_deref().map(|c| c.values.as_slice())
    }

    /// `d_L(F_{x_k p}, ε_0)` for every term.
    pub fn gaps_to(&self, p: &P) -> Vec<f64> {
        self.map_terms(|x| self.space.gap(x, p))
    }

    /// `f(x_k)` for every term, evaluated once per distinct value when
    /// possible.
    pub fn map_terms<T, F>(&self, f: F) -> Vec<T>
    where
        T: Clone + Send + Sync,
        F: Fn(&P) -> T + Send + Sync,
    {
        match &self.codes {
            Some(c) => {
                let per_value: Vec<T> = c.values.iter().map(&f).collect();
                c.codes.iter().map(|&i| per_value[i as usize].clone()).collect()
            }
            None => self.points.par_iter().map(f).collect(),
        }
    }

    /// The same sequence under a new label.
    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        SequenceSpec { label: label.into(), ..self.clone() }
    }

    /// `g_k = x_k` for `k ∈ keep`, `g_k = fill` otherwise.
    pub fn splice(&self, keep: &IndexSet, fill: &P, label: impl Into<String>) -> Self {
        let bits = keep.bits(self.len());
        let points = self.points.iter().zip(bits).map(|(x, b)| if b { x.clone() } else { fill.clone() }).collect();
        Self::from_points(self.space.clone(), label, points)
    }

    /// `{k : x_k ≠ y_k}` over the common length.
    pub fn differing_set(&self, other: &SequenceSpec<P>) -> Result<IndexSet> {
        if self.len() != other.len() {
            return domain(format!("sequences differ in length ({} vs {})", self.len(), other.len()));
        }
        let bits = self.points.iter().zip(other.points.iter()).map(|(a, b)| a != b).collect();
        Ok(IndexSet::from_mask(format!("differ({}, {})", self.label, other.label), bits))
    }
}

fn value_codes<P: PartialEq + Clone>(points: &[P]) -> Option<ValueCodes<P>> {
    let mut values: Vec<P> = Vec::new();
    let mut codes = Vec::with_capacity(points.len());
    let mut last: Option<u16> = None;
    for p in points {
        if let Some(c) = last {
            if values[c as usize] == *p {
                codes.push(c);
                continue;
            }
        }
        let c = match values.iter().position(|v| v == p) {
            Some(i) => i,
            None => {
                if values.len() == DISTINCT_CAP {
                    return None;
                }
                values.push(p.clone());
                values.len() - 1
            }
        };
        let c = c as u16;
        codes.push(c);
        last = Some(c);
    }
    Some(ValueCodes { values, codes })
}

/// `{k : x_k ∉ N_p(t)}` as an indicator over `1..=len`, from precomputed gaps.
pub fn exception_indicator(gaps: &[f64], t: f64) -> Vec<f64> {
    gaps.iter().map(|&g| if g >= t { 1.0 } else { 0.0 }).collect()
}

/// `{k : x_k ∈ N_p(t)}` as an indicator over `1..=len`.
pub fn hit_indicator(gaps: &[f64], t: f64) -> Vec<f64> {
    gaps.iter().map(|&g| if g < t { 1.0 } else { 0.0 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trifn::TriangleFunction;

    fn reals() -> PmSpace<f64> {
        PmSpace::metric_induced("reals", |a: &f64, b: &f64| (a - b).abs(), TriangleFunction::min())
    }

    #[test]
    fn codes_track_distinct_values() {
        let s = SequenceSpec::new(reals(), "alt", 100, |k| if k % 2 == 0 { 0.0 } else { 3.0 });
        let c = s.value_codes().unwrap();
        assert_eq!(c.values, vec![3.0, 0.0]);
        assert_eq!(c.codes[..4], [0, 1, 0, 1]);
        assert_eq!(s.point(2), &0.0);
        let gaps = s.gaps_to(&0.0);
        assert_eq!(gaps[0], 1.0);
        assert_eq!(gaps[1], 0.0);
    }

    #[test]
    fn many_values_skip_the_code_table() {
        let s = SequenceSpec::new(reals(), "drift", 1000, |k| 1.0 / k as f64);
        assert!(s.distinct_values().is_none());
        let gaps = s.gaps_to(&0.0);
        assert!((gaps[9] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn splice_and_difference() {
        let s = SequenceSpec::new(reals(), "sq", 50, |k| if k.isqrt().pow(2) == k { 5.0 } else { 0.0 });
        let g = s.splice(&IndexSet::squares().complement(), &0.0, "g");
        assert!(g.points().iter().all(|&p| p == 0.0));
        let d = s.differing_set(&g).unwrap();
        assert_eq!(d.members_upto(50), IndexSet::squares().members_upto(50));
        let same = s.splice(&IndexSet::All, &0.0, "same");
        assert_eq!(same.points(), s.points());
    }
}
