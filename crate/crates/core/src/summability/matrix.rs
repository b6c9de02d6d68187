use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{domain, Error, Result};

/// Tail mass below which an infinite row is truncated.
pub const TAIL_BOUND: f64 = 1e-12;

/// One row of a matrix, indexed from `k = 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Row {
    /// `a_nk = w(k) · numer / denom` for `first ≤ k ≤ last`, zero
    /// elsewhere, where `w` is the matrix's column weight (1 when absent).
    Band { first: usize, last: usize, numer: f64, denom: f64 },
    /// Explicit ascending entries; `tail_bound` bounds the mass dropped past
    /// the last entry.
    Entries { entries: Vec<(usize, f64)>, tail_bound: f64 },
}

type Weight = dyn Fn(usize) -> f64 + Send + Sync;
type RowFn = dyn Fn(usize) -> Row + Send + Sync;

/// A nonnegative matrix `(a_nk)` given row by row.
#[derive(Clone)]
pub struct SummabilityMatrix {
    name: String,
    weight: Option<Arc<Weight>>,
    row: Arc<RowFn>,
}

impl fmt::Debug for SummabilityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SummabilityMatrix").field("name", &self.name).finish()
    }
}

/// Identifiers accepted by [`SummabilityMatrix::from_id`], in listing order.
pub const BUILTIN_MATRICES: &[(&str, &str)] = &[
    ("cesaro", "Cesàro means: a_nk = 1/n for k ≤ n"),
    ("riesz:unit", "Riesz means with p_k = 1 (equal to cesaro)"),
    ("riesz:linear", "Riesz means with p_k = k"),
    ("riesz:sqrt", "Riesz means with p_k = √k"),
    ("lambda:linear", "de la Vallée-Poussin means with λ_n = n (equal to cesaro)"),
    ("lambda:half", "de la Vallée-Poussin means with λ_n = ⌈n/2⌉"),
    ("lambda:sqrt", "de la Vallée-Poussin means with λ_n = ⌈√n⌉"),
    ("lacunary:<ratio>", "block averages over k_r = round(ratio^r), e.g. lacunary:2"),
    ("abel", "Abel-type rows a_nk = (1-r) r^(k-1), r = 1 - 1/n, truncated at 1e-12"),
    ("scaled-cesaro:<factor>", "factor · cesaro (not regular unless factor = 1)"),
    ("column-spike", "a_n1 = 1, all other entries 0 (not regular)"),
];

impl SummabilityMatrix {
    /// A matrix from a row generator and an optional column weight.
    pub fn new<R>(name: impl Into<String>, weight: Option<Arc<Weight>>, row: R) -> Self
    where
        R: Fn(usize) -> Row + Send + Sync + 'static,
    {
        SummabilityMatrix { name: name.into(), weight, row: Arc::new(row) }
    }

    /// Cesàro means `C_1`.
    pub fn cesaro() -> Self {
        Self::new("cesaro", None, |n| Row::Band { first: 1, last: n, numer: 1.0, denom: n as f64 })
    }

    /// Riesz means: `a_nk = p_k / P_n` for `k ≤ n`, `P_n = p_1 + … + p_n`.
    /// Regular when `P_n → ∞`.
    pub fn riesz<W>(name: impl Into<String>, weights: W) -> Self
    where
        W: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        let weights: Arc<Weight> = Arc::new(weights);
        let totals = Mutex::new(vec![0.0_f64]);
        let w = Arc::clone(&weights);
        let name = name.into();
        Self::new(name, Some(weights), move |n| {
            let mut totals = totals.lock().expect("riesz cache poisoned");
            while totals.len() <= n {
                let k = totals.len();
                let p = w(k);
                assert!(p > 0.0 && p.is_finite(), "riesz weight p_{k} = {p} must be positive");
                let next = totals[k - 1] + p;
                totals.push(next);
            }
            Row::Band { first: 1, last: n, numer: 1.0, denom: totals[n] }
        })
    }

    /// Generalized de la Vallée-Poussin means: `a_nk = 1/λ_n` for
    /// `n - λ_n < k ≤ n`. Needs `λ_1 = 1`, `λ_n ≤ λ_{n+1} ≤ λ_n + 1`.
    pub fn lambda<L>(name: impl Into<String>, lambda: L) -> Result<Self>
    where
        L: Fn(usize) -> usize + Send + Sync + 'static,
    {
        if lambda(1) != 1 {
            return domain("λ_1 must be 1");
        }
        for n in 1..10_000 {
            let (a, b) = (lambda(n), lambda(n + 1));
            if b < a || b > a + 1 {
                return domain(format!("λ must satisfy λ_n ≤ λ_(n+1) ≤ λ_n + 1 (fails at n = {n})"));
            }
        }
        Ok(Self::new(name, None, move |n| {
            let l = lambda(n).clamp(1, n);
            Row::Band { first: n - l + 1, last: n, numer: 1.0, denom: l as f64 }
        }))
    }

    /// Lacunary block averages for `k_r = round(ratio^r)` (forced strictly
    /// increasing, `k_0 = 0`). Row `n` averages the block `(k_(r-1), k_r]`
    /// containing `n`, so every index gets its own row and the row limits are
    /// the lacunary block limits.
    pub fn lacunary(ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 1.0) {
            return domain(format!("lacunary ratio {ratio} must exceed 1"));
        }
        let name = format!("lacunary:{ratio}");
        Ok(Self::new(name, None, move |n| {
            let (lo, hi) = lacunary_block(ratio, n);
            Row::Band { first: lo + 1, last: hi, numer: 1.0, denom: (hi - lo) as f64 }
        }))
    }

    /// Abel-type rows `a_nk = (1 - r) r^(k-1)` with `r = 1 - 1/n`.
    pub fn abel() -> Self {
        Self::new("abel", None, |n| {
            if n == 1 {
                return Row::Entries { entries: vec![(1, 1.0)], tail_bound: 0.0 };
            }
            let r = 1.0 - 1.0 / n as f64;
            // Tail past K is r^K.
            let k_max = (TAIL_BOUND.ln() / r.ln()).ceil() as usize;
            let mut entries = Vec::with_capacity(k_max);
            let mut a = 1.0 - r;
            for k in 1..=k_max {
                entries.push((k, a));
                a *= r;
            }
            Row::Entries { entries, tail_bound: r.powi(k_max as i32) }
        })
    }

    /// `a_n1 = 1` and nothing else: row sums are 1 but column 1 never
    /// vanishes.
    pub fn column_spike() -> Self {
        Self::new("column-spike", None, |_| Row::Entries { entries: vec![(1, 1.0)], tail_bound: 0.0 })
    }

    /// `factor · self`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return domain(format!("scale factor {factor} must be finite and nonnegative"));
        }
        let inner = Arc::clone(&self.row);
        Ok(SummabilityMatrix {
            name: format!("{factor}*{}", self.name),
            weight: self.weight.clone(),
            row: Arc::new(move |n| match inner(n) {
                Row::Band { first, last, numer, denom } => Row::Band { first, last, numer: numer * factor, denom },
                Row::Entries { entries, tail_bound } => Row::Entries {
                    entries: entries.into_iter().map(|(k, a)| (k, a * factor)).collect(),
                    tail_bound: tail_bound * factor,
                },
            }),
        })
    }

    /// Parses a configuration identifier (see [`BUILTIN_MATRICES`]).
    pub fn from_id(id: &str) -> Result<Self> {
        let (head, arg) = match id.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (id, None),
        };
        let bad = || Error::Domain(format!("unknown matrix `{id}`"));
        let m = match (head, arg) {
            ("cesaro", None) => Self::cesaro(),
            ("abel", None) => Self::abel(),
            ("column-spike", None) => Self::column_spike(),
            ("riesz", Some("unit")) => Self::riesz(id, |_| 1.0),
            ("riesz", Some("linear")) => Self::riesz(id, |k| k as f64),
            ("riesz", Some("sqrt")) => Self::riesz(id, |k| (k as f64).sqrt()),
            ("lambda", Some("linear")) => Self::lambda(id, |n| n)?,
            ("lambda", Some("half")) => Self::lambda(id, |n| n.div_ceil(2))?,
            ("lambda", Some("sqrt")) => Self::lambda(id, ceil_sqrt)?,
            ("lacunary", Some(r)) => Self::lacunary(r.parse().map_err(|_| bad())?)?,
            ("scaled-cesaro", Some(f)) => Self::cesaro().scaled(f.parse().map_err(|_| bad())?)?,
            _ => return Err(bad()),
        };
        Ok(m.renamed(id))
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row(&self, n: usize) -> Row {
        assert!(n >= 1, "rows are indexed from 1");
        (self.row)(n)
    }

    /// Column weight `w(k)` used by band rows.
    pub fn weight(&self, k: usize) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w(k))
    }

    fn has_weight(&self) -> bool {
        self.weight.is_some()
    }

    /// Row `n` as explicit `(k, a_nk)` pairs.
    pub fn entries(&self, n: usize) -> Vec<(usize, f64)> {
        match self.row(n) {
            Row::Band { first, last, numer, denom } => {
                (first..=last).map(|k| (k, self.weight(k) * numer / denom)).collect()
            }
            Row::Entries { entries, .. } => entries,
        }
    }

    /// `a_nk`.
    pub fn entry(&self, n: usize, k: usize) -> f64 {
        match self.row(n) {
            Row::Band { first, last, numer, denom } if (first..=last).contains(&k) => self.weight(k) * numer / denom,
            Row::Band { .. } => 0.0,
            Row::Entries { entries, .. } => entries.binary_search_by_key(&k, |e| e.0).map_or(0.0, |i| entries[i].1),
        }
    }

    /// Largest column index used by row `n`.
    pub fn support_end(&self, n: usize) -> usize {
        match self.row(n) {
            Row::Band { last, .. } => last,
            Row::Entries { entries, .. } => entries.last().map_or(0, |e| e.0),
        }
    }

    /// Largest `n` whose row fits in the first `len` columns, assuming
    /// `support_end` is nondecreasing (true for every builder here).
    pub fn row_limit(&self, len: usize) -> usize {
        if len == 0 || self.support_end(1) > len {
            return 0;
        }
        let mut hi = 1;
        while self.support_end(hi * 2) <= len {
            hi *= 2;
            if hi > len.saturating_mul(4) {
                // Rows that never grow; cap at the sequence length.
                return len;
            }
        }
        let (mut lo, mut hi) = (hi, hi * 2);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.support_end(mid) <= len {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `Σ_k a_nk`.
    pub fn row_sum(&self, n: usize) -> f64 {
        match self.row(n) {
            Row::Band { first, last, numer, denom } if !self.has_weight() => (last + 1 - first) as f64 * numer / denom,
            Row::Band { first, last, numer, denom } => {
                (first..=last).map(|k| self.weight(k)).sum::<f64>() * numer / denom
            }
            Row::Entries { entries, .. } => entries.iter().map(|e| e.1).sum(),
        }
    }

    /// Precomputes prefix sums of `w(k) · values[k - 1]` so that row sums
    /// `Σ_k a_nk values[k - 1]` cost O(1) for band rows.
    pub fn summer<'a>(&'a self, values: &'a [f64]) -> RowSummer<'a> {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            acc += self.weight(i + 1) * v;
            prefix.push(acc);
        }
        RowSummer { matrix: self, values, prefix }
    }
}

/// Row sums against a fixed vector; see [`SummabilityMatrix::summer`].
pub struct RowSummer<'a> {
    matrix: &'a SummabilityMatrix,
    values: &'a [f64],
    prefix: Vec<f64>,
}

impl RowSummer<'_> {
    /// `Σ_k a_nk v_k`, or an error when row `n` reaches past the vector.
    pub fn sum(&self, n: usize) -> Result<f64> {
        let len = self.values.len();
        let too_short = |needed| Error::SequenceTooShort { row: n, needed, len };
        match self.matrix.row(n) {
            Row::Band { first, last, numer, denom } => {
                if last > len {
                    return Err(too_short(last));
                }
                Ok((self.prefix[last] - self.prefix[first - 1]) * numer / denom)
            }
            Row::Entries { entries, .. } => {
                let needed = entries.last().map_or(0, |e| e.0);
                if needed > len {
                    return Err(too_short(needed));
                }
                Ok(entries.iter().map(|&(k, a)| a * self.values[k - 1]).sum())
            }
        }
    }
}

/// `⌈√n⌉` in integer arithmetic.
pub fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// The lacunary block `(lo, hi]` containing `n` for `k_r = round(ratio^r)`.
pub fn lacunary_block(ratio: f64, n: usize) -> (usize, usize) {
    let mut lo = 0usize;
    let mut power = 1.0_f64;
    loop {
        power *= ratio;
        let hi = (power.round() as usize).max(lo + 1);
        if n <= hi {
            return (lo, hi);
        }
        lo = hi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cesaro_row_three() {
        let a = SummabilityMatrix::cesaro();
        let e = a.entries(3);
        assert_eq!(e, vec![(1, 1.0 / 3.0), (2, 1.0 / 3.0), (3, 1.0 / 3.0)]);
        for n in 1..200 {
            assert_eq!(a.row_sum(n), 1.0);
        }
        assert!(a.entry(10_000, 1) <= 1e-4);
    }

    #[test]
    fn unit_riesz_and_linear_lambda_reproduce_cesaro() {
        let c = SummabilityMatrix::cesaro();
        for id in ["riesz:unit", "lambda:linear"] {
            let m = SummabilityMatrix::from_id(id).unwrap();
            for n in 1..60 {
                let (x, y) = (m.entries(n), c.entries(n));
                assert_eq!(x.len(), y.len());
                for (p, q) in x.iter().zip(&y) {
                    assert_eq!(p.0, q.0);
                    assert!((p.1 - q.1).abs() < 1e-15, "{id} row {n}");
                }
            }
        }
    }

    #[test]
    fn lacunary_rows_sum_to_one() {
        let a = SummabilityMatrix::lacunary(2.0).unwrap();
        for n in 1..3000 {
            assert!((a.row_sum(n) - 1.0).abs() < 1e-12, "row {n}");
            let (lo, hi) = lacunary_block(2.0, n);
            assert!(lo < n && n <= hi);
        }
        // Blocks are (0,2], (2,4], (4,8], ...
        assert_eq!(lacunary_block(2.0, 1), (0, 2));
        assert_eq!(lacunary_block(2.0, 5), (4, 8));
        assert_eq!(lacunary_block(1.5, 3), (2, 3));
    }

    #[test]
    fn lambda_rows_are_trailing_windows() {
        let a = SummabilityMatrix::from_id("lambda:sqrt").unwrap();
        let e = a.entries(10);
        assert_eq!(e.first().unwrap().0, 7);
        assert_eq!(e.last().unwrap().0, 10);
        assert!((a.row_sum(10) - 1.0).abs() < 1e-15);
        assert!(SummabilityMatrix::lambda("bad", |n| n * 2).is_err());
    }

    #[test]
    fn riesz_linear_weights() {
        let a = SummabilityMatrix::from_id("riesz:linear").unwrap();
        assert!((a.entry(4, 3) - 3.0 / 10.0).abs() < 1e-15);
        assert!((a.row_sum(50) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn abel_rows_declare_small_tails() {
        let a = SummabilityMatrix::abel();
        for n in [1, 2, 10, 100] {
            match a.row(n) {
                Row::Entries { tail_bound, .. } => assert!(tail_bound <= TAIL_BOUND),
                Row::Band { .. } => panic!("abel rows are explicit"),
            }
            assert!((a.row_sum(n) - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(SummabilityMatrix::lacunary(1.0).is_err());
        assert!(SummabilityMatrix::from_id("riesz:cubic").is_err());
        assert!(SummabilityMatrix::from_id("lacunary:x").is_err());
        assert!(SummabilityMatrix::from_id("nope").is_err());
    }

    #[test]
    fn row_limit_respects_support() {
        let c = SummabilityMatrix::cesaro();
        assert_eq!(c.row_limit(1000), 1000);
        let l = SummabilityMatrix::lacunary(2.0).unwrap();
        // Row 1000 reaches 1024.
        assert_eq!(l.row_limit(1000), 512);
        assert_eq!(l.row_limit(1024), 1024);
        assert_eq!(SummabilityMatrix::column_spike().row_limit(50), 50);
    }

    #[test]
    fn summer_matches_explicit_entries() {
        let values: Vec<f64> = (1..=300).map(|k| ((k * 37) % 11) as f64 / 10.0).collect();
        for id in ["cesaro", "riesz:sqrt", "lambda:half", "lacunary:1.5", "abel"] {
            let a = SummabilityMatrix::from_id(id).unwrap();
            let s = a.summer(&values);
            for n in 1..=a.row_limit(values.len()) {
                let direct: f64 = a.entries(n).iter().map(|&(k, x)| x * values[k - 1]).sum();
                assert!((s.sum(n).unwrap() - direct).abs() < 1e-12, "{id} row {n}");
            }
            let too_far = a.row_limit(values.len()) + 1;
            assert!(matches!(s.sum(too_far), Err(Error::SequenceTooShort { .. })), "{id}");
        }
    }
}
