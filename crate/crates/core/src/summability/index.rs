use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};

type Predicate = dyn Fn(usize) -> bool + Send + Sync;

/// A subset of `ℕ = {1, 2, …}`.
#[derive(Clone)]
pub enum IndexSet {
    Empty,
    All,
    /// Sorted, deduplicated members.
    Explicit(Arc<Vec<usize>>),
    Predicate {
        name: String,
        test: Arc<Predicate>,
    },
    /// Membership of `k` is `bits[k - 1]`; indices past the end are absent.
    Mask {
        name: String,
        bits: Arc<Vec<bool>>,
    },
    Complement(Box<IndexSet>),
    Union(Box<IndexSet>, Box<IndexSet>),
    Intersection(Box<IndexSet>, Box<IndexSet>),
}

/// Identifiers accepted by [`IndexSet::builtin`], in listing order.
pub const BUILTIN_INDEX_SETS: &[(&str, &str)] = &[
    ("empty", "no indices"),
    ("all", "every index"),
    ("squares", "perfect squares 1, 4, 9, …"),
    ("cubes", "perfect cubes 1, 8, 27, …"),
    ("evens", "even indices"),
    ("odds", "odd indices"),
    ("progression:<step>[:<offset>]", "k ≡ offset (mod step), offset defaults to 0"),
    ("lacunary-blocks", "the first ⌊√h⌋ indices of each dyadic block (2^(r-1), 2^r] of length h"),
    ("random-sparse", "seeded random set with P(k ∈ B) = k^(-1/2)"),
];

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl IndexSet {
    pub fn explicit<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut v: Vec<usize> = items.into_iter().filter(|&k| k >= 1).collect();
        v.sort_unstable();
        v.dedup();
        IndexSet::Explicit(Arc::new(v))
    }

    pub fn predicate<F>(name: impl Into<String>, test: F) -> Self
    where
        F: Fn(usize) -> bool + Send + Sync + 'static,
    {
        IndexSet::Predicate { name: name.into(), test: Arc::new(test) }
    }

    pub fn from_mask(name: impl Into<String>, bits: Vec<bool>) -> Self {
        IndexSet::Mask { name: name.into(), bits: Arc::new(bits) }
    }

    pub fn squares() -> Self {
        Self::predicate("squares", |k| {
            let r = k.isqrt();
            r * r == k
        })
    }

    pub fn cubes() -> Self {
        Self::predicate("cubes", |k| {
            let r = (k as f64).cbrt().round() as usize;
            (r.saturating_sub(1)..=r + 1).any(|c| c * c * c == k)
        })
    }

    pub fn evens() -> Self {
        Self::progression(2, 0).expect("valid").named("evens")
    }

    pub fn odds() -> Self {
        Self::progression(2, 1).expect("valid").named("odds")
    }

    /// `{k : k ≡ offset (mod step)}`.
    pub fn progression(step: usize, offset: usize) -> Result<Self> {
        if step == 0 {
            return domain("progression step must be positive");
        }
        let offset = offset % step;
        Ok(Self::predicate(format!("progression:{step}:{offset}"), move |k| k % step == offset))
    }

    /// The first `⌊√h⌋` indices of every dyadic block `(2^(r-1), 2^r]` of
    /// length `h`. Density zero under Cesàro and lacunary means.
    pub fn lacunary_blocks() -> Self {
        Self::predicate("lacunary-blocks", |k| {
            let hi = k.next_power_of_two();
            let lo = hi / 2;
            k - lo <= (hi - lo).isqrt()
        })
    }

    /// Includes each `k ≤ len` independently with probability `k^(-1/2)`.
    pub fn random_sparse(seed: u64, len: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = (1..=len).map(|k| rng.random_bool(1.0 / (k as f64).sqrt())).collect();
        Self::from_mask(format!("random-sparse(seed={seed})"), bits)
    }

    /// Parses a builtin identifier (see [`BUILTIN_INDEX_SETS`]). `seed` and
    /// `len` are used only by randomized sets.
    pub fn builtin(id: &str, seed: u64, len: usize) -> Result<Self> {
        let parts: Vec<&str> = id.split(':').collect();
        let num = |s: &str| s.parse::<usize>().or_else(|_| domain(format!("bad number `{s}` in index set `{id}`")));
        Ok(match parts.as_slice() {
            ["empty"] => IndexSet::Empty,
            ["all"] => IndexSet::All,
            ["squares"] => Self::squares(),
            ["cubes"] => Self::cubes(),
            ["evens"] => Self::evens(),
            ["odds"] => Self::odds(),
            ["progression", step] => Self::progression(num(step)?, 0)?,
            ["progression", step, offset] => Self::progression(num(step)?, num(offset)?)?,
            ["lacunary-blocks"] => Self::lacunary_blocks(),
            ["random-sparse"] => Self::random_sparse(seed, len),
            _ => return domain(format!("unknown index set `{id}`")),
        })
    }

    fn named(self, name: &str) -> Self {
        match self {
            IndexSet::Predicate { test, .. } => IndexSet::Predicate { name: name.into(), test },
            other => other,
        }
    }

    pub fn complement(&self) -> Self {
        IndexSet::Complement(Box::new(self.clone()))
    }

    pub fn union(&self, other: &IndexSet) -> Self {
        IndexSet::Union(Box::new(self.clone()), Box::new(other.clone()))
    }

    pub fn intersection(&self, other: &IndexSet) -> Self {
        IndexSet::Intersection(Box::new(self.clone()), Box::new(other.clone()))
    }

    pub fn contains(&self, k: usize) -> bool {
        if k == 0 {
            return false;
        }
        match self {
            IndexSet::Empty => false,
            IndexSet::All => true,
            IndexSet::Explicit(v) => v.binary_search(&k).is_ok(),
            IndexSet::Predicate { test, .. } => test(k),
            IndexSet::Mask { bits, .. } => bits.get(k - 1).copied().unwrap_or(false),
            IndexSet::Complement(s) => !s.contains(k),
            IndexSet::Union(a, b) => a.contains(k) || b.contains(k),
            IndexSet::Intersection(a, b) => a.contains(k) && b.contains(k),
        }
    }

    /// Membership of `1..=len` as 0/1 values (position `k - 1`).
    pub fn indicator(&self, len: usize) -> Vec<f64> {
        self.bits(len).into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// Membership of `1..=len` (position `k - 1`).
    pub fn bits(&self, len: usize) -> Vec<bool> {
        match self {
            IndexSet::Empty => vec![false; len],
            IndexSet::All => vec![true; len],
            IndexSet::Explicit(v) => {
                let mut out = vec![false; len];
                for &k in v.iter().take_while(|&&k| k <= len) {
                    out[k - 1] = true;
                }
                out
            }
            IndexSet::Mask { bits, .. } => (0..len).map(|i| bits.get(i).copied().unwrap_or(false)).collect(),
            IndexSet::Complement(s) => s.bits(len).into_iter().map(|b| !b).collect(),
            IndexSet::Union(a, b) => a.bits(len).into_iter().zip(b.bits(len)).map(|(x, y)| x || y).collect(),
            IndexSet::Intersection(a, b) => a.bits(len).into_iter().zip(b.bits(len)).map(|(x, y)| x && y).collect(),
            IndexSet::Predicate { test, .. } => (1..=len).map(|k| test(k)).collect(),
        }
    }

    /// `|B ∩ [1, n]|`.
    pub fn count_upto(&self, n: usize) -> usize {
        self.bits(n).into_iter().filter(|&b| b).count()
    }

    /// Members in `[1, n]`, ascending.
    pub fn members_upto(&self, n: usize) -> Vec<usize> {
        self.bits(n).into_iter().enumerate().filter(|(_, b)| *b).map(|(i, _)| i + 1).collect()
    }

    pub fn name(&self) -> String {
        match self {
            IndexSet::Empty => "empty".into(),
            IndexSet::All => "all".into(),
            IndexSet::Explicit(v) if v.len() <= 8 => {
                format!("explicit{:?}", v.as_slice())
            }
            IndexSet::Explicit(v) => format!("explicit({} indices)", v.len()),
            IndexSet::Predicate { name, .. } | IndexSet::Mask { name, .. } => name.clone(),
            IndexSet::Complement(s) => format!("complement({})", s.name()),
            IndexSet::Union(a, b) => format!("union({}, {})", a.name(), b.name()),
            IndexSet::Intersection(a, b) => format!("intersection({}, {})", a.name(), b.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_and_cubes_membership() {
        let sq = IndexSet::squares();
        assert_eq!(sq.members_upto(50), vec![1, 4, 9, 16, 25, 36, 49]);
        assert_eq!(sq.count_upto(100_000), 316);
        let cu = IndexSet::cubes();
        assert_eq!(cu.members_upto(130), vec![1, 8, 27, 64, 125]);
        assert_eq!(cu.count_upto(1_000_000), 100);
    }

    #[test]
    fn set_algebra() {
        let e = IndexSet::evens();
        let s = IndexSet::squares();
        assert_eq!(e.union(&s).count_upto(10), 7);
        assert_eq!(e.intersection(&s).members_upto(20), vec![4, 16]);
        assert_eq!(e.complement().members_upto(6), vec![1, 3, 5]);
        assert_eq!(IndexSet::explicit([5, 2, 2, 0]).members_upto(10), vec![2, 5]);
        assert!(!IndexSet::All.contains(0));
    }

    #[test]
    fn bits_agree_with_contains() {
        let sets = [
            IndexSet::lacunary_blocks(),
            IndexSet::progression(3, 1).unwrap(),
            IndexSet::random_sparse(9, 500),
            IndexSet::squares().union(&IndexSet::cubes()).complement(),
        ];
        for s in &sets {
            let bits = s.bits(600);
            for k in 1..=600 {
                assert_eq!(bits[k - 1], s.contains(k), "{} at {k}", s.name());
            }
        }
    }

    #[test]
    fn lacunary_blocks_are_sparse() {
        let b = IndexSet::lacunary_blocks();
        // Block (8, 16] has h = 8 and keeps 9 and 10.
        assert_eq!(b.members_upto(16), vec![1, 2, 3, 5, 6, 9, 10]);
        let n = 1 << 16;
        assert!((b.count_upto(n) as f64) / (n as f64) < 0.01);
    }

    #[test]
    fn random_sparse_is_seeded() {
        let a = IndexSet::random_sparse(1, 1000).bits(1000);
        let b = IndexSet::random_sparse(1, 1000).bits(1000);
        let c = IndexSet::random_sparse(2, 1000).bits(1000);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn builtin_ids() {
        assert_eq!(IndexSet::builtin("progression:3", 0, 0).unwrap().members_upto(10), vec![3, 6, 9]);
        assert_eq!(IndexSet::builtin("progression:3:1", 0, 0).unwrap().members_upto(10), vec![1, 4, 7, 10]);
        assert!(IndexSet::builtin("progression:0", 0, 0).is_err());
        assert!(IndexSet::builtin("primes", 0, 0).is_err());
    }
}
