//! Positive roots of type C_n.
//!
//! Roots are indexed by a single global order that every other module
//! (bitmasks, wedge signs, serialized output) relies on:
//! all `e_i - e_j` lexicographically, then all `e_i + e_j` lexicographically,
//! then `2e_1, ..., 2e_n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::MAX_RANK;

/// Coefficient vector of a weight in the basis `e_1, ..., e_n`.
/// Only the first `n` entries are meaningful.
pub type Weight = [i8; MAX_RANK];

pub fn check_rank(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RANK {
        Err(Error::InvalidRank(n))
    } else {
        Ok(())
    }
}

/// A positive root with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Root {
    /// `2e_i`
    Long(u8),
    /// `e_i + e_j`, `i < j`
    Sum(u8, u8),
    /// `e_i - e_j`, `i < j`
    Diff(u8, u8),
}

/// The image of a positive root under a signed permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    pub positive: bool,
    pub root: Root,
}

impl SignedRoot {
    pub fn pos(root: Root) -> Self {
        SignedRoot {
            positive: true,
            root,
        }
    }

    pub fn neg(root: Root) -> Self {
        SignedRoot {
            positive: false,
            root,
        }
    }
}

impl fmt::Display for SignedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.root)
        } else {
            write!(f, "-({})", self.root)
        }
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

impl Root {
    /// `e_i + e_j` for `i <= j`, collapsing to `Long(i)` when `i == j`.
    pub fn plus(i: u8, j: u8) -> Root {
        match i.cmp(&j) {
            Ordering::Less => Root::Sum(i, j),
            Ordering::Equal => Root::Long(i),
            Ordering::Greater => Root::Sum(j, i),
        }
    }

    /// Largest index appearing in the root.
    pub fn max_index(&self) -> usize {
        match *self {
            Root::Long(i) => i as usize,
            Root::Sum(_, j) | Root::Diff(_, j) => j as usize,
        }
    }

    fn is_well_formed(&self) -> bool {
        match *self {
            Root::Long(i) => i >= 1,
            Root::Sum(i, j) | Root::Diff(i, j) => i >= 1 && i < j,
        }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.is_well_formed() && self.max_index() <= n
    }

    pub fn is_diff(&self) -> bool {
        matches!(self, Root::Diff(..))
    }

    /// The `(i, j)` pair with `i <= j` for a root of the form `e_i + e_j`.
    pub fn upper_pair(&self) -> Option<(u8, u8)> {
        match *self {
            Root::Long(i) => Some((i, i)),
            Root::Sum(i, j) => Some((i, j)),
            Root::Diff(..) => None,
        }
    }

    /// Position in the canonical order for rank `n`.
    pub fn index(&self, n: usize) -> usize {
        debug_assert!(self.is_valid(n), "{self} invalid for rank {n}");
        let half = n * (n - 1) / 2;
        match *self {
            Root::Diff(i, j) => pair_index(n, i as usize, j as usize),
            Root::Sum(i, j) => half + pair_index(n, i as usize, j as usize),
            Root::Long(i) => 2 * half + (i as usize - 1),
        }
    }

    pub fn from_index(n: usize, idx: usize) -> Root {
        let half = n * (n - 1) / 2;
        assert!(idx < n * n, "root index {idx} out of range for rank {n}");
        if idx >= 2 * half {
            return Root::Long((idx - 2 * half + 1) as u8);
        }
        let (mut k, is_sum) = if idx >= half {
            (idx - half, true)
        } else {
            (idx, false)
        };
        let mut i = 1;
        while k >= n - i {
            k -= n - i;
            i += 1;
        }
        let j = i + 1 + k;
        if is_sum {
            Root::Sum(i as u8, j as u8)
        } else {
            Root::Diff(i as u8, j as u8)
        }
    }

    pub fn weight(&self) -> Weight {
        let mut w = [0i8; MAX_RANK];
        self.add_to(&mut w, 1);
        w
    }

    /// Adds `sign` times this root to a weight vector.
    pub fn add_to(&self, w: &mut Weight, sign: i8) {
        match *self {
            Root::Long(i) => w[i as usize - 1] += 2 * sign,
            Root::Sum(i, j) => {
                w[i as usize - 1] += sign;
                w[j as usize - 1] += sign;
            }
            Root::Diff(i, j) => {
                w[i as usize - 1] += sign;
                w[j as usize - 1] -= sign;
            }
        }
    }

    /// Recognizes a root (positive or negative) from its coefficient vector.
    pub fn from_weight(w: &[i8]) -> Option<SignedRoot> {
        let mut nz = w
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| ((k + 1) as u8, c));
        let first = nz.next()?;
        let second = nz.next();
        if nz.next().is_some() {
            return None;
        }
        match (first, second) {
            ((i, 2), None) => Some(SignedRoot::pos(Root::Long(i))),
            ((i, -2), None) => Some(SignedRoot::neg(Root::Long(i))),
            ((i, 1), Some((j, 1))) => Some(SignedRoot::pos(Root::Sum(i, j))),
            ((i, -1), Some((j, -1))) => Some(SignedRoot::neg(Root::Sum(i, j))),
            ((i, 1), Some((j, -1))) => Some(SignedRoot::pos(Root::Diff(i, j))),
            ((i, -1), Some((j, 1))) => Some(SignedRoot::neg(Root::Diff(i, j))),
            _ => None,
        }
    }

    /// Relabels indices by `e_k -> sign(k) e_{|map(k)|}`, where `map` holds
    /// signed 1-based images. Returns the image as a signed positive root.
    pub fn relabel(&self, map: &[i8]) -> SignedRoot {
        let mut w = [0i8; MAX_RANK];
        let mut push = |k: u8, c: i8| {
            let img = map[k as usize - 1];
            w[img.unsigned_abs() as usize - 1] += c * img.signum();
        };
        match *self {
            Root::Long(i) => push(i, 2),
            Root::Sum(i, j) => {
                push(i, 1);
                push(j, 1);
            }
            Root::Diff(i, j) => {
                push(i, 1);
                push(j, -1);
            }
        }
        Root::from_weight(&w).expect("signed relabeling maps roots to roots")
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Root::Long(i) => write!(f, "2e{i}"),
            Root::Sum(i, j) => write!(f, "e{i}+e{j}"),
            Root::Diff(i, j) => write!(f, "e{i}-e{j}"),
        }
    }
}

impl FromStr for Root {
    type Err = Error;

    fn from_str(s: &str) -> Result<Root> {
        let bad = || Error::Parse(format!("invalid root `{s}`"));
        let idx = |t: &str| -> Result<u8> {
            t.strip_prefix('e')
                .and_then(|d| d.parse::<u8>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(bad)
        };
        let s = s.trim();
        let root = if let Some(rest) = s.strip_prefix('2') {
            Root::Long(idx(rest)?)
        } else if let Some((a, b)) = s.split_once('+') {
            Root::Sum(idx(a)?, idx(b)?)
        } else if let Some((a, b)) = s.split_once('-') {
            Root::Diff(idx(a)?, idx(b)?)
        } else {
            return Err(bad());
        };
        if root.is_well_formed() {
            Ok(root)
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `n^2` positive roots in canonical order.
pub fn positive_roots(n: usize) -> Result<Vec<Root>> {
    check_rank(n)?;
    Ok((0..n * n).map(|k| Root::from_index(n, k)).collect())
}

/// The split into difference roots and the long/sum roots.
pub fn split(n: usize) -> Result<(RootSet, RootSet)> {
    check_rank(n)?;
    Ok((RootSet::diff_part(n), RootSet::upper_part(n)))
}

/// `a + b` when the sum is again a positive root.
pub fn dotted_sum(a: Root, b: Root) -> Option<Root> {
    let mut w = a.weight();
    b.add_to(&mut w, 1);
    match Root::from_weight(&w) {
        Some(SignedRoot {
            positive: true,
            root,
        }) => Some(root),
        _ => None,
    }
}

/// The (non-strict) partial order on long/sum roots:
/// `e_{i1}+e_{j1} <= e_{i2}+e_{j2}` iff `i1 >= i2` and `j1 >= j2`.
/// Reflexive; callers wanting the strict order must also test `x != y`.
pub fn precedes(x: Root, y: Root) -> Result<bool> {
    let (i1, j1) = x
        .upper_pair()
        .ok_or_else(|| Error::NotInUpperPart(x.to_string()))?;
    let (i2, j2) = y
        .upper_pair()
        .ok_or_else(|| Error::NotInUpperPart(y.to_string()))?;
    Ok(i1 >= i2 && j1 >= j2)
}

/// A subset of the positive roots of a fixed rank, as a bitmask over the
/// canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet {
    rank: u8,
    bits: u128,
}

impl RootSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!((1..=MAX_RANK).contains(&n));
        RootSet {
            rank: n as u8,
            bits: 0,
        }
    }

    pub fn from_bits(n: usize, bits: u128) -> Self {
        let set = RootSet {
            rank: n as u8,
            bits,
        };
        debug_assert_eq!(bits & !Self::all(n).bits, 0);
        set
    }

    pub fn all(n: usize) -> Self {
        let total = n * n;
        let bits = if total == 128 {
            u128::MAX
        } else {
            (1u128 << total) - 1
        };
        RootSet {
            rank: n as u8,
            bits,
        }
    }

    /// The difference roots `e_i - e_j`.
    pub fn diff_part(n: usize) -> Self {
        let half = n * (n - 1) / 2;
        RootSet {
            rank: n as u8,
            bits: (1u128 << half) - 1,
        }
    }

    /// The long and sum roots `e_i + e_j`, `i <= j`.
    pub fn upper_part(n: usize) -> Self {
        Self::all(n).difference(&Self::diff_part(n))
    }

    pub fn from_roots<I: IntoIterator<Item = Root>>(n: usize, roots: I) -> Self {
        let mut s = Self::empty(n);
        for r in roots {
            s.insert(r);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn insert(&mut self, r: Root) {
        self.bits |= 1u128 << r.index(self.rank());
    }

    pub fn contains(&self, r: Root) -> bool {
        r.is_valid(self.rank()) && self.bits & (1u128 << r.index(self.rank())) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet {
            rank: self.rank,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &RootSet) -> RootSet {
        RootSet {
            rank: self.rank,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &RootSet) -> RootSet {
        RootSet {
            rank: self.rank,
            bits: self.bits & !other.bits,
        }
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &RootSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Root> + '_ {
        let n = self.rank();
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Root::from_index(n, k))
        })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(|r| r.to_string()).collect()
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = RootSet> {
        let (rank, mask) = (self.rank, self.bits);
        let mut next = Some(0u128);
        std::iter::from_fn(move || {
            let cur = next?;
            next = (cur != mask).then(|| (cur | !mask).wrapping_add(1) & mask);
            Some(RootSet { rank, bits: cur })
        })
    }

    /// A random subset whose size is uniform in `0..=len`.
    pub fn random_subset<R: Rng + ?Sized>(&self, rng: &mut R) -> RootSet {
        let members: Vec<u32> = (0..128).filter(|&k| self.bits >> k & 1 == 1).collect();
        let k = rng.random_range(0..=members.len());
        let bits = index::sample(rng, members.len(), k)
            .iter()
            .fold(0u128, |acc, i| acc | 1 << members[i]);
        RootSet {
            rank: self.rank,
            bits,
        }
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|r| r.to_string()))
            .finish()
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl Serialize for RootSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|r| r.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_and_two() {
        assert_eq!(positive_roots(1).unwrap(), vec![Root::Long(1)]);
        assert_eq!(
            positive_roots(2).unwrap(),
            vec![
                Root::Diff(1, 2),
                Root::Sum(1, 2),
                Root::Long(1),
                Root::Long(2)
            ]
        );
        assert_eq!(positive_roots(5).unwrap().len(), 25);
        assert_eq!(positive_roots(0), Err(Error::InvalidRank(0)));
    }

    #[test]
    fn canonical_order_is_diff_sum_long() {
        let roots = positive_roots(3).unwrap();
        let names: Vec<_> = roots.iter().map(|r| r.to_string()).collect();
        assert_eq!(
            names,
            ["e1-e2", "e1-e3", "e2-e3", "e1+e2", "e1+e3", "e2+e3", "2e1", "2e2", "2e3"]
        );
        for (k, r) in roots.iter().enumerate() {
            assert_eq!(r.index(3), k);
        }
    }

    #[test]
    fn split_sizes() {
        let (d, u) = split(2).unwrap();
        assert_eq!(d, RootSet::from_roots(2, [Root::Diff(1, 2)]));
        assert_eq!(
            u,
            RootSet::from_roots(2, [Root::Sum(1, 2), Root::Long(1), Root::Long(2)])
        );
        let (d, u) = split(1).unwrap();
        assert!(d.is_empty());
        assert_eq!(u.len(), 1);
        for n in 1..=8 {
            let (d, u) = split(n).unwrap();
            assert_eq!(d.len(), n * (n - 1) / 2);
            assert_eq!(u.len(), n * (n + 1) / 2);
            assert!(d.is_disjoint(&u));
            assert_eq!(d.union(&u), RootSet::all(n));
        }
    }

    #[test]
    fn dotted_sums() {
        assert_eq!(
            dotted_sum(Root::Diff(1, 2), Root::Long(2)),
            Some(Root::Sum(1, 2))
        );
        assert_eq!(
            dotted_sum(Root::Diff(1, 2), Root::Sum(1, 2)),
            Some(Root::Long(1))
        );
        assert_eq!(dotted_sum(Root::Long(1), Root::Long(2)), None);
        assert_eq!(
            dotted_sum(Root::Diff(1, 2), Root::Diff(2, 3)),
            Some(Root::Diff(1, 3))
        );
    }

    #[test]
    fn order_examples() {
        assert!(precedes(Root::Long(2), Root::Sum(1, 2)).unwrap());
        assert!(precedes(Root::Sum(1, 3), Root::Sum(1, 3)).unwrap());
        assert!(!precedes(Root::Sum(1, 3), Root::Long(2)).unwrap());
        assert!(!precedes(Root::Long(2), Root::Sum(1, 3)).unwrap());
        assert!(precedes(Root::Diff(1, 2), Root::Long(1)).is_err());
    }

    #[test]
    fn parse_display() {
        for s in ["2e1", "e1+e2", "e3-e10"] {
            assert_eq!(s.parse::<Root>().unwrap().to_string(), s);
        }
        assert!("e2-e1".parse::<Root>().is_err());
        assert!("2e0".parse::<Root>().is_err());
        assert!("x".parse::<Root>().is_err());
    }

    #[test]
    fn weight_round_trip() {
        for n in 1..=MAX_RANK {
            for r in positive_roots(n).unwrap() {
                assert_eq!(Root::from_weight(&r.weight()), Some(SignedRoot::pos(r)));
                let mut neg = [0i8; MAX_RANK];
                r.add_to(&mut neg, -1);
                assert_eq!(Root::from_weight(&neg), Some(SignedRoot::neg(r)));
            }
        }
    }

    #[test]
    fn serialize_as_strings() {
        let s = RootSet::from_roots(2, [Root::Long(1), Root::Sum(1, 2)]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["e1+e2","2e1"]"#);
    }

    #[test]
    fn subsets_of_the_upper_part() {
        let upper = RootSet::upper_part(3);
        let subs: Vec<RootSet> = upper.subsets().collect();
        assert_eq!(subs.len(), 1 << upper.len());
        assert!(subs.windows(2).all(|w| w[0].bits() < w[1].bits()));
        assert!(subs.iter().all(|s| s.is_subset(&upper)));
        assert_eq!(RootSet::empty(2).subsets().count(), 1);
    }

    #[test]
    fn random_subsets_stay_inside() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let upper = RootSet::upper_part(4);
        let mut sizes = std::collections::BTreeSet::new();
        for _ in 0..500 {
            let s = upper.random_subset(&mut rng);
            assert!(s.is_subset(&upper));
            sizes.insert(s.len());
        }
        assert_eq!(sizes.len(), upper.len() + 1);
    }
}
