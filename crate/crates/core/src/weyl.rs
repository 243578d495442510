//! The hyperoctahedral group `(Z/2)^n ⋊ S_n` acting on type-C roots.
//!
//! A permutation is written as its image sequence `(i_1, ..., i_n)`, meaning
//! `j -> i_j`. A signed permutation stores signed images: `[2,-1,3]` sends
//! `e_1 -> e_2`, `e_2 -> -e_1`, `e_3 -> e_3`. Equivalently it is
//! `r_{j_1} ... r_{j_k} · σ0` where `σ0` acts first and the sign changes
//! `r_j` negate the output values `j`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::roots::{check_rank, Root, RootSet, SignedRoot};
use crate::MAX_RANK;

/// Default largest rank for which the whole group may be enumerated.
pub const DEFAULT_GROUP_CAP: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    n: u8,
    img: [u8; MAX_RANK],
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        let mut img = [0u8; MAX_RANK];
        for (k, v) in img.iter_mut().take(n).enumerate() {
            *v = (k + 1) as u8;
        }
        Perm { n: n as u8, img }
    }

    /// The longest element `(n, n-1, ..., 1)`.
    pub fn longest(n: usize) -> Perm {
        let mut img = [0u8; MAX_RANK];
        for (k, v) in img.iter_mut().take(n).enumerate() {
            *v = (n - k) as u8;
        }
        Perm { n: n as u8, img }
    }

    pub fn from_images(images: &[u8]) -> Result<Perm> {
        let n = images.len();
        check_rank(n)?;
        let mut seen = [false; MAX_RANK];
        for &v in images {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v - 1] = true;
        }
        let mut img = [0u8; MAX_RANK];
        img[..n].copy_from_slice(images);
        Ok(Perm { n: n as u8, img })
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img[..self.rank()]
    }

    /// `σ(m)` for 1-based `m`.
    pub fn apply(&self, m: usize) -> usize {
        self.img[m - 1] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut img = [0u8; MAX_RANK];
        for (k, &v) in self.images().iter().enumerate() {
            img[v as usize - 1] = (k + 1) as u8;
        }
        Perm { n: self.n, img }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut img = [0u8; MAX_RANK];
        for (k, v) in img.iter_mut().take(self.rank()).enumerate() {
            *v = self.img[other.img[k] as usize - 1];
        }
        Perm { n: self.n, img }
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .iter()
            .enumerate()
            .all(|(k, &v)| v as usize == k + 1)
    }

    pub fn signed_images(&self) -> [i8; MAX_RANK] {
        let mut out = [0i8; MAX_RANK];
        for (o, &v) in out.iter_mut().zip(self.images()) {
            *o = v as i8;
        }
        out
    }

    /// Image of a root under the index relabeling `e_k -> e_{σ(k)}`.
    pub fn relabel(&self, root: Root) -> SignedRoot {
        root.relabel(&self.signed_images())
    }

    pub fn relabel_set(&self, set: &RootSet) -> Result<RootSet> {
        let mut out = RootSet::empty(self.rank());
        for r in set.iter() {
            let img = self.relabel(r);
            if !img.positive {
                return Err(Error::Internal(format!(
                    "relabeling {r} by {self} gives a negative root"
                )));
            }
            out.insert(img.root);
        }
        Ok(out)
    }

    /// Inversion set `{e_i - e_j : i < j, σ^{-1}(i) > σ^{-1}(j)}`.
    pub fn inversions(&self) -> RootSet {
        let n = self.rank();
        let inv = self.inverse();
        let mut set = RootSet::empty(n);
        for i in 1..=n {
            for j in i + 1..=n {
                if inv.apply(i) > inv.apply(j) {
                    set.insert(Root::Diff(i as u8, j as u8));
                }
            }
        }
        set
    }

    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    /// The unique permutation with the given inversion set, if any.
    pub fn from_inversions(set: &RootSet) -> Option<Perm> {
        let n = set.rank();
        if !set.is_subset(&RootSet::diff_part(n)) {
            return None;
        }
        // position of value v = 1 + #{values placed before v}
        let mut pos = [0u8; MAX_RANK];
        for v in 1..=n {
            let before = (1..=n)
                .filter(|&u| u != v)
                .filter(|&u| {
                    if u < v {
                        !set.contains(Root::Diff(u as u8, v as u8))
                    } else {
                        set.contains(Root::Diff(v as u8, u as u8))
                    }
                })
                .count();
            pos[v - 1] = (before + 1) as u8;
        }
        let candidate = Perm::from_images(&pos[..n]).ok()?.inverse();
        (candidate.inversions() == *set).then_some(candidate)
    }

    /// All permutations of rank `n` in lexicographic order of image sequence.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur = Perm::identity(n);
        loop {
            out.push(cur);
            if !next_permutation(&mut cur.img[..n]) {
                break;
            }
        }
        out
    }

    /// Position in the lexicographic enumeration of `all(n)`.
    pub fn lex_rank(&self) -> usize {
        let img = self.images();
        let n = img.len();
        let mut rank = 0;
        for k in 0..n {
            let smaller = img[k + 1..].iter().filter(|&&v| v < img[k]).count();
            rank = rank * (n - k) + smaller;
        }
        rank
    }
}

fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("invalid permutation `{s}`")))?;
        let images = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::Parse(format!("invalid permutation `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(&images)
    }
}

/// An element of the Weyl group of type C_n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    n: u8,
    img: [i8; MAX_RANK],
}

impl SignedPerm {
    pub fn identity(n: usize) -> SignedPerm {
        Self::from_perm(&Perm::identity(n))
    }

    pub fn from_perm(p: &Perm) -> SignedPerm {
        SignedPerm {
            n: p.n,
            img: p.signed_images(),
        }
    }

    /// The sign change `r_j`.
    pub fn reflection(n: usize, j: usize) -> SignedPerm {
        let mut w = Self::identity(n);
        w.img[j - 1] = -(j as i8);
        w
    }

    /// `r_{j_1} ... r_{j_k} · perm` where `negated` lists the `j`s.
    pub fn from_parts(perm: &Perm, negated: &[u8]) -> SignedPerm {
        let mut w = Self::from_perm(perm);
        for v in w.img.iter_mut().take(perm.rank()) {
            if negated.contains(&(*v as u8)) {
                *v = -*v;
            }
        }
        w
    }

    pub fn from_images(images: &[i8]) -> Result<SignedPerm> {
        let abs: Vec<u8> = images.iter().map(|v| v.unsigned_abs()).collect();
        let p = Perm::from_images(&abs)?;
        let mut w = Self::from_perm(&p);
        w.img[..images.len()].copy_from_slice(images);
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    pub fn images(&self) -> &[i8] {
        &self.img[..self.rank()]
    }

    /// Signed image `w(m)` of the 1-based index `m`.
    pub fn apply(&self, m: usize) -> i8 {
        self.img[m - 1]
    }

    /// The underlying permutation `σ0`.
    pub fn perm(&self) -> Perm {
        let mut img = [0u8; MAX_RANK];
        for (o, v) in img.iter_mut().zip(self.images()) {
            *o = v.unsigned_abs();
        }
        Perm { n: self.n, img }
    }

    /// Output values whose sign flips, ascending.
    pub fn negated(&self) -> Vec<u8> {
        let mut j: Vec<u8> = self
            .images()
            .iter()
            .filter(|&&v| v < 0)
            .map(|v| v.unsigned_abs())
            .collect();
        j.sort_unstable();
        j
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut img = [0i8; MAX_RANK];
        for (k, &v) in self.images().iter().enumerate() {
            img[v.unsigned_abs() as usize - 1] = (k as i8 + 1) * v.signum();
        }
        SignedPerm { n: self.n, img }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let mut img = [0i8; MAX_RANK];
        for (k, v) in img.iter_mut().take(self.rank()).enumerate() {
            let o = other.img[k];
            *v = self.img[o.unsigned_abs() as usize - 1] * o.signum();
        }
        SignedPerm { n: self.n, img }
    }

    pub fn act_on_root(&self, root: Root) -> SignedRoot {
        root.relabel(&self.img)
    }

    /// `Φ_w = {α > 0 : w^{-1}(α) < 0}`.
    pub fn inversion_set(&self) -> RootSet {
        let n = self.rank();
        let inv = self.inverse();
        let mut set = RootSet::empty(n);
        for k in 0..n * n {
            let r = Root::from_index(n, k);
            if !inv.act_on_root(r).positive {
                set.insert(r);
            }
        }
        set
    }

    pub fn length(&self) -> usize {
        self.inversion_set().len()
    }

    /// Standard form with the negated values ordered by `σ0(j)`.
    pub fn standard_form(&self) -> StandardForm {
        self.standard_form_with(SignOrdering::ByImage)
    }

    pub fn standard_form_with(&self, ordering: SignOrdering) -> StandardForm {
        let sigma0 = self.perm();
        let mut j_list = self.negated();
        match ordering {
            SignOrdering::ByImage => j_list.sort_by_key(|&j| sigma0.apply(j as usize)),
            SignOrdering::ByPosition => {
                let inv = sigma0.inverse();
                j_list.sort_by_key(|&j| inv.apply(j as usize))
            }
        }
        StandardForm { j_list, sigma0 }
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPerm{self}")
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignedPerm> {
        let bad = || Error::Parse(format!("invalid signed permutation `{s}`"));
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let images = inner
            .split(',')
            .map(|t| t.trim().parse::<i8>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        SignedPerm::from_images(&images)
    }
}

/// How the negated values of a standard form are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignOrdering {
    /// `σ0(j_1) < σ0(j_2) < ...`
    ByImage,
    /// `σ0^{-1}(j_1) < σ0^{-1}(j_2) < ...`: the `j`s in the order they occur
    /// in the image sequence of `σ0`.
    ByPosition,
}

/// `w = r_{j_1} ... r_{j_k} · σ0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardForm {
    pub j_list: Vec<u8>,
    pub sigma0: Perm,
}

impl StandardForm {
    pub fn recompose(&self) -> SignedPerm {
        let mut w = SignedPerm::from_perm(&self.sigma0);
        for &j in self.j_list.iter().rev() {
            w = SignedPerm::reflection(self.sigma0.rank(), j as usize).compose(&w);
        }
        w
    }
}

/// The full group for a rank, enumerated signs-outer and
/// permutation-inner (lexicographic).
#[derive(Clone, Debug)]
pub struct WeylGroup {
    n: usize,
    perms: Vec<Perm>,
}

impl WeylGroup {
    pub fn new(n: usize) -> Result<WeylGroup> {
        Self::with_cap(n, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<WeylGroup> {
        check_rank(n)?;
        if n > cap {
            return Err(Error::RankAboveCap {
                rank: n,
                cap,
                what: "group enumeration",
            });
        }
        Ok(WeylGroup {
            n,
            perms: Perm::all(n),
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.perms.len() << self.n
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// The `idx`-th element in enumeration order.
    pub fn element(&self, idx: usize) -> SignedPerm {
        let mask = idx / self.perms.len();
        let p = &self.perms[idx % self.perms.len()];
        let negated: Vec<u8> = (1..=self.n as u8)
            .filter(|j| mask & (1 << (j - 1)) != 0)
            .collect();
        SignedPerm::from_parts(p, &negated)
    }

    pub fn iter(&self) -> impl Iterator<Item = SignedPerm> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
}

/// Streams every group element of rank `n` exactly once.
pub fn enumerate_group(n: usize, cap: usize) -> Result<impl Iterator<Item = SignedPerm>> {
    let g = WeylGroup::with_cap(n, cap)?;
    Ok((0..g.order()).map(move |i| g.element(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignedPerm {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(1, 8).unwrap().count(), 2);
        assert_eq!(enumerate_group(2, 8).unwrap().count(), 8);
        assert_eq!(WeylGroup::new(8).unwrap().order(), 10_321_920);
        assert!(matches!(
            WeylGroup::new(9),
            Err(Error::RankAboveCap {
                rank: 9,
                cap: 8,
                ..
            })
        ));
        assert_eq!(WeylGroup::new(0).unwrap_err(), Error::InvalidRank(0));
    }

    #[test]
    fn enumeration_order_and_uniqueness() {
        let g = WeylGroup::new(3).unwrap();
        let all: Vec<_> = g.iter().collect();
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 48);
        assert_eq!(all[0], SignedPerm::identity(3));
        assert_eq!(all[1], sp("[1,3,2]"));
        assert_eq!(all[6], sp("[-1,2,3]"));
    }

    #[test]
    fn action_examples() {
        let r1 = SignedPerm::reflection(2, 1);
        assert_eq!(
            r1.act_on_root(Root::Diff(1, 2)),
            SignedRoot::neg(Root::Sum(1, 2))
        );
        let id = SignedPerm::identity(3);
        for r in crate::roots::positive_roots(3).unwrap() {
            assert_eq!(id.act_on_root(r), SignedRoot::pos(r));
        }
        assert_eq!(
            sp("[2,1]").act_on_root(Root::Long(1)),
            SignedRoot::pos(Root::Long(2))
        );
    }

    #[test]
    fn inversion_set_examples() {
        let r1 = SignedPerm::reflection(2, 1);
        assert_eq!(
            r1.inversion_set(),
            RootSet::from_roots(2, [Root::Diff(1, 2), Root::Sum(1, 2), Root::Long(1)])
        );
        let r2 = SignedPerm::reflection(2, 2);
        assert_eq!(r2.inversion_set(), RootSet::from_roots(2, [Root::Long(2)]));
        assert!(SignedPerm::identity(4).inversion_set().is_empty());
    }

    #[test]
    fn perm_inversion_examples() {
        assert_eq!(
            p("(2,1)").inversions(),
            RootSet::from_roots(2, [Root::Diff(1, 2)])
        );
        assert!(Perm::identity(4).inversions().is_empty());
        // σ^{-1} = (2,3,1): the pairs (1,3) and (2,3) are out of order
        assert_eq!(
            p("(3,1,2)").inversions(),
            RootSet::from_roots(3, [Root::Diff(1, 3), Root::Diff(2, 3)])
        );
        assert_eq!(
            p("(2,3,1)").inversions(),
            RootSet::from_roots(3, [Root::Diff(1, 2), Root::Diff(1, 3)])
        );
    }

    #[test]
    fn perm_from_inversion_examples() {
        assert_eq!(
            Perm::from_inversions(&RootSet::empty(3)),
            Some(Perm::identity(3))
        );
        assert_eq!(
            Perm::from_inversions(&RootSet::from_roots(2, [Root::Diff(1, 2)])),
            Some(p("(2,1)"))
        );
        assert_eq!(
            Perm::from_inversions(&RootSet::from_roots(3, [Root::Diff(1, 3)])),
            None
        );
        assert_eq!(
            Perm::from_inversions(&RootSet::from_roots(2, [Root::Long(1)])),
            None
        );
    }

    #[test]
    fn perm_inversions_match_embedded_action() {
        for n in 1..=6 {
            for s in Perm::all(n) {
                let w = SignedPerm::from_perm(&s);
                assert_eq!(w.inversion_set(), s.inversions());
                assert_eq!(Perm::from_inversions(&s.inversions()), Some(s));
            }
        }
    }

    #[test]
    fn standard_form_examples() {
        let sf = SignedPerm::reflection(2, 1).standard_form();
        assert_eq!(sf.j_list, vec![1]);
        assert!(sf.sigma0.is_identity());

        let sf = SignedPerm::identity(3).standard_form();
        assert!(sf.j_list.is_empty());
        assert!(sf.sigma0.is_identity());

        let w = SignedPerm::from_parts(&p("(2,1)"), &[1, 2]);
        assert_eq!(w, sp("[-2,-1]"));
        let sf = w.standard_form();
        assert_eq!(sf.j_list, vec![2, 1]);
        assert_eq!(sf.sigma0, p("(2,1)"));
    }

    #[test]
    fn orderings_differ_when_sigma0_is_not_an_involution() {
        // σ0 = (2,3,1), negate values {1,2}: σ0(1)=2, σ0(2)=3, but
        // σ0^{-1}(1)=3, σ0^{-1}(2)=1.
        let w = SignedPerm::from_parts(&p("(2,3,1)"), &[1, 2]);
        assert_eq!(w.standard_form_with(SignOrdering::ByImage).j_list, [1, 2]);
        assert_eq!(
            w.standard_form_with(SignOrdering::ByPosition).j_list,
            [2, 1]
        );
    }

    #[test]
    fn standard_form_round_trip_and_uniqueness_of_inversion_sets() {
        for n in 1..=5 {
            let mut seen = std::collections::HashMap::new();
            for w in WeylGroup::new(n).unwrap().iter() {
                assert_eq!(w.standard_form().recompose(), w);
                assert_eq!(
                    w.standard_form_with(SignOrdering::ByPosition).recompose(),
                    w
                );
                assert!(seen.insert(w.inversion_set(), w).is_none());
            }
        }
    }

    #[test]
    fn action_respects_composition() {
        let g = WeylGroup::new(4).unwrap();
        let roots = crate::roots::positive_roots(4).unwrap();
        for u in g.iter() {
            for v in g.iter() {
                let uv = u.compose(&v);
                for &r in &roots {
                    let vr = v.act_on_root(r);
                    let mut uvr = u.act_on_root(vr.root);
                    if !vr.positive {
                        uvr.positive = !uvr.positive;
                    }
                    assert_eq!(uv.act_on_root(r), uvr);
                }
            }
            assert_eq!(u.compose(&u.inverse()), SignedPerm::identity(4));
        }
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for (k, s) in Perm::all(5).iter().enumerate() {
            assert_eq!(s.lex_rank(), k);
        }
    }

    #[test]
    fn parse_display() {
        assert_eq!(sp("[2,-1,3]").to_string(), "[2,-1,3]");
        assert_eq!(sp("[2,-1,3]").apply(2), -1);
        assert!("[1,1]".parse::<SignedPerm>().is_err());
        assert!("[1,-3]".parse::<SignedPerm>().is_err());
        assert!("(1,2".parse::<Perm>().is_err());
    }
}
