//! Abelian ideals of the Borel subalgebra in combinatorial form: up-sets of
//! the long/sum roots under `precedes`.
//!
//! An up-set is determined by its boundary profile. Row `i` holds the roots
//! `e_i + e_j` for `i <= j <= b_i`; the first `k` rows are nonempty and
//! satisfy `n >= b_1 >= ... >= b_k >= k`, later rows are empty
//! (encoded as `b_i = i - 1`).

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::poincare::{ideal_generating, IntPolynomial};
use crate::report::VerificationReport;
use crate::roots::{check_rank, dotted_sum, precedes, Root, RootSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncreasingSet {
    members: RootSet,
    profile: Vec<u8>,
}

impl IncreasingSet {
    pub fn empty(n: usize) -> Self {
        IncreasingSet {
            members: RootSet::empty(n),
            profile: (0..n as u8).collect(),
        }
    }

    /// Builds the set from a boundary profile, validating it.
    pub fn from_profile(n: usize, profile: &[u8]) -> Result<Self> {
        check_rank(n)?;
        let bad = || Error::NotIncreasing(format!("profile {profile:?}"));
        if profile.len() != n {
            return Err(bad());
        }
        let k = profile
            .iter()
            .enumerate()
            .take_while(|(i, &b)| b as usize > *i)
            .count();
        for (i, &b) in profile.iter().enumerate() {
            let row = i + 1;
            if i < k {
                if b as usize > n || (b as usize) < k || (i > 0 && b > profile[i - 1]) {
                    return Err(bad());
                }
            } else if b as usize != row - 1 {
                return Err(bad());
            }
        }
        let mut members = RootSet::empty(n);
        for (i, &b) in profile.iter().enumerate().take(k) {
            let row = (i + 1) as u8;
            for j in row..=b {
                members.insert(Root::plus(row, j));
            }
        }
        Ok(IncreasingSet {
            members,
            profile: profile.to_vec(),
        })
    }

    /// Validates an arbitrary root set via its profile.
    pub fn try_from_roots(set: &RootSet) -> Result<Self> {
        let n = set.rank();
        if !set.is_subset(&RootSet::upper_part(n)) {
            return Err(Error::NotIncreasing(set.to_string()));
        }
        let profile: Vec<u8> = (1..=n as u8)
            .map(|i| {
                (i..=n as u8)
                    .take_while(|&j| set.contains(Root::plus(i, j)))
                    .last()
                    .unwrap_or(i - 1)
            })
            .collect();
        let candidate =
            Self::from_profile(n, &profile).map_err(|_| Error::NotIncreasing(set.to_string()))?;
        if candidate.members == *set {
            Ok(candidate)
        } else {
            Err(Error::NotIncreasing(set.to_string()))
        }
    }

    pub fn rank(&self) -> usize {
        self.members.rank()
    }

    pub fn members(&self) -> &RootSet {
        &self.members
    }

    pub fn profile(&self) -> &[u8] {
        &self.profile
    }

    /// Number of nonempty rows, which equals the number of long roots.
    pub fn nonempty_rows(&self) -> usize {
        self.profile
            .iter()
            .enumerate()
            .take_while(|(i, &b)| b as usize > *i)
            .count()
    }

    /// `max{m : e_t + e_m ∈ Ψ}` for a nonempty row `t`.
    pub fn row_end(&self, t: usize) -> Option<usize> {
        let b = self.profile[t - 1] as usize;
        (b >= t).then_some(b)
    }

    /// Dimension of the corresponding ideal.
    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

impl fmt::Debug for IncreasingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IncreasingSet{}", self.members)
    }
}

impl fmt::Display for IncreasingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.members.fmt(f)
    }
}

impl Serialize for IncreasingSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

/// Every up-set of rank `n`, ordered by number of nonempty rows, then by
/// profile lexicographically. Yields `2^n` sets.
pub fn enumerate_increasing(n: usize) -> Result<Vec<IncreasingSet>> {
    check_rank(n)?;
    let mut out = Vec::with_capacity(1 << n);
    let mut profile: Vec<u8> = (0..n as u8).collect();
    for k in 0..=n {
        fill_rows(n, k, 0, n as u8, &mut profile, &mut out);
    }
    Ok(out)
}

fn fill_rows(
    n: usize,
    k: usize,
    row: usize,
    upper: u8,
    profile: &mut Vec<u8>,
    out: &mut Vec<IncreasingSet>,
) {
    if row == k {
        let set = IncreasingSet::from_profile(n, profile).expect("generated profile is valid");
        out.push(set);
        return;
    }
    for b in k as u8..=upper {
        profile[row] = b;
        fill_rows(n, k, row + 1, b, profile, out);
    }
    profile[row] = row as u8;
}

/// Number of up-sets, counted from profiles without materializing roots.
pub fn count_increasing(n: usize) -> Result<u64> {
    check_rank(n)?;
    // non-increasing sequences of length k with values in [k, n]
    Ok((0..=n as u64).map(|k| binomial(n as u64, k)).sum())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Brute-force up-set test on the long/sum roots.
pub fn is_increasing(set: &RootSet) -> Result<bool> {
    let n = set.rank();
    let upper = RootSet::upper_part(n);
    for x in set.iter() {
        if x.is_diff() {
            return Err(Error::NotInUpperPart(x.to_string()));
        }
    }
    for x in set.iter() {
        for y in upper.iter() {
            if precedes(x, y)? && !set.contains(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The dotted-sum conditions: `Ψ ∔ Φ+ ⊆ Ψ` and `Ψ ∔ Ψ = ∅`.
/// Accepts any subset of the positive roots.
pub fn is_abelian_ideal_combinatorial(set: &RootSet) -> bool {
    let all = RootSet::all(set.rank());
    for a in set.iter() {
        for b in all.iter() {
            if let Some(s) = dotted_sum(a, b) {
                if !set.contains(s) || set.contains(b) {
                    return false;
                }
            }
        }
    }
    true
}

/// Histogram of ideal dimensions as a polynomial in `t`.
pub fn dimension_histogram(n: usize) -> Result<IntPolynomial> {
    Ok(IntPolynomial::from_histogram(
        enumerate_increasing(n)?.iter().map(IncreasingSet::dim),
    ))
}

/// Largest rank at which the predicate comparison scans every subset.
pub const EXHAUSTIVE_ORACLE_RANK: usize = 5;

/// Count of increasing subsets and their dimension histogram against the
/// closed forms `2^n` and `∏ (1 + t^i)`.
pub fn verify_ideals(n: usize) -> Result<VerificationReport> {
    let ideals = enumerate_increasing(n)?;
    let histogram = IntPolynomial::from_histogram(ideals.iter().map(IncreasingSet::dim));
    let expected = ideal_generating(n)?;
    let mut report = VerificationReport::new(n);
    report.push(
        "ideals.count",
        "the number of abelian ideals of b is 2^n",
        ideals.len() as u64 == 1u64 << n && count_increasing(n)? == 1u64 << n,
        json!({ "enumerated": ideals.len(), "expected": 1u64 << n }),
    );
    report.push(
        "ideals.histogram",
        "Σ_I t^{dim I} = ∏_{i=1}^n (1 + t^i)",
        histogram == expected,
        json!({ "enumerated": histogram.coeffs(), "expected": expected.coeffs() }),
    );
    report.set_data("ideal_histogram", json!(histogram.coeffs()));
    Ok(report)
}

/// `is_increasing` against the dotted-sum characterization of abelian
/// ideals on subsets of the long/sum roots: every subset up to
/// [`EXHAUSTIVE_ORACLE_RANK`], otherwise `samples` seeded random subsets plus
/// every enumerated increasing subset.
pub fn verify_oracle(n: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    check_rank(n)?;
    let upper = RootSet::upper_part(n);
    let exhaustive = n <= EXHAUSTIVE_ORACLE_RANK;
    let subsets: Vec<RootSet> = if exhaustive {
        upper.subsets().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<RootSet> = (0..samples)
            .map(|_| upper.random_subset(&mut rng))
            .collect();
        v.extend(enumerate_increasing(n)?.iter().map(|s| *s.members()));
        v
    };
    let verdicts: Vec<(bool, bool)> = subsets
        .par_iter()
        .map(|s| Ok((is_increasing(s)?, is_abelian_ideal_combinatorial(s))))
        .collect::<Result<_>>()?;
    let positives = verdicts.iter().filter(|v| v.0).count();
    let discrepancies: Vec<String> = subsets
        .iter()
        .zip(&verdicts)
        .filter(|(_, (a, b))| a != b)
        .map(|(s, (a, _))| format!("{s}: increasing = {a}"))
        .collect();
    let count_ok = !exhaustive || positives as u64 == 1u64 << n;
    let mut report = VerificationReport::new(n);
    report.push(
        "ideals.oracle",
        "Ψ ⊆ Φ¹₊ is increasing iff Ψ ∔ Φ₊ ⊆ Ψ and Ψ ∔ Ψ = ∅",
        discrepancies.is_empty() && count_ok,
        json!({
            "exhaustive": exhaustive,
            "subsets": subsets.len(),
            "increasing": positives,
            "discrepancies": discrepancies.len(),
            "examples": &discrepancies[..discrepancies.len().min(5)],
        }),
    );
    Ok(report)
}
