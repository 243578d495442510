//! Integer matrix realization of `sp(2n)` and the structure constants of its
//! positive nilradical.
//!
//! With `J = [[0, I], [-I, 0]]`:
//! `e_{e_i-e_j} = E_{i,j} - E_{n+j,n+i}`, `e_{e_i+e_j} = E_{i,n+j} + E_{j,n+i}`,
//! `e_{2e_i} = E_{i,n+i}`. The root vectors have pairwise disjoint supports,
//! which makes decomposition of a bracket into root vectors a lookup.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ideals::{
    enumerate_increasing, is_abelian_ideal_combinatorial, is_increasing, EXHAUSTIVE_ORACLE_RANK,
};
use crate::report::VerificationReport;
use crate::roots::{check_rank, dotted_sum, positive_roots, Root, RootSet};

/// Bumped whenever the realization (and hence any structure constant) changes.
pub const REALIZATION_VERSION: u32 = 1;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-based entry access, matching `E_{ij}` notation.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[(i - 1) * self.dim + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[(i - 1) * self.dim + (j - 1)] = v;
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: i64) {
        self.data[(i - 1) * self.dim + (j - 1)] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.dim);
        for i in 1..=self.dim {
            for j in 1..=self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = IntMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(IntMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.try_add(&other.scale(-1))
    }

    /// The symplectic form `[[0, I], [-I, 0]]` of size `2n`.
    pub fn symplectic_form(n: usize) -> IntMatrix {
        let mut j = IntMatrix::zeros(2 * n);
        for i in 1..=n {
            j.set(i, n + i, 1);
            j.set(n + i, i, -1);
        }
        j
    }

    /// `X^T J + J X = 0`.
    pub fn is_symplectic(&self) -> bool {
        let n = self.dim / 2;
        let j = Self::symplectic_form(n);
        let lhs = self.transpose().try_mul(&j).and_then(|a| {
            let b = j.try_mul(self)?;
            a.try_add(&b)
        });
        matches!(lhs, Ok(m) if m.is_zero())
    }

    /// `diag(h_1..h_n, -h_1..-h_n)` with a single 1 at position `k`.
    pub fn cartan_basis(n: usize, k: usize) -> IntMatrix {
        let mut h = IntMatrix::zeros(2 * n);
        h.set(k, k, 1);
        h.set(n + k, n + k, -1);
        h
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks(self.dim) {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

/// `E_{ij}` of size `dim`.
pub fn elementary(dim: usize, i: usize, j: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(dim);
    m.set(i, j, 1);
    m
}

/// Positions `(row, col, value)` of a root vector's nonzero entries.
fn support(n: usize, root: Root) -> Vec<(usize, usize, i64)> {
    match root {
        Root::Diff(i, j) => {
            let (i, j) = (i as usize, j as usize);
            vec![(i, j, 1), (n + j, n + i, -1)]
        }
        Root::Sum(i, j) => {
            let (i, j) = (i as usize, j as usize);
            vec![(i, n + j, 1), (j, n + i, 1)]
        }
        Root::Long(i) => vec![(i as usize, n + i as usize, 1)],
    }
}

pub fn root_vector(n: usize, root: Root) -> Result<IntMatrix> {
    check_rank(n)?;
    if !root.is_valid(n) {
        return Err(Error::Parse(format!(
            "{root} is not a positive root of rank {n}"
        )));
    }
    let mut m = IntMatrix::zeros(2 * n);
    for (i, j, v) in support(n, root) {
        m.set(i, j, v);
    }
    Ok(m)
}

/// `XY - YX`
pub fn bracket(x: &IntMatrix, y: &IntMatrix) -> Result<IntMatrix> {
    x.try_mul(y)?.try_sub(&y.try_mul(x)?)
}

/// Writes `m` as `Σ c_α e_α` over positive root vectors, or `None` when `m`
/// is not in the span of the positive root vectors.
pub fn decompose(n: usize, m: &IntMatrix) -> Option<Vec<(Root, i64)>> {
    let mut rest = m.clone();
    let mut out = Vec::new();
    for k in 0..n * n {
        let root = Root::from_index(n, k);
        let sup = support(n, root);
        let (i, j, v) = sup[0];
        let c = rest.get(i, j) * v;
        if c != 0 {
            for (i, j, v) in sup {
                rest.add_entry(i, j, -c * v);
            }
            out.push((root, c));
        }
    }
    rest.is_zero().then_some(out)
}

/// `[e_α, e_β] = c · e_γ` for every ordered pair of positive roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTable {
    rank: usize,
    /// Row-major over `(α, β)` canonical indices: `(γ index, c)`.
    entries: Vec<Option<(usize, i64)>>,
}

impl StructureTable {
    pub fn build(n: usize) -> Result<StructureTable> {
        let roots = positive_roots(n)?;
        let vectors: Vec<IntMatrix> = roots
            .iter()
            .map(|&r| root_vector(n, r))
            .collect::<Result<_>>()?;
        let count = roots.len();
        let mut entries = vec![None; count * count];
        for (a, &ra) in roots.iter().enumerate() {
            for (b, &rb) in roots.iter().enumerate() {
                let m = bracket(&vectors[a], &vectors[b])?;
                let terms = decompose(n, &m).ok_or_else(|| {
                    Error::Internal(format!("[{ra}, {rb}] leaves the nilradical"))
                })?;
                let expected = dotted_sum(ra, rb);
                match (terms.as_slice(), expected) {
                    ([], None) => {}
                    ([(g, c)], Some(sum)) if *g == sum => {
                        entries[a * count + b] = Some((g.index(n), *c));
                    }
                    _ => {
                        return Err(Error::Internal(format!(
                            "[{ra}, {rb}] = {terms:?} is not a multiple of the expected root vector"
                        )))
                    }
                }
            }
        }
        Ok(StructureTable { rank: n, entries })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root_count(&self) -> usize {
        self.rank * self.rank
    }

    /// Shape check for tables that did not come from [`StructureTable::build`].
    pub fn is_well_formed(&self) -> bool {
        let count = self.root_count();
        (1..=crate::MAX_RANK).contains(&self.rank)
            && self.entries.len() == count * count
            && self
                .entries
                .iter()
                .flatten()
                .all(|&(g, c)| g < count && c != 0)
    }

    /// `(γ, c)` with `[e_α, e_β] = c e_γ`, or `None` for a zero bracket.
    pub fn get(&self, a: Root, b: Root) -> Option<(Root, i64)> {
        let n = self.rank;
        self.get_index(a.index(n), b.index(n))
            .map(|(g, c)| (Root::from_index(n, g), c))
    }

    pub fn get_index(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        self.entries[a * self.root_count() + b]
    }

    /// Nonzero entries `(α, β, γ, c)` in canonical order of `(α, β)`.
    pub fn nonzero(&self) -> Vec<(Root, Root, Root, i64)> {
        let n = self.rank;
        let count = self.root_count();
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                e.map(|(g, c)| {
                    (
                        Root::from_index(n, k / count),
                        Root::from_index(n, k % count),
                        Root::from_index(n, g),
                        c,
                    )
                })
            })
            .collect()
    }

    /// `[[x, y], z]` as a sparse vector over root indices.
    fn double_bracket(&self, x: usize, y: usize, z: usize) -> Option<(usize, i64)> {
        let (g, c) = self.get_index(x, y)?;
        let (h, d) = self.get_index(g, z)?;
        Some((h, c * d))
    }

    /// Checks the Jacobi identity on every triple of positive roots.
    pub fn jacobi_violations(&self) -> Vec<(Root, Root, Root)> {
        let n = self.rank;
        let count = self.root_count();
        let mut bad = Vec::new();
        for x in 0..count {
            for y in 0..count {
                for z in 0..count {
                    let mut acc: Vec<(usize, i64)> = Vec::with_capacity(3);
                    for t in [
                        self.double_bracket(x, y, z),
                        self.double_bracket(y, z, x),
                        self.double_bracket(z, x, y),
                    ]
                    .into_iter()
                    .flatten()
                    {
                        match acc.iter_mut().find(|(g, _)| *g == t.0) {
                            Some(e) => e.1 += t.1,
                            None => acc.push(t),
                        }
                    }
                    if acc.iter().any(|&(_, c)| c != 0) {
                        bad.push((
                            Root::from_index(n, x),
                            Root::from_index(n, y),
                            Root::from_index(n, z),
                        ));
                    }
                }
            }
        }
        bad
    }
}

/// Checks that `span{e_α : α ∈ Ψ}` is an abelian ideal of the Borel
/// subalgebra. The Cartan part normalizes each root space, so the ideal
/// condition reduces to brackets with positive root vectors.
pub fn is_abelian_ideal_lie(table: &StructureTable, set: &RootSet) -> bool {
    let n = table.rank();
    for a in set.iter() {
        let ai = a.index(n);
        for b in 0..table.root_count() {
            if let Some((g, c)) = table.get_index(b, ai) {
                debug_assert!(c != 0);
                if !set.contains(Root::from_index(n, g)) {
                    return false;
                }
                if set.contains(Root::from_index(n, b)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Matrix-level abelian-ideal test against the combinatorial predicates.
///
/// Covers every subset of the long/sum roots up to
/// [`EXHAUSTIVE_ORACLE_RANK`] (seeded samples above it), then `samples`
/// seeded subsets of all positive roots: alternately uniform ones and
/// increasing subsets with one root toggled.
pub fn verify_lie_oracle(
    table: &StructureTable,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = table.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = RootSet::upper_part(n);
    let all = RootSet::all(n);
    let ideals = enumerate_increasing(n)?;
    let exhaustive = n <= EXHAUSTIVE_ORACLE_RANK;

    let upper_sets: Vec<RootSet> = if exhaustive {
        upper.subsets().collect()
    } else {
        (0..samples)
            .map(|_| upper.random_subset(&mut rng))
            .collect()
    };
    let mut random_sets = Vec::with_capacity(samples);
    for s in 0..samples {
        if s % 2 == 0 {
            random_sets.push(all.random_subset(&mut rng));
        } else {
            let base = *ideals[rng.random_range(0..ideals.len())].members();
            let r = Root::from_index(n, rng.random_range(0..n * n));
            let toggled = RootSet::from_bits(n, base.bits() ^ (1u128 << r.index(n)));
            random_sets.push(toggled);
        }
    }

    let upper_bad: Vec<String> = upper_sets
        .par_iter()
        .map(|s| {
            let lie = is_abelian_ideal_lie(table, s);
            let ok = lie == is_increasing(s)? && lie == is_abelian_ideal_combinatorial(s);
            Ok((!ok).then(|| format!("{s}: lie = {lie}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let random_verdicts: Vec<(bool, bool)> = random_sets
        .par_iter()
        .map(|s| {
            (
                is_abelian_ideal_lie(table, s),
                is_abelian_ideal_combinatorial(s),
            )
        })
        .collect();
    let random_bad: Vec<String> = random_sets
        .iter()
        .zip(&random_verdicts)
        .filter(|(_, (a, b))| a != b)
        .map(|(s, (a, _))| format!("{s}: lie = {a}"))
        .collect();
    let random_ideals = random_verdicts.iter().filter(|v| v.0).count();

    let mut report = VerificationReport::new(n);
    let jacobi = table.jacobi_violations();
    report.push(
        "lie.jacobi",
        "the structure constants satisfy the Jacobi identity",
        jacobi.is_empty(),
        json!({
            "violations": jacobi.len(),
            "examples": jacobi.iter().take(5).map(|(x, y, z)| format!("({x}, {y}, {z})")).collect::<Vec<_>>(),
        }),
    );
    report.push(
        "lie.upper_subsets",
        "span{e_α : α ∈ Ψ} is an abelian ideal of b iff Ψ is increasing",
        upper_bad.is_empty(),
        json!({
            "exhaustive": exhaustive,
            "subsets": upper_sets.len(),
            "discrepancies": upper_bad.len(),
            "examples": &upper_bad[..upper_bad.len().min(5)],
        }),
    );
    report.push(
        "lie.random_subsets",
        "matrix brackets and dotted sums agree on abelian ideals",
        random_bad.is_empty(),
        json!({
            "seed": seed,
            "subsets": random_sets.len(),
            "abelian_ideals": random_ideals,
            "discrepancies": random_bad.len(),
            "examples": &random_bad[..random_bad.len().min(5)],
        }),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_vector_examples() {
        let d12 = root_vector(2, Root::Diff(1, 2)).unwrap();
        let expected = elementary(4, 1, 2).try_sub(&elementary(4, 4, 3)).unwrap();
        assert_eq!(d12, expected);
        assert_eq!(root_vector(2, Root::Long(2)).unwrap(), elementary(4, 2, 4));
        assert_eq!(root_vector(1, Root::Long(1)).unwrap(), elementary(2, 1, 2));
        assert!(root_vector(2, Root::Long(3)).is_err());
    }

    #[test]
    fn root_vectors_are_symplectic_weight_vectors() {
        for n in 1..=4 {
            for r in positive_roots(n).unwrap() {
                let e = root_vector(n, r).unwrap();
                assert!(e.is_symplectic(), "{r}");
                let w = r.weight();
                for k in 1..=n {
                    let h = IntMatrix::cartan_basis(n, k);
                    assert_eq!(bracket(&h, &e).unwrap(), e.scale(w[k - 1] as i64));
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let d12 = root_vector(2, Root::Diff(1, 2)).unwrap();
        let l1 = root_vector(2, Root::Long(1)).unwrap();
        let l2 = root_vector(2, Root::Long(2)).unwrap();
        let s12 = root_vector(2, Root::Sum(1, 2)).unwrap();
        assert_eq!(bracket(&d12, &l2).unwrap(), s12);
        assert!(bracket(&d12, &d12).unwrap().is_zero());
        assert!(bracket(&l1, &l2).unwrap().is_zero());
        assert!(matches!(
            bracket(&d12, &IntMatrix::zeros(2)),
            Err(Error::DimensionMismatch(4, 2))
        ));
    }

    #[test]
    fn table_examples() {
        let t = StructureTable::build(2).unwrap();
        assert_eq!(
            t.get(Root::Diff(1, 2), Root::Long(2)),
            Some((Root::Sum(1, 2), 1))
        );
        assert_eq!(t.get(Root::Long(1), Root::Long(2)), None);
        for n in 1..=4 {
            let t = StructureTable::build(n).unwrap();
            for r in positive_roots(n).unwrap() {
                assert_eq!(t.get(r, r), None);
            }
        }
    }

    #[test]
    fn antisymmetry_and_jacobi() {
        for n in 1..=4 {
            let t = StructureTable::build(n).unwrap();
            let roots = positive_roots(n).unwrap();
            for &a in &roots {
                for &b in &roots {
                    let ab = t.get(a, b);
                    let ba = t.get(b, a).map(|(g, c)| (g, -c));
                    assert_eq!(ab, ba);
                }
            }
            assert!(t.jacobi_violations().is_empty());
        }
    }

    #[test]
    fn lie_ideal_examples() {
        let t = StructureTable::build(2).unwrap();
        let s = |rs: &[Root]| RootSet::from_roots(2, rs.iter().copied());
        assert!(is_abelian_ideal_lie(
            &t,
            &s(&[Root::Long(1), Root::Sum(1, 2)])
        ));
        assert!(!is_abelian_ideal_lie(&t, &s(&[Root::Diff(1, 2)])));
        assert!(is_abelian_ideal_lie(&t, &s(&[])));
    }
}
