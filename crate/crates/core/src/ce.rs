//! Chevalley–Eilenberg cochains of the positive nilradical with trivial
//! coefficients.
//!
//! A monomial `f_S` is a bitmask over canonical root indices; its factors are
//! always taken in canonical order. On generators
//! `d f_γ = -Σ_{α<β, α+β=γ} c_{αβ} f_α ∧ f_β`, extended as an antiderivation.
//! The complex splits into blocks by total weight, and ranks are computed
//! blockwise with exact integer elimination.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::correspondence::{inverse, l_support};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_increasing, IncreasingSet};
use crate::liealg::StructureTable;
use crate::linalg;
use crate::poincare::weyl_poincare;
use crate::report::VerificationReport;
use crate::roots::{check_rank, Root, RootSet, Weight};
use crate::weyl::{Perm, SignedPerm, WeylGroup};
use crate::MAX_RANK;

/// Default largest rank for cohomology computations.
pub const DEFAULT_COHOMOLOGY_CAP: usize = 3;
/// Largest rank reachable by opting in.
pub const MAX_COHOMOLOGY_RANK: usize = 4;

pub fn check_cohomology_rank(n: usize, cap: usize) -> Result<()> {
    check_rank(n)?;
    let cap = cap.min(MAX_COHOMOLOGY_RANK);
    if n > cap {
        return Err(Error::RankAboveCap {
            rank: n,
            cap,
            what: "cohomology",
        });
    }
    Ok(())
}

/// Sign of `f_S ∧ f_x` moved into canonical order, for `x ∉ S`.
fn insertion_sign(set: u128, x: usize) -> i64 {
    let above = (set >> x >> 1).count_ones();
    if above.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn weight_of(n: usize, mask: u128) -> Weight {
    let mut w = [0i8; MAX_RANK];
    let mut bits = mask;
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        Root::from_index(n, k).add_to(&mut w, 1);
    }
    w
}

/// A homogeneous cochain with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    rank: usize,
    degree: usize,
    terms: BTreeMap<u128, BigRational>,
}

impl Cochain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Cochain {
            rank: n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `f_S` with coefficient 1.
    pub fn monomial(set: &RootSet) -> Self {
        let mut c = Self::zero(set.rank(), set.len());
        c.terms.insert(set.bits(), BigRational::one());
        c
    }

    /// `f_{r_1} ∧ ... ∧ f_{r_p}` in the given factor order, rewritten in
    /// canonical order. A repeated factor gives zero.
    pub fn wedge(n: usize, factors: &[Root]) -> Self {
        let mut mask = 0u128;
        let mut sign = 1i64;
        for r in factors {
            let k = r.index(n);
            if mask & (1 << k) != 0 {
                return Self::zero(n, factors.len());
            }
            sign *= insertion_sign(mask, k);
            mask |= 1 << k;
        }
        let mut c = Self::zero(n, factors.len());
        c.terms.insert(mask, BigRational::from_integer(sign.into()));
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (RootSet, &BigRational)> {
        self.terms
            .iter()
            .map(|(&m, c)| (RootSet::from_bits(self.rank, m), c))
    }

    pub fn coefficient(&self, set: &RootSet) -> BigRational {
        self.terms
            .get(&set.bits())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, set: &RootSet, c: BigRational) {
        assert_eq!(set.len(), self.degree, "term degree mismatch");
        self.add_mask(set.bits(), c);
    }

    fn add_mask(&mut self, mask: u128, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Cochain {
        let mut out = Cochain::zero(self.rank, self.degree);
        for (&m, v) in &self.terms {
            out.add_mask(m, v * c);
        }
        out
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (&m, v) in &other.terms {
            out.add_mask(m, v.clone());
        }
        out
    }

    /// `Some(c)` with `self = c · other`, `c ≠ 0`, when the two span the
    /// same line.
    pub fn ratio_to(&self, other: &Cochain) -> Option<BigRational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m, v) = self.terms.iter().next()?;
        let c = v / other.terms.get(m)?;
        (self == &other.scale(&c)).then_some(c)
    }

    /// Distinct total weights of the terms.
    pub fn weights(&self) -> Vec<Weight> {
        let mut ws: Vec<Weight> = self
            .terms
            .keys()
            .map(|&m| weight_of(self.rank, m))
            .collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }
}

/// The differential, precomputed from a structure table.
#[derive(Clone, Debug)]
pub struct Differential {
    rank: usize,
    /// For each root `γ`: the pairs `(α, β, c)` with `α < β` and
    /// `[e_α, e_β] = c e_γ`.
    decompositions: Vec<Vec<(usize, usize, i64)>>,
}

impl Differential {
    pub fn new(table: &StructureTable) -> Self {
        let count = table.root_count();
        let mut decompositions = vec![Vec::new(); count];
        for a in 0..count {
            for b in a + 1..count {
                if let Some((g, c)) = table.get_index(a, b) {
                    decompositions[g].push((a, b, c));
                }
            }
        }
        Differential {
            rank: table.rank(),
            decompositions,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `d f_S` as integer terms, unsorted and possibly with repeats.
    pub fn apply_monomial(&self, mask: u128, out: &mut Vec<(u128, i64)>) {
        let mut bits = mask;
        let mut pos = 0u32;
        while bits != 0 {
            let g = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = mask & !(1u128 << g);
            let outer = if pos.is_multiple_of(2) { 1 } else { -1 };
            for &(a, b, c) in &self.decompositions[g] {
                if rest & (1 << a) != 0 || rest & (1 << b) != 0 {
                    continue;
                }
                let sign = insertion_sign(rest, a) * insertion_sign(rest, b);
                out.push((rest | (1 << a) | (1 << b), -c * outer * sign));
            }
            pos += 1;
        }
    }

    pub fn apply(&self, c: &Cochain) -> Cochain {
        let mut out = Cochain::zero(c.rank, c.degree + 1);
        let mut buf = Vec::new();
        for (&m, v) in &c.terms {
            buf.clear();
            self.apply_monomial(m, &mut buf);
            for &(m2, k) in &buf {
                out.add_mask(m2, v * BigRational::from_integer(k.into()));
            }
        }
        out
    }

    /// `d f_γ`
    pub fn generator(&self, root: Root) -> Cochain {
        self.apply(&Cochain::monomial(&RootSet::from_roots(self.rank, [root])))
    }

    /// `d f_S` as a sparse vector with repeats combined, zero entries dropped.
    fn monomial_image(&self, mask: u128) -> Vec<(u128, i64)> {
        let mut buf = Vec::new();
        self.apply_monomial(mask, &mut buf);
        buf.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u128, i64)> = Vec::with_capacity(buf.len());
        for (m, c) in buf {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        out
    }
}

/// Convenience wrapper building the differential on the fly.
pub fn differential(table: &StructureTable, c: &Cochain) -> Cochain {
    Differential::new(table).apply(c)
}

/// One weight space of the exterior algebra.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub weight: Vec<i8>,
    /// Monomials by degree, each list ascending.
    pub basis: Vec<Vec<u128>>,
}

impl WeightBlock {
    /// The matrix of `d` from degree `p` to `p + 1`, one row per source
    /// monomial.
    pub fn differential_rows(&self, d: &Differential, p: usize) -> Vec<Vec<i64>> {
        let target = self.basis.get(p + 1).map(Vec::as_slice).unwrap_or(&[]);
        self.basis[p]
            .iter()
            .map(|&m| {
                let mut row = vec![0i64; target.len()];
                for (m2, c) in d.monomial_image(m) {
                    let col = target
                        .binary_search(&m2)
                        .expect("d preserves weight and raises degree by one");
                    row[col] += c;
                }
                row
            })
            .collect()
    }

    pub fn dim(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, Vec::len)
    }
}

/// The exterior algebra on the dual of the nilradical, split by weight.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    rank: usize,
    differential: Differential,
    blocks: Vec<WeightBlock>,
}

impl ChainComplex {
    pub fn build(table: &StructureTable, cap: usize) -> Result<ChainComplex> {
        let n = table.rank();
        check_cohomology_rank(n, cap)?;
        let roots = n * n;
        let mut index: HashMap<Weight, usize> = HashMap::new();
        let mut blocks: Vec<WeightBlock> = Vec::new();
        for mask in 0u128..(1u128 << roots) {
            let w = weight_of(n, mask);
            let b = *index.entry(w).or_insert_with(|| {
                blocks.push(WeightBlock {
                    weight: w[..n].to_vec(),
                    basis: vec![Vec::new(); roots + 1],
                });
                blocks.len() - 1
            });
            blocks[b].basis[mask.count_ones() as usize].push(mask);
        }
        blocks.sort_by(|a, b| a.weight.cmp(&b.weight));
        Ok(ChainComplex {
            rank: n,
            differential: Differential::new(table),
            blocks,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    pub fn differential(&self) -> &Differential {
        &self.differential
    }

    pub fn block_of(&self, mask: u128) -> Option<&WeightBlock> {
        let w = weight_of(self.rank, mask);
        self.blocks
            .binary_search_by(|b| b.weight.as_slice().cmp(&w[..self.rank]))
            .ok()
            .map(|i| &self.blocks[i])
    }

    /// Ranks of every blockwise differential, computed in parallel.
    pub fn summarize(&self) -> ComplexSummary {
        let top = self.rank * self.rank;
        let blocks = self
            .blocks
            .par_iter()
            .map(|b| {
                let dims: Vec<usize> = (0..=top).map(|p| b.dim(p)).collect();
                let ranks: Vec<usize> = (0..=top)
                    .map(|p| {
                        if p == top || b.dim(p) == 0 || b.dim(p + 1) == 0 {
                            0
                        } else {
                            linalg::rank(&b.differential_rows(&self.differential, p))
                        }
                    })
                    .collect();
                BlockSummary {
                    weight: b.weight.clone(),
                    dims,
                    ranks,
                }
            })
            .collect();
        ComplexSummary {
            rank: self.rank,
            blocks,
        }
    }

    /// `d ∘ d` on every generator and a weight check on each `d f_γ`.
    pub fn check_generators(&self) -> (Vec<String>, Vec<String>) {
        let n = self.rank;
        let d = &self.differential;
        let mut d2 = Vec::new();
        let mut weight = Vec::new();
        for k in 0..n * n {
            let r = Root::from_index(n, k);
            let df = d.generator(r);
            if !d.apply(&df).is_zero() {
                d2.push(r.to_string());
            }
            if df.weights().iter().any(|w| *w != r.weight()) {
                weight.push(r.to_string());
            }
        }
        (d2, weight)
    }
}

/// Dimensions and differential ranks of one weight block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub weight: Vec<i8>,
    pub dims: Vec<usize>,
    /// `ranks[p]` is the rank of `d: C^p -> C^{p+1}` on this block.
    pub ranks: Vec<usize>,
}

impl BlockSummary {
    pub fn betti(&self) -> Vec<u64> {
        (0..self.dims.len())
            .map(|p| {
                let before = if p == 0 { 0 } else { self.ranks[p - 1] };
                (self.dims[p] - self.ranks[p] - before) as u64
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub rank: usize,
    pub blocks: Vec<BlockSummary>,
}

impl ComplexSummary {
    pub fn betti(&self) -> Vec<u64> {
        let top = self.rank * self.rank;
        let mut out = vec![0u64; top + 1];
        for b in &self.blocks {
            for (o, v) in out.iter_mut().zip(b.betti()) {
                *o += v;
            }
        }
        out
    }

    /// Blocks with nonzero cohomology.
    pub fn cohomology_blocks(&self) -> impl Iterator<Item = &BlockSummary> {
        self.blocks
            .iter()
            .filter(|b| b.betti().iter().any(|&v| v > 0))
    }

    pub fn block(&self, weight: &[i8]) -> Option<&BlockSummary> {
        self.blocks
            .binary_search_by(|b| b.weight.as_slice().cmp(weight))
            .ok()
            .map(|i| &self.blocks[i])
    }
}

/// Betti numbers `b_0, ..., b_{n^2}` of the nilradical.
pub fn betti_numbers(n: usize) -> Result<Vec<u64>> {
    betti_numbers_with_cap(n, DEFAULT_COHOMOLOGY_CAP)
}

pub fn betti_numbers_with_cap(n: usize, cap: usize) -> Result<Vec<u64>> {
    check_cohomology_rank(n, cap)?;
    let table = StructureTable::build(n)?;
    Ok(ChainComplex::build(&table, cap)?.summarize().betti())
}

/// `f_{Φ_w}` with coefficient 1.
pub fn monomial_cocycle(w: &SignedPerm) -> Cochain {
    Cochain::monomial(&w.inversion_set())
}

/// `(∧_{α ∈ Φ_σ} f_α) ∧ σσ_l(∧_{α ∈ Ψ} f_α)`, factors of each part in
/// canonical order before relabeling.
pub fn l_cochain(sigma: &Perm, psi: &IncreasingSet) -> Result<Cochain> {
    let n = sigma.rank();
    // validates ranks and positivity of the relabeled part
    l_support(sigma, psi)?;
    let relabel = sigma.compose(&Perm::longest(n));
    let mut factors: Vec<Root> = sigma.inversions().iter().collect();
    factors.extend(psi.members().iter().map(|r| relabel.relabel(r).root));
    Ok(Cochain::wedge(n, &factors))
}

/// Random homogeneous cochains and the `d ∘ d = 0` check on them.
pub fn d_squared_failures(d: &Differential, samples: usize, seed: u64) -> Vec<String> {
    let n = d.rank();
    let roots = n * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for s in 0..samples {
        let degree = rng.random_range(0..=roots.saturating_sub(2));
        let mut c = Cochain::zero(n, degree);
        let terms = rng.random_range(1..=4);
        for _ in 0..terms {
            let mut mask = 0u128;
            while (mask.count_ones() as usize) < degree {
                mask |= 1 << rng.random_range(0..roots);
            }
            let num: i64 = rng.random_range(-5..=5);
            let den: i64 = rng.random_range(1..=4);
            c.add_mask(mask, BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
        if !d.apply(&d.apply(&c)).is_zero() {
            failures.push(format!("sample {s} (degree {degree})"));
        }
    }
    failures
}

/// `d ∘ d = 0` on every generator and on `samples` seeded random cochains,
/// plus weight preservation on generators.
pub fn verify_d_squared(
    table: &StructureTable,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = table.rank();
    let d = Differential::new(table);
    let mut d2 = Vec::new();
    let mut weight = Vec::new();
    for k in 0..n * n {
        let r = Root::from_index(n, k);
        let df = d.generator(r);
        if !d.apply(&df).is_zero() {
            d2.push(r.to_string());
        }
        if df.weights().iter().any(|w| *w != r.weight()) {
            weight.push(r.to_string());
        }
    }
    let sampled = d_squared_failures(&d, samples, seed);
    let mut report = VerificationReport::new(n);
    report.push(
        "ce.d_squared",
        "d ∘ d = 0",
        d2.is_empty() && sampled.is_empty(),
        json!({
            "generators": n * n,
            "generator_failures": d2,
            "seed": seed,
            "samples": samples,
            "sample_failures": sampled,
        }),
    );
    report.push(
        "ce.weight",
        "d preserves the weight grading",
        weight.is_empty(),
        json!({ "generators": n * n, "failures": weight }),
    );
    Ok(report)
}

/// Betti numbers of the complex against the Poincaré polynomial of `W`.
pub fn verify_betti(summary: &ComplexSummary) -> Result<VerificationReport> {
    let n = summary.rank;
    let betti = summary.betti();
    let expected = weyl_poincare(n)?;
    let mut expected_coeffs: Vec<u64> = expected.coeffs().iter().map(|&c| c as u64).collect();
    expected_coeffs.resize(betti.len(), 0);
    let mut report = VerificationReport::new(n);
    report.push(
        "ce.betti",
        "dim H^p(n) = #{w ∈ W : l(w) = p}",
        betti == expected_coeffs,
        json!({ "betti": betti, "expected": expected.coeffs() }),
    );
    report.set_data("betti", json!(betti));
    Ok(report)
}

/// Closedness, Betti counts and linear independence modulo exact cochains
/// for the monomials `f_{Φ_w}`, and the identification of each `L(σ, Ψ)`
/// with the corresponding monomial.
pub fn verify_main_theorem(n: usize) -> Result<VerificationReport> {
    verify_main_theorem_with_cap(n, DEFAULT_COHOMOLOGY_CAP)
}

pub fn verify_main_theorem_with_cap(n: usize, cap: usize) -> Result<VerificationReport> {
    check_cohomology_rank(n, cap)?;
    let table = StructureTable::build(n)?;
    let complex = ChainComplex::build(&table, cap)?;
    let summary = complex.summarize();
    verify_main_theorem_on(&complex, &summary)
}

/// The same checks on a prebuilt complex and its (possibly cached) summary.
pub fn verify_main_theorem_on(
    complex: &ChainComplex,
    summary: &ComplexSummary,
) -> Result<VerificationReport> {
    let n = complex.rank();
    let top = n * n;
    let betti = summary.betti();
    let group = WeylGroup::with_cap(n, MAX_COHOMOLOGY_RANK)?;
    let d = complex.differential();

    let mut report = VerificationReport::new(n);

    let mut not_closed = Vec::new();
    let mut per_degree = vec![0u64; top + 1];
    let mut by_weight: BTreeMap<Vec<i8>, Vec<u128>> = BTreeMap::new();
    for w in group.iter() {
        let phi = w.inversion_set();
        per_degree[phi.len()] += 1;
        if !d.apply(&Cochain::monomial(&phi)).is_zero() {
            not_closed.push(w.to_string());
        }
        by_weight
            .entry(weight_of(n, phi.bits())[..n].to_vec())
            .or_default()
            .push(phi.bits());
    }
    report.push(
        "classes.closed",
        "every f_{Φ_w} is a cocycle",
        not_closed.is_empty(),
        json!({ "monomials": group.order(), "not_closed": not_closed }),
    );
    report.push(
        "classes.count",
        "#{w : |Φ_w| = p} = dim H^p",
        per_degree == betti,
        json!({ "classes_per_degree": per_degree, "betti": betti }),
    );

    // Linear independence modulo im d, block by block.
    let shared_weights = by_weight.values().filter(|v| v.len() > 1).count();
    let mut deficits = Vec::new();
    let mut independent = vec![0u64; top + 1];
    for (weight, masks) in &by_weight {
        let block = complex
            .block_of(masks[0])
            .ok_or_else(|| Error::Internal(format!("no weight block for {weight:?}")))?;
        let bsum = summary
            .block(weight)
            .ok_or_else(|| Error::Internal(format!("no summary for {weight:?}")))?;
        let mut by_degree: BTreeMap<usize, Vec<u128>> = BTreeMap::new();
        for &m in masks {
            by_degree
                .entry(m.count_ones() as usize)
                .or_default()
                .push(m);
        }
        for (p, ms) in by_degree {
            let target = &block.basis[p];
            let mut rows = if p == 0 {
                Vec::new()
            } else {
                block.differential_rows(d, p - 1)
            };
            for &m in &ms {
                let mut row = vec![0i64; target.len()];
                let col = target.binary_search(&m).map_err(|_| {
                    Error::Internal("monomial missing from its weight block".to_string())
                })?;
                row[col] = 1;
                rows.push(row);
            }
            let exact = if p == 0 { 0 } else { bsum.ranks[p - 1] };
            let got = linalg::rank(&rows);
            if got == exact + ms.len() {
                independent[p] += ms.len() as u64;
            } else {
                deficits.push(json!({ "weight": weight, "degree": p, "classes": ms.len(), "rank_gain": got - exact }));
            }
        }
    }
    report.push(
        "classes.basis",
        "the classes [f_{Φ_w}] are linearly independent in cohomology",
        deficits.is_empty() && independent == betti,
        json!({ "independent_per_degree": independent, "deficits": deficits }),
    );

    let mut mismatched = Vec::new();
    let mut signs = [0u64; 2];
    let ideals = enumerate_increasing(n)?;
    for sigma in group.perms() {
        for psi in &ideals {
            let l = l_cochain(sigma, psi)?;
            let w = inverse(sigma, psi)?;
            let m = monomial_cocycle(&w);
            match l.ratio_to(&m) {
                Some(c) if c == BigRational::one() => signs[0] += 1,
                Some(c) if c == -BigRational::one() => signs[1] += 1,
                _ => mismatched.push(format!("({sigma}, {psi}) vs {w}")),
            }
        }
    }
    report.push(
        "classes.l_cochains",
        "L(σ, I) spans the same line as f_{Φ_w} for the matching w",
        mismatched.is_empty(),
        json!({ "plus": signs[0], "minus": signs[1], "mismatched": mismatched }),
    );
    report.set_data("betti", json!(betti));
    report.set_data("weights_shared_by_classes", json!(shared_weights));
    Ok(report)
}
