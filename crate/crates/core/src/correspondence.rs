//! The bijection between the hyperoctahedral group and `S_n × {up-sets}`.
//!
//! `η(w)` is the permutation whose inversion set is `Φ_w ∩ Φ⁰₊`, and
//! `ξ(w) = σ_l η(w)^{-1} (Φ_w ∩ Φ¹₊)`. Both are computed from their defining
//! properties; the closed formulas in terms of the standard form are kept
//! as cross-checks and their agreement is reported, never assumed.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideals::{enumerate_increasing, IncreasingSet};
use crate::report::VerificationReport;
use crate::roots::{Root, RootSet};
use crate::weyl::{Perm, SignOrdering, SignedPerm, StandardForm, WeylGroup, DEFAULT_GROUP_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CorrespondencePair {
    pub eta: Perm,
    pub xi: IncreasingSet,
}

/// `η(w)`. Fails only if `Φ_w ∩ Φ⁰₊` is not the inversion set of a
/// permutation, which would be an internal inconsistency.
pub fn eta(w: &SignedPerm) -> Result<Perm> {
    eta_from_inversions(w, &w.inversion_set())
}

fn eta_from_inversions(w: &SignedPerm, phi_w: &RootSet) -> Result<Perm> {
    let lower = phi_w.intersection(&RootSet::diff_part(w.rank()));
    Perm::from_inversions(&lower).ok_or_else(|| {
        Error::Internal(format!(
            "{w}: {lower} is not the inversion set of a permutation"
        ))
    })
}

/// Closed form for `η`: drop the negated values `j_1..j_k` from the image
/// sequence of `σ0` and append `j_k, ..., j_1`.
pub fn eta_formula(sf: &StandardForm) -> Perm {
    let mut seq: Vec<u8> = sf
        .sigma0
        .images()
        .iter()
        .copied()
        .filter(|v| !sf.j_list.contains(v))
        .collect();
    seq.extend(sf.j_list.iter().rev());
    Perm::from_images(&seq).expect("reordering a permutation gives a permutation")
}

/// `ξ(w)`. Fails only if the result is not an up-set.
pub fn xi(w: &SignedPerm) -> Result<IncreasingSet> {
    let phi_w = w.inversion_set();
    let eta = eta_from_inversions(w, &phi_w)?;
    xi_from_parts(w, &phi_w, &eta)
}

fn xi_from_parts(w: &SignedPerm, phi_w: &RootSet, eta: &Perm) -> Result<IncreasingSet> {
    let n = w.rank();
    let upper = phi_w.intersection(&RootSet::upper_part(n));
    let relabel = Perm::longest(n).compose(&eta.inverse());
    let image = relabel.relabel_set(&upper)?;
    IncreasingSet::try_from_roots(&image)
        .map_err(|_| Error::Internal(format!("{w}: ξ = {image} is not an up-set")))
}

/// Readings of the row bound in the closed formula for `ξ`:
/// `ξ(w) = {e_i + e_j : 1 <= i <= k, i <= j <= bound(i)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XiBound {
    /// `n + 1 - σ0^{-1}(j_i)`
    JIndexed,
    /// `n + 1 - σ0^{-1}(i)`
    Literal,
    /// `n + i - σ0^{-1}(j_i)`
    Shifted,
}

impl XiBound {
    pub const ALL: [XiBound; 3] = [XiBound::JIndexed, XiBound::Literal, XiBound::Shifted];

    pub fn name(&self) -> &'static str {
        match self {
            XiBound::JIndexed => "n+1-pos(j_i)",
            XiBound::Literal => "n+1-pos(i)",
            XiBound::Shifted => "n+i-pos(j_i)",
        }
    }
}

/// Closed form for `ξ` under the default `JIndexed` reading.
pub fn xi_formula(sf: &StandardForm) -> RootSet {
    xi_formula_with(sf, XiBound::JIndexed)
}

pub fn xi_formula_with(sf: &StandardForm, bound: XiBound) -> RootSet {
    let n = sf.sigma0.rank();
    let inv = sf.sigma0.inverse();
    let mut set = RootSet::empty(n);
    for (t, &j) in sf.j_list.iter().enumerate() {
        let i = t + 1;
        let end = match bound {
            XiBound::JIndexed => (n + 1) as isize - inv.apply(j as usize) as isize,
            XiBound::Literal => (n + 1) as isize - inv.apply(i) as isize,
            XiBound::Shifted => (n + i) as isize - inv.apply(j as usize) as isize,
        };
        let end = end.min(n as isize);
        for m in i as isize..=end {
            set.insert(Root::plus(i as u8, m as u8));
        }
    }
    set
}

pub fn pair(w: &SignedPerm) -> Result<CorrespondencePair> {
    let phi_w = w.inversion_set();
    let eta = eta_from_inversions(w, &phi_w)?;
    let xi = xi_from_parts(w, &phi_w, &eta)?;
    Ok(CorrespondencePair { eta, xi })
}

/// How a preimage was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseRoute {
    Constructed,
    Search,
}

/// The unique `w` with `pair(w) == (σ, Ψ)`.
pub fn inverse(sigma: &Perm, psi: &IncreasingSet) -> Result<SignedPerm> {
    inverse_traced(sigma, psi).map(|(w, _)| w)
}

/// Like [`inverse`], also reporting whether the direct construction
/// succeeded or an exhaustive search was needed.
pub fn inverse_traced(sigma: &Perm, psi: &IncreasingSet) -> Result<(SignedPerm, InverseRoute)> {
    let n = sigma.rank();
    if psi.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: psi.rank(),
        });
    }
    let target = CorrespondencePair {
        eta: *sigma,
        xi: psi.clone(),
    };
    let w = construct_preimage(sigma, psi);
    if pair(&w).ok().as_ref() == Some(&target) {
        return Ok((w, InverseRoute::Constructed));
    }
    let group = WeylGroup::with_cap(n, DEFAULT_GROUP_CAP)?;
    let found = group
        .iter()
        .find(|w| pair(w).ok().as_ref() == Some(&target));
    found
        .map(|w| (w, InverseRoute::Search))
        .ok_or_else(|| Error::Internal(format!("no preimage for ({sigma}, {psi})")))
}

/// The negated values are `j_t = σσ_l(t)` for the `k` nonempty rows of `Ψ`;
/// they sit at the tail of `σ` as `j_k, ..., j_1`. With `m_t` the end of row
/// `t`, `σ0` places `j_t` at position `n + t - m_t` and keeps the remaining
/// values in the order they have in `σ`.
fn construct_preimage(sigma: &Perm, psi: &IncreasingSet) -> SignedPerm {
    let n = sigma.rank();
    let k = psi.nonempty_rows();
    let js: Vec<u8> = (1..=k).map(|t| sigma.apply(n + 1 - t) as u8).collect();
    let rest = &sigma.images()[..n - k];
    let mut seq = vec![0u8; n];
    for (t, &j) in js.iter().enumerate() {
        let m = psi.row_end(t + 1).unwrap_or(n);
        let p = (n + t + 1).saturating_sub(m).clamp(1, n);
        seq[p - 1] = j;
    }
    let mut fill = rest.iter();
    for slot in seq.iter_mut().filter(|s| **s == 0) {
        *slot = *fill.next().unwrap_or(&0);
    }
    match Perm::from_images(&seq) {
        Ok(sigma0) => SignedPerm::from_parts(&sigma0, &js),
        Err(_) => SignedPerm::identity(n),
    }
}

/// Roots indexing the wedge factors of `L(σ, Ψ)`: `Φ_σ ∪ σσ_l(Ψ)`.
pub fn l_support(sigma: &Perm, psi: &IncreasingSet) -> Result<RootSet> {
    let n = sigma.rank();
    if psi.rank() != n {
        return Err(Error::RankMismatch {
            expected: n,
            found: psi.rank(),
        });
    }
    let relabel = sigma.compose(&Perm::longest(n));
    let moved = relabel.relabel_set(psi.members())?;
    let lower = sigma.inversions();
    debug_assert!(lower.is_disjoint(&moved));
    Ok(lower.union(&moved))
}

/// Everything the correspondence computes for one element.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessTrace {
    pub element: SignedPerm,
    pub standard_form: StandardForm,
    pub inversion_set: RootSet,
    pub length: usize,
    pub eta: Perm,
    pub xi: IncreasingSet,
    pub support: RootSet,
    pub support_matches: bool,
    pub eta_formula: Perm,
    pub eta_formula_by_position: Perm,
    pub xi_formula: RootSet,
    pub xi_formula_readings: Vec<(XiBound, SignOrdering, RootSet)>,
    pub inverse: SignedPerm,
    pub inverse_route: InverseRoute,
}

pub fn trace(w: &SignedPerm) -> Result<WitnessTrace> {
    let p = pair(w)?;
    let phi_w = w.inversion_set();
    let support = l_support(&p.eta, &p.xi)?;
    let sf = w.standard_form();
    let sf_pos = w.standard_form_with(SignOrdering::ByPosition);
    let (inv, route) = inverse_traced(&p.eta, &p.xi)?;
    let mut readings = Vec::new();
    for ordering in [SignOrdering::ByImage, SignOrdering::ByPosition] {
        let f = w.standard_form_with(ordering);
        for b in XiBound::ALL {
            readings.push((b, ordering, xi_formula_with(&f, b)));
        }
    }
    Ok(WitnessTrace {
        element: *w,
        inversion_set: phi_w,
        length: phi_w.len(),
        eta_formula: eta_formula(&sf),
        eta_formula_by_position: eta_formula(&sf_pos),
        xi_formula: xi_formula(&sf),
        xi_formula_readings: readings,
        standard_form: sf,
        support_matches: support == phi_w,
        support,
        eta: p.eta,
        xi: p.xi,
        inverse: inv,
        inverse_route: route,
    })
}

const MAX_EXAMPLES: usize = 5;
const CHUNK: usize = 1 << 14;

/// Occurrence count plus the first few offending elements (by enumeration
/// index), so merged tallies do not depend on scheduling.
#[derive(Clone, Debug, Default)]
struct Failures {
    count: u64,
    examples: Vec<(usize, String)>,
}

impl Failures {
    fn record(&mut self, idx: usize, what: impl FnOnce() -> String) {
        self.count += 1;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push((idx, what()));
        }
    }

    fn merge(&mut self, other: Failures) {
        self.count += other.count;
        self.examples.extend(other.examples);
        self.examples.sort_by_key(|e| e.0);
        self.examples.truncate(MAX_EXAMPLES);
    }

    fn to_json(&self) -> Value {
        json!({
            "count": self.count,
            "examples": self.examples.iter().map(|e| &e.1).collect::<Vec<_>>(),
        })
    }
}

const ORDERINGS: [SignOrdering; 2] = [SignOrdering::ByImage, SignOrdering::ByPosition];

#[derive(Debug, Default)]
struct Tally {
    elements: u64,
    internal: Failures,
    eta_inversions: Failures,
    xi_increasing: Failures,
    support: Failures,
    degree: Failures,
    round_trip: Failures,
    fallbacks: Failures,
    eta_formula: [Failures; 2],
    xi_formula: [[Failures; 3]; 2],
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.elements += other.elements;
        self.internal.merge(other.internal);
        self.eta_inversions.merge(other.eta_inversions);
        self.xi_increasing.merge(other.xi_increasing);
        self.support.merge(other.support);
        self.degree.merge(other.degree);
        self.round_trip.merge(other.round_trip);
        self.fallbacks.merge(other.fallbacks);
        for (a, b) in self.eta_formula.iter_mut().zip(other.eta_formula) {
            a.merge(b);
        }
        for (ra, rb) in self.xi_formula.iter_mut().zip(other.xi_formula) {
            for (a, b) in ra.iter_mut().zip(rb) {
                a.merge(b);
            }
        }
    }
}

/// Sentinel key for elements whose pair could not be computed.
const NO_KEY: u32 = u32::MAX;

fn examine(
    idx: usize,
    w: &SignedPerm,
    ideal_index: &HashMap<u128, usize>,
    tally: &mut Tally,
) -> u32 {
    let n = w.rank();
    tally.elements += 1;
    let phi_w = w.inversion_set();

    let eta = match eta_from_inversions(w, &phi_w) {
        Ok(e) => e,
        Err(e) => {
            tally.eta_inversions.record(idx, || e.to_string());
            return NO_KEY;
        }
    };
    let lower = phi_w.intersection(&RootSet::diff_part(n));
    if eta.inversions() != lower {
        tally
            .eta_inversions
            .record(idx, || format!("{w}: Φ_η = {} ≠ {lower}", eta.inversions()));
    }
    let xi = match xi_from_parts(w, &phi_w, &eta) {
        Ok(x) => x,
        Err(e) => {
            tally.xi_increasing.record(idx, || e.to_string());
            return NO_KEY;
        }
    };

    match l_support(&eta, &xi) {
        Ok(s) if s == phi_w => {}
        Ok(s) => tally
            .support
            .record(idx, || format!("{w}: support {s} ≠ Φ_w {phi_w}")),
        Err(e) => tally.internal.record(idx, || e.to_string()),
    }
    if phi_w.len() != eta.length() + xi.dim() {
        tally.degree.record(idx, || {
            format!(
                "{w}: |Φ_w| = {} but |Φ_η| + |ξ| = {} + {}",
                phi_w.len(),
                eta.length(),
                xi.dim()
            )
        });
    }
    match inverse_traced(&eta, &xi) {
        Ok((back, route)) => {
            if back != *w {
                tally
                    .round_trip
                    .record(idx, || format!("{w} ↦ ({eta}, {xi}) ↦ {back}"));
            }
            if route == InverseRoute::Search {
                tally.fallbacks.record(idx, || format!("({eta}, {xi})"));
            }
        }
        Err(e) => tally.round_trip.record(idx, || e.to_string()),
    }

    for (o, ordering) in ORDERINGS.iter().enumerate() {
        let sf = w.standard_form_with(*ordering);
        let ef = eta_formula(&sf);
        if ef != eta {
            tally.eta_formula[o].record(idx, || format!("{w}: formula {ef}, η = {eta}"));
        }
        for (b, bound) in XiBound::ALL.iter().enumerate() {
            let xf = xi_formula_with(&sf, *bound);
            if xf != *xi.members() {
                tally.xi_formula[o][b].record(idx, || format!("{w}: formula {xf}, ξ = {xi}"));
            }
        }
    }

    match ideal_index.get(&xi.members().bits()) {
        Some(&i) => (eta.lex_rank() * ideal_index.len() + i) as u32,
        None => {
            tally.internal.record(idx, || {
                format!("{w}: ξ = {xi} missing from the enumeration")
            });
            NO_KEY
        }
    }
}

/// Exhaustive check of the correspondence over the whole group.
pub fn verify_bijection(n: usize) -> Result<VerificationReport> {
    verify_bijection_with_cap(n, DEFAULT_GROUP_CAP)
}

pub fn verify_bijection_with_cap(n: usize, cap: usize) -> Result<VerificationReport> {
    let group = WeylGroup::with_cap(n, cap)?;
    let ideals = enumerate_increasing(n)?;
    let ideal_index: HashMap<u128, usize> = ideals
        .iter()
        .enumerate()
        .map(|(i, s)| (s.members().bits(), i))
        .collect();
    let order = group.order();
    let chunks: Vec<(Tally, Vec<u32>)> = (0..order.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            let range = c * CHUNK..((c + 1) * CHUNK).min(order);
            let keys = range
                .map(|idx| examine(idx, &group.element(idx), &ideal_index, &mut tally))
                .collect();
            (tally, keys)
        })
        .collect();

    let target = group.perms().len() * ideals.len();
    let mut hits = vec![0u8; target];
    let mut tally = Tally::default();
    let mut collisions = Failures::default();
    let mut idx = 0;
    for (t, keys) in chunks {
        tally.merge(t);
        for key in keys {
            if key != NO_KEY {
                let h = &mut hits[key as usize];
                if *h > 0 {
                    collisions.record(idx, || format!("{}", group.element(idx)));
                }
                *h = h.saturating_add(1);
            }
            idx += 1;
        }
    }
    let covered = hits.iter().filter(|&&h| h > 0).count();

    let mut report = VerificationReport::new(n);
    report.push(
        "bijection.injective",
        "w ↦ (η(w), ξ(w)) is one-to-one",
        collisions.count == 0 && tally.internal.count == 0,
        json!({ "elements": tally.elements, "collisions": collisions.to_json(), "internal": tally.internal.to_json() }),
    );
    report.push(
        "bijection.surjective",
        "w ↦ (η(w), ξ(w)) covers S_n × increasing subsets",
        covered == target,
        json!({ "covered": covered, "target": target, "permutations": group.perms().len(), "ideals": ideals.len() }),
    );
    report.push(
        "bijection.eta_inversions",
        "Φ_η(w) = Φ_w ∩ Φ⁰₊",
        tally.eta_inversions.count == 0,
        tally.eta_inversions.to_json(),
    );
    report.push(
        "bijection.xi_increasing",
        "ξ(w) is an increasing subset",
        tally.xi_increasing.count == 0,
        tally.xi_increasing.to_json(),
    );
    report.push(
        "bijection.support",
        "support of L(η(w), ξ(w)) equals Φ_w",
        tally.support.count == 0,
        tally.support.to_json(),
    );
    report.push(
        "bijection.degree",
        "deg L(σ, I) = |Φ_σ| + dim I",
        tally.degree.count == 0,
        tally.degree.to_json(),
    );
    report.push(
        "bijection.round_trip",
        "inverse(η(w), ξ(w)) = w",
        tally.round_trip.count == 0,
        json!({ "mismatches": tally.round_trip.to_json(), "search_fallbacks": tally.fallbacks.to_json() }),
    );
    report.set_data("group_order", json!(order));
    report.set_data("ideal_count", json!(ideals.len()));
    report.set_data("peterson_ratio", json!(order / group.perms().len()));

    let mut formulas = serde_json::Map::new();
    for (o, ordering) in ORDERINGS.iter().enumerate() {
        let key = match ordering {
            SignOrdering::ByImage => "by_image",
            SignOrdering::ByPosition => "by_position",
        }
        .to_string();
        let mut xi_map = serde_json::Map::new();
        for (b, bound) in XiBound::ALL.iter().enumerate() {
            xi_map.insert(
                bound.name().to_string(),
                agreement_json(tally.elements, &tally.xi_formula[o][b]),
            );
        }
        formulas.insert(
            key,
            json!({
                "eta": agreement_json(tally.elements, &tally.eta_formula[o]),
                "xi": xi_map,
            }),
        );
    }
    report.set_data("formula_crosscheck", Value::Object(formulas));
    Ok(report)
}

fn agreement_json(total: u64, f: &Failures) -> Value {
    json!({
        "agree": total - f.count,
        "disagree": f.to_json(),
    })
}
