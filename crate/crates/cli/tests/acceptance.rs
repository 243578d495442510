//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Expected values come from small oracles written here, independent of the
//! library code they check.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use abideal_core::ce::{
    betti_numbers_with_cap, verify_d_squared, verify_main_theorem_with_cap, MAX_COHOMOLOGY_RANK,
};
use abideal_core::correspondence::verify_bijection;
use abideal_core::ideals::{
    enumerate_increasing, is_abelian_ideal_combinatorial, is_increasing, verify_oracle,
};
use abideal_core::liealg::{
    bracket, decompose, root_vector, verify_lie_oracle, IntMatrix, StructureTable,
};
use abideal_core::poincare::{sym_poincare, verify_identities_with, weyl_poincare};
use abideal_core::roots::positive_roots;
use abideal_core::{Root, RootSet, VerificationReport, WeylGroup};

const SEED: u64 = 42;

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            title: "abelian ideal count is 2^n, n <= 8",
            limit: secs(1),
            run: peterson_count,
        },
        Criterion {
            id: 2,
            title: "dimension histogram is prod(1+t^i), n <= 8",
            limit: secs(1),
            run: dimension_histogram,
        },
        Criterion {
            id: 3,
            title: "up-set oracle, all subsets, n <= 5",
            limit: secs(5),
            run: upset_oracle,
        },
        Criterion {
            id: 4,
            title: "matrix-level abelian ideals, n <= 4",
            limit: secs(30),
            run: lie_oracle,
        },
        Criterion {
            id: 5,
            title: "bijection suite, n <= 7",
            limit: secs(120),
            run: bijection_suite,
        },
        Criterion {
            id: 6,
            title: "Poincare identities, n <= 7",
            limit: secs(120),
            run: poincare_identities,
        },
        Criterion {
            id: 7,
            title: "Betti numbers = Weyl length counts, n <= 3",
            limit: secs(60),
            run: betti_small,
        },
        Criterion {
            id: 7,
            title: "Betti numbers = Weyl length counts, n = 4",
            limit: secs(1800),
            run: betti_rank4,
        },
        Criterion {
            id: 8,
            title: "monomial cocycles form a basis, n <= 3",
            limit: secs(60),
            run: main_theorem,
        },
        Criterion {
            id: 9,
            title: "d^2 = 0, n <= 4",
            limit: secs(10),
            run: d_squared,
        },
        Criterion {
            id: 10,
            title: "verify --rank 3 --seed 42 is deterministic",
            limit: None,
            run: determinism,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.limit.is_some_and(|l| elapsed > l);
        let (status, note) = match (&outcome, over) {
            (Ok(note), false) => ("PASS", note.clone()),
            (Ok(note), true) => (
                "FAIL",
                format!("{note}; over the {:?} limit", c.limit.unwrap()),
            ),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {:<48} {:>8.2}s  {note}",
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion line(s) failed");
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(report: &VerificationReport) -> Result<(), String> {
    match report.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!(
            "rank {}: {} failed: {}",
            report.rank, c.id, c.detail
        )),
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `∏ f(i)` for `i = 1..=n`.
fn product(n: usize, f: impl Fn(usize) -> Vec<i64>) -> Vec<i64> {
    (1..=n).fold(vec![1], |acc, i| poly_mul(&acc, &f(i)))
}

/// `1 + t^i`.
fn one_plus(i: usize) -> Vec<i64> {
    let mut v = vec![0; i + 1];
    v[0] = 1;
    v[i] = 1;
    v
}

/// `1 + t + ... + t^{k-1}`.
fn q_int(k: usize) -> Vec<i64> {
    vec![1; k]
}

/// Long/sum roots as pairs `(i, j)` with `i <= j`.
fn upper_root(i: usize, j: usize) -> Root {
    if i == j {
        Root::Long(i as u8)
    } else {
        Root::Sum(i as u8, j as u8)
    }
}

/// The up-set generated by `(i, j)` under `(i1, j1) ≺ (i2, j2)` iff
/// `i1 >= i2` and `j1 >= j2`.
fn principal_upset(n: usize, i: usize, j: usize) -> RootSet {
    let mut s = RootSet::empty(n);
    for a in 1..=i {
        for b in a..=j {
            s.insert(upper_root(a, b));
        }
    }
    s
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

/// Every up-set, as unions of principal up-sets reachable from the empty set.
fn all_upsets(n: usize) -> BTreeSet<u128> {
    let principals: Vec<u128> = upper_pairs(n)
        .into_iter()
        .map(|(i, j)| principal_upset(n, i, j).bits())
        .collect();
    let mut seen = HashSet::from([0u128]);
    let mut stack = vec![0u128];
    while let Some(s) = stack.pop() {
        for &p in &principals {
            let t = s | p;
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

fn is_upset(set: &RootSet) -> bool {
    let n = set.rank();
    upper_pairs(n)
        .into_iter()
        .filter(|&(i, j)| set.contains(upper_root(i, j)))
        .all(|(i, j)| principal_upset(n, i, j).is_subset(set))
}

fn peterson_count() -> Outcome {
    for n in 1..=8 {
        let ideals = enumerate_increasing(n).map_err(|e| e.to_string())?;
        let got: BTreeSet<u128> = ideals.iter().map(|s| s.members().bits()).collect();
        ensure(ideals.len() == 1 << n, || {
            format!("n={n}: {} ideals", ideals.len())
        })?;
        ensure(got == all_upsets(n), || {
            format!("n={n}: enumeration differs from the oracle")
        })?;
    }
    Ok("2, 4, ..., 256 ideals; sets match the generated up-sets".into())
}

fn dimension_histogram() -> Outcome {
    for n in 1..=8 {
        let mut hist = vec![0i64; n * (n + 1) / 2 + 1];
        for s in enumerate_increasing(n).map_err(|e| e.to_string())? {
            hist[s.dim()] += 1;
        }
        let expected = product(n, one_plus);
        ensure(hist == expected, || {
            format!("n={n}: {hist:?} vs {expected:?}")
        })?;
        if n == 3 {
            ensure(hist == [1, 1, 1, 2, 1, 1, 1], || format!("n=3: {hist:?}"))?;
        }
    }
    Ok("exact for n = 1..8".into())
}

fn upset_oracle() -> Outcome {
    let mut scanned = 0;
    for n in 1..=5 {
        let report = verify_oracle(n, 0, SEED).map_err(|e| e.to_string())?;
        all_pass(&report)?;
        let upper = RootSet::upper_part(n);
        for s in upper.subsets() {
            let inc = is_increasing(&s).map_err(|e| e.to_string())?;
            let comb = is_abelian_ideal_combinatorial(&s);
            let oracle = is_upset(&s);
            ensure(inc == oracle && comb == oracle, || {
                format!("n={n} {s}: increasing={inc} dotted={comb} oracle={oracle}")
            })?;
            scanned += 1;
        }
    }
    Ok(format!("{scanned} subsets, zero discrepancies"))
}

/// Abelian-ideal test straight from the matrices.
fn is_abelian_ideal_by_matrices(n: usize, set: &RootSet, vectors: &[(Root, IntMatrix)]) -> bool {
    for (_, va) in vectors.iter().filter(|(a, _)| set.contains(*a)) {
        for (b, vb) in vectors {
            let m = bracket(vb, va).expect("square matrices");
            let terms = decompose(n, &m).expect("bracket stays in the nilradical");
            if terms.iter().any(|(g, _)| !set.contains(*g)) {
                return false;
            }
            if set.contains(*b) && !terms.is_empty() {
                return false;
            }
        }
    }
    true
}

fn lie_oracle() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        let table = StructureTable::build(n).map_err(|e| e.to_string())?;
        let report = verify_lie_oracle(&table, 10_000, SEED).map_err(|e| e.to_string())?;
        all_pass(&report)?;
        let vectors: Vec<_> = positive_roots(n)
            .unwrap()
            .into_iter()
            .map(|r| (r, root_vector(n, r).unwrap()))
            .collect();
        for s in RootSet::upper_part(n).subsets() {
            let direct = is_abelian_ideal_by_matrices(n, &s, &vectors);
            ensure(direct == is_upset(&s), || {
                format!("n={n} {s}: matrices say {direct}")
            })?;
        }
        count += report
            .checks
            .iter()
            .map(|c| c.detail["subsets"].as_u64().unwrap_or(0))
            .sum::<u64>();
    }
    Ok(format!("{count} subsets compared, zero discrepancies"))
}

/// `Φ_w` from the action on weight vectors: `α > 0` with `w⁻¹α < 0`.
fn inversion_set_oracle(images: &[i8]) -> Vec<Root> {
    let n = images.len();
    let vector = |r: Root| {
        let mut v = vec![0i64; n + 1];
        match r {
            Root::Diff(i, j) => {
                v[i as usize] += 1;
                v[j as usize] -= 1;
            }
            Root::Sum(i, j) => {
                v[i as usize] += 1;
                v[j as usize] += 1;
            }
            Root::Long(i) => v[i as usize] += 2,
        }
        v
    };
    let mut out = Vec::new();
    for r in positive_roots(n).unwrap() {
        let v = vector(r);
        // w(e_k) = ±e_{|img_k|}, so (w⁻¹v)_k = sign(img_k) · v_{|img_k|}
        let pulled: Vec<i64> = (0..n)
            .map(|k| images[k].signum() as i64 * v[images[k].unsigned_abs() as usize])
            .collect();
        if pulled.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            out.push(r);
        }
    }
    out
}

fn bijection_suite() -> Outcome {
    let mut elements = 0;
    for n in 1..=7 {
        let report = verify_bijection(n).map_err(|e| e.to_string())?;
        all_pass(&report)?;
        let expected = (1..=n).product::<usize>() << n;
        let order = report.data["group_order"].as_u64().unwrap_or(0) as usize;
        ensure(order == expected, || format!("n={n}: group order {order}"))?;
        elements += order;
        if n <= 4 {
            let group = WeylGroup::new(n).map_err(|e| e.to_string())?;
            let mut hist = vec![0i64; n * n + 1];
            for w in group.iter() {
                let oracle = RootSet::from_roots(n, inversion_set_oracle(w.images()));
                ensure(w.inversion_set() == oracle, || {
                    format!("{w}: Φ_w = {}, oracle {oracle}", w.inversion_set())
                })?;
                hist[oracle.len()] += 1;
            }
            let expected = product(n, |i| q_int(2 * i));
            ensure(hist == expected, || format!("n={n}: lengths {hist:?}"))?;
        }
    }
    Ok(format!("{elements} elements, zero failures"))
}

fn poincare_identities() -> Outcome {
    for n in 1..=7 {
        let report = verify_identities_with(n, 8, None).map_err(|e| e.to_string())?;
        all_pass(&report)?;
        let weyl = weyl_poincare(n).map_err(|e| e.to_string())?;
        let sym = sym_poincare(n).map_err(|e| e.to_string())?;
        ensure(weyl.coeffs() == product(n, |i| q_int(2 * i)), || {
            format!("n={n}: W(t)")
        })?;
        ensure(sym.coeffs() == product(n, q_int), || format!("n={n}: S(t)"))?;
    }
    Ok("enumeration, formulas, exact division and convolution agree".into())
}

fn betti_small() -> Outcome {
    let literal: [&[u64]; 2] = [&[1, 1], &[1, 2, 2, 2, 1]];
    for n in 1..=3 {
        let betti = betti_numbers_with_cap(n, 3).map_err(|e| e.to_string())?;
        let expected: Vec<u64> = product(n, |i| q_int(2 * i))
            .iter()
            .map(|&c| c as u64)
            .collect();
        ensure(betti == expected, || {
            format!("n={n}: {betti:?} vs {expected:?}")
        })?;
        if n <= 2 {
            ensure(betti == literal[n - 1], || format!("n={n}: {betti:?}"))?;
        }
    }
    Ok("(1,1), (1,2,2,2,1), (1,3,5,7,8,8,7,5,3,1)".into())
}

fn betti_rank4() -> Outcome {
    let betti = betti_numbers_with_cap(4, MAX_COHOMOLOGY_RANK).map_err(|e| e.to_string())?;
    let expected: Vec<u64> = product(4, |i| q_int(2 * i))
        .iter()
        .map(|&c| c as u64)
        .collect();
    ensure(betti == expected, || format!("{betti:?} vs {expected:?}"))?;
    Ok(format!("{betti:?}"))
}

fn main_theorem() -> Outcome {
    for n in 1..=3 {
        all_pass(&verify_main_theorem_with_cap(n, 3).map_err(|e| e.to_string())?)?;
    }
    Ok("closed, independent, b_p classes per degree, L matches f".into())
}

fn d_squared() -> Outcome {
    for n in 1..=4 {
        let table = StructureTable::build(n).map_err(|e| e.to_string())?;
        all_pass(&verify_d_squared(&table, 1_000, SEED).map_err(|e| e.to_string())?)?;
    }
    Ok("generators and 1000 random cochains per rank".into())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_abideal"))
            .args(["verify", "--rank", "3", "--seed", "42"])
            .env_remove("ABIDEAL_WORKERS")
            .env_remove("ABIDEAL_CACHE_DIR")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || {
        format!("exit status {:?}", a.status.code())
    })?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}
