use abideal_core::ce::{
    check_cohomology_rank, verify_betti, verify_d_squared, verify_main_theorem_on, ChainComplex,
    ComplexSummary, MAX_COHOMOLOGY_RANK,
};
use abideal_core::correspondence::{trace, verify_bijection_with_cap};
use abideal_core::ideals::{enumerate_increasing, verify_ideals, verify_oracle};
use abideal_core::liealg::{verify_lie_oracle, StructureTable, REALIZATION_VERSION};
use abideal_core::poincare::{
    enumerated_weyl_lengths, ideal_generating, ideal_generating_by_division, sym_poincare,
    verify_identities_with, weyl_poincare,
};
use abideal_core::roots::check_rank;
use abideal_core::{Error, SignedPerm, VerificationReport, WeylGroup};
use anyhow::Result;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Command, Format, RunConfig};
use crate::output::{usage, Output, Table};

/// Seeded subsets for the sampled predicate comparisons.
const ORACLE_SAMPLES: usize = 10_000;
/// Seeded random cochains for the `d ∘ d` check.
const D_SQUARED_SAMPLES: usize = 1_000;
/// Largest rank for `weyl --list`.
const LIST_RANK: usize = 6;

pub fn run(command: &Command, rank: Option<usize>, cfg: &RunConfig) -> Result<Output> {
    if let Command::Bijection {
        witness: Some(elem),
    } = command
    {
        return witness(elem, rank);
    }
    let n = rank.ok_or_else(|| usage("--rank is required"))?;
    check_rank(n)?;
    match command {
        Command::Ideals { list, histogram } => ideals(n, *list, *histogram, cfg),
        Command::Weyl { list } => weyl(n, *list, cfg),
        Command::Bijection { .. } => Ok(Output::new(
            "bijection",
            verify_bijection_with_cap(n, cfg.group_cap)?,
        )),
        Command::Structure => structure(n, cfg),
        Command::Betti { per_weight } => betti(n, *per_weight, cfg),
        Command::Classes => {
            let (complex, summary) = cohomology(n, cfg)?;
            Ok(Output::new(
                "classes",
                verify_main_theorem_on(&complex, &summary)?,
            ))
        }
        Command::Poincare => poincare(n, cfg),
        Command::Verify => verify(n, cfg),
    }
}

fn structure_table(n: usize, cfg: &RunConfig) -> Result<StructureTable> {
    match &cfg.cache {
        Some(cache) => cache.get_or_compute(
            "structure",
            n,
            |t: &StructureTable| t.rank() == n && t.is_well_formed(),
            || Ok(StructureTable::build(n)?),
        ),
        None => Ok(StructureTable::build(n)?),
    }
}

fn cohomology(n: usize, cfg: &RunConfig) -> Result<(ChainComplex, ComplexSummary)> {
    check_cohomology_rank(n, cfg.cohomology_cap)?;
    let table = structure_table(n, cfg)?;
    let complex = ChainComplex::build(&table, cfg.cohomology_cap)?;
    let summary = match &cfg.cache {
        Some(cache) => cache.get_or_compute(
            "complex",
            n,
            |s: &ComplexSummary| {
                s.rank == n
                    && s.blocks.len() == complex.blocks().len()
                    && s.blocks
                        .iter()
                        .zip(complex.blocks())
                        .all(|(s, b)| s.weight == b.weight)
            },
            || Ok(complex.summarize()),
        )?,
        None => complex.summarize(),
    };
    Ok((complex, summary))
}

fn ideals(n: usize, list: bool, histogram: bool, cfg: &RunConfig) -> Result<Output> {
    if cfg.format == Format::Csv && list && histogram {
        return Err(usage(
            "CSV output holds one table: pass --list or --histogram",
        ));
    }
    let mut out = Output::new("ideals", verify_ideals(n)?);
    let all = enumerate_increasing(n)?;
    out.set("count", json!(all.len()));
    if list {
        let rows: Vec<_> = all
            .iter()
            .map(|s| json!({ "roots": s.members(), "dim": s.dim() }))
            .collect();
        out.set("ideals", json!(rows));
        if !histogram {
            out.data.remove("ideal_histogram");
        }
        out.table = Some(Table {
            header: vec!["dim", "roots"],
            rows: all
                .iter()
                .map(|s| vec![s.dim().to_string(), s.members().to_strings().join(" ")])
                .collect(),
        });
    } else {
        let hist = ideal_histogram(&out)?;
        out.table = Some(Table {
            header: vec!["dim", "count"],
            rows: hist
                .iter()
                .enumerate()
                .map(|(d, c)| vec![d.to_string(), c.to_string()])
                .collect(),
        });
    }
    Ok(out)
}

fn ideal_histogram(out: &Output) -> Result<Vec<i64>> {
    let value = out
        .data
        .get("ideal_histogram")
        .ok_or_else(|| Error::Internal("missing ideal histogram".into()))?;
    Ok(serde_json::from_value(value.clone())?)
}

fn weyl(n: usize, list: bool, cfg: &RunConfig) -> Result<Output> {
    if list && n > LIST_RANK {
        return Err(usage(format!("weyl --list is limited to rank {LIST_RANK}")));
    }
    let group = WeylGroup::with_cap(n, cfg.group_cap)?;
    let order = group.order();
    let expected: usize = (1..=n).product::<usize>() << n;
    let bad: Vec<String> = (0..order)
        .into_par_iter()
        .filter_map(|i| {
            let w = group.element(i);
            let sf = w.standard_form();
            let ok = sf.recompose() == w && w.length() == w.inversion_set().len();
            (!ok).then(|| w.to_string())
        })
        .collect();
    let mut report = VerificationReport::new(n);
    report.push(
        "weyl.order",
        "|W| = 2^n · n!",
        order == expected,
        json!({ "order": order, "expected": expected }),
    );
    report.push(
        "weyl.standard_form",
        "w = r_{j_1} ... r_{j_k} σ0 and l(w) = |Φ_w|",
        bad.is_empty(),
        json!({ "elements": order, "failures": &bad[..bad.len().min(5)] }),
    );
    report.set_data(
        "length_histogram",
        json!(enumerated_weyl_lengths(n, cfg.group_cap)?),
    );
    if list {
        let elements: Vec<_> = group
            .iter()
            .map(|w| {
                json!({
                    "element": w,
                    "length": w.length(),
                    "standard_form": w.standard_form(),
                    "inversion_set": w.inversion_set(),
                })
            })
            .collect();
        report.set_data("elements", json!(elements));
    }
    Ok(Output::new("weyl", report))
}

fn witness(elem: &str, rank: Option<usize>) -> Result<Output> {
    let w: SignedPerm = elem.parse()?;
    let n = w.rank();
    if let Some(r) = rank {
        if r != n {
            return Err(Error::RankMismatch {
                expected: r,
                found: n,
            }
            .into());
        }
    }
    let t = trace(&w)?;
    let mut report = VerificationReport::new(n);
    report.push(
        "bijection.witness",
        "support of L(η(w), ξ(w)) is Φ_w and inverse(η(w), ξ(w)) = w",
        t.support_matches && t.inverse == w,
        json!({ "element": w }),
    );
    report.set_data("witness", serde_json::to_value(&t)?);
    Ok(Output::new("bijection", report))
}

fn structure(n: usize, cfg: &RunConfig) -> Result<Output> {
    let table = structure_table(n, cfg)?;
    let entries = table.nonzero();
    let jacobi = table.jacobi_violations();
    let mut report = VerificationReport::new(n);
    report.push(
        "lie.jacobi",
        "the structure constants satisfy the Jacobi identity",
        jacobi.is_empty(),
        json!({ "violations": jacobi.len() }),
    );
    report.set_data("realization_version", json!(REALIZATION_VERSION));
    report.set_data("nonzero", json!(entries.len()));
    report.set_data(
        "entries",
        json!(entries
            .iter()
            .map(|(a, b, g, c)| json!({ "alpha": a, "beta": b, "gamma": g, "c": c }))
            .collect::<Vec<_>>()),
    );
    let mut out = Output::new("structure", report);
    out.table = Some(Table {
        header: vec!["alpha", "beta", "gamma", "c"],
        rows: entries
            .iter()
            .map(|(a, b, g, c)| vec![a.to_string(), b.to_string(), g.to_string(), c.to_string()])
            .collect(),
    });
    Ok(out)
}

fn betti(n: usize, per_weight: bool, cfg: &RunConfig) -> Result<Output> {
    let (_, summary) = cohomology(n, cfg)?;
    let mut report = verify_betti(&summary)?;
    let classes = enumerated_weyl_lengths(n, MAX_COHOMOLOGY_RANK)?;
    report.set_data("classes_per_degree", json!(classes));
    let betti = summary.betti();
    let mut table = Table {
        header: vec!["degree", "betti", "classes"],
        rows: betti
            .iter()
            .enumerate()
            .map(|(p, b)| vec![p.to_string(), b.to_string(), classes.coeff(p).to_string()])
            .collect(),
    };
    if per_weight {
        let blocks: Vec<_> = summary
            .blocks
            .iter()
            .map(|b| json!({ "weight": b.weight, "dims": b.dims, "ranks": b.ranks, "betti": b.betti() }))
            .collect();
        report.set_data("per_weight", json!(blocks));
        table = Table {
            header: vec!["weight", "degree", "dim", "rank", "betti"],
            rows: summary
                .blocks
                .iter()
                .flat_map(|b| {
                    let betti = b.betti();
                    (0..b.dims.len()).filter(|&p| b.dims[p] > 0).map(move |p| {
                        vec![
                            format!("{:?}", b.weight),
                            p.to_string(),
                            b.dims[p].to_string(),
                            b.ranks[p].to_string(),
                            betti[p].to_string(),
                        ]
                    })
                })
                .collect(),
        };
    }
    let mut out = Output::new("betti", report);
    out.table = Some(table);
    Ok(out)
}

fn poincare(n: usize, cfg: &RunConfig) -> Result<Output> {
    let mut report = verify_identities_with(n, cfg.group_cap, None)?;
    let polys = [
        ("weyl", weyl_poincare(n)?),
        ("sym", sym_poincare(n)?),
        ("ideal", ideal_generating(n)?),
        ("quotient", ideal_generating_by_division(n)?),
    ];
    for (name, p) in &polys {
        report.set_data(name, json!(p));
    }
    let mut out = Output::new("poincare", report);
    out.table = Some(Table {
        header: vec!["degree", "weyl", "sym", "ideal", "quotient"],
        rows: (0..=n * n)
            .map(|k| {
                std::iter::once(k.to_string())
                    .chain(polys.iter().map(|(_, p)| p.coeff(k).to_string()))
                    .collect()
            })
            .collect(),
    });
    Ok(out)
}

fn verify(n: usize, cfg: &RunConfig) -> Result<Output> {
    if n > cfg.group_cap {
        return Err(Error::RankAboveCap {
            rank: n,
            cap: cfg.group_cap,
            what: "group enumeration",
        }
        .into());
    }
    let seed = cfg.seed;
    let table = structure_table(n, cfg)?;
    let d2_samples = if n <= MAX_COHOMOLOGY_RANK {
        D_SQUARED_SAMPLES
    } else {
        0
    };
    let mut report = verify_ideals(n)?
        .merge(verify_oracle(n, ORACLE_SAMPLES, seed)?)
        .merge(verify_lie_oracle(&table, ORACLE_SAMPLES, seed)?)
        .merge(verify_bijection_with_cap(n, cfg.group_cap)?)
        .merge(verify_identities_with(n, cfg.group_cap, None)?)
        .merge(verify_d_squared(&table, d2_samples, seed)?);
    if n <= cfg.cohomology_cap {
        let (complex, summary) = cohomology(n, cfg)?;
        report = report
            .merge(verify_betti(&summary)?)
            .merge(verify_main_theorem_on(&complex, &summary)?);
    } else {
        report.set_data(
            "skipped",
            json!({
                "checks": ["ce.betti", "classes.closed", "classes.count", "classes.basis", "classes.l_cochains"],
                "reason": format!("rank {n} is above the cohomology cap {}", cfg.cohomology_cap),
            }),
        );
    }
    report.set_data("seed", json!(seed));
    Ok(Output::new("verify", report))
}
