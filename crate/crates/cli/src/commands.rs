use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use log::info;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use wreathlab_core::combinat::{enumerate_wreaths, wreath_count, wreath_of_perm};
use wreathlab_core::decomp::{self, Budget, Checkpoint, Decomposition, SearchOutcome};
use wreathlab_core::json::{bigint_to_json, rational_to_string};
use wreathlab_core::kernel::{self, SparseKernelVector};
use wreathlab_core::matrixcore::{build_wreath_matrix, eigen_certify, exact_nullspace};
use wreathlab_core::spectral::{self, BTable};
use wreathlab_core::{Perm, Wreath, WreathMatrix, WreathParams};

use crate::output::Format;
use crate::{Ctx, EXIT_BUDGET, EXIT_EXHAUSTED, EXIT_FAILED, NK};

fn params(nk: NK) -> Result<WreathParams> {
    Ok(WreathParams::new(nk.n, nk.k)?)
}

fn require_json(ctx: &Ctx, what: &str) -> Result<()> {
    if ctx.sink.format != Format::Json {
        bail!(wreathlab_core::Error::InvalidParams(format!("{what} is only available as JSON")));
    }
    Ok(())
}

pub fn enumerate(ctx: &Ctx, nk: NK, count_only: bool) -> Result<u8> {
    require_json(ctx, "enumerate")?;
    let p = params(nk)?;
    let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
    let formula = wreath_count(&p);
    let matches = BigInt::from(wreaths.len()) == formula;
    let mut out = json!({
        "n": p.n(),
        "k": p.k(),
        "g": p.g(),
        "count": wreaths.len(),
        "formula_count": bigint_to_json(&formula),
        "matches": matches,
    });
    if !count_only {
        out["wreaths"] = serde_json::to_value(&wreaths)?;
    }
    ctx.sink.json(&out)?;
    Ok(if matches { 0 } else { crate::EXIT_INVARIANT })
}

pub fn matrix(ctx: &Ctx, nk: NK) -> Result<u8> {
    let p = params(nk)?;
    let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
    let m: WreathMatrix = build_wreath_matrix(&wreaths, &ctx.caps)?;
    match ctx.sink.format {
        Format::Csv => {
            let header: Vec<String> = (0..m.cols()).map(|i| i.to_string()).collect();
            ctx.sink.csv(
                &header,
                (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()),
            )?;
        }
        Format::Json => {
            let rows: Vec<&[i64]> = (0..m.rows()).map(|i| m.row(i)).collect();
            ctx.sink.json(&json!({
                "n": p.n(),
                "k": p.k(),
                "wreaths": wreaths,
                "matrix": rows,
            }))?;
        }
    }
    Ok(0)
}

pub fn spectrum(ctx: &Ctx, nk: NK) -> Result<u8> {
    require_json(ctx, "spectrum")?;
    let p = params(nk)?;
    let s = spectral::full_spectrum(&p)?;
    let count = usize::try_from(&s.wreath_count).ok();
    let certified = match count {
        Some(c) if c <= ctx.caps.certify_rows && p.n() <= ctx.caps.enumeration_n => {
            let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
            let m: WreathMatrix = build_wreath_matrix(&wreaths, &ctx.caps)?;
            Value::Bool(eigen_certify(&m, &s.claims())?)
        }
        _ => {
            info!("{p}: {} wreaths, certification skipped", s.wreath_count);
            Value::String("skipped".into())
        }
    };
    let mut out = serde_json::to_value(&s)?;
    out["trace_ok"] = Value::Bool(s.trace_ok());
    out["certified"] = certified.clone();
    ctx.sink.json(&out)?;
    Ok(if certified == Value::Bool(false) || !s.trace_ok() {
        crate::EXIT_INVARIANT
    } else {
        0
    })
}

#[derive(Serialize)]
struct BRow {
    l: u32,
    j: u32,
    #[serde(with = "wreathlab_core::json::bignum")]
    formula: BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

pub fn b_table(ctx: &Ctx, nk: NK) -> Result<u8> {
    let p = params(nk)?;
    let formula = BTable::formula(&p)?;
    let oracle = if ctx.heavy {
        Some(BTable::oracle(&p, &ctx.caps)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for l in 2..=p.k() {
        for j in 0..=l {
            rows.push(BRow {
                l,
                j,
                formula: formula.get(l, j).expect("table covers all levels").clone(),
                oracle: oracle.as_ref().map(|o| o.get(l, j).expect("table covers all levels").to_string()),
            });
        }
    }
    let agree = oracle.as_ref().is_none_or(|o| *o == formula);
    match ctx.sink.format {
        Format::Csv => {
            let mut header = vec!["l".to_string(), "j".into(), "formula".into()];
            if oracle.is_some() {
                header.push("oracle".into());
            }
            ctx.sink.csv(
                &header,
                rows.iter().map(|r| {
                    let mut row = vec![r.l.to_string(), r.j.to_string(), r.formula.to_string()];
                    row.extend(r.oracle.clone());
                    row
                }),
            )?;
        }
        Format::Json => ctx.sink.json(&json!({
            "n": p.n(),
            "k": p.k(),
            "g": p.g(),
            "rows": rows,
            "oracle_agrees": oracle.as_ref().map(|_| agree),
        }))?,
    }
    Ok(if agree { 0 } else { crate::EXIT_INVARIANT })
}

pub fn kernel_dim(ctx: &Ctx, nk: NK, exact: bool) -> Result<u8> {
    require_json(ctx, "kernel-dim")?;
    let p = params(nk)?;
    let dim = kernel::kernel_dimension(&p)?;
    let mut out = json!({
        "n": p.n(),
        "k": p.k(),
        "wreath_count": bigint_to_json(&wreath_count(&p)),
        "image_dimension": bigint_to_json(&spectral::image_dimension(&p)),
        "kernel_dimension": bigint_to_json(&dim),
    });
    let mut code = 0;
    if exact {
        let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
        let m: WreathMatrix = build_wreath_matrix(&wreaths, &ctx.caps)?;
        let size = exact_nullspace(&m, &ctx.caps)?.len();
        out["nullspace_size"] = json!(size);
        if BigInt::from(size) != dim {
            code = crate::EXIT_INVARIANT;
        }
    }
    ctx.sink.json(&out)?;
    Ok(code)
}

#[derive(Serialize)]
struct Labeled {
    a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<Wreath>,
    vector: SparseKernelVector,
}

pub fn kernel_vectors(ctx: &Ctx, nk: NK, samples: usize, span: bool) -> Result<u8> {
    require_json(ctx, "kernel-vectors")?;
    let p = params(nk)?;
    let mut x = Vec::new();
    for a in 2..=p.n() / 2 {
        if a != p.k() {
            x.push(Labeled {
                a,
                base: None,
                vector: kernel::build_x_a(&p, a)?,
            });
        }
    }
    let all = if samples > 1 || span {
        Some(enumerate_wreaths(&p, &ctx.caps)?)
    } else {
        None
    };
    let bases: Vec<Wreath> = match &all {
        Some(all) if samples > 1 => {
            let step = (all.len() / samples).max(1);
            all.iter().step_by(step).take(samples).cloned().collect()
        }
        _ => vec![wreath_of_perm(&p, &Perm::identity(p.n()))],
    };
    let mut y = Vec::new();
    for base in &bases {
        for a in 3..=p.n() {
            if wreathlab_core::numbers::factorial(a as u64) > BigInt::from(ctx.caps.terms) {
                break;
            }
            y.push(Labeled {
                a,
                base: Some(base.clone()),
                vector: kernel::build_y_a(&p, a, base, &ctx.caps)?,
            });
        }
    }
    let mut out = json!({ "n": p.n(), "k": p.k(), "x": x, "y": y });
    if let Some(all) = &all {
        if span {
            let family: Vec<SparseKernelVector> = x.iter().chain(&y).map(|l| l.vector.clone()).collect();
            out["span"] = serde_json::to_value(kernel::span_report(&p, all, &family, &ctx.caps)?)?;
        }
    }
    ctx.sink.json(&out)?;
    Ok(0)
}

pub fn nullspace(ctx: &Ctx, nk: NK) -> Result<u8> {
    require_json(ctx, "nullspace")?;
    let p = params(nk)?;
    let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
    let m: WreathMatrix = build_wreath_matrix(&wreaths, &ctx.caps)?;
    let basis: Vec<Vec<String>> = exact_nullspace(&m, &ctx.caps)?
        .iter()
        .map(|v| v.iter().map(rational_to_string).collect())
        .collect();
    ctx.sink.json(&json!({
        "n": p.n(),
        "k": p.k(),
        "dimension": basis.len(),
        "wreaths": wreaths,
        "basis": basis,
    }))?;
    Ok(0)
}

pub fn decompose(
    ctx: &Ctx,
    nk: NK,
    node_budget: Option<u64>,
    time_budget: Option<u64>,
    checkpoint: Option<PathBuf>,
    resume: Option<PathBuf>,
) -> Result<u8> {
    require_json(ctx, "decompose")?;
    let p = params(nk)?;
    let resume = resume.as_deref().map(Checkpoint::load).transpose()?;
    let budget = Budget {
        nodes: node_budget,
        time: time_budget.map(Duration::from_secs),
    };
    let outcome = decomp::find_decomposition(&p, budget, resume.as_ref(), &ctx.caps)?;
    let nodes = outcome.nodes();
    let (status, decomposition, code) = match &outcome {
        SearchOutcome::Found { decomposition, .. } => ("found", decomposition.wreaths().to_vec(), 0),
        SearchOutcome::Exhausted { .. } => ("exhausted", Vec::new(), EXIT_EXHAUSTED),
        SearchOutcome::BudgetExceeded { checkpoint: cp } => {
            if let Some(path) = &checkpoint {
                cp.save(path)?;
                info!("checkpoint written to {}", path.display());
            }
            ("budget", Vec::new(), EXIT_BUDGET)
        }
    };
    ctx.sink.json(&json!({
        "n": p.n(),
        "k": p.k(),
        "c": p.c(),
        "status": status,
        "decomposition": decomposition,
        "nodes": nodes,
    }))?;
    Ok(code)
}

fn read_decomposition(path: &Path) -> Result<Vec<Wreath>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let list = match value {
        Value::Object(mut map) => map
            .remove("decomposition")
            .context("expected a \"decomposition\" field")?,
        other => other,
    };
    Ok(serde_json::from_value(list)?)
}

pub fn verify(ctx: &Ctx, nk: NK, input: &Path) -> Result<u8> {
    require_json(ctx, "verify")?;
    let p = params(nk)?;
    let d = Decomposition::new(read_decomposition(input)?);
    let valid = decomp::verify_decomposition(&p, &d);
    let mut out = json!({ "n": p.n(), "k": p.k(), "valid": valid });
    let mut ok = valid;
    if valid {
        let wreaths = enumerate_wreaths(&p, &ctx.caps)?;
        let report = decomp::condition_report(&p, &wreaths, &d)?;
        ok = report.b && report.d && report.round_trip;
        out["conditions"] = serde_json::to_value(report)?;
    }
    ctx.sink.json(&out)?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

pub fn dh_bound(ctx: &Ctx, pair: Option<(u32, u32)>, max_n: u32) -> Result<u8> {
    require_json(ctx, "dh-bound")?;
    let pairs: Vec<(u32, u32)> = match pair {
        Some(pair) => vec![pair],
        None => (5..=max_n).flat_map(|n| (2..n).filter(move |k| 2 * k < n).map(move |k| (n, k))).collect(),
    };
    let mut reports = Vec::new();
    for (n, k) in pairs {
        let p = WreathParams::new(n, k)?;
        let mut r = serde_json::to_value(decomp::dh_bound(&p)?)?;
        r["n"] = json!(n);
        r["k"] = json!(k);
        reports.push(r);
    }
    ctx.sink.json(&json!({ "reports": reports }))?;
    Ok(0)
}

pub fn scan_distinct(ctx: &Ctx, ns: RangeInclusive<u32>, ks: RangeInclusive<u32>) -> Result<u8> {
    require_json(ctx, "scan-distinct")?;
    let report = spectral::distinctness_scan(ns, ks)?;
    let mut out = serde_json::to_value(&report)?;
    out["any_collision"] = json!(report.any_collision());
    ctx.sink.json(&out)?;
    Ok(0)
}
