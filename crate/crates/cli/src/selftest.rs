//! Invariant checks over a fixed roster of small cases.

use anyhow::Result;
use num_bigint::BigInt;
use serde::Serialize;
use wreathlab_core::combinat::{enumerate_wreaths, wreath_count, wreath_of_perm};
use wreathlab_core::kernel::{build_x_a, build_y_a, is_in_kernel};
use wreathlab_core::matrixcore::{build_wreath_matrix, eigen_certify, verify_rank_one_decomposition};
use wreathlab_core::spectral::{self, BTable};
use wreathlab_core::{decomp, Caps, Perm, WreathMatrix, WreathParams};

use crate::{Ctx, EXIT_INVARIANT};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Depth {
    /// Counting and matrix structure only (`k = n/2`).
    Structure,
    Full,
    CountOnly,
    /// Runs only with `--heavy`.
    Heavy,
}

const ROSTER: &[(u32, u32, Depth)] = &[
    (5, 2, Depth::Full),
    (6, 3, Depth::Structure),
    (7, 2, Depth::Full),
    (7, 3, Depth::Full),
    (8, 3, Depth::Full),
    (9, 3, Depth::Full),
    (9, 4, Depth::Full),
    (10, 3, Depth::CountOnly),
    (10, 4, Depth::Heavy),
];

#[derive(Serialize)]
struct Check {
    n: u32,
    k: u32,
    name: &'static str,
    /// `null` when skipped.
    ok: Option<bool>,
    detail: String,
}

struct Runner<'a> {
    caps: &'a Caps,
    checks: Vec<Check>,
    params: WreathParams,
}

impl Runner<'_> {
    fn record(&mut self, name: &'static str, result: Result<Option<bool>>) {
        let (ok, detail) = match result {
            Ok(Some(ok)) => (Some(ok), String::new()),
            Ok(None) => (None, "skipped".to_string()),
            Err(e) => (Some(false), format!("{e:#}")),
        };
        let status = match ok {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        let sep = if detail.is_empty() { "" } else { ": " };
        eprintln!("{status} ({},{}) {name}{sep}{detail}", self.params.n(), self.params.k());
        self.checks.push(Check {
            n: self.params.n(),
            k: self.params.k(),
            name,
            ok,
            detail,
        });
    }

    fn case(&mut self, depth: Depth, heavy: bool) -> Result<()> {
        let p = self.params;
        let caps = self.caps;
        if depth == Depth::Heavy && !heavy {
            self.record("all", Ok(None));
            return Ok(());
        }
        let wreaths = enumerate_wreaths(&p, caps)?;
        self.record("count", Ok(Some(BigInt::from(wreaths.len()) == wreath_count(&p))));
        self.record("well-formed", Ok(Some(wreaths.iter().all(|w| w.is_well_formed(&p)))));
        if depth == Depth::CountOnly {
            return Ok(());
        }
        let small = wreaths.len() <= caps.matrix_rows && depth != Depth::Heavy;
        let matrix: Option<WreathMatrix> = if small {
            Some(build_wreath_matrix(&wreaths, caps)?)
        } else {
            None
        };
        if let Some(m) = &matrix {
            let degree = i64::from(p.n() / p.g());
            self.record("symmetric", Ok(Some(m.is_symmetric())));
            self.record("diagonal", Ok(Some((0..m.rows()).all(|i| *m.get(i, i) == degree))));
            self.record("rank-one", verify_rank_one_decomposition(&p, m, &wreaths, caps).map(Some).map_err(Into::into));
        } else {
            self.record("matrix", Ok(None));
        }
        if depth == Depth::Structure {
            let two = matrix.as_ref().map(|m| (0..m.rows()).all(|i| (0..m.cols()).all(|j| *m.get(i, j) == if i == j { 2 } else { 0 })));
            self.record("equals-2I", Ok(two));
            return Ok(());
        }

        let s = spectral::full_spectrum(&p)?;
        self.record("trace", Ok(Some(s.trace_ok())));
        if let Some(m) = &matrix {
            let lambda1 = s.lambda1.clone();
            let sums = (0..m.rows()).all(|i| BigInt::from(m.row(i).iter().sum::<i64>()) == lambda1);
            self.record("row-sums", Ok(Some(sums)));
        }
        let certify = match &matrix {
            Some(m) if wreaths.len() <= caps.certify_rows => eigen_certify(m, &s.claims()).map(Some),
            _ => Ok(None),
        };
        self.record("certified", certify.map_err(Into::into));
        self.record("b-oracle", (|| Ok(Some(BTable::oracle(&p, caps)? == BTable::formula(&p)?)))());
        if p.k_divides_n() || p.coprime() {
            let table = BTable::formula(&p)?;
            let agree = (2..=p.k()).try_fold(true, |acc, l| {
                Ok::<_, anyhow::Error>(acc && spectral::lambda_closed(&p, l)? == spectral::lambda_from_b(&p, l, &table)?)
            });
            self.record("closed-form", agree.map(Some));
        }
        self.record("kernel-vectors", (|| {
            let mut ok = true;
            for a in 2..=p.n() / 2 {
                if a != p.k() {
                    ok &= is_in_kernel(&p, &build_x_a(&p, a)?);
                }
            }
            let base = wreath_of_perm(&p, &Perm::identity(p.n()));
            ok &= is_in_kernel(&p, &build_y_a(&p, 3, &base, caps)?);
            Ok(Some(ok))
        })());
        self.record("dh-bound", decomp::dh_bound(&p).map(|r| Some(r.bound == r.c.into())).map_err(Into::into));
        Ok(())
    }
}

pub fn run(ctx: &Ctx) -> Result<u8> {
    let mut all = Vec::new();
    for &(n, k, depth) in ROSTER {
        let mut runner = Runner {
            caps: &ctx.caps,
            checks: Vec::new(),
            params: WreathParams::new(n, k)?,
        };
        if let Err(e) = runner.case(depth, ctx.heavy) {
            runner.record("setup", Err(e));
        }
        all.extend(runner.checks);
    }
    let failed = all.iter().filter(|c| c.ok == Some(false)).count();
    ctx.sink.json(&serde_json::json!({
        "checks": all,
        "failed": failed,
        "all_ok": failed == 0,
    }))?;
    Ok(if failed == 0 { 0 } else { EXIT_INVARIANT })
}
