//! Partitions of all `k`-subsets into disjoint wreaths.
//!
//! A decomposition has exactly `c = g·C(n,k)/n` wreaths. The search is an
//! exact cover over the `k`-subsets with one candidate row per wreath. The
//! remaining functions walk the equivalent kernel-vector characterisations:
//! (a) a decomposition exists, (b) a two-valued kernel vector, (c) a kernel
//! vector with few positive entries and few zeros, (d) a kernel vector with few
//! positive entries whose negative wreaths cover every subset.

mod dlx;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use log::info;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{all_subsets, containing_count, enumerate_wreaths, wreath_count, KSubset, Wreath, WreathParams};
use crate::error::{Error, Result};
use crate::json;
use crate::kernel::{is_in_kernel, SparseKernelVector};
use crate::matrixcore::ExactVector;
use crate::numbers::binomial;
use crate::spectral::lambda1;
use crate::Caps;

use dlx::{Dlx, Limits, Step};

/// `c` disjoint wreaths, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    wreaths: Vec<Wreath>,
}

impl Decomposition {
    pub fn new(mut wreaths: Vec<Wreath>) -> Self {
        wreaths.sort_unstable();
        Decomposition { wreaths }
    }

    pub fn wreaths(&self) -> &[Wreath] {
        &self.wreaths
    }

    pub fn len(&self) -> usize {
        self.wreaths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wreaths.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

/// Resumable search state: the rows chosen from the root, and the node count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u32,
    pub k: u32,
    pub path: Vec<usize>,
    pub nodes: u64,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { decomposition: Decomposition, nodes: u64 },
    Exhausted { nodes: u64 },
    BudgetExceeded { checkpoint: Checkpoint },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::Exhausted { nodes } => *nodes,
            SearchOutcome::BudgetExceeded { checkpoint } => checkpoint.nodes,
        }
    }
}

fn subset_index(params: &WreathParams) -> HashMap<KSubset, usize> {
    all_subsets(params.n(), params.k())
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect()
}

/// Exact-cover search; columns are the `k`-subsets in rank order, rows the
/// wreaths in canonical order, always branching on the column with the fewest
/// candidates (lowest rank on ties).
pub fn find_decomposition(
    params: &WreathParams,
    budget: Budget,
    resume: Option<&Checkpoint>,
    caps: &Caps,
) -> Result<SearchOutcome> {
    let wreaths = enumerate_wreaths(params, caps)?;
    let index = subset_index(params);
    let rows: Vec<Vec<usize>> = wreaths
        .iter()
        .map(|w| w.blocks().iter().map(|b| index[b]).collect())
        .collect();
    let mut dlx = Dlx::new(index.len(), &rows);
    if let Some(cp) = resume {
        if (cp.n, cp.k) != (params.n(), params.k()) {
            return Err(Error::InvalidCheckpoint(format!(
                "checkpoint is for ({}, {}), search is for {params}",
                cp.n, cp.k
            )));
        }
        if let Some(&bad) = cp.path.iter().find(|&&r| r >= wreaths.len()) {
            return Err(Error::InvalidCheckpoint(format!("row {bad} out of range")));
        }
        dlx.replay(&cp.path)?;
        dlx.nodes = cp.nodes;
        info!("resumed {params} at depth {} after {} nodes", cp.path.len(), cp.nodes);
    }
    let limits = Limits {
        nodes: budget.nodes.unwrap_or(u64::MAX),
        deadline: budget.time.map(|t| Instant::now() + t),
    };
    Ok(match dlx.run(&limits) {
        Step::Found(path) => {
            let decomposition = Decomposition::new(path.into_iter().map(|r| wreaths[r].clone()).collect());
            if !verify_decomposition(params, &decomposition) {
                return Err(Error::Invariant("search returned an invalid cover".into()));
            }
            SearchOutcome::Found {
                decomposition,
                nodes: dlx.nodes,
            }
        }
        Step::Exhausted => SearchOutcome::Exhausted { nodes: dlx.nodes },
        Step::Budget(path) => SearchOutcome::BudgetExceeded {
            checkpoint: Checkpoint {
                n: params.n(),
                k: params.k(),
                path,
                nodes: dlx.nodes,
            },
        },
    })
}

/// `|D| = c`, every wreath well formed, and no block repeated.
pub fn verify_decomposition(params: &WreathParams, d: &Decomposition) -> bool {
    if d.len() as u64 != params.c() || !d.wreaths.iter().all(|w| w.is_well_formed(params)) {
        return false;
    }
    let mut seen = HashSet::new();
    let distinct = d.wreaths.iter().flat_map(|w| w.blocks()).all(|b| seen.insert(*b));
    distinct && seen.len() as u64 == params.subset_count()
}

pub fn wreaths_intersect(a: &Wreath, b: &Wreath) -> bool {
    a.common_blocks(b) > 0
}

fn check_len(wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<()> {
    if wreaths.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} wreaths, vector of length {}",
            wreaths.len(),
            v.len()
        )));
    }
    Ok(())
}

fn require_kernel(params: &WreathParams, wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<()> {
    check_len(wreaths, v)?;
    if !is_in_kernel(params, &SparseKernelVector::from_dense(wreaths, v)?) {
        return Err(Error::NotInKernel);
    }
    Ok(())
}

/// Entries `N - c` on the wreaths of `d` and `-c` elsewhere; lies in the
/// kernel and takes the value `N - c` exactly `c` times.
pub fn condition_b_vector(
    params: &WreathParams,
    wreaths: &[Wreath],
    d: &Decomposition,
) -> Result<ExactVector<BigRational>> {
    if !verify_decomposition(params, d) {
        return Err(Error::NotADecomposition(format!("{} wreaths at {params}", d.len())));
    }
    let total = BigInt::from(wreaths.len());
    let c = BigInt::from(params.c());
    let inside = BigRational::from_integer(&total - &c);
    let outside = BigRational::from_integer(-c);
    let members: HashSet<&Wreath> = d.wreaths.iter().collect();
    if !d.wreaths.iter().all(|w| wreaths.binary_search(w).is_ok()) {
        return Err(Error::NotADecomposition("wreath missing from the index".into()));
    }
    let v = ExactVector::new(
        wreaths
            .iter()
            .map(|w| if members.contains(w) { inside.clone() } else { outside.clone() })
            .collect(),
    );
    if !is_in_kernel(params, &SparseKernelVector::from_dense(wreaths, &v)?) {
        return Err(Error::KernelCheckFailed("condition (b) vector".into()));
    }
    Ok(v)
}

/// At most this many positive entries are allowed in (c) and (d).
pub fn positive_threshold(params: &WreathParams) -> BigInt {
    if params.k_divides_n() {
        binomial(params.n() as i64 - 1, params.k() as i64 - 1)
    } else {
        BigInt::from(params.c())
    }
}

/// Strictly fewer zeros than this are allowed in (c).
pub fn zero_threshold(params: &WreathParams) -> BigInt {
    containing_count(params)
}

fn count(v: &ExactVector<BigRational>, f: impl Fn(&BigRational) -> bool) -> BigInt {
    BigInt::from(v.iter().filter(|x| f(x)).count())
}

/// Kernel vector with at most the allowed positive entries and fewer zeros
/// than the threshold. The vector is taken as given, with no sign flip.
pub fn check_condition_c(params: &WreathParams, wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<bool> {
    require_kernel(params, wreaths, v)?;
    Ok(count(v, Signed::is_positive) <= positive_threshold(params) && count(v, Zero::is_zero) < zero_threshold(params))
}

/// First subset that no negatively labelled wreath contains.
pub fn condition_d_witness(params: &WreathParams, wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Option<KSubset> {
    let covered: HashSet<KSubset> = wreaths
        .iter()
        .zip(v.iter())
        .filter(|(_, x)| x.is_negative())
        .flat_map(|(w, _)| w.blocks().iter().copied())
        .collect();
    all_subsets(params.n(), params.k()).into_iter().find(|t| !covered.contains(t))
}

/// Kernel vector with at most `c` positive entries whose negative wreaths
/// cover every subset.
pub fn check_condition_d(params: &WreathParams, wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<bool> {
    require_kernel(params, wreaths, v)?;
    Ok(count(v, Signed::is_positive) <= BigInt::from(params.c()) && condition_d_witness(params, wreaths, v).is_none())
}

/// The wreaths with positive entries of a vector satisfying (d).
pub fn decomposition_from_d(params: &WreathParams, wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<Decomposition> {
    if !check_condition_d(params, wreaths, v)? {
        return Err(Error::HypothesisViolated("vector does not satisfy condition (d)".into()));
    }
    let chosen: Vec<Wreath> = wreaths
        .iter()
        .zip(v.iter())
        .filter(|(_, x)| x.is_positive())
        .map(|(w, _)| w.clone())
        .collect();
    let mut cover: HashMap<KSubset, usize> = HashMap::new();
    for b in chosen.iter().flat_map(|w| w.blocks()) {
        *cover.entry(*b).or_default() += 1;
    }
    if let Some(witness) = all_subsets(params.n(), params.k())
        .into_iter()
        .find(|t| cover.get(t) != Some(&1))
    {
        return Err(Error::ExtractionFailed { witness });
    }
    let d = Decomposition::new(chosen);
    if !verify_decomposition(params, &d) {
        return Err(Error::Invariant("extracted wreaths cover every subset once but do not verify".into()));
    }
    Ok(d)
}

/// Outcome of walking (a) ⇒ (b) ⇒ (c) ⇒ (d) ⇒ (a) from a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub round_trip: bool,
    /// Subset left uncovered by negative wreaths, when (d) fails.
    pub d_witness: Option<KSubset>,
}

pub fn condition_report(params: &WreathParams, wreaths: &[Wreath], d: &Decomposition) -> Result<ConditionReport> {
    let a = verify_decomposition(params, d);
    if !a {
        return Ok(ConditionReport {
            a,
            b: false,
            c: false,
            d: false,
            round_trip: false,
            d_witness: None,
        });
    }
    let v = condition_b_vector(params, wreaths, d)?;
    let mut tally: HashMap<&BigRational, u64> = HashMap::new();
    for x in v.iter() {
        *tally.entry(x).or_default() += 1;
    }
    let b = tally.len() <= 2 && tally.values().any(|&m| m == params.c());
    let c = check_condition_c(params, wreaths, &v)?;
    let d_ok = check_condition_d(params, wreaths, &v)?;
    let round_trip = d_ok && decomposition_from_d(params, wreaths, &v).is_ok_and(|e| &e == d);
    Ok(ConditionReport {
        a,
        b,
        c,
        d: d_ok,
        round_trip,
        d_witness: condition_d_witness(params, wreaths, &v),
    })
}

/// Ratio bound on independent sets of the wreath intersection graph, computed
/// from `M - (n/g)I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DHBoundReport {
    #[serde(rename = "N", with = "json::bignum")]
    pub wreath_count: BigInt,
    #[serde(with = "json::bignum")]
    pub lambda1_tilde: BigInt,
    #[serde(with = "json::rational")]
    pub lambda_min: BigRational,
    #[serde(with = "json::rational")]
    pub bound: BigRational,
    #[serde(with = "json::bignum")]
    pub c: BigInt,
}

pub fn dh_bound(params: &WreathParams) -> Result<DHBoundReport> {
    params.require_below_half()?;
    let total = wreath_count(params);
    let degree = BigInt::from(params.n() / params.g());
    let lambda1_tilde = lambda1(params)? - &degree;
    let lambda_min = BigRational::from_integer(-degree);
    let bound = -&lambda_min / (BigRational::from_integer(lambda1_tilde.clone()) - &lambda_min)
        * BigRational::from_integer(total.clone());
    let c = BigInt::from(params.g()) * binomial(params.n() as i64, params.k() as i64) / params.n();
    if bound != BigRational::from_integer(c.clone()) {
        return Err(Error::Invariant(format!("ratio bound {bound} differs from c = {c} at {params}")));
    }
    Ok(DHBoundReport {
        wreath_count: total,
        lambda1_tilde,
        lambda_min,
        bound,
        c,
    })
}
