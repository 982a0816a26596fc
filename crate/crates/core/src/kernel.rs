//! Explicit vectors in the kernel of the wreath matrix.
//!
//! `M = A Aᵀ` with `A` the wreath/subset incidence matrix, so `v` lies in the
//! kernel exactly when `Σ_W v_W · w_W = 0`, where `w_W` is the indicator of
//! the blocks of `W`. That sum is accumulated block by block and never needs
//! `M`.

use std::collections::btree_map::Entry as Slot;
use std::collections::{BTreeMap, HashMap};

use log::warn;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinat::{
    all_subsets, apply_perm, heap_permutations, wreath_count, wreath_of_perm, KSubset, Perm,
    Wreath, WreathParams,
};
use crate::error::{Error, Result};
use crate::json;
use crate::matrixcore::{exact_rank, ExactMatrix, ExactVector};
use crate::numbers::{binomial, factorial};
use crate::Caps;

/// Rational combination of wreaths; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseKernelVector {
    coeffs: BTreeMap<Wreath, BigRational>,
    all_cancelled: bool,
}

impl SparseKernelVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sums the given terms, merging repeated wreaths.
    pub fn from_terms(terms: impl IntoIterator<Item = (Wreath, BigRational)>) -> Self {
        let mut v = Self::zero();
        let mut any = false;
        for (w, c) in terms {
            any = true;
            v.add_term(w, c);
        }
        v.all_cancelled = any && v.is_zero();
        v
    }

    pub fn add_term(&mut self, w: Wreath, c: BigRational) {
        match self.coeffs.entry(w) {
            Slot::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Slot::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: &BigRational, other: &Self, b: &BigRational) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .map(|(w, c)| (w.clone(), c * a))
                .chain(other.coeffs.iter().map(|(w, c)| (w.clone(), c * b))),
        )
    }

    pub fn coeff(&self, w: &Wreath) -> BigRational {
        self.coeffs.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms were supplied but all cancelled.
    pub fn all_cancelled(&self) -> bool {
        self.all_cancelled
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Wreath, &BigRational)> {
        self.coeffs.iter()
    }

    /// Dense coordinates against `wreaths`; errors if the support leaves it.
    pub fn to_dense(&self, wreaths: &[Wreath]) -> Result<ExactVector<BigRational>> {
        let index: HashMap<&Wreath, usize> = wreaths.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut out = vec![BigRational::zero(); wreaths.len()];
        for (w, c) in &self.coeffs {
            let i = index
                .get(w)
                .ok_or_else(|| Error::DimensionMismatch(format!("wreath {w} not in the index")))?;
            out[*i] = c.clone();
        }
        Ok(ExactVector::new(out))
    }

    pub fn from_dense(wreaths: &[Wreath], v: &ExactVector<BigRational>) -> Result<Self> {
        if wreaths.len() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} wreaths, vector of length {}",
                wreaths.len(),
                v.len()
            )));
        }
        Ok(Self::from_terms(
            wreaths.iter().cloned().zip(v.iter().cloned()),
        ))
    }

    /// Integer multiple with coprime entries, against `wreaths`.
    fn primitive_row(&self, wreaths: &[Wreath]) -> Result<Vec<BigInt>> {
        let dense = self.to_dense(wreaths)?;
        let lcm = dense
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Ok(dense
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    wreath: Wreath,
    #[serde(with = "json::rational")]
    coeff: BigRational,
}

impl Serialize for SparseKernelVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = self
            .coeffs
            .iter()
            .map(|(w, c)| Entry {
                wreath: w.clone(),
                coeff: c.clone(),
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseKernelVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut v = Self::zero();
        for e in entries {
            if e.coeff.is_zero() {
                return Err(D::Error::custom("zero coefficient in kernel vector"));
            }
            if v.coeffs.insert(e.wreath, e.coeff).is_some() {
                return Err(D::Error::custom("repeated wreath in kernel vector"));
            }
        }
        Ok(v)
    }
}

/// A subgroup of `S_n` with a `±1`-valued linear character.
#[derive(Clone, Debug)]
pub struct CharacterSpec {
    elements: Vec<Perm>,
    values: Vec<i8>,
}

impl CharacterSpec {
    /// Validates closure, inverses and the homomorphism property.
    pub fn new(elements: Vec<Perm>, values: Vec<i8>, caps: &Caps) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidCharacter(msg));
        if elements.is_empty() {
            return invalid("empty group".into());
        }
        if elements.len() != values.len() {
            return invalid(format!("{} elements but {} values", elements.len(), values.len()));
        }
        if elements.len() > caps.subgroup {
            return Err(Error::CapExceeded {
                what: "subgroup order",
                value: elements.len() as u64,
                cap: caps.subgroup as u64,
            });
        }
        let n = elements[0].n();
        if elements.iter().any(|p| p.n() != n) {
            return invalid("elements act on different degrees".into());
        }
        if let Some(v) = values.iter().find(|v| v.abs() != 1) {
            return invalid(format!("value {v} is not ±1"));
        }
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        if index.len() != elements.len() {
            return invalid("repeated group element".into());
        }
        match index.get(&Perm::identity(n)) {
            Some(&i) if values[i] == 1 => {}
            Some(_) => return invalid("identity must map to 1".into()),
            None => return invalid("identity missing".into()),
        }
        for (i, p) in elements.iter().enumerate() {
            if !index.contains_key(&p.inverse()) {
                return invalid(format!("inverse of {:?} missing", p.images_one_based()));
            }
            for (j, q) in elements.iter().enumerate() {
                let Some(&r) = index.get(&p.compose(q)) else {
                    return invalid("not closed under composition".into());
                };
                if values[r] != values[i] * values[j] {
                    return invalid("values are not a homomorphism".into());
                }
            }
        }
        Ok(CharacterSpec { elements, values })
    }

    /// `S_a` on `{1..a}` inside `S_n` with the sign character.
    pub fn sign_on_prefix(n: u32, a: u32, caps: &Caps) -> Result<Self> {
        if a == 0 || a > n {
            return Err(Error::HypothesisViolated(format!("need 1 <= a <= n, got a = {a}")));
        }
        check_terms(a, caps)?;
        let (elements, values) = prefix_group(n, a).into_iter().unzip();
        Self::new(elements, values, caps)
    }

    /// The trivial group with the trivial character.
    pub fn trivial(n: u32) -> Self {
        CharacterSpec {
            elements: vec![Perm::identity(n)],
            values: vec![1],
        }
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `Σ ρ(h)` over `h ∈ H` with `h(T) = T`; zero iff `ρ` is nontrivial on
    /// the stabiliser.
    pub fn stabiliser_sum(&self, t: &KSubset) -> i64 {
        self.elements
            .iter()
            .zip(&self.values)
            .filter(|(h, _)| t.map(h) == *t)
            .map(|(_, &v)| v as i64)
            .sum()
    }
}

/// Every element of `S_a` on `{1..a}`, fixing `a+1..n`, with its sign.
fn prefix_group(n: u32, a: u32) -> Vec<(Perm, i8)> {
    let mut out = Vec::new();
    let mut head: Vec<u8> = (0..a as u8).collect();
    heap_permutations(&mut head, 0, |arr, even| {
        let mut images = arr.to_vec();
        images.extend(a as u8..n as u8);
        out.push((Perm::from_zero_based_unchecked(images), if even { 1 } else { -1 }));
    });
    out
}

fn check_terms(a: u32, caps: &Caps) -> Result<()> {
    let terms = factorial(a as u64);
    if terms > BigInt::from(caps.terms) {
        return Err(Error::CapExceeded {
            what: "terms (a!)",
            value: u64::try_from(&terms).unwrap_or(u64::MAX),
            cap: caps.terms,
        });
    }
    Ok(())
}

/// `⟨v, w_T⟩ = 0` for every `k`-subset `T`.
pub fn is_in_kernel(params: &WreathParams, v: &SparseKernelVector) -> bool {
    let mut sums: HashMap<KSubset, BigRational> = HashMap::new();
    for (w, c) in v.iter() {
        for b in w.blocks() {
            *sums.entry(*b).or_insert_with(BigRational::zero) += c;
        }
    }
    debug_assert!(v.iter().all(|(w, _)| w.is_well_formed(params)));
    sums.values().all(Zero::is_zero)
}

/// Same check by multiplying the dense vector against every incidence row.
pub fn is_in_kernel_dense(
    params: &WreathParams,
    wreaths: &[Wreath],
    v: &ExactVector<BigRational>,
) -> Result<bool> {
    if wreaths.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} wreaths, vector of length {}",
            wreaths.len(),
            v.len()
        )));
    }
    Ok(all_subsets(params.n(), params.k()).par_iter().all(|t| {
        wreaths
            .iter()
            .zip(v.iter())
            .filter(|(w, _)| w.contains(t))
            .fold(BigRational::zero(), |acc, (_, c)| acc + c)
            .is_zero()
    }))
}

fn verified(params: &WreathParams, v: SparseKernelVector, what: &str) -> Result<SparseKernelVector> {
    if !is_in_kernel(params, &v) {
        return Err(Error::KernelCheckFailed(format!("{what} at {params}")));
    }
    if v.all_cancelled() {
        warn!("{what} at {params} cancelled to the zero vector");
    }
    Ok(v)
}

fn one() -> BigRational {
    BigRational::one()
}

/// `e_{W_id} - e_{W_τ1} - e_{W_τ(a+1)} + e_{W_τ1·τ(a+1)}` with `τ_i = (i i+1)`,
/// without checking the hypothesis on `a` or the kernel.
pub fn x_a_combination(params: &WreathParams, a: u32) -> Result<SparseKernelVector> {
    let n = params.n();
    if a + 2 > n {
        return Err(Error::HypothesisViolated(format!("need a + 2 <= n, got a = {a}")));
    }
    let t1 = Perm::transposition(n, 1, 2)?;
    let ta = Perm::transposition(n, a + 1, a + 2)?;
    let both = t1.compose(&ta);
    Ok(SparseKernelVector::from_terms([
        (wreath_of_perm(params, &Perm::identity(n)), one()),
        (wreath_of_perm(params, &t1), -one()),
        (wreath_of_perm(params, &ta), -one()),
        (wreath_of_perm(params, &both), one()),
    ]))
}

/// The four-term vector `x_a`, for `2 <= a <= n/2`, `a != k`.
pub fn build_x_a(params: &WreathParams, a: u32) -> Result<SparseKernelVector> {
    if a < 2 || 2 * a > params.n() || a == params.k() {
        return Err(Error::HypothesisViolated(format!(
            "x_a needs 2 <= a <= n/2 and a != k, got a = {a} at {params}"
        )));
    }
    verified(params, x_a_combination(params, a)?, "x_a")
}

/// `Σ_{σ ∈ S_a} sgn(σ) e_{σW}` for `3 <= a <= n`.
pub fn build_y_a(params: &WreathParams, a: u32, w: &Wreath, caps: &Caps) -> Result<SparseKernelVector> {
    if a < 3 || a > params.n() {
        return Err(Error::HypothesisViolated(format!("y_a needs 3 <= a <= n, got a = {a}")));
    }
    check_terms(a, caps)?;
    let terms = prefix_group(params.n(), a)
        .into_iter()
        .map(|(sigma, s)| (apply_perm(&sigma, w), BigRational::from_integer(s.into())));
    verified(params, SparseKernelVector::from_terms(terms), "y_a")
}

/// First `T` in subset order on which `ρ` restricted to the stabiliser is
/// trivial, if any.
pub fn character_hypothesis_witness(params: &WreathParams, spec: &CharacterSpec) -> Option<KSubset> {
    all_subsets(params.n(), params.k())
        .par_iter()
        .find_first(|t| spec.stabiliser_sum(t) != 0)
        .copied()
}

/// `Σ_{h ∈ H} ρ(h) e_{hW}`.
pub fn build_char_vector(
    params: &WreathParams,
    spec: &CharacterSpec,
    w: &Wreath,
) -> Result<SparseKernelVector> {
    if spec.elements[0].n() != params.n() {
        return Err(Error::InvalidCharacter(format!(
            "group acts on {} points, n = {}",
            spec.elements[0].n(),
            params.n()
        )));
    }
    if let Some(witness) = character_hypothesis_witness(params, spec) {
        return Err(Error::HypothesisFailed { witness });
    }
    let terms = spec
        .elements
        .iter()
        .zip(&spec.values)
        .map(|(h, &v)| (apply_perm(h, w), BigRational::from_integer(v.into())));
    verified(params, SparseKernelVector::from_terms(terms), "character vector")
}

/// `|W| - (C(n,k) - n + 1)`.
pub fn kernel_dimension(params: &WreathParams) -> Result<BigInt> {
    params.require_below_half()?;
    Ok(wreath_count(params) - (binomial(params.n() as i64, params.k() as i64) - params.n() + 1))
}

/// Dimension of the span of some kernel vectors next to the kernel dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub vectors: usize,
    pub span_dimension: usize,
    #[serde(with = "json::bignum")]
    pub kernel_dimension: BigInt,
}

pub fn span_report(
    params: &WreathParams,
    wreaths: &[Wreath],
    vectors: &[SparseKernelVector],
    caps: &Caps,
) -> Result<SpanReport> {
    let rows = vectors
        .iter()
        .map(|v| v.primitive_row(wreaths))
        .collect::<Result<Vec<_>>>()?;
    let span_dimension = if rows.is_empty() {
        0
    } else {
        exact_rank(&ExactMatrix::from_rows(rows)?, caps)?
    };
    Ok(SpanReport {
        vectors: vectors.len(),
        span_dimension,
        kernel_dimension: kernel_dimension(params)?,
    })
}

/// All `x_a` and `y_{a,W}` for `W` ranging over `sample` and every allowed `a`
/// whose term count fits the cap.
pub fn standard_family(
    params: &WreathParams,
    sample: &[Wreath],
    caps: &Caps,
) -> Result<Vec<SparseKernelVector>> {
    let mut out = Vec::new();
    for a in 2..=params.n() / 2 {
        if a != params.k() {
            out.push(build_x_a(params, a)?);
        }
    }
    for w in sample {
        for a in 3..=params.n() {
            if factorial(a as u64) > BigInt::from(caps.terms) {
                break;
            }
            let v = build_y_a(params, a, w, caps)?;
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    Ok(out)
}
