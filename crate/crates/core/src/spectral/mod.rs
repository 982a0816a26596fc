//! Eigenvalues of the wreath matrix in closed form.
//!
//! For `k < n/2` the wreath matrix has eigenvalue `λ₁` with multiplicity 1,
//! `λ_l` with multiplicity `C(n,l) - C(n,l-1)` for `2 <= l <= k`, and 0 on the
//! rest. `λ_l` is an alternating binomial sum of the coefficients
//! `b_{l,j} = ⟨w_A, w_T⟩` where `A = {1..l}` and `T = {l-j+1, ..., l-j+k}`.
//! Those coefficients have closed forms in three regimes (`k | n`,
//! `gcd(n,k) = 1`, and the general case); [`b_oracle`] counts them directly.

mod poly;

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use poly::Poly;

use crate::combinat::{wreath_count, wreaths_containing, KSubset, WreathParams};
use crate::error::{Error, Result};
use crate::json;
use crate::numbers::{binomial, expect_integer, factorial, factorial_i, pow, sign};
use crate::Caps;

fn fact(x: u32) -> BigInt {
    factorial(x as u64)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn exact(q: BigRational, what: &str) -> BigInt {
    expect_integer(&q, what)
}

fn check_level(params: &WreathParams, l: u32) -> Result<()> {
    if l < 2 || l > params.k() {
        return Err(Error::IndexOutOfRange(format!(
            "level l = {l} outside 2..={}",
            params.k()
        )));
    }
    Ok(())
}

fn check_lj(params: &WreathParams, l: u32, j: u32) -> Result<()> {
    check_level(params, l)?;
    if j > l {
        return Err(Error::IndexOutOfRange(format!("j = {j} outside 0..={l}")));
    }
    Ok(())
}

/// Largest eigenvalue, the common row sum of `M`.
pub fn lambda1(params: &WreathParams) -> Result<BigInt> {
    params.require_below_half()?;
    let (n, k, g) = (params.n(), params.k(), params.g());
    Ok(if params.k_divides_n() {
        BigInt::from(n * n) * fact(n - k)
            / (BigInt::from(k * k) * pow(&fact(k), (n / k - 1) as u64) * fact(n / k))
    } else {
        BigInt::from(n) * fact(n - k) * fact(k)
            / (BigInt::from(2 * g) * pow(&fact(g), (n / g) as u64))
    })
}

/// `b_{l,j}` by counting pairs `(W, S)` with `T ∈ W`, `S ∈ W`, `A ⊆ S`,
/// enumerating only the wreaths that contain `T`.
pub fn b_oracle(params: &WreathParams, l: u32, j: u32, caps: &Caps) -> Result<BigInt> {
    check_lj(params, l, j)?;
    let n = params.n();
    let a = KSubset::from_elements(&(1..=l).collect::<Vec<_>>())?;
    let t_elements: Vec<u32> = (0..params.k()).map(|i| (l - j + i) % n + 1).collect();
    let t = KSubset::from_elements(&t_elements)?;
    let count: usize = wreaths_containing(params, &t, caps)?
        .iter()
        .map(|w| w.blocks().iter().filter(|s| a.is_subset_of(s)).count())
        .sum();
    Ok(BigInt::from(count))
}

/// `b_{l,j}` in closed form, dispatching on `k | n`, `gcd = 1`, general `gcd`.
pub fn b_formula(params: &WreathParams, l: u32, j: u32) -> Result<BigInt> {
    params.require_below_half()?;
    check_lj(params, l, j)?;
    Ok(if params.k_divides_n() {
        b_k_divides_n(params, l, j)
    } else if params.coprime() {
        b_coprime(params, l, j)
    } else {
        b_general(params, l, j)
    })
}

fn b_k_divides_n(params: &WreathParams, l: u32, j: u32) -> BigInt {
    let (n, k) = (params.n(), params.k());
    let q = n / k;
    if j == 0 {
        fact(n - 2 * k) / (pow(&fact(k), (q - 2) as u64) * fact(q - 2))
            * binomial((n - k - l) as i64, (k - l) as i64)
    } else if j < l {
        BigInt::zero()
    } else {
        fact(n - k) / (pow(&fact(k), (q - 1) as u64) * fact(q - 1))
    }
}

fn b_coprime(params: &WreathParams, l: u32, j: u32) -> BigInt {
    let (n, k) = (params.n() as i64, params.k() as i64);
    let (l, j) = (l as i64, j as i64);
    let f = factorial_i;
    if j == 0 {
        let twice = f(l)
            * f(k)
            * f(n - k - l)
            * (2 * binomial(k, l + 1) + (n - 2 * k + 1) * binomial(k, l));
        exact(ratio(twice, BigInt::from(2)), "b_{l,0}")
    } else if j < l {
        f(j) * f(l - j) * f(k - j) * f(n - k - l + j) * binomial(k + 1, l + 1)
    } else {
        let twice = f(l) * f(k - l) * f(n - k) * (2 * binomial(k, l + 1) + binomial(k, l));
        exact(ratio(twice, BigInt::from(2)), "b_{l,l}")
    }
}

fn b_general(params: &WreathParams, l: u32, j: u32) -> BigInt {
    let (n, k, g) = (params.n() as i64, params.k() as i64, params.g() as i64);
    let (l, j) = (l as i64, j as i64);
    let f = factorial_i;
    let group = pow(&f(g), (n / g) as u64);
    let blocks = k / g;
    let second_difference =
        |d: i64| binomial(d * g, l) - 2 * binomial(d * g - g, l) + binomial(d * g - 2 * g, l);
    let value = if j == 0 {
        let c = ratio(f(k) * f(n - k - l) * f(l), 2 * group);
        let sum: BigInt = (1..=blocks)
            .map(|d| ((n - k) / g - d + 1) * (blocks - d + 1) * second_difference(d))
            .sum();
        c * BigRational::from_integer(sum)
    } else if j < l {
        let c = ratio(f(j) * f(l - j) * f(k - j) * f(n - k - l + j), group);
        let sum: BigInt = (1..=blocks)
            .map(|d| {
                let inner: BigInt = (1..d)
                    .map(|delta| {
                        (binomial(delta * g, j) - binomial(delta * g - g, j))
                            * (binomial((d - delta) * g, l - j)
                                - binomial((d - delta) * g - g, l - j))
                    })
                    .sum();
                (blocks - d + 1) * inner
            })
            .sum();
        c * BigRational::from_integer(sum)
    } else {
        let c = ratio(f(n - k) * f(k - l) * f(l), 2 * group);
        let sum: BigInt = (1..=blocks)
            .map(|d| (blocks - d + 1).pow(2) * second_difference(d))
            .sum();
        c * BigRational::from_integer(sum)
    };
    exact(value, "b_{l,j}")
}

/// Table of `b_{l,j}` for `2 <= l <= k`, `0 <= j <= l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTable {
    pub k: u32,
    /// `rows[l - 2][j]`.
    pub rows: Vec<Vec<BigInt>>,
}

impl BTable {
    pub fn from_fn(params: &WreathParams, mut f: impl FnMut(u32, u32) -> Result<BigInt>) -> Result<Self> {
        let rows = (2..=params.k())
            .map(|l| (0..=l).map(|j| f(l, j)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(BTable { k: params.k(), rows })
    }

    pub fn formula(params: &WreathParams) -> Result<Self> {
        Self::from_fn(params, |l, j| b_formula(params, l, j))
    }

    pub fn oracle(params: &WreathParams, caps: &Caps) -> Result<Self> {
        Self::from_fn(params, |l, j| b_oracle(params, l, j, caps))
    }

    pub fn get(&self, l: u32, j: u32) -> Option<&BigInt> {
        self.rows.get(l.checked_sub(2)? as usize)?.get(j as usize)
    }
}

/// `λ_l = Σ_j (-1)^{l-j} C(l,j) b_{l,j}`.
pub fn lambda_from_b(params: &WreathParams, l: u32, table: &BTable) -> Result<BigInt> {
    check_level(params, l)?;
    (0..=l)
        .map(|j| {
            let b = table.get(l, j).ok_or_else(|| {
                Error::IndexOutOfRange(format!("table has no entry b[{l}][{j}]"))
            })?;
            Ok(sign((l - j).is_multiple_of(2)) * binomial(l as i64, j as i64) * b)
        })
        .sum()
}

/// Closed eigenvalue formula for `k | n` or `gcd(n, k) = 1`.
pub fn lambda_closed(params: &WreathParams, l: u32) -> Result<BigInt> {
    params.require_below_half()?;
    check_level(params, l)?;
    let (n, k) = (params.n() as i64, params.k() as i64);
    let li = l as i64;
    let f = factorial_i;
    if params.k_divides_n() {
        let q = (n / k) as u64;
        let base = f(n - k) / (pow(&f(k), q - 1) * factorial(q - 1));
        let corr = f(n - 2 * k) / (pow(&f(k), q - 2) * factorial(q - 2)) * binomial(n - k - li, k - li);
        Ok(base + sign(li % 2 == 0) * corr)
    } else if params.coprime() {
        let twice_first = sign(li % 2 == 0) * f(li) * f(k) * f(n - k - li) * (n - 2 * k - 1) * binomial(k, li);
        let twice_second = f(k) * f(n - k);
        let sum: BigInt = (0..=li)
            .map(|j| sign((li - j) % 2 == 0) * f(k - j) * f(n - k - li + j))
            .sum();
        let third = f(li) * binomial(k + 1, li + 1) * sum;
        Ok(exact(ratio(twice_first - twice_second, BigInt::from(2)), "λ_l") + third)
    } else {
        Err(Error::UnsupportedRegime {
            n: params.n(),
            k: params.k(),
        })
    }
}

fn require_coprime(params: &WreathParams, min_k: u32) -> Result<()> {
    params.require_below_half()?;
    if !params.coprime() || params.k() < min_k {
        return Err(Error::HypothesisViolated(format!(
            "needs gcd(n, k) = 1 and k >= {min_k}, got {params}"
        )));
    }
    Ok(())
}

/// `λ₂` for coprime `n, k`, as a product of a quadratic and factorials.
pub fn example_lambda2(params: &WreathParams) -> Result<BigInt> {
    require_coprime(params, 2)?;
    let (n, k) = (params.n() as i64, params.k() as i64);
    let num = factorial(k as u64)
        * factorial((n - k - 2) as u64)
        * (n - 2)
        * ((2 * k - 1) * n - (3 * k * k - k - 1));
    Ok(exact(ratio(num, BigInt::from(6)), "λ₂"))
}

/// `λ₃` for coprime `n, k` with `k >= 3`.
pub fn example_lambda3(params: &WreathParams) -> Result<BigInt> {
    require_coprime(params, 3)?;
    let (n, k) = (params.n() as i64, params.k() as i64);
    let num = factorial(k as u64)
        * factorial((n - k - 3) as u64)
        * (n - 3)
        * (n - 2 * k)
        * ((k - 1) * n - (2 * k * k - 2 * k - 2));
    Ok(exact(ratio(num, BigInt::from(4)), "λ₃"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub l: u32,
    #[serde(with = "json::bignum")]
    pub value: BigInt,
    #[serde(with = "json::bignum")]
    pub mult: BigInt,
}

/// Per-level eigenvalues of `M(n, k)`; equal values at different levels are
/// kept separate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: u32,
    pub k: u32,
    pub g: u32,
    #[serde(with = "json::bignum")]
    pub wreath_count: BigInt,
    #[serde(with = "json::bignum")]
    pub lambda1: BigInt,
    pub levels: Vec<Level>,
    #[serde(with = "json::bignum")]
    pub zero_mult: BigInt,
}

impl Spectrum {
    /// `Σ mult · value = |W| · n/g`, the trace of `M`.
    pub fn trace_ok(&self) -> bool {
        let total: BigInt = &self.lambda1
            + self
                .levels
                .iter()
                .map(|lv| &lv.value * &lv.mult)
                .sum::<BigInt>();
        let dims: BigInt = BigInt::one() + self.levels.iter().map(|lv| &lv.mult).sum::<BigInt>() + &self.zero_mult;
        total == &self.wreath_count * (self.n / self.g) && dims == self.wreath_count
    }

    /// `(value, multiplicity)` pairs, zero included, for [`eigen_certify`].
    ///
    /// [`eigen_certify`]: crate::matrixcore::eigen_certify
    pub fn claims(&self) -> Vec<(BigInt, u64)> {
        let to_u64 = |x: &BigInt| x.to_u64().expect("multiplicity fits in u64");
        let mut out = vec![(self.lambda1.clone(), 1)];
        out.extend(self.levels.iter().map(|lv| (lv.value.clone(), to_u64(&lv.mult))));
        out.push((BigInt::zero(), to_u64(&self.zero_mult)));
        out
    }

    /// `λ₁, λ₂, ..., λ_k`.
    pub fn values(&self) -> Vec<BigInt> {
        std::iter::once(self.lambda1.clone())
            .chain(self.levels.iter().map(|lv| lv.value.clone()))
            .collect()
    }
}

/// Dimension of the image of `M`, `C(n,k) - n + 1`.
pub fn image_dimension(params: &WreathParams) -> BigInt {
    binomial(params.n() as i64, params.k() as i64) - params.n() + 1
}

/// Eigenvalue of level `l` by the best closed form available.
pub fn lambda(params: &WreathParams, l: u32) -> Result<BigInt> {
    if params.k_divides_n() || params.coprime() {
        lambda_closed(params, l)
    } else {
        let row = (0..=l)
            .map(|j| b_formula(params, l, j))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = vec![Vec::new(); (l - 2) as usize];
        rows.push(row);
        lambda_from_b(params, l, &BTable { k: params.k(), rows })
    }
}

pub fn full_spectrum(params: &WreathParams) -> Result<Spectrum> {
    params.require_below_half()?;
    let n = params.n() as i64;
    let levels = (2..=params.k())
        .map(|l| {
            Ok(Level {
                l,
                value: lambda(params, l)?,
                mult: binomial(n, l as i64) - binomial(n, l as i64 - 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let count = wreath_count(params);
    Ok(Spectrum {
        n: params.n(),
        k: params.k(),
        g: params.g(),
        zero_mult: &count - image_dimension(params),
        wreath_count: count,
        lambda1: lambda1(params)?,
        levels,
    })
}

/// `P_{k,l}` with `λ_l = (n-k-l)! P_{k,l}(n)` for `n` coprime to `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigPolynomial {
    pub k: u32,
    pub l: u32,
    pub poly: Poly,
}

impl EigPolynomial {
    /// `(2k - l + 1) k! / (2(l + 1))`.
    pub fn expected_leading(k: u32, l: u32) -> BigRational {
        ratio(
            BigInt::from(2 * k - l + 1) * fact(k),
            BigInt::from(2 * (l + 1)),
        )
    }

    pub fn eval(&self, n: i64) -> BigRational {
        self.poly.eval_int(n)
    }
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `∏_{i=1..j} (n - k - l + i)` as a polynomial in `n`.
fn rising(k: u32, l: u32, j: u32) -> Poly {
    (1..=j as i64).fold(Poly::one(), |acc, i| {
        acc * Poly::linear(int(i - k as i64 - l as i64), int(1))
    })
}

pub fn eig_polynomial(k: u32, l: u32) -> Result<EigPolynomial> {
    if l < 2 || l > k {
        return Err(Error::IndexOutOfRange(format!("need 2 <= l <= k, got k = {k}, l = {l}")));
    }
    let half = ratio(BigInt::one(), BigInt::from(2));
    let (ki, li) = (k as i64, l as i64);
    let first = Poly::linear(int(-2 * ki - 1), int(1)).scale(
        &(int(sign(l.is_multiple_of(2)) * fact(l) * fact(k) * binomial(ki, li)) * &half),
    );
    let second = rising(k, l, l).scale(&(-int(fact(k)) * &half));
    let sum = (0..=l).fold(Poly::new(vec![]), |acc, j| {
        let term = rising(k, l, j).scale(&int(sign((l - j).is_multiple_of(2)) * fact(k - j)));
        &acc + &term
    });
    let third = sum.scale(&int(fact(l) * binomial(ki + 1, li + 1)));
    Ok(EigPolynomial {
        k,
        l,
        poly: &(&first + &second) + &third,
    })
}

/// Sides of `Σ_{x+y=γ} C(x,α) C(y,β) = C(γ+1, α+β+1)`.
pub fn binomial_identity_sides(alpha: u32, beta: u32, gamma: u32) -> (BigInt, BigInt) {
    let (a, b, c) = (alpha as i64, beta as i64, gamma as i64);
    let lhs = (0..=c).map(|x| binomial(x, a) * binomial(c - x, b)).sum();
    (lhs, binomial(c + 1, a + b + 1))
}

pub fn binomial_identity_check(alpha: u32, beta: u32, gamma: u32) -> bool {
    let (lhs, rhs) = binomial_identity_sides(alpha, beta, gamma);
    lhs == rhs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub n: u32,
    pub k: u32,
    pub g: u32,
    /// `λ₁, ..., λ_k`.
    #[serde(with = "json::bignum_vec")]
    pub values: Vec<BigInt>,
    pub all_distinct: bool,
    /// Pairs of levels `(a, b)`, `a < b`, with `λ_a = λ_b`.
    pub collisions: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessReport {
    pub entries: Vec<ScanEntry>,
}

impl DistinctnessReport {
    pub fn any_collision(&self) -> bool {
        self.entries.iter().any(|e| !e.all_distinct)
    }
}

/// For each `(n, k)` with `k < n/2`, records whether `λ₁, ..., λ_k` are
/// pairwise distinct. Pairs outside the hypothesis are skipped.
pub fn distinctness_scan(ns: RangeInclusive<u32>, ks: RangeInclusive<u32>) -> Result<DistinctnessReport> {
    let mut entries = Vec::new();
    for n in ns {
        for k in ks.clone() {
            if k == 0 || 2 * k >= n {
                continue;
            }
            let params = WreathParams::new(n, k)?;
            let values = full_spectrum(&params)?.values();
            let mut collisions = Vec::new();
            for a in 0..values.len() {
                for b in a + 1..values.len() {
                    if values[a] == values[b] {
                        collisions.push((a as u32 + 1, b as u32 + 1));
                    }
                }
            }
            entries.push(ScanEntry {
                n,
                k,
                g: params.g(),
                all_distinct: collisions.is_empty(),
                values,
                collisions,
            });
        }
    }
    Ok(DistinctnessReport { entries })
}

/// `λ_l > 0` for every level.
pub fn all_positive(spectrum: &Spectrum) -> bool {
    spectrum.lambda1.is_positive() && spectrum.levels.iter().all(|lv| lv.value.is_positive())
}
