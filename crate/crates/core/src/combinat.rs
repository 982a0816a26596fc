//! Ground set `Z_n`, wreaths and the action of `S_n` on them.
//!
//! Elements are written `1..=n` at the API surface and stored as bit
//! positions `0..n` internally, so `n` is capped at 32. A [`Wreath`] is kept
//! in canonical form: blocks sorted ascending by mask value. Two wreaths are
//! equal exactly when their canonical block sequences are equal, and the
//! derived `Ord` is the lexicographic order on those sequences.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numbers::{binomial, factorial, gcd, pow};
use crate::Caps;

pub const MAX_N: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WreathParams {
    n: u32,
    k: u32,
    g: u32,
}

impl WreathParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidParams(format!("n = {n} exceeds {MAX_N}")));
        }
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k < n, got n = {n}, k = {k}"
            )));
        }
        Ok(WreathParams { n, k, g: gcd(n, k) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    /// Number of blocks in every wreath, `n / g`.
    pub fn wreath_len(&self) -> u32 {
        self.n / self.g
    }

    pub fn k_divides_n(&self) -> bool {
        self.g == self.k
    }

    pub fn coprime(&self) -> bool {
        self.g == 1
    }

    /// Number of wreaths in a decomposition, `g * C(n, k) / n`.
    pub fn c(&self) -> u64 {
        let total = binomial(self.n as i64, self.k as i64);
        let c = total * self.g / self.n;
        u64::try_from(c).expect("c fits in u64 for n <= 32")
    }

    pub fn subset_count(&self) -> u64 {
        u64::try_from(binomial(self.n as i64, self.k as i64)).expect("C(n,k) fits in u64")
    }

    /// The theorems about the spectrum assume `k < n / 2`.
    pub fn require_below_half(&self) -> Result<()> {
        if 2 * self.k >= self.n {
            return Err(Error::HypothesisViolated(format!(
                "requires k < n/2, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> WreathParams {
        WreathParams::new(self.n, self.n - self.k).expect("n - k is valid")
    }

    fn full_mask(&self) -> u32 {
        full_mask(self.n)
    }
}

impl fmt::Display for WreathParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.k)
    }
}

fn full_mask(n: u32) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of `Z_n` as a bit mask, element `i` at bit `i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct KSubset(u32);

impl KSubset {
    pub fn from_mask(mask: u32) -> Self {
        KSubset(mask)
    }

    pub fn from_elements(elements: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &e in elements {
            if e == 0 || e > MAX_N {
                return Err(Error::InvalidParams(format!("element {e} outside 1..={MAX_N}")));
            }
            let bit = 1u32 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidParams(format!("element {e} repeated")));
            }
            mask |= bit;
        }
        Ok(KSubset(mask))
    }

    /// Like [`from_elements`](Self::from_elements), additionally requiring
    /// exactly `k` elements all at most `n`.
    pub fn for_params(params: &WreathParams, elements: &[u32]) -> Result<Self> {
        let s = Self::from_elements(elements)?;
        if s.0 & !params.full_mask() != 0 {
            return Err(Error::InvalidParams(format!(
                "subset {s} not contained in 1..={}",
                params.n
            )));
        }
        s.check_size(params.k)?;
        Ok(s)
    }

    pub fn check_size(&self, k: u32) -> Result<()> {
        if self.len() != k {
            return Err(Error::BadSubsetSize {
                expected: k,
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, element: u32) -> bool {
        (1..=MAX_N).contains(&element) && self.0 & (1 << (element - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &KSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection_len(&self, other: &KSubset) -> u32 {
        (self.0 & other.0).count_ones()
    }

    pub fn complement(&self, n: u32) -> KSubset {
        KSubset(!self.0 & full_mask(n))
    }

    /// Ascending elements, 1-based.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() + 1);
            m &= m - 1;
        }
        out
    }

    pub fn map(&self, perm: &Perm) -> KSubset {
        let mut out = 0u32;
        let mut m = self.0;
        while m != 0 {
            let bit = m.trailing_zeros() as usize;
            out |= 1 << perm.images[bit];
            m &= m - 1;
        }
        KSubset(out)
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for KSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

impl<'de> Deserialize<'de> for KSubset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<u32>::deserialize(d)?;
        KSubset::from_elements(&elements).map_err(D::Error::custom)
    }
}

/// All `k`-subsets of `Z_n` in ascending mask order (colex order on elements).
pub fn all_subsets(n: u32, k: u32) -> Vec<KSubset> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let limit = full_mask(n) as u64;
    let mut m: u64 = (1u64 << k) - 1;
    while m <= limit {
        out.push(KSubset(m as u32));
        // Gosper's hack.
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// A bijection on `Z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: u32) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// `images[i - 1] = pi(i)`, values `1..=n`.
    pub fn from_one_based(images: &[u32]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_N as usize {
            return Err(Error::InvalidPerm(format!("length {n} outside 1..={MAX_N}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::InvalidPerm(format!(
                    "{images:?} is not a bijection on 1..={n}"
                )));
            }
            seen[v as usize - 1] = true;
            out.push((v - 1) as u8);
        }
        Ok(Perm { images: out })
    }

    pub(crate) fn from_zero_based_unchecked(images: Vec<u8>) -> Self {
        Perm { images }
    }

    /// The transposition swapping `a` and `b` (1-based).
    pub fn transposition(n: u32, a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidPerm(format!("transposition ({a} {b}) on {n} points")));
        }
        let mut p = Self::identity(n);
        p.images.swap(a as usize - 1, b as usize - 1);
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    /// `pi(x)` for 1-based `x`.
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize - 1] as u32 + 1
    }

    pub fn images_one_based(&self) -> Vec<u32> {
        self.images.iter().map(|&v| v as u32 + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "composing permutations of different degree");
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.images.len()];
        let mut even = true;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                even = !even;
            }
        }
        if even {
            1
        } else {
            -1
        }
    }
}

/// Calls `f` on every arrangement of `buf[start..]` (Heap's algorithm),
/// passing whether the arrangement is an even permutation of the initial one.
pub(crate) fn heap_permutations(buf: &mut [u8], start: usize, mut f: impl FnMut(&[u8], bool)) {
    let m = buf.len() - start;
    let mut c = vec![0usize; m];
    let mut even = true;
    f(buf, even);
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                buf.swap(start, start + i);
            } else {
                buf.swap(start + c[i], start + i);
            }
            even = !even;
            f(buf, even);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// A canonical `(n, k)`-wreath: `n / g` distinct `k`-subsets sorted by mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wreath {
    blocks: Vec<KSubset>,
}

impl Wreath {
    /// Canonicalizes an arbitrary block list. No structural validation.
    pub fn from_blocks(mut blocks: Vec<KSubset>) -> Self {
        blocks.sort_unstable();
        Wreath { blocks }
    }

    fn from_sorted_masks(masks: Vec<u32>) -> Self {
        Wreath {
            blocks: masks.into_iter().map(KSubset).collect(),
        }
    }

    pub fn blocks(&self) -> &[KSubset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, block: &KSubset) -> bool {
        self.blocks.binary_search(block).is_ok()
    }

    /// Number of blocks shared with `other`.
    pub fn common_blocks(&self, other: &Wreath) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.blocks.len() && j < other.blocks.len() {
            match self.blocks[i].cmp(&other.blocks[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Checks the structural invariants of an `(n, k)`-wreath: block count,
    /// block sizes, distinct blocks, and uniform coverage of every element by
    /// exactly `k / g` blocks.
    pub fn is_well_formed(&self, params: &WreathParams) -> bool {
        if self.blocks.len() != params.wreath_len() as usize {
            return false;
        }
        let full = params.full_mask();
        if self
            .blocks
            .iter()
            .any(|b| b.len() != params.k || b.0 & !full != 0)
        {
            return false;
        }
        if self.blocks.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let per_element = params.k / params.g;
        (1..=params.n).all(|e| {
            self.blocks.iter().filter(|b| b.contains(e)).count() as u32 == per_element
        })
    }
}

impl fmt::Display for Wreath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(KSubset::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for Wreath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Wreath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Wreath::from_blocks(Vec::<KSubset>::deserialize(d)?))
    }
}

/// Sorted window masks of the wreath of the arrangement `images`
/// (`images[p]` is the element at position `p`, 0-based).
fn window_masks(params: &WreathParams, images: &[u8]) -> Vec<u32> {
    let n = params.n as usize;
    let k = params.k as usize;
    let mut masks = Vec::with_capacity(params.wreath_len() as usize);
    for i in 0..params.wreath_len() as usize {
        let start = (i * k) % n;
        let mut m = 0u32;
        for t in 0..k {
            m |= 1 << images[(start + t) % n];
        }
        masks.push(m);
    }
    masks.sort_unstable();
    masks
}

pub fn wreath_of_perm(params: &WreathParams, pi: &Perm) -> Wreath {
    assert_eq!(pi.n(), params.n, "permutation degree must equal n");
    Wreath::from_sorted_masks(window_masks(params, &pi.images))
}

fn check_enumeration_cap(params: &WreathParams, caps: &Caps) -> Result<()> {
    if params.n > caps.enumeration_n {
        return Err(Error::CapExceeded {
            what: "n",
            value: params.n as u64,
            cap: caps.enumeration_n as u64,
        });
    }
    Ok(())
}

/// All wreaths of `W_{n,k}` in canonical order.
///
/// Arrangements with element 1 in the first position already reach every
/// wreath (rotating by `g` positions and permuting inside the `g`-groups of
/// positions fix the wreath), so only `(n-1)!` arrangements are visited.
pub fn enumerate_wreaths(params: &WreathParams, caps: &Caps) -> Result<Vec<Wreath>> {
    check_enumeration_cap(params, caps)?;
    let n = params.n as u8;
    let seconds: Vec<u8> = (1..n).collect();
    let partial: Vec<HashSet<Vec<u32>>> = seconds
        .par_iter()
        .map(|&second| {
            let mut buf = Vec::with_capacity(n as usize);
            buf.push(0);
            buf.push(second);
            buf.extend((1..n).filter(|&x| x != second));
            let mut seen = HashSet::new();
            heap_permutations(&mut buf, 2, |arr, _| {
                seen.insert(window_masks(params, arr));
            });
            seen
        })
        .collect();
    let mut all: HashSet<Vec<u32>> = HashSet::new();
    for part in partial {
        all.extend(part);
    }
    let mut out: Vec<Wreath> = all.into_iter().map(Wreath::from_sorted_masks).collect();
    out.sort_unstable();
    Ok(out)
}

/// All wreaths having `t` as a block, canonical order. Only arrangements with
/// `t` in the first window are visited (`k!(n-k)!` of them).
pub fn wreaths_containing(params: &WreathParams, t: &KSubset, caps: &Caps) -> Result<Vec<Wreath>> {
    t.check_size(params.k)?;
    check_enumeration_cap(params, caps)?;
    let inside: Vec<u8> = t.elements().iter().map(|&e| (e - 1) as u8).collect();
    let outside: Vec<u8> = (0..params.n as u8)
        .filter(|&x| !t.contains(x as u32 + 1))
        .collect();
    let mut orders = Vec::new();
    let mut first = inside.clone();
    heap_permutations(&mut first, 0, |arr, _| orders.push(arr.to_vec()));
    let partial: Vec<HashSet<Vec<u32>>> = orders
        .par_iter()
        .map(|order| {
            let mut buf = order.clone();
            buf.extend_from_slice(&outside);
            let mut seen = HashSet::new();
            heap_permutations(&mut buf, inside.len(), |arr, _| {
                seen.insert(window_masks(params, arr));
            });
            seen
        })
        .collect();
    let mut all: HashSet<Vec<u32>> = HashSet::new();
    for part in partial {
        all.extend(part);
    }
    let mut out: Vec<Wreath> = all.into_iter().map(Wreath::from_sorted_masks).collect();
    out.sort_unstable();
    Ok(out)
}

/// `sigma · W`: every block mapped elementwise by `sigma`.
pub fn apply_perm(sigma: &Perm, w: &Wreath) -> Wreath {
    Wreath::from_blocks(w.blocks.iter().map(|b| b.map(sigma)).collect())
}

/// Replaces every block by its complement; an `(n, n-k)`-wreath.
pub fn complement_wreath(params: &WreathParams, w: &Wreath) -> Wreath {
    Wreath::from_blocks(w.blocks.iter().map(|b| b.complement(params.n)).collect())
}

/// Order of the stabiliser of a wreath in `S_n`.
pub fn stabilizer_order(params: &WreathParams) -> BigInt {
    let (n, k, g) = (params.n as u64, params.k as u64, params.g as u64);
    if params.k_divides_n() {
        pow(&factorial(k), n / k) * factorial(n / k)
    } else {
        BigInt::from(2 * n) * pow(&factorial(g), n / g) / g
    }
}

/// `|W_{n,k}|` by the orbit-stabiliser theorem.
pub fn wreath_count(params: &WreathParams) -> BigInt {
    factorial(params.n as u64) / stabilizer_order(params)
}

/// Number of wreaths containing a fixed `k`-subset.
pub fn containing_count(params: &WreathParams) -> BigInt {
    let (n, k, g) = (params.n as u64, params.k as u64, params.g as u64);
    if params.k_divides_n() {
        BigInt::from(n) * factorial(n - k)
            / (BigInt::from(k) * pow(&factorial(k), n / k - 1) * factorial(n / k))
    } else {
        factorial(n - k) * factorial(k) / (BigInt::from(2) * pow(&factorial(g), n / g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, k: u32) -> WreathParams {
        WreathParams::new(n, k).unwrap()
    }

    fn blocks(w: &Wreath) -> Vec<Vec<u32>> {
        w.blocks().iter().map(KSubset::elements).collect()
    }

    fn sorted(mut v: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        for b in &mut v {
            b.sort_unstable();
        }
        v.sort_by_key(|b| KSubset::from_elements(b).unwrap());
        v
    }

    #[test]
    fn params_derived_fields() {
        let q = p(10, 4);
        assert_eq!((q.g(), q.wreath_len(), q.c()), (2, 5, 42));
        assert!(!q.k_divides_n());
        let q = p(9, 3);
        assert!(q.k_divides_n());
        assert_eq!(q.c() * q.wreath_len() as u64, q.subset_count());
        assert!(WreathParams::new(5, 5).is_err());
        assert!(WreathParams::new(33, 2).is_err());
        assert!(p(6, 3).require_below_half().is_err());
    }

    #[test]
    fn figure_one_wreaths() {
        let pi = Perm::from_one_based(&[10, 5, 3, 9, 1, 6, 2, 7, 4, 8]).unwrap();
        let w2 = wreath_of_perm(&p(10, 2), &pi);
        assert_eq!(
            blocks(&w2),
            sorted(vec![vec![10, 5], vec![3, 9], vec![1, 6], vec![2, 7], vec![4, 8]])
        );
        let w4 = wreath_of_perm(&p(10, 4), &pi);
        assert_eq!(
            blocks(&w4),
            sorted(vec![
                vec![10, 5, 3, 9],
                vec![1, 6, 2, 7],
                vec![4, 8, 10, 5],
                vec![3, 9, 1, 6],
                vec![2, 7, 4, 8]
            ])
        );
        let w3 = wreath_of_perm(&p(10, 3), &pi);
        assert_eq!(w3.len(), 10);
        assert!(w3.is_well_formed(&p(10, 3)));
    }

    #[test]
    fn identity_wreath_seven_three() {
        let w = wreath_of_perm(&p(7, 3), &Perm::identity(7));
        assert_eq!(
            blocks(&w),
            sorted(vec![
                vec![1, 2, 3],
                vec![4, 5, 6],
                vec![7, 1, 2],
                vec![3, 4, 5],
                vec![6, 7, 1],
                vec![2, 3, 4],
                vec![5, 6, 7]
            ])
        );
    }

    #[test]
    fn stabilizer_orders() {
        assert_eq!(stabilizer_order(&p(7, 3)), BigInt::from(14));
        assert_eq!(stabilizer_order(&p(9, 3)), BigInt::from(1296));
        assert_eq!(stabilizer_order(&p(10, 4)), BigInt::from(320));
        for (n, k) in [(7, 3), (9, 3), (10, 4), (12, 5), (12, 4)] {
            let q = p(n, k);
            assert_eq!(stabilizer_order(&q) * wreath_count(&q), factorial(n as u64));
        }
    }

    #[test]
    fn containing_counts() {
        let caps = Caps::default();
        for (n, k, expected) in [(7, 3, 72), (9, 3, 10), (10, 4, 270)] {
            let q = p(n, k);
            let t = KSubset::for_params(&q, &(1..=k).collect::<Vec<_>>()).unwrap();
            let ws = wreaths_containing(&q, &t, &caps).unwrap();
            assert_eq!(ws.len(), expected, "({n},{k})");
            assert_eq!(containing_count(&q), BigInt::from(expected));
            assert!(ws.iter().all(|w| w.contains(&t)));
            assert!(ws.windows(2).all(|x| x[0] < x[1]));
        }
    }

    #[test]
    fn bad_subset_size_rejected() {
        let q = p(7, 3);
        let t = KSubset::from_elements(&[1, 2]).unwrap();
        assert!(matches!(
            wreaths_containing(&q, &t, &Caps::default()),
            Err(Error::BadSubsetSize { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn enumeration_cap() {
        let caps = Caps {
            enumeration_n: 8,
            ..Caps::default()
        };
        assert!(matches!(
            enumerate_wreaths(&p(9, 3), &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn degenerate_half_wreaths_are_complementary_pairs() {
        let q = p(6, 3);
        let ws = enumerate_wreaths(&q, &Caps::default()).unwrap();
        assert_eq!(ws.len(), 10);
        for w in &ws {
            assert_eq!(w.blocks()[0].complement(6), w.blocks()[1]);
        }
    }

    #[test]
    fn complement_is_involution_into_complement_family() {
        let q = p(7, 3);
        let caps = Caps::default();
        let ws = enumerate_wreaths(&q, &caps).unwrap();
        let cs: HashSet<Wreath> = enumerate_wreaths(&q.complement(), &caps)
            .unwrap()
            .into_iter()
            .collect();
        let mut images = HashSet::new();
        for w in &ws {
            let c = complement_wreath(&q, w);
            assert!(cs.contains(&c));
            assert_eq!(complement_wreath(&q.complement(), &c), *w);
            images.insert(c);
        }
        assert_eq!(images.len(), cs.len());
    }

    #[test]
    fn figure_one_complement() {
        let q = p(10, 4);
        let pi = Perm::from_one_based(&[10, 5, 3, 9, 1, 6, 2, 7, 4, 8]).unwrap();
        let c = complement_wreath(&q, &wreath_of_perm(&q, &pi));
        assert!(c.is_well_formed(&q.complement()));
        assert!(c.contains(&KSubset::from_elements(&[1, 2, 4, 6, 7, 8]).unwrap()));
    }

    #[test]
    fn perm_basics() {
        let s = Perm::transposition(5, 1, 2).unwrap();
        assert_eq!(s.sign(), -1);
        assert!(s.compose(&s).is_identity());
        let c = Perm::from_one_based(&[2, 3, 1, 4, 5]).unwrap();
        assert_eq!(c.sign(), 1);
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(c.compose(&s).apply(1), c.apply(s.apply(1)));
        assert!(Perm::from_one_based(&[1, 1, 2]).is_err());
    }

    #[test]
    fn heap_visits_all_with_parity() {
        let mut buf = vec![0u8, 1, 2, 3];
        let mut seen = HashSet::new();
        heap_permutations(&mut buf, 0, |arr, even| {
            let p = Perm::from_zero_based_unchecked(arr.to_vec());
            assert_eq!(p.sign() == 1, even);
            seen.insert(arr.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn subsets_in_mask_order() {
        let subs = all_subsets(7, 3);
        assert_eq!(subs.len(), 35);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_subsets(32, 31).len(), 32);
    }

    #[test]
    fn wreath_json_is_canonical() {
        let w: Wreath = serde_json::from_str("[[4,5,6],[1,2,3]]").unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "[[1,2,3],[4,5,6]]");
    }
}
