//! Exact counting: binomials, Zeeman degeneracies and maximal MQC ranks.
//!
//! Everything here is exact big-integer arithmetic. Ranks and cumulative
//! multiplicities are compared against each other downstream, and at
//! `N = 10^4` they have thousands of decimal digits.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    /// `2^k`
    pub fn pow2(k: u32) -> Self {
        BigCount(BigUint::one() << k)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_even(&self) -> bool {
        self.0.is_even()
    }

    /// Natural logarithm, `-inf` for zero.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Nearest `f64`, `inf` when out of range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Exact halving; the caller guarantees evenness.
    pub fn half(&self) -> Self {
        BigCount(&self.0 >> 1u32)
    }
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

impl From<u64> for BigCount {
    fn from(x: u64) -> Self {
        BigCount(BigUint::from(x))
    }
}

impl From<BigUint> for BigCount {
    fn from(x: BigUint) -> Self {
        BigCount(x)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Add for BigCount {
    type Output = BigCount;

    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;

    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

/// Saturating at zero; counts never go negative.
impl<'a> Sub<&'a BigCount> for &'a BigCount {
    type Output = BigCount;

    fn sub(self, rhs: &BigCount) -> BigCount {
        if rhs.0 >= self.0 {
            BigCount::zero()
        } else {
            BigCount(&self.0 - &rhs.0)
        }
    }
}

/// Magnetic quantum number: an integer or half-integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn integer(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(&self) -> i64 {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;

    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// `C(n, k)`, zero when `k` lies outside `[0, n]`.
pub fn binomial_exact(n: i64, k: i64) -> Result<BigCount> {
    if n < 0 {
        return Err(Error::domain(format!("binomial needs n >= 0, got {n}")));
    }
    if k < 0 || k > n {
        return Ok(BigCount::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    // acc == C(n - k + i, i) after step i, so every division is exact
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    Ok(BigCount(acc))
}

/// One full row `C(N, 0..=N)` of Pascal's triangle with cached logarithms.
#[derive(Clone, Debug)]
pub struct BinomialRow {
    n: u32,
    coeffs: Vec<BigCount>,
    ln_coeffs: Vec<f64>,
}

impl BinomialRow {
    pub fn new(n: u32) -> Self {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut c = BigUint::one();
        coeffs.push(BigCount(c.clone()));
        for k in 0..n {
            c *= n - k;
            c /= k + 1;
            coeffs.push(BigCount(c.clone()));
        }
        let ln_coeffs = coeffs.iter().map(BigCount::ln).collect();
        BinomialRow {
            n,
            coeffs,
            ln_coeffs,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `C(N, k)` or `None` outside `[0, N]`.
    pub fn get(&self, k: i64) -> Option<&BigCount> {
        usize::try_from(k).ok().and_then(|k| self.coeffs.get(k))
    }

    pub fn ln(&self, k: i64) -> f64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.ln_coeffs.get(k).copied())
            .unwrap_or(f64::NEG_INFINITY)
    }

    /// Degeneracy `g_m = C(N, N/2 + m)` of the `I_z = m` manifold.
    pub fn degeneracy(&self, m: HalfInt) -> Option<&BigCount> {
        let twice_up = i64::from(self.n) + m.twice();
        if twice_up % 2 != 0 {
            return None;
        }
        self.get(twice_up / 2)
    }

    fn add_into(&self, acc: &mut BigCount, k: i64) {
        if let Some(c) = self.get(k) {
            *acc += c;
        }
    }
}

/// Degeneracy `g_m = C(N, N/2 + m)` of the Zeeman manifold `I_z = m`.
///
/// Zero for `|m| > N/2`; a domain error when `N/2 + m` is not integral.
pub fn degeneracy(n_spins: u32, m: HalfInt) -> Result<BigCount> {
    let twice_up = i64::from(n_spins) + m.twice();
    if twice_up % 2 != 0 {
        return Err(Error::domain(format!(
            "N/2 + m must be integral (N = {n_spins}, m = {m})"
        )));
    }
    binomial_exact(i64::from(n_spins), twice_up / 2)
}

fn check_order(n_spins: u32, q: u32) -> Result<()> {
    if q == 0 || q > n_spins {
        return Err(Error::domain(format!(
            "coherence order q = {q} outside [1, {n_spins}]"
        )));
    }
    Ok(())
}

/// Maximal rank `R^N_q` of a coherence-order-`q` operator.
///
/// Chain `j` collects the manifolds with `N - j - t q` spins up; even and
/// odd steps `t` form the two sides of its zigzag and the chain contributes
/// twice the smaller side.
pub fn max_rank(n_spins: u32, q: u32) -> Result<BigCount> {
    check_order(n_spins, q)?;
    max_rank_in_row(&BinomialRow::new(n_spins), q)
}

/// [`max_rank`] against a precomputed row, for sweeps over `q`.
pub fn max_rank_in_row(row: &BinomialRow, q: u32) -> Result<BigCount> {
    let n = i64::from(row.n());
    check_order(row.n(), q)?;
    let q = i64::from(q);
    let mut total = BigCount::zero();
    for j in 0..q {
        let mut even = BigCount::zero();
        let mut odd = BigCount::zero();
        // iterate m until the binomial argument leaves [0, N]
        let mut a = n - j;
        while a >= 0 {
            row.add_into(&mut even, a);
            row.add_into(&mut odd, a - q);
            a -= 2 * q;
        }
        total += std::cmp::min(&even, &odd);
    }
    Ok(&total + &total)
}

/// Chain form of `R^N_q` for even `N` and even `q`, summing degeneracies
/// `g_{jq+k}` over odd and even `j` for each chain offset `k`.
pub fn max_rank_even(n_spins: u32, q: u32) -> Result<BigCount> {
    if n_spins % 2 != 0 || q % 2 != 0 {
        return Err(Error::domain(format!(
            "chain form needs even N and even q, got N = {n_spins}, q = {q}"
        )));
    }
    check_order(n_spins, q)?;
    let row = BinomialRow::new(n_spins);
    let half_n = i64::from(n_spins / 2);
    let q = i64::from(q);
    let mut total = BigCount::zero();
    for k in (-q / 2 + 1)..=(q / 2) {
        let mut odd = BigCount::zero();
        let mut even = BigCount::zero();
        let j_lo = Integer::div_ceil(&(-half_n - k), &q);
        let j_hi = Integer::div_floor(&(half_n - k), &q);
        for j in j_lo..=j_hi {
            let m = j * q + k;
            let g = row
                .degeneracy(HalfInt::integer(m))
                .expect("|jq + k| <= N/2 by construction");
            if j.rem_euclid(2) == 1 {
                odd += g;
            } else {
                even += g;
            }
        }
        total += std::cmp::min(&odd, &even);
    }
    Ok(&total + &total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub q: u32,
    pub rank: BigCount,
    /// `r = R^N_q / 2`, the number of paired extreme eigenvalues.
    pub half_rank: BigCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub n_spins: u32,
    pub entries: Vec<RankEntry>,
}

/// `R^N_q` for every `1 <= q <= N`.
pub fn rank_report(n_spins: u32) -> Result<RankReport> {
    let row = BinomialRow::new(n_spins);
    let entries = (1..=n_spins)
        .map(|q| {
            let rank = max_rank_in_row(&row, q)?;
            Ok(RankEntry {
                q,
                half_rank: rank.half(),
                rank,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankReport { n_spins, entries })
}
