//! Shifted-window divisibility discrepancies.
//!
//! For a prime set `J`, the discrepancy compares how many elements of a
//! shifted window `[1+k, i+k]` share a factor with `prod J` against the same
//! count for a reference window of equal length. Two reference conventions
//! are in use: `[1, i]` (the default, used by the ratio study) and
//! `[0, i-1]`, which differ by the always-non-coprime element zero.

use crate::error::{Error, Result};
use crate::sieve::{mark_count, PrimeTable};
use num::BigRational;
use rayon::prelude::*;
use serde::Serialize;

/// Reference window convention for [`discrepancy_with_base`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowBase {
    /// Reference window `[0, i-1]`.
    Zero,
    /// Reference window `[1, i]` (default).
    One,
}

/// One row of the discrepancy scan.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyRecord {
    pub n: usize,
    pub i: u64,
    pub k: i64,
    pub discrepancy: i64,
    /// `5 n^2 / 8` as an exact reduced fraction.
    pub bound_num: u64,
    pub bound_den: u64,
    /// `discrepancy / n^2`, correctly rounded to f64.
    pub ratio: f64,
}

impl DiscrepancyRecord {
    pub fn bound_holds(&self) -> bool {
        // discrepancy <= 5n^2/8  <=>  8*discrepancy <= 5n^2 (exact integers)
        (self.discrepancy as i128) * self.bound_den as i128 <= self.bound_num as i128
    }
}

/// Non-coprime count of `[1+k, i+k]` minus that of `[1, i]`.
pub fn discrepancy(i: u64, k: i64, prime_set: &[u64]) -> Result<i64> {
    discrepancy_with_base(i, k, prime_set, WindowBase::One)
}

/// Discrepancy against a chosen reference window convention.
pub fn discrepancy_with_base(i: u64, k: i64, prime_set: &[u64], base: WindowBase) -> Result<i64> {
    if i < 1 {
        return Err(Error::Domain("window length must be at least 1".into()));
    }
    if 1 + k < 0 {
        return Err(Error::Domain(format!("negative interval endpoint 1 + k = {}", 1 + k)));
    }
    let i = i as i64;
    let shifted = mark_count(1 + k, i + k, prime_set)?;
    let reference = match base {
        WindowBase::One => mark_count(1, i, prime_set)?,
        WindowBase::Zero => mark_count(0, i - 1, prime_set)?,
    };
    Ok(shifted as i64 - reference as i64)
}

/// The bound `5 |J|^2 / 8` as an exact rational.
pub fn theorem1_bound(prime_set: &[u64]) -> BigRational {
    let n = prime_set.len() as i64;
    BigRational::new((5 * n * n).into(), 8.into())
}

/// The h-sum of the counting identity: for each `m`, with
/// `c = |{p in T : p | m}|`, the summand is `c - C(c,2)` plus, when `c > 2`,
/// the correction `C(c,2) - c + 1`. The total equals the number of elements
/// of `V` sharing a factor with `prod T`.
pub fn h_value(v_set: &[i64], t_primes: &[u64]) -> i64 {
    let mut h: i64 = 0;
    for &m in v_set {
        let c = t_primes.iter().filter(|&&p| m.rem_euclid(p as i64) == 0).count() as i64;
        let pairs = c * (c - 1) / 2;
        h += c - pairs;
        if c > 2 {
            h += pairs - c + 1;
        }
    }
    h
}

/// Scan `n` over a range with `i = k = (p_n^2 + 1) / 2` and `J = P(n)`,
/// emitting one record per `n` in ascending order. Work is parallel per `n`;
/// assembly is ordered, so the output is independent of the thread count.
pub fn ratio_scan(n_lo: usize, n_hi: usize, table: &PrimeTable) -> Result<Vec<DiscrepancyRecord>> {
    if n_lo < 4 || n_lo > n_hi {
        return Err(Error::Domain(format!("need 4 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")));
    }
    table.first_primes(n_hi)?;
    (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let primes = table.first_primes(n)?;
            let p = primes[n - 1];
            let i = (p * p).div_ceil(2);
            let d = discrepancy(i, i as i64, primes)?;
            let (num, den) = reduced_bound(n);
            Ok(DiscrepancyRecord {
                n,
                i,
                k: i as i64,
                discrepancy: d,
                bound_num: num,
                bound_den: den,
                ratio: d as f64 / (n * n) as f64,
            })
        })
        .collect()
}

fn reduced_bound(n: usize) -> (u64, u64) {
    let num = 5 * (n as u64) * (n as u64);
    let g = gcd(num, 8);
    (num / g, 8 / g)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
