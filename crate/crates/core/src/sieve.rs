//! Prime generation and interval coprimality counting.
//!
//! `PrimeTable` is built once by a segmented sieve of Eratosthenes (odd-only
//! bitset, segments sized to stay cache resident) and is immutable afterwards,
//! so it can be shared freely across threads. Segment results are assembled
//! in index order, which keeps the table independent of the worker count.
//!
//! Interval counting never forms the product of the prime set: an interval is
//! scanned by marking the multiples of each prime, so products that overflow
//! 64 bits are never needed.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Default sieve segment, in integers. 2^20 keeps the per-segment bitset at
/// 64 KiB of odd-number words.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Hard cap on the bit length of a single marked interval (512 MiB of bits).
const INTERVAL_BIT_BUDGET: u64 = 1 << 32;

/// Primes, prime counts and least-factor queries up to a fixed limit.
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    /// Bit `m/2` set iff the odd number `m` is prime.
    odd_bits: Vec<u64>,
}

impl PrimeTable {
    /// Sieve all primes in `[2, limit]` with the default segment size.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_segment(limit, DEFAULT_SEGMENT_SIZE)
    }

    /// Sieve with an explicit segment size (must be a positive multiple of
    /// 128 so that segments own disjoint bitset words).
    pub fn build_with_segment(limit: u64, segment_size: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
        }
        if segment_size == 0 || segment_size % 128 != 0 {
            return Err(Error::Domain(format!(
                "segment size must be a positive multiple of 128, got {segment_size}"
            )));
        }

        // Base primes up to sqrt(limit), by a plain in-memory sieve.
        let root = integer_sqrt(limit);
        let mut base = vec![true; root as usize + 1];
        base[0] = false;
        if root >= 1 {
            base[1] = false;
        }
        let mut p = 2u64;
        while p * p <= root {
            if base[p as usize] {
                let mut q = p * p;
                while q <= root {
                    base[q as usize] = false;
                    q += p;
                }
            }
            p += 1;
        }
        let base_odd: Vec<u64> = (3..=root).filter(|&m| base[m as usize] && m % 2 == 1).collect();

        // Odd-number bitset over [1, limit]; bit i represents m = 2i + 1.
        let last_odd = limit - (limit % 2 == 0) as u64;
        let n_bits = last_odd / 2 + 1;
        let n_words = n_bits.div_ceil(64) as usize;
        let mut words = vec![u64::MAX; n_words];
        let seg_words = segment_size / 128;

        words
            .par_chunks_mut(seg_words)
            .enumerate()
            .for_each(|(chunk_idx, chunk)| {
                let bit0 = (chunk_idx * seg_words * 64) as u64;
                let bits_here = (chunk.len() * 64) as u64;
                let m_lo = 2 * bit0 + 1;
                let m_hi = 2 * (bit0 + bits_here - 1) + 1;
                for &p in &base_odd {
                    let mut start = p * p;
                    if start < m_lo {
                        let k = m_lo.div_ceil(p);
                        start = (k + (k & 1 ^ 1)) * p; // first odd multiple >= m_lo
                        if start < p * p {
                            start = p * p;
                        }
                    }
                    let mut m = start;
                    while m <= m_hi {
                        let bit = m / 2 - bit0;
                        chunk[(bit / 64) as usize] &= !(1 << (bit % 64));
                        m += 2 * p;
                    }
                }
            });

        // 1 is not prime; clear ghost bits past the limit.
        words[0] &= !1;
        for bit in n_bits..(n_words as u64 * 64) {
            words[(bit / 64) as usize] &= !(1 << (bit % 64));
        }

        // Collect primes in order, per segment, then flatten.
        let mut primes: Vec<u64> = Vec::new();
        primes.push(2);
        let collected: Vec<Vec<u64>> = words
            .par_chunks(seg_words)
            .enumerate()
            .map(|(chunk_idx, chunk)| {
                let bit0 = (chunk_idx * seg_words * 64) as u64;
                let mut out = Vec::new();
                for (wi, &w) in chunk.iter().enumerate() {
                    let mut w = w;
                    while w != 0 {
                        let b = w.trailing_zeros() as u64;
                        out.push(2 * (bit0 + wi as u64 * 64 + b) + 1);
                        w &= w - 1;
                    }
                }
                out
            })
            .collect();
        for seg in collected {
            primes.extend(seg);
        }

        Ok(Self { limit, primes, odd_bits: words })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The first `n` primes, or a range error if the table is too small.
    pub fn first_primes(&self, n: usize) -> Result<&[u64]> {
        self.primes.get(..n).ok_or_else(|| {
            Error::Range(format!("table up to {} holds {} primes, need {n}", self.limit, self.primes.len()))
        })
    }

    /// Membership test; `m` must not exceed the table limit.
    pub fn is_prime(&self, m: u64) -> bool {
        assert!(m <= self.limit, "is_prime({m}) beyond table limit {}", self.limit);
        if m < 2 {
            return false;
        }
        if m % 2 == 0 {
            return m == 2;
        }
        self.odd_bits[(m / 2 / 64) as usize] >> (m / 2 % 64) & 1 == 1
    }

    /// π(x): number of primes not exceeding `x`.
    pub fn prime_count(&self, x: f64) -> Result<u64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("prime count of non-finite {x}")));
        }
        if x > self.limit as f64 {
            return Err(Error::Range(format!("pi({x}) beyond table limit {}", self.limit)));
        }
        Ok(self.primes.partition_point(|&p| (p as f64) <= x) as u64)
    }

    /// p_n, 1-indexed.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("prime index is 1-based".into()));
        }
        self.primes
            .get(n as usize - 1)
            .copied()
            .ok_or_else(|| Error::Range(format!("table holds {} primes, need p_{n}", self.primes.len())))
    }

    /// Least prime factor of `m` (equals `m` when `m` is prime).
    pub fn smallest_prime_factor(&self, m: u64) -> Result<u64> {
        if m < 2 {
            return Err(Error::Domain(format!("smallest prime factor of {m} undefined")));
        }
        if m > self.limit {
            return Err(Error::Range(format!("spf({m}) beyond table limit {}", self.limit)));
        }
        for &p in &self.primes {
            if p * p > m {
                break;
            }
            if m % p == 0 {
                return Ok(p);
            }
        }
        Ok(m)
    }
}

/// An integer interval `[lo, hi]` together with a finite set of distinct primes.
#[derive(Debug, Clone)]
pub struct IntervalSpec {
    lo: i64,
    hi: i64,
    prime_set: Vec<u64>,
}

impl IntervalSpec {
    pub fn new(lo: i64, hi: i64, mut prime_set: Vec<u64>) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        prime_set.sort_unstable();
        for pair in prime_set.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::Domain(format!("duplicate prime {} in set", pair[0])));
            }
        }
        for &p in &prime_set {
            if !is_prime_u64(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
        }
        Ok(Self { lo, hi, prime_set })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// |I| = hi - lo + 1; construction guarantees it is at least 1.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn prime_set(&self) -> &[u64] {
        &self.prime_set
    }
}

/// `|{m in [lo, hi] : gcd(m, prod J) != 1}|`, by marking multiples of each
/// prime over the interval. `m = 0` divides by every prime, so it counts as
/// non-coprime whenever `J` is nonempty.
pub fn noncoprime_count(spec: &IntervalSpec) -> Result<u64> {
    mark_count(spec.lo, spec.hi, &spec.prime_set)
}

/// Marking count over a raw window, without re-validating the prime set.
pub(crate) fn mark_count(lo: i64, hi: i64, primes: &[u64]) -> Result<u64> {
    if lo > hi {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    if primes.is_empty() {
        return Ok(0);
    }
    let len = hi
        .checked_sub(lo)
        .and_then(|d| d.checked_add(1))
        .ok_or_else(|| Error::Domain(format!("interval [{lo}, {hi}] overflows 64-bit length")))? as u64;
    if len > INTERVAL_BIT_BUDGET {
        return Err(Error::Capacity(format!("interval of length {len} exceeds marking budget")));
    }
    let mut words = vec![0u64; (len as usize).div_ceil(64)];
    for &p in primes {
        let p = p as i64;
        let first = lo + (lo.rem_euclid(p) != 0) as i64 * (p - lo.rem_euclid(p));
        let mut m = first;
        while m <= hi {
            let bit = (m - lo) as u64;
            words[(bit / 64) as usize] |= 1 << (bit % 64);
            m += p;
        }
    }
    Ok(words.iter().map(|w| w.count_ones() as u64).sum())
}

/// Deterministic Miller-Rabin, valid for the whole u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn integer_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
