//! Residue-class selections for folded pair conditions.
//!
//! For an even fold parameter `r`, each prime `p` contributes two residue
//! classes of a host interval: `{m : p | m}` and `{m : p | m - r}`. A
//! selection picks one class per prime; the union over all selections of all
//! their classes is exactly `{m : gcd(m(m-r), prod P(n)) != 1}`, which turns
//! pair conditions (twin pairs for `r = 2`, Goldbach splits of `r` for
//! `r = 2z`) into plain divisibility patterns.
//!
//! `m - r` may be negative; divisibility is evaluated through the residue
//! `m ≡ r (mod p)`, which is sign-agnostic, matching the mirror reading of
//! negative positions.

use crate::error::{Error, Result};
use crate::sieve::{mark_count, PrimeTable};
use serde::Serialize;

/// Largest selection index width: `2^n` selections are enumerated.
const MAX_ENUMERATION_N: usize = 20;

/// Largest `n` for which `p_1 * ... * p_n` fits in u64 (CRT modulus).
const MAX_SHIFT_N: usize = 15;

/// One choice of residue class per prime of `P(n)` over a host interval.
#[derive(Debug, Clone)]
pub struct Selection {
    n: usize,
    r: i64,
    lo: i64,
    hi: i64,
    primes: Vec<u64>,
    /// Bit `k` set means the class `m ≡ r (mod p_{k+1})` is chosen,
    /// otherwise `m ≡ 0`.
    mask: u32,
}

impl Selection {
    pub fn new(i: u64, n: usize, r: i64, mask: u32) -> Result<Self> {
        if r % 2 != 0 {
            return Err(Error::Domain(format!("fold parameter must be even, got {r}")));
        }
        if n == 0 {
            return Err(Error::Domain("selection needs at least one prime".into()));
        }
        if n > MAX_ENUMERATION_N {
            return Err(Error::Capacity(format!("selection index n must be in 1..={MAX_ENUMERATION_N}, got {n}")));
        }
        if n < 32 && mask >= 1 << n {
            return Err(Error::Domain(format!("choice mask {mask:#b} has bits beyond n = {n}")));
        }
        let primes = small_primes(n);
        if i < 1 {
            return Err(Error::Domain("host interval must be nonempty".into()));
        }
        if n >= 2 && i < 2 * primes[n - 1] {
            // Below 2*p_n two classes of distinct primes can coincide and the
            // selection set is not well defined; with a single prime the
            // distinctness condition is vacuous.
            return Err(Error::Domain(format!("host interval [1, {i}] shorter than 2 p_n = {}", 2 * primes[n - 1])));
        }
        Ok(Self { n, r, lo: 1, hi: i as i64, primes, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn interval(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// The chosen shift `s_p ∈ {0, r}` for each prime, ascending in `p`.
    pub fn choices(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.primes
            .iter()
            .enumerate()
            .map(move |(k, &p)| (p, if self.mask >> k & 1 == 1 { self.r } else { 0 }))
    }
}

/// All `2^n` selections over `[1, i]`, ordered as a binary counter over
/// primes ascending with the zero class before the shifted class.
pub fn enumerate_selections(i: u64, n: usize, r: i64) -> Result<Vec<Selection>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity(format!("2^{n} selections exceed the enumeration budget")));
    }
    (0..1u32 << n).map(|mask| Selection::new(i, n, r, mask)).collect()
}

/// `|union of the selection's classes|`, by marking over the host interval.
pub fn selection_union_size(sel: &Selection) -> u64 {
    let len = (sel.hi - sel.lo) as usize + 1;
    let mut words = vec![0u64; len.div_ceil(64)];
    for (p, s) in sel.choices() {
        mark_residue(&mut words, sel.lo, sel.hi, p, s);
    }
    words.iter().map(|w| w.count_ones() as u64).sum()
}

fn mark_residue(words: &mut [u64], lo: i64, hi: i64, p: u64, s: i64) {
    let p = p as i64;
    let target = s.rem_euclid(p);
    let mut m = lo + (target - lo.rem_euclid(p)).rem_euclid(p);
    while m <= hi {
        let bit = (m - lo) as u64;
        words[(bit / 64) as usize] |= 1 << (bit % 64);
        m += p;
    }
}

/// Counts of `m in [1, i]` split by whether `m(m-r)` is coprime to the first
/// `n` primes.
#[derive(Debug, Clone, Serialize)]
pub struct FoldedCountRecord {
    pub i: u64,
    pub n: usize,
    pub r: i64,
    pub coprime_count: u64,
    pub noncoprime_count: u64,
}

/// Count via per-prime class marking (classes `m ≡ 0` and `m ≡ r` mod `p`),
/// never by forming the product `m(m-r)`.
pub fn folded_count(i: u64, n: usize, r: i64, table: &PrimeTable) -> Result<FoldedCountRecord> {
    if r % 2 != 0 {
        return Err(Error::Domain(format!("fold parameter must be even, got {r}")));
    }
    if i < 1 {
        return Err(Error::Domain("host interval must be nonempty".into()));
    }
    let primes = table.first_primes(n)?;
    let noncoprime = folded_noncoprime_count(i, primes, r);
    Ok(FoldedCountRecord { i, n, r, coprime_count: i - noncoprime, noncoprime_count: noncoprime })
}

/// Non-coprime count of the folded condition over an explicit prime set.
pub fn folded_noncoprime_count(i: u64, primes: &[u64], r: i64) -> u64 {
    let lo = 1i64;
    let hi = i as i64;
    let mut words = vec![0u64; (i as usize).div_ceil(64)];
    for &p in primes {
        mark_residue(&mut words, lo, hi, p, 0);
        mark_residue(&mut words, lo, hi, p, r);
    }
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// Find the shift `i_T` in `[1, p_1 ... p_n]` such that the window
/// `[i_T, j + i_T - 1]` reproduces the selection's class pattern position by
/// position, then verify that the plain non-coprime count of that window
/// equals the selection's union size.
///
/// The shift is composed by incremental CRT: position `v` of the window is
/// divisible by `p` exactly when position `v` of `[1, j]` lies in the chosen
/// class, which pins `i_T ≡ 1 - s_p (mod p)` for every prime.
pub fn find_shift(j: u64, sel: &Selection, table: &PrimeTable) -> Result<u64> {
    if sel.lo != 1 || sel.hi != j as i64 {
        return Err(Error::Domain(format!(
            "selection lives on [{}, {}], not [1, {j}]",
            sel.lo, sel.hi
        )));
    }
    if sel.n > MAX_SHIFT_N {
        return Err(Error::Capacity(format!("primorial of n = {} does not fit the CRT modulus", sel.n)));
    }
    let primes = table.first_primes(sel.n)?;

    let mut modulus: u64 = 1;
    let mut shift: u64 = 0; // current solution mod `modulus`
    for (p, s) in sel.choices() {
        let target = (1 - s).rem_euclid(p as i64) as u64;
        let diff = (target + p - shift % p) % p;
        let step = mod_inverse(modulus % p, p)
            .ok_or_else(|| Error::Numeric(format!("modulus not invertible mod {p}")))?;
        let t = diff as u128 * step as u128 % p as u128;
        shift += (t as u64) * modulus;
        modulus *= p;
    }
    let shift = if shift == 0 { modulus } else { shift };

    // Position-by-position pattern check against the selection.
    for (p, s) in sel.choices() {
        let p = p as i64;
        for m in 1..=j as i64 {
            let window_div = (shift as i64 + m - 1) % p == 0;
            let class_member = (m - s).rem_euclid(p) == 0;
            if window_div != class_member {
                return Err(Error::Falsification(format!(
                    "shift {shift} fails the class pattern at position {m} for prime {p}"
                )));
            }
        }
    }

    // The count identity the shift is claimed to realize.
    let union = selection_union_size(sel);
    let window = mark_count(shift as i64, shift as i64 + j as i64 - 1, primes)?;
    if union != window {
        return Err(Error::Falsification(format!(
            "union size {union} != window non-coprime count {window} at shift {shift}"
        )));
    }
    Ok(shift)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// `|{p <= limit : p and p - 2 are both prime}|`, counted at the upper member.
pub fn twin_pair_count(limit: u64, table: &PrimeTable) -> Result<u64> {
    if limit > table.limit() {
        return Err(Error::Range(format!("twin count to {limit} beyond table limit {}", table.limit())));
    }
    let primes = table.primes();
    let end = primes.partition_point(|&p| p <= limit);
    Ok(primes[..end].iter().filter(|&&p| p >= 5 && table.is_prime(p - 2)).count() as u64)
}

/// Number of unordered prime pairs `(p, q)`, `p <= q`, with `p + q = target`.
pub fn goldbach_representations(target: u64, table: &PrimeTable) -> Result<u64> {
    if target % 2 != 0 || target < 4 {
        return Err(Error::Domain(format!("Goldbach target must be even and >= 4, got {target}")));
    }
    if target > table.limit() {
        return Err(Error::Range(format!("target {target} beyond table limit {}", table.limit())));
    }
    let primes = table.primes();
    let end = primes.partition_point(|&p| p <= target / 2);
    Ok(primes[..end].iter().filter(|&&p| table.is_prime(target - p)).count() as u64)
}

/// First `n` primes by trial division; `n` stays small here.
pub(crate) fn small_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes.iter().all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}
