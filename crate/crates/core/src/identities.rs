//! Exact-period verification of the totient counting identities.
//!
//! Each check evaluates a claimed identity on both sides: an exact
//! brute-force count over one full period (by residue marking, chunked so
//! memory stays flat), and the closed form kept as an exact rational.
//! A mismatch is a first-class result, not an error: the whole point is to
//! document where a literal reading fails.

use crate::error::{Error, Result};
use crate::fold::small_primes;
use num::{BigInt, BigRational, One};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

/// Full-period enumeration budget, in integers.
pub const PERIOD_BUDGET: u64 = 1_000_000_000;

/// Chunk size (in bits) for period marking.
const CHUNK_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LemmaId {
    Bn,
    Bm,
    Cap,
    Mab,
}

/// One side-by-side comparison: an exact count and a closed-form rational.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub label: &'static str,
    pub brute: u64,
    pub formula: BigRational,
    pub matches: bool,
}

impl Comparison {
    fn equality(label: &'static str, brute: u64, formula: BigRational) -> Self {
        let matches = formula.is_integer() && formula.to_integer() == BigInt::from(brute);
        Self { label, brute, formula, matches }
    }
}

/// Verdict for one identity instance.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub lemma_id: LemmaId,
    pub params: Value,
    pub comparisons: Vec<Comparison>,
}

impl IdentityReport {
    /// True when every claimed relation of the instance holds exactly.
    pub fn matches(&self) -> bool {
        self.comparisons.iter().all(|c| c.matches)
    }

    /// Primary brute-force count (first comparison).
    pub fn brute_count(&self) -> u64 {
        self.comparisons[0].brute
    }

    /// Primary closed-form value (first comparison).
    pub fn formula_value(&self) -> &BigRational {
        &self.comparisons[0].formula
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .comparisons
            .iter()
            .map(|c| {
                json!({
                    "check": c.label,
                    "brute_count": c.brute,
                    "formula_value": format!("{}/{}", c.formula.numer(), c.formula.denom()),
                    "matches": c.matches,
                })
            })
            .collect();
        json!({
            "lemma_id": self.lemma_id,
            "params": self.params,
            "brute_count": self.brute_count(),
            "formula_value": format!("{}/{}", self.formula_value().numer(), self.formula_value().denom()),
            "matches": self.matches(),
            "comparisons": comps,
            "status": if self.matches() { "match" } else { "mismatch" },
        })
    }
}

/// Pair-coprimality identity: over one full period `[1, prod J]`, the number
/// of `m` with `m(m-s)` coprime to `prod J` against
/// `phi(prod J) * prod_{d | J, d not dividing s} (1 - 1/(d-1))`.
pub fn bn_check(elements: &[u64], s: i64) -> Result<IdentityReport> {
    if s % 2 != 0 {
        return Err(Error::Domain(format!("s must be even, got {s}")));
    }
    let period = validated_period(elements)?;
    let factors = distinct_prime_factors_of_set(elements);

    // gcd(m(m-s), prod J) = 1 iff m avoids the classes 0 and s mod every
    // prime factor of the period.
    let classes = pair_classes(&factors, s);
    let brute = period - count_marked(period, &classes);

    let phi = phi_of_product(period, &factors);
    let mut formula = BigRational::from_integer(phi);
    for &d in elements {
        if !divides(d, s) && d >= 2 {
            formula *= BigRational::new(BigInt::from(d) - 2, BigInt::from(d) - 1);
        }
    }

    Ok(IdentityReport {
        lemma_id: LemmaId::Bn,
        params: json!({ "J": elements, "s": s, "period": period }),
        comparisons: vec![Comparison::equality("pair-coprime-count", brute, formula)],
    })
}

/// The two-fold variant: `s` has at least two divisors in `J`, `t` has two as
/// its sole divisor. Reports both closed forms of the chain and the strict
/// inequality between the two brute counts.
pub fn bm_check(elements: &[u64], s: i64, t: i64) -> Result<IdentityReport> {
    if s % 2 != 0 {
        return Err(Error::Domain(format!("s must be even, got {s}")));
    }
    if !elements.contains(&2) {
        return Err(Error::Domain("J must contain 2".into()));
    }
    let s_divisors = elements.iter().filter(|&&d| divides(d, s)).count();
    if s_divisors < 2 {
        return Err(Error::Domain(format!("s = {s} must have at least two divisors in J")));
    }
    let t_divisors: Vec<u64> = elements.iter().copied().filter(|&d| divides(d, t)).collect();
    if t_divisors != [2] {
        return Err(Error::Domain(format!("two must be the sole element of J dividing t = {t}")));
    }
    let period = validated_period(elements)?;
    let factors = distinct_prime_factors_of_set(elements);

    let brute_s = period - count_marked(period, &pair_classes(&factors, s));
    let brute_t = period - count_marked(period, &pair_classes(&factors, t));

    // prod J * prod (1 - 1/d), literally per element.
    let mut base = BigRational::from_integer(BigInt::from(period));
    for &d in elements {
        base *= BigRational::new(BigInt::from(d) - 1, BigInt::from(d));
    }
    let mut closed_s = base.clone();
    for &d in elements {
        if d != 2 && divides(d, s) {
            closed_s *= BigRational::new(BigInt::from(d) - 2, BigInt::from(d) - 1);
        }
    }
    let mut closed_t = base;
    for &d in elements {
        if d != 2 {
            closed_t *= BigRational::new(BigInt::from(d) - 2, BigInt::from(d) - 1);
        }
    }

    let inequality = Comparison {
        label: "count-s-exceeds-count-t",
        brute: brute_s,
        formula: BigRational::from_integer(BigInt::from(brute_t)),
        matches: brute_s > brute_t,
    };

    Ok(IdentityReport {
        lemma_id: LemmaId::Bm,
        params: json!({ "J": elements, "s": s, "t": t, "period": period }),
        comparisons: vec![
            Comparison::equality("s-closed-form", brute_s, closed_s),
            Comparison::equality("t-closed-form", brute_t, closed_t),
            inequality,
        ],
    })
}

/// Intersection identity over the period `prod P(n) * b`: elements sharing a
/// factor with `prod (V u {b})` among those sharing a factor with
/// `prod (P(n) \ V)`.
pub fn cap_check(n: usize, v_subset: &[u64], b: u64) -> Result<IdentityReport> {
    let (p_n, v_sorted) = validated_subset(n, v_subset)?;
    if b < 2 {
        return Err(Error::Domain(format!("b must be at least 2, got {b}")));
    }
    if p_n.iter().any(|&p| b % p == 0) {
        return Err(Error::Domain(format!("b = {b} shares a factor with P({n})")));
    }
    let period = checked_product(p_n.iter().chain(std::iter::once(&b)).copied())?;

    let b_factors = distinct_prime_factors(b);
    let group_a = zero_classes(v_sorted.iter().chain(&b_factors).copied());
    let rest: Vec<u64> = p_n.iter().copied().filter(|p| !v_sorted.contains(p)).collect();
    let group_b = zero_classes(rest.iter().copied());

    let lhs = count_marked_and(period, &group_a, &group_b);
    let in_b = count_marked(period, &group_b);

    // (1 - prod_{q in V u {b}} (1 - 1/q)) * |in B|, literally per element.
    let mut survival = BigRational::one();
    for q in v_sorted.iter().chain(std::iter::once(&b)) {
        survival *= BigRational::new(BigInt::from(*q) - 1, BigInt::from(*q));
    }
    let formula = (BigRational::one() - survival) * BigRational::from_integer(BigInt::from(in_b));

    Ok(IdentityReport {
        lemma_id: LemmaId::Cap,
        params: json!({ "n": n, "V": v_sorted, "b": b, "period": period }),
        comparisons: vec![Comparison::equality("intersection-count", lhs, formula)],
    })
}

/// The multiple-union variant with an `a`-element subset `S` of `[1, b]`:
/// the left side unions in all multiples of `w * b`, `w in S`, and the
/// intersection is taken with the set coprime to `prod (P(n) \ V)`.
pub fn mab_check(n: usize, v_subset: &[u64], b: u64, s_set: &[u64]) -> Result<IdentityReport> {
    let (p_n, v_sorted) = validated_subset(n, v_subset)?;
    if b < 2 {
        return Err(Error::Domain(format!("b must be at least 2, got {b}")));
    }
    if p_n.iter().any(|&p| b % p == 0) {
        return Err(Error::Domain(format!("b = {b} shares a factor with P({n})")));
    }
    let mut s_sorted = s_set.to_vec();
    s_sorted.sort_unstable();
    s_sorted.dedup();
    if s_sorted.len() != s_set.len() {
        return Err(Error::Domain("S has repeated elements".into()));
    }
    if s_sorted.is_empty() || s_sorted.len() as u64 >= b {
        return Err(Error::Domain(format!("need 1 <= |S| < b = {b}")));
    }
    if s_sorted.iter().any(|&w| w < 1 || w > b) {
        return Err(Error::Domain(format!("S must lie inside [1, {b}]")));
    }
    let a = s_sorted.len() as u64;
    let period = checked_product(p_n.iter().chain(std::iter::once(&b)).copied())?;

    let b_factors = distinct_prime_factors(b);
    let group_a = zero_classes(v_sorted.iter().chain(&b_factors).copied());
    let multiples = zero_classes(s_sorted.iter().map(|&w| w * b));
    let rest: Vec<u64> = p_n.iter().copied().filter(|p| !v_sorted.contains(p)).collect();
    let group_b = zero_classes(rest.iter().copied());

    let lhs = count_marked_or_andnot(period, &group_a, &multiples, &group_b);
    let coprime_b = period - count_marked(period, &group_b);

    let mut survival = BigRational::new(BigInt::from(b - a), BigInt::from(b));
    for &q in &v_sorted {
        survival *= BigRational::new(BigInt::from(q) - 1, BigInt::from(q));
    }
    let formula = (BigRational::one() - survival) * BigRational::from_integer(BigInt::from(coprime_b));

    Ok(IdentityReport {
        lemma_id: LemmaId::Mab,
        params: json!({ "n": n, "V": v_sorted, "b": b, "S": s_sorted, "a": a, "period": period }),
        comparisons: vec![Comparison::equality("union-intersection-count", lhs, formula)],
    })
}

/// Randomized admissible instances for the pair-coprimality identity.
/// Elements are sampled as distinct primes (the identity is exact only for
/// prime elements; composite elements are accepted by `bn_check` but
/// falsify the literal product over elements).
pub fn bn_sweep(count: usize, max_period: u64, seed: u64) -> Result<Vec<IdentityReport>> {
    if max_period > PERIOD_BUDGET {
        return Err(Error::Capacity(format!("max period {max_period} over budget {PERIOD_BUDGET}")));
    }
    let pool = small_primes(25); // primes to 97
    let instances: Vec<(Vec<u64>, i64)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                loop {
                    let mut order: Vec<u64> = pool.clone();
                    order.shuffle(&mut rng);
                    let mut set = Vec::new();
                    let mut product = 1u64;
                    for p in order {
                        if product * p <= max_period && rng.random_bool(0.6) {
                            product *= p;
                            set.push(p);
                        }
                    }
                    if set.len() >= 2 {
                        set.sort_unstable();
                        let s = 2 * rng.random_range(0..=product as i64);
                        return (set, s);
                    }
                }
            })
            .collect()
    };
    instances.par_iter().map(|(set, s)| bn_check(set, *s)).collect()
}

/// Randomized admissible instances for the intersection identity.
/// `b` is sampled prime: the interleaving argument behind the closed form
/// needs every element of `V u {b}` to contribute an independent residue.
pub fn cap_sweep(count: usize, max_period: u64, seed: u64) -> Result<Vec<IdentityReport>> {
    if max_period > PERIOD_BUDGET {
        return Err(Error::Capacity(format!("max period {max_period} over budget {PERIOD_BUDGET}")));
    }
    let pool = small_primes(1229); // primes to 9973
    let instances: Vec<(usize, Vec<u64>, u64)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                loop {
                    let n = rng.random_range(1..=6usize);
                    let p_n = small_primes(n);
                    let primorial: u64 = p_n.iter().product();
                    let cap = max_period / primorial;
                    if cap < 3 {
                        continue;
                    }
                    let choices: Vec<u64> =
                        pool.iter().copied().filter(|&b| b <= cap && b > p_n[n - 1]).collect();
                    if choices.is_empty() {
                        continue;
                    }
                    let b = choices[rng.random_range(0..choices.len())];
                    let v: Vec<u64> = p_n.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
                    return (n, v, b);
                }
            })
            .collect()
    };
    instances.par_iter().map(|(n, v, b)| cap_check(*n, v, *b)).collect()
}

// ---- shared helpers ----

fn divides(d: u64, s: i64) -> bool {
    d != 0 && s.rem_euclid(d as i64) == 0
}

fn validated_period(elements: &[u64]) -> Result<u64> {
    if elements.is_empty() {
        return Err(Error::Domain("empty element set".into()));
    }
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != elements.len() {
        return Err(Error::Domain("element set has repeats".into()));
    }
    if sorted[0] < 2 {
        return Err(Error::Domain("elements must be at least 2".into()));
    }
    for (i, &x) in sorted.iter().enumerate() {
        for &y in &sorted[i + 1..] {
            if gcd(x, y) != 1 {
                return Err(Error::Domain(format!("{x} and {y} are not coprime")));
            }
        }
    }
    checked_product(sorted.iter().copied())
}

fn validated_subset(n: usize, v_subset: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    if n == 0 || n > 9 {
        return Err(Error::Domain(format!("n must be in 1..=9 for full-period checks, got {n}")));
    }
    let p_n = small_primes(n);
    let mut v_sorted = v_subset.to_vec();
    v_sorted.sort_unstable();
    v_sorted.dedup();
    if v_sorted.len() != v_subset.len() {
        return Err(Error::Domain("V has repeated elements".into()));
    }
    if v_sorted.iter().any(|q| !p_n.contains(q)) {
        return Err(Error::Domain(format!("V must be a subset of P({n})")));
    }
    Ok((p_n, v_sorted))
}

fn checked_product(items: impl Iterator<Item = u64>) -> Result<u64> {
    let mut product = 1u64;
    for x in items {
        product = product
            .checked_mul(x)
            .filter(|&p| p <= PERIOD_BUDGET)
            .ok_or_else(|| Error::Capacity(format!("period exceeds the {PERIOD_BUDGET} budget")))?;
    }
    Ok(product)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn distinct_prime_factors_of_set(elements: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = elements.iter().flat_map(|&d| distinct_prime_factors(d)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn phi_of_product(period: u64, factors: &[u64]) -> BigInt {
    let mut phi = BigInt::from(period);
    for &q in factors {
        phi = phi / q * (q - 1);
    }
    phi
}

/// Residue classes `m ≡ 0` and `m ≡ s (mod q)` for each prime factor.
fn pair_classes(factors: &[u64], s: i64) -> Vec<(u64, u64)> {
    let mut classes = Vec::new();
    for &q in factors {
        classes.push((q, 0));
        let r = s.rem_euclid(q as i64) as u64;
        if r != 0 {
            classes.push((q, r));
        }
    }
    classes
}

fn zero_classes(moduli: impl Iterator<Item = u64>) -> Vec<(u64, u64)> {
    moduli.map(|q| (q, 0)).collect()
}

fn mark_chunk(words: &mut [u64], chunk_lo: u64, chunk_len: u64, classes: &[(u64, u64)]) {
    words.fill(0);
    for &(q, r) in classes {
        // First m >= chunk_lo with m ≡ r (mod q).
        let mut m = chunk_lo + (r + q - chunk_lo % q) % q;
        while m < chunk_lo + chunk_len {
            let bit = m - chunk_lo;
            words[(bit / 64) as usize] |= 1 << (bit % 64);
            m += q;
        }
    }
    // Ghost bits above chunk_len stay zero because fill(0) ran first and the
    // marking loop respects the bound.
}

fn fold_chunks<F: FnMut(&[u64], &[u64], &[u64], u64)>(
    period: u64,
    a: &[(u64, u64)],
    w: &[(u64, u64)],
    b: &[(u64, u64)],
    mut f: F,
) {
    let words_per_chunk = (CHUNK_BITS / 64) as usize;
    let mut buf_a = vec![0u64; words_per_chunk];
    let mut buf_w = vec![0u64; words_per_chunk];
    let mut buf_b = vec![0u64; words_per_chunk];
    let mut lo = 1u64;
    while lo <= period {
        let len = CHUNK_BITS.min(period - lo + 1);
        let words = (len as usize).div_ceil(64);
        mark_chunk(&mut buf_a[..words], lo, len, a);
        mark_chunk(&mut buf_w[..words], lo, len, w);
        mark_chunk(&mut buf_b[..words], lo, len, b);
        f(&buf_a[..words], &buf_w[..words], &buf_b[..words], len);
        lo += len;
    }
}

fn tail_mask(len: u64, words: usize) -> u64 {
    let rem = len % 64;
    if rem == 0 || words == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

/// Count of `m in [1, period]` hitting at least one class.
fn count_marked(period: u64, classes: &[(u64, u64)]) -> u64 {
    let mut total = 0u64;
    fold_chunks(period, classes, &[], &[], |a, _, _, len| {
        let mask = tail_mask(len, a.len());
        for (i, &word) in a.iter().enumerate() {
            let w = if i + 1 == a.len() { word & mask } else { word };
            total += w.count_ones() as u64;
        }
    });
    total
}

/// Count of `m` in both class groups.
fn count_marked_and(period: u64, a: &[(u64, u64)], b: &[(u64, u64)]) -> u64 {
    let mut total = 0u64;
    fold_chunks(period, a, &[], b, |wa, _, wb, len| {
        let mask = tail_mask(len, wa.len());
        for i in 0..wa.len() {
            let mut w = wa[i] & wb[i];
            if i + 1 == wa.len() {
                w &= mask;
            }
            total += w.count_ones() as u64;
        }
    });
    total
}

/// Count of `m` in `(A u W) \ B`.
fn count_marked_or_andnot(period: u64, a: &[(u64, u64)], w: &[(u64, u64)], b: &[(u64, u64)]) -> u64 {
    let mut total = 0u64;
    fold_chunks(period, a, w, b, |wa, ww, wb, len| {
        let mask = tail_mask(len, wa.len());
        for i in 0..wa.len() {
            let mut word = (wa[i] | ww[i]) & !wb[i];
            if i + 1 == wa.len() {
                word &= mask;
            }
            total += word.count_ones() as u64;
        }
    });
    total
}
