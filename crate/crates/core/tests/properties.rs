//! Property tests: every marking-based count is pinned to an independent
//! gcd/trial-division route, and the stated invariants hold on randomized
//! instances.

use foldsieve_core::bounds;
use foldsieve_core::fold::{self, Selection};
use foldsieve_core::identities;
use foldsieve_core::interval;
use foldsieve_core::sieve::{noncoprime_count, IntervalSpec, PrimeTable};
use num::ToPrimitive;
use proptest::prelude::*;

/// gcd-route count, independent of the marking implementation.
fn gcd_noncoprime(lo: i64, hi: i64, primes: &[u64]) -> u64 {
    (lo..=hi)
        .filter(|&m| primes.iter().any(|&p| m.rem_euclid(p as i64) == 0))
        .count() as u64
}

fn prime_subset(mask: usize, pool: &[u64]) -> Vec<u64> {
    pool.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_identity_and_gcd_equivalence(
        lo in -1000i64..1000,
        len in 0u64..2000,
        mask in 0usize..1024,
    ) {
        let pool = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        let primes = prime_subset(mask, &pool);
        let hi = lo + len as i64;
        let spec = IntervalSpec::new(lo, hi, primes.clone()).unwrap();
        let non = noncoprime_count(&spec).unwrap();
        let coprime = (lo..=hi)
            .filter(|&m| primes.iter().all(|&p| m.rem_euclid(p as i64) != 0))
            .count() as u64;
        prop_assert_eq!(non + coprime, spec.len());
        prop_assert_eq!(non, gcd_noncoprime(lo, hi, &primes));
    }

    #[test]
    fn discrepancy_never_exceeds_bound_for_four_plus_primes(
        i in 1u64..1_000_000,
        k in 0i64..1_000_000,
        mask in 0usize..(1 << 25),
    ) {
        let table = PrimeTable::build(100).unwrap();
        let pool = table.first_primes(25).unwrap();
        let j = prime_subset(mask, pool);
        prop_assume!(j.len() >= 4);
        let d = interval::discrepancy(i, k, &j).unwrap();
        let bound = interval::theorem1_bound(&j);
        // An excess would be a falsification finding, reported not crashed.
        let holds = num::BigRational::from_integer(d.into()) <= bound;
        prop_assert!(holds, "discrepancy {} exceeds bound {} for |J|={}", d, bound, j.len());
    }

    #[test]
    fn zero_shift_means_zero_discrepancy(i in 1u64..10_000, mask in 0usize..256) {
        let pool = [2u64, 3, 5, 7, 11, 13, 17, 19];
        let j = prime_subset(mask, &pool);
        prop_assert_eq!(interval::discrepancy(i, 0, &j).unwrap(), 0);
    }

    #[test]
    fn h_value_equals_noncoprime_cardinality(
        v_raw in prop::collection::btree_set(0i64..10_000, 0..80),
        mask in 0usize..64,
    ) {
        let pool = [2u64, 3, 5, 7, 11, 13];
        let t = prime_subset(mask, &pool);
        let v: Vec<i64> = v_raw.into_iter().collect();
        let expect = v
            .iter()
            .filter(|&&m| t.iter().any(|&p| m.rem_euclid(p as i64) == 0))
            .count() as i64;
        prop_assert_eq!(interval::h_value(&v, &t), expect);
    }

    #[test]
    fn union_identity_random_instances(
        i in 30u64..2_000,
        n in 1usize..=6,
        r_half in 0i64..2_000,
    ) {
        let table = PrimeTable::build(100).unwrap();
        let primes = table.first_primes(n).unwrap();
        let r = 2 * r_half;
        prop_assume!(i >= 2 * primes[n - 1]);
        let mut in_union = vec![false; i as usize + 1];
        for sel in fold::enumerate_selections(i, n, r).unwrap() {
            for (p, s) in sel.choices() {
                let p = p as i64;
                let mut m = ((s.rem_euclid(p) + p - 1) % p) + 1;
                while m <= i as i64 {
                    in_union[m as usize] = true;
                    m += p;
                }
            }
        }
        for m in 1..=i as i64 {
            let noncoprime = primes
                .iter()
                .any(|&p| m.rem_euclid(p as i64) == 0 || (m - r).rem_euclid(p as i64) == 0);
            prop_assert_eq!(in_union[m as usize], noncoprime, "m = {}", m);
        }
    }

    #[test]
    fn folded_record_counts_complement(i in 1u64..5_000, n in 1usize..=6, r_half in -500i64..500) {
        let table = PrimeTable::build(100).unwrap();
        let rec = fold::folded_count(i, n, 2 * r_half, &table).unwrap();
        prop_assert_eq!(rec.coprime_count + rec.noncoprime_count, i);
        let primes = table.first_primes(n).unwrap();
        let brute = (1..=i as i64)
            .filter(|&m| {
                primes.iter().all(|&p| {
                    m.rem_euclid(p as i64) != 0 && (m - 2 * r_half).rem_euclid(p as i64) != 0
                })
            })
            .count() as u64;
        prop_assert_eq!(rec.coprime_count, brute);
    }

    #[test]
    fn fold_symmetry_when_p_divides_r(which in 0usize..4, mult in 1i64..50, i in 30u64..500) {
        // p | r collapses the two classes of p into one set.
        let pool = [2u64, 3, 5, 7];
        let p = pool[which];
        let r = if p == 2 { 2 * mult } else { p as i64 * mult * 2 };
        let collect = |s: i64| -> Vec<i64> {
            (1..=i as i64).filter(|m| (m - s).rem_euclid(p as i64) == 0).collect()
        };
        prop_assert_eq!(collect(0), collect(r));
    }

    #[test]
    fn find_shift_exists_and_counts_match(
        n in 1usize..=5,
        j_extra in 0u64..200,
        r_half in 1i64..300,
        mask in 0u32..32,
    ) {
        let table = PrimeTable::build(100).unwrap();
        let primes = table.first_primes(n).unwrap();
        let j = 2 * primes[n - 1] + j_extra;
        let mask = mask & ((1 << n) - 1);
        let sel = Selection::new(j, n, 2 * r_half, mask).unwrap();
        let shift = fold::find_shift(j, &sel, &table).unwrap();
        let modulus: u64 = primes.iter().product();
        prop_assert!(shift >= 1 && shift <= modulus);
    }

    #[test]
    fn bm_inequality_follows_divisor_containment(
        mask in 1usize..8,
        s_factor in 1i64..40,
    ) {
        // J = {2} u subset of {3,5,7}; t = 2, s = 2 * odd multiple chosen so
        // at least two elements divide s.
        let extra = prime_subset(mask, &[3u64, 5, 7]);
        let mut j = vec![2u64];
        j.extend(&extra);
        let s = 2 * extra[0] as i64 * s_factor;
        let divisors = j.iter().filter(|&&d| s % d as i64 == 0).count();
        prop_assume!(divisors >= 2);
        let report = identities::bm_check(&j, s, 2).unwrap();
        // {d : d ∤ s} ⊊ {d : d ∤ t} here, so the strict inequality holds.
        let ineq = &report.comparisons[2];
        prop_assert!(ineq.matches, "brute(s) = {} not above brute(t) = {}", ineq.brute, ineq.formula);
    }

    #[test]
    fn bn_formula_matches_brute_for_prime_sets(mask in 0usize..256, s_half in 0i64..3000) {
        let pool = [2u64, 3, 5, 7, 11, 13, 17, 19];
        let j = prime_subset(mask, &pool);
        prop_assume!(!j.is_empty());
        let report = identities::bn_check(&j, 2 * s_half).unwrap();
        prop_assert!(report.matches(), "J = {:?}, s = {}", j, 2 * s_half);
    }
}

#[test]
fn twin_correspondence_full_million() {
    // With p_n^2 >= i, the folded-coprime survivors above p_n + 2 are exactly
    // the upper twin members: composites below p_{n+1}^2 all have a factor in
    // P(n).
    let table = PrimeTable::build(1_000_000).unwrap();
    let i = 1_000_000u64;
    let n = 169; // p_169 = 1009, 1009^2 > 1e6
    let primes = table.first_primes(n).unwrap();
    let p_n = primes[n - 1];
    assert!(p_n * p_n >= i);

    let lo = (p_n + 2 + 1) as i64;
    let mut folded = vec![false; (i as i64 - lo + 1) as usize];
    for (idx, slot) in folded.iter_mut().enumerate() {
        let m = lo + idx as i64;
        *slot = primes
            .iter()
            .all(|&p| m.rem_euclid(p as i64) != 0 && (m - 2).rem_euclid(p as i64) != 0);
    }
    for (idx, &is_survivor) in folded.iter().enumerate() {
        let m = (lo + idx as i64) as u64;
        let is_twin_upper = table.is_prime(m) && table.is_prime(m - 2);
        assert_eq!(is_survivor, is_twin_upper, "m = {m}");
    }
}

#[test]
fn goldbach_correspondence_sampled() {
    let table = PrimeTable::build(2_000_000).unwrap();
    for z in [61u64, 5000, 72_001, 500_000, 999_999] {
        // n with p_n^2/2 < z < p_{n+1}^2/2.
        let sqrt_2z = ((2 * z) as f64).sqrt();
        let n = table.prime_count(sqrt_2z).unwrap() as usize;
        let primes = table.first_primes(n).unwrap();
        let p_n = primes[n - 1];
        let p_next = table.nth_prime(n as u64 + 1).unwrap();
        assert!(p_n * p_n < 2 * z && 2 * z < p_next * p_next, "window broken at z = {z}");

        for m in (p_n + 1)..=z {
            let coprime = primes.iter().all(|&p| {
                let p = p as i64;
                (m as i64).rem_euclid(p) != 0 && (2 * z - m) as i64 % p != 0
            });
            if coprime {
                assert!(table.is_prime(m), "survivor m = {m} not prime at z = {z}");
                assert!(table.is_prime(2 * z - m), "partner of m = {m} not prime at z = {z}");
            }
        }
    }
}

#[test]
fn mertens_product_converges_at_ten_million() {
    let table = PrimeTable::build(10_000_000).unwrap();
    let n = table.prime_count(10_000_000.0).unwrap() as usize;
    let products = bounds::euler_products(n, &table).unwrap();
    let p_n = table.nth_prime(n as u64).unwrap() as f64;
    let value = p_n.ln() * products.mertens;
    let target = (-bounds::EULER_MASCHERONI).exp();
    assert!((value - target).abs() < 1e-3, "log(p_n) * mertens = {value} vs e^-gamma = {target}");
}

#[test]
fn exact_rational_and_log_sum_mertens_agree() {
    let table = PrimeTable::build(1000).unwrap();
    for n in [1usize, 4, 25, 100] {
        let e = bounds::euler_products(n, &table).unwrap();
        let exact = e.mertens_exact.as_ref().unwrap().to_f64().unwrap();
        assert!((e.mertens - exact).abs() <= 1e-15 * exact, "n = {n}");
    }
}

#[test]
fn marking_matches_gcd_route_on_million_scale_windows() {
    let table = PrimeTable::build(100).unwrap();
    let pool = table.first_primes(10).unwrap();
    for (lo, hi, mask) in [(1i64, 1_000_000i64, 0b1010101011usize), (500_000, 999_999, 0b1111111111), (0, 123_456, 0b0000000111)] {
        let primes = prime_subset(mask, pool);
        let spec = IntervalSpec::new(lo, hi, primes.clone()).unwrap();
        assert_eq!(noncoprime_count(&spec).unwrap(), gcd_noncoprime(lo, hi, &primes), "[{lo},{hi}]");
    }
}

#[test]
fn prime_count_is_monotone_and_inverts_nth_prime() {
    let table = PrimeTable::build(100_000).unwrap();
    let mut last = 0;
    for x in (0..=100_000u64).step_by(997) {
        let c = table.prime_count(x as f64).unwrap();
        assert!(c >= last);
        last = c;
    }
    for n in [1u64, 2, 100, 1229, 9592] {
        let p = table.nth_prime(n).unwrap();
        assert_eq!(table.prime_count(p as f64).unwrap(), n);
        assert_eq!(table.prime_count(p as f64 - 0.5).unwrap(), n - 1);
    }
}
