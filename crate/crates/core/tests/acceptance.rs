//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Library-level criteria live here (1-6, 8, 10); the scan, falsification
//! exit-code and byte-identity criteria (7, 9, 11) exercise the CLI binary
//! and live in the CLI crate's tests.

use std::time::Instant;

use foldsieve_core::bounds;
use foldsieve_core::fold::{self, Selection};
use foldsieve_core::identities;
use foldsieve_core::interval;
use foldsieve_core::sieve::PrimeTable;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("criterion {criterion}: {}: {detail}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_exact_identity_suite() {
    let start = Instant::now();
    let bn = identities::bn_sweep(200, 10_000_000, 0).unwrap();
    let cap = identities::cap_sweep(200, 10_000_000, 0).unwrap();
    let bn_ok = bn.iter().filter(|r| r.matches()).count();
    let cap_ok = cap.iter().filter(|r| r.matches()).count();
    let elapsed = start.elapsed();
    let pass = bn_ok == bn.len() && cap_ok == cap.len() && elapsed.as_secs() < 120;
    report(
        "01 exact-identity-suite",
        pass,
        &format!("bn {bn_ok}/{}, cap {cap_ok}/{}, {elapsed:.2?}", bn.len(), cap.len()),
    );
    for r in bn.iter().chain(&cap) {
        assert!(r.matches(), "mismatch on {:?} {}", r.lemma_id, r.params);
    }
    assert!(elapsed.as_secs() < 120, "identity sweeps took {elapsed:?}");
}

#[test]
fn criterion_02_paper_constant_reproduction() {
    let start = Instant::now();
    let table = PrimeTable::build(360_000).unwrap();
    let mut failures: Vec<String> = Vec::new();
    fn gate(failures: &mut Vec<String>, name: &str, value: f64, target: f64, tol: f64) {
        let ok = (value - target).abs() <= tol;
        println!("  gate {name}: value {value:.6}, target {target} ±{tol}: {}", if ok { "ok" } else { "OUT" });
        if !ok {
            failures.push(format!("{name}: {value:.6} vs {target} ±{tol}"));
        }
    }

    gate(&mut failures, "Hi(355991)", bounds::dusart_hi(355_991.0).unwrap(), 30_456.026, 1e-3);

    let pi = table.prime_count(355_991.0).unwrap();
    println!("  gate pi(355991): {pi}, target 30456 exact: {}", if pi == 30_456 { "ok" } else { "OUT" });
    if pi != 30_456 {
        failures.push(format!("pi(355991) = {pi}"));
    }
    let p1 = table.nth_prime(30_456).unwrap();
    let p2 = table.nth_prime(30_457).unwrap();
    if p1 != 355_969 || p2 != 356_023 {
        failures.push(format!("p_30456 = {p1}, p_30457 = {p2}"));
    }
    println!("  gate p_30456/p_30457: {p1}/{p2}, target 355969/356023");

    // The unique root of Hi(x) = Hi(355991) + 1 is 356003.7889; the printed
    // 356003.80 ±0.01 excludes it by 0.0011 (the source's own next iterate is
    // only consistent with .7889). Evaluated faithfully; see the ledger.
    let q1 = bounds::q_of(355_991.0).unwrap();
    gate(&mut failures, "q_355991", q1, 356_003.80, 1e-2);
    let q2 = bounds::q_of(q1).unwrap();
    gate(&mut failures, "q_next_iterate", q2, 356_016.58, 1e-2);

    let pmt = bounds::pmt_ratios(&table).unwrap();
    // The printed theta value carries the + log v(30457) term of the chain
    // denominator; the true Chebyshev theta is pinned in unit tests.
    gate(&mut failures, "theta-chain(p_30456)", pmt.chain_denominator, 355_685.674752, 1e-3);
    gate(&mut failures, "j(30457)", pmt.j_30457, 392_277.800878, 1e-3);
    gate(&mut failures, "j(30458)", pmt.j_30458, 392_291.764798, 1e-3);
    gate(&mut failures, "v(30457)", pmt.v_30457, 356_003.456, 1e-2);
    gate(&mut failures, "pmt-gap-ratio", pmt.gap_ratio, 1.084175, 5e-4);
    gate(&mut failures, "pmt-window-ratio", pmt.window_ratio, 1.102878, 5e-4);
    gate(&mut failures, "pmt-log-ratio", pmt.log_ratio, 1.007662, 1e-6);

    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed.as_secs() < 60;
    report(
        "02 paper-constant-reproduction",
        pass,
        &format!("{} of 13 gates clean, {elapsed:.2?}", 13 - failures.len()),
    );
    assert!(elapsed.as_secs() < 60, "constant reproduction took {elapsed:?}");
    assert!(
        failures.is_empty(),
        "constant gates out of tolerance (see ledger for the q_355991 analysis): {failures:?}"
    );
}

#[test]
fn criterion_03_theorem1_empirical_bound() {
    let start = Instant::now();
    let table = PrimeTable::build(1_600_000).unwrap();
    let rows = interval::ratio_scan(4, 200, &table).unwrap();
    assert_eq!(rows.len(), 197);
    let violations: Vec<_> = rows.iter().filter(|r| !r.bound_holds()).collect();
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed.as_secs() < 300;
    report(
        "03 theorem1-empirical-bound",
        pass,
        &format!("n in [4,200], {} violations, {elapsed:.2?}", violations.len()),
    );
    assert!(violations.is_empty(), "bound violations at n = {:?}", violations.iter().map(|r| r.n).collect::<Vec<_>>());
    assert!(elapsed.as_secs() < 300, "scan took {elapsed:?}");
}

#[test]
fn criterion_04_log2_over_4_study() {
    let table = PrimeTable::build(1_600_000).unwrap();
    let rows = interval::ratio_scan(150, 200, &table).unwrap();
    let mean = rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64;
    let target = 0.1733;
    let within = (mean - target).abs() <= 0.035;
    let status = if within { "match" } else { "paper claim unreproduced" };
    report("04 log2/4-study", true, &format!("mean D/n² over [150,200] = {mean:.6}, status: {status}"));
    // The study is deterministic; the mean sits inside the band.
    assert!((mean - 0.152805).abs() < 1e-6, "study mean drifted: {mean}");
    assert!(within, "soft gate outside tolerance: {mean}");
}

#[test]
fn criterion_05_folded_scale_exactness() {
    let start = Instant::now();
    let table = PrimeTable::build(100).unwrap();

    // Union identity, exhaustive over all 2^n selections.
    let mut union_configs = 0;
    for &i in &[100u64, 1_000, 10_000] {
        for n in 1..=6usize {
            let primes = table.first_primes(n).unwrap();
            for r in [2i64, 2 * i as i64, i as i64] {
                assert_eq!(r % 2, 0);
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
                    assert_eq!(in_union[m as usize], noncoprime, "i={i} n={n} r={r} m={m}");
                }
                union_configs += 1;
            }
        }
    }

    // Shift existence with the count identity, all selections, n <= 5, j <= 500.
    let mut shifts = 0u64;
    for n in 1..=5usize {
        let p_n = table.first_primes(n).unwrap()[n - 1];
        for j in (2 * p_n)..=500 {
            for r in [2i64, 2 * j as i64] {
                for mask in 0..(1u32 << n) {
                    let sel = Selection::new(j, n, r, mask).unwrap();
                    let shift = fold::find_shift(j, &sel, &table)
                        .unwrap_or_else(|e| panic!("n={n} j={j} r={r} mask={mask}: {e}"));
                    assert!(shift >= 1);
                    shifts += 1;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    let pass = elapsed.as_secs() < 180;
    report(
        "05 folded-scale-exactness",
        pass,
        &format!("{union_configs} union configs, {shifts} shifts verified, {elapsed:.2?}"),
    );
    assert!(elapsed.as_secs() < 180, "folded-scale suite took {elapsed:?}");
}

#[test]
fn criterion_06_pair_correspondence_oracle() {
    let start = Instant::now();
    let limit = 1_000_000u64;
    let table = PrimeTable::build(limit).unwrap();

    // Independent oracle: one-shot boolean sieve, no segmentation, no
    // bit-packing, nothing shared with PrimeTable's code path.
    let mut oracle = vec![true; (limit + 1) as usize];
    oracle[0] = false;
    oracle[1] = false;
    let mut d = 2u64;
    while d * d <= limit {
        if oracle[d as usize] {
            let mut q = d * d;
            while q <= limit {
                oracle[q as usize] = false;
                q += d;
            }
        }
        d += 1;
    }
    let oracle_primes: Vec<u64> = (2..=limit).filter(|&m| oracle[m as usize]).collect();

    let twin = fold::twin_pair_count(limit, &table).unwrap();
    let twin_oracle =
        oracle_primes.iter().filter(|&&p| p >= 5 && oracle[(p - 2) as usize]).count() as u64;
    assert_eq!(twin, twin_oracle);
    assert_eq!(twin, 8_169); // frozen from an independent run

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    for _ in 0..1_000 {
        let t = 2 * rng.random_range(2..=limit / 2);
        let mine = fold::goldbach_representations(t, &table).unwrap();
        let end = oracle_primes.partition_point(|&p| p <= t / 2);
        let reference =
            oracle_primes[..end].iter().filter(|&&p| oracle[(t - p) as usize]).count() as u64;
        assert_eq!(mine, reference, "target {t}");
        checked += 1;
    }

    let elapsed = start.elapsed();
    let pass = elapsed.as_secs() < 120;
    report(
        "06 pair-correspondence-oracle",
        pass,
        &format!("twin({limit}) = {twin} exact, {checked} Goldbach targets exact, {elapsed:.2?}"),
    );
    assert!(elapsed.as_secs() < 120, "oracle comparison took {elapsed:?}");
}

#[test]
fn criterion_08_nicolas_sweep() {
    let start = Instant::now();
    let table = PrimeTable::build(50_000).unwrap();
    let sweep = bounds::nicolas_sweep(2, 5_000, &table).unwrap();
    let e_gamma = bounds::exp_gamma();
    let below: Vec<_> = sweep.iter().filter(|(_, v)| *v <= e_gamma).collect();
    let elapsed = start.elapsed();
    let pass = below.is_empty() && elapsed.as_secs() < 60;
    report(
        "08 nicolas-sweep",
        pass,
        &format!("{} ratios all above e^γ = {e_gamma:.6}, {elapsed:.2?}", sweep.len()),
    );
    assert!(below.is_empty(), "ratio at or below e^gamma for k = {:?}", below.iter().map(|(k, _)| k).collect::<Vec<_>>());
    assert!(elapsed.as_secs() < 60);
}

#[test]
fn criterion_10_theorem4_constant() {
    let start = Instant::now();
    let table = PrimeTable::build(360_000).unwrap();
    let a = bounds::theorem4_constant(&table).unwrap();
    let b = bounds::theorem4_constant(&table).unwrap();
    // Deterministic to the bit.
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.v_30457.to_bits(), b.v_30457.to_bits());
    assert!(a.rel_deviation.is_finite());

    // The literal substitution chain gives u ≈ 2.855, so the product is
    // negative; pinned against a 40-digit independent evaluation. The
    // printed 56,611,211.95 is not reproduced: documented mismatch.
    assert!((a.value - -760_030_464.32).abs() < 1.0, "value drifted: {}", a.value);
    assert!(!a.matches);
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs() < 120;
    report(
        "10 theorem4-constant",
        pass,
        &format!(
            "value {:.2}, reference {:.2}, rel deviation {:.4}, status {} (report-only), {elapsed:.2?}",
            a.value,
            a.reference,
            a.rel_deviation,
            if a.matches { "match" } else { "mismatch" }
        ),
    );
    assert!(elapsed.as_secs() < 120);
}
