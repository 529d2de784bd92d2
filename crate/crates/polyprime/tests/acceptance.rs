//! Release gate: one test per acceptance criterion, each printing a single
//! `acceptance cN <label>: PASS|FAIL` line (run with `--nocapture` to see
//! them on success). Failures carry the offending cases in the panic
//! message. The numbered checks cover, in order: the exact exponential-sum
//! identities, bit-exact series collapses, oracle equivalence of every
//! counting path, the transform-domain counting identity, the residue-bias
//! distribution, the convergence trend of counts toward their main terms,
//! agreement of the two singular-series routes, and intersectivity
//! classification. (c9, byte-level CLI determinism, lives with the CLI.)

mod common;

use std::time::Instant;

use polyprime::asymptotics::{
    euler_factor, gauss_sum, series_term, singular_series, singular_series_qsum,
};
use polyprime::counting::{
    count_pairs_exact_with, count_pairs_linear_form_with, weighted_count_linear_form_with,
    weighted_count_with, FastPath, LinearForm,
};
use polyprime::diagnostics::{empirical_difference_distribution_with, verify_orthogonality};
use polyprime::numeric::mobius;
use polyprime::polynomial::IntersectiveCheck;
use polyprime::{Complex64, IntPolynomial, LambdaWeights, PrimeTable};

fn poly(s: &str) -> IntPolynomial {
    s.parse().expect("corpus polynomial")
}

fn corpus() -> Vec<IntPolynomial> {
    ["x^2", "x^2 + 1", "x^2 - 1", "2x^2", "2x + 1", "2x^3 + x", "x^3 - x"]
        .iter()
        .map(|s| poly(s))
        .collect()
}

fn forms() -> Vec<LinearForm> {
    [(1, -1), (1, 1), (2, -1), (1, -3), (2, 2)]
        .iter()
        .map(|&(a1, a2)| LinearForm::new(a1, a2).expect("corpus form"))
        .collect()
}

/// Prints the criterion's verdict line and panics with the collected
/// failure details if anything went wrong.
fn verdict(label: &str, failures: Vec<String>) {
    let pass = failures.is_empty();
    println!("acceptance {label}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "acceptance {label} failures:\n{}", failures.join("\n"));
}

#[test]
fn c1_identity_suite() {
    let mut failures = Vec::new();
    let corpus = corpus();

    // (a) Complete exponential sums over all nonzero numerators recover
    // p * (root count - 1), for every prime p <= 500. Budget: 10 s.
    let started = Instant::now();
    let small_primes = common::primes_naive(500);
    for f in &corpus {
        for &p in &small_primes {
            let z = f.root_count_mod(p).unwrap() as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            for a in 1..p {
                sum += gauss_sum(f, a, p).unwrap();
            }
            let err = (sum - Complex64::new(p as f64 * (z - 1.0), 0.0)).norm();
            if err >= 1e-6 {
                failures.push(format!("root identity: f={f} p={p} err={err:.3e}"));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 10.0 {
        failures.push(format!("root identity sweep took {elapsed:.1}s, budget 10s"));
    }

    // (b) The local factor is multiplicative across coprime squarefree
    // moduli up to 100.
    for f in &corpus {
        let mut local = vec![f64::NAN; 101];
        for q in
            (1..=100u64).filter(|&q| mobius(q) != 0)
        {
            local[q as usize] = series_term(f, q).unwrap();
        }
        for q1 in (2..=100u64).filter(|&q| mobius(q) != 0) {
            for q2 in ((q1 + 1)..=100).filter(|&q| mobius(q) != 0) {
                if polyprime::numeric::gcd(q1, q2) != 1 {
                    continue;
                }
                let joint = series_term(f, q1 * q2).unwrap();
                let err = (joint - local[q1 as usize] * local[q2 as usize]).abs();
                if err >= 1e-9 {
                    failures.push(format!(
                        "multiplicativity: f={f} q1={q1} q2={q2} err={err:.3e}"
                    ));
                }
            }
        }
    }

    // (c) Per-prime consistency: 1 + F(p) is exactly the Euler factor.
    for f in &corpus {
        for &p in &common::primes_naive(1000) {
            let err = (1.0 + series_term(f, p).unwrap() - euler_factor(f, p).unwrap()).abs();
            if err >= 1e-9 {
                failures.push(format!("euler consistency: f={f} p={p} err={err:.3e}"));
            }
        }
    }

    verdict("c1 identity-suite", failures);
}

#[test]
fn c2_collapse_values() {
    let mut failures = Vec::new();
    // Pure powers, a doubled square, and an odd-values-only line: the
    // product must hit 1, 2, and 0 exactly — no tolerance.
    for (text, expected) in
        [("x^2", 1.0), ("x^3", 1.0), ("2x^2", 2.0), ("2x + 1", 0.0)]
    {
        let got = singular_series(&poly(text), 10_000).unwrap();
        if got.value != expected {
            failures.push(format!(
                "series({text}) = {} but must be exactly {expected}",
                got.value
            ));
        }
        if text == "2x + 1" && got.tail_bound != 0.0 {
            failures.push(format!(
                "collapsed series tail bound {} must be exactly 0",
                got.tail_bound
            ));
        }
    }
    verdict("c2 collapse-values", failures);
}

#[test]
fn c3_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let corpus = corpus();
    let forms = forms();

    for &n in &[10u64, 100, 1000, 10_000] {
        let table = PrimeTable::build(n).unwrap();
        let weights = LambdaWeights::build(&table).unwrap();
        let primes = common::primes_naive(n);
        let support = common::lambda_support_naive(n);

        for f in &corpus {
            let expected_diff = common::count_pairs_oracle_with(&primes, f, LinearForm::DIFFERENCE, n);
            let exact = count_pairs_exact_with(f, &table, FastPath::Spectral).unwrap();
            if exact != expected_diff {
                failures.push(format!(
                    "count_pairs_exact: f={f} N={n} got {exact} oracle {expected_diff}"
                ));
            }

            for &form in &forms {
                let expected = common::count_pairs_oracle_with(&primes, f, form, n);
                for path in [FastPath::Spectral, FastPath::Direct] {
                    let got = count_pairs_linear_form_with(f, form, &table, path).unwrap();
                    if got != expected {
                        failures.push(format!(
                            "count_pairs_linear_form: f={f} form={form} N={n} \
                             path={path:?} got {got} oracle {expected}"
                        ));
                    }
                }

                let expected_w = common::weighted_count_oracle_with(&support, f, form, n);
                let got_w =
                    weighted_count_linear_form_with(f, form, &weights, FastPath::Spectral)
                        .unwrap();
                let gap = common::rel_gap(got_w, expected_w);
                if gap >= 1e-6 {
                    failures.push(format!(
                        "weighted_count: f={f} form={form} N={n} got {got_w} \
                         oracle {expected_w} rel_gap={gap:.3e}"
                    ));
                }
            }
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        failures.push(format!("oracle sweep took {elapsed:.1}s, budget 60s"));
    }
    verdict("c3 oracle-equivalence", failures);
}

#[test]
fn c4_orthogonality() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for f in &corpus() {
        for n in [100u64, 500, 2000] {
            let report = verify_orthogonality(f, n).unwrap();
            if report.relative_error >= 1e-8 {
                failures.push(format!(
                    "f={f} N={n} relative_error={:.3e} (lhs={} rhs={})",
                    report.relative_error, report.lhs, report.rhs
                ));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        failures.push(format!("orthogonality sweep took {elapsed:.1}s, budget 60s"));
    }
    verdict("c4 orthogonality", failures);
}

#[test]
fn c5_bias_distribution() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // A difference of two primes <= 10^6 avoids each residue class mod p in
    // a predictable way: residue 0 carries weight 1/(p-1), every other
    // class (p-2)/(p-1)^2. The empirical distribution must sit within 1%
    // absolute of that at p in {3, 5, 7, 11}.
    let table = PrimeTable::build(1_000_000).unwrap();
    for p in [3u64, 5, 7, 11] {
        let dist = empirical_difference_distribution_with(&table, p).unwrap();
        let pf = p as f64;
        for (t, &observed) in dist.iter().enumerate() {
            let predicted =
                if t == 0 { 1.0 / (pf - 1.0) } else { (pf - 2.0) / ((pf - 1.0) * (pf - 1.0)) };
            let err = (observed - predicted).abs();
            if err >= 0.01 {
                failures.push(format!(
                    "p={p} residue={t} observed={observed:.6} predicted={predicted:.6} \
                     err={err:.3e}"
                ));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        failures.push(format!("distribution check took {elapsed:.1}s, budget 30s"));
    }
    verdict("c5 bias-distribution", failures);
}

#[test]
fn c6_convergence_trend() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // The weighted count over its main term must be within 20% of 1 at
    // N=10^7 and strictly closer to 1 than it was at N=10^5. The error
    // term's decay is glacial (log-speed), so the monotone-improvement
    // clause is the substantive part.
    for text in ["x^2", "x^2 + 1"] {
        let f = poly(text);
        let series = singular_series(&f, 100_000).unwrap().value;
        let mut gaps = Vec::new();
        for n in [100_000u64, 10_000_000] {
            let table = PrimeTable::build(n).unwrap();
            let weights = LambdaWeights::build(&table).unwrap();
            let weighted = weighted_count_with(&f, &weights, FastPath::Auto).unwrap();
            let main = polyprime::asymptotics::main_term_weighted(
                &f,
                LinearForm::DIFFERENCE,
                n,
                series,
            );
            let ratio = weighted / main;
            gaps.push((n, (ratio - 1.0).abs()));
        }
        let (_, gap_small) = gaps[0];
        let (_, gap_large) = gaps[1];
        if gap_large >= 0.2 {
            failures.push(format!(
                "f={text}: |ratio-1| = {gap_large:.4} at N=1e7 exceeds the 0.2 band"
            ));
        }
        if gap_large >= gap_small {
            failures.push(format!(
                "f={text}: |ratio-1| grew from {gap_small:.4} (N=1e5) to {gap_large:.4} (N=1e7)"
            ));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 600.0 {
        failures.push(format!("trend check took {elapsed:.1}s, budget 600s"));
    }
    verdict("c6 convergence-trend", failures);
}

#[test]
fn c7_qsum_crosscheck() {
    let mut failures = Vec::new();
    // Two independent routes to the same constant: the Euler product over
    // primes to 10^5 and the modulus sum to 10^4. Convergence of the sum is
    // slow, hence the loose 0.02 window.
    for f in &corpus() {
        let euler = singular_series(f, 100_000).unwrap().value;
        let qsum = singular_series_qsum(f, 10_000).unwrap();
        let gap = (euler - qsum).abs();
        if gap >= 0.02 {
            failures.push(format!("f={f}: euler={euler:.6} qsum={qsum:.6} gap={gap:.4}"));
        }
    }
    verdict("c7 qsum-crosscheck", failures);
}

#[test]
fn c8_intersective_classification() {
    let mut failures = Vec::new();
    let cases = [
        ("x^2 - x", IntersectiveCheck::RootsEverywhere),
        ("x^2 + 1", IntersectiveCheck::Witness(3)),
        ("2x + 1", IntersectiveCheck::Witness(2)),
    ];
    for (text, expected) in cases {
        let got = poly(text).is_intersective_up_to(1000).unwrap();
        if got != expected {
            failures.push(format!("f={text}: got {got:?} expected {expected:?}"));
        }
    }
    verdict("c8 intersective-classification", failures);
}
