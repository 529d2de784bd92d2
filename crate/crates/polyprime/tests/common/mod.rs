//! Brute-force oracles for the integration suites.
//!
//! Everything here is an independent reimplementation of some layer of the
//! crate, written for obviousness rather than speed: trial division instead
//! of a sieve, literal double loops instead of transforms, upward scans
//! instead of integer root extraction. The suites compare the fast paths
//! against these.
//!
//! Compiled once per test target, and no single target uses every helper.
#![allow(dead_code)]

use polyprime::counting::LinearForm;
use polyprime::IntPolynomial;

/// Primality by trial division.
pub fn is_prime_naive(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `[2, n]`, ascending.
pub fn primes_naive(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime_naive(m)).collect()
}

/// Von Mangoldt weight by explicit factoring: `ln p` when `n` is a power of
/// the single prime `p`, zero otherwise.
pub fn lambda_naive(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            // Divisible by p: a prime power iff nothing else remains.
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln() // n prime
}

/// Values `f(d)` for `d = 1, 2, 3, ...` that land in `[lo, hi]`, sorted and
/// deduplicated. Assumes `f` is nondecreasing on positive arguments (true
/// for every corpus polynomial), so the scan stops at the first value above
/// `hi`.
pub fn image_values_naive(f: &IntPolynomial, lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 1i64;
    loop {
        let v = f.evaluate(d).expect("oracle arguments stay in range");
        if v > hi {
            break;
        }
        if v >= lo {
            out.push(v);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `(value, multiplicity)` pairs for `f(d)`, `d = 1..=m`, sorted by value.
/// Multiplicity counts arguments, so non-injective polynomials repeat.
pub fn image_multiset_naive(f: &IntPolynomial, m: u64) -> Vec<(i64, u64)> {
    let mut values: Vec<i64> =
        (1..=m as i64).map(|d| f.evaluate(d).expect("oracle arguments stay in range")).collect();
    values.sort_unstable();
    let mut out: Vec<(i64, u64)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Largest `m` with `lead * m^degree <= bound`, found by upward scan from 0.
pub fn cutoff_naive(f: &IntPolynomial, bound: i64) -> u64 {
    let lead = f.leading_coefficient() as i128;
    let k = f.degree();
    let mut m = 0i128;
    while lead * (m + 1).pow(k) <= bound as i128 {
        m += 1;
    }
    m as u64
}

/// Extreme values `a1*p1 + a2*p2` can take with `p1, p2` in `[2, n]`.
fn form_window(form: LinearForm, n: u64) -> (i64, i64) {
    let (a1, a2, n) = (form.a1(), form.a2(), n as i64);
    if a2 > 0 {
        (a1 * 2 + a2 * 2, a1 * n + a2 * n)
    } else {
        (a1 * 2 + a2 * n, a1 * n + a2 * 2)
    }
}

/// `(n, lambda(n))` for the `n <= limit` with nonzero weight, ascending.
pub fn lambda_support_naive(limit: u64) -> Vec<(u64, f64)> {
    (2..=limit).map(|v| (v, lambda_naive(v))).filter(|&(_, w)| w > 0.0).collect()
}

/// Ordered pairs of primes `p1, p2 <= n` with `a1*p1 + a2*p2` in the image
/// of `f`, by double loop and binary search over the image values.
pub fn count_pairs_oracle(f: &IntPolynomial, form: LinearForm, n: u64) -> u64 {
    count_pairs_oracle_with(&primes_naive(n), f, form, n)
}

/// [`count_pairs_oracle`] with the prime list precomputed (the suites reuse
/// one list across many polynomial/form combinations).
pub fn count_pairs_oracle_with(
    primes: &[u64],
    f: &IntPolynomial,
    form: LinearForm,
    n: u64,
) -> u64 {
    let (lo, hi) = form_window(form, n);
    let targets = image_values_naive(f, lo, hi);
    let (a1, a2) = (form.a1(), form.a2());
    let mut count = 0;
    for &p1 in primes {
        for &p2 in primes {
            let s = a1 * p1 as i64 + a2 * p2 as i64;
            if targets.binary_search(&s).is_ok() {
                count += 1;
            }
        }
    }
    count
}

/// Von Mangoldt weighted count `sum over d <= M of sum over n1, n2 <= N with
/// a1*n1 + a2*n2 = f(d) of lambda(n1) * lambda(n2)` — repeated values pick up
/// their argument multiplicity. `M` is the largest cutoff with
/// `lead * M^degree <= reach * N`.
pub fn weighted_count_oracle(f: &IntPolynomial, form: LinearForm, n: u64) -> f64 {
    weighted_count_oracle_with(&lambda_support_naive(n), f, form, n)
}

/// [`weighted_count_oracle`] with the weight support precomputed.
pub fn weighted_count_oracle_with(
    support: &[(u64, f64)],
    f: &IntPolynomial,
    form: LinearForm,
    n: u64,
) -> f64 {
    let m = cutoff_naive(f, form.reach() * n as i64);
    let targets = image_multiset_naive(f, m);
    let (a1, a2) = (form.a1(), form.a2());
    let mut total = 0.0;
    for &(n1, w1) in support {
        for &(n2, w2) in support {
            let s = a1 * n1 as i64 + a2 * n2 as i64;
            if let Ok(i) = targets.binary_search_by_key(&s, |&(v, _)| v) {
                total += w1 * w2 * targets[i].1 as f64;
            }
        }
    }
    total
}

/// Relative gap with a max-denominator convention; zero when both sides are
/// exactly zero.
pub fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
