//! Small numeric utilities: compensated summation, exact integer roots,
//! elementary multiplicative functions, and the process-wide memory budget.
//!
//! Everything here is exact or has a stated error bound; the heavier
//! machinery lives in the dedicated modules.

use crate::error::{Error, Result};

/// Environment variable that caps large allocations (bytes; `k`/`m`/`g`
/// binary suffixes accepted, e.g. `POLYPRIME_MAX_MEMORY=2g`).
pub const MEMORY_BUDGET_ENV: &str = "POLYPRIME_MAX_MEMORY";

/// Default allocation budget when the environment variable is unset: 4 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Pairwise (cascade) summation of a slice.
///
/// Error grows like O(log n · ε) instead of the O(n · ε) of a naive left
/// fold, which keeps 10^7-term sums comfortably inside the 10^-6 relative
/// budgets used throughout the crate. Below 32 terms a straight fold is
/// faster and accurate enough.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Largest `m ≥ 0` with `c · m^k ≤ bound`, or 0 if there is none
/// (in particular whenever `bound < c`).
///
/// This is the exact integer form of ⌊(bound/c)^(1/k)⌋ used for the
/// summation cutoffs: a floating-point root is taken as a first guess, then
/// corrected with checked integer arithmetic so the result is exact even
/// right at a perfect power.
pub fn scaled_kth_root(bound: i64, c: i64, k: u32) -> u64 {
    debug_assert!(c > 0 && k >= 1);
    if bound < c {
        return 0;
    }
    let guess = ((bound as f64) / (c as f64)).powf(1.0 / k as f64) as u64;
    let fits = |m: u64| -> bool {
        let Some(mk) = m.checked_pow(k) else { return false };
        match (c as u64).checked_mul(mk) {
            Some(v) => v <= bound as u64,
            None => false,
        }
    };
    // The f64 guess is within ±1 of the truth for all inputs we accept, but
    // walking a couple of extra steps costs nothing and removes the proof
    // obligation.
    let mut m = guess.saturating_sub(2);
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// Smallest power of two strictly greater than `n`.
pub fn next_pow2_above(n: u64) -> u64 {
    let mut l = 1u64;
    while l <= n {
        l <<= 1;
    }
    l
}

/// Greatest common divisor (binary-free Euclid; inputs need not be ordered).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// increasing prime order. Fine for the n ≤ 10^7 range this crate needs;
/// anything larger goes through a sieve instead.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function μ(n): 0 unless n is squarefree, otherwise (−1)^(#prime factors).
pub fn mobius(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut sign = 1i64;
    for (_, e) in factorize(n) {
        if e >= 2 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Euler totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Process-wide allocation budget in bytes.
///
/// Reads [`MEMORY_BUDGET_ENV`] on every call (cheap, and lets tests vary it);
/// unset or unparsable values fall back to [`DEFAULT_MEMORY_BUDGET`].
pub fn memory_budget() -> u64 {
    match std::env::var(MEMORY_BUDGET_ENV) {
        Ok(raw) => parse_byte_size(&raw).unwrap_or(DEFAULT_MEMORY_BUDGET),
        Err(_) => DEFAULT_MEMORY_BUDGET,
    }
}

/// Checks an allocation request against the budget.
pub fn check_budget(required_bytes: u64) -> Result<()> {
    let budget = memory_budget();
    if required_bytes > budget {
        return Err(Error::MemoryBudget { required_bytes, budget_bytes: budget });
    }
    Ok(())
}

fn parse_byte_size(raw: &str) -> Option<u64> {
    let s = raw.trim().to_ascii_lowercase();
    let (digits, shift) = match s.strip_suffix(['k', 'm', 'g']) {
        Some(rest) => {
            let shift = match s.as_bytes()[s.len() - 1] {
                b'k' => 10,
                b'm' => 20,
                _ => 30,
            };
            (rest.trim(), shift)
        }
        None => (s.as_str(), 0),
    };
    digits.parse::<u64>().ok().map(|v| v << shift)
}
