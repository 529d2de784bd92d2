//! Predicted main terms: singular series, local bias factors, and the
//! geometric correction for general linear forms.
//!
//! The predicted number of prime pairs `(p1, p2)` with `a1·p1 + a2·p2`
//! in the value set of a degree-`k` polynomial `f` factors as
//!
//! ```text
//! 𝔖 · C_k(a1, a2) · c_k^(−1/k) · k/(k+1) · N^((k+1)/k)        (log-weighted)
//! ```
//!
//! divided by `log² N` for the raw count. The pieces:
//!
//! * `𝔖` — the *singular series*, an Euler product over primes whose factor
//!   at `p` measures how far the residues of `f` mod `p` help or hinder
//!   prime differences landing on them. It also equals a sum over moduli
//!   `q` of averaged complete exponential sums (`Σ_q F(q)`); both routes are
//!   implemented and cross-checked, since they fail independently.
//! * `C_k(a1, a2)` — a piecewise-algebraic volume factor that accounts for
//!   how much of the `(p1, p2)` box the form can actually reach; `1` for
//!   the plain difference `p1 − p2`.
//! * The rest is calculus on the leading term `c_k·x^k`.
//!
//! Exactness policy: `F(q)` is a rational number, and the default
//! [`series_term`] computes it in integer arithmetic (polynomial residue
//! histogram × Ramanujan sums), so collapse cases come out *bit-exact*
//! (e.g. the series for `x^k` is exactly 1.0). The literal route through
//! complex Gauss sums exists as an independent witness and for the
//! verification battery.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::counting::LinearForm;
use crate::error::{Error, Result};
use crate::numeric::{euler_phi, factorize, gcd, mobius, pairwise_sum};
use crate::polynomial::IntPolynomial;
use crate::sieve::PrimeTable;

/// Default Euler-product truncation: all primes up to 10^5. The recorded
/// tail bound at this depth is ≤ (k−1)·1.00002e−5, far below every
/// comparison tolerance in the crate.
pub const DEFAULT_TRUNCATION_PRIME: u64 = 100_000;

/// Default modulus-sum truncation for the cross-check route. Convergence
/// is slow (the terms only decay like a fractional power), so this route is
/// a consistency witness, never the production value.
pub const DEFAULT_TRUNCATION_MODULUS: u64 = 10_000;

/// Absolute tolerance on the imaginary part of `F(q)` computed via complex
/// Gauss sums. The true value is real (terms pair into conjugates), so
/// anything above this is a bug, not noise.
pub const SERIES_TERM_IMAG_TOL: f64 = 1e-9;

/// Complete exponential sum `S_{a/q} = Σ_{r=0}^{q−1} e^{2πi·f(r)·a/q}`.
///
/// Phases are exact rationals: `f(r)` is reduced mod `q` in integer
/// arithmetic and only then mapped to the unit circle, so there is no
/// precision loss from large polynomial values. Requires `0 ≤ a < q`.
pub fn gauss_sum(f: &IntPolynomial, a: u64, q: u64) -> Result<Complex64> {
    if a >= q {
        return Err(Error::InvalidArgument(format!(
            "gauss_sum requires 0 ≤ a < q, got a = {a}, q = {q}"
        )));
    }
    if q == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let hist = f.residue_histogram_mod(q)?;
    let roots = unit_roots(q);
    Ok(gauss_sum_from_histogram(&hist, a, q, &roots))
}

/// `e^{2πi·j/q}` for `j = 0..q−1`.
fn unit_roots(q: u64) -> Vec<Complex64> {
    let step = std::f64::consts::TAU / q as f64;
    (0..q).map(|j| Complex64::from_polar(1.0, step * j as f64)).collect()
}

fn gauss_sum_from_histogram(hist: &[u64], a: u64, q: u64, roots: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, &count) in hist.iter().enumerate() {
        if count != 0 {
            acc += roots[(t as u64 * a % q) as usize] * count as f64;
        }
    }
    acc
}

/// `F(q)`: the coefficient of modulus `q` in the singular series,
///
/// ```text
/// F(q) = μ(q)²/(q·φ(q)²) · Σ_{0 ≤ a < q, gcd(a,q)=1} S_{a/q}
/// ```
///
/// computed exactly: the coprime-`a` average of `S_{a/q}` collapses to
/// `Σ_t hist[t] · c_q(t)` with `c_q` the Ramanujan sum
/// `c_q(t) = μ(q/g)·φ(q)/φ(q/g)`, `g = gcd(t, q)` — all integers, no
/// complex arithmetic. Vanishes for non-squarefree `q`.
pub fn series_term(f: &IntPolynomial, q: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus q must be positive".into()));
    }
    if q == 1 {
        return Ok(1.0);
    }
    if mobius(q) == 0 {
        return Ok(0.0);
    }
    let phi = euler_phi(q);
    let hist = f.residue_histogram_mod(q)?;

    // c_q(t) depends on t only through g = gcd(t, q); precompute the value
    // for each divisor class.
    let mut acc: i128 = 0;
    for (t, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let g = gcd(t as u64, q);
        let d = q / g; // squarefree since q is
        let cq = mobius(d) * (phi / euler_phi(d)) as i64;
        acc += count as i128 * cq as i128;
    }
    Ok(acc as f64 / (q as u128 * phi as u128 * phi as u128) as f64)
}

/// `F(q)` the long way: literal complex Gauss sums averaged over coprime
/// numerators. Exists as an independent witness for [`series_term`]; the
/// imaginary part must vanish to [`SERIES_TERM_IMAG_TOL`] or this errors.
///
/// Cost is O(q·φ(q)), so keep `q` in the thousands.
pub fn series_term_from_gauss_sums(f: &IntPolynomial, q: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus q must be positive".into()));
    }
    if q == 1 {
        return Ok(1.0);
    }
    if mobius(q) == 0 {
        return Ok(0.0);
    }
    let phi = euler_phi(q);
    let hist = f.residue_histogram_mod(q)?;
    let roots = unit_roots(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..q {
        if gcd(a, q) == 1 {
            acc += gauss_sum_from_histogram(&hist, a, q, &roots);
        }
    }
    let scaled = acc / (q as f64 * phi as f64 * phi as f64);
    if scaled.im.abs() >= SERIES_TERM_IMAG_TOL {
        return Err(Error::Accuracy {
            context: "imaginary residue of a series term that must be real",
            achieved: scaled.im.abs(),
            required: SERIES_TERM_IMAG_TOL,
        });
    }
    Ok(scaled.re)
}

fn require_prime(p: u64) -> Result<()> {
    let is_prime = p >= 2 && factorize(p).len() == 1 && factorize(p)[0].1 == 1;
    if !is_prime {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// Euler factor of the singular series at a prime `p`:
/// `1 + (z_f(p) − 1)/(p − 1)²`, where `z_f(p)` counts roots of `f` mod `p`.
///
/// Exactly 1 when `f` has the average single root (e.g. pure powers `x^k`),
/// exactly 0 when `f` misses 0 entirely mod 2 — that single factor kills
/// the whole product, reflecting a parity obstruction.
pub fn euler_factor(f: &IntPolynomial, p: u64) -> Result<f64> {
    require_prime(p)?;
    let z = f.root_count_mod(p)? as f64;
    let pm1 = (p - 1) as f64;
    Ok(1.0 + (z - 1.0) / (pm1 * pm1))
}

/// Local bias of prime differences at `p`: how over- or under-represented
/// the residue set of `f` mod `p` is among differences of primes, relative
/// to uniform. Numerically identical to [`euler_factor`] — the heuristic
/// derivation and the exponential-sum derivation land on the same local
/// factor — but kept as its own named operation so the empirical-bias
/// checks read naturally.
pub fn bias_factor(f: &IntPolynomial, p: u64) -> Result<f64> {
    euler_factor(f, p)
}

/// A truncated Euler product with its certificate: the factors that were
/// multiplied, and a bound on how much the infinite tail can still move
/// the value (as a relative factor).
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSeriesResult {
    /// Product of `factors`.
    pub value: f64,
    /// Largest prime included.
    pub truncation_prime: u64,
    /// Relative tail bound: the untruncated value lies within
    /// `value · (1 ± tail_bound)`. Exactly 0 when the product collapsed to
    /// an exact zero (a zero factor is a certificate, not an estimate).
    pub tail_bound: f64,
    /// `(p, factor at p)` for every prime used, in increasing order.
    /// Truncated at the first zero factor.
    pub factors: Vec<(u64, f64)>,
}

impl SingularSeriesResult {
    fn from_factors(mut factors: Vec<(u64, f64)>, truncation_prime: u64, degree: u32) -> Self {
        let mut value = 1.0f64;
        let mut collapsed = false;
        for (i, &(_, fac)) in factors.iter().enumerate() {
            value *= fac;
            if fac == 0.0 {
                collapsed = true;
                factors.truncate(i + 1);
                break;
            }
        }
        let tail_bound = if collapsed {
            0.0
        } else {
            // |log factor| ≤ max(k−1,1)/(p−1)² beyond the truncation, so the
            // tail multiplies the value by at most exp(Σ …) ≤ exp(max(k−1,1)/(P−1)).
            let numer = degree.saturating_sub(1).max(1) as f64;
            (numer / (truncation_prime - 1) as f64).exp_m1()
        };
        Self { value: if collapsed { 0.0 } else { value }, truncation_prime, tail_bound, factors }
    }
}

/// Singular series `𝔖(f)` as an Euler product over primes ≤ `trunc_p`.
///
/// Stops multiplying at the first exactly-zero factor (the value is then
/// exactly 0 — no tail can resurrect a dead product). Factor evaluation
/// fans out across threads; the recorded order and the product are
/// deterministic regardless of thread count.
pub fn singular_series(f: &IntPolynomial, trunc_p: u64) -> Result<SingularSeriesResult> {
    generalized_singular_series(f, LinearForm::DIFFERENCE, trunc_p)
}

/// The modulus-sum route to `𝔖(f)`: `Σ_{q ≤ trunc_q} F(q)`.
///
/// Converges slowly; useful only as an independent cross-check of
/// [`singular_series`]. Summation is pairwise for reproducibility.
pub fn singular_series_qsum(f: &IntPolynomial, trunc_q: u64) -> Result<f64> {
    if trunc_q < 1 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let terms = (1..=trunc_q)
        .into_par_iter()
        .map(|q| series_term(f, q))
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// The piecewise volume factor `C_k(a1, a2)` for the form `a1·p1 + a2·p2`.
///
/// With `s = a1 + a2` and `k`-th roots written `v^(1/k)`:
///
/// * `a2 > 0`:        `(s^(1/k) − a1^(1/k))/a2 + (s^(1/k) − a2^(1/k))/a1`
/// * `−a1 ≤ a2 < 0`:  `(s^(1/k) − a1^(1/k))/a2 + s^(1/k)/a1`
/// * `a2 ≤ −a1`:      `−a1^(1/k)/a2`
///
/// The two sides of the `a2 = −a1` seam agree (the middle branch's first
/// term has a removable pole), and the plain difference gives exactly 1.
pub fn c_factor(k: u32, form: LinearForm) -> f64 {
    debug_assert!(k >= 1);
    let a1 = form.a1() as f64;
    let a2 = form.a2() as f64;
    let s = a1 + a2;
    if form.a2() > 0 {
        ((root_k(s, k) - root_k(a1, k)) / a2) + ((root_k(s, k) - root_k(a2, k)) / a1)
    } else if form.a2() > -form.a1() {
        ((root_k(s, k) - root_k(a1, k)) / a2) + root_k(s, k) / a1
    } else {
        -root_k(a1, k) / a2
    }
}

/// `v^(1/k)` for nonnegative `v`, routed through `sqrt`/`cbrt` where those
/// are exact-ish, `powf` otherwise.
fn root_k(v: f64, k: u32) -> f64 {
    debug_assert!(v >= 0.0);
    match k {
        1 => v,
        2 => v.sqrt(),
        3 => v.cbrt(),
        _ => v.powf(1.0 / k as f64),
    }
}

/// How a prime relates to the coefficients of a linear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeClass {
    /// `p` divides neither `a1` nor `a2`.
    P0,
    /// `p` divides exactly one of them.
    P1,
    /// `p` divides both.
    P2,
}

/// Classifies `p` against the form's coefficients. The three classes
/// partition the primes, and each gets its own local factor in
/// [`bias_factor_linear_form`].
pub fn partition_prime(form: LinearForm, p: u64) -> Result<PrimeClass> {
    require_prime(p)?;
    let d1 = form.a1().unsigned_abs() % p == 0;
    let d2 = form.a2().unsigned_abs() % p == 0;
    Ok(match (d1, d2) {
        (true, true) => PrimeClass::P2,
        (false, false) => PrimeClass::P0,
        _ => PrimeClass::P1,
    })
}

/// Local factor at `p` for the form `a1·p1 + a2·p2`, by prime class:
///
/// * `P0`: the plain [`euler_factor`] `1 + (z−1)/(p−1)²`;
/// * `P1`: `(p − z)/(p − 1)` — one slot of the form is frozen mod `p`, so
///   only the root-avoiding residues of the other slot matter;
/// * `P2`: `z` itself — the form is identically 0 mod `p`, so `f` must
///   supply the roots.
pub fn bias_factor_linear_form(f: &IntPolynomial, form: LinearForm, p: u64) -> Result<f64> {
    let z = match partition_prime(form, p)? {
        PrimeClass::P0 => return euler_factor(f, p),
        class => {
            let z = f.root_count_mod(p)? as f64;
            match class {
                PrimeClass::P1 => return Ok((p as f64 - z) / (p as f64 - 1.0)),
                _ => z,
            }
        }
    };
    Ok(z)
}

/// Singular series for a general linear form, as an Euler product of
/// [`bias_factor_linear_form`] over primes ≤ `trunc_p`. For the plain
/// difference this is factor-for-factor identical to [`singular_series`].
pub fn generalized_singular_series(
    f: &IntPolynomial,
    form: LinearForm,
    trunc_p: u64,
) -> Result<SingularSeriesResult> {
    if trunc_p < 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation prime must be at least 2, got {trunc_p}"
        )));
    }
    let table = PrimeTable::build(trunc_p)?;
    let primes: Vec<u64> = table.primes().collect();
    let factors = primes
        .par_iter()
        .map(|&p| bias_factor_linear_form(f, form, p).map(|fac| (p, fac)))
        .collect::<Result<Vec<(u64, f64)>>>()?;
    Ok(SingularSeriesResult::from_factors(factors, trunc_p, f.degree()))
}

/// Predicted log-weighted pair count:
/// `series · C_k(a1,a2) · c_k^(−1/k) · k/(k+1) · N^((k+1)/k)`.
///
/// `series` is the (generalized) singular series value for `(f, form)` —
/// passed in rather than recomputed so sweeps can reuse one evaluation.
/// An exactly-zero series gives exactly 0.
pub fn main_term_weighted(f: &IntPolynomial, form: LinearForm, n: u64, series: f64) -> f64 {
    if series == 0.0 {
        return 0.0;
    }
    let k = f.degree();
    let ck = f.leading_coefficient() as f64;
    debug_assert!(ck > 0.0);
    let nf = n as f64;
    let n_power = nf * root_k(nf, k); // N^((k+1)/k)
    series * c_factor(k, form) / root_k(ck, k) * (k as f64 / (k as f64 + 1.0)) * n_power
}

/// Predicted raw pair count: [`main_term_weighted`] divided by `log² N`.
pub fn main_term_unweighted(f: &IntPolynomial, form: LinearForm, n: u64, series: f64) -> f64 {
    let w = main_term_weighted(f, form, n, series);
    if w == 0.0 {
        return 0.0;
    }
    let logn = (n as f64).ln();
    w / (logn * logn)
}
