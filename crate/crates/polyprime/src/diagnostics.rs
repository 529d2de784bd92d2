//! Numerical verification of the transform identities behind the
//! predictions, at scales where everything can be computed two ways.
//!
//! The centerpiece is [`verify_orthogonality`]: the weighted pair count
//! equals `∫₀¹ |Λ̂_N(α)|²·S_M(α) dα`, and since the integrand is a
//! trigonometric polynomial of bounded frequency, that integral is *exactly*
//! a finite Fourier coefficient — computable by one DFT and comparable
//! digit-for-digit against the direct sum. No asymptotics involved; any
//! disagreement is a bug in one of the two engines.
//!
//! The rest of the module evaluates the individual exponential sums
//! (`Λ̂_N`, the Weyl sum `S_M`, the linear phase sum `ν_N`, the oscillatory
//! integral `I_M`) and the empirical residue statistics of prime pairs that
//! the local bias factors predict.
//!
//! Sign conventions follow the definitions used throughout:
//! `Λ̂_N(α) = Σ_{n≤N} Λ(n)·e^{−2πinα}` and `ν_N(β) = Σ_{n≤N} e^{−2πinβ}`
//! carry the minus sign; `S_M(α) = Σ_{d≤M} e^{+2πif(d)α}` and
//! `I_M(β) = ∫₀^M e^{+2πif(x)β} dx` do not.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::counting::{self, FastPath, LinearForm};
use crate::error::{Error, Result};
use crate::numeric::{check_budget, factorize, next_pow2_above, pairwise_sum, scaled_kth_root};
use crate::polynomial::IntPolynomial;
use crate::sieve::{prime_residue_counts, LambdaWeights, PrimeTable};

/// Largest `N` accepted by [`verify_orthogonality`]. The check is a
/// diagnostic; past this scale the DFT stops being "small and obviously
/// right" and starts being the thing under test.
pub const ORTHOGONALITY_MAX_N: u64 = 10_000;

/// Leaf-interval budget for the adaptive quadrature in [`i_m`].
pub const QUADRATURE_PANEL_CAP: u64 = 1 << 22;

/// Absolute quadrature tolerance per unit of integration length.
pub const QUADRATURE_TOL_PER_UNIT: f64 = 1e-8;

/// Largest modulus for the O(m²) pair-residue distributions.
pub const DISTRIBUTION_MODULUS_CAP: u64 = 4096;

/// `e^{2πix}`.
#[inline]
fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * x)
}

/// `Λ̂_N(α) = Σ_{n ≤ N} Λ(n)·e^{−2πinα}`, by direct summation over the
/// support (prime powers).
pub fn lambda_hat(n: u64, alpha: f64) -> Result<Complex64> {
    let weights = LambdaWeights::for_limit(n)?;
    Ok(lambda_hat_with(&weights, alpha))
}

/// [`lambda_hat`] against prebuilt weights, for grid sweeps.
pub fn lambda_hat_with(weights: &LambdaWeights, alpha: f64) -> Complex64 {
    let w = weights.as_slice();
    weights
        .support()
        .iter()
        .map(|&n| w[n as usize] * e(-(n as f64) * alpha))
        .sum()
}

/// Weyl sum `S_M(α) = Σ_{d=1}^{M} e^{2πi·f(d)·α}`, by direct summation.
///
/// Phases are `f64` products `f(d)·α`; for the diagnostic ranges used here
/// (`|f(d)| ≤ 10^9` or so) that leaves ~7 digits of phase, ample against
/// the `10^-6`-grade tolerances this module feeds.
pub fn weyl_sum(f: &IntPolynomial, m: u64, alpha: f64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 1..=m {
        acc += e(f.evaluate(d as i64)? as f64 * alpha);
    }
    Ok(acc)
}

/// `ν_N(β) = Σ_{n=1}^{N} e^{−2πinβ}` in closed form:
/// `e^{−πi(N+1)β}·sin(πNβ)/sin(πβ)`, and exactly `N` at integer `β`.
///
/// The sine-ratio form stays stable arbitrarily close to integers (both
/// sines vanish linearly, the ratio tends to `N`).
pub fn nu(n: u64, beta: f64) -> Complex64 {
    if beta.fract() == 0.0 {
        return Complex64::new(n as f64, 0.0);
    }
    let pi = std::f64::consts::PI;
    let nf = n as f64;
    let ratio = (pi * nf * beta).sin() / (pi * beta).sin();
    e(-(nf + 1.0) * beta / 2.0) * ratio
}

/// Oscillatory integral `I_M(β) = ∫₀^M e^{2πi·f(x)·β} dx` by adaptive
/// Simpson quadrature to absolute tolerance [`QUADRATURE_TOL_PER_UNIT`]·M.
///
/// The initial grid is sized to the total phase swing `|β|·|f(M) − f(0)|`
/// so that no panel starts astride many whole oscillations (uniform
/// Simpson panels can alias a fast oscillation into a spuriously small
/// error estimate); refinement then splits panels until each converges.
/// Exceeding [`QUADRATURE_PANEL_CAP`] leaves raises an accuracy error.
pub fn i_m(f: &IntPolynomial, m: u64, beta: f64) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::InvalidArgument("integration length M must be positive".into()));
    }
    let coeffs: Vec<f64> = f.coefficients().iter().map(|&c| c as f64).collect();
    let g = |t: f64| {
        let mut v = 0.0;
        for &c in coeffs.iter().rev() {
            v = v * t + c;
        }
        e(beta * v)
    };

    let tol = QUADRATURE_TOL_PER_UNIT * m as f64;
    let swing = (beta * (f.evaluate(m as i64)? - f.evaluate(0)?) as f64).abs();
    let initial = (2.0 * swing).ceil().max(16.0).min(65_536.0) as u64;
    let initial = next_pow2_above(initial - 1); // ≥ initial, power of two

    let mut budget = QUADRATURE_PANEL_CAP.saturating_sub(initial);
    let mut total = Complex64::new(0.0, 0.0);
    let step = m as f64 / initial as f64;
    for i in 0..initial {
        let a = i as f64 * step;
        let b = if i + 1 == initial { m as f64 } else { (i + 1) as f64 * step };
        let mid = 0.5 * (a + b);
        let (fa, fm, fb) = (g(a), g(mid), g(fb_arg(b, m)));
        let whole = simpson(a, b, fa, fm, fb);
        total += refine(&g, a, b, fa, fm, fb, whole, tol / initial as f64, &mut budget)?;
    }
    Ok(total)
}

/// Clamps the right endpoint to exactly `M` so the final panel's endpoint
/// is not off by a rounding ulp.
#[inline]
fn fb_arg(b: f64, m: u64) -> f64 {
    if b > m as f64 {
        m as f64
    } else {
        b
    }
}

#[inline]
fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

fn refine<G: Fn(f64) -> Complex64>(
    g: &G,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    budget: &mut u64,
) -> Result<Complex64> {
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let (flm, frm) = (g(lm), g(rm));
    let left = simpson(a, mid, fa, flm, fm);
    let right = simpson(mid, b, fm, frm, fb);
    let delta = left + right - whole;
    // Standard Simpson extrapolation: halving overshoots by a factor ~15.
    if delta.norm() <= 15.0 * tol || b - a <= f64::EPSILON * a.abs().max(1.0) {
        return Ok(left + right + delta / 15.0);
    }
    if *budget < 2 {
        return Err(Error::Accuracy {
            context: "oscillatory integral refinement ran out of panels",
            achieved: delta.norm() / 15.0,
            required: tol,
        });
    }
    *budget -= 2;
    let half = 0.5 * tol;
    Ok(refine(g, a, mid, fa, flm, fm, left, half, budget)?
        + refine(g, mid, b, fm, frm, fb, right, half, budget)?)
}

/// Both sides of the pair-count transform identity, with their gap.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    /// Direct weighted count `Σ_d Σ_n Λ(n)·Λ(n − f(d))`.
    pub lhs: f64,
    /// The integral `∫₀¹ |Λ̂_N|²·S_M`, evaluated exactly as the
    /// zero-frequency coefficient of the integrand via one length-`L` DFT.
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`, 0 when both sides vanish.
    pub relative_error: f64,
    /// DFT length used (0 when the argument range is empty).
    pub transform_len: usize,
}

/// Checks `R_f(N) = ∫₀¹ |Λ̂_N(α)|²·S_M(α) dα` at diagnostic scale.
///
/// The integrand's frequencies lie in `[−(N−1) − max|f(d)|, (N−1) + max|f(d)|]`,
/// so a uniform grid of length `L` strictly above twice that bandwidth
/// integrates it exactly (every nonzero frequency averages to zero on the
/// grid); the two sides then differ only by floating-point noise.
pub fn verify_orthogonality(f: &IntPolynomial, n: u64) -> Result<OrthogonalityReport> {
    if n > ORTHOGONALITY_MAX_N {
        return Err(Error::ResourceLimit {
            what: "orthogonality check N",
            requested: n,
            cap: ORTHOGONALITY_MAX_N,
        });
    }
    let weights = LambdaWeights::for_limit(n)?;
    let lhs = counting::weighted_count_with(f, &weights, FastPath::Direct)?;

    let m = scaled_kth_root(n as i64, f.leading_coefficient(), f.degree());
    let targets = (1..=m).map(|d| f.evaluate(d as i64)).collect::<Result<Vec<i64>>>()?;
    if targets.is_empty() {
        return Ok(OrthogonalityReport { lhs, rhs: 0.0, relative_error: relative_gap(lhs, 0.0), transform_len: 0 });
    }
    let fmax = targets.iter().map(|&t| t.unsigned_abs()).max().unwrap_or(0);
    let l = next_pow2_above(2 * (n + fmax)) as usize;
    // Λ spectrum buffer + histogram spectrum buffer + FFT scratch.
    check_budget(48 * l as u64)?;

    let mut planner = rustfft::FftPlanner::new();
    let fft = planner.plan_fft_forward(l);
    let mut lam = vec![Complex64::default(); l];
    for &s in weights.support() {
        lam[s as usize].re = weights.as_slice()[s as usize];
    }
    let mut hist = vec![Complex64::default(); l];
    for &t in &targets {
        hist[t.rem_euclid(l as i64) as usize].re += 1.0;
    }
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(&mut lam, &mut scratch);
    fft.process_with_scratch(&mut hist, &mut scratch);
    drop(scratch);

    // LAM[j] = Λ̂(j/L) directly (matching minus-sign conventions); the
    // histogram transform is conj(S_M(j/L)). The grand total is real, so
    // summing the per-point real parts |LAM|²·Re(S_M) is its exact real
    // part; pairwise summation keeps the reduction order fixed.
    let terms: Vec<f64> = lam.iter().zip(&hist).map(|(lj, hj)| lj.norm_sqr() * hj.re).collect();
    let rhs = pairwise_sum(&terms) / l as f64;
    Ok(OrthogonalityReport { lhs, rhs, relative_error: relative_gap(lhs, rhs), transform_len: l })
}

fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// One sampled point of the unit circle: `α`, `Λ̂_N(α)`, and `S_M(α)`.
/// A report row, not a computation — everything in it is reproducible
/// from `(N, M, f, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcPoint {
    pub alpha: f64,
    pub value_lambda_hat: Complex64,
    pub value_weyl: Complex64,
}

/// Samples `Λ̂_N` and `S_M` on the uniform grid `α = j/count`, `j < count`.
/// Points are independent and evaluated in parallel; the output order is
/// the grid order.
pub fn arc_samples(
    f: &IntPolynomial,
    weights: &LambdaWeights,
    m: u64,
    count: usize,
) -> Result<Vec<ArcPoint>> {
    if count == 0 {
        return Err(Error::InvalidArgument("arc sample count must be positive".into()));
    }
    (0..count)
        .into_par_iter()
        .map(|j| {
            let alpha = j as f64 / count as f64;
            Ok(ArcPoint {
                alpha,
                value_lambda_hat: lambda_hat_with(weights, alpha),
                value_weyl: weyl_sum(f, m, alpha)?,
            })
        })
        .collect()
}

/// Distribution of `(p1 − p2) mod m` over ordered pairs of primes ≤ N.
pub fn empirical_difference_distribution(n: u64, m: u64) -> Result<Vec<f64>> {
    let table = PrimeTable::build(n)?;
    empirical_difference_distribution_with(&table, m)
}

/// [`empirical_difference_distribution`] against a prebuilt table.
pub fn empirical_difference_distribution_with(table: &PrimeTable, m: u64) -> Result<Vec<f64>> {
    empirical_form_distribution_with(table, LinearForm::DIFFERENCE, m)
}

/// Distribution of `(a1·p1 + a2·p2) mod m` over ordered pairs of primes
/// ≤ N, from the residue-class counts of the primes themselves (an O(m²)
/// convolution — the primes are scanned once, not π(N)² times).
pub fn empirical_form_distribution_with(
    table: &PrimeTable,
    form: LinearForm,
    m: u64,
) -> Result<Vec<f64>> {
    if m > DISTRIBUTION_MODULUS_CAP {
        return Err(Error::ResourceLimit {
            what: "pair-distribution modulus",
            requested: m,
            cap: DISTRIBUTION_MODULUS_CAP,
        });
    }
    let counts = prime_residue_counts(table, m)?;
    let total = table.count_primes();
    if total == 0 {
        return Err(Error::InvalidArgument(format!(
            "no primes up to {}; the pair distribution is undefined",
            table.limit()
        )));
    }
    let mut dist = vec![0.0f64; m as usize];
    for (r1, &c1) in counts.iter().enumerate() {
        if c1 == 0 {
            continue;
        }
        let base = form.a1() * r1 as i64;
        for (r2, &c2) in counts.iter().enumerate() {
            if c2 == 0 {
                continue;
            }
            let t = (base + form.a2() * r2 as i64).rem_euclid(m as i64) as usize;
            dist[t] += (c1 * c2) as f64;
        }
    }
    let scale = 1.0 / (total as f64 * total as f64);
    for v in &mut dist {
        *v *= scale;
    }
    Ok(dist)
}

/// Measured local bias of actual prime pairs at a prime `p`: the empirical
/// probability that `a1·p1 + a2·p2 mod p` lands on a residue of `f`,
/// relative to uniform. Equals `Σ_t dist[t]·z_t` where `z_t` counts
/// `r mod p` with `f(r) ≡ t`; with perfectly equidistributed primes this
/// reproduces the theoretical local factor, so the gap between the two is
/// exactly the finite-N equidistribution error.
pub fn empirical_bias(
    f: &IntPolynomial,
    form: LinearForm,
    p: u64,
    table: &PrimeTable,
) -> Result<f64> {
    let is_prime = p >= 2 && factorize(p) == [(p, 1)];
    if !is_prime {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let dist = empirical_form_distribution_with(table, form, p)?;
    let hist = f.residue_histogram_mod(p)?;
    Ok(dist.iter().zip(&hist).map(|(&d, &z)| d * z as f64).sum())
}
