//! Exact pair counts and log-weighted counts over prime pairs.
//!
//! Two quantities drive everything downstream:
//!
//! * the **exact count** — ordered prime pairs `(p1, p2)` with both entries
//!   ≤ N and `a1·p1 + a2·p2` in the value set `{f(1), f(2), …}`;
//! * the **weighted count** — `Σ_d Σ_n Λ(n)·Λ(n − f(d))` (and its
//!   linear-form generalization), the von Mangoldt–smoothed version whose
//!   main term is clean enough to predict. The argument `d` runs to the
//!   cutoff `M = max{m : c_k·m^k ≤ a_max·N}` with `a_max = max(a1, a1+a2)`,
//!   and repeated values `f(d)` count once per argument.
//!
//! Each has two interchangeable engines:
//!
//! * **direct** — iterate the sparse support (primes, or prime powers for
//!   Λ) per target value; exact integer or deterministic float arithmetic.
//! * **spectral** — one size-`L` FFT autocorrelation (plain differences) or
//!   a three-FFT strided convolution (general forms) evaluates *all*
//!   targets at once. Counts are recovered by rounding; weighted sums keep
//!   ~9 digits, far inside the crate's comparison tolerances.
//!
//! `FastPath::Auto` switches engines at [`SPECTRAL_CROSSOVER`]. Both are
//! deterministic for a fixed input regardless of thread count: parallel
//! pieces are collected in target order and reduced by pairwise summation.

use std::str::FromStr;
use std::time::Duration;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numeric::{check_budget, next_pow2_above, pairwise_sum, scaled_kth_root};
use crate::polynomial::IntPolynomial;
use crate::sieve::{LambdaWeights, PrimeTable};

/// Smallest `N` at which `FastPath::Auto` prefers the FFT engine. Below
/// this the sparse direct scan wins on cache behavior alone; above it the
/// per-target cost of the direct scan grows past the one-time FFT.
pub const SPECTRAL_CROSSOVER: u64 = 100_000;

/// The integer form `a1·p1 + a2·p2` applied to prime pairs.
///
/// `a1` must be positive and `a2` nonzero; the plain difference
/// `p1 − p2` is [`LinearForm::DIFFERENCE`]. (Negating both coefficients
/// mirrors the value set, so pinning `a1 > 0` loses nothing.)
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearForm {
    a1: i64,
    a2: i64,
}

impl LinearForm {
    /// `p1 − p2`, the form the plain counting API uses.
    pub const DIFFERENCE: LinearForm = LinearForm { a1: 1, a2: -1 };

    pub fn new(a1: i64, a2: i64) -> Result<Self> {
        if a1 <= 0 {
            return Err(Error::InvalidArgument(format!(
                "first form coefficient must be positive, got {a1}"
            )));
        }
        if a2 == 0 {
            return Err(Error::InvalidArgument("second form coefficient must be nonzero".into()));
        }
        Ok(LinearForm { a1, a2 })
    }

    pub fn a1(self) -> i64 {
        self.a1
    }

    pub fn a2(self) -> i64 {
        self.a2
    }

    pub fn is_difference(self) -> bool {
        self == Self::DIFFERENCE
    }

    /// `max(a1, a1 + a2)` — the factor by which the form stretches the
    /// reachable value range, hence the scale in the argument cutoff `M`.
    pub fn reach(self) -> i64 {
        self.a1.max(self.a1.saturating_add(self.a2))
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    /// Parses `"a1,a2"`, e.g. `"1,-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (first, second) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"a1,a2\", got {s:?}")))?;
        let a1 = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad form coefficient {:?}", first.trim())))?;
        let a2 = second
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad form coefficient {:?}", second.trim())))?;
        LinearForm::new(a1, a2)
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "{},{}", self.a1, self.a2)
    }
}

/// Engine selection for the counting functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FastPath {
    /// Direct below [`SPECTRAL_CROSSOVER`], spectral at or above it.
    #[default]
    Auto,
    Direct,
    Spectral,
}

impl FastPath {
    fn use_spectral(self, n: u64) -> bool {
        match self {
            FastPath::Auto => n >= SPECTRAL_CROSSOVER,
            FastPath::Direct => false,
            FastPath::Spectral => true,
        }
    }
}

/// One fully-evaluated data point: a polynomial, a form, a size, and every
/// number the comparison table needs. Assembled by callers (the CLI builds
/// one per `(f, form, N)` cell); the ratio accessors own the
/// division-by-zero convention so no caller reinvents it.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub poly: IntPolynomial,
    pub form: LinearForm,
    pub n: u64,
    pub exact: u64,
    pub weighted: f64,
    pub main_term_weighted: f64,
    pub main_term_unweighted: f64,
    pub series_value: f64,
    pub series_tail_bound: f64,
    pub elapsed: Duration,
}

impl CountReport {
    /// `weighted / main_term_weighted`, or `None` when the predicted main
    /// term is zero (a dead singular series): the ratio is then undefined,
    /// not zero, and serializers must write an explicit null.
    pub fn ratio_weighted(&self) -> Option<f64> {
        (self.main_term_weighted != 0.0).then(|| self.weighted / self.main_term_weighted)
    }

    /// `exact / main_term_unweighted`, with the same null convention.
    pub fn ratio_unweighted(&self) -> Option<f64> {
        (self.main_term_unweighted != 0.0).then(|| self.exact as f64 / self.main_term_unweighted)
    }
}

/// Ordered prime pairs `(p1, p2)` with `p1 − p2` in the value set of `f`.
pub fn count_pairs_exact(f: &IntPolynomial, n: u64) -> Result<u64> {
    let table = PrimeTable::build(n)?;
    count_pairs_exact_with(f, &table, FastPath::Auto)
}

/// [`count_pairs_exact`] against a prebuilt table (`N = table.limit()`).
pub fn count_pairs_exact_with(f: &IntPolynomial, table: &PrimeTable, path: FastPath) -> Result<u64> {
    count_pairs_linear_form_with(f, LinearForm::DIFFERENCE, table, path)
}

/// Ordered prime pairs `(p1, p2)` with `a1·p1 + a2·p2` in the value set.
pub fn count_pairs_linear_form(f: &IntPolynomial, form: LinearForm, n: u64) -> Result<u64> {
    let table = PrimeTable::build(n)?;
    count_pairs_linear_form_with(f, form, &table, FastPath::Auto)
}

/// [`count_pairs_linear_form`] against a prebuilt table.
pub fn count_pairs_linear_form_with(
    f: &IntPolynomial,
    form: LinearForm,
    table: &PrimeTable,
    path: FastPath,
) -> Result<u64> {
    let n = table.limit();
    let Some(pmax) = table.largest_prime() else {
        return Ok(0);
    };
    // The form's reachable interval over primes in [2, pmax]; every pair
    // value lands here, so the polynomial's image is only needed this far.
    let lo = checked_form_value(form, 2, pmax, Ext::Min)?;
    let hi = checked_form_value(form, 2, pmax, Ext::Max)?;
    let image = f.image_in_window(lo, hi)?;
    if image.values.is_empty() {
        return Ok(0);
    }

    if path.use_spectral(n) {
        let mut indicator = vec![0.0f64; n as usize + 1];
        for p in table.primes() {
            indicator[p as usize] = 1.0;
        }
        let sums = if form.is_difference() {
            let auto = Autocorrelation::compute(&indicator)?;
            image.values.iter().map(|&t| auto.at(t)).collect::<Vec<f64>>()
        } else {
            form_correlation_fft(&indicator, form, &image.values)?
        };
        Ok(sums.iter().map(|&v| round_count(v)).sum())
    } else {
        let primes: Vec<u32> = table.primes().map(|p| p as u32).collect();
        let per_target: Vec<u64> = image
            .values
            .par_iter()
            .map(|&t| {
                if form.is_difference() {
                    // p1 = p2 + t; trim p1 to the band where p2 stays in range.
                    let lo_p = 2i64.max(2 + t);
                    let hi_p = (n as i64).min(n as i64 + t);
                    prime_slice(&primes, lo_p, hi_p)
                        .iter()
                        .filter(|&&p1| table.is_prime((p1 as i64 - t) as u64))
                        .count() as u64
                } else {
                    primes
                        .iter()
                        .filter(|&&p1| {
                            solve_second_slot(form, t, p1 as i64, n)
                                .is_some_and(|p2| table.is_prime(p2))
                        })
                        .count() as u64
                }
            })
            .collect();
        Ok(per_target.iter().sum())
    }
}

/// `Σ_{d=1}^{M} Σ_n Λ(n)·Λ(n − f(d))` with `M = max{m : c_k·m^k ≤ N}`.
pub fn weighted_count(f: &IntPolynomial, n: u64) -> Result<f64> {
    let weights = LambdaWeights::for_limit(n)?;
    weighted_count_with(f, &weights, FastPath::Auto)
}

/// [`weighted_count`] against prebuilt weights (`N = weights.limit()`).
pub fn weighted_count_with(f: &IntPolynomial, weights: &LambdaWeights, path: FastPath) -> Result<f64> {
    weighted_count_linear_form_with(f, LinearForm::DIFFERENCE, weights, path)
}

/// `Σ_{d=1}^{M} Σ_{a1·n1 + a2·n2 = f(d)} Λ(n1)·Λ(n2)` with the stretched
/// cutoff `M = max{m : c_k·m^k ≤ a_max·N}`. Arguments `d` with equal values
/// `f(d)` each contribute (the sum runs over arguments, not values).
pub fn weighted_count_linear_form(f: &IntPolynomial, form: LinearForm, n: u64) -> Result<f64> {
    let weights = LambdaWeights::for_limit(n)?;
    weighted_count_linear_form_with(f, form, &weights, FastPath::Auto)
}

/// [`weighted_count_linear_form`] against prebuilt weights.
pub fn weighted_count_linear_form_with(
    f: &IntPolynomial,
    form: LinearForm,
    weights: &LambdaWeights,
    path: FastPath,
) -> Result<f64> {
    let n = weights.limit();
    let bound = form.reach().checked_mul(n as i64).ok_or_else(|| {
        Error::Overflow(format!("form reach {} times N = {n} exceeds i64", form.reach()))
    })?;
    let m = scaled_kth_root(bound, f.leading_coefficient(), f.degree());
    let targets = (1..=m).map(|d| f.evaluate(d as i64)).collect::<Result<Vec<i64>>>()?;
    if targets.is_empty() {
        return Ok(0.0);
    }

    let sums = if path.use_spectral(n) {
        if form.is_difference() {
            let auto = Autocorrelation::compute(weights.as_slice())?;
            targets.iter().map(|&t| auto.at(t)).collect::<Vec<f64>>()
        } else {
            form_correlation_fft(weights.as_slice(), form, &targets)?
        }
    } else {
        form_correlation_direct(weights, form, &targets, n)
    };
    Ok(pairwise_sum(&sums))
}

/// Every autocorrelation value `Σ_i w[i]·w[i−h]` of a real vector.
///
/// Shifts are differences of *positions*, so the spectrum is invariant
/// under padding the front of the slice: a vector of values on `{1..N}`
/// and its 0-indexed dense form produce identical spectra. Length-`L`
/// input yields shifts `−(L−1) ..= L−1`; [`ShiftSpectrum::at`] returns 0
/// outside that band, matching the true (empty) sum.
pub fn shift_spectrum(weights: &[f64]) -> Result<ShiftSpectrum> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument("shift spectrum of an empty vector".into()));
    }
    let auto = Autocorrelation::compute(weights)?;
    let len = weights.len();
    let mut values = vec![0.0f64; 2 * len - 1];
    for (i, v) in values.iter_mut().enumerate() {
        *v = auto.at(i as i64 - (len as i64 - 1));
    }
    Ok(ShiftSpectrum { len, values })
}

/// Result of [`shift_spectrum`]: autocorrelations indexed by signed shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSpectrum {
    len: usize,
    values: Vec<f64>,
}

impl ShiftSpectrum {
    /// The value at shift `h` (0 outside `|h| ≤ max_shift`). Real input
    /// makes the spectrum even: `at(−h) == at(h)`.
    pub fn at(&self, h: i64) -> f64 {
        let idx = h + self.len as i64 - 1;
        if (0..self.values.len() as i64).contains(&idx) {
            self.values[idx as usize]
        } else {
            0.0
        }
    }

    pub fn max_shift(&self) -> i64 {
        self.len as i64 - 1
    }

    /// All values, shift `−max_shift` first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Zero-padded FFT autocorrelation: forward transform, power spectrum,
/// forward transform again. The second pass evaluates
/// `Σ_j |W[j]|²·e^(−2πi·jh/L) = L·Σ_i w[i]·w[i+h]`, and the power spectrum
/// is real and even, so lag `h` sits at index `h` directly.
struct Autocorrelation {
    buf: Vec<Complex64>,
    l: usize,
    n: usize,
}

impl Autocorrelation {
    fn compute(w: &[f64]) -> Result<Self> {
        let n = w.len();
        // L > 2(n−1) keeps every circular lag class single-occupancy.
        let l = next_pow2_above(2 * n as u64) as usize;
        // Two Complex64 arrays (buffer + FFT scratch) dominate.
        check_budget(32 * l as u64)?;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(l);
        let mut buf = vec![Complex64::default(); l];
        for (slot, &x) in buf.iter_mut().zip(w) {
            slot.re = x;
        }
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut buf, &mut scratch);
        for slot in buf.iter_mut() {
            *slot = Complex64::new(slot.norm_sqr(), 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        Ok(Autocorrelation { buf, l, n })
    }

    fn at(&self, h: i64) -> f64 {
        let lag = h.unsigned_abs() as usize;
        if lag < self.n {
            self.buf[lag].re / self.l as f64
        } else {
            0.0
        }
    }
}

/// Which end of the reachable interval to compute.
enum Ext {
    Min,
    Max,
}

/// Extreme of `a1·x1 + a2·x2` over `x1, x2 ∈ [lo, hi]`, overflow-checked.
fn checked_form_value(form: LinearForm, lo: u64, hi: u64, which: Ext) -> Result<i64> {
    let overflow = || Error::Overflow(format!("form {form} over [{lo}, {hi}] exceeds i64"));
    let term = |a: i64, x: u64| -> Result<i64> { a.checked_mul(x as i64).ok_or_else(overflow) };
    let (x1, x2) = match (which, form.a2 > 0) {
        (Ext::Min, true) => (lo, lo),
        (Ext::Min, false) => (lo, hi),
        (Ext::Max, true) => (hi, hi),
        (Ext::Max, false) => (hi, lo),
    };
    term(form.a1, x1)?.checked_add(term(form.a2, x2)?).ok_or_else(overflow)
}

/// `p2` solving `a1·p1 + a2·p2 = t` if it is an integer in `[2, n]`.
#[inline]
fn solve_second_slot(form: LinearForm, t: i64, p1: i64, n: u64) -> Option<u64> {
    let v = t - form.a1 * p1;
    if v % form.a2 != 0 {
        return None;
    }
    let p2 = v / form.a2;
    (2..=n as i64).contains(&p2).then_some(p2 as u64)
}

/// Direct evaluation of `Σ_{a1·n1 + a2·n2 = t} w(n1)·w(n2)` per target.
/// The plain difference iterates only the support band that keeps both
/// arguments in range; general forms test divisibility per support point.
fn form_correlation_direct(
    weights: &LambdaWeights,
    form: LinearForm,
    targets: &[i64],
    n: u64,
) -> Vec<f64> {
    let w = weights.as_slice();
    let support = weights.support();
    targets
        .par_iter()
        .map(|&t| {
            let mut acc = 0.0f64;
            if form.is_difference() {
                let lo = 1i64.max(1 + t);
                let hi = (n as i64).min(n as i64 + t);
                for &n1 in support_slice(support, lo, hi) {
                    acc += w[n1 as usize] * w[(n1 as i64 - t) as usize];
                }
            } else {
                for &n1 in support {
                    let v = t - form.a1 * n1 as i64;
                    if v % form.a2 == 0 {
                        let n2 = v / form.a2;
                        if (1..=n as i64).contains(&n2) {
                            acc += w[n1 as usize] * w[n2 as usize];
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

fn support_slice(support: &[u32], lo: i64, hi: i64) -> &[u32] {
    if lo > hi {
        return &[];
    }
    let a = support.partition_point(|&v| (v as i64) < lo);
    let b = support.partition_point(|&v| (v as i64) <= hi);
    &support[a..b]
}

fn prime_slice(primes: &[u32], lo: i64, hi: i64) -> &[u32] {
    support_slice(primes, lo, hi)
}

/// All-targets evaluation of `Σ_{a1·n1 + a2·n2 = t} w(n1)·w(n2)` by
/// convolving the two strided embeddings `n ↦ a1·n` and `n ↦ a2·n` with a
/// transform length exceeding the reachable span, so no two reachable sums
/// collide modulo `L`. Targets outside the span are exactly 0 and bypass
/// the lookup (they may alias reachable residues).
fn form_correlation_fft(w: &[f64], form: LinearForm, targets: &[i64]) -> Result<Vec<f64>> {
    let nmax = w.len() as i64 - 1;
    if nmax < 1 {
        return Ok(vec![0.0; targets.len()]);
    }
    let s_min = checked_form_value(form, 1, nmax as u64, Ext::Min)?;
    let s_max = checked_form_value(form, 1, nmax as u64, Ext::Max)?;
    let width = (s_max - s_min) as u64 + 1;
    let l = next_pow2_above(width) as usize;
    // Three Complex64 arrays: two embeddings and shared scratch.
    check_budget(48 * l as u64)?;

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(l);
    let inv = planner.plan_fft_inverse(l);
    let mut x = vec![Complex64::default(); l];
    let mut y = vec![Complex64::default(); l];
    for idx in 1..=nmax {
        let wn = w[idx as usize];
        if wn != 0.0 {
            x[(form.a1 * idx).rem_euclid(l as i64) as usize].re += wn;
            y[(form.a2 * idx).rem_euclid(l as i64) as usize].re += wn;
        }
    }
    let mut scratch = vec![
        Complex64::default();
        fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())
    ];
    fwd.process_with_scratch(&mut x, &mut scratch);
    fwd.process_with_scratch(&mut y, &mut scratch);
    for (xi, yi) in x.iter_mut().zip(&y) {
        *xi *= *yi;
    }
    drop(y);
    inv.process_with_scratch(&mut x, &mut scratch);

    let scale = 1.0 / l as f64;
    Ok(targets
        .iter()
        .map(|&t| {
            if (s_min..=s_max).contains(&t) {
                x[t.rem_euclid(l as i64) as usize].re * scale
            } else {
                0.0
            }
        })
        .collect())
}

/// Recovers an integer count from a spectral correlation value. The FFT
/// error is many orders below 1/2 at every supported size, so nearest
/// integer is exact; tiny negative noise on true zeros clamps to 0.
fn round_count(v: f64) -> u64 {
    let r = v.round();
    debug_assert!((v - r).abs() < 1e-3, "spectral count {v} is not near an integer");
    if r <= 0.0 {
        0
    } else {
        r as u64
    }
}
