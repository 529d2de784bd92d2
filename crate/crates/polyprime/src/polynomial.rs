//! Exact integer polynomials: parsing, evaluation, value-set enumeration,
//! and root counting modulo m.
//!
//! Everything is exact `i64`/`u64` arithmetic with explicit overflow checks;
//! no coefficient ever silently wraps. The two workhorses downstream are:
//!
//! * [`IntPolynomial::image_in_window`] — the set `{f(1), f(2), …}`
//!   intersected with an integer window, with a certified stopping point
//!   (a Cauchy-style bound on the critical points of `f`, past which `f`
//!   is strictly increasing, so once a value clears the window top nothing
//!   ever comes back).
//! * [`IntPolynomial::roots_mod`] — exhaustive root enumeration modulo `m`
//!   using a forward-difference scan: after seeding the difference table,
//!   stepping `r → r+1` costs `deg f` modular additions and no
//!   multiplications or divisions, which makes sweeps over every prime up
//!   to 10^5 cheap.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::scaled_kth_root;

/// Cap on brute-force modulus scans ([`IntPolynomial::roots_mod`] and
/// friends). A full scan at the cap costs a few times 10^7 additions —
/// around 50 ms — so anything above it is almost certainly a mistake.
pub const ROOTS_MOD_CAP: u64 = 10_000_000;

/// Largest accepted exponent in polynomial text. Far beyond any sensible
/// input (evaluation at x = 2 already overflows i64 near degree 62), but it
/// keeps a typo from allocating gigabytes of coefficients.
const MAX_PARSE_DEGREE: usize = 64;

/// An integer polynomial `f(x) = c_k·x^k + … + c_1·x + c_0` with `k ≥ 1`
/// and `c_k ≠ 0`.
///
/// Coefficients are stored in ascending order of exponent. Construction
/// rejects constant and zero polynomials: every consumer in this crate
/// needs a genuinely growing value set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    /// `coeffs[i]` is the coefficient of `x^i`; the last entry is nonzero.
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    /// Builds from ascending coefficients `[c_0, c_1, …, c_k]`.
    /// Trailing zeros are trimmed; the result must have degree ≥ 1.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("the zero polynomial is not accepted".into()));
        }
        if coeffs.len() == 1 {
            return Err(Error::Parse(format!(
                "constant polynomial {} is not accepted (degree must be ≥ 1)",
                coeffs[0]
            )));
        }
        Ok(Self { coeffs })
    }

    /// Builds from descending coefficients `[c_k, …, c_1, c_0]`, the order
    /// used by the bracketed text form.
    pub fn from_descending(coeffs: &[i64]) -> Result<Self> {
        let mut asc: Vec<i64> = coeffs.to_vec();
        asc.reverse();
        Self::new(asc)
    }

    /// Parses either monomial text (`"2x^3 - x + 1"`) or a bracketed
    /// descending coefficient list (`"[2, 0, -1, 1]"`).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('[') {
            parse_bracketed(trimmed)
        } else {
            parse_monomials(trimmed)
        }
    }

    /// Degree `k ≥ 1`.
    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// Leading coefficient `c_k`.
    pub fn leading_coefficient(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    /// Ascending coefficients `[c_0, …, c_k]`.
    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// Whether the leading coefficient is positive. Counting and image
    /// enumeration require this; use [`Self::normalize`] to ensure it.
    pub fn is_normalized(&self) -> bool {
        self.leading_coefficient() > 0
    }

    /// Returns `f` if the leading coefficient is positive, `−f` otherwise.
    ///
    /// Differences of primes are symmetric under negating the shift set, so
    /// counts against `f` and `−f` agree and a positive leading coefficient
    /// can be assumed throughout.
    pub fn normalize(&self) -> Self {
        if self.is_normalized() {
            self.clone()
        } else {
            Self { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
        }
    }

    /// Exact `f(x)` by Horner evaluation; overflow is an error, never a
    /// silent wrap.
    pub fn evaluate(&self, x: i64) -> Result<i64> {
        let mut acc: i64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or_else(|| Error::Overflow(format!("evaluating {self} at x = {x}")))?;
        }
        Ok(acc)
    }

    /// `f(x) mod m` in `[0, m)`, safe for any `m ≤ 2^63` (intermediate
    /// products are widened to u128).
    pub fn evaluate_mod(&self, x: u64, m: u64) -> u64 {
        debug_assert!(m >= 1);
        let x = x % m;
        let mut acc: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            let c_mod = c.rem_euclid(m as i64) as u64;
            acc = ((acc as u128 * x as u128 + c_mod as u128) % m as u128) as u64;
        }
        acc
    }

    /// Conservative integer bound `D*` such that `f` is strictly increasing
    /// on `[D*, ∞)`: one more than a Cauchy-style bound on the real roots
    /// of `f′`. Cheap and exact; used to certify image enumeration cutoffs.
    pub fn critical_point_bound(&self) -> u64 {
        let k = self.degree() as u128;
        let ck = self.leading_coefficient().unsigned_abs() as u128;
        let max_low = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0) as u128;
        let bound = 1 + (k * max_low).div_ceil(ck);
        u64::try_from(bound).unwrap_or(u64::MAX)
    }

    /// Seeds the forward-difference table `[Δ^0 f(0), …, Δ^k f(0)] mod m`.
    ///
    /// Advancing the whole table by one step (`r → r+1`) is `k` modular
    /// additions: `Δ^j f(r+1) = Δ^j f(r) + Δ^{j+1} f(r)`.
    fn difference_table_mod(&self, m: u64) -> Vec<u64> {
        let k = self.coeffs.len() - 1;
        let mut table: Vec<u64> = (0..=k as u64).map(|i| self.evaluate_mod(i, m)).collect();
        for level in 1..=k {
            for i in (level..=k).rev() {
                table[i] = mod_sub(table[i], table[i - 1], m);
            }
        }
        table
    }

    /// Visits `f(r) mod m` for `r = 0, 1, …, m−1` via the difference scan.
    #[inline]
    fn scan_residues_mod<F: FnMut(u64, u64) -> bool>(&self, m: u64, mut visit: F) {
        let mut table = self.difference_table_mod(m);
        let k = table.len() - 1;
        for r in 0..m {
            if !visit(r, table[0]) {
                return;
            }
            for j in 0..k {
                table[j] = mod_add(table[j], table[j + 1], m);
            }
        }
    }

    fn check_modulus(m: u64) -> Result<()> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
        }
        if m > ROOTS_MOD_CAP {
            return Err(Error::ResourceLimit { what: "modulus", requested: m, cap: ROOTS_MOD_CAP });
        }
        Ok(())
    }

    /// All residues `r ∈ {0, …, m−1}` with `f(r) ≡ 0 (mod m)`, ascending,
    /// by exhaustive scan. `m` must be in `[2, ROOTS_MOD_CAP]`.
    pub fn roots_mod(&self, m: u64) -> Result<Vec<u64>> {
        Self::check_modulus(m)?;
        let mut roots = Vec::new();
        self.scan_residues_mod(m, |r, v| {
            if v == 0 {
                roots.push(r);
            }
            true
        });
        Ok(roots)
    }

    /// Number of roots of `f` modulo `m` (the length of
    /// [`Self::roots_mod`], without the allocation).
    pub fn root_count_mod(&self, m: u64) -> Result<u64> {
        Self::check_modulus(m)?;
        let mut count = 0;
        self.scan_residues_mod(m, |_, v| {
            if v == 0 {
                count += 1;
            }
            true
        });
        Ok(count)
    }

    /// Whether `f` has at least one root modulo `m` (early-exits on the
    /// first hit, so intersective polynomials test fast).
    pub fn has_root_mod(&self, m: u64) -> Result<bool> {
        Self::check_modulus(m)?;
        let mut found = false;
        self.scan_residues_mod(m, |_, v| {
            if v == 0 {
                found = true;
                return false;
            }
            true
        });
        Ok(found)
    }

    /// Histogram of `f` over residues: `hist[t] = #{r mod m : f(r) ≡ t}`.
    /// Used by the exponential-sum machinery.
    pub fn residue_histogram_mod(&self, m: u64) -> Result<Vec<u64>> {
        Self::check_modulus(m)?;
        let mut hist = vec![0u64; m as usize];
        self.scan_residues_mod(m, |_, v| {
            hist[v as usize] += 1;
            true
        });
        Ok(hist)
    }

    /// Checks that `f` has a root modulo every integer `n ≤ bound`.
    ///
    /// By the Chinese Remainder Theorem it suffices to test prime-power
    /// moduli, and the least failing modulus overall — if any — is itself a
    /// prime power, so that is what gets reported.
    pub fn is_intersective_up_to(&self, bound: u64) -> Result<IntersectiveCheck> {
        if bound > ROOTS_MOD_CAP {
            return Err(Error::ResourceLimit {
                what: "intersectivity bound",
                requested: bound,
                cap: ROOTS_MOD_CAP,
            });
        }
        if bound < 2 {
            return Ok(IntersectiveCheck::RootsEverywhere);
        }
        let table = crate::sieve::PrimeTable::build(bound)?;
        let mut prime_powers: Vec<u64> = Vec::new();
        for p in table.primes() {
            let mut q = p;
            loop {
                prime_powers.push(q);
                match q.checked_mul(p) {
                    Some(next) if next <= bound => q = next,
                    _ => break,
                }
            }
        }
        prime_powers.sort_unstable();
        for q in prime_powers {
            if !self.has_root_mod(q)? {
                return Ok(IntersectiveCheck::Witness(q));
            }
        }
        Ok(IntersectiveCheck::RootsEverywhere)
    }

    /// Enumerates the value set `{f(d) : d = 1, 2, 3, …}` clipped to
    /// `[lo, hi]`, deduplicated and sorted.
    ///
    /// Arguments run from `d = 1` upward until both (a) `d` has passed
    /// [`Self::critical_point_bound`], so `f` is strictly increasing from
    /// here on, and (b) `f(d) > hi`. Together these certify that no later
    /// argument can land in the window. Requires a normalized `f`
    /// (positive leading coefficient, so the values eventually grow).
    pub fn image_in_window(&self, lo: i64, hi: i64) -> Result<PolynomialImage> {
        if !self.is_normalized() {
            return Err(Error::InvalidArgument(format!(
                "image enumeration needs a positive leading coefficient; got {self} \
                 (call normalize() first)"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty window: lo = {lo} > hi = {hi}")));
        }
        let d_star = self.critical_point_bound();
        let mut values = Vec::new();
        let mut last_in_reach = 0u64; // largest d with f(d) ≤ hi
        let mut d = 1u64;
        loop {
            let v = self.evaluate(d as i64)?;
            if v <= hi {
                last_in_reach = d;
                if v >= lo {
                    values.push(v);
                }
            } else if d >= d_star {
                break;
            }
            d += 1;
        }
        values.sort_unstable();
        values.dedup();
        Ok(PolynomialImage {
            lo,
            hi,
            values,
            m_prime: last_in_reach,
            m: scaled_kth_root(hi, self.leading_coefficient(), self.degree()),
        })
    }
}

#[inline]
fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn mod_sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// Outcome of [`IntPolynomial::is_intersective_up_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectiveCheck {
    /// A root exists modulo every checked modulus.
    RootsEverywhere,
    /// The least modulus (always a prime power) with no root.
    Witness(u64),
}

/// The clipped, deduplicated value set of a polynomial, together with the
/// two argument cutoffs downstream code cares about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialImage {
    /// Window bottom (inclusive).
    pub lo: i64,
    /// Window top (inclusive).
    pub hi: i64,
    /// Strictly increasing values `f(d)` that landed in the window.
    pub values: Vec<i64>,
    /// Largest argument whose value is still ≤ `hi`; every `d` beyond this
    /// has `f(d) > hi`.
    pub m_prime: u64,
    /// Largest `m` with `c_k·m^k ≤ hi` — the leading-term argument cutoff
    /// used by weighted counting (0 if `hi < c_k`).
    pub m: u64,
}

impl PolynomialImage {
    /// Membership test (binary search).
    pub fn contains(&self, v: i64) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

fn parse_bracketed(text: &str) -> Result<IntPolynomial> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unterminated coefficient list: {text:?}")))?;
    let mut desc = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        let c: i64 = piece
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient {piece:?} in {text:?}")))?;
        desc.push(c);
    }
    IntPolynomial::from_descending(&desc)
}

fn parse_monomials(text: &str) -> Result<IntPolynomial> {
    if text.is_empty() {
        return Err(Error::Parse("empty polynomial text".into()));
    }
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();

    // Split into sign-prefixed terms: "2x^3-x+1" → ["2x^3", "-x", "+1"].
    let mut terms: Vec<(i64, &str)> = Vec::new(); // (sign, body)
    let bytes = compact.as_bytes();
    let mut start = 0usize;
    for i in 0..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && i != start {
            terms.push(term_sign(&compact[start..i])?);
            start = i;
        }
    }
    terms.push(term_sign(&compact[start..])?);

    let mut coeffs: Vec<i64> = Vec::new();
    for (sign, body) in terms {
        let (coeff_text, exp) = match body.find('x') {
            None => (body, 0usize),
            Some(xi) => {
                let after = &body[xi + 1..];
                let exp = match after.strip_prefix('^') {
                    None if after.is_empty() => 1usize,
                    None => {
                        return Err(Error::Parse(format!("unexpected {after:?} after x in {body:?}")))
                    }
                    Some(e) => e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {e:?} in {body:?}")))?,
                };
                (&body[..xi], exp)
            }
        };
        if exp > MAX_PARSE_DEGREE {
            return Err(Error::Parse(format!("exponent {exp} exceeds the cap of {MAX_PARSE_DEGREE}")));
        }
        let magnitude: i64 = if coeff_text.is_empty() {
            if exp == 0 {
                return Err(Error::Parse(format!("term with no coefficient and no x in {text:?}")));
            }
            1
        } else {
            coeff_text
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {coeff_text:?} in {text:?}")))?
        };
        let signed = sign
            .checked_mul(magnitude)
            .ok_or_else(|| Error::Overflow(format!("coefficient in {text:?}")))?;
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = coeffs[exp]
            .checked_add(signed)
            .ok_or_else(|| Error::Overflow(format!("combined coefficient of x^{exp} in {text:?}")))?;
    }
    IntPolynomial::new(coeffs)
}

fn term_sign(term: &str) -> Result<(i64, &str)> {
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term.strip_prefix('+').unwrap_or(term)),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {term:?}")));
    }
    Ok((sign, body))
}

impl FromStr for IntPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for IntPolynomial {
    /// Canonical monomial form, highest exponent first: `"2x^3 - x + 1"`.
    /// `parse(format!("{f}"))` round-trips.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (exp, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.unsigned_abs();
            match exp {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if exp == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{exp}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
