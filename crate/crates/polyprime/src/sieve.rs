//! Sieving: primality tables, von Mangoldt weights, and prime residue
//! statistics up to a bound N.
//!
//! The primality table is a packed bitmap built by a segmented sieve of
//! Eratosthenes. Segments (default 2^18 entries) keep the working set inside
//! L2 cache while the finished bitmap stays O(N/8) bytes; a monolithic
//! builder exists solely so tests can confirm the segmentation changes
//! nothing. Everything downstream — pair counting, residue statistics,
//! weighted sums — reads these tables immutably, so they are freely shared
//! across threads once built.

use crate::error::{Error, Result};
use crate::numeric::{self, pairwise_sum};

/// Default sieve segment length in entries (not bytes).
///
/// 2^18 one-byte entries sit comfortably in a 256 KiB L2 slice. Correctness
/// is independent of this value (see the segment-length tests); it is only a
/// throughput knob.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 18;

/// Hard ceiling on table limits, matching the `u32` indices used by the
/// weighted-count inner loops. Practical limits are set by the memory
/// budget long before this.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

/// Packed primality bitmap over `{0..=limit}`.
///
/// Bit `n` is set iff `n` is prime. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
}

impl PrimeTable {
    /// Builds the table with the segmented sieve at the default segment
    /// length.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_segment_len(limit, DEFAULT_SEGMENT_LEN)
    }

    /// Builds the table with an explicit segment length (correctness does
    /// not depend on it; exposed for tests and tuning).
    pub fn build_with_segment_len(limit: u64, segment_len: usize) -> Result<Self> {
        let mut table = Self::empty_checked(limit)?;
        let segment_len = segment_len.max(64);

        // Base primes up to √limit by a small flat sieve.
        let root = (limit as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root);

        // Walk [2, limit] in fixed-size windows, crossing off multiples of
        // each base prime starting at max(p², first multiple in window).
        let mut composite = vec![false; segment_len];
        let mut lo = 2u64;
        while lo <= limit {
            let hi = (lo + segment_len as u64 - 1).min(limit); // inclusive
            composite[..(hi - lo + 1) as usize].fill(false);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let mut start = p * p;
                if start < lo {
                    start = lo.div_ceil(p) * p;
                }
                let mut m = start;
                while m <= hi {
                    composite[(m - lo) as usize] = true;
                    m += p;
                }
            }
            for n in lo..=hi {
                if !composite[(n - lo) as usize] {
                    table.set(n);
                }
            }
            lo = hi + 1;
        }
        Ok(table)
    }

    /// Reference builder: one flat boolean array, no segmentation. Exists to
    /// pin the segmented path (the two must produce bit-identical tables).
    pub fn build_monolithic(limit: u64) -> Result<Self> {
        let mut table = Self::empty_checked(limit)?;
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut p = 2usize;
        while p * p <= n {
            if !composite[p] {
                let mut m = p * p;
                while m <= n {
                    composite[m] = true;
                    m += p;
                }
            }
            p += 1;
        }
        for (i, &c) in composite.iter().enumerate().skip(2) {
            if !c {
                table.set(i as u64);
            }
        }
        Ok(table)
    }

    fn empty_checked(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_LIMIT {
            return Err(Error::ResourceLimit { what: "sieve limit", requested: limit, cap: MAX_LIMIT });
        }
        numeric::check_budget(limit / 8 + 8)?;
        let words = vec![0u64; (limit / 64 + 1) as usize];
        Ok(Self { limit, words })
    }

    #[inline]
    fn set(&mut self, n: u64) {
        self.words[(n / 64) as usize] |= 1u64 << (n % 64);
    }

    /// Upper bound N of the table.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Whether `n` is prime. Panics if `n > limit`.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "primality query {n} beyond table limit {}", self.limit);
        self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// π(limit): number of primes in the table.
    pub fn count_primes(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Iterates the primes in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * 64;
            BitIter(w).map(move |b| base + b)
        })
    }

    /// Largest prime ≤ limit (None never occurs in practice since limit ≥ 2).
    pub fn largest_prime(&self) -> Option<u64> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                let top = 63 - w.leading_zeros() as u64;
                return Some(i as u64 * 64 + top);
            }
        }
        None
    }
}

/// Iterator over set bit positions of one word, ascending.
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as u64;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Plain flat sieve used for base primes (√N is always small here).
fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Von Mangoldt weights Λ over `{0..=limit}`: `log p` at every prime power
/// `p^j ≤ limit`, zero elsewhere.
///
/// Stored dense (`f64` per integer) for O(1) lookup in correlation loops,
/// plus a sorted list of the support (the prime powers) so sparse iteration
/// doesn't have to scan zeros. ψ(N) = Σ Λ(n) is exposed for sanity checks:
/// by the prime number theorem ψ(N)/N → 1.
#[derive(Debug, Clone)]
pub struct LambdaWeights {
    limit: u64,
    weights: Vec<f64>,
    support: Vec<u32>,
}

impl LambdaWeights {
    /// Computes the weights from a finished primality table.
    pub fn build(table: &PrimeTable) -> Result<Self> {
        let limit = table.limit();
        numeric::check_budget((limit + 1) * 8 + limit / 2)?;
        let mut weights = vec![0.0f64; (limit + 1) as usize];
        let mut support = Vec::new();
        for p in table.primes() {
            let logp = (p as f64).ln();
            let mut q = p;
            loop {
                weights[q as usize] = logp;
                support.push(q as u32);
                match q.checked_mul(p) {
                    Some(next) if next <= limit => q = next,
                    _ => break,
                }
            }
        }
        support.sort_unstable();
        Ok(Self { limit, weights, support })
    }

    /// Convenience: sieve and weigh in one call.
    pub fn for_limit(limit: u64) -> Result<Self> {
        Self::build(&PrimeTable::build(limit)?)
    }

    /// Upper bound N.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Λ(n). Panics if `n > limit`.
    #[inline]
    pub fn weight(&self, n: u64) -> f64 {
        self.weights[n as usize]
    }

    /// Dense weights indexed by n, `0..=limit` (index 0 and 1 are zero).
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Sorted prime powers ≤ limit (the support of Λ).
    pub fn support(&self) -> &[u32] {
        &self.support
    }

    /// Chebyshev ψ(limit) = Σ_{n ≤ limit} Λ(n), by pairwise summation.
    pub fn psi(&self) -> f64 {
        let terms: Vec<f64> = self.support.iter().map(|&n| self.weights[n as usize]).collect();
        pairwise_sum(&terms)
    }
}

/// Counts primes ≤ N in each residue class mod `m`:
/// `counts[r] = #{p ≤ N prime : p ≡ r (mod m)}`.
///
/// The counts sum to π(N) by construction. For odd prime `m`, all but the
/// class of 0 receive asymptotically equal shares (Dirichlet).
pub fn prime_residue_counts(table: &PrimeTable, m: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
    }
    let mut counts = vec![0u64; m as usize];
    for p in table.primes() {
        counts[(p % m) as usize] += 1;
    }
    Ok(counts)
}
