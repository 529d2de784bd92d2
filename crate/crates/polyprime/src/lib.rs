//! Exact prime-pair statistics against polynomial shift sets, and the
//! analytic predictions they converge to.
//!
//! Given an integer polynomial `f` with positive degree, this crate answers
//! three questions, exactly where exactness is possible and with stated
//! tolerances elsewhere:
//!
//! 1. **Counting** — how many ordered pairs of primes `(p1, p2)` up to `N`
//!    have `p1 − p2` (or more generally `a1·p1 + a2·p2`) landing in the
//!    value set `f(1), f(2), f(3), …`? Both a direct path and an
//!    FFT-autocorrelation fast path are provided, plus the log-weighted
//!    variant used by analytic arguments.
//! 2. **Predicting** — what does the circle-method heuristic say those
//!    counts should be? The leading term factors into a singular series
//!    (computed both as an Euler product over primes and as a slowly
//!    converging sum over moduli, which cross-check each other), a local
//!    bias factor per prime, and a geometric correction for general linear
//!    forms.
//! 3. **Verifying** — do the two sides actually meet? Diagnostics include
//!    an exact finite-Fourier identity check connecting the weighted count
//!    to exponential sums, and empirical prime-difference residue
//!    distributions compared against their predicted biases.
//!
//! The crate is deliberately exact-first: counts are integers, series terms
//! with rational values are computed in integer arithmetic, and every
//! floating-point shortcut (FFT path, quadrature) is pinned by a slower
//! exact or direct route in the test suite.

pub mod asymptotics;
pub mod counting;
pub mod diagnostics;
pub mod error;
pub mod numeric;
pub mod polynomial;
pub mod sieve;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use polynomial::{IntPolynomial, PolynomialImage};
pub use sieve::{LambdaWeights, PrimeTable};
