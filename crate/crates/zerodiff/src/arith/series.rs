//! Direct Dirichlet-series evaluation of
//!
//! * K(s)      = sum Lambda^2(n) / n^s,
//! * K_chi(s)  = the same sum restricted to (n, q) = 1,
//! * W(s)      = sum Lambda(n) log n / n^s  (the second log-derivative of zeta),
//!
//! all absolutely convergent for Re s > 1. Sums run over prime powers via a
//! segmented sieve; nothing here needs the dense tables.
//!
//! # Truncation discipline
//!
//! Both coefficient families are bounded by Lambda(n) log n, so one tail bound
//! serves all three series. Partial summation against psi(t) = sum_{n<=t}
//! Lambda(n), with the Chebyshev bounds psi(t) <= 1.04 t (all t) and
//! psi(t) >= 0.9 t (t >= 100), gives for x >= 100, sigma > 1, a = sigma - 1,
//! L = log x:
//!
//! ```text
//! sum_{n > x} Lambda(n) log n / n^sigma
//!     <= x^(1-sigma) * ( 0.14 L  +  1.04 (L/a + 1/a^2) ).
//! ```
//!
//! The cutoff for a requested absolute tolerance eps inverts this bound. Every
//! evaluator returns the plain truncated sum (no tail correction is added) and
//! accumulates with compensated summation in a fixed order: primes ascending,
//! each prime's powers ascending.

use crate::arith::primes::for_each_prime;
use crate::error::{Error, Result};
use crate::kahan::KahanComplex;
use num_complex::Complex64;

/// Evaluators require Re s >= 1 + SIGMA_MIN.
pub const SIGMA_MIN: f64 = 0.1;

/// Largest cutoff the segmented sieve is allowed to walk per evaluation.
pub const MAX_SERIES_CUTOFF: u64 = 1 << 32;

/// Upper bound on sum_{n > x} Lambda(n) log n / n^sigma (hence also on the
/// K and K_chi tails). Requires x >= 100 and sigma > 1.
pub fn tail_bound(x: u64, sigma: f64) -> f64 {
    debug_assert!(x >= 100 && sigma > 1.0);
    let l = (x as f64).ln();
    let a = sigma - 1.0;
    (x as f64).powf(1.0 - sigma) * (0.14 * l + 1.04 * (l / a + 1.0 / (a * a)))
}

/// Smallest cutoff x with tail_bound(x, sigma) < eps.
pub fn required_cutoff(sigma: f64, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if sigma < 1.0 + SIGMA_MIN {
        return Err(Error::Domain(format!(
            "Re s = {sigma} below convergence margin {}",
            1.0 + SIGMA_MIN
        )));
    }
    let mut lo = 100u64;
    if tail_bound(lo, sigma) < eps {
        return Ok(lo);
    }
    let mut hi = lo;
    loop {
        hi = hi.saturating_mul(2);
        if hi > MAX_SERIES_CUTOFF {
            return Err(Error::Domain(format!(
                "tolerance {eps:.3e} at Re s = {sigma} needs a cutoff past {MAX_SERIES_CUTOFF}"
            )));
        }
        if tail_bound(hi, sigma) < eps {
            break;
        }
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(mid, sigma) < eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Coeff {
    /// Lambda^2(p^k) = log^2 p
    LambdaSquared,
    /// Lambda(p^k) log(p^k) = k log^2 p
    LambdaLog,
}

/// Truncated sum over prime powers n = p^k <= cutoff, evaluated at
/// s = sigma + i*t for every t in `ts` in one sieve pass.
fn prime_power_sum(
    coeff: Coeff,
    skip_primes_of: u64,
    sigma: f64,
    ts: &[f64],
    cutoff: u64,
) -> Vec<Complex64> {
    let mut acc = vec![KahanComplex::new(); ts.len()];
    for_each_prime(2, cutoff, |p| {
        if skip_primes_of != 0 && skip_primes_of % p == 0 {
            return;
        }
        let lp = (p as f64).ln();
        let lp2 = lp * lp;
        let mut k = 1u32;
        let mut pk = p;
        loop {
            let ln_n = k as f64 * lp;
            let c = match coeff {
                Coeff::LambdaSquared => lp2,
                Coeff::LambdaLog => k as f64 * lp2,
            };
            let mag = c * (-sigma * ln_n).exp();
            for (a, &t) in acc.iter_mut().zip(ts) {
                let (sin, cos) = (t * ln_n).sin_cos();
                a.add(Complex64::new(mag * cos, -mag * sin));
            }
            match pk.checked_mul(p) {
                Some(next) if next <= cutoff => {
                    pk = next;
                    k += 1;
                }
                _ => break,
            }
        }
    });
    acc.into_iter().map(|a| a.value()).collect()
}

fn validate_s(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re < 1.0 + SIGMA_MIN {
        return Err(Error::Domain(format!(
            "Re s = {} below convergence margin {}",
            s.re,
            1.0 + SIGMA_MIN
        )));
    }
    Ok(())
}

/// K(s) = sum Lambda^2(n)/n^s truncated so the tail bound is below `eps`.
pub fn k_series(s: Complex64, eps: f64) -> Result<Complex64> {
    Ok(k_series_grid(s.re, &[s.im], eps)?[0])
}

/// K(sigma + i t) for several t sharing one sieve pass.
pub fn k_series_grid(sigma: f64, ts: &[f64], eps: f64) -> Result<Vec<Complex64>> {
    validate_s(Complex64::new(sigma, 0.0))?;
    let cutoff = required_cutoff(sigma, eps)?;
    Ok(prime_power_sum(Coeff::LambdaSquared, 0, sigma, ts, cutoff))
}

/// K(s) truncated at an explicit prime-power cutoff (no tolerance logic).
pub fn k_series_truncated(s: Complex64, cutoff: u64) -> Complex64 {
    prime_power_sum(Coeff::LambdaSquared, 0, s.re, &[s.im], cutoff)[0]
}

/// K_chi(s) = sum over (n, q) = 1 of Lambda^2(n)/n^s. Depends on q only.
pub fn k_chi_series(q: u64, s: Complex64, eps: f64) -> Result<Complex64> {
    if q < 1 {
        return Err(Error::Domain("modulus q must be >= 1".into()));
    }
    validate_s(s)?;
    let cutoff = required_cutoff(s.re, eps)?;
    Ok(prime_power_sum(Coeff::LambdaSquared, q, s.re, &[s.im], cutoff)[0])
}

/// W(s) = (zeta'/zeta)'(s) = sum Lambda(n) log n / n^s, truncated to `eps`.
pub fn w_series(s: Complex64, eps: f64) -> Result<Complex64> {
    validate_s(s)?;
    let cutoff = required_cutoff(s.re, eps)?;
    Ok(prime_power_sum(Coeff::LambdaLog, 0, s.re, &[s.im], cutoff)[0])
}

/// W(s) truncated at an explicit cutoff.
pub fn w_series_truncated(s: Complex64, cutoff: u64) -> Complex64 {
    prime_power_sum(Coeff::LambdaLog, 0, s.re, &[s.im], cutoff)[0]
}
