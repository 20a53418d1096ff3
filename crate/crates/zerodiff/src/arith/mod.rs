//! Sieved multiplicative-function tables and direct Dirichlet-series
//! evaluators valid in Re s > 1.
//!
//! The tables hold, for 1 <= n <= N:
//!
//! * `lambda[n]` — the von Mangoldt function, log p when n = p^k, else 0;
//! * `mu[n]`     — the Moebius function;
//! * `phi[n]`    — Euler's totient;
//! * `bcoef[n]`  — b_n = mu(ker n) * phi(ker n), where ker n is the radical
//!   (product of distinct primes dividing n).
//!
//! Since ker n is squarefree, b_n = prod_{p | n} (1 - p); all b_n are exact
//! 64-bit integers and satisfy |b_n| <= n together with the divisor identity
//! sum_{m | k} (k/m) b_m = 1 for every k.

pub mod primes;
pub mod series;

use crate::error::{Error, Result};

/// Hard cap on table size; above this the dense arrays (~26 bytes/entry)
/// stop being a sensible way to spend memory.
pub const MAX_TABLE_N: u64 = 1 << 27;

/// Dense tables of Lambda, mu, phi and b up to a bound N. Immutable after
/// construction; all evaluators borrow it read-only.
#[derive(Debug, Clone)]
pub struct ArithTables {
    limit: u64,
    lambda: Vec<f64>,
    mu: Vec<i8>,
    phi: Vec<u64>,
    bcoef: Vec<i64>,
}

impl ArithTables {
    /// Sieve all tables up to `n` (inclusive) with a linear sieve.
    pub fn build(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("table limit must be >= 2, got {n}")));
        }
        if n > MAX_TABLE_N {
            return Err(Error::Capacity(format!(
                "table limit {n} exceeds memory budget {MAX_TABLE_N}"
            )));
        }
        let n = n as usize;
        let mut spf = vec![0u32; n + 1]; // smallest prime factor
        let mut primes: Vec<u32> = Vec::new();
        let mut mu = vec![0i8; n + 1];
        let mut phi = vec![0u64; n + 1];
        let mut ker = vec![0u64; n + 1];
        mu[1] = 1;
        phi[1] = 1;
        ker[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                mu[i] = -1;
                phi[i] = i as u64 - 1;
                ker[i] = i as u64;
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                let ip = i * p;
                spf[ip] = p as u32;
                if i % p == 0 {
                    mu[ip] = 0;
                    phi[ip] = phi[i] * p as u64;
                    ker[ip] = ker[i];
                } else {
                    mu[ip] = -mu[i];
                    phi[ip] = phi[i] * (p as u64 - 1);
                    ker[ip] = ker[i] * p as u64;
                }
            }
        }

        // Lambda(p^k) = log p, marked directly over prime powers.
        let mut lambda = vec![0.0f64; n + 1];
        for &p in &primes {
            let logp = (p as f64).ln();
            let mut q = p as u64;
            while q <= n as u64 {
                lambda[q as usize] = logp;
                match q.checked_mul(p as u64) {
                    Some(next) => q = next,
                    None => break,
                }
            }
        }

        // b_n = mu(ker n) * phi(ker n); ker n squarefree so both factors are
        // already tabulated at index ker n.
        let mut bcoef = vec![0i64; n + 1];
        bcoef[1] = 1;
        for i in 2..=n {
            let k = ker[i] as usize;
            bcoef[i] = mu[k] as i64 * phi[k] as i64;
        }

        Ok(Self {
            limit: n as u64,
            lambda,
            mu,
            phi,
            bcoef,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Von Mangoldt Lambda(n).
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda[n as usize]
    }

    /// Moebius mu(n).
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// Euler totient phi(n).
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize]
    }

    /// b_n = mu(ker n) * phi(ker n).
    pub fn b(&self, n: u64) -> i64 {
        self.bcoef[n as usize]
    }

    /// sum_{m | k} (k/m) b_m in exact integer arithmetic.
    pub fn b_divisor_sum(&self, k: u64) -> i64 {
        let mut acc: i64 = 0;
        let mut d = 1u64;
        while d * d <= k {
            if k % d == 0 {
                acc += (k / d) as i64 * self.bcoef[d as usize];
                let e = k / d;
                if e != d {
                    acc += d as i64 * self.bcoef[e as usize];
                }
            }
            d += 1;
        }
        acc
    }
}

/// b_m for a single m, by trial factorization: prod_{p | m} (1 - p).
/// Used by the explicit-formula side, which only needs m up to its scaling
/// cutoff and should not depend on a prebuilt table.
pub fn b_coefficient(m: u64) -> i64 {
    debug_assert!(m >= 1);
    let mut rem = m;
    let mut b: i64 = 1;
    let mut p = 2u64;
    while p * p <= rem {
        if rem % p == 0 {
            b *= 1 - p as i64;
            while rem % p == 0 {
                rem /= p;
            }
        }
        p += 1;
    }
    if rem > 1 {
        b *= 1 - rem as i64;
    }
    b
}

/// Distinct prime divisors of q, ascending.
pub fn distinct_primes(q: u64) -> Vec<u64> {
    let mut rem = q;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= rem {
        if rem % p == 0 {
            out.push(p);
            while rem % p == 0 {
                rem /= p;
            }
        }
        p += 1;
    }
    if rem > 1 {
        out.push(rem);
    }
    out
}
