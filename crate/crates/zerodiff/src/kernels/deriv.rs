//! Closed-form derivatives of the mollifier g(x) = c exp(-1/(1-x^2)) on (-1,1).
//!
//! Every derivative has the shape
//!
//! ```text
//! g^(k)(x) = c * P_k(x) / (1-x^2)^(2k) * exp(-1/(1-x^2)),
//! ```
//!
//! where P_k is a polynomial with exact integer coefficients, deg P_k <= 3k.
//! Differentiating the representation once gives the recurrence
//!
//! ```text
//! P_{k+1}(x) = P_k'(x) (1-x^2)^2 + 2x P_k(x) (2k(1-x^2) - 1),    P_0 = 1,
//! ```
//!
//! so P_1 = -2x, P_2 = 6x^4 - 2, ... Coefficients grow roughly like 4^k k!
//! and overflow i64 quickly; they are built once in exact big-integer
//! arithmetic and mirrored to f64 for evaluation. Evaluation happens in
//! log-magnitude form because g^(k) spans hundreds of orders of magnitude
//! across its support at large k.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::sync::OnceLock;

/// Largest supported derivative order.
pub const K_MAX: usize = 60;

/// Normalization c = 1 / int_{-1}^{1} exp(-1/(1-x^2)) dx.
pub const NORMALIZATION: f64 = 2.252283621043581;

const LN_NORMALIZATION: f64 = 0.811944644196272; // ln(NORMALIZATION)

/// Exact numerator polynomial of g^(k): order, integer coefficients
/// (ascending powers), and the f64 mirror used for evaluation. The
/// denominator exponent is 2k by construction.
#[derive(Debug, Clone)]
pub struct DerivativeRep {
    order: usize,
    numerator: Vec<BigInt>,
    numerator_f64: Vec<f64>,
}

impl DerivativeRep {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator_exponent(&self) -> usize {
        2 * self.order
    }

    /// Horner evaluation of P_k at x.
    pub fn numerator_at(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.numerator_f64.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

fn poly_derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![BigInt::from(0)];
    }
    (1..p.len()).map(|i| &p[i] * BigInt::from(i)).collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::from(0);
    (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
        .collect()
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last() == Some(&BigInt::from(0)) {
        p.pop();
    }
    p
}

fn build_reps() -> Vec<DerivativeRep> {
    let mut reps: Vec<DerivativeRep> = Vec::with_capacity(K_MAX + 1);
    let mut p = vec![BigInt::from(1)];
    for k in 0..=K_MAX {
        let numerator_f64: Vec<f64> = p
            .iter()
            .map(|c| {
                let s = c.to_string();
                s.parse::<f64>().unwrap()
            })
            .collect();
        reps.push(DerivativeRep {
            order: k,
            numerator: p.clone(),
            numerator_f64,
        });
        if k == K_MAX {
            break;
        }
        // (1-x^2)^2 and 2x(2k(1-x^2) - 1) as coefficient vectors
        let u2 = [
            BigInt::from(1),
            BigInt::from(0),
            BigInt::from(-2),
            BigInt::from(0),
            BigInt::from(1),
        ];
        let lin = [
            BigInt::from(0),
            BigInt::from(4 * k as i64 - 2),
            BigInt::from(0),
            BigInt::from(-4 * k as i64),
        ];
        let next = poly_add(&poly_mul(&poly_derivative(&p), &u2), &poly_mul(&p, &lin));
        p = trim(next);
    }
    reps
}

fn reps() -> &'static [DerivativeRep] {
    static REPS: OnceLock<Vec<DerivativeRep>> = OnceLock::new();
    REPS.get_or_init(build_reps)
}

/// Access the exact representation of g^(k).
pub fn derivative_rep(k: usize) -> Result<&'static DerivativeRep> {
    reps()
        .get(k)
        .ok_or_else(|| Error::Domain(format!("derivative order {k} exceeds cap {K_MAX}")))
}

/// g^(k)(x) times exp(log_scale), assembled in log-magnitude form so large
/// prefactors (the m^(k+1) of rescaled kernels) cannot blow up intermediates.
/// Exactly 0 outside (-1, 1) and wherever the exponential factor underflows;
/// an overflow error if the scaled value exceeds f64 range.
pub(crate) fn g_deriv_scaled(k: usize, x: f64, log_scale: f64) -> Result<f64> {
    let rep = derivative_rep(k)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite evaluation point {x}")));
    }
    if x.abs() >= 1.0 {
        return Ok(0.0);
    }
    let u = 1.0 - x * x;
    let inv = 1.0 / u;
    if inv - log_scale > 745.0 {
        // exp(-1/u) underflows past any polynomially bounded numerator
        return Ok(0.0);
    }
    let p = rep.numerator_at(x);
    if p == 0.0 {
        return Ok(0.0);
    }
    let log_mag = LN_NORMALIZATION + p.abs().ln() - 2.0 * k as f64 * u.ln() - inv + log_scale;
    if log_mag > 709.0 {
        return Err(Error::Domain(format!(
            "g^({k})({x}) overflows the log-scale guard (exponent {log_mag:.1})"
        )));
    }
    if log_mag < -745.0 {
        return Ok(0.0);
    }
    Ok(p.signum() * log_mag.exp())
}

/// g^(k)(x).
pub fn g_deriv(k: usize, x: f64) -> Result<f64> {
    g_deriv_scaled(k, x, 0.0)
}

/// g(x) itself.
pub fn g(x: f64) -> f64 {
    g_deriv(0, x).expect("order 0 cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_numerators() {
        let r0 = derivative_rep(0).unwrap();
        assert_eq!(r0.numerator(), &[BigInt::from(1)]);
        let r1 = derivative_rep(1).unwrap();
        assert_eq!(r1.numerator(), &[BigInt::from(0), BigInt::from(-2)]);
        assert_eq!(r1.denominator_exponent(), 2);
        // P_2 = -2 + 6x^4
        let r2 = derivative_rep(2).unwrap();
        assert_eq!(
            r2.numerator(),
            &[
                BigInt::from(-2),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(6)
            ]
        );
    }

    #[test]
    fn degree_bound() {
        for k in 0..=K_MAX {
            let rep = derivative_rep(k).unwrap();
            assert!(rep.numerator().len() <= 3 * k + 1, "deg P_{k} > 3k");
        }
    }

    #[test]
    fn peak_and_support() {
        assert!((g(0.0) - NORMALIZATION * (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(g(1.0), 0.0);
        assert_eq!(g(-1.0), 0.0);
        assert_eq!(g(7.3), 0.0);
        assert_eq!(g_deriv(17, 0.9999999999).unwrap(), 0.0); // underflow region
    }

    #[test]
    fn normalization_against_quadrature_oracle() {
        // Composite Simpson with Richardson refinement, independent of the
        // Gauss-Kronrod module.
        fn simpson(n: usize) -> f64 {
            let h = 2.0 / n as f64;
            let f = |x: f64| {
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - x * x)).exp()
                }
            };
            let mut s = 0.0;
            for i in 0..n {
                let a = -1.0 + i as f64 * h;
                s += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
            }
            s
        }
        let s1 = simpson(1 << 12);
        let s2 = simpson(1 << 13);
        let integral = (16.0 * s2 - s1) / 15.0;
        assert!((1.0 / integral - NORMALIZATION).abs() < 1e-12);
        // and int g = 1 with the stored constant
        let (total, _) = crate::quad::adaptive(|x| g(x), -1.0, 1.0, 1e-12).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parity() {
        for k in 0..=20usize {
            for &x in &[0.05, 0.3, 0.62, 0.9] {
                let plus = g_deriv(k, x).unwrap();
                let minus = g_deriv(k, -x).unwrap();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(minus, sign * plus, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn finite_difference_oracle() {
        // g^(k) vs Richardson-extrapolated central differences of g^(k-1),
        // relative to the derivative's own scale.
        let xs = [-0.83, -0.41, -0.17, 0.09, 0.33, 0.57, 0.71];
        for k in 1..=6usize {
            let scale = xs
                .iter()
                .map(|&x| g_deriv(k, x).unwrap().abs())
                .fold(0.0f64, f64::max);
            for &x in &xs {
                let exact = g_deriv(k, x).unwrap();
                let d = |h: f64| {
                    (g_deriv(k - 1, x + h).unwrap() - g_deriv(k - 1, x - h).unwrap()) / (2.0 * h)
                };
                let h = 1e-3;
                let (d1, d2, d4) = (d(h), d(h / 2.0), d(h / 4.0));
                let r1 = (4.0 * d2 - d1) / 3.0;
                let r2 = (4.0 * d4 - d2) / 3.0;
                let fd = (16.0 * r2 - r1) / 15.0;
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1e-3 * scale),
                    "k={k} x={x}: fd={fd:e} exact={exact:e}"
                );
            }
        }
    }

    #[test]
    fn overflow_guard_reports() {
        // a huge rescaling prefactor pushes the value past f64 range
        let r = g_deriv_scaled(60, 0.3, 61.0 * 1e6f64.ln());
        assert!(matches!(r, Err(Error::Domain(_))), "got {r:?}");
    }
}
