//! Smooth compactly supported test kernels: the normalized bump g, its
//! concentrated rescalings, and the two-bump difference kernel
//!
//! ```text
//! h_m(x) = m ( g(m(x - alpha)) - g(m(x - beta)) ),
//! h_m^(k)(x) = m^(k+1) ( g^(k)(m(x-alpha)) - g^(k)(m(x-beta)) ),
//! ```
//!
//! supported on [alpha - 1/m, alpha + 1/m] u [beta - 1/m, beta + 1/m] with
//! integral exactly zero (each bump integrates to one).

pub mod deriv;

pub use deriv::{derivative_rep, g, g_deriv, DerivativeRep, K_MAX, NORMALIZATION};

use crate::error::{Error, Result};
use serde::Serialize;

/// Difference of two concentrated mollifier bumps at `alpha` and `beta`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BumpKernel {
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
    /// Normalization constant of the underlying bump (1/int exp(-1/(1-x^2))).
    pub c: f64,
}

/// Outcome of the test-class membership check, with named violations.
#[derive(Debug, Clone)]
pub struct H0Report {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl BumpKernel {
    pub fn new(alpha: f64, beta: f64, m: u32) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "kernel centers must be finite, got alpha={alpha} beta={beta}"
            )));
        }
        if m < 1 {
            return Err(Error::Domain("concentration m must be >= 1".into()));
        }
        Ok(Self {
            alpha,
            beta,
            m,
            c: NORMALIZATION,
        })
    }

    /// Support windows [alpha -+ 1/m] and [beta -+ 1/m].
    pub fn support(&self) -> [(f64, f64); 2] {
        let w = 1.0 / self.m as f64;
        [
            (self.alpha - w, self.alpha + w),
            (self.beta - w, self.beta + w),
        ]
    }

    /// h_m^(k)(x). Exactly 0 outside the support.
    pub fn eval(&self, k: usize, x: f64) -> Result<f64> {
        let m = self.m as f64;
        let log_scale = (k as f64 + 1.0) * m.ln();
        let a = deriv::g_deriv_scaled(k, m * (x - self.alpha), log_scale)?;
        let b = deriv::g_deriv_scaled(k, m * (x - self.beta), log_scale)?;
        Ok(a - b)
    }

    /// Membership in the class of admissible test kernels: mean zero holds by
    /// construction, the support must exclude a neighbourhood of 0, and the
    /// two bumps must not overlap. The Fourier-decay requirement holds for
    /// any C-infinity compactly supported function and is recorded as an
    /// analytic fact rather than computed.
    pub fn validate_h0(&self) -> H0Report {
        let mut diagnostics = Vec::new();
        if self.alpha == self.beta {
            diagnostics.push(
                "alpha == beta: the two bumps cancel exactly; kernel is identically zero"
                    .to_string(),
            );
            return H0Report {
                valid: true,
                diagnostics,
            };
        }
        let m = self.m as f64;
        let w = 1.0 / m;
        let mut valid = true;
        if self.alpha - w <= 0.0 {
            valid = false;
            diagnostics.push(format!(
                "support touches 0: alpha - 1/m = {} <= 0 (need m > 1/alpha)",
                self.alpha - w
            ));
        }
        if self.beta - w <= 0.0 {
            valid = false;
            diagnostics.push(format!(
                "support touches 0: beta - 1/m = {} <= 0 (need m > 1/beta)",
                self.beta - w
            ));
        }
        if (self.alpha - self.beta).abs() <= 2.0 * w {
            valid = false;
            diagnostics.push(format!(
                "bump supports overlap: |alpha - beta| = {} <= 2/m = {}",
                (self.alpha - self.beta).abs(),
                2.0 * w
            ));
        }
        diagnostics.push("Fourier decay: holds analytically for C^inf compact support".into());
        H0Report { valid, diagnostics }
    }
}
