//! Explicit-formula evaluators over a zero table.
//!
//! Everything here reduces to one core quantity. For a power p >= 2 and a
//! point z to the right of the critical line,
//!
//! ```text
//! core(p, z) = 1/(z-1)^p - sum*_rho 1/(z - rho)^p,
//! ```
//!
//! where the starred sum runs over all zeta zeros: nontrivial rho = 1/2 +- i
//! gamma (table entries below the configured cutoff, a zero-density integral
//! correction beyond), and trivial rho = -2, -4, ... (a trigamma closed form
//! at p = 2, an Euler-Maclaurin tail otherwise).
//!
//! From it:
//!
//! * W^(k)(s) = (-1)^k (k+1)! core(k+2, s) — derivatives of (zeta'/zeta)';
//! * K(s)     = sum_{m<=M} b_m core(2, m s) + O(M 2^(-sigma M)) — the
//!   meromorphic continuation of sum Lambda^2(n)/n^s;
//! * D(t)     = 2 Re K(1+it) — the discrepancy density of unnormalized zero
//!   differences;
//! * H_k(t)   = -Re core(k+2, 1+it) / 2^(k+2) — normalized so that, with all
//!   relevant zeros on the critical line, H_k(t) -> multiplicity of the zero
//!   at 1/2 + it as k grows.
//!
//! Nontrivial-zero truncation is never silent: each evaluation carries an
//! error budget combining the continuation remainder M 2^(-sigma M), the
//! density-integral fluctuation allowance (|S(T)| <= 2.8 at table heights),
//! and the trivial/tail quadrature slack.

pub mod trigamma;

use crate::arith::{b_coefficient, distinct_primes};
use crate::error::{Error, Result};
use crate::kahan::{KahanComplex, KahanSum};
use crate::quad::adaptive_to_infinity;
use crate::zerodata::ZeroTable;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Empirical bound on |N(T) - smooth count| across the heights this crate
/// certifies; enters the fluctuation part of error budgets.
const S_FLUCTUATION: f64 = 2.8;

/// Chunk width for deterministic parallel reductions over zeros.
const ZERO_CHUNK: usize = 8192;

/// How the trivial-zero sum at p = 2 is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrivialMode {
    /// (1/4) psi_1(z/2 + 1).
    ClosedForm,
    /// Direct summation with an Euler-Maclaurin tail.
    DirectSum,
}

/// Truncation parameters for the explicit-formula evaluators.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExplicitConfig {
    /// Scaling cutoff M in the b_m expansion of K (>= 4).
    pub scaling_cutoff: u32,
    /// Minimum |t| accepted by the density evaluator (pole exclusion).
    pub t_floor: f64,
    /// Trivial-zero summation mode.
    pub trivial_mode: TrivialMode,
    /// Fraction of gamma_max beyond which |Im s| is refused.
    pub gamma_guard: f64,
    /// Use table zeros with gamma <= this; the density integral covers the
    /// rest. None means the whole table.
    pub zero_cutoff: Option<f64>,
}

impl Default for ExplicitConfig {
    fn default() -> Self {
        Self {
            scaling_cutoff: 12,
            t_floor: 0.05,
            trivial_mode: TrivialMode::ClosedForm,
            gamma_guard: 0.8,
            zero_cutoff: None,
        }
    }
}

impl ExplicitConfig {
    fn validate(&self) -> Result<()> {
        if self.scaling_cutoff < 4 {
            return Err(Error::Domain(format!(
                "scaling cutoff M must be >= 4, got {}",
                self.scaling_cutoff
            )));
        }
        if !(self.gamma_guard > 0.0 && self.gamma_guard <= 1.0) {
            return Err(Error::Domain(format!(
                "gamma guard must lie in (0, 1], got {}",
                self.gamma_guard
            )));
        }
        if !(self.t_floor > 0.0) {
            return Err(Error::Domain(format!(
                "t floor must be positive, got {}",
                self.t_floor
            )));
        }
        Ok(())
    }
}

/// A value together with its reported error budget.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub value: Complex64,
    pub budget: f64,
    /// b_m core(2, m s) for m = 1..=M (K evaluations only).
    pub per_m: Vec<Complex64>,
}

/// Multiplicity-detector outcome.
#[derive(Debug, Clone, Serialize)]
pub struct DetectReport {
    pub multiplicity: i64,
    pub converged_at: u32,
    /// (k, H_k(alpha) - H_k(beta)) for the whole sweep.
    pub trace: Vec<(u32, f64)>,
    pub truncation_budget: f64,
}

/// Density profile over a uniform grid, with optional per-m decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Row per grid point, column per m when requested.
    pub per_m: Option<Vec<Vec<f64>>>,
    pub config: ExplicitConfig,
    pub zero_count: usize,
    pub gamma_max: f64,
}

impl DensityProfile {
    /// CSV with header "t,D" (plus "m1,..." columns when per_m is present),
    /// full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("t,D");
        if let Some(pm) = &self.per_m {
            for m in 1..=pm.first().map_or(0, Vec::len) {
                out.push_str(&format!(",m{m}"));
            }
        }
        out.push('\n');
        for (i, (&t, &d)) in self.grid.iter().zip(&self.values).enumerate() {
            out.push_str(&format!("{t:.16e},{d:.16e}"));
            if let Some(pm) = &self.per_m {
                for v in &pm[i] {
                    out.push_str(&format!(",{v:.16e}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Explicit-formula evaluator bound to a zero table and a configuration.
pub struct Explicit<'a> {
    zt: &'a ZeroTable,
    cfg: ExplicitConfig,
    /// index past the last table zero actually used (cutoff applied)
    used: usize,
    /// height at which the density-integral tail takes over
    tail_from: f64,
}

impl<'a> Explicit<'a> {
    pub fn new(zt: &'a ZeroTable, cfg: ExplicitConfig) -> Result<Self> {
        cfg.validate()?;
        let tail_from = match cfg.zero_cutoff {
            Some(c) if c < zt.gamma_max() => c.max(0.0),
            _ => zt.gamma_max(),
        };
        let used = zt.ordinates().partition_point(|&g| g <= tail_from);
        if used == 0 {
            return Err(Error::Domain(format!(
                "zero cutoff {tail_from} leaves no table zeros"
            )));
        }
        Ok(Self {
            zt,
            cfg,
            used,
            tail_from,
        })
    }

    pub fn config(&self) -> &ExplicitConfig {
        &self.cfg
    }

    pub fn table(&self) -> &ZeroTable {
        self.zt
    }

    fn guard_im(&self, im: f64) -> Result<()> {
        let lim = self.cfg.gamma_guard * self.zt.gamma_max();
        if im.abs() > lim {
            return Err(Error::Domain(format!(
                "|Im s| = {} beyond guard {} (= {} of table height)",
                im.abs(),
                lim,
                self.cfg.gamma_guard
            )));
        }
        Ok(())
    }

    /// Nontrivial table sum at p = 2: sum over used zeros of
    /// (z - 1/2 - i g)^-2 + (z - 1/2 + i g)^-2, deterministic chunked Kahan.
    fn zero_sum_p2(&self, z: Complex64) -> Complex64 {
        let c = z - 0.5;
        let zeros = &self.zt.ordinates()[..self.used];
        let chunks: Vec<KahanComplex> = zeros
            .par_chunks(ZERO_CHUNK)
            .map(|chunk| {
                let mut acc = KahanComplex::new();
                for &g in chunk {
                    let w1 = Complex64::new(c.re, c.im - g);
                    let w2 = Complex64::new(c.re, c.im + g);
                    acc.add((w1 * w1).finv());
                    acc.add((w2 * w2).finv());
                }
                acc
            })
            .collect();
        let mut total = KahanComplex::new();
        for ch in chunks {
            total.merge(ch);
        }
        total.value()
    }

    /// Nontrivial table sum at general p via polar powers.
    fn zero_sum_pow(&self, p: u32, z: Complex64) -> Complex64 {
        let c = z - 0.5;
        let zeros = &self.zt.ordinates()[..self.used];
        let pf = f64::from(p);
        let chunks: Vec<KahanComplex> = zeros
            .par_chunks(ZERO_CHUNK)
            .map(|chunk| {
                let mut acc = KahanComplex::new();
                for &g in chunk {
                    for w in [
                        Complex64::new(c.re, c.im - g),
                        Complex64::new(c.re, c.im + g),
                    ] {
                        let (r, th) = w.to_polar();
                        let mag = (-pf * r.ln()).exp();
                        let (s, co) = (-pf * th).sin_cos();
                        acc.add(Complex64::new(mag * co, mag * s));
                    }
                }
                acc
            })
            .collect();
        let mut total = KahanComplex::new();
        for ch in chunks {
            total.merge(ch);
        }
        total.value()
    }

    /// Density-integral correction for zeros above the cutoff:
    /// int_U^inf log(u/2pi)/(2pi) [ (z-1/2-iu)^-p + (z-1/2+iu)^-p ] du.
    fn zero_tail(&self, p: u32, z: Complex64) -> Result<Complex64> {
        let u0 = self.tail_from;
        let c = z - 0.5;
        let pf = f64::from(p);
        let f = move |u: f64| {
            let dens = (u / (2.0 * PI)).ln() / (2.0 * PI);
            let w1 = Complex64::new(c.re, c.im - u);
            let w2 = Complex64::new(c.re, c.im + u);
            let pw = |w: Complex64| {
                let (r, th) = w.to_polar();
                let mag = (-pf * r.ln()).exp();
                let (s, co) = (-pf * th).sin_cos();
                Complex64::new(mag * co, mag * s)
            };
            dens * (pw(w1) + pw(w2))
        };
        // scale tolerance to the first-order size of the integral
        let rough = ((u0 / (2.0 * PI)).ln() / (2.0 * PI))
            * 2.0
            / ((pf - 1.0) * (c.re * c.re + (u0 - c.im.abs()).max(1.0).powi(2)).sqrt().powi(p as i32 - 1));
        let tol = 1e-14 + 1e-8 * rough.abs();
        let (v, _) = adaptive_to_infinity(f, u0, tol)?;
        Ok(v)
    }

    /// Fluctuation allowance for replacing the discrete zeros above the
    /// cutoff by the smooth density: |S| * (boundary term + total variation).
    fn zero_tail_fluctuation(&self, p: u32, z: Complex64) -> f64 {
        let u0 = self.tail_from;
        let c = z - 0.5;
        let d1 = (c.re * c.re + (c.im - u0) * (c.im - u0)).sqrt();
        let d2 = (c.re * c.re + (c.im + u0) * (c.im + u0)).sqrt();
        let boundary = d1.powi(-(p as i32)) + d2.powi(-(p as i32));
        let tv = if c.im.abs() > u0 {
            // kernel peak lies beyond the table: full excursion allowance
            4.0 * c.re.powi(-(p as i32))
        } else {
            2.0 * boundary
        };
        S_FLUCTUATION * (boundary + tv)
    }

    /// Trivial-zero sum sum_{j>=1} (z + 2j)^-2.
    fn trivial_sum_p2(&self, z: Complex64) -> Complex64 {
        match self.cfg.trivial_mode {
            TrivialMode::ClosedForm => 0.25 * trigamma::trigamma(0.5 * z + 1.0),
            TrivialMode::DirectSum => trivial_sum_direct(2, z),
        }
    }

    /// Trivial-zero sum at general p (always Euler-Maclaurin; converges fast).
    fn trivial_sum_pow(&self, p: u32, z: Complex64) -> Complex64 {
        if p == 2 {
            return self.trivial_sum_p2(z);
        }
        trivial_sum_direct(p, z)
    }

    /// core(p, z) = (z-1)^-p - sum*_rho (z-rho)^-p, plus its fluctuation budget.
    fn core(&self, p: u32, z: Complex64) -> Result<(Complex64, f64)> {
        let pole = (z - 1.0).powi(-(p as i32));
        let nt = if p == 2 {
            self.zero_sum_p2(z)
        } else {
            self.zero_sum_pow(p, z)
        };
        let tail = self.zero_tail(p, z)?;
        let triv = self.trivial_sum_pow(p, z);
        let fluct = self.zero_tail_fluctuation(p, z);
        Ok((pole - nt - tail - triv, fluct))
    }

    /// K(s) by the explicit formula, with per-m contributions and budget.
    pub fn k_explicit(&self, s: Complex64) -> Result<EvalReport> {
        if !(s.re > 0.5) {
            return Err(Error::Domain(format!(
                "explicit formula requires Re s > 1/2, got {}",
                s.re
            )));
        }
        self.guard_im(s.im)?;
        let m_max = self.cfg.scaling_cutoff;
        for m in 1..=m_max {
            let pole = Complex64::new(1.0 / f64::from(m), 0.0);
            if (s - pole).norm() <= 1e-6 {
                return Err(Error::Domain(format!(
                    "s = {s} within 1e-6 of the pole at 1/{m}"
                )));
            }
        }
        let mut value = KahanComplex::new();
        let mut per_m = Vec::with_capacity(m_max as usize);
        let mut budget = f64::from(m_max) * 2f64.powf(-s.re * f64::from(m_max));
        for m in 1..=m_max {
            let b = b_coefficient(u64::from(m)) as f64;
            let (core, fluct) = self.core(2, f64::from(m) * s)?;
            let contrib = b * core;
            per_m.push(contrib);
            value.add(contrib);
            budget += b.abs() * fluct;
        }
        let value = value.value();
        ensure_finite(value)?;
        Ok(EvalReport {
            value,
            budget,
            per_m,
        })
    }

    /// K_chi(s) = K(s) - sum_{p | q} log^2 p / (p^s - 1).
    pub fn k_chi_explicit(&self, q: u64, s: Complex64) -> Result<EvalReport> {
        if q < 1 {
            return Err(Error::Domain("modulus q must be >= 1".into()));
        }
        let mut rep = self.k_explicit(s)?;
        rep.value -= chi_correction(q, s);
        Ok(rep)
    }

    /// Discrepancy density D(t) = 2 Re K(1+it) (even in t).
    pub fn density(&self, t: f64) -> Result<f64> {
        if t.abs() < self.cfg.t_floor {
            return Err(Error::Domain(format!(
                "|t| = {} below the pole exclusion floor {}",
                t.abs(),
                self.cfg.t_floor
            )));
        }
        let rep = self.k_explicit(Complex64::new(1.0, t.abs()))?;
        Ok(2.0 * rep.value.re)
    }

    /// Density over a uniform grid [t_lo, t_hi] with step dt; grid points are
    /// computed independently and in parallel, so output is identical for any
    /// worker-thread count.
    pub fn density_profile(
        &self,
        t_lo: f64,
        t_hi: f64,
        dt: f64,
        with_per_m: bool,
    ) -> Result<DensityProfile> {
        if !(dt > 0.0) || t_hi < t_lo {
            return Err(Error::Domain(format!(
                "bad grid: [{t_lo}, {t_hi}] step {dt}"
            )));
        }
        let n = ((t_hi - t_lo) / dt).floor() as usize + 1;
        let grid: Vec<f64> = (0..n).map(|i| t_lo + i as f64 * dt).collect();
        let results: Result<Vec<(f64, Vec<f64>)>> = grid
            .par_iter()
            .map(|&t| {
                let rep = self.k_explicit(Complex64::new(1.0, t.abs().max(self.cfg.t_floor)))?;
                let d = 2.0 * rep.value.re;
                let pm = if with_per_m {
                    rep.per_m.iter().map(|v| 2.0 * v.re).collect()
                } else {
                    Vec::new()
                };
                Ok((d, pm))
            })
            .collect();
        let results = results?;
        let values: Vec<f64> = results.iter().map(|r| r.0).collect();
        let per_m = if with_per_m {
            Some(results.into_iter().map(|r| r.1).collect())
        } else {
            None
        };
        Ok(DensityProfile {
            grid,
            values,
            per_m,
            config: self.cfg,
            zero_count: self.used,
            gamma_max: self.zt.gamma_max(),
        })
    }

    /// W^(k)(s) = (-1)^k (k+1)! core(k+2, s), for Re s >= 1, s != 1, k <= 60.
    pub fn w_deriv(&self, k: u32, s: Complex64) -> Result<Complex64> {
        if k > 60 {
            return Err(Error::Domain(format!("derivative order {k} exceeds 60")));
        }
        if s.re < 1.0 {
            return Err(Error::Domain(format!(
                "explicit W^(k) requires Re s >= 1, got {}",
                s.re
            )));
        }
        if (s - 1.0).norm() < 1e-9 {
            return Err(Error::Domain("s = 1 is the pole of zeta".into()));
        }
        self.guard_im(s.im)?;
        let (core, _) = self.core(k + 2, s)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let value = sign * factorial(k + 1) * core;
        ensure_finite(value)?;
        Ok(value)
    }

    /// k-th t-derivative of the W-side density 2 Re W(1+it):
    /// 2 Re[i^k W^(k)(1+it)].
    pub fn w_side_density_deriv(&self, k: u32, t: f64) -> Result<f64> {
        let w = self.w_deriv(k, Complex64::new(1.0, t))?;
        Ok(2.0 * (i_pow(k) * w).re)
    }

    /// H_k(t) = -Re core(k+2, 1+it) / 2^(k+2): the normalized derivative
    /// combination whose large-k limit is the multiplicity of a zero at
    /// 1/2 + it. The factorial of the underlying W^(k) cancels analytically
    /// and is never formed.
    pub fn h_k(&self, k: u32, t: f64) -> Result<f64> {
        if t.abs() <= 0.5 {
            return Err(Error::Domain(format!(
                "multiplicity functional needs |t| > 1/2, got {t}"
            )));
        }
        if k > 60 {
            return Err(Error::Domain(format!("order {k} exceeds 60")));
        }
        self.guard_im(t)?;
        let (core, _) = self.core(k + 2, Complex64::new(1.0, t.abs()))?;
        Ok(-core.re / 2f64.powi(k as i32 + 2))
    }

    /// H_k(alpha) - H_k(beta) for k in [k_start, k_end] in one sweep over the
    /// table (per-zero iterated powers; deterministic chunked reduction).
    fn h_k_trace(&self, alpha: f64, beta: f64, k_start: u32, k_end: u32) -> Vec<(u32, f64)> {
        let nk = (k_end - k_start + 1) as usize;
        let mut diff = vec![0.0f64; nk];
        for (t, sgn) in [(alpha, 1.0), (beta, -1.0)] {
            let zeros = &self.zt.ordinates()[..self.used];
            let chunks: Vec<Vec<KahanSum>> = zeros
                .par_chunks(ZERO_CHUNK)
                .map(|chunk| {
                    let mut acc = vec![KahanSum::new(); nk];
                    for &g in chunk {
                        for w in [Complex64::new(0.5, t - g), Complex64::new(0.5, t + g)] {
                            // (w/ |w|^2)^... iterate w^-(k+2) across k
                            let winv = w.finv();
                            let mut v = winv.powu(k_start + 2);
                            for a in acc.iter_mut() {
                                a.add(v.re);
                                v *= winv;
                            }
                        }
                    }
                    acc
                })
                .collect();
            let mut table_re = vec![KahanSum::new(); nk];
            for ch in chunks {
                for (tot, part) in table_re.iter_mut().zip(ch) {
                    tot.merge(part);
                }
            }
            for (i, k) in (k_start..=k_end).enumerate() {
                let p = k + 2;
                let z = Complex64::new(1.0, t);
                let pole = (z - 1.0).powi(-(p as i32));
                let triv = self.trivial_sum_pow(p, z);
                // H_k = (Re sum* - Re pole) / 2^(k+2)
                let star = table_re[i].value() + triv.re;
                diff[i] += sgn * (star - pole.re) / 2f64.powi(p as i32);
            }
        }
        (k_start..=k_end).zip(diff).collect()
    }

    /// Multiplicity difference detector: sweeps H_k(alpha) - H_k(beta) and
    /// declares the limit once three consecutive sweep values agree to `tol`.
    pub fn detect_multiplicity(
        &self,
        alpha: f64,
        beta: f64,
        opts: DetectOptions,
    ) -> Result<DetectReport> {
        for t in [alpha, beta] {
            if t <= 0.5 {
                return Err(Error::Domain(format!(
                    "detector arguments must exceed 1/2, got {t}"
                )));
            }
            self.guard_im(t)?;
        }
        let DetectOptions {
            k_start,
            k_end,
            tol,
        } = opts;
        if k_start < 1 || k_end > 60 || k_start + 2 > k_end {
            return Err(Error::Domain(format!(
                "bad detector sweep [{k_start}, {k_end}]"
            )));
        }
        // truncation allowance at the weakest (smallest) k
        let delta = self.tail_from - alpha.max(beta);
        let dens = (self.tail_from / (2.0 * PI)).ln() / (2.0 * PI);
        let kf = f64::from(k_start);
        let log_budget = (2.6 * dens).ln() - (kf + 1.0) * delta.ln()
            - (kf + 1.0).ln()
            - (kf + 2.0) * 2f64.ln();
        let truncation_budget = log_budget.exp();
        if truncation_budget > 0.1 {
            return Err(Error::Inconclusive {
                msg: format!(
                    "table truncation budget {truncation_budget:.3e} exceeds 0.1 at k = {k_start}"
                ),
                trace: Vec::new(),
            });
        }
        let trace = self.h_k_trace(alpha, beta, k_start, k_end);
        for i in 2..trace.len() {
            let (_, a) = trace[i - 2];
            let (_, b) = trace[i - 1];
            let (k, c) = trace[i];
            if (a - b).abs() < tol && (b - c).abs() < tol {
                return Ok(DetectReport {
                    multiplicity: c.round() as i64,
                    converged_at: k,
                    trace,
                    truncation_budget,
                });
            }
        }
        Err(Error::Inconclusive {
            msg: format!(
                "no three consecutive sweep values within {tol} over k in [{k_start}, {k_end}]"
            ),
            trace,
        })
    }
}

/// Detector sweep parameters.
#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    pub k_start: u32,
    pub k_end: u32,
    pub tol: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            k_start: 10,
            k_end: 40,
            tol: 1e-3,
        }
    }
}

/// sum_{p | q} log^2 p / (p^s - 1): the finite prime correction relating
/// K and K_chi.
pub fn chi_correction(q: u64, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in distinct_primes(q) {
        let lp = (p as f64).ln();
        let ps = (s * lp).exp();
        acc += lp * lp * (ps - 1.0).finv();
    }
    acc
}

/// k-th s-derivative of the K - K_chi correction:
/// sum_{p | q} (-1)^k (log p)^(k+2) sum_{j>=1} j^k p^(-js).
pub fn chi_correction_deriv(q: u64, k: u32, s: Complex64) -> Complex64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = Complex64::new(0.0, 0.0);
    for p in distinct_primes(q) {
        let lp = (p as f64).ln();
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 1..=2000u32 {
            let jf = f64::from(j);
            let term = jf.powi(k as i32) * (-s * (jf * lp)).exp();
            inner += term;
            if term.norm() < 1e-18 * inner.norm().max(1e-300) && jf > f64::from(k) {
                break;
            }
        }
        acc += sign * lp.powi(k as i32 + 2) * inner;
    }
    acc
}

/// Direct trivial-zero sum sum_{j>=1} (z+2j)^-p with an Euler-Maclaurin tail.
fn trivial_sum_direct(p: u32, z: Complex64) -> Complex64 {
    let j_cut = 30 + z.norm().ceil() as usize;
    let mut acc = KahanComplex::new();
    for j in 1..j_cut {
        acc.add((z + 2.0 * j as f64).powi(-(p as i32)));
    }
    let w = (z + 2.0 * j_cut as f64).finv();
    let pf = f64::from(p);
    // sum_{j>=J} f(j) = int_J^inf f + f(J)/2 - f'(J)/12 + f'''(J)/720
    let mut tail = w.powu(p - 1) * (0.5 / (pf - 1.0));
    tail += 0.5 * w.powu(p);
    tail += (pf / 6.0) * w.powu(p + 1);
    tail -= (pf * (pf + 1.0) * (pf + 2.0) / 90.0) * w.powu(p + 3);
    acc.add(tail);
    acc.value()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn ensure_finite(v: Complex64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite result {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerodata::ZeroTable;
    use std::sync::OnceLock;

    fn table() -> &'static ZeroTable {
        static T: OnceLock<ZeroTable> = OnceLock::new();
        T.get_or_init(|| {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/zeros_100k.txt");
            ZeroTable::load(path).expect("reference zero table")
        })
    }

    fn eval() -> Explicit<'static> {
        Explicit::new(table(), ExplicitConfig::default()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_explicit_matches_series_at_2() {
        let ex = eval();
        let rep = ex.k_explicit(c(2.0, 0.0)).unwrap();
        let series = crate::arith::series::k_series(c(2.0, 0.0), 1e-6).unwrap();
        assert!(
            (rep.value - series).norm() <= (rep.budget + 1e-6).max(1e-10),
            "explicit {} vs series {} (budget {:.2e})",
            rep.value,
            series,
            rep.budget
        );
        assert!((rep.value - series).norm() < 1e-2);
    }

    #[test]
    fn k_explicit_matches_series_at_1_5() {
        let ex = eval();
        let rep = ex.k_explicit(c(1.5, 0.0)).unwrap();
        let eps = 2e-3;
        let series = crate::arith::series::k_series(c(1.5, 0.0), eps).unwrap();
        assert!(
            (rep.value - series).norm() <= rep.budget + eps,
            "explicit {} vs series {} (budget {:.2e})",
            rep.value,
            series,
            rep.budget
        );
    }

    #[test]
    fn k_explicit_conjugate_symmetry() {
        let ex = eval();
        let a = ex.k_explicit(c(2.0, 5.0)).unwrap().value;
        let b = ex.k_explicit(c(2.0, -5.0)).unwrap().value;
        assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn k_explicit_pole_and_guard_errors() {
        let ex = eval();
        assert!(ex.k_explicit(c(0.5, 3.0)).is_err());
        assert!(ex.k_explicit(c(1.0 / 3.0 + 1e-9, 0.0)).is_err());
        let lim = ex.table().gamma_max();
        assert!(ex.k_explicit(c(2.0, 0.9 * lim)).is_err());
    }

    #[test]
    fn m_doubling_consistency() {
        // raising M from 8 to 16 moves K(2+it) by less than 8 * 2^-8
        let zt = table();
        let mk = |m: u32| {
            Explicit::new(
                zt,
                ExplicitConfig {
                    scaling_cutoff: m,
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let (e8, e16) = (mk(8), mk(16));
        for &t in &[0.0, 3.0, 11.0, 27.0] {
            let a = e8.k_explicit(c(2.0, t)).unwrap().value;
            let b = e16.k_explicit(c(2.0, t)).unwrap().value;
            assert!(
                (a - b).norm() < 8.0 * 2f64.powi(-8),
                "t={t}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn trivial_modes_agree() {
        let zt = table();
        let closed = Explicit::new(zt, ExplicitConfig::default()).unwrap();
        let direct = Explicit::new(
            zt,
            ExplicitConfig {
                trivial_mode: TrivialMode::DirectSum,
                ..Default::default()
            },
        )
        .unwrap();
        for &s in &[c(2.0, 0.0), c(1.2, 7.3), c(0.8, 14.1), c(3.0, 29.5)] {
            let a = closed.k_explicit(s).unwrap().value;
            let b = direct.k_explicit(s).unwrap().value;
            assert!((a - b).norm() < 1e-10, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn density_dips_at_gamma_one() {
        let ex = eval();
        // scan [14.0, 14.3] for the minimum
        let mut best = (0.0f64, f64::INFINITY);
        let mut t = 14.0;
        while t <= 14.3 {
            let d = ex.density(t).unwrap();
            if d < best.1 {
                best = (t, d);
            }
            t += 0.005;
        }
        let g1 = ex.table().ordinates()[0];
        assert!((best.0 - g1).abs() < 0.1, "dip at {} vs gamma1 {}", best.0, g1);
        assert!(best.1 > -10.0 && best.1 < -6.0, "dip depth {}", best.1);
    }

    #[test]
    fn density_bump_at_half_gamma_one() {
        let ex = eval();
        let g1 = ex.table().ordinates()[0];
        let center = g1 / 2.0;
        let mut best = (0.0f64, f64::NEG_INFINITY);
        let mut t: f64 = center - 0.3;
        while t <= center + 0.3 {
            let d = ex.density(t).unwrap();
            if d > best.1 {
                best = (t, d);
            }
            t += 0.005;
        }
        // baseline from flanking windows
        let mut base = 0.0;
        let mut n = 0;
        for &off in &[-1.1, -0.9, -0.7, 0.7, 0.9, 1.1] {
            base += ex.density(center + off).unwrap();
            n += 1;
        }
        base /= n as f64;
        let dev = best.1 - base;
        // two conjugate terms of size 4/9 each
        assert!(
            dev > 0.5 * (8.0 / 9.0) && dev < 2.0 * (8.0 / 9.0),
            "deviation {dev}"
        );
    }

    #[test]
    fn density_is_even() {
        let ex = eval();
        for &t in &[0.3, 7.07, 14.13, 22.0] {
            assert_eq!(ex.density(t).unwrap(), ex.density(-t).unwrap());
        }
    }

    #[test]
    fn density_rejects_pole_region() {
        let ex = eval();
        assert!(ex.density(0.01).is_err());
        assert!(ex.density(0.05).is_ok());
    }

    #[test]
    fn w_deriv_matches_series() {
        let ex = eval();
        let w0 = ex.w_deriv(0, c(2.0, 0.0)).unwrap();
        let series = crate::arith::series::w_series(c(2.0, 0.0), 1e-5).unwrap();
        assert!((w0 - series).norm() < 1e-3, "{w0} vs {series}");
        // external reference for scale
        assert!((w0.re - 0.884481833963524).abs() < 1e-4);
    }

    #[test]
    fn w_deriv_finite_difference_chain() {
        let ex = eval();
        let s0 = c(2.0, 1.0);
        for k in 1..=6u32 {
            let exact = ex.w_deriv(k, s0).unwrap();
            let h = 1e-3;
            let d = |h: f64| {
                (ex.w_deriv(k - 1, s0 + h).unwrap() - ex.w_deriv(k - 1, s0 - h).unwrap())
                    / (2.0 * h)
            };
            let (d1, d2) = (d(h), d(h / 2.0));
            let fd = (4.0 * d2 - d1) / 3.0;
            assert!(
                (fd - exact).norm() <= 1e-4 * exact.norm(),
                "k={k}: fd={fd} exact={exact}"
            );
        }
    }

    #[test]
    fn w_deriv_conjugation_and_errors() {
        let ex = eval();
        for k in 0..=10u32 {
            let a = ex.w_deriv(k, c(2.0, 1.0)).unwrap();
            let b = ex.w_deriv(k, c(2.0, -1.0)).unwrap();
            assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
        assert!(ex.w_deriv(0, c(1.0, 0.0)).is_err()); // pole
        assert!(ex.w_deriv(61, c(2.0, 0.0)).is_err()); // order cap
        assert!(ex.w_deriv(0, c(0.9, 3.0)).is_err()); // half-plane
    }

    #[test]
    fn h_k_peaks_at_zeros_and_vanishes_off() {
        let ex = eval();
        let g1 = ex.table().ordinates()[0];
        let v = ex.h_k(20, g1).unwrap();
        assert!((v - 1.0).abs() < 0.01, "H_20(gamma1) = {v}");
        let off = ex.h_k(20, 10.0).unwrap();
        assert!(off.abs() < 0.01, "H_20(10) = {off}");
        // evenness
        assert_eq!(ex.h_k(20, g1).unwrap(), ex.h_k(20, -g1).unwrap());
    }

    #[test]
    fn h_k_profile_first_five_zeros() {
        let ex = eval();
        for j in 0..5 {
            let g = ex.table().ordinates()[j];
            let on = ex.h_k(30, g).unwrap();
            assert!((0.97..=1.03).contains(&on), "H_30(gamma_{}) = {on}", j + 1);
            let off = ex.h_k(30, g + 3.0).unwrap();
            assert!((-0.03..=0.03).contains(&off), "H_30(gamma_{}+3) = {off}", j + 1);
        }
    }

    #[test]
    fn detector_basic_cases() {
        let ex = eval();
        let g1 = ex.table().ordinates()[0];
        let opts = DetectOptions::default();
        let r = ex.detect_multiplicity(g1, 30.0, opts).unwrap();
        assert_eq!(r.multiplicity, 1);
        let r = ex.detect_multiplicity(10.0, 30.0, opts).unwrap();
        assert_eq!(r.multiplicity, 0);
        let r = ex.detect_multiplicity(g1, g1, opts).unwrap();
        assert_eq!(r.multiplicity, 0);
        assert!(ex.detect_multiplicity(0.4, 30.0, opts).is_err());
    }

    #[test]
    fn detector_trace_is_reported_and_efficient_path_matches_direct() {
        let ex = eval();
        let g1 = ex.table().ordinates()[0];
        let r = ex
            .detect_multiplicity(g1, 30.0, DetectOptions::default())
            .unwrap();
        assert_eq!(r.trace.len(), 31);
        for &(k, v) in r.trace.iter().take(4) {
            let direct = ex.h_k(k, g1).unwrap() - ex.h_k(k, 30.0).unwrap();
            assert!(
                (v - direct).abs() < 1e-12 * direct.abs().max(1.0),
                "k={k}: sweep {v} vs direct {direct}"
            );
        }
    }

    #[test]
    fn chi_explicit_corrections() {
        let ex = eval();
        // q = 1: identical
        let a = ex.k_explicit(c(2.0, 3.0)).unwrap().value;
        let b = ex.k_chi_explicit(1, c(2.0, 3.0)).unwrap().value;
        assert_eq!(a, b);
        // q = 3 at s = 2: correction log^2 3 / 8
        let k = ex.k_explicit(c(2.0, 0.0)).unwrap().value;
        let kchi = ex.k_chi_explicit(3, c(2.0, 0.0)).unwrap().value;
        let expect = 3f64.ln().powi(2) / 8.0;
        assert!(((k - kchi).re - expect).abs() < 1e-12);
        assert!((k - kchi).im.abs() < 1e-12);
    }

    #[test]
    fn chi_deriv_correction_consistency() {
        // order 0 of the derivative series must reproduce the closed form
        for &(q, s) in &[(3u64, c(1.0, 2.0)), (5, c(1.0, 17.3)), (6, c(2.0, 5.0))] {
            let a = chi_correction(q, s);
            let b = chi_correction_deriv(q, 0, s);
            assert!((a - b).norm() < 1e-12 * a.norm().max(1e-300), "q={q} s={s}");
        }
        // and order 1 matches a finite difference of the closed form
        let s = c(1.0, 5.0);
        let h = 1e-5;
        let fd = (chi_correction(15, s + h) - chi_correction(15, s - h)) / (2.0 * h);
        let d1 = chi_correction_deriv(15, 1, s);
        assert!((fd - d1).norm() < 1e-8 * d1.norm());
    }

    #[test]
    fn zero_cutoff_changes_little() {
        let zt = table();
        let full = Explicit::new(zt, ExplicitConfig::default()).unwrap();
        let cut = Explicit::new(
            zt,
            ExplicitConfig {
                zero_cutoff: Some(6000.0),
                ..Default::default()
            },
        )
        .unwrap();
        for &t in &[1.0, 7.07, 14.13, 30.0] {
            let a = full.density(t).unwrap();
            let b = cut.density(t).unwrap();
            assert!((a - b).abs() < 5e-3, "t={t}: {a} vs {b}");
        }
    }
}
