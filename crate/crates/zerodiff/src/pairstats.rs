//! Empirical pair-difference statistics over zero tables.
//!
//! The central sum is the ordered double sum
//!
//! ```text
//! sum_{0 < gamma, gamma' <= T} h_m^(k)(gamma - gamma'),
//! ```
//!
//! restricted by the kernel's compact support to two narrow windows per outer
//! zero, enumerated with a sorted two-pointer sweep. Accumulation order is
//! fixed (ascending gamma, then ascending gamma') with per-chunk compensated
//! partial sums reduced in chunk order, so results are bit-identical for any
//! worker-thread count.

use crate::error::{Error, Result};
use crate::explicit::Explicit;
use crate::kahan::KahanSum;
use crate::kernels::BumpKernel;
use crate::zerodata::ZeroTable;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Fixed outer-index chunk width for the deterministic parallel reduction.
const PAIR_CHUNK: usize = 4096;

/// Empirical pair statistic, optionally with the predicted main term.
#[derive(Debug, Clone, Serialize)]
pub struct PairSumReport {
    pub kernel: BumpKernel,
    pub deriv_order: u32,
    /// Height cutoff T.
    pub t_height: f64,
    /// The raw double sum.
    pub raw_sum: f64,
    /// (2 pi / T) times the raw sum.
    pub normalized: f64,
    /// Summands whose difference lies inside the open support windows.
    pub pair_count: u64,
    /// Accumulation-error allowance (scales with the absolute term mass).
    pub error_budget: f64,
    /// (T / 2 pi) int h^(k)(t) D(t) dt, when requested.
    pub predicted: Option<f64>,
}

/// Histogram of signed differences gamma - gamma' over [lo, hi).
#[derive(Debug, Clone, Serialize)]
pub struct DiffHistogram {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
    pub counts: Vec<u64>,
    pub t_height: f64,
    pub total_pairs: u64,
}

impl DiffHistogram {
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = (self.hi - self.lo) / self.bins as f64;
        (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w)
    }

    /// CSV rows "bin_lo,bin_hi,count".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, &c) in self.counts.iter().enumerate() {
            let (a, b) = self.bin_edges(i);
            out.push_str(&format!("{a:.16e},{b:.16e},{c}\n"));
        }
        out
    }
}

/// The kernel's two support windows in the difference variable, merged if
/// they overlap, ordered ascending.
fn support_windows(kernel: &BumpKernel) -> Vec<(f64, f64)> {
    let [wa, wb] = kernel.support();
    let (first, second) = if wa.0 <= wb.0 { (wa, wb) } else { (wb, wa) };
    if second.0 <= first.1 {
        vec![(first.0, second.1.max(first.1))]
    } else {
        vec![first, second]
    }
}

fn inside_open_support(kernel: &BumpKernel, x: f64) -> bool {
    let w = 1.0 / kernel.m as f64;
    (x - kernel.alpha).abs() < w || (x - kernel.beta).abs() < w
}

/// Ordered double sum of h_m^(k)(gamma - gamma') over zeros of both tables
/// up to height T.
pub fn pair_sum(
    zt1: &ZeroTable,
    zt2: &ZeroTable,
    t_height: f64,
    kernel: &BumpKernel,
    deriv_order: u32,
) -> Result<PairSumReport> {
    if !(t_height > 0.0) {
        return Err(Error::Domain(format!(
            "height cutoff must be positive, got {t_height}"
        )));
    }
    if t_height > zt1.gamma_max() || t_height > zt2.gamma_max() {
        return Err(Error::Domain(format!(
            "T = {t_height} exceeds a table height ({}, {})",
            zt1.gamma_max(),
            zt2.gamma_max()
        )));
    }
    let k = deriv_order as usize;
    if k > crate::kernels::K_MAX {
        return Err(Error::Domain(format!("derivative order {k} exceeds cap")));
    }
    let outer = &zt1.ordinates()[..zt1.ordinates().partition_point(|&g| g <= t_height)];
    let inner = &zt2.ordinates()[..zt2.ordinates().partition_point(|&g| g <= t_height)];
    let windows = support_windows(kernel);

    struct Part {
        sum: KahanSum,
        abs: KahanSum,
        count: u64,
        err: Option<Error>,
    }

    let parts: Vec<Part> = outer
        .par_chunks(PAIR_CHUNK)
        .map(|chunk| {
            let mut part = Part {
                sum: KahanSum::new(),
                abs: KahanSum::new(),
                count: 0,
                err: None,
            };
            // per-window start pointers; windows move right as gamma grows
            let mut starts: Vec<usize> = windows
                .iter()
                .map(|&(_, hi)| inner.partition_point(|&g| g < chunk[0] - hi))
                .collect();
            'outer: for &g in chunk {
                for (wi, &(lo, hi)) in windows.iter().enumerate() {
                    // gamma' in [g - hi, g - lo]
                    let glo = g - hi;
                    let ghi = g - lo;
                    let mut j = starts[wi];
                    while j < inner.len() && inner[j] < glo {
                        j += 1;
                    }
                    starts[wi] = j;
                    while j < inner.len() && inner[j] <= ghi {
                        let x = g - inner[j];
                        match kernel.eval(k, x) {
                            Ok(v) => {
                                part.sum.add(v);
                                part.abs.add(v.abs());
                                if inside_open_support(kernel, x) {
                                    part.count += 1;
                                }
                            }
                            Err(e) => {
                                part.err = Some(e);
                                break 'outer;
                            }
                        }
                        j += 1;
                    }
                }
            }
            part
        })
        .collect();

    let mut sum = KahanSum::new();
    let mut abs = KahanSum::new();
    let mut count = 0u64;
    for part in parts {
        if let Some(e) = part.err {
            return Err(e);
        }
        sum.merge(part.sum);
        abs.merge(part.abs);
        count += part.count;
    }
    let raw_sum = sum.value();
    if !raw_sum.is_finite() {
        return Err(Error::Domain("pair sum overflowed".into()));
    }
    // compensated summation leaves ~2 eps relative to the absolute mass,
    // plus the kernel evaluations' own ~1e-13 relative error
    let error_budget = 1e-12 * abs.value();
    Ok(PairSumReport {
        kernel: *kernel,
        deriv_order,
        t_height,
        raw_sum,
        normalized: 2.0 * PI / t_height * raw_sum,
        pair_count: count,
        error_budget,
        predicted: None,
    })
}

/// S_{m,k}(T) = (2 pi / T) sum h_m^(k)(gamma - gamma') over one table, with
/// the kernel validated for class membership first.
pub fn s_mk(
    zt: &ZeroTable,
    t_height: f64,
    alpha: f64,
    beta: f64,
    m: u32,
    deriv_order: u32,
) -> Result<PairSumReport> {
    if deriv_order > 6 {
        return Err(Error::Domain(format!(
            "derivative order {deriv_order} exceeds the desk-scale cap 6"
        )));
    }
    let kernel = BumpKernel::new(alpha, beta, m)?;
    let report = kernel.validate_h0();
    if !report.valid {
        return Err(Error::Domain(format!(
            "kernel fails class validation: {}",
            report.diagnostics.join("; ")
        )));
    }
    debug_assert_eq!(kernel.eval(deriv_order as usize, 0.0).unwrap(), 0.0);
    pair_sum(zt, zt, t_height, &kernel, deriv_order)
}

/// Predicted main term (T / 2 pi) int h_m^(k)(t) H(t) dt.
///
/// For k = 0 this is direct quadrature of h against the density D. For k >= 1
/// the kernel derivative is traded for a density derivative by parts, with
/// the W-side derivative standing in for the K-side one:
/// int h^(k) H = int h H^(k), H^(k)(t) ~ 2 Re[i^k W^(k)(1+it)].
pub fn predicted_main_term(
    eval: &Explicit,
    kernel: &BumpKernel,
    deriv_order: u32,
    t_height: f64,
) -> Result<f64> {
    predicted_main_term_at_tol(eval, kernel, deriv_order, t_height, 1e-6)
}

/// As [`predicted_main_term`] with an explicit relative quadrature tolerance.
pub fn predicted_main_term_at_tol(
    eval: &Explicit,
    kernel: &BumpKernel,
    deriv_order: u32,
    t_height: f64,
    rel_tol: f64,
) -> Result<f64> {
    if kernel.alpha == kernel.beta {
        return Ok(0.0);
    }
    let floor = eval.config().t_floor;
    let guard = eval.config().gamma_guard * eval.table().gamma_max();
    let windows = support_windows(kernel);
    for &(lo, hi) in &windows {
        if lo <= floor && hi >= -floor {
            return Err(Error::Domain(format!(
                "kernel support [{lo}, {hi}] meets the pole exclusion [-{floor}, {floor}]"
            )));
        }
        if lo.abs().max(hi.abs()) > guard {
            return Err(Error::Domain(format!(
                "kernel support [{lo}, {hi}] beyond the table guard {guard}"
            )));
        }
    }

    let err_cell = std::cell::RefCell::new(None::<Error>);
    let integrand = |t: f64| -> f64 {
        let side = if deriv_order == 0 {
            eval.density(t)
        } else {
            eval.w_side_density_deriv(deriv_order, t)
        };
        // integration by parts traded h^(k) for the k-th density derivative,
        // so the kernel itself always enters at order 0
        let kv = kernel.eval(0, t);
        match (side, kv) {
            (Ok(d), Ok(h)) => h * d,
            (Err(e), _) | (_, Err(e)) => {
                err_cell.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    // probe the windows for the integrand scale, then integrate
    let mut scale = 0.0f64;
    for &(lo, hi) in &windows {
        for i in 0..=16 {
            let t = lo + (hi - lo) * i as f64 / 16.0;
            scale = scale.max(integrand(t).abs());
        }
        if let Some(e) = err_cell.take() {
            return Err(e);
        }
    }
    let mut total = 0.0;
    for &(lo, hi) in &windows {
        let tol = rel_tol * (scale * (hi - lo)).max(1e-12);
        let (v, _) = crate::quad::adaptive(&integrand, lo, hi, tol)?;
        if let Some(e) = err_cell.take() {
            return Err(e);
        }
        total += v;
    }
    Ok(t_height / (2.0 * PI) * total)
}

/// Histogram of ordered-pair differences gamma - gamma' in [lo, hi).
pub fn diff_histogram(
    zt: &ZeroTable,
    t_height: f64,
    lo: f64,
    hi: f64,
    bins: usize,
) -> Result<DiffHistogram> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("bad range [{lo}, {hi})")));
    }
    if bins < 1 {
        return Err(Error::Domain("need at least one bin".into()));
    }
    if !(t_height > 0.0) || t_height > zt.gamma_max() {
        return Err(Error::Domain(format!(
            "T = {t_height} outside the table height {}",
            zt.gamma_max()
        )));
    }
    let zeros = &zt.ordinates()[..zt.ordinates().partition_point(|&g| g <= t_height)];
    let width = (hi - lo) / bins as f64;

    let parts: Vec<Vec<u64>> = zeros
        .par_chunks(PAIR_CHUNK)
        .map(|chunk| {
            let mut counts = vec![0u64; bins];
            // gamma' in (g - hi, g - lo]; the window slides right with g
            let mut start = zeros.partition_point(|&g2| g2 <= chunk[0] - hi);
            for &g in chunk {
                let mut j = start;
                while j < zeros.len() && g - zeros[j] >= hi {
                    j += 1;
                }
                start = j;
                while j < zeros.len() && g - zeros[j] >= lo {
                    let x = g - zeros[j];
                    // x < hi holds for everything past `start`
                    let idx = (((x - lo) / width) as usize).min(bins - 1);
                    counts[idx] += 1;
                    j += 1;
                }
            }
            counts
        })
        .collect();

    let mut counts = vec![0u64; bins];
    for part in parts {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    let total_pairs = counts.iter().sum();
    Ok(DiffHistogram {
        lo,
        hi,
        bins,
        counts,
        t_height,
        total_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn synthetic(vals: &[f64]) -> ZeroTable {
        ZeroTable::from_ordinates(vals.to_vec(), "synthetic").unwrap()
    }

    /// Plain O(N^2) double loop in the same accumulation order.
    fn brute_force(
        zt1: &ZeroTable,
        zt2: &ZeroTable,
        t: f64,
        kernel: &BumpKernel,
        k: usize,
    ) -> (f64, u64) {
        let mut sum = KahanSum::new();
        let mut count = 0;
        for &g in zt1.ordinates().iter().filter(|&&g| g <= t) {
            for &g2 in zt2.ordinates().iter().filter(|&&g| g <= t) {
                let x = g - g2;
                sum.add(kernel.eval(k, x).unwrap());
                if inside_open_support(kernel, x) {
                    count += 1;
                }
            }
        }
        (sum.value(), count)
    }

    #[test]
    fn tiny_table_matches_brute_force_exactly() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        // support [0.9, 1.1] u [1.9, 2.1]
        let kernel = BumpKernel::new(1.0, 2.0, 10).unwrap();
        let rep = pair_sum(&zt, &zt, 3.0, &kernel, 0).unwrap();
        let (bf, bc) = brute_force(&zt, &zt, 3.0, &kernel, 0);
        assert_eq!(rep.raw_sum, bf);
        assert_eq!(rep.pair_count, bc);
        assert_eq!(rep.pair_count, 3); // diffs 1, 1, 2 inside the windows
    }

    #[test]
    fn disjoint_support_gives_zero() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        let kernel = BumpKernel::new(10.0, 20.0, 1).unwrap();
        let rep = pair_sum(&zt, &zt, 3.0, &kernel, 0).unwrap();
        assert_eq!(rep.raw_sum, 0.0);
        assert_eq!(rep.pair_count, 0);
    }

    #[test]
    fn transposed_sum_equals_mirrored_kernel() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut vals: Vec<f64> = (0..500).map(|_| rng.gen_range(1.0..200.0)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let zt = synthetic(&vals);
        let t = zt.gamma_max();
        let kernel = BumpKernel::new(3.0, 9.0, 2).unwrap();
        let mirrored = BumpKernel::new(-3.0, -9.0, 2).unwrap();
        let a = pair_sum(&zt, &zt, t, &kernel, 0).unwrap();
        let b = pair_sum(&zt, &zt, t, &mirrored, 0).unwrap();
        let tol = 1e-12 * a.raw_sum.abs().max(1.0);
        assert!((a.raw_sum - b.raw_sum).abs() <= tol);
        assert_eq!(a.pair_count, b.pair_count);
    }

    #[test]
    fn random_tables_match_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..8 {
            let n = rng.gen_range(50..400);
            let mut vals: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..300.0)).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            let zt = synthetic(&vals);
            let t = zt.gamma_max();
            let alpha = rng.gen_range(1.0..20.0);
            let beta = alpha + rng.gen_range(1.0..15.0);
            let m = rng.gen_range(1..5);
            for k in 0..=3u32 {
                let kernel = BumpKernel::new(alpha, beta, m).unwrap();
                let rep = pair_sum(&zt, &zt, t, &kernel, k).unwrap();
                let (bf, bc) = brute_force(&zt, &zt, t, &kernel, k as usize);
                let mass: f64 = {
                    let mut s = 0.0;
                    for &g in zt.ordinates() {
                        for &g2 in zt.ordinates() {
                            s += kernel.eval(k as usize, g - g2).unwrap().abs();
                        }
                    }
                    s
                };
                assert!(
                    (rep.raw_sum - bf).abs() <= 1e-9 * mass.max(1e-9),
                    "trial {trial} k {k}: {} vs {bf}",
                    rep.raw_sum
                );
                assert_eq!(rep.pair_count, bc, "trial {trial} k {k}");
            }
        }
    }

    #[test]
    fn overlapping_windows_visit_pairs_once() {
        // alpha and beta so close the gamma' windows merge
        let zt = synthetic(&[1.0, 1.5, 2.0, 2.5, 3.0]);
        let kernel = BumpKernel::new(1.0, 1.4, 2).unwrap();
        let rep = pair_sum(&zt, &zt, 3.0, &kernel, 0).unwrap();
        let (bf, bc) = brute_force(&zt, &zt, 3.0, &kernel, 0);
        assert!((rep.raw_sum - bf).abs() <= 1e-12 * bf.abs().max(1.0));
        assert_eq!(rep.pair_count, bc);
    }

    #[test]
    fn telescoping_linearity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut vals: Vec<f64> = (0..800).map(|_| rng.gen_range(0.5..400.0)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let zt = synthetic(&vals);
        let t = zt.gamma_max();
        let (a, b, mid, m) = (4.0, 16.0, 9.0, 2);
        let whole = pair_sum(&zt, &zt, t, &BumpKernel::new(a, b, m).unwrap(), 0).unwrap();
        let left = pair_sum(&zt, &zt, t, &BumpKernel::new(a, mid, m).unwrap(), 0).unwrap();
        let right = pair_sum(&zt, &zt, t, &BumpKernel::new(mid, b, m).unwrap(), 0).unwrap();
        let tol = 1e-10 * (whole.raw_sum.abs() + left.raw_sum.abs() + right.raw_sum.abs()).max(1.0);
        assert!((whole.raw_sum - (left.raw_sum + right.raw_sum)).abs() <= tol);
    }

    #[test]
    fn s_mk_rejects_invalid_kernels_and_big_k() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        assert!(s_mk(&zt, 3.0, 1.0, 1.2, 4, 0).is_err()); // overlapping bumps
        assert!(s_mk(&zt, 3.0, 0.1, 2.0, 4, 0).is_err()); // support past 0
        assert!(s_mk(&zt, 3.0, 1.0, 2.0, 10, 7).is_err()); // k cap
        // degenerate alpha == beta is the zero kernel
        let rep = s_mk(&zt, 3.0, 1.0, 1.0, 10, 0).unwrap();
        assert_eq!(rep.raw_sum, 0.0);
    }

    #[test]
    fn histogram_enumerable_case() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        let h = diff_histogram(&zt, 3.0, 0.5, 2.5, 2).unwrap();
        // ordered diffs: 1 (2-1), 1 (3-2), 2 (3-1)
        assert_eq!(h.counts, vec![2, 1]);
        assert_eq!(h.total_pairs, 3);
        // range with no pairs
        let h = diff_histogram(&zt, 3.0, 10.0, 12.0, 4).unwrap();
        assert_eq!(h.counts, vec![0, 0, 0, 0]);
        assert_eq!(h.total_pairs, 0);
    }

    #[test]
    fn histogram_counts_signed_differences() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        let h = diff_histogram(&zt, 3.0, -2.5, 2.5, 5).unwrap();
        // diffs: 0 (x3), +-1 (x2 each), +-2 (x1 each)
        assert_eq!(h.total_pairs, 9);
        assert_eq!(h.counts.iter().sum::<u64>(), h.total_pairs);
    }

    #[test]
    fn histogram_matches_brute_force_on_random_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut vals: Vec<f64> = (0..600).map(|_| rng.gen_range(0.5..250.0)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let zt = synthetic(&vals);
        let (lo, hi, bins, t) = (-3.0, 8.0, 11, zt.gamma_max());
        let h = diff_histogram(&zt, t, lo, hi, bins).unwrap();
        let mut brute = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for &g in zt.ordinates() {
            for &g2 in zt.ordinates() {
                let x = g - g2;
                if x >= lo && x < hi {
                    brute[(((x - lo) / width) as usize).min(bins - 1)] += 1;
                }
            }
        }
        assert_eq!(h.counts, brute);
    }

    #[test]
    fn pair_count_equals_histogram_mass_of_support() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut vals: Vec<f64> = (0..700).map(|_| rng.gen_range(0.5..300.0)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let zt = synthetic(&vals);
        let t = zt.gamma_max();
        let kernel = BumpKernel::new(5.0, 11.0, 4).unwrap();
        let rep = pair_sum(&zt, &zt, t, &kernel, 0).unwrap();
        let [wa, wb] = kernel.support();
        let ha = diff_histogram(&zt, t, wa.0, wa.1, 1).unwrap();
        let hb = diff_histogram(&zt, t, wb.0, wb.1, 1).unwrap();
        assert_eq!(rep.pair_count, ha.total_pairs + hb.total_pairs);
    }

    #[test]
    fn csv_round_trip() {
        let zt = synthetic(&[1.0, 2.0, 3.0]);
        let h = diff_histogram(&zt, 3.0, 0.0, 3.0, 3).unwrap();
        let csv = h.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("bin_lo,bin_hi,count"));
        let mut total = 0u64;
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 3);
            let lo: f64 = cells[0].parse().unwrap();
            let hi: f64 = cells[1].parse().unwrap();
            let (elo, ehi) = h.bin_edges(i);
            assert_eq!(lo, elo);
            assert_eq!(hi, ehi);
            total += cells[2].parse::<u64>().unwrap();
        }
        assert_eq!(total, h.total_pairs);
    }
}
