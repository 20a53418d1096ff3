//! Neumaier-compensated summation.
//!
//! Every sum in this crate that can exceed ~1e5 terms runs through these
//! accumulators in a fixed, deterministic order, so results are reproducible
//! bit for bit across runs and thread counts.

use num_complex::Complex64;

/// Scalar compensated accumulator (Kahan-Babuska-Neumaier).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another accumulator in, preserving both compensations.
    #[inline]
    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values (componentwise Neumaier).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn merge(&mut self, other: KahanComplex) {
        self.re.merge(other.re);
        self.im.merge(other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_beats_naive() {
        // 1 + 1e-16 repeated: naive summation loses the small increments.
        let mut k = KahanSum::new();
        k.add(1.0);
        for _ in 0..1_000_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-10)).abs() < 1e-13);
    }

    #[test]
    fn merge_matches_sequential() {
        let vals: Vec<f64> = (0..10_000).map(|i| ((i * 37) % 101) as f64 * 1e-7).collect();
        let mut whole = KahanSum::new();
        for &v in &vals {
            whole.add(v);
        }
        let mut a = KahanSum::new();
        let mut b = KahanSum::new();
        for &v in &vals[..5000] {
            a.add(v);
        }
        for &v in &vals[5000..] {
            b.add(v);
        }
        a.merge(b);
        assert!((a.value() - whole.value()).abs() < 1e-15);
    }
}
