//! Ingestion and queries over tables of nontrivial-zero ordinates.
//!
//! File format: UTF-8 text, one ordinate per line in decimal notation, lines
//! beginning with '#' and blank lines ignored, strictly ascending. This
//! matches common distributions of Odlyzko's tables and LMFDB exports after
//! trivial reformatting. Values are parsed to full double precision; digits
//! beyond that are rounded.

use crate::error::{Error, Result};
use std::ops::Range;
use std::path::Path;

/// Validated, strictly increasing positive zero ordinates.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    source_label: String,
}

/// Result of a height-count query: the table count plus the smooth
/// Riemann-von Mangoldt approximation for sanity comparison.
#[derive(Debug, Clone, Copy)]
pub struct CountResult {
    pub count: usize,
    pub rvm_smooth: f64,
}

/// Smooth zero-count approximation (T/2pi) log(T/(2 pi e)) + 7/8.
pub fn rvm_smooth(t: f64) -> f64 {
    use std::f64::consts::{E, PI};
    t / (2.0 * PI) * (t / (2.0 * PI * E)).ln() + 0.875
}

impl ZeroTable {
    /// Build a table from ordinates already in memory (validated).
    pub fn from_ordinates(ordinates: Vec<f64>, source_label: impl Into<String>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::Empty("zero table has no entries".into()));
        }
        let mut prev = 0.0f64;
        for (i, &g) in ordinates.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("ordinate must be a positive finite number, got {g}"),
                });
            }
            if g <= prev {
                return Err(Error::Ordering {
                    line: i + 1,
                    msg: format!("{g} does not exceed previous entry {prev}"),
                });
            }
            prev = g;
        }
        Ok(Self {
            ordinates,
            source_label: source_label.into(),
        })
    }

    /// Load and validate a zero file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut ordinates = Vec::new();
        let mut prev = 0.0f64;
        let mut seen_any = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let g: f64 = line.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("cannot parse ordinate from {line:?}"),
            })?;
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("ordinate must be a positive finite number, got {g}"),
                });
            }
            if seen_any && g <= prev {
                return Err(Error::Ordering {
                    line: lineno + 1,
                    msg: format!("{g} does not exceed previous entry {prev}"),
                });
            }
            prev = g;
            seen_any = true;
            ordinates.push(g);
        }
        if ordinates.is_empty() {
            return Err(Error::Empty(format!("no ordinates in {}", path.display())));
        }
        Ok(Self {
            ordinates,
            source_label: path.display().to_string(),
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn gamma_max(&self) -> f64 {
        *self.ordinates.last().unwrap()
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// Number of ordinates <= T, with the smooth RvM value alongside.
    /// T beyond the table cannot be certified complete and is refused.
    pub fn count_up_to(&self, t: f64) -> Result<CountResult> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("height T must be positive, got {t}")));
        }
        if t > self.gamma_max() {
            return Err(Error::Domain(format!(
                "T = {t} exceeds table height {}; completeness not certifiable",
                self.gamma_max()
            )));
        }
        let count = self.ordinates.partition_point(|&g| g <= t);
        Ok(CountResult {
            count,
            rvm_smooth: rvm_smooth(t),
        })
    }

    /// Half-open index range of ordinates within [center - radius, center + radius].
    pub fn window(&self, center: f64, radius: f64) -> Range<usize> {
        if radius < 0.0 {
            return 0..0;
        }
        let lo = self.ordinates.partition_point(|&g| g < center - radius);
        let hi = self.ordinates.partition_point(|&g| g <= center + radius);
        lo..hi
    }

    /// Largest deviation |count(T) - rvm_smooth(T)| sampled on a uniform grid
    /// over [50, gamma_max]. Data-integrity gauge for ingested tables.
    pub fn rvm_max_abs_dev(&self, samples: usize) -> f64 {
        let lo = 50.0f64.min(self.gamma_max());
        let hi = self.gamma_max();
        let n = samples.max(2);
        let mut worst = 0.0f64;
        for i in 0..n {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let count = self.ordinates.partition_point(|&g| g <= t) as f64;
            worst = worst.max((count - rvm_smooth(t)).abs());
        }
        worst
    }
}
