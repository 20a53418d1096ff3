//! Histogram of pairwise ordinate differences: the bins containing the low
//! zero ordinates (14.13..., 21.02...) show a clear deficit.
//!
//!     cargo run --release -p zerodiff --example gap_histogram [ZEROS_FILE]
//!
//! Writes gaps.csv in the working directory.

use zerodiff::pairstats::diff_histogram;
use zerodiff::zerodata::ZeroTable;

fn main() -> Result<(), zerodiff::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/zeros_100k.txt".into());
    let zt = ZeroTable::load(&path)?;
    let t0 = std::time::Instant::now();
    let hist = diff_histogram(&zt, zt.gamma_max(), 0.0, 35.0, 700)?;
    println!(
        "histogram: {} pairs in range, {} bins, {:.2?}",
        hist.total_pairs,
        hist.bins,
        t0.elapsed()
    );

    for center in [14.134725, 21.022040] {
        let width = (hist.hi - hist.lo) / hist.bins as f64;
        let idx = ((center - hist.lo) / width) as usize;
        let local: Vec<u64> = hist.counts[idx.saturating_sub(4)..(idx + 5).min(hist.bins)].to_vec();
        let neighbors: f64 = (local.iter().sum::<u64>() - local[4]) as f64 / (local.len() - 1) as f64;
        println!(
            "\nbins around {center}: {local:?}\n  center bin {} vs neighbor mean {neighbors:.1}",
            local[4]
        );
    }

    std::fs::write("gaps.csv", hist.to_csv())?;
    println!("\nwrote gaps.csv");
    Ok(())
}
