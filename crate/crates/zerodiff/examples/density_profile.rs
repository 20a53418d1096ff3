//! Tabulate the discrepancy density D(t) = K(1+it) + K(1-it) and locate its
//! structure: dips at low zero ordinates, peaks at their halves and thirds.
//!
//!     cargo run --release -p zerodiff --example density_profile [ZEROS_FILE]
//!
//! Writes density.csv in the working directory.

use zerodiff::explicit::{Explicit, ExplicitConfig};
use zerodiff::zerodata::ZeroTable;

fn main() -> Result<(), zerodiff::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/zeros_100k.txt".into());
    let zt = ZeroTable::load(&path)?;
    let cfg = ExplicitConfig {
        zero_cutoff: Some(6000.0),
        ..Default::default()
    };
    let eval = Explicit::new(&zt, cfg)?;

    let t0 = std::time::Instant::now();
    let profile = eval.density_profile(0.05, 35.0, 0.01, false)?;
    println!(
        "profile: {} points in {:.2?} ({} zeros used)",
        profile.grid.len(),
        t0.elapsed(),
        profile.zero_count
    );

    let minima = local_extrema(&profile.grid, &profile.values, true);
    println!("\ndeepest local minima:");
    let mut sorted = minima.clone();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    for &(t, d) in sorted.iter().take(6) {
        println!("  t = {t:8.3}   D = {d:8.3}");
    }

    println!("\nzero ordinates for comparison:");
    println!("  {:?}", &zt.ordinates()[..5]);

    println!("\nlocal maxima near gamma_1/2 and gamma_1/3:");
    let g1 = zt.ordinates()[0];
    for target in [g1 / 2.0, g1 / 3.0] {
        let peaks = local_extrema(&profile.grid, &profile.values, false);
        if let Some(&(t, d)) = peaks
            .iter()
            .filter(|&&(t, _)| (t - target).abs() < 0.3)
            .max_by(|a, b| a.1.total_cmp(&b.1))
        {
            let base = baseline(&profile.grid, &profile.values, target);
            println!(
                "  target {target:7.4}: peak at t = {t:7.4}, D = {d:6.3}, baseline = {base:6.3}, deviation = {:6.3}",
                d - base
            );
        }
    }

    profile_to_file(&profile, "density.csv")?;
    println!("\nwrote density.csv");
    Ok(())
}

fn local_extrema(grid: &[f64], vals: &[f64], minima: bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..vals.len() - 1 {
        let better = if minima {
            vals[i] < vals[i - 1] && vals[i] < vals[i + 1]
        } else {
            vals[i] > vals[i - 1] && vals[i] > vals[i + 1]
        };
        if better {
            out.push((grid[i], vals[i]));
        }
    }
    out
}

fn baseline(grid: &[f64], vals: &[f64], center: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, &t) in grid.iter().enumerate() {
        let d = (t - center).abs();
        if (0.7..=1.2).contains(&d) {
            sum += vals[i];
            n += 1;
        }
    }
    sum / n as f64
}

fn profile_to_file(
    profile: &zerodiff::explicit::DensityProfile,
    path: &str,
) -> Result<(), zerodiff::Error> {
    std::fs::write(path, profile.to_csv())?;
    Ok(())
}
