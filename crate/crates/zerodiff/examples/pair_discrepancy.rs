//! Empirical pair-difference statistic against its predicted main term.
//!
//! With a kernel concentrating at alpha = gamma_1 (a dip of the density) and
//! beta = 30 (ordinary baseline), the normalized pair sum
//! (2 pi / T) sum h_m(gamma - gamma') should land near int h(t) D(t) dt,
//! both clearly negative.
//!
//!     cargo run --release -p zerodiff --example pair_discrepancy [ZEROS_FILE]

use zerodiff::explicit::{Explicit, ExplicitConfig};
use zerodiff::kernels::BumpKernel;
use zerodiff::pairstats::{pair_sum, predicted_main_term, s_mk};
use zerodiff::zerodata::ZeroTable;

fn main() -> Result<(), zerodiff::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/zeros_100k.txt".into());
    let zt = ZeroTable::load(&path)?;
    let t_height = zt.gamma_max();
    let (alpha, beta, m) = (zt.ordinates()[0], 30.0, 4);

    let t0 = std::time::Instant::now();
    let empirical = s_mk(&zt, t_height, alpha, beta, m, 0)?;
    println!(
        "empirical: raw sum {:+.4}, normalized {:+.6} over {} pairs ({:.2?})",
        empirical.raw_sum,
        empirical.normalized,
        empirical.pair_count,
        t0.elapsed()
    );

    let eval = Explicit::new(&zt, ExplicitConfig::default())?;
    let kernel = BumpKernel::new(alpha, beta, m)?;
    let t0 = std::time::Instant::now();
    let predicted = predicted_main_term(&eval, &kernel, 0, t_height)?;
    println!(
        "predicted: raw {:+.4}, normalized {:+.6} ({:.2?})",
        predicted,
        predicted * 2.0 * std::f64::consts::PI / t_height,
        t0.elapsed()
    );
    println!("ratio empirical/predicted = {:.4}", empirical.raw_sum / predicted);

    // a kernel clear of any density structure barely registers
    let quiet = pair_sum(&zt, &zt, t_height, &BumpKernel::new(28.0, 30.0, 4)?, 0)?;
    println!(
        "\nbaseline-vs-baseline kernel (28, 30): normalized {:+.6}",
        quiet.normalized
    );
    Ok(())
}
