//! Sieved tables and direct Dirichlet-series evaluation.
//!
//!     cargo run --release -p zerodiff --example arithmetic_tables

use num_complex::Complex64;
use zerodiff::arith::series::{k_chi_series, k_series, w_series};
use zerodiff::arith::ArithTables;

fn main() -> Result<(), zerodiff::Error> {
    let tables = ArithTables::build(10_000)?;

    println!("b_m = mu(ker m) phi(ker m) for small m:");
    for m in 1..=12u64 {
        print!("  b_{m} = {:>3}", tables.b(m));
        if m % 6 == 0 {
            println!();
        }
    }
    println!("divisor identity sum_(m|k) (k/m) b_m at k = 360: {}", tables.b_divisor_sum(360));

    let s2 = Complex64::new(2.0, 0.0);
    println!("\nK(2)      = {:.9}", k_series(s2, 1e-8)?.re);
    println!("W(2)      = {:.9}", w_series(s2, 1e-8)?.re);
    println!("K_chi(2), q=6 = {:.9}", k_chi_series(6, s2, 1e-8)?.re);
    let removed: f64 = [2.0f64, 3.0]
        .iter()
        .map(|&p: &f64| p.ln().powi(2) / (p * p - 1.0))
        .sum();
    println!("   (K minus the p | 6 prime powers: expected gap {removed:.9})");

    let s = Complex64::new(1.5, 21.0);
    println!("\nK(1.5 + 21i) = {:.6}", k_series(s, 1e-4)?);
    Ok(())
}
