//! Load and validate a zero table; report the count and the deviation from
//! the smooth Riemann-von Mangoldt approximation.
//!
//!     cargo run --release -p zerodiff --example ingest_zeros [ZEROS_FILE]

use zerodiff::zerodata::ZeroTable;

fn main() -> Result<(), zerodiff::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/zeros_100k.txt".into());
    let zt = ZeroTable::load(&path)?;
    println!("source      : {}", zt.source_label());
    println!("count       : {}", zt.count());
    println!("gamma_max   : {:.9}", zt.gamma_max());
    println!("first three : {:?}", &zt.ordinates()[..3.min(zt.count())]);
    let r = zt.count_up_to(100f64.min(zt.gamma_max()))?;
    println!(
        "N(100)      : {} (smooth RvM {:.3})",
        r.count, r.rvm_smooth
    );
    println!("max |N - RvM| on [50, gamma_max]: {:.3}", zt.rvm_max_abs_dev(4096));
    Ok(())
}
