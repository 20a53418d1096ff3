//! Zero-multiplicity detection from derivative statistics: the sweep
//! H_k(alpha) - H_k(beta) stabilizes at m(1/2 + i alpha) - m(1/2 + i beta).
//!
//!     cargo run --release -p zerodiff --example detect_multiplicity [ZEROS_FILE]

use zerodiff::explicit::{DetectOptions, Explicit, ExplicitConfig};
use zerodiff::zerodata::ZeroTable;

fn main() -> Result<(), zerodiff::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/zeros_100k.txt".into());
    let zt = ZeroTable::load(&path)?;
    let eval = Explicit::new(&zt, ExplicitConfig::default())?;

    for (alpha, beta) in [(14.134725, 30.0), (10.0, 30.0), (21.022040, 30.0)] {
        match eval.detect_multiplicity(alpha, beta, DetectOptions::default()) {
            Ok(rep) => {
                println!(
                    "detect(alpha={alpha}, beta={beta}) = {} (converged at k = {})",
                    rep.multiplicity, rep.converged_at
                );
                print!("  trace:");
                for &(k, v) in rep.trace.iter().step_by(5) {
                    print!(" H_{k}d={v:+.5}");
                }
                println!();
            }
            Err(e) => println!("detect(alpha={alpha}, beta={beta}): {e}"),
        }
    }
    Ok(())
}
