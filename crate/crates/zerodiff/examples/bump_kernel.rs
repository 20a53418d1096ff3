//! The two-bump difference kernel and its derivative calculus.
//!
//!     cargo run --release -p zerodiff --example bump_kernel

use zerodiff::kernels::{g, BumpKernel};
use zerodiff::quad::adaptive;

fn main() -> Result<(), zerodiff::Error> {
    println!("bump peak g(0) = {:.9}  (c / e)", g(0.0));

    let kernel = BumpKernel::new(14.134725, 30.0, 4)?;
    println!("kernel alpha={} beta={} m={}", kernel.alpha, kernel.beta, kernel.m);
    println!("support windows: {:?}", kernel.support());
    let report = kernel.validate_h0();
    println!("admissible: {}", report.valid);
    for d in &report.diagnostics {
        println!("  note: {d}");
    }

    let [(a1, b1), (a2, b2)] = kernel.support();
    let (i1, _) = adaptive(|x| kernel.eval(0, x).unwrap(), a1, b1, 1e-12)?;
    let (i2, _) = adaptive(|x| kernel.eval(0, x).unwrap(), a2, b2, 1e-12)?;
    println!("int h = {:.3e} (bumps {:.12} and {:.12})", i1 + i2, i1, i2);

    println!("\nsamples of h and its first derivatives at x = alpha + 0.1:");
    let x = kernel.alpha + 0.1;
    for k in 0..=4 {
        println!("  h^({k})({x}) = {:+.6e}", kernel.eval(k, x)?);
    }

    for bad in [
        BumpKernel::new(0.1, 30.0, 4)?,  // support reaches 0
        BumpKernel::new(14.0, 14.2, 4)?, // overlapping bumps
    ] {
        let r = bad.validate_h0();
        println!(
            "\nalpha={} beta={} m={} admissible: {} ({})",
            bad.alpha, bad.beta, bad.m, r.valid, r.diagnostics[0]
        );
    }
    Ok(())
}
