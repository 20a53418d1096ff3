//! Statistics of unnormalized differences between Riemann zeta zeros.
//!
//! Differences gamma - gamma' between imaginary parts of zeta zeros are not
//! uniformly distributed: they avoid the ordinates of low zeros and cluster
//! near their small rational multiples. This crate computes both sides of
//! that phenomenon:
//!
//! * the predicted discrepancy density D(t) = K(1+it) + K(1-it), where
//!   K(s) = sum Lambda^2(n)/n^s, evaluated through an explicit formula over
//!   a table of zero ordinates ([`explicit`]);
//! * the empirical side: windowed pair-difference sums and histograms over
//!   the same tables, with two-pointer sweeps and deterministic compensated
//!   accumulation ([`pairstats`]);
//! * a zero-multiplicity detector built from high derivatives of
//!   (zeta'/zeta)', which localizes individual zeros from difference
//!   statistics alone ([`explicit::Explicit::detect_multiplicity`]).
//!
//! Zero tables are plain text, one ordinate per line ([`zerodata`]); a table
//! of the first 100000 zeros ships in `data/zeros_100k.txt`. The `examples/`
//! directory has one runnable program per capability, and the thin `zerodiff`
//! binary exposes the same operations as subcommands.
//!
//! ```no_run
//! use zerodiff::zerodata::ZeroTable;
//! use zerodiff::explicit::{Explicit, ExplicitConfig};
//!
//! let zeros = ZeroTable::load("data/zeros_100k.txt")?;
//! let eval = Explicit::new(&zeros, ExplicitConfig::default())?;
//! // the density dips to about -8 at the first zero ordinate
//! println!("D(14.1347) = {}", eval.density(14.1347)?);
//! # Ok::<(), zerodiff::Error>(())
//! ```

pub mod arith;
pub mod cli;
pub mod error;
pub mod explicit;
pub mod kahan;
pub mod kernels;
pub mod pairstats;
pub mod quad;
pub mod zerodata;

pub use error::{Error, Result};
