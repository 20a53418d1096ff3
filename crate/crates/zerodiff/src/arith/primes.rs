//! Prime enumeration: a simple bit sieve for small ranges and a segmented
//! sieve for the large cutoffs the Dirichlet-series evaluators need.

/// Odd-only sieve of Eratosthenes up to `limit` (inclusive). Returns all primes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    // bit i represents the odd number 2i+1
    let half = n / 2 + 1;
    let mut composite = vec![false; half];
    let mut p = 3usize;
    while p * p <= n {
        if !composite[p / 2] {
            let mut q = p * p;
            while q <= n {
                composite[q / 2] = true;
                q += 2 * p;
            }
        }
        p += 2;
    }
    let mut primes = Vec::with_capacity((n as f64 / (n as f64).ln().max(2.0)) as usize + 16);
    primes.push(2);
    let mut i = 1;
    while 2 * i + 1 <= n {
        if !composite[i] {
            primes.push((2 * i + 1) as u64);
        }
        i += 1;
    }
    primes
}

/// Calls `f` once for every prime in [lo, hi], ascending, using a segmented
/// odd-only sieve. Memory stays bounded regardless of the range size.
pub fn for_each_prime<F: FnMut(u64)>(lo: u64, hi: u64, mut f: F) {
    if hi < 2 || hi < lo {
        return;
    }
    let lo = lo.max(2);
    if lo <= 2 {
        f(2);
    }
    let sqrt = (hi as f64).sqrt() as u64 + 2;
    let base: Vec<u64> = primes_up_to(sqrt).into_iter().skip(1).collect(); // odd primes

    const SEGMENT_ODDS: u64 = 1 << 20;
    let mut seg_lo = lo.max(3) | 1; // first odd >= lo
    let mut mark = vec![false; SEGMENT_ODDS as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + 2 * (SEGMENT_ODDS - 1)).min(hi | 1).min(hi.max(seg_lo));
        let n_odds = ((seg_hi - seg_lo) / 2 + 1) as usize;
        mark[..n_odds].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            // first odd multiple of p that is >= max(p*p, seg_lo)
            let mut start = p * p;
            if start < seg_lo {
                let q = seg_lo.div_ceil(p);
                start = p * (q | 1).max(p);
                if start < seg_lo {
                    start += 2 * p;
                }
            }
            let mut idx = (start - seg_lo) / 2;
            while idx < n_odds as u64 {
                mark[idx as usize] = true;
                idx += p;
            }
        }
        for i in 0..n_odds {
            if !mark[i] {
                let v = seg_lo + 2 * i as u64;
                if v <= hi && v >= lo {
                    f(v);
                }
            }
        }
        seg_lo = seg_hi + 2;
    }
}
