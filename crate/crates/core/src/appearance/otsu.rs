//! Otsu's global threshold.

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};

/// Returns the threshold `t` maximizing the between-class variance of a
/// 256-bin histogram, where the darker class is every intensity `<= t`.
///
/// Candidates are compared exactly in integer arithmetic, so plateaus of
/// equal variance resolve to the smallest `t`.
pub fn otsu_threshold(histogram: &[u64; 256]) -> Result<u8> {
    if histogram.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::DegenerateHistogram);
    }
    let total: u128 = histogram.iter().map(|&c| c as u128).sum();
    let total_sum: u128 = histogram.iter().enumerate().map(|(i, &c)| i as u128 * c as u128).sum();

    // With n0 pixels summing to s0 below the split, the between-class variance
    // is (N*s0 - n0*S)^2 / (N^2 * n0 * n1); N^2 is common to all candidates.
    let mut best: Option<(u8, BigUint, u128)> = None;
    let (mut n0, mut s0) = (0u128, 0u128);
    for (t, &count) in histogram.iter().enumerate().take(255) {
        n0 += count as u128;
        s0 += t as u128 * count as u128;
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let diff = BigInt::from(total) * s0 - BigInt::from(n0) * total_sum;
        let numerator = diff.magnitude().pow(2);
        let denominator = n0 * n1;
        let better = match &best {
            None => true,
            // numerator / denominator > best_num / best_den
            Some((_, best_num, best_den)) => &numerator * *best_den > best_num * denominator,
        };
        if better {
            best = Some((t as u8, numerator, denominator));
        }
    }
    Ok(best.expect("two non-empty bins give at least one split").0)
}
