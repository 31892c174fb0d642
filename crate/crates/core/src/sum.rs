//! Deterministic pairwise reduction.
//!
//! Every grid-level sum in the crate goes through these helpers. The split
//! points depend only on the slice length, so the result is bit-identical
//! regardless of how the caller produced the terms (serially or from a
//! parallel map collected in order).

use num_complex::Complex64;

const LEAF: usize = 8;

/// Pairwise (tree) sum of a slice of reals.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise sum of complex terms.
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i` in `0..n` without materialising the terms
/// for short ranges.
pub fn pairwise_sum_by(n: usize, f: &impl Fn(usize) -> f64) -> f64 {
    fn go(lo: usize, hi: usize, f: &impl Fn(usize) -> f64) -> f64 {
        if hi - lo <= LEAF {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_on_small_inputs() {
        let xs = [1.0, 2.0, 3.5, -0.5];
        assert_eq!(pairwise_sum(&xs), 6.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn by_index_agrees_with_slice_version() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum_by(xs.len(), &|i| xs[i]);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn pairwise_beats_naive_on_ill_conditioned_sum() {
        let xs: Vec<f64> = std::iter::once(1.0)
            .chain(std::iter::repeat(1e-16).take(1 << 16))
            .collect();
        let exact = 1.0 + (1u64 << 16) as f64 * 1e-16;
        let naive: f64 = xs.iter().sum();
        let tree = pairwise_sum(&xs);
        assert!((tree - exact).abs() < (naive - exact).abs());
    }
}
