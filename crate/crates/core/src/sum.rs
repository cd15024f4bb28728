//! Deterministic pairwise summation.
//!
//! Grid sums here must be reproducible bit-for-bit across runs and across
//! worker counts, so every reduction uses the same fixed binary tree over the
//! canonical index order: split at the midpoint, recurse, add left + right.
//! Leaves below [`BLOCK`] are folded sequentially in index order.

const BLOCK: usize = 64;

/// Pairwise sum of `f(i)` for `i` in `0..n` over a fixed deterministic tree.
pub fn pairwise_map_sum<F: Fn(usize) -> f64>(n: usize, f: &F) -> f64 {
    fn go<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
        let len = hi - lo;
        if len <= BLOCK {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        } else {
            let mid = lo + len / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    go(0, n, f)
}

/// Pairwise sum of a slice with the same tree as [`pairwise_map_sum`].
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_map_sum(values.len(), &|i| values[i])
}
