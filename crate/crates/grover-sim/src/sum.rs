//! Deterministic pairwise (tree) summation.
//!
//! Every reduction in the crate goes through the same fixed binary tree:
//! split at the midpoint down to a 128-element base case, with rayon joins
//! above `PAR_THRESHOLD`. The tree shape depends only on the slice length,
//! never on thread scheduling, so results are bit-identical across runs and
//! thread counts, and the rounding error grows like O(log N) instead of the
//! O(N) of naive left-to-right accumulation.

use num_complex::Complex64;
use rayon::join;

const BASE: usize = 128;
const PAR_THRESHOLD: usize = 1 << 15;

pub fn pairwise_sum_f64(xs: &[f64]) -> f64 {
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    if xs.len() >= PAR_THRESHOLD {
        let (a, b) = join(|| pairwise_sum_f64(lo), || pairwise_sum_f64(hi));
        a + b
    } else {
        pairwise_sum_f64(lo) + pairwise_sum_f64(hi)
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    if xs.len() >= PAR_THRESHOLD {
        let (a, b) = join(|| pairwise_sum_complex(lo), || pairwise_sum_complex(hi));
        a + b
    } else {
        pairwise_sum_complex(lo) + pairwise_sum_complex(hi)
    }
}

/// Sum of squared magnitudes, same tree as the plain sums.
pub fn pairwise_norm_sqr(xs: &[Complex64]) -> f64 {
    if xs.len() <= BASE {
        return xs.iter().map(Complex64::norm_sqr).sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    if xs.len() >= PAR_THRESHOLD {
        let (a, b) = join(|| pairwise_norm_sqr(lo), || pairwise_norm_sqr(hi));
        a + b
    } else {
        pairwise_norm_sqr(lo) + pairwise_norm_sqr(hi)
    }
}

pub fn pairwise_norm_sqr_f64(xs: &[f64]) -> f64 {
    if xs.len() <= BASE {
        return xs.iter().map(|x| x * x).sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    if xs.len() >= PAR_THRESHOLD {
        let (a, b) = join(|| pairwise_norm_sqr_f64(lo), || pairwise_norm_sqr_f64(hi));
        a + b
    } else {
        pairwise_norm_sqr_f64(lo) + pairwise_norm_sqr_f64(hi)
    }
}

/// Applies `f` to every element in place and returns the pairwise sum of the
/// new values in a single pass. The reduction tree matches `pairwise_sum_f64`
/// exactly, so fused and unfused paths agree bit for bit.
pub fn map_and_sum_f64<F>(xs: &mut [f64], f: &F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    if xs.len() <= BASE {
        let mut acc = 0.0;
        for x in xs.iter_mut() {
            *x = f(*x);
            acc += *x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    let par = xs.len() >= PAR_THRESHOLD;
    let (lo, hi) = xs.split_at_mut(mid);
    if par {
        let (a, b) = join(|| map_and_sum_f64(lo, f), || map_and_sum_f64(hi, f));
        a + b
    } else {
        map_and_sum_f64(lo, f) + map_and_sum_f64(hi, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (0..300).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum_f64(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn fused_map_sum_matches_separate_passes() {
        let mut xs: Vec<f64> = (0..100_000).map(|i| (i as f64 * 0.37).cos()).collect();
        let mut ys = xs.clone();
        let a = 0.125;
        let s_fused = map_and_sum_f64(&mut xs, &|v| 2.0 * a - v);
        for y in ys.iter_mut() {
            *y = 2.0 * a - *y;
        }
        let s_ref = pairwise_sum_f64(&ys);
        assert_eq!(xs, ys);
        assert_eq!(s_fused, s_ref, "fused and unfused trees must agree exactly");
    }

    #[test]
    fn complex_sum_real_lane_matches_f64_sum() {
        let res: Vec<f64> = (0..50_000).map(|i| (i as f64 * 0.11).sin()).collect();
        let cplx: Vec<Complex64> = res.iter().map(|&r| Complex64::new(r, -r)).collect();
        let s = pairwise_sum_complex(&cplx);
        assert_eq!(s.re, pairwise_sum_f64(&res));
        assert_eq!(s.im, -s.re);
    }
}
