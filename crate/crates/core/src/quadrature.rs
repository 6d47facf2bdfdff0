//! Tensor-product trapezoid rule on boxes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};

/// Integrals of `k` functions over the box `[lo, hi]` with `nodes` points
/// per axis, endpoints included. `f(x, out)` writes the `k` integrand values
/// at `x`. Spectrally accurate for integrands that decay to negligible
/// values at the box faces.
pub fn trapezoid_box_many<T, F>(lo: &[T], hi: &[T], nodes: usize, k: usize, f: F) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(&[T], &mut [T]) + Sync,
{
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
    }
    if nodes < 2 {
        return Err(Error::InvalidParameter { name: "nodes", reason: "need at least 2 per axis".into() });
    }
    let dim = lo.len();
    let steps: Vec<T> = lo.iter().zip(hi).map(|(&a, &b)| (b - a) / T::from_count(nodes - 1)).collect();
    let weight = |i: usize| if i == 0 || i == nodes - 1 { T::lit(0.5) } else { T::one() };
    let total = nodes.pow(dim as u32);
    // one partial sum per slab of the first axis, combined in order
    let partials: Vec<Vec<T>> = (0..nodes)
        .into_par_iter()
        .map(|i0| {
            let inner = total / nodes;
            let mut x = vec![T::zero(); dim];
            let mut vals = vec![T::zero(); k];
            let mut acc = vec![Vec::with_capacity(inner); k];
            for rest in 0..inner {
                let mut w = weight(i0);
                x[0] = lo[0] + T::from_count(i0) * steps[0];
                let mut r = rest;
                for axis in (1..dim).rev() {
                    let i = r % nodes;
                    r /= nodes;
                    x[axis] = lo[axis] + T::from_count(i) * steps[axis];
                    w = w * weight(i);
                }
                f(&x, &mut vals);
                for (a, &v) in acc.iter_mut().zip(&vals) {
                    a.push(w * v);
                }
            }
            acc.iter().map(|a| pairwise_sum(a)).collect()
        })
        .collect();
    let volume = steps.iter().fold(T::one(), |acc, &h| acc * h);
    Ok((0..k)
        .map(|j| {
            let column: Vec<T> = partials.iter().map(|p| p[j]).collect();
            pairwise_sum(&column) * volume
        })
        .collect())
}

/// Single-integrand form of [`trapezoid_box_many`].
pub fn trapezoid_box<T, F>(lo: &[T], hi: &[T], nodes: usize, f: F) -> Result<T>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    trapezoid_box_many(lo, hi, nodes, 1, |x, out| out[0] = f(x)).map(|v| v[0])
}
