//! Halton low-discrepancy sequence over the first 64 primes.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const PRIMES: [u64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103,
    107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
];

pub const MAX_DIM: usize = PRIMES.len();

/// Van der Corput radical inverse of `n` in `base`, computed on integers so
/// the only rounding is the final division.
pub fn radical_inverse(base: u64, mut n: u64) -> f64 {
    let mut numerator: u128 = 0;
    let mut denominator: u128 = 1;
    while n > 0 {
        numerator = numerator * base as u128 + (n % base) as u128;
        denominator *= base as u128;
        n /= base;
    }
    numerator as f64 / denominator as f64
}

/// Random-access view of a Halton sequence; element `i` is the radical
/// inverse vector of `i + 1 + skip` so element 0 of an unskipped sequence
/// is `(1/2, 1/3, 1/5, …)`.
#[derive(Debug, Clone, Copy)]
pub struct Halton {
    dim: usize,
    skip: u64,
}

impl Halton {
    pub fn new(dim: usize, skip: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter { name: "dim", reason: "must be positive".into() });
        }
        if dim > MAX_DIM {
            return Err(Error::HaltonDimensionTooLarge { requested: dim, max: MAX_DIM });
        }
        Ok(Self { dim, skip })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fill(&self, index: u64, out: &mut [f64]) {
        let n = index + 1 + self.skip;
        for (c, slot) in out.iter_mut().enumerate().take(self.dim) {
            *slot = radical_inverse(PRIMES[c], n);
        }
    }
}

/// The first `count` Halton points in `[0, 1]^dim` after dropping `skip`.
pub fn halton_points<T: Real>(dim: usize, count: usize, skip: u64) -> Result<Vec<Vec<T>>> {
    let h = Halton::new(dim, skip)?;
    let mut buf = vec![0.0; dim];
    Ok((0..count as u64)
        .map(|i| {
            h.fill(i, &mut buf);
            buf.iter().map(|&x| T::lit(x)).collect()
        })
        .collect())
}
