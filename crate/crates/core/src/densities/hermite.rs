use num_complex::Complex;

use crate::phase_space::{MultiIndex, PhasePoint};
use crate::scalar::{ln_factorial, Real};

/// Univariate Hermite–Husimi factor
/// `h_n(w) = (2πε)⁻¹ ρⁿ/n! · e^{−ρ}` with `ρ = |w|²/(2ε)`, evaluated in log
/// space. `block_norm_sqr` is `|w|²` for a block `w ∈ ℝ²`.
pub fn hermite_husimi_factor<T: Real>(n: u32, block_norm_sqr: T, eps: T) -> T {
    let two = T::lit(2.0);
    let rho = block_norm_sqr / (two * eps);
    let norm = T::one() / (two * T::PI() * eps);
    if n == 0 {
        return norm * (-rho).exp();
    }
    if rho <= T::zero() {
        return T::zero();
    }
    let n_t = T::from_u32(n).unwrap();
    norm * (n_t * rho.ln() - rho - ln_factorial::<T>(n)).exp()
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre<T: Real>(n: u32, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() - x;
    for m in 1..n {
        let m_t = T::from_u32(m).unwrap();
        let next = ((T::lit(2.0) * m_t + T::one() - x) * cur - m_t * prev) / (m_t + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// FBI transform of a Hermite function,
/// `(2πε)^{-d/2}⟨g_z, φ_k⟩ = ((2πε)^d k!)^{-1/2} ((q − ip)/√(2ε))^k e^{−|z|²/(4ε)}`.
pub fn fbi_hermite<T: Real>(z: &PhasePoint<T>, k: &MultiIndex, eps: T) -> Complex<T> {
    let d = z.dim();
    debug_assert_eq!(d, k.dim());
    let two = T::lit(2.0);
    let scale = T::one() / (two * eps).sqrt();
    let mut acc = Complex::new(T::one(), T::zero());
    let mut ln_kfact = T::zero();
    for j in 0..d {
        let kj = k[j];
        if kj > 0 {
            let base = Complex::new(z.q[j] * scale, -z.p[j] * scale);
            acc = acc * base.powu(kj);
            ln_kfact = ln_kfact + ln_factorial::<T>(kj);
        }
    }
    let d_t = T::from_count(d);
    let ln_norm = -(d_t * (two * T::PI() * eps).ln() + ln_kfact) / two;
    acc * (ln_norm - z.norm_sqr() / (T::lit(4.0) * eps)).exp()
}
