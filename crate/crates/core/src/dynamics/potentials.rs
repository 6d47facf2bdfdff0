//! Potentials `V(q)` of separable Hamiltonians `h(q, p) = |p|²/2 + V(q)`.

use crate::scalar::Real;

/// A smooth potential with an analytic gradient.
pub trait Potential<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn name(&self) -> &str;
    fn value(&self, q: &[T]) -> T;
    /// Writes `∇V(q)` into `out`.
    fn gradient(&self, q: &[T], out: &mut [T]);
}

/// `h(z) = |p|²/2 + V(q)`.
pub fn hamiltonian<T: Real, P: Potential<T> + ?Sized>(pot: &P, q: &[T], p: &[T]) -> T {
    kinetic_energy(p) + pot.value(q)
}

pub fn kinetic_energy<T: Real>(p: &[T]) -> T {
    p.iter().fold(T::zero(), |acc, &x| acc + x * x) * T::lit(0.5)
}

/// `V = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Free {
    pub dim: usize,
}

impl<T: Real> Potential<T> for Free {
    fn dim(&self) -> usize {
        self.dim
    }
    fn name(&self) -> &str {
        "free"
    }
    fn value(&self, _q: &[T]) -> T {
        T::zero()
    }
    fn gradient(&self, _q: &[T], out: &mut [T]) {
        out.fill(T::zero());
    }
}

/// `V = |q|²/2`, whose flow rotates every block `(q_j, p_j)` clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub dim: usize,
}

impl<T: Real> Potential<T> for Harmonic {
    fn dim(&self) -> usize {
        self.dim
    }
    fn name(&self) -> &str {
        "harmonic"
    }
    fn value(&self, q: &[T]) -> T {
        kinetic_energy(q)
    }
    fn gradient(&self, q: &[T], out: &mut [T]) {
        out.copy_from_slice(q);
    }
}

/// `V = 2 − cos q₁ − cos q₂`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Torsional;

impl<T: Real> Potential<T> for Torsional {
    fn dim(&self) -> usize {
        2
    }
    fn name(&self) -> &str {
        "torsional"
    }
    fn value(&self, q: &[T]) -> T {
        T::lit(2.0) - q[0].cos() - q[1].cos()
    }
    fn gradient(&self, q: &[T], out: &mut [T]) {
        out[0] = q[0].sin();
        out[1] = q[1].sin();
    }
}

/// Chain of Henon–Heiles couplings with quartic confinement:
///
/// `V = ½|q|² + σ Σ_{j<d} (q_j² q_{j+1} − q_{j+1}³/3) + κ Σ_{j<d} (q_j² + q_{j+1}²)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenonHeiles {
    pub dim: usize,
    pub coupling: f64,
    pub confinement: f64,
}

impl HenonHeiles {
    pub const COUPLING: f64 = 1.8436;
    pub const CONFINEMENT: f64 = 0.4;

    pub fn new(dim: usize) -> Self {
        Self { dim, coupling: Self::COUPLING, confinement: Self::CONFINEMENT }
    }
}

impl<T: Real> Potential<T> for HenonHeiles {
    fn dim(&self) -> usize {
        self.dim
    }
    fn name(&self) -> &str {
        "henon-heiles"
    }
    fn value(&self, q: &[T]) -> T {
        let sigma = T::lit(self.coupling);
        let kappa = T::lit(self.confinement);
        let third = T::lit(1.0 / 3.0);
        let mut harmonic = T::zero();
        let mut cubic = T::zero();
        let mut quartic = T::zero();
        for &x in q {
            harmonic = harmonic + x * x;
        }
        for pair in q.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            cubic = cubic + a * a * b - third * b * b * b;
            let s = a * a + b * b;
            quartic = quartic + s * s;
        }
        T::lit(0.5) * harmonic + sigma * cubic + kappa * quartic
    }
    fn gradient(&self, q: &[T], out: &mut [T]) {
        let sigma = T::lit(self.coupling);
        let kappa4 = T::lit(4.0 * self.confinement);
        let two = T::lit(2.0);
        out.copy_from_slice(q);
        for j in 0..q.len().saturating_sub(1) {
            let (a, b) = (q[j], q[j + 1]);
            let s = kappa4 * (a * a + b * b);
            out[j] = out[j] + sigma * two * a * b + s * a;
            out[j + 1] = out[j + 1] + sigma * (a * a - b * b) + s * b;
        }
    }
}

/// `V = a q² + b q³ + c q⁴` in one dimension, a barrier separating a
/// shallow well at the origin from a deep one on the negative axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicWell {
    pub quadratic: f64,
    pub cubic: f64,
    pub quartic: f64,
}

impl Default for CubicWell {
    fn default() -> Self {
        Self { quadratic: 2.328, cubic: 1.0, quartic: 0.025 }
    }
}

impl CubicWell {
    /// Nonzero roots of `V'(q) = q(2a + 3b q + 4c q²)`, as (barrier top,
    /// deep minimum); `None` if the quadratic has no real roots.
    pub fn critical_points(&self) -> Option<(f64, f64)> {
        let (a, b, c) = (self.quadratic, self.cubic, self.quartic);
        let disc = 9.0 * b * b - 32.0 * a * c;
        if disc < 0.0 || c == 0.0 {
            return None;
        }
        let r1 = (-3.0 * b + disc.sqrt()) / (8.0 * c);
        let r2 = (-3.0 * b - disc.sqrt()) / (8.0 * c);
        Some(if r1.abs() < r2.abs() { (r1, r2) } else { (r2, r1) })
    }

    /// Location of the local maximum between the two wells.
    pub fn barrier_top(&self) -> Option<f64> {
        self.critical_points().map(|(top, _)| top)
    }
}

impl<T: Real> Potential<T> for CubicWell {
    fn dim(&self) -> usize {
        1
    }
    fn name(&self) -> &str {
        "cubic-well"
    }
    fn value(&self, q: &[T]) -> T {
        let x = q[0];
        x * x * (T::lit(self.quadratic) + x * (T::lit(self.cubic) + x * T::lit(self.quartic)))
    }
    fn gradient(&self, q: &[T], out: &mut [T]) {
        let x = q[0];
        out[0] = x * (T::lit(2.0 * self.quadratic) + x * (T::lit(3.0 * self.cubic) + x * T::lit(4.0 * self.quartic)));
    }
}
