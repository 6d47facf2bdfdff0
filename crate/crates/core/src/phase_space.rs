//! Phase-space points, multi-indices and the analytic initial states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The semiclassical parameter ε > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SemiclassicalParam<T>(T);

impl<T: Real> SemiclassicalParam<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if epsilon > T::zero() && epsilon.is_finite() {
            Ok(Self(epsilon))
        } else {
            Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be positive and finite, got {epsilon}"),
            })
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

/// A point `z = (q, p)` of the phase space ℝ²ᵈ.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint<T> {
    pub q: Vec<T>,
    pub p: Vec<T>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(q: Vec<T>, p: Vec<T>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "phase space dimension must be at least 1".into(),
            });
        }
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: q.len(), found: p.len() });
        }
        Ok(Self { q, p })
    }

    pub fn origin(dim: usize) -> Self {
        Self { q: vec![T::zero(); dim], p: vec![T::zero(); dim] }
    }

    /// Builds a point from `[q_1, p_1]` style literals for d = 1.
    pub fn from_1d(q: T, p: T) -> Self {
        Self { q: vec![q], p: vec![p] }
    }

    /// Builds a point from a flat `[q_1..q_d, p_1..p_d]` slice.
    pub fn from_flat(z: &[T]) -> Result<Self> {
        if z.is_empty() || z.len() % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: format!("flat phase point needs an even positive length, got {}", z.len()),
            });
        }
        let d = z.len() / 2;
        Self::new(z[..d].to_vec(), z[d..].to_vec())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            q: self.q.iter().zip(&other.q).map(|(&a, &b)| a - b).collect(),
            p: self.p.iter().zip(&other.p).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            q: self.q.iter().zip(&other.q).map(|(&a, &b)| a + b).collect(),
            p: self.p.iter().zip(&other.p).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.q.iter().chain(&self.p).fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// Squared length of the block `z_j = (q_j, p_j)`.
    #[inline]
    pub fn block_norm_sqr(&self, j: usize) -> T {
        self.q[j] * self.q[j] + self.p[j] * self.p[j]
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.p).all(|x| x.is_finite())
    }

    /// Complexified coordinates `q + i p`.
    pub fn complexified(&self) -> Vec<Complex<T>> {
        self.q.iter().zip(&self.p).map(|(&q, &p)| Complex::new(q, p)).collect()
    }
}

/// Non-negative multi-index `k ∈ ℕᵈ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Self {
        Self(k)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut k = vec![0; dim];
        k[j] = 1;
        Self(k)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `|k| = k_1 + … + k_d`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `k + e_j`.
    pub fn raised(&self, j: usize) -> Self {
        let mut k = self.0.clone();
        k[j] += 1;
        Self(k)
    }

    /// `k - e_j`, or `None` when `k_j = 0`.
    pub fn lowered(&self, j: usize) -> Option<Self> {
        let mut k = self.0.clone();
        k[j] = k[j].checked_sub(1)?;
        Some(Self(k))
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, j: usize) -> &u32 {
        &self.0[j]
    }
}

/// The three analytic state families.
#[derive(Debug, Clone, PartialEq)]
pub enum StateKind<T> {
    /// Gaussian wave packet `g_z`.
    Gaussian { center: PhasePoint<T> },
    /// Translated Hermite function `T_z φ_k`.
    TranslatedHermite { center: PhasePoint<T>, k: MultiIndex },
    /// Unit-coefficient superposition `g_{z1} + g_{z2}` (not normalized).
    GaussianSuperposition { centers: (PhasePoint<T>, PhasePoint<T>) },
}

/// A state family member together with its semiclassical parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState<T> {
    pub kind: StateKind<T>,
    pub eps: SemiclassicalParam<T>,
}

impl<T: Real> InitialState<T> {
    pub fn gaussian(center: PhasePoint<T>, eps: T) -> Result<Self> {
        Ok(Self { kind: StateKind::Gaussian { center }, eps: SemiclassicalParam::new(eps)? })
    }

    pub fn hermite(center: PhasePoint<T>, k: MultiIndex, eps: T) -> Result<Self> {
        if k.dim() != center.dim() {
            return Err(Error::DimensionMismatch { expected: center.dim(), found: k.dim() });
        }
        Ok(Self { kind: StateKind::TranslatedHermite { center, k }, eps: SemiclassicalParam::new(eps)? })
    }

    pub fn superposition(z1: PhasePoint<T>, z2: PhasePoint<T>, eps: T) -> Result<Self> {
        z1.check_dim(&z2)?;
        Ok(Self {
            kind: StateKind::GaussianSuperposition { centers: (z1, z2) },
            eps: SemiclassicalParam::new(eps)?,
        })
    }

    #[inline]
    pub fn eps(&self) -> T {
        self.eps.get()
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            StateKind::Gaussian { center } | StateKind::TranslatedHermite { center, .. } => center.dim(),
            StateKind::GaussianSuperposition { centers } => centers.0.dim(),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.kind {
            StateKind::Gaussian { .. } => "gaussian",
            StateKind::TranslatedHermite { .. } => "hermite",
            StateKind::GaussianSuperposition { .. } => "superposition",
        }
    }

    /// `‖ψ‖²`: one for the normalized families, `2 + 2 Re⟨g_{z1}, g_{z2}⟩`
    /// for the superposition.
    pub fn norm_sqr(&self) -> T {
        match &self.kind {
            StateKind::GaussianSuperposition { centers } => {
                let ip = gaussian_inner_product(&centers.0, &centers.1, self.eps())
                    .expect("centers share a dimension");
                T::lit(2.0) + T::lit(2.0) * ip.re
            }
            _ => T::one(),
        }
    }

    /// Phase-space mean `(⟨q⟩, ⟨p⟩)` of the state; the center for the
    /// normalized families.
    pub fn mean(&self) -> PhasePoint<T> {
        match &self.kind {
            StateKind::Gaussian { center } | StateKind::TranslatedHermite { center, .. } => center.clone(),
            StateKind::GaussianSuperposition { centers } => {
                // ⟨g1, x g2⟩ = ½(z2ᶜ + conj z1ᶜ)⟨g1, g2⟩ and
                // ⟨g1, -iε∇ g2⟩ = -½i(z2ᶜ - conj z1ᶜ)⟨g1, g2⟩
                let eps = self.eps();
                let ip = gaussian_inner_product(&centers.0, &centers.1, eps).unwrap();
                let n = self.norm_sqr();
                let mid = centers.0.add(&centers.1);
                let diff = centers.1.sub(&centers.0);
                let half = T::lit(0.5);
                let mut q = Vec::with_capacity(mid.dim());
                let mut p = Vec::with_capacity(mid.dim());
                for j in 0..mid.dim() {
                    let xq = Complex::new(half * mid.q[j], half * diff.p[j]);
                    let xp = Complex::new(half * mid.p[j], -half * diff.q[j]);
                    q.push((centers.0.q[j] + centers.1.q[j] + T::lit(2.0) * (ip * xq).re) / n);
                    p.push((centers.0.p[j] + centers.1.p[j] + T::lit(2.0) * (ip * xp).re) / n);
                }
                PhasePoint { q, p }
            }
        }
    }
}

/// `Ω(z1, z2) = q1·p2 − p1·q2`.
pub fn symplectic_form<T: Real>(z1: &PhasePoint<T>, z2: &PhasePoint<T>) -> Result<T> {
    z1.check_dim(z2)?;
    Ok(symplectic_form_unchecked(z1, z2))
}

#[inline]
pub(crate) fn symplectic_form_unchecked<T: Real>(z1: &PhasePoint<T>, z2: &PhasePoint<T>) -> T {
    let mut acc = T::zero();
    for j in 0..z1.dim() {
        acc = acc + z1.q[j] * z2.p[j] - z1.p[j] * z2.q[j];
    }
    acc
}

/// `⟨g_{z1}, g_{z2}⟩ = exp(−|z1−z2|²/(4ε) + (i/2ε) Ω(z1, z2))`.
pub fn gaussian_inner_product<T: Real>(z1: &PhasePoint<T>, z2: &PhasePoint<T>, eps: T) -> Result<Complex<T>> {
    z1.check_dim(z2)?;
    let dist = z1.sub(z2).norm_sqr();
    let omega = symplectic_form_unchecked(z1, z2);
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    Ok(Complex::from_polar((-dist / (four * eps)).exp(), omega / (two * eps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(q: f64, p: f64) -> PhasePoint<f64> {
        PhasePoint::from_1d(q, p)
    }

    #[test]
    fn symplectic_form_examples() {
        let z = PhasePoint::new(vec![0.3, -1.2], vec![2.0, 0.7]).unwrap();
        assert_eq!(symplectic_form(&z, &z).unwrap(), 0.0);
        assert_eq!(symplectic_form(&pt(1.0, 0.0), &pt(0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(symplectic_form(&pt(2.0, 3.0), &pt(5.0, 7.0)).unwrap(), -1.0);
    }

    #[test]
    fn symplectic_form_rejects_mismatch() {
        let a = PhasePoint::<f64>::origin(1);
        let b = PhasePoint::<f64>::origin(2);
        assert_eq!(
            symplectic_form(&a, &b),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn gaussian_inner_product_examples() {
        let z = pt(0.4, -0.9);
        let ip = gaussian_inner_product(&z, &z, 0.1).unwrap();
        assert_eq!((ip.re, ip.im), (1.0, 0.0));

        let ip = gaussian_inner_product(&pt(0.0, 0.0), &pt(1.0, 0.0), 0.25).unwrap();
        assert!((ip.re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(ip.im.abs() < 1e-15);
        assert!((ip.re - 0.3679).abs() < 1e-4);
    }

    #[test]
    fn gaussian_inner_product_modulus() {
        let a = PhasePoint::new(vec![0.1, 2.0], vec![-0.5, 0.3]).unwrap();
        let b = PhasePoint::new(vec![-0.7, 1.1], vec![0.4, 0.9]).unwrap();
        let eps = 0.37f64;
        let ip = gaussian_inner_product(&a, &b, eps).unwrap();
        let expected = (-a.sub(&b).norm_sqr() / (4.0 * eps)).exp();
        assert!((ip.norm() - expected).abs() < 1e-15);
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(SemiclassicalParam::new(0.0f64).is_err());
        assert!(SemiclassicalParam::new(-1.0f64).is_err());
        assert!(SemiclassicalParam::new(f64::NAN).is_err());
        assert!(SemiclassicalParam::new(0.1f64).is_ok());
    }

    #[test]
    fn phase_point_requires_equal_lengths() {
        assert!(PhasePoint::new(vec![1.0f64], vec![1.0, 2.0]).is_err());
        assert!(PhasePoint::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn multi_index_raise_lower() {
        let k = MultiIndex::new(vec![0, 2]);
        assert_eq!(k.raised(0), MultiIndex::new(vec![1, 2]));
        assert_eq!(k.lowered(0), None);
        assert_eq!(k.lowered(1), Some(MultiIndex::new(vec![0, 1])));
        assert_eq!(k.order(), 2);
    }
}
