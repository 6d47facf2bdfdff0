//! Signed mixtures of Gamma-sampleable product densities.

use num_rational::Ratio;

use crate::densities::hermite_husimi_factor;
use crate::error::{Error, Result};
use crate::phase_space::{InitialState, MultiIndex, PhasePoint, StateKind};
use crate::scalar::Real;

/// Exact mixture weight; all weights are integer multiples of ½.
pub type Weight = Ratio<i64>;

/// `w ↦ ∏_j h_{m_j}(w_j − z_j)`: per block an angle uniform on the circle
/// and a squared radius `Gamma(m_j + 1, 2ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDensity<T> {
    pub center: PhasePoint<T>,
    pub block_orders: MultiIndex,
    pub eps: T,
}

impl<T: Real> ProductDensity<T> {
    pub fn density(&self, w: &PhasePoint<T>) -> T {
        let x = w.sub(&self.center);
        (0..x.dim())
            .map(|j| hermite_husimi_factor(self.block_orders[j], x.block_norm_sqr(j), self.eps))
            .fold(T::one(), |acc, h| acc * h)
    }
}

/// Isotropic density on ℝ²ᵈ around `center`: direction uniform on the
/// sphere, squared radius `Gamma(d + 1, 2ε)`. For Gaussian states this is
/// the law of `(1/d) Σ_j W_ψ * W_{φ_{e_j}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRadialDensity<T> {
    pub center: PhasePoint<T>,
    pub eps: T,
}

impl<T: Real> SphereRadialDensity<T> {
    /// Radial shape parameter `d + 1`.
    pub fn radial_shape(&self) -> u32 {
        self.center.dim() as u32 + 1
    }

    pub fn density(&self, w: &PhasePoint<T>) -> T {
        let d = self.center.dim();
        let d_t = T::from_count(d);
        let two = T::lit(2.0);
        let r2 = w.sub(&self.center).norm_sqr();
        // (2πε)^{-d} · (r²/(2ε))/d · e^{-r²/(2ε)}
        (two * T::PI() * self.eps).powf(-d_t) * r2 / (two * self.eps) / d_t * (-r2 / (two * self.eps)).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MixtureComponent<T> {
    Product(ProductDensity<T>),
    SphereRadial(SphereRadialDensity<T>),
}

impl<T: Real> MixtureComponent<T> {
    pub fn density(&self, w: &PhasePoint<T>) -> T {
        match self {
            Self::Product(pd) => pd.density(w),
            Self::SphereRadial(sd) => sd.density(w),
        }
    }

    pub fn center(&self) -> &PhasePoint<T> {
        match self {
            Self::Product(pd) => &pd.center,
            Self::SphereRadial(sd) => &sd.center,
        }
    }
}

/// `μ_ψ = Σ_c weight_c · density_c` with each density a probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMixture<T> {
    pub components: Vec<(Weight, MixtureComponent<T>)>,
}

impl<T: Real> SignedMixture<T> {
    pub fn weight_sum(&self) -> Weight {
        self.components.iter().map(|(w, _)| *w).sum()
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.components.iter().map(|(w, _)| *w).collect()
    }

    pub fn density(&self, w: &PhasePoint<T>) -> T {
        self.components
            .iter()
            .map(|(weight, c)| weight_to_real::<T>(*weight) * c.density(w))
            .fold(T::zero(), |acc, x| acc + x)
    }

    /// Replaces the `d` unit spectrogram components `(−½, m = e_j)` of a
    /// Gaussian decomposition by one [`SphereRadialDensity`] of weight
    /// `−d/2`. Other mixtures are returned unchanged.
    pub fn pool_unit_spectrograms(self) -> Self {
        let Some((_, MixtureComponent::Product(first))) = self.components.first() else {
            return self;
        };
        let d = first.center.dim();
        let gaussian = first.block_orders.is_zero()
            && self.components.len() == d + 1
            && self.components[1..].iter().enumerate().all(|(j, (w, c))| {
                *w == Weight::new(-1, 2)
                    && matches!(c, MixtureComponent::Product(pd) if pd.block_orders == MultiIndex::unit(d, j))
            });
        if !gaussian {
            return self;
        }
        let sphere = SphereRadialDensity { center: first.center.clone(), eps: first.eps };
        let head = self.components[0].clone();
        Self {
            components: vec![head, (Weight::new(-(d as i64), 2), MixtureComponent::SphereRadial(sphere))],
        }
    }
}

pub fn weight_to_real<T: Real>(w: Weight) -> T {
    T::from_i64(*w.numer()).unwrap() / T::from_i64(*w.denom()).unwrap()
}

/// Splits `μ_ψ` of a Gaussian or translated Hermite state into product
/// densities with exact weights.
///
/// For `T_z φ_k`: weight `1 + d/2 + |k|` on `m = k`, `−k_j/2` on `m = k − e_j`
/// (omitted when `k_j = 0`) and `−(k_j + 1)/2` on `m = k + e_j`. A Gaussian is
/// the case `k = 0`.
pub fn signed_mixture_decomposition<T: Real>(state: &InitialState<T>) -> Result<SignedMixture<T>> {
    let eps = state.eps();
    let (center, k) = match &state.kind {
        StateKind::Gaussian { center } => (center, MultiIndex::zeros(center.dim())),
        StateKind::TranslatedHermite { center, k } => (center, k.clone()),
        StateKind::GaussianSuperposition { .. } => {
            return Err(Error::UnsupportedState { state: "superposition", operation: "signed_mixture_decomposition" })
        }
    };
    let d = center.dim();
    let product = |m: MultiIndex| {
        MixtureComponent::Product(ProductDensity { center: center.clone(), block_orders: m, eps })
    };
    let mut components = Vec::with_capacity(2 * d + 1);
    let head = Weight::new(2 + d as i64 + 2 * i64::from(k.order()), 2);
    components.push((head, product(k.clone())));
    for j in 0..d {
        if let Some(lower) = k.lowered(j) {
            components.push((Weight::new(-i64::from(k[j]), 2), product(lower)));
        }
        components.push((Weight::new(-(i64::from(k[j]) + 1), 2), product(k.raised(j))));
    }
    Ok(SignedMixture { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::eval_mu;

    #[test]
    fn gaussian_two_dimensional_weights() {
        let s = InitialState::gaussian(PhasePoint::<f64>::origin(2), 0.1).unwrap();
        let m = signed_mixture_decomposition(&s).unwrap();
        assert_eq!(m.weights(), vec![Weight::from(2), Weight::new(-1, 2), Weight::new(-1, 2)]);
        assert_eq!(m.weight_sum(), Weight::from(1));
    }

    #[test]
    fn first_hermite_weights() {
        let s = InitialState::hermite(PhasePoint::<f64>::origin(1), MultiIndex::new(vec![1]), 0.1).unwrap();
        let m = signed_mixture_decomposition(&s).unwrap();
        let orders: Vec<u32> = m
            .components
            .iter()
            .map(|(_, c)| match c {
                MixtureComponent::Product(pd) => pd.block_orders[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(orders, vec![1, 0, 2]);
        assert_eq!(m.weights(), vec![Weight::new(5, 2), Weight::new(-1, 2), Weight::from(-1)]);
        assert_eq!(m.weight_sum(), Weight::from(1));
    }

    #[test]
    fn superposition_is_rejected() {
        let s = InitialState::superposition(PhasePoint::<f64>::origin(1), PhasePoint::from_1d(1.0, 0.0), 0.1).unwrap();
        assert!(matches!(signed_mixture_decomposition(&s), Err(Error::UnsupportedState { .. })));
    }

    #[test]
    fn mixture_density_reproduces_mu() {
        let c = PhasePoint::new(vec![0.2, -0.1], vec![0.5, 0.3]).unwrap();
        let s = InitialState::hermite(c, MultiIndex::new(vec![2, 1]), 0.15).unwrap();
        let m = signed_mixture_decomposition(&s).unwrap();
        for flat in [[0.0f64, 0.0, 0.0, 0.0], [0.4, -0.3, 0.9, 0.1], [0.1, 0.2, 0.3, -0.4]] {
            let w = PhasePoint::from_flat(&flat).unwrap();
            let a = m.density(&w);
            let b = eval_mu(&s, &w).unwrap();
            assert!((a - b).abs() < 1e-13 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn pooled_gaussian_density_matches() {
        let c = PhasePoint::new(vec![0.2, -0.1, 0.3], vec![0.5, 0.3, 0.0]).unwrap();
        let s = InitialState::gaussian(c, 0.2).unwrap();
        let m = signed_mixture_decomposition(&s).unwrap();
        let pooled = m.clone().pool_unit_spectrograms();
        assert_eq!(pooled.components.len(), 2);
        assert_eq!(pooled.weights(), vec![Weight::new(5, 2), Weight::new(-3, 2)]);
        let w = PhasePoint::<f64>::from_flat(&[0.1, 0.0, 0.5, 0.4, 0.2, -0.3]).unwrap();
        assert!((m.density(&w) - pooled.density(&w)).abs() < 1e-13);
    }

    #[test]
    fn pooling_leaves_hermite_untouched() {
        let s = InitialState::hermite(PhasePoint::<f64>::origin(1), MultiIndex::new(vec![1]), 0.1).unwrap();
        let m = signed_mixture_decomposition(&s).unwrap();
        assert_eq!(m.clone().pool_unit_spectrograms(), m);
    }
}
