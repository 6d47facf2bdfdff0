//! Signed-mixture decomposition of `μ_ψ` and Monte Carlo / Halton samplers
//! for its Gamma-sampleable components.

mod gamma;
mod halton;
mod mixture;
mod normal;
mod source;

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;
use crate::scalar::Real;

pub use gamma::{gamma_cdf, gamma_inverse_cdf, gamma_pdf};
pub use halton::{halton_points, radical_inverse, Halton, MAX_DIM as HALTON_MAX_DIM, PRIMES};
pub use mixture::{
    signed_mixture_decomposition, weight_to_real, MixtureComponent, ProductDensity, SignedMixture,
    SphereRadialDensity, Weight,
};
pub use normal::{normal_cdf, normal_inverse_cdf};
pub use source::UniformSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerMode {
    MonteCarlo,
    Halton,
}

impl SamplerMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::MonteCarlo => "mc",
            Self::Halton => "halton",
        }
    }
}

/// How [`sample_sphere_radial`] produces its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SphereRoute {
    /// `Direct` for Monte Carlo, `BlockMixture` for Halton.
    #[default]
    Auto,
    /// Normalized `2d` normals for the direction and a `Gamma(d + 1, 2ε)`
    /// squared radius; needs `2d + 1` uniforms per point.
    Direct,
    /// The equal-law mixture over `j` of product densities with order 1 in
    /// block `j` and 0 elsewhere. Point `i` of `N` uses block
    /// `⌊i·d/N⌋`. Needs `2d` uniforms per point, in the same layout as the
    /// product samplers.
    BlockMixture,
}

/// Whether the components of a mixture draw from separate Monte Carlo
/// streams or reuse one. Halton components always share the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StreamCoupling {
    /// Component `c` uses stream [`component_stream`]`(stream, c)`.
    #[default]
    Independent,
    /// Every component uses the same uniforms for point `i` (common random
    /// numbers). Signed-weight differences then cancel most of their noise.
    /// The sphere-radial component switches to the block route so that its
    /// uniform layout matches the product components.
    Common,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub mode: SamplerMode,
    /// Points per component.
    pub count: usize,
    pub seed: u64,
    /// Leading Halton elements dropped.
    pub halton_skip: u64,
    /// Selects an independent Monte Carlo stream for the same seed.
    pub stream: u64,
    pub sphere_route: SphereRoute,
    pub coupling: StreamCoupling,
}

impl SamplerConfig {
    pub const DEFAULT_HALTON_SKIP: u64 = 64;

    pub fn new(mode: SamplerMode, count: usize, seed: u64) -> Self {
        Self {
            mode,
            count,
            seed,
            halton_skip: Self::DEFAULT_HALTON_SKIP,
            stream: 0,
            sphere_route: SphereRoute::Auto,
            coupling: StreamCoupling::Independent,
        }
    }

    pub fn monte_carlo(count: usize, seed: u64) -> Self {
        Self::new(SamplerMode::MonteCarlo, count, seed)
    }

    pub fn halton(count: usize) -> Self {
        Self::new(SamplerMode::Halton, count, 0)
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_sphere_route(mut self, route: SphereRoute) -> Self {
        self.sphere_route = route;
        self
    }

    pub fn with_coupling(mut self, coupling: StreamCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    /// The configuration component `c` of a mixture samples with.
    pub fn for_component(&self, c: usize) -> Self {
        let stream = match self.coupling {
            StreamCoupling::Independent => component_stream(self.stream, c),
            StreamCoupling::Common => self.stream,
        };
        self.clone().with_stream(stream)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter { name: "count", reason: "must be at least 1".into() });
        }
        Ok(())
    }

    fn source(&self, dim: usize) -> Result<UniformSource> {
        match self.mode {
            SamplerMode::MonteCarlo => Ok(UniformSource::monte_carlo(self.seed, self.stream)),
            SamplerMode::Halton => UniformSource::halton(dim, self.halton_skip),
        }
    }

    fn resolved_route(&self) -> SphereRoute {
        match (self.sphere_route, self.mode) {
            (SphereRoute::Auto, SamplerMode::MonteCarlo) if self.coupling == StreamCoupling::Independent => {
                SphereRoute::Direct
            }
            (SphereRoute::Auto, SamplerMode::MonteCarlo) => SphereRoute::BlockMixture,
            (SphereRoute::Auto, SamplerMode::Halton) => SphereRoute::BlockMixture,
            (route, _) => route,
        }
    }
}

/// Maps a uniform in (0, 1) to the scalar type without landing on 0 or 1.
fn open_unit<T: Real>(u: f64) -> T {
    let half_eps = T::epsilon() * T::lit(0.5);
    let x = T::lit(u);
    x.max(T::min_positive_value()).min(T::one() - half_eps)
}

fn generate<T, F>(count: usize, uniforms: usize, source: &UniformSource, build: F) -> Result<Vec<PhasePoint<T>>>
where
    T: Real,
    F: Fn(usize, &[f64]) -> Result<PhasePoint<T>> + Sync,
{
    (0..count)
        .into_par_iter()
        .map_init(
            || vec![0.0; uniforms],
            |buf, i| {
                source.fill(i as u64, buf);
                build(i, buf)
            },
        )
        .collect()
}

/// Places block `j` at angle `2πu_θ` and squared radius `τ` around the center.
fn block_point<T: Real>(center: &PhasePoint<T>, j: usize, u_angle: f64, tau: T, q: &mut [T], p: &mut [T]) {
    let theta = T::lit(2.0) * T::PI() * T::lit(u_angle);
    let r = tau.sqrt();
    q[j] = center.q[j] + r * theta.cos();
    p[j] = center.p[j] + r * theta.sin();
}

/// `N` points of `∏_j h_{m_j}(w_j − z_j)`. Uniforms per point are laid out
/// `[θ_1, τ_1, θ_2, τ_2, …]`.
pub fn sample_product_density<T: Real>(pd: &ProductDensity<T>, cfg: &SamplerConfig) -> Result<Vec<PhasePoint<T>>> {
    cfg.validate()?;
    let d = pd.center.dim();
    let scale = T::lit(2.0) * pd.eps;
    let source = cfg.source(2 * d)?;
    generate(cfg.count, 2 * d, &source, |_, u| {
        let mut q = vec![T::zero(); d];
        let mut p = vec![T::zero(); d];
        for j in 0..d {
            let tau = gamma_inverse_cdf(pd.block_orders[j] + 1, scale, open_unit(u[2 * j + 1]))?;
            block_point(&pd.center, j, u[2 * j], tau, &mut q, &mut p);
        }
        Ok(PhasePoint { q, p })
    })
}

/// `N` points with uniform direction on the sphere of `ℝ²ᵈ` and squared
/// radius `Gamma(d + 1, 2ε)`, by the route selected in `cfg`.
pub fn sample_sphere_radial<T: Real>(sd: &SphereRadialDensity<T>, cfg: &SamplerConfig) -> Result<Vec<PhasePoint<T>>> {
    cfg.validate()?;
    let d = sd.center.dim();
    let scale = T::lit(2.0) * sd.eps;
    match cfg.resolved_route() {
        SphereRoute::Direct | SphereRoute::Auto => {
            let source = cfg.source(2 * d + 1)?;
            generate(cfg.count, 2 * d + 1, &source, |_, u| {
                let mut dir = Vec::with_capacity(2 * d);
                for &x in &u[..2 * d] {
                    dir.push(normal_inverse_cdf::<T>(open_unit(x))?);
                }
                let norm = dir.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
                let tau = gamma_inverse_cdf(sd.radial_shape(), scale, open_unit(u[2 * d]))?;
                let r = tau.sqrt() / norm;
                // direction coordinates alternate (q_j, p_j) block by block
                let q = (0..d).map(|j| sd.center.q[j] + r * dir[2 * j]).collect();
                let p = (0..d).map(|j| sd.center.p[j] + r * dir[2 * j + 1]).collect();
                Ok(PhasePoint { q, p })
            })
        }
        SphereRoute::BlockMixture => {
            let source = cfg.source(2 * d)?;
            let n = cfg.count;
            generate(cfg.count, 2 * d, &source, |i, u| {
                let raised = ((i as u128 * d as u128) / n as u128) as usize;
                let mut q = vec![T::zero(); d];
                let mut p = vec![T::zero(); d];
                for j in 0..d {
                    let shape = if j == raised { 2 } else { 1 };
                    let tau = gamma_inverse_cdf(shape, scale, open_unit(u[2 * j + 1]))?;
                    block_point(&sd.center, j, u[2 * j], tau, &mut q, &mut p);
                }
                Ok(PhasePoint { q, p })
            })
        }
    }
}

/// `N` points of the Gaussian Wigner function of `g_z`: independent normal
/// coordinates with variance `ε/2`.
pub fn sample_wigner_gaussian<T: Real>(center: &PhasePoint<T>, eps: T, cfg: &SamplerConfig) -> Result<Vec<PhasePoint<T>>> {
    cfg.validate()?;
    let d = center.dim();
    let sigma = (eps * T::lit(0.5)).sqrt();
    let source = cfg.source(2 * d)?;
    generate(cfg.count, 2 * d, &source, |_, u| {
        let mut q = Vec::with_capacity(d);
        let mut p = Vec::with_capacity(d);
        for j in 0..d {
            q.push(center.q[j] + sigma * normal_inverse_cdf::<T>(open_unit(u[2 * j]))?);
            p.push(center.p[j] + sigma * normal_inverse_cdf::<T>(open_unit(u[2 * j + 1]))?);
        }
        Ok(PhasePoint { q, p })
    })
}

/// Points drawn from one mixture component together with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble<T> {
    pub weight: Weight,
    pub points: Vec<PhasePoint<T>>,
}

/// Monte Carlo stream of component `c` under independent coupling, so
/// components draw independent points under one seed.
pub fn component_stream(base: u64, component: usize) -> u64 {
    base.wrapping_mul(1 << 20).wrapping_add(component as u64)
}

pub fn sample_component<T: Real>(component: &MixtureComponent<T>, cfg: &SamplerConfig) -> Result<Vec<PhasePoint<T>>> {
    match component {
        MixtureComponent::Product(pd) => sample_product_density(pd, cfg),
        MixtureComponent::SphereRadial(sd) => sample_sphere_radial(sd, cfg),
    }
}

/// `N` points for every component of `mixture`.
pub fn sample_mixture<T: Real>(mixture: &SignedMixture<T>, cfg: &SamplerConfig) -> Result<Vec<WeightedEnsemble<T>>> {
    mixture
        .components
        .iter()
        .enumerate()
        .map(|(c, (weight, component))| {
            let cfg = cfg.for_component(c);
            Ok(WeightedEnsemble { weight: *weight, points: sample_component(component, &cfg)? })
        })
        .collect()
}

/// Writes `component,weight,q1..qd,p1..pd`, one row per point.
pub fn write_point_dump<T: Real, W: Write>(out: &mut W, ensembles: &[WeightedEnsemble<T>]) -> std::io::Result<()> {
    let d = ensembles.iter().find_map(|e| e.points.first()).map_or(0, PhasePoint::dim);
    write!(out, "component,weight")?;
    for j in 1..=d {
        write!(out, ",q{j}")?;
    }
    for j in 1..=d {
        write!(out, ",p{j}")?;
    }
    writeln!(out)?;
    for (c, ens) in ensembles.iter().enumerate() {
        let weight = weight_to_real::<f64>(ens.weight);
        for point in &ens.points {
            write!(out, "{c},{weight:.16e}")?;
            for x in point.q.iter().chain(&point.p) {
                write!(out, ",{:.16e}", x.to_f64_lossy())?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
