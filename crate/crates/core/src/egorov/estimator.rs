use rayon::prelude::*;

use super::observables::{evaluate_observable, ObservableSymbol};
use super::series::{EstimatorMethod, ExpectationSeries, SeriesMeta, SeriesMethod};
use crate::dynamics::{flow_ensemble, hamiltonian, IntegratorConfig, Potential};
use crate::error::{Error, Result};
use crate::phase_space::{InitialState, MultiIndex, PhasePoint, StateKind};
use crate::sampling::{
    sample_mixture, sample_product_density, sample_wigner_gaussian, signed_mixture_decomposition,
    weight_to_real, ProductDensity, SamplerConfig,
};
use crate::scalar::{pairwise_sum, Real};

/// The initial ensembles of `method`: each with its real weight.
pub fn initial_ensembles<T: Real>(
    state: &InitialState<T>,
    method: EstimatorMethod,
    sampler: &SamplerConfig,
) -> Result<Vec<(T, Vec<PhasePoint<T>>)>> {
    let unsupported = || Error::UnsupportedMethod { method: method.name(), state: state.family_name() };
    match method {
        EstimatorMethod::Spectrogram => {
            let mixture = signed_mixture_decomposition(state)?.pool_unit_spectrograms();
            Ok(sample_mixture(&mixture, sampler)?
                .into_iter()
                .map(|e| (weight_to_real(e.weight), e.points))
                .collect())
        }
        EstimatorMethod::NaiveHusimi => {
            let (center, orders) = match &state.kind {
                StateKind::Gaussian { center } => (center.clone(), MultiIndex::zeros(center.dim())),
                StateKind::TranslatedHermite { center, k } => (center.clone(), k.clone()),
                StateKind::GaussianSuperposition { .. } => return Err(unsupported()),
            };
            let pd = ProductDensity { center, block_orders: orders, eps: state.eps() };
            let cfg = sampler.for_component(0);
            Ok(vec![(T::one(), sample_product_density(&pd, &cfg)?)])
        }
        EstimatorMethod::WignerGaussian => match &state.kind {
            StateKind::Gaussian { center } => {
                let cfg = sampler.for_component(0);
                Ok(vec![(T::one(), sample_wigner_gaussian(center, state.eps(), &cfg)?)])
            }
            _ => Err(unsupported()),
        },
    }
}

/// Expectation values `Σ_c w_c · mean_c a(Φ_t(z))` over the recorded times.
///
/// All components are flowed together. Every component holds the same number
/// of points, so point `i` of each component forms one paired sample
/// `Σ_c w_c a(Φ_t(z_i^c))`; `std_errors` is the standard deviation of these
/// paired samples over `√N`. This is the Monte Carlo standard error under
/// either stream coupling. For Halton ensembles it only indicates the spread
/// of the integrand.
pub fn run_estimator<T: Real, P: Potential<T> + ?Sized>(
    state: &InitialState<T>,
    method: EstimatorMethod,
    observables: &[ObservableSymbol<T>],
    sampler: &SamplerConfig,
    integrator: &IntegratorConfig<T>,
    pot: &P,
) -> Result<ExpectationSeries<T>> {
    if state.dim() != pot.dim() {
        return Err(Error::DimensionMismatch { expected: pot.dim(), found: state.dim() });
    }
    for a in observables {
        a.check_dim(state.dim())?;
    }
    sampler.validate()?;
    integrator.validate()?;
    let ensembles = initial_ensembles(state, method, sampler)?;
    let components = ensembles.len();
    let n = sampler.count;
    let weights: Vec<T> = ensembles.iter().map(|(w, _)| *w).collect();
    let mut points: Vec<PhasePoint<T>> = ensembles.into_iter().flat_map(|(_, pts)| pts).collect();
    debug_assert_eq!(points.len(), components * n);
    let initial_energy: Vec<T> = points.iter().map(|z| hamiltonian(pot, &z.q, &z.p)).collect();

    let records = integrator.record_times().len();
    let mut values = vec![Vec::with_capacity(records); observables.len()];
    let mut std_errors = vec![Vec::with_capacity(records); observables.len()];
    let mut max_drift = vec![T::zero(); components];
    let n_t = T::from_count(n);
    let mut times = Vec::with_capacity(records);
    flow_ensemble(&mut points, integrator, pot, |_, t, now| {
        times.push(t);
        for (i, a) in observables.iter().enumerate() {
            let paired: Vec<T> = (0..n)
                .into_par_iter()
                .map(|k| {
                    weights
                        .iter()
                        .enumerate()
                        .fold(T::zero(), |acc, (c, &w)| acc + w * evaluate_observable(a, &now[c * n + k], pot))
                })
                .collect();
            let mean = pairwise_sum(&paired) / n_t;
            let var = if n > 1 {
                let sq: Vec<T> = paired.iter().map(|&x| (x - mean) * (x - mean)).collect();
                pairwise_sum(&sq) / (n_t - T::one())
            } else {
                T::zero()
            };
            values[i].push(mean);
            std_errors[i].push((var / n_t).sqrt());
        }
        for (c, drift) in max_drift.iter_mut().enumerate() {
            let range = c * n..(c + 1) * n;
            let d = now[range.clone()]
                .par_iter()
                .zip(initial_energy[range].par_iter())
                .map(|(z, &e0)| (hamiltonian(pot, &z.q, &z.p) - e0).abs())
                .reduce(T::zero, T::max);
            *drift = drift.max(d);
        }
        Ok(())
    })?;
    let drift_bound = weights.iter().zip(&max_drift).fold(T::zero(), |acc, (w, d)| acc + w.abs() * *d);
    Ok(ExpectationSeries {
        method: SeriesMethod::Estimator(method),
        names: observables.iter().map(ObservableSymbol::name).collect(),
        times,
        values,
        std_errors: Some(std_errors),
        meta: SeriesMeta {
            count: Some(n),
            components: Some(components),
            sampler: Some(sampler.mode),
            seed: Some(sampler.seed),
            dt: Some(integrator.dt.to_f64_lossy()),
            record_stride: Some(integrator.record_stride),
            energy_drift_bound: Some(drift_bound.to_f64_lossy()),
            ..SeriesMeta::default()
        },
    })
}
