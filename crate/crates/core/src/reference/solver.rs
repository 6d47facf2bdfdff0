use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};

use super::grid::{GridSpec, WaveField};
use crate::dynamics::{IntegratorConfig, Potential, Scheme};
use crate::egorov::{Dependence, ExpectationSeries, ObservableSymbol, SeriesMeta, SeriesMethod};
use crate::error::{Error, Result};
use crate::phase_space::{InitialState, PhasePoint, StateKind};
use crate::scalar::{pairwise_sum, Real};

/// Hermite functions `φ_0 … φ_n` of the semiclassical oscillator at `x`,
/// `φ_0(x) = (πε)^{-1/4} e^{−x²/(2ε)}`, by the normalized three-term
/// recurrence.
fn hermite_functions<T: Real>(n: u32, x: T, eps: T) -> T {
    let y = x / eps.sqrt();
    let mut prev = T::zero();
    let mut cur = (T::PI() * eps).powf(T::lit(-0.25)) * (-(y * y) * T::lit(0.5)).exp();
    for m in 0..n {
        let m_t = T::from_u32(m).unwrap();
        let next = (T::lit(2.0) / (m_t + T::one())).sqrt() * y * cur - (m_t / (m_t + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(T_z φ_n)(x) = e^{i p (x − q/2)/ε} φ_n(x − q)` along one axis.
fn translated_hermite<T: Real>(n: u32, q: T, p: T, x: T, eps: T) -> Complex<T> {
    let amp = hermite_functions(n, x - q, eps);
    Complex::from_polar(amp, p * (x - q * T::lit(0.5)) / eps)
}

fn product_state<T: Real>(grid: &GridSpec<T>, center: &PhasePoint<T>, k: &[u32], eps: T) -> Vec<Complex<T>> {
    let factors: Vec<Vec<Complex<T>>> = grid
        .axes
        .iter()
        .enumerate()
        .map(|(j, a)| (0..a.nodes).map(|i| translated_hermite(k[j], center.q[j], center.p[j], a.node(i), eps)).collect())
        .collect();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            factors.iter().enumerate().fold(Complex::new(T::one(), T::zero()), |acc, (j, f)| acc * f[idx[j]])
        })
        .collect()
}

/// Samples the state on the grid and renormalizes to unit discrete norm.
///
/// Fails with [`Error::GridTooSmall`] when the normalized amplitude on the
/// boundary nodes exceeds `grid.boundary_tolerance`.
pub fn init_wavefield<T: Real>(state: &InitialState<T>, grid: &GridSpec<T>) -> Result<WaveField<T>> {
    grid.validate()?;
    if state.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), found: state.dim() });
    }
    let eps = state.eps();
    let d = state.dim();
    let values = match &state.kind {
        StateKind::Gaussian { center } => product_state(grid, center, &vec![0; d], eps),
        StateKind::TranslatedHermite { center, k } => product_state(grid, center, k.as_slice(), eps),
        StateKind::GaussianSuperposition { centers } => {
            let a = product_state(grid, &centers.0, &vec![0; d], eps);
            let b = product_state(grid, &centers.1, &vec![0; d], eps);
            a.into_iter().zip(b).map(|(x, y)| x + y).collect()
        }
    };
    let mut field = WaveField { grid: grid.clone(), eps, values };
    let scale = T::one() / field.norm_sqr().sqrt();
    for v in field.values.iter_mut() {
        *v = *v * scale;
    }
    let amplitude = field.boundary_amplitude();
    if amplitude > grid.boundary_tolerance {
        return Err(Error::GridTooSmall { amplitude: amplitude.to_f64_lossy(), threshold: grid.boundary_tolerance.to_f64_lossy() });
    }
    Ok(field)
}

/// Multi-dimensional FFT on a row-major grid of one or two axes.
struct GridFft<T: FftNum> {
    shape: Vec<usize>,
    forward: Vec<Arc<dyn Fft<T>>>,
    inverse: Vec<Arc<dyn Fft<T>>>,
    scratch: Vec<Complex<T>>,
    transposed: Vec<Complex<T>>,
}

impl<T: Real + FftNum> GridFft<T> {
    fn new(grid: &GridSpec<T>) -> Self {
        let mut planner = FftPlanner::new();
        let shape: Vec<usize> = grid.axes.iter().map(|a| a.nodes).collect();
        let forward: Vec<_> = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse: Vec<_> = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        let scratch_len = forward.iter().chain(&inverse).map(|f| f.get_inplace_scratch_len()).max().unwrap_or(0);
        Self {
            shape,
            forward,
            inverse,
            scratch: vec![Complex::new(T::zero(), T::zero()); scratch_len],
            transposed: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    fn transpose(src: &[Complex<T>], dst: &mut [Complex<T>], rows: usize, cols: usize) {
        for r in 0..rows {
            for c in 0..cols {
                dst[c * rows + r] = src[r * cols + c];
            }
        }
    }

    /// Unnormalized transform of `data` in place; the result keeps the
    /// row-major layout of the input.
    fn run(&mut self, data: &mut [Complex<T>], inverse: bool) {
        let plans = if inverse { &self.inverse } else { &self.forward };
        match self.shape.as_slice() {
            [_] => plans[0].process_with_scratch(data, &mut self.scratch),
            &[rows, cols] => {
                plans[1].process_with_scratch(data, &mut self.scratch);
                Self::transpose(data, &mut self.transposed, rows, cols);
                plans[0].process_with_scratch(&mut self.transposed, &mut self.scratch);
                Self::transpose(&self.transposed, data, cols, rows);
            }
            _ => unreachable!("validated grid has one or two axes"),
        }
    }
}

/// Squared momentum `|p|²` of every FFT mode, row-major.
fn momentum_squares<T: Real>(grid: &GridSpec<T>, eps: T) -> Vec<T> {
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            grid.axes.iter().enumerate().fold(T::zero(), |acc, (j, a)| {
                let p = a.momentum(idx[j], eps);
                acc + p * p
            })
        })
        .collect()
}

/// Strang splitting `e^{−iτV/2ε} e^{−iτ|p|²/2ε} e^{−iτV/2ε}` of
/// `iε∂_tψ = −(ε²/2)Δψ + Vψ`, with
/// precomputed phases; consecutive half potential steps are merged.
pub struct StrangPropagator<T: Real + FftNum> {
    fft: GridFft<T>,
    half_potential: Vec<Complex<T>>,
    full_potential: Vec<Complex<T>>,
    /// Kinetic phase including the `1/N` of the inverse transform.
    kinetic: Vec<Complex<T>>,
}

impl<T: Real + FftNum> StrangPropagator<T> {
    pub fn new<P: Potential<T> + ?Sized>(grid: &GridSpec<T>, eps: T, pot: &P, dt: T) -> Result<Self> {
        grid.validate()?;
        if pot.dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), found: pot.dim() });
        }
        let two = T::lit(2.0);
        let potential: Vec<T> = (0..grid.len()).map(|i| pot.value(&grid.point(i))).collect();
        let phase = |angle: T| Complex::from_polar(T::one(), angle);
        let inv_n = T::one() / T::from_count(grid.len());
        Ok(Self {
            fft: GridFft::new(grid),
            half_potential: potential.iter().map(|&v| phase(-dt * v / (two * eps))).collect(),
            full_potential: potential.iter().map(|&v| phase(-dt * v / eps)).collect(),
            kinetic: momentum_squares(grid, eps)
                .into_iter()
                .map(|p2| Complex::from_polar(inv_n, -dt * p2 / (two * eps)))
                .collect(),
        })
    }

    fn apply(values: &mut [Complex<T>], factors: &[Complex<T>]) {
        for (v, f) in values.iter_mut().zip(factors) {
            *v = *v * *f;
        }
    }

    fn kinetic_step(&mut self, values: &mut [Complex<T>]) {
        self.fft.run(values, false);
        Self::apply(values, &self.kinetic);
        self.fft.run(values, true);
    }

    /// Applies `steps` Strang steps.
    pub fn advance(&mut self, field: &mut WaveField<T>, steps: usize) {
        if steps == 0 {
            return;
        }
        let values = &mut field.values;
        Self::apply(values, &self.half_potential);
        for s in 0..steps {
            self.kinetic_step(values);
            if s + 1 < steps {
                Self::apply(values, &self.full_potential);
            }
        }
        Self::apply(values, &self.half_potential);
    }

    /// `|ℱψ|²` normalized to a probability vector over FFT modes.
    fn momentum_weights(&mut self, field: &WaveField<T>) -> Vec<T> {
        let mut coeffs = field.values.clone();
        self.fft.run(&mut coeffs, false);
        let weights: Vec<T> = coeffs.iter().map(|c| c.norm_sqr()).collect();
        let total = pairwise_sum(&weights);
        weights.into_iter().map(|w| w / total).collect()
    }
}

pub fn propagate_strang<T: Real + FftNum, P: Potential<T> + ?Sized>(
    field: &mut WaveField<T>,
    pot: &P,
    dt: T,
    steps: usize,
) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
    }
    StrangPropagator::new(&field.grid, field.eps, pot, dt)?.advance(field, steps);
    Ok(())
}

fn expectations_with<T: Real + FftNum, P: Potential<T> + ?Sized>(
    field: &WaveField<T>,
    observables: &[ObservableSymbol<T>],
    pot: &P,
    momentum_weights: impl FnOnce() -> Vec<T>,
) -> Result<Vec<T>> {
    for a in observables {
        if a.dependence() == Dependence::Mixed {
            return Err(Error::MixedSymbol(a.name()));
        }
        a.check_dim(field.grid.dim())?;
    }
    let grid = &field.grid;
    let density: Vec<T> = field.values.iter().map(|v| v.norm_sqr()).collect();
    let mass = pairwise_sum(&density);
    let needs_momentum = observables.iter().any(|a| a.dependence() != Dependence::Position);
    let weights = if needs_momentum { momentum_weights() } else { Vec::new() };
    let momenta: Vec<Vec<T>> = if needs_momentum {
        (0..grid.len())
            .map(|flat| {
                let idx = grid.unflatten(flat);
                grid.axes.iter().enumerate().map(|(j, a)| a.momentum(idx[j], field.eps)).collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let points: Vec<Vec<T>> = (0..grid.len()).map(|i| grid.point(i)).collect();
    Ok(observables
        .iter()
        .map(|a| {
            let dep = a.dependence();
            let mut total = T::zero();
            if matches!(dep, Dependence::Position | Dependence::Separable) {
                let terms: Vec<T> = points.iter().zip(&density).map(|(x, &w)| a.position_part(x, pot) * w).collect();
                total = total + pairwise_sum(&terms) / mass;
            }
            if matches!(dep, Dependence::Momentum | Dependence::Separable) {
                let terms: Vec<T> = momenta.iter().zip(&weights).map(|(p, &w)| a.momentum_part(p) * w).collect();
                total = total + pairwise_sum(&terms);
            }
            total
        })
        .collect())
}

/// `⟨ψ, op(a) ψ⟩` for symbols depending on position only, on momentum only,
/// or on their sum.
pub fn grid_expectation<T: Real + FftNum, P: Potential<T> + ?Sized>(
    field: &WaveField<T>,
    a: &ObservableSymbol<T>,
    pot: &P,
) -> Result<T> {
    grid_expectations(field, std::slice::from_ref(a), pot).map(|v| v[0])
}

pub fn grid_expectations<T: Real + FftNum, P: Potential<T> + ?Sized>(
    field: &WaveField<T>,
    observables: &[ObservableSymbol<T>],
    pot: &P,
) -> Result<Vec<T>> {
    let mut fft = GridFft::new(&field.grid);
    expectations_with(field, observables, pot, || {
        let mut coeffs = field.values.clone();
        fft.run(&mut coeffs, false);
        let w: Vec<T> = coeffs.iter().map(|c| c.norm_sqr()).collect();
        let total = pairwise_sum(&w);
        w.into_iter().map(|x| x / total).collect()
    })
}

/// Boundary amplitude above which the run reports a violation time.
pub const BOUNDARY_WATCH: f64 = 1e-8;

/// Grid reference series recorded every `record_stride` steps. Recorded
/// times with boundary amplitude above [`BOUNDARY_WATCH`] are listed in the
/// metadata.
pub fn run_reference<T: Real + FftNum, P: Potential<T> + ?Sized>(
    state: &InitialState<T>,
    pot: &P,
    grid: &GridSpec<T>,
    dt: T,
    t_final: T,
    record_stride: usize,
    observables: &[ObservableSymbol<T>],
) -> Result<ExpectationSeries<T>> {
    run_reference_with_field(state, pot, grid, dt, t_final, record_stride, observables).map(|(s, _)| s)
}

/// [`run_reference`] also returning the wave field at `t_final`.
pub fn run_reference_with_field<T: Real + FftNum, P: Potential<T> + ?Sized>(
    state: &InitialState<T>,
    pot: &P,
    grid: &GridSpec<T>,
    dt: T,
    t_final: T,
    record_stride: usize,
    observables: &[ObservableSymbol<T>],
) -> Result<(ExpectationSeries<T>, WaveField<T>)> {
    let schedule = IntegratorConfig::new(Scheme::Strang, dt, t_final).with_stride(record_stride);
    schedule.validate()?;
    let mut field = init_wavefield(state, grid)?;
    let mut propagator = StrangPropagator::new(grid, state.eps(), pot, dt)?;
    let times = schedule.record_times();
    let mut values = vec![Vec::with_capacity(times.len()); observables.len()];
    let mut boundary_max = T::zero();
    let mut violations = Vec::new();
    for (m, &t) in times.iter().enumerate() {
        if m > 0 {
            propagator.advance(&mut field, record_stride);
        }
        let amplitude = field.boundary_amplitude();
        boundary_max = boundary_max.max(amplitude);
        if amplitude > T::lit(BOUNDARY_WATCH) {
            violations.push(t.to_f64_lossy());
        }
        let now = expectations_with(&field, observables, pot, || propagator.momentum_weights(&field))?;
        for (column, v) in values.iter_mut().zip(now) {
            column.push(v);
        }
    }
    let series = ExpectationSeries {
        method: SeriesMethod::Reference,
        names: observables.iter().map(ObservableSymbol::name).collect(),
        times,
        values,
        std_errors: None,
        meta: SeriesMeta {
            dt: Some(dt.to_f64_lossy()),
            record_stride: Some(record_stride),
            boundary_amplitude: Some(boundary_max.to_f64_lossy()),
            boundary_violation_times: violations,
            ..SeriesMeta::default()
        },
    };
    Ok((series, field))
}
