use std::io::Write;

use rayon::prelude::*;

use super::potentials::Potential;
use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;
use crate::scalar::Real;

/// Yoshida (1990), Phys. Lett. A 150, 262, Table 2, solution D: the
/// outer weights `w_1 … w_7` of the symmetric 15-stage composition
/// `S(w_7 h) ⋯ S(w_1 h) S(w_0 h) S(w_1 h) ⋯ S(w_7 h)`.
pub const ORDER8_WEIGHTS: [f64; 7] = [
    0.102_799_849_391_985,
    -1.960_610_232_975_49,
    1.938_139_137_622_76,
    -0.158_240_635_368_243,
    -1.444_852_236_860_48,
    0.253_693_336_566_229,
    0.914_844_246_229_740,
];

/// The 15 Strang sub-step fractions of one eighth-order step, in
/// application order. They sum to 1.
pub fn order8_substeps() -> [f64; 15] {
    let w0 = 1.0 - 2.0 * ORDER8_WEIGHTS.iter().sum::<f64>();
    let mut c = [0.0; 15];
    for (i, &w) in ORDER8_WEIGHTS.iter().rev().enumerate() {
        c[i] = w;
        c[14 - i] = w;
    }
    c[7] = w0;
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Strang,
    Order8,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Strang => "strang",
            Self::Order8 => "order8",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T> {
    pub scheme: Scheme,
    pub dt: T,
    pub t_final: T,
    /// Steps between recorded snapshots.
    pub record_stride: usize,
}

impl<T: Real> IntegratorConfig<T> {
    pub const DEFAULT_RECORD_STRIDE: usize = 10;

    pub fn new(scheme: Scheme, dt: T, t_final: T) -> Self {
        Self { scheme, dt, t_final, record_stride: Self::DEFAULT_RECORD_STRIDE }
    }

    pub fn with_stride(mut self, record_stride: usize) -> Self {
        self.record_stride = record_stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return bad("dt", format!("must be positive, got {}", self.dt));
        }
        if !(self.t_final > T::zero() && self.t_final.is_finite()) {
            return bad("t_final", format!("must be positive, got {}", self.t_final));
        }
        if self.dt > self.t_final {
            return bad("dt", format!("{} exceeds t_final {}", self.dt, self.t_final));
        }
        if self.record_stride == 0 {
            return bad("record_stride", "must be at least 1".into());
        }
        let ratio = self.t_final / self.dt;
        if (ratio - ratio.round()).abs() > T::lit(4.0) * T::epsilon() * ratio {
            return bad("t_final", format!("{} is not an integer multiple of dt {}", self.t_final, self.dt));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().to_usize().unwrap_or(0)
    }

    /// Times of the recorded snapshots, starting at 0.
    pub fn record_times(&self) -> Vec<T> {
        (0..=self.steps() / self.record_stride)
            .map(|m| T::from_count(m * self.record_stride) * self.dt)
            .collect()
    }
}

fn kick<T: Real, P: Potential<T> + ?Sized>(pot: &P, tau: T, z: &mut PhasePoint<T>, grad: &mut [T]) {
    pot.gradient(&z.q, grad);
    for (p, &g) in z.p.iter_mut().zip(grad.iter()) {
        *p = *p - tau * g;
    }
}

fn drift<T: Real>(tau: T, z: &mut PhasePoint<T>) {
    for (q, &p) in z.q.iter_mut().zip(z.p.iter()) {
        *q = *q + tau * p;
    }
}

/// Kick-drift-kick composition with sub-step fractions `c`; adjacent
/// half kicks of consecutive sub-steps are merged.
fn composed_step<T: Real, P: Potential<T> + ?Sized>(pot: &P, c: &[T], dt: T, z: &mut PhasePoint<T>, grad: &mut [T]) {
    let half = T::lit(0.5);
    let mut pending = c[0] * half;
    for (i, &ci) in c.iter().enumerate() {
        kick(pot, pending * dt, z, grad);
        drift(ci * dt, z);
        pending = if i + 1 < c.len() { (ci + c[i + 1]) * half } else { ci * half };
    }
    kick(pot, pending * dt, z, grad);
}

/// One second-order step: half kick, drift, half kick.
pub fn step_strang<T: Real, P: Potential<T> + ?Sized>(points: &mut [PhasePoint<T>], dt: T, pot: &P) {
    let c = [T::one()];
    points.par_iter_mut().for_each_init(
        || vec![T::zero(); pot.dim()],
        |grad, z| composed_step(pot, &c, dt, z, grad),
    );
}

/// One eighth-order step built from 15 Strang sub-steps.
pub fn step_order8<T: Real, P: Potential<T> + ?Sized>(points: &mut [PhasePoint<T>], dt: T, pot: &P) {
    let c = order8_substeps().map(T::lit);
    points.par_iter_mut().for_each_init(
        || vec![T::zero(); pot.dim()],
        |grad, z| composed_step(pot, &c, dt, z, grad),
    );
}

/// Advances `points` over `cfg.t_final`, calling `record(m, t_m, points)`
/// at `t_m = m·dt·record_stride` (including `t_0 = 0`).
///
/// Fails with the index of the first non-finite trajectory, checked at each
/// recorded time.
pub fn flow_ensemble<T, P, F>(points: &mut [PhasePoint<T>], cfg: &IntegratorConfig<T>, pot: &P, mut record: F) -> Result<()>
where
    T: Real,
    P: Potential<T> + ?Sized,
    F: FnMut(usize, T, &[PhasePoint<T>]) -> Result<()>,
{
    cfg.validate()?;
    if points.is_empty() {
        return Ok(());
    }
    for z in points.iter() {
        if z.dim() != pot.dim() {
            return Err(Error::DimensionMismatch { expected: pot.dim(), found: z.dim() });
        }
    }
    let c: Vec<T> = match cfg.scheme {
        Scheme::Strang => vec![T::one()],
        Scheme::Order8 => order8_substeps().iter().map(|&x| T::lit(x)).collect(),
    };
    let times = cfg.record_times();
    record(0, T::zero(), points)?;
    for (m, &t) in times.iter().enumerate().skip(1) {
        let stride = cfg.record_stride;
        points.par_iter_mut().for_each_init(
            || vec![T::zero(); pot.dim()],
            |grad, z| {
                for _ in 0..stride {
                    composed_step(pot, &c, cfg.dt, z, grad);
                }
            },
        );
        if let Some(index) = points.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFiniteTrajectory { index, time: t.to_f64_lossy() });
        }
        record(m, t, points)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub points: Vec<PhasePoint<T>>,
}

/// [`flow_ensemble`] keeping a copy of every recorded ensemble. Intended for
/// small ensembles.
pub fn flow_snapshots<T: Real, P: Potential<T> + ?Sized>(
    points: &[PhasePoint<T>],
    cfg: &IntegratorConfig<T>,
    pot: &P,
) -> Result<Vec<Snapshot<T>>> {
    let mut state = points.to_vec();
    let mut out = Vec::new();
    flow_ensemble(&mut state, cfg, pot, |_, t, pts| {
        out.push(Snapshot { t, points: pts.to_vec() });
        Ok(())
    })?;
    Ok(out)
}

/// Writes `t,point_index,q1..qd,p1..pd`, one row per point and snapshot.
pub fn write_trajectory_dump<T: Real, W: Write>(out: &mut W, snapshots: &[Snapshot<T>]) -> std::io::Result<()> {
    let d = snapshots.iter().find_map(|s| s.points.first()).map_or(0, PhasePoint::dim);
    write!(out, "t,point_index")?;
    for j in 1..=d {
        write!(out, ",q{j}")?;
    }
    for j in 1..=d {
        write!(out, ",p{j}")?;
    }
    writeln!(out)?;
    for snap in snapshots {
        for (i, z) in snap.points.iter().enumerate() {
            write!(out, "{:.16e},{i}", snap.t.to_f64_lossy())?;
            for x in z.q.iter().chain(&z.p) {
                write!(out, ",{:.16e}", x.to_f64_lossy())?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
