use crate::error::{Error, Result};
use crate::phase_space::{symplectic_form_unchecked, InitialState, MultiIndex, PhasePoint, StateKind};
use crate::scalar::Real;

use super::hermite::{hermite_husimi_factor, laguerre};

fn check_point<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<()> {
    if state.dim() == w.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: state.dim(), found: w.dim() })
    }
}

/// Wigner function of the Gaussian wave packet centered at `z`,
/// `(πε)^{-d} exp(−|w − z|²/ε)`.
pub fn eval_wigner_gaussian<T: Real>(w: &PhasePoint<T>, z: &PhasePoint<T>, eps: T) -> Result<T> {
    w.check_dim(z)?;
    let d = T::from_count(w.dim());
    Ok((T::PI() * eps).powf(-d) * (-w.sub(z).norm_sqr() / eps).exp())
}

/// Wigner function of any of the analytic families.
///
/// Hermite functions use the per-block Laguerre form
/// `(πε)⁻¹ (−1)ⁿ Lₙ(2|w|²/ε) e^{−|w|²/ε}`; the superposition adds the
/// oscillating cross-Wigner term around the midpoint of the two centers.
pub fn eval_wigner<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<T> {
    check_point(state, w)?;
    let eps = state.eps();
    match &state.kind {
        StateKind::Gaussian { center } => eval_wigner_gaussian(w, center, eps),
        StateKind::TranslatedHermite { center, k } => {
            let x = w.sub(center);
            let two = T::lit(2.0);
            let norm = T::one() / (T::PI() * eps);
            let mut acc = T::one();
            for j in 0..x.dim() {
                let r2 = x.block_norm_sqr(j);
                let sign = if k[j] % 2 == 0 { T::one() } else { -T::one() };
                acc = acc * norm * sign * laguerre(k[j], two * r2 / eps) * (-r2 / eps).exp();
            }
            Ok(acc)
        }
        StateKind::GaussianSuperposition { centers: (z1, z2) } => {
            let half = T::lit(0.5);
            let d = T::from_count(w.dim());
            let norm = (T::PI() * eps).powf(-d);
            let mid = PhasePoint {
                q: z1.q.iter().zip(&z2.q).map(|(&a, &b)| half * (a + b)).collect(),
                p: z1.p.iter().zip(&z2.p).map(|(&a, &b)| half * (a + b)).collect(),
            };
            let theta = (symplectic_form_unchecked(w, &z2.sub(z1)) - half * symplectic_form_unchecked(z1, z2)) / eps;
            let cross = T::lit(2.0) * (-w.sub(&mid).norm_sqr() / eps).exp() * theta.cos();
            Ok(norm * ((-w.sub(z1).norm_sqr() / eps).exp() + (-w.sub(z2).norm_sqr() / eps).exp() + cross))
        }
    }
}

/// Husimi function `H_ψ(w) = (2πε)^{-d} |⟨g_w, ψ⟩|²`.
pub fn eval_husimi<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<T> {
    check_point(state, w)?;
    let eps = state.eps();
    match &state.kind {
        StateKind::Gaussian { center } => Ok(hermite_husimi(&w.sub(center), None, eps)),
        StateKind::TranslatedHermite { center, k } => Ok(hermite_husimi(&w.sub(center), Some(k), eps)),
        StateKind::GaussianSuperposition { centers } => Ok(superposition_terms(w, centers, eps).husimi()),
    }
}

/// The `j`-th first order Hermite spectrogram `(W_ψ * W_{φ_{e_j}})(w)`,
/// with `j` zero-based.
pub fn eval_hermite_spectrogram<T: Real>(state: &InitialState<T>, j: usize, w: &PhasePoint<T>) -> Result<T> {
    check_point(state, w)?;
    if j >= state.dim() {
        return Err(Error::InvalidParameter {
            name: "j",
            reason: format!("block index {j} out of range for dimension {}", state.dim()),
        });
    }
    let eps = state.eps();
    match &state.kind {
        StateKind::Gaussian { center } => Ok(HermiteBlocks::new(&w.sub(center), None, eps).spectrogram(j)),
        StateKind::TranslatedHermite { center, k } => {
            Ok(HermiteBlocks::new(&w.sub(center), Some(k), eps).spectrogram(j))
        }
        StateKind::GaussianSuperposition { centers } => Ok(superposition_terms(w, centers, eps).spectrogram(j)),
    }
}

/// `Σ_j (W_ψ * W_{φ_{e_j}})(w)`.
pub fn eval_spectrogram_sum<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<T> {
    check_point(state, w)?;
    let eps = state.eps();
    match &state.kind {
        StateKind::Gaussian { center } => Ok(HermiteBlocks::new(&w.sub(center), None, eps).spectrogram_sum()),
        StateKind::TranslatedHermite { center, k } => {
            Ok(HermiteBlocks::new(&w.sub(center), Some(k), eps).spectrogram_sum())
        }
        StateKind::GaussianSuperposition { centers } => Ok(superposition_terms(w, centers, eps).spectrogram_sum()),
    }
}

/// The density `μ_ψ = (1 + d/2) H_ψ − ½ Σ_j W_ψ * W_{φ_{e_j}}`. May be negative.
pub fn eval_mu<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<T> {
    check_point(state, w)?;
    let eps = state.eps();
    let half = T::lit(0.5);
    let weight = T::one() + half * T::from_count(state.dim());
    match &state.kind {
        StateKind::Gaussian { center } => {
            let blocks = HermiteBlocks::new(&w.sub(center), None, eps);
            Ok(weight * blocks.husimi() - half * blocks.spectrogram_sum())
        }
        StateKind::TranslatedHermite { center, k } => {
            let blocks = HermiteBlocks::new(&w.sub(center), Some(k), eps);
            Ok(weight * blocks.husimi() - half * blocks.spectrogram_sum())
        }
        StateKind::GaussianSuperposition { centers } => {
            let terms = superposition_terms(w, centers, eps);
            Ok(weight * terms.husimi() - half * terms.spectrogram_sum())
        }
    }
}

fn hermite_husimi<T: Real>(x: &PhasePoint<T>, k: Option<&MultiIndex>, eps: T) -> T {
    (0..x.dim())
        .map(|j| hermite_husimi_factor(k.map_or(0, |k| k[j]), x.block_norm_sqr(j), eps))
        .fold(T::one(), |acc, h| acc * h)
}

/// Per-block Hermite–Husimi factors `h_{k_j − 1}, h_{k_j}, h_{k_j + 1}` of a
/// centered point.
struct HermiteBlocks<T> {
    orders: Vec<u32>,
    lower: Vec<T>,
    same: Vec<T>,
    upper: Vec<T>,
}

impl<T: Real> HermiteBlocks<T> {
    fn new(x: &PhasePoint<T>, k: Option<&MultiIndex>, eps: T) -> Self {
        let d = x.dim();
        let mut blocks = Self {
            orders: Vec::with_capacity(d),
            lower: Vec::with_capacity(d),
            same: Vec::with_capacity(d),
            upper: Vec::with_capacity(d),
        };
        for j in 0..d {
            let n = k.map_or(0, |k| k[j]);
            let r2 = x.block_norm_sqr(j);
            blocks.orders.push(n);
            blocks.lower.push(if n > 0 { hermite_husimi_factor(n - 1, r2, eps) } else { T::zero() });
            blocks.same.push(hermite_husimi_factor(n, r2, eps));
            blocks.upper.push(hermite_husimi_factor(n + 1, r2, eps));
        }
        blocks
    }

    fn husimi(&self) -> T {
        self.same.iter().fold(T::one(), |acc, &h| acc * h)
    }

    /// `k_j h_{k_j−1} − 2k_j h_{k_j} + (k_j+1) h_{k_j+1}` on block `j`.
    fn bracket(&self, j: usize) -> T {
        let kj = T::from_u32(self.orders[j]).unwrap();
        kj * self.lower[j] - T::lit(2.0) * kj * self.same[j] + (kj + T::one()) * self.upper[j]
    }

    fn spectrogram(&self, j: usize) -> T {
        let others = self
            .same
            .iter()
            .enumerate()
            .filter(|&(n, _)| n != j)
            .fold(T::one(), |acc, (_, &h)| acc * h);
        self.bracket(j) * others
    }

    fn spectrogram_sum(&self) -> T {
        // prefix/suffix products keep this O(d) and exact when a factor is zero
        let d = self.same.len();
        let mut suffix = vec![T::one(); d + 1];
        for j in (0..d).rev() {
            suffix[j] = suffix[j + 1] * self.same[j];
        }
        let mut prefix = T::one();
        let mut acc = T::zero();
        for j in 0..d {
            acc = acc + prefix * self.bracket(j) * suffix[j + 1];
            prefix = prefix * self.same[j];
        }
        acc
    }
}

/// Real-valued building blocks of the superposition densities.
struct SuperpositionTerms<T> {
    norm: T,
    inv_eps: T,
    e1: T,
    e2: T,
    cross: T,
    cos: T,
    sin: T,
    d1: PhasePoint<T>,
    d2: PhasePoint<T>,
}

fn superposition_terms<T: Real>(
    w: &PhasePoint<T>,
    (z1, z2): &(PhasePoint<T>, PhasePoint<T>),
    eps: T,
) -> SuperpositionTerms<T> {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let d = T::from_count(w.dim());
    let d1 = z1.sub(w);
    let d2 = z2.sub(w);
    let r1 = d1.norm_sqr();
    let r2 = d2.norm_sqr();
    let phase = symplectic_form_unchecked(&z1.sub(z2), w) / (two * eps);
    SuperpositionTerms {
        norm: (two * T::PI() * eps).powf(-d),
        inv_eps: T::one() / eps,
        e1: (-r1 / (two * eps)).exp(),
        e2: (-r2 / (two * eps)).exp(),
        cross: (-(r1 + r2) / (four * eps)).exp(),
        cos: phase.cos(),
        sin: phase.sin(),
        d1,
        d2,
    }
}

impl<T: Real> SuperpositionTerms<T> {
    fn husimi(&self) -> T {
        self.norm * (self.e1 + self.e2 + T::lit(2.0) * self.cross * self.cos)
    }

    fn spectrogram(&self, j: usize) -> T {
        let half = T::lit(0.5);
        let (a, b) = (&self.d1, &self.d2);
        let dot = a.q[j] * b.q[j] + a.p[j] * b.p[j];
        let omega = a.q[j] * b.p[j] - a.p[j] * b.q[j];
        let diag = half * self.inv_eps * (a.block_norm_sqr(j) * self.e1 + b.block_norm_sqr(j) * self.e2);
        let interference = self.inv_eps * self.cross * (dot * self.cos - omega * self.sin);
        self.norm * (diag + interference)
    }

    fn spectrogram_sum(&self) -> T {
        let half = T::lit(0.5);
        let (a, b) = (&self.d1, &self.d2);
        let dot = a.q.iter().zip(&b.q).chain(a.p.iter().zip(&b.p)).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
        let omega = symplectic_form_unchecked(a, b);
        let diag = half * self.inv_eps * (a.norm_sqr() * self.e1 + b.norm_sqr() * self.e2);
        let interference = self.inv_eps * self.cross * (dot * self.cos - omega * self.sin);
        self.norm * (diag + interference)
    }
}
