use num_complex::Complex;

use crate::error::{Error, Result};
use crate::phase_space::{gaussian_inner_product, symplectic_form_unchecked, InitialState, PhasePoint, StateKind};
use crate::scalar::Real;

use super::hermite::fbi_hermite;

/// `μ_ψ(w)` through inner products with the coherent state `g_w`:
///
/// ```text
/// (2πε)^d μ_ψ(w) = (1 + d/2)|⟨g_w, ψ⟩|² − ½ Σ_j |⟨g_w, (A_j − w_jᶜ/√(2ε)) ψ⟩|²
/// ```
///
/// Gaussians and superpositions use the coherent-state eigenvalue relation
/// `A_j g_z = z_jᶜ/√(2ε) g_z`; Hermite functions use the lowering relation
/// `A_j φ_k = √k_j φ_{k−e_j}` and the complex FBI transform. None of the
/// real-valued closed forms are involved, which makes this an independent
/// check of [`super::eval_mu`].
pub fn eval_mu_ladder_oracle<T: Real>(state: &InitialState<T>, w: &PhasePoint<T>) -> Result<T> {
    if state.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), found: w.dim() });
    }
    let d = w.dim();
    let eps = state.eps();
    let two = T::lit(2.0);
    let scale = T::one() / (two * eps).sqrt();
    let wc = w.complexified();

    // a = ⟨g_w, ψ⟩, b_j = ⟨g_w, (A_j − w_jᶜ/√(2ε)) ψ⟩
    let (a, b): (Complex<T>, Vec<Complex<T>>) = match &state.kind {
        StateKind::Gaussian { center } => coherent_sum(w, &wc, &[center], eps, scale)?,
        StateKind::GaussianSuperposition { centers } => coherent_sum(w, &wc, &[&centers.0, &centers.1], eps, scale)?,
        StateKind::TranslatedHermite { center, k } => {
            // ⟨g_w, T_z φ⟩ = e^{−iΩ(z, w)/(2ε)} ⟨g_{w−z}, φ⟩
            let x = w.sub(center);
            let phase = Complex::from_polar(
                (two * T::PI() * eps).powf(T::from_count(d) / two),
                -symplectic_form_unchecked(center, w) / (two * eps),
            );
            let base = fbi_hermite(&x, k, eps) * phase;
            let zc = center.complexified();
            let b = (0..d)
                .map(|j| {
                    let shift = (zc[j] - wc[j]) * scale;
                    let lowered = match k.lowered(j) {
                        Some(km) => {
                            fbi_hermite(&x, &km, eps) * phase * T::from_u32(k[j]).unwrap().sqrt()
                        }
                        None => Complex::new(T::zero(), T::zero()),
                    };
                    lowered + base * shift
                })
                .collect();
            (base, b)
        }
    };

    let half = T::lit(0.5);
    let weight = T::one() + half * T::from_count(d);
    let spectro: T = b.iter().map(|c| c.norm_sqr()).fold(T::zero(), |acc, x| acc + x);
    Ok((two * T::PI() * eps).powf(-T::from_count(d)) * (weight * a.norm_sqr() - half * spectro))
}

fn coherent_sum<T: Real>(
    w: &PhasePoint<T>,
    wc: &[Complex<T>],
    centers: &[&PhasePoint<T>],
    eps: T,
    scale: T,
) -> Result<(Complex<T>, Vec<Complex<T>>)> {
    let d = w.dim();
    let mut a = Complex::new(T::zero(), T::zero());
    let mut b = vec![Complex::new(T::zero(), T::zero()); d];
    for &z in centers {
        let ip = gaussian_inner_product(w, z, eps)?;
        a = a + ip;
        let zc = z.complexified();
        for j in 0..d {
            b[j] = b[j] + (zc[j] - wc[j]) * scale * ip;
        }
    }
    Ok((a, b))
}
