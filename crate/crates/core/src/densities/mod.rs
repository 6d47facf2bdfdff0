//! Closed-form phase-space densities of the analytic state families.
//!
//! Every density here is a function of `w - center` (covariance under the
//! Heisenberg–Weyl translations), so the evaluators first shift the query
//! point and then work with centered blocks `w_j = (q_j, p_j)`.
//!
//! The new density is
//!
//! ```text
//! μ_ψ = (1 + d/2) H_ψ − ½ Σ_j W_ψ * W_{φ_{e_j}}  =  H_ψ − (ε/4) ΔH_ψ
//! ```
//!
//! with `H_ψ` the Husimi function and `W_ψ * W_{φ_{e_j}}` the first order
//! Hermite spectrograms.

mod closed_form;
mod hermite;
mod ladder;

pub use closed_form::{
    eval_hermite_spectrogram, eval_husimi, eval_mu, eval_spectrogram_sum, eval_wigner, eval_wigner_gaussian,
};
pub use hermite::{fbi_hermite, hermite_husimi_factor, laguerre};
pub use ladder::eval_mu_ladder_oracle;
