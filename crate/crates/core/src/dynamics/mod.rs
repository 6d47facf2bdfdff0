//! Hamiltonian flows of `h(q, p) = |p|²/2 + V(q)` by symplectic splitting.

mod integrators;
mod potentials;

pub use integrators::{
    flow_ensemble, flow_snapshots, order8_substeps, step_order8, step_strang, write_trajectory_dump, IntegratorConfig,
    Scheme, Snapshot, ORDER8_WEIGHTS,
};
pub use potentials::{hamiltonian, kinetic_energy, CubicWell, Free, Harmonic, HenonHeiles, Potential, Torsional};
