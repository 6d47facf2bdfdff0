//! Grid Schrödinger solver on periodic boxes in one and two dimensions:
//! Fourier collocation in space, Strang splitting in time.

mod grid;
mod solver;

pub use grid::{GridAxis, GridSpec, WaveField};
pub use solver::{
    grid_expectation, grid_expectations, init_wavefield, propagate_strang, run_reference, run_reference_with_field, StrangPropagator,
    BOUNDARY_WATCH,
};
