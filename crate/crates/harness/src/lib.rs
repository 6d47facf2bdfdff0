//! Configuration schema, experiment presets and artifact pipelines around
//! the `semiclassical` numerics. The `semiclassical` binary is a thin
//! command-line layer over this crate.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod presets;

pub use config::RunConfig;
pub use error::{HarnessError, Result};
pub use presets::Scale;
