//! Trajectory-ensemble estimators of time-evolved expectation values, the
//! time-averaged error metric and convergence slopes.

mod estimator;
mod metrics;
mod observables;
mod series;

pub use estimator::{initial_ensembles, run_estimator};
pub use metrics::{convergence_slope, time_averaged_error};
pub use observables::{evaluate_observable, Dependence, ObservableSymbol};
pub use series::{replicate_mean, EstimatorMethod, ExpectationSeries, SeriesMeta, SeriesMethod};
