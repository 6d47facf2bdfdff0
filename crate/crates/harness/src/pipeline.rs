//! Runs configurations, writes their artifacts and turns runs into error
//! tables.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use semiclassical::densities::{eval_husimi, eval_mu, eval_wigner};
use semiclassical::egorov::{
    convergence_slope, initial_ensembles, replicate_mean, run_estimator, time_averaged_error, EstimatorMethod, ExpectationSeries,
    SeriesMeta, SeriesMethod,
};
use semiclassical::phase_space::{InitialState, PhasePoint};
use semiclassical::reference::{run_reference_with_field, WaveField};
use serde::{Deserialize, Serialize};

use crate::config::{MethodName, ModeName, RunConfig};
use crate::error::{HarnessError, Result};
use crate::presets::{self, Scale};

/// Estimates of one method: one series per seed and their combination.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRun {
    pub method: EstimatorMethod,
    pub seeds: Vec<u64>,
    pub runs: Vec<ExpectationSeries<f64>>,
    /// The single run, or the seed average with replication errors.
    pub combined: ExpectationSeries<f64>,
}

pub fn estimate(cfg: &RunConfig) -> Result<Vec<MethodRun>> {
    let state = cfg.state()?;
    let pot = cfg.potential();
    let obs = cfg.observables()?;
    let integ = cfg.integrator_config();
    cfg.methods
        .iter()
        .map(|m| {
            let method = m.method();
            let runs = cfg
                .sampler
                .seeds
                .iter()
                .map(|&seed| run_estimator(&state, method, &obs, &cfg.sampler_config(seed), &integ, pot.as_ref()))
                .collect::<semiclassical::Result<Vec<_>>>()?;
            let combined = if runs.len() == 1 { runs[0].clone() } else { replicate_mean(&runs)? };
            Ok(MethodRun { method, seeds: cfg.sampler.seeds.clone(), runs, combined })
        })
        .collect()
}

/// Grid reference series and final wave field, if the reference is enabled.
pub fn reference(cfg: &RunConfig) -> Result<Option<(ExpectationSeries<f64>, WaveField<f64>)>> {
    let (Some(grid), Some(stride), Some(spec)) = (cfg.reference_grid(), cfg.reference_stride(), cfg.reference.as_ref())
    else {
        return Ok(None);
    };
    let state = cfg.state()?;
    let pot = cfg.potential();
    let obs = cfg.observables()?;
    let out = run_reference_with_field(&state, pot.as_ref(), &grid, spec.dt, cfg.integrator.t_final, stride, &obs)?;
    Ok(Some(out))
}

/// Mirror of the series metadata for JSON sidecars.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_drift_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_violation_times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
}

impl From<&SeriesMeta> for MetaJson {
    fn from(m: &SeriesMeta) -> Self {
        Self {
            count: m.count,
            components: m.components,
            sampler: m.sampler.map(|s| s.name().to_string()),
            seed: m.seed,
            dt: m.dt,
            record_stride: m.record_stride,
            energy_drift_bound: m.energy_drift_bound,
            boundary_amplitude: m.boundary_amplitude,
            boundary_violation_times: m.boundary_violation_times.clone(),
            replicas: m.replicas,
        }
    }
}

/// JSON written next to every series CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub config: RunConfig,
    pub artifact: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub meta: MetaJson,
}

impl Sidecar {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| HarnessError::artifact(path, e.to_string()))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::io(path, e))
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut out = create(path)?;
    f(&mut out).and_then(|_| out.flush()).map_err(|e| HarnessError::io(path, e))
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    write_with(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value)?;
        out.write_all(b"\n")
    })
}

fn write_series(dir: &Path, stem: &str, cfg: &RunConfig, series: &ExpectationSeries<f64>, seeds: &[u64]) -> Result<()> {
    let csv = format!("{stem}.csv");
    write_with(&dir.join(&csv), |out| series.write_csv(out))?;
    let sidecar = Sidecar {
        config: cfg.clone(),
        artifact: csv,
        method: series.method.name().to_string(),
        seeds: seeds.to_vec(),
        meta: MetaJson::from(&series.meta),
    };
    write_json(&dir.join(format!("{stem}.json")), &sidecar)
}

pub fn write_config(dir: &Path, cfg: &RunConfig) -> Result<()> {
    write_json(&dir.join("config.json"), cfg)
}

/// `<method>.csv` holds the combined series; with several seeds every run
/// also gets `<method>_seed<s>.csv`.
pub fn write_estimates(dir: &Path, cfg: &RunConfig, runs: &[MethodRun]) -> Result<()> {
    for r in runs {
        let name = r.method.name();
        write_series(dir, name, cfg, &r.combined, &r.seeds)?;
        if r.combined.std_errors.is_some() {
            write_with(&dir.join(format!("{name}_stderr.csv")), |out| r.combined.write_std_error_csv(out))?;
        }
        if r.runs.len() > 1 {
            for (seed, run) in r.seeds.iter().zip(&r.runs) {
                write_series(dir, &format!("{name}_seed{seed}"), cfg, run, &[*seed])?;
            }
        }
    }
    Ok(())
}

pub fn write_reference(dir: &Path, cfg: &RunConfig, series: &ExpectationSeries<f64>, field: Option<&WaveField<f64>>) -> Result<()> {
    write_series(dir, "reference", cfg, series, &[])?;
    if let Some(f) = field {
        write_with(&dir.join("reference_final.wf"), |out| f.write_binary(out))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub estimates: Vec<MethodRun>,
    pub reference: Option<ExpectationSeries<f64>>,
}

/// Runs the estimators and the reference of `cfg` and writes everything to
/// its output directory.
pub fn run_all(cfg: &RunConfig) -> Result<RunOutcome> {
    let dir = cfg.output_dir.as_path();
    write_config(dir, cfg)?;
    let estimates = estimate(cfg)?;
    write_estimates(dir, cfg, &estimates)?;
    let reference = match reference(cfg)? {
        Some((series, _)) => {
            write_reference(dir, cfg, &series, None)?;
            Some(series)
        }
        None => None,
    };
    Ok(RunOutcome { estimates, reference })
}

/// Name of the row averaging the position and momentum errors.
pub const QP_MEAN: &str = "qp_mean";

fn is_coordinate(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('q' | 'p')) && !chars.as_str().is_empty() && chars.as_str().bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub observable: String,
    pub epsilon: f64,
    pub method: String,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeRow {
    pub observable: String,
    pub method: String,
    pub slope: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Comparison {
    pub errors: Vec<ErrorRow>,
    pub slopes: Vec<SlopeRow>,
}

impl Comparison {
    pub fn slope(&self, observable: &str, method: &str) -> Option<f64> {
        self.slopes.iter().find(|s| s.observable == observable && s.method == method).map(|s| s.slope)
    }

    pub fn write_errors<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "observable,epsilon,method,error")?;
        for r in &self.errors {
            writeln!(out, "{},{:.16e},{},{:.16e}", r.observable, r.epsilon, r.method, r.error)?;
        }
        Ok(())
    }

    pub fn write_slopes<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "observable,method,slope")?;
        for s in &self.slopes {
            writeln!(out, "{},{},{:.16e}", s.observable, s.method, s.slope)?;
        }
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_with(&dir.join("errors.csv"), |out| self.write_errors(out))?;
        write_with(&dir.join("slopes.csv"), |out| self.write_slopes(out))
    }

    /// Human-readable error table and slopes.
    pub fn report<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{:<14} {:>10} {:<14} {:>12}", "observable", "epsilon", "method", "error")?;
        for r in &self.errors {
            writeln!(out, "{:<14} {:>10.3e} {:<14} {:>12.4e}", r.observable, r.epsilon, r.method, r.error)?;
        }
        writeln!(out, "{:<14} {:<14} {:>8}", "observable", "method", "slope")?;
        for s in &self.slopes {
            writeln!(out, "{:<14} {:<14} {:>8.3}", s.observable, s.method, s.slope)?;
        }
        Ok(())
    }
}

/// Time-averaged errors of `series` against `reference`, plus the mean over
/// the position and momentum observables.
pub fn error_rows(epsilon: f64, series: &ExpectationSeries<f64>, reference: &ExpectationSeries<f64>) -> Result<Vec<ErrorRow>> {
    let method = series.method.name().to_string();
    let errors = time_averaged_error(series, reference)?;
    let coords: Vec<f64> = errors.iter().filter(|(n, _)| is_coordinate(n)).map(|(_, e)| *e).collect();
    let mut rows: Vec<ErrorRow> = errors
        .into_iter()
        .map(|(observable, error)| ErrorRow { observable, epsilon, method: method.clone(), error })
        .collect();
    if !coords.is_empty() {
        let mean = coords.iter().sum::<f64>() / coords.len() as f64;
        rows.push(ErrorRow { observable: QP_MEAN.into(), epsilon, method, error: mean });
    }
    Ok(rows)
}

/// Least-squares slope of log error against log ε for every observable and
/// method seen at three or more ε.
pub fn slopes(errors: &[ErrorRow]) -> Result<Vec<SlopeRow>> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in errors {
        if !keys.contains(&(r.observable.as_str(), r.method.as_str())) {
            keys.push((&r.observable, &r.method));
        }
    }
    let mut out = Vec::new();
    for (observable, method) in keys {
        let pts: Vec<(f64, f64)> = errors
            .iter()
            .filter(|r| r.observable == observable && r.method == method)
            .map(|r| (r.epsilon, r.error))
            .collect();
        if pts.len() < 3 || pts.iter().any(|&(_, e)| !(e > 0.0)) {
            continue;
        }
        out.push(SlopeRow { observable: observable.into(), method: method.into(), slope: convergence_slope(&pts)? });
    }
    Ok(out)
}

fn read_series(path: &Path, method: SeriesMethod) -> Result<ExpectationSeries<f64>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    ExpectationSeries::read_csv(BufReader::new(file), method).map_err(|e| HarnessError::artifact(path, e.to_string()))
}

/// Compares every estimator series of each run directory against the
/// directory's reference.
pub fn compare(run_dirs: &[PathBuf]) -> Result<Comparison> {
    let mut errors = Vec::new();
    for dir in run_dirs {
        let cfg = Sidecar::read(&dir.join("reference.json"))?.config;
        let reference = read_series(&dir.join("reference.csv"), SeriesMethod::Reference)?;
        for m in &cfg.methods {
            let method = m.method();
            let series = read_series(&dir.join(format!("{}.csv", method.name())), method.into())?;
            errors.extend(error_rows(cfg.eps, &series, &reference)?);
        }
    }
    let slopes = slopes(&errors)?;
    Ok(Comparison { errors, slopes })
}

fn run_dir_name(eps: f64) -> String {
    format!("eps_{eps}")
}

/// Torsional convergence study: one run per ε, then the error comparison.
pub fn torsional_experiment<W: Write>(scale: Scale, mode: ModeName, out_dir: &Path, log: &mut W) -> Result<Comparison> {
    let mut dirs = Vec::new();
    for mut cfg in presets::torsional(scale, mode) {
        cfg.output_dir = out_dir.join(run_dir_name(cfg.eps));
        let _ = writeln!(log, "torsional eps={} N={} ({})", cfg.eps, cfg.sampler.count, cfg.output_dir.display());
        run_all(&cfg)?;
        dirs.push(cfg.output_dir);
    }
    let comparison = compare(&dirs)?;
    comparison.write(out_dir)?;
    let _ = comparison.report(log);
    Ok(comparison)
}

/// Largest distance of each method's curves from the Wigner curves.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossMethodRow {
    pub observable: String,
    pub method: String,
    pub sup_deviation: f64,
}

pub fn sup_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn cross_method_rows(runs: &[MethodRun]) -> Vec<CrossMethodRow> {
    let Some(wigner) = runs.iter().find(|r| r.method == EstimatorMethod::WignerGaussian) else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    for name in &wigner.combined.names {
        let w = wigner.combined.get(name).unwrap();
        for r in runs.iter().filter(|r| r.method != EstimatorMethod::WignerGaussian) {
            if let Some(v) = r.combined.get(name) {
                rows.push(CrossMethodRow {
                    observable: name.clone(),
                    method: r.method.name().into(),
                    sup_deviation: sup_deviation(v, w),
                });
            }
        }
    }
    rows
}

/// Henon–Heiles run of all three methods, with the deviations from the
/// Wigner curves in `cross_method.csv`.
pub fn henon_heiles_experiment<W: Write>(scale: Scale, out_dir: &Path, log: &mut W) -> Result<Vec<CrossMethodRow>> {
    let mut cfg = presets::henon_heiles(scale);
    cfg.output_dir = out_dir.to_path_buf();
    let _ = writeln!(log, "henon-heiles d={} N={} ({})", cfg.dim(), cfg.sampler.count, out_dir.display());
    let outcome = run_all(&cfg)?;
    let rows = cross_method_rows(&outcome.estimates);
    write_with(&out_dir.join("cross_method.csv"), |out| {
        writeln!(out, "observable,method,sup_deviation_from_wigner")?;
        for r in &rows {
            writeln!(out, "{},{},{:.16e}", r.observable, r.method, r.sup_deviation)?;
        }
        Ok(())
    })?;
    let _ = writeln!(log, "{:<14} {:<14} {:>12}", "observable", "method", "sup |x - wigner|");
    for r in &rows {
        let _ = writeln!(log, "{:<14} {:<14} {:>12.4e}", r.observable, r.method, r.sup_deviation);
    }
    Ok(rows)
}

/// Linearly interpolated first time at which `values` reaches `level`.
pub fn first_crossing(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    if values.first().is_some_and(|&v| v >= level) {
        return times.first().copied();
    }
    times.windows(2).zip(values.windows(2)).find_map(|(t, v)| {
        (v[0] < level && v[1] >= level).then(|| t[0] + (level - v[0]) / (v[1] - v[0]) * (t[1] - t[0]))
    })
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
    let (t0, t1) = (times[i - 1], times[i]);
    let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
    values[i - 1] * (1.0 - w) + values[i] * w
}

/// Escape probability level that marks the onset of tunnelling.
pub const ESCAPE_ONSET_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeRow {
    pub k: u32,
    pub method: String,
    pub max_deviation: f64,
    pub onset: Option<f64>,
    pub reference_onset: Option<f64>,
}

pub fn escape_rows(k: u32, runs: &[MethodRun], reference: &ExpectationSeries<f64>) -> Vec<EscapeRow> {
    let Some(p_ref) = reference.get("escape") else {
        return Vec::new();
    };
    let reference_onset = first_crossing(&reference.times, p_ref, ESCAPE_ONSET_LEVEL);
    runs.iter()
        .filter_map(|r| {
            let p = r.combined.get("escape")?;
            let times = &r.combined.times;
            let max_deviation = times
                .iter()
                .zip(p)
                .map(|(&t, v)| (v - interpolate(&reference.times, p_ref, t)).abs())
                .fold(0.0, f64::max);
            Some(EscapeRow {
                k,
                method: r.method.name().into(),
                max_deviation,
                onset: first_crossing(times, p, ESCAPE_ONSET_LEVEL),
                reference_onset,
            })
        })
        .collect()
}

/// Cubic-well runs for the given Hermite orders, summarized in
/// `escape_summary.csv`.
pub fn cubic_well_experiment<W: Write>(scale: Scale, orders: &[u32], out_dir: &Path, log: &mut W) -> Result<Vec<EscapeRow>> {
    let mut rows = Vec::new();
    for &k in orders {
        let mut cfg = presets::cubic_well(scale, k);
        cfg.output_dir = out_dir.join(format!("k{k}"));
        let _ = writeln!(log, "cubic-well k={k} N={} ({})", cfg.sampler.count, cfg.output_dir.display());
        let outcome = run_all(&cfg)?;
        if let Some(reference) = &outcome.reference {
            rows.extend(escape_rows(k, &outcome.estimates, reference));
        }
    }
    let fmt_opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:.16e}"));
    write_with(&out_dir.join("escape_summary.csv"), |out| {
        writeln!(out, "k,method,max_deviation,onset,reference_onset")?;
        for r in &rows {
            writeln!(out, "{},{},{:.16e},{},{}", r.k, r.method, r.max_deviation, fmt_opt(r.onset), fmt_opt(r.reference_onset))?;
        }
        Ok(())
    })?;
    let _ = writeln!(log, "{:>2} {:<12} {:>10} {:>8} {:>8}", "k", "method", "max dev", "onset", "ref");
    for r in &rows {
        let show = |x: Option<f64>| x.map_or_else(|| "-".into(), |v| format!("{v:.2}"));
        let _ = writeln!(
            log,
            "{:>2} {:<12} {:>10.4} {:>8} {:>8}",
            r.k,
            r.method,
            r.max_deviation,
            show(r.onset),
            show(r.reference_onset)
        );
    }
    Ok(rows)
}

/// Densities tabulated on a grid or along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DensityTable {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_with(path, |out| self.write_csv(out))
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn densities_at(state: &InitialState<f64>, w: &PhasePoint<f64>) -> Result<[f64; 3]> {
    Ok([eval_wigner(state, w)?, eval_husimi(state, w)?, eval_mu(state, w)?])
}

fn linspace(lo: f64, hi: f64, nodes: usize) -> impl Iterator<Item = f64> {
    let step = if nodes > 1 { (hi - lo) / (nodes - 1) as f64 } else { 0.0 };
    (0..nodes).map(move |i| lo + step * i as f64)
}

/// Wigner, Husimi and `μ` on a `(q, p)` grid of a one-dimensional state,
/// `p` varying fastest.
pub fn density_grid(state: &InitialState<f64>, q: (f64, f64), p: (f64, f64), nodes: usize) -> Result<DensityTable> {
    if state.dim() != 1 {
        return Err(semiclassical::Error::DimensionMismatch { expected: 1, found: state.dim() }.into());
    }
    let mut rows = Vec::with_capacity(nodes * nodes);
    for x in linspace(q.0, q.1, nodes) {
        for y in linspace(p.0, p.1, nodes) {
            let [w, h, m] = densities_at(state, &PhasePoint::from_1d(x, y))?;
            rows.push(vec![x, y, w, h, m]);
        }
    }
    Ok(DensityTable { header: ["q", "p", "wigner", "husimi", "mu"].map(String::from).to_vec(), rows })
}

/// Two-dimensional state on the `(q1, q2)` plane at fixed momentum.
pub fn density_slice(
    state: &InitialState<f64>,
    q1: (f64, f64),
    q2: (f64, f64),
    nodes: usize,
    momentum: [f64; 2],
) -> Result<DensityTable> {
    if state.dim() != 2 {
        return Err(semiclassical::Error::DimensionMismatch { expected: 2, found: state.dim() }.into());
    }
    let mut rows = Vec::with_capacity(nodes * nodes);
    for x in linspace(q1.0, q1.1, nodes) {
        for y in linspace(q2.0, q2.1, nodes) {
            let w = PhasePoint::new(vec![x, y], momentum.to_vec())?;
            let [a, b, c] = densities_at(state, &w)?;
            rows.push(vec![x, y, a, b, c]);
        }
    }
    Ok(DensityTable { header: ["q1", "q2", "wigner", "husimi", "mu"].map(String::from).to_vec(), rows })
}

/// Densities at distance `r` from the state's mean along the first
/// position axis.
pub fn density_profile(state: &InitialState<f64>, r_max: f64, nodes: usize) -> Result<DensityTable> {
    let center = state.mean();
    let mut rows = Vec::with_capacity(nodes);
    for r in linspace(0.0, r_max, nodes) {
        let mut w = center.clone();
        w.q[0] += r;
        let [a, b, c] = densities_at(state, &w)?;
        rows.push(vec![r, a, b, c]);
    }
    Ok(DensityTable { header: ["r", "wigner", "husimi", "mu"].map(String::from).to_vec(), rows })
}

/// Initial ensembles of `method` for the first seed, one row per point:
/// `component,weight,q1..qd,p1..pd`.
pub fn sample_dump<W: Write>(cfg: &RunConfig, method: MethodName, out: &mut W) -> Result<()> {
    let state = cfg.state()?;
    let sampler = cfg.sampler_config(cfg.sampler.seeds[0]);
    let ensembles = initial_ensembles(&state, method.method(), &sampler)?;
    let d = state.dim();
    let write = |out: &mut W| -> std::io::Result<()> {
        let mut header = vec!["component".to_string(), "weight".to_string()];
        header.extend((1..=d).map(|j| format!("q{j}")));
        header.extend((1..=d).map(|j| format!("p{j}")));
        writeln!(out, "{}", header.join(","))?;
        for (c, (weight, points)) in ensembles.iter().enumerate() {
            for z in points {
                write!(out, "{c},{weight:.16e}")?;
                for x in z.q.iter().chain(&z.p) {
                    write!(out, ",{x:.16e}")?;
                }
                writeln!(out)?;
            }
        }
        out.flush()
    };
    write(out).map_err(|e| HarnessError::io(Path::new("<sample output>"), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_interpolates() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let v = [0.0, 0.02, 0.08, 0.5];
        assert!((first_crossing(&t, &v, 0.05).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(first_crossing(&t, &v, 0.9), None);
    }

    #[test]
    fn coordinate_names() {
        assert!(is_coordinate("q1") && is_coordinate("p12"));
        assert!(!is_coordinate("potential") && !is_coordinate("q") && !is_coordinate("q1^2"));
    }

    #[test]
    fn slopes_need_three_points() {
        let row = |eps: f64, err: f64| ErrorRow { observable: "q1".into(), epsilon: eps, method: "spectrogram".into(), error: err };
        let s = slopes(&[row(0.1, 1e-2), row(0.01, 1e-4), row(0.001, 1e-6)]).unwrap();
        assert!((s[0].slope - 2.0).abs() < 1e-12);
        assert!(slopes(&[row(0.1, 1e-2), row(0.01, 1e-4)]).unwrap().is_empty());
    }
}
