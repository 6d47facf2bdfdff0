use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sampling::SamplerMode;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorMethod {
    /// Signed mixture sampling of `μ_ψ`.
    Spectrogram,
    /// Husimi function alone.
    NaiveHusimi,
    /// Gaussian Wigner function, for Gaussian states only.
    WignerGaussian,
}

impl EstimatorMethod {
    pub const ALL: [Self; 3] = [Self::Spectrogram, Self::NaiveHusimi, Self::WignerGaussian];

    pub fn name(self) -> &'static str {
        SeriesMethod::Estimator(self).name()
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match SeriesMethod::from_name(name)? {
            SeriesMethod::Estimator(m) => Some(m),
            SeriesMethod::Reference => None,
        }
    }
}

/// Producer of an [`ExpectationSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesMethod {
    Estimator(EstimatorMethod),
    Reference,
}

impl SeriesMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Estimator(EstimatorMethod::Spectrogram) => "spectrogram",
            Self::Estimator(EstimatorMethod::NaiveHusimi) => "naive-husimi",
            Self::Estimator(EstimatorMethod::WignerGaussian) => "wigner",
            Self::Reference => "reference",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "spectrogram" => Self::Estimator(EstimatorMethod::Spectrogram),
            "naive-husimi" => Self::Estimator(EstimatorMethod::NaiveHusimi),
            "wigner" => Self::Estimator(EstimatorMethod::WignerGaussian),
            "reference" => Self::Reference,
            _ => return None,
        })
    }
}

impl From<EstimatorMethod> for SeriesMethod {
    fn from(m: EstimatorMethod) -> Self {
        Self::Estimator(m)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeriesMeta {
    /// Points per mixture component.
    pub count: Option<usize>,
    pub components: Option<usize>,
    pub sampler: Option<SamplerMode>,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub record_stride: Option<usize>,
    /// `Σ_c |w_c| · max over points and recorded times of |h(z(t)) − h(z(0))|`.
    pub energy_drift_bound: Option<f64>,
    /// Largest grid amplitude seen on the boundary nodes (grid solver).
    pub boundary_amplitude: Option<f64>,
    /// Recorded times at which the boundary amplitude exceeded the watch
    /// level (grid solver).
    pub boundary_violation_times: Vec<f64>,
    /// Number of seeds averaged.
    pub replicas: Option<usize>,
}

/// Expectation values of several observables on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSeries<T> {
    pub method: SeriesMethod,
    pub names: Vec<String>,
    pub times: Vec<T>,
    /// `values[i][m]` is observable `i` at `times[m]`.
    pub values: Vec<Vec<T>>,
    /// Standard errors in the same layout, when the producer has them.
    pub std_errors: Option<Vec<Vec<T>>>,
    pub meta: SeriesMeta,
}

impl<T: Real> ExpectationSeries<T> {
    pub fn get(&self, name: &str) -> Option<&[T]> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i].as_slice())
    }

    pub fn std_error(&self, name: &str) -> Option<&[T]> {
        let i = self.names.iter().position(|n| n == name)?;
        self.std_errors.as_ref().map(|s| s[i].as_slice())
    }

    /// Checks that times increase strictly and all values are finite.
    pub fn validate(&self) -> Result<()> {
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter { name: "times", reason: "must increase strictly".into() });
        }
        if self.values.len() != self.names.len() || self.values.iter().any(|v| v.len() != self.times.len()) {
            return Err(Error::InvalidParameter { name: "values", reason: "shape does not match names × times".into() });
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "values", reason: "non-finite entry".into() });
        }
        Ok(())
    }

    /// Writes `t,<names>` and one row per recorded time.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        write_table(out, &self.names, &self.times, &self.values)
    }

    /// Writes the standard errors in the layout of [`write_csv`](Self::write_csv).
    pub fn write_std_error_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        match &self.std_errors {
            Some(se) => write_table(out, &self.names, &self.times, se),
            None => Ok(()),
        }
    }

    /// Reads a table written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(input: R, method: SeriesMethod) -> Result<Self> {
        let parse_err = |line: usize, reason: String| Error::InvalidParameter {
            name: "csv",
            reason: format!("line {line}: {reason}"),
        };
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input".into()))?
            .map_err(|e| parse_err(1, e.to_string()))?;
        let mut columns = header.trim().split(',');
        if columns.next() != Some("t") {
            return Err(parse_err(1, "first column must be `t`".into()));
        }
        let names: Vec<String> = columns.map(str::to_string).collect();
        let mut times = Vec::new();
        let mut values = vec![Vec::new(); names.len()];
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| parse_err(i + 2, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != names.len() + 1 {
                return Err(parse_err(i + 2, format!("expected {} fields, found {}", names.len() + 1, fields.len())));
            }
            let mut parsed = fields.iter().map(|f| {
                f.parse::<f64>().map(T::lit).map_err(|e| parse_err(i + 2, format!("`{f}`: {e}")))
            });
            times.push(parsed.next().unwrap()?);
            for column in values.iter_mut() {
                column.push(parsed.next().unwrap()?);
            }
        }
        let series = Self { method, names, times, values, std_errors: None, meta: SeriesMeta::default() };
        series.validate()?;
        Ok(series)
    }
}

fn write_table<T: Real, W: Write>(out: &mut W, names: &[String], times: &[T], values: &[Vec<T>]) -> std::io::Result<()> {
    write!(out, "t")?;
    for n in names {
        write!(out, ",{n}")?;
    }
    writeln!(out)?;
    for (m, t) in times.iter().enumerate() {
        write!(out, "{:.16e}", t.to_f64_lossy())?;
        for column in values {
            write!(out, ",{:.16e}", column[m].to_f64_lossy())?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Mean over independently seeded runs, with the seed-replication standard
/// error `s/√R` as `std_errors`.
pub fn replicate_mean<T: Real>(runs: &[ExpectationSeries<T>]) -> Result<ExpectationSeries<T>> {
    let first = runs.first().ok_or(Error::TooFewPoints { required: 1, found: 0 })?;
    for r in runs {
        if r.names != first.names || r.times != first.times {
            return Err(Error::InvalidParameter { name: "runs", reason: "observables or time grids differ".into() });
        }
    }
    let count = T::from_count(runs.len());
    let mut values = first.values.clone();
    let mut errors = first.values.clone();
    for (i, column) in values.iter_mut().enumerate() {
        for (m, slot) in column.iter_mut().enumerate() {
            let samples: Vec<T> = runs.iter().map(|r| r.values[i][m]).collect();
            let mean = samples.iter().copied().sum::<T>() / count;
            let var = if runs.len() > 1 {
                samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (count - T::one())
            } else {
                T::zero()
            };
            *slot = mean;
            errors[i][m] = (var / count).sqrt();
        }
    }
    let mut meta = first.meta.clone();
    meta.replicas = Some(runs.len());
    meta.seed = None;
    meta.energy_drift_bound = runs
        .iter()
        .filter_map(|r| r.meta.energy_drift_bound)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(ExpectationSeries { method: first.method, names: first.names.clone(), times: first.times.clone(), values, std_errors: Some(errors), meta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExpectationSeries<f64> {
        ExpectationSeries {
            method: SeriesMethod::Reference,
            names: vec!["q1".into(), "p1".into()],
            times: vec![0.0, 0.5, 1.0],
            values: vec![vec![1.0, 0.1 + 0.2, -1.0 / 3.0], vec![0.0, 1e-300, 2.5e10]],
            std_errors: None,
            meta: SeriesMeta::default(),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = sample();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,q1,p1\n"));
        let back = ExpectationSeries::<f64>::read_csv(buf.as_slice(), SeriesMethod::Reference).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        let text = "t,q1\n0.0,1.0\n0.5\n";
        assert!(ExpectationSeries::<f64>::read_csv(text.as_bytes(), SeriesMethod::Reference).is_err());
    }

    #[test]
    fn method_names() {
        for m in EstimatorMethod::ALL {
            assert_eq!(EstimatorMethod::from_name(m.name()), Some(m));
        }
        assert_eq!(SeriesMethod::from_name("reference"), Some(SeriesMethod::Reference));
    }

    #[test]
    fn replicate_statistics() {
        let mut a = sample();
        let mut b = sample();
        a.values[0][0] = 1.0;
        b.values[0][0] = 3.0;
        let m = replicate_mean(&[a, b]).unwrap();
        assert_eq!(m.values[0][0], 2.0);
        assert!((m.std_errors.unwrap()[0][0] - 1.0).abs() < 1e-15);
    }
}
