use super::series::ExpectationSeries;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Piecewise linear interpolation of `(xs, ys)` at `x` inside `[xs₀, xs_last]`.
fn interpolate<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    let k = xs.partition_point(|&t| t <= x);
    if k == 0 {
        return ys[0];
    }
    if k >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    let s = (x - x0) / (x1 - x0);
    ys[k - 1] + s * (ys[k] - ys[k - 1])
}

/// `(1/T) ∫ |estimate − reference| dt` for every observable present in both
/// series, by the trapezoid rule on the estimate's time grid restricted to
/// the common time range. The reference is interpolated linearly.
pub fn time_averaged_error<T: Real>(series: &ExpectationSeries<T>, reference: &ExpectationSeries<T>) -> Result<Vec<(String, T)>> {
    let (Some(&s0), Some(&s1), Some(&r0), Some(&r1)) =
        (series.times.first(), series.times.last(), reference.times.first(), reference.times.last())
    else {
        return Err(Error::EmptyOverlap);
    };
    let lo = s0.max(r0);
    let hi = s1.min(r1);
    let slack = T::lit(1e-9) * (hi.abs() + lo.abs()).max(T::one());
    let nodes: Vec<usize> = (0..series.times.len())
        .filter(|&m| series.times[m] >= lo - slack && series.times[m] <= hi + slack)
        .collect();
    if nodes.len() < 2 {
        return Err(Error::EmptyOverlap);
    }
    let span = series.times[*nodes.last().unwrap()] - series.times[nodes[0]];
    let mut out = Vec::new();
    for (i, name) in series.names.iter().enumerate() {
        let Some(reference_values) = reference.get(name) else { continue };
        let diff: Vec<T> = nodes
            .iter()
            .map(|&m| (series.values[i][m] - interpolate(&reference.times, reference_values, series.times[m])).abs())
            .collect();
        let mut integral = T::zero();
        for k in 1..nodes.len() {
            let h = series.times[nodes[k]] - series.times[nodes[k - 1]];
            integral = integral + T::lit(0.5) * h * (diff[k] + diff[k - 1]);
        }
        out.push((name.clone(), integral / span));
    }
    Ok(out)
}

/// Least-squares slope of `log error` against `log ε`.
pub fn convergence_slope<T: Real>(errors: &[(T, T)]) -> Result<T> {
    if errors.len() < 3 {
        return Err(Error::TooFewPoints { required: 3, found: errors.len() });
    }
    if let Some(&(e, r)) = errors.iter().find(|(e, r)| !(*e > T::zero() && *r > T::zero())) {
        return Err(Error::NonPositive(if e > T::zero() { r } else { e }.to_f64_lossy()));
    }
    let n = T::from_count(errors.len());
    let xs: Vec<T> = errors.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<T> = errors.iter().map(|(_, r)| r.ln()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxy = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum::<T>();
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egorov::{SeriesMeta, SeriesMethod};

    fn series(times: Vec<f64>, values: Vec<f64>) -> ExpectationSeries<f64> {
        ExpectationSeries {
            method: SeriesMethod::Reference,
            names: vec!["q1".into()],
            times,
            values: vec![values],
            std_errors: None,
            meta: SeriesMeta::default(),
        }
    }

    #[test]
    fn identical_and_offset() {
        let t: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|x| x.sin()).collect();
        let a = series(t.clone(), v.clone());
        assert_eq!(time_averaged_error(&a, &a).unwrap()[0].1, 0.0);
        let b = series(t, v.iter().map(|x| x + 0.25).collect());
        assert!((time_averaged_error(&b, &a).unwrap()[0].1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sine_average() {
        let n = 1000;
        let t: Vec<f64> = (0..n).map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64).collect();
        let a = series(t.clone(), t.iter().map(|x| x.sin()).collect());
        let zero = series(t.clone(), vec![0.0; n]);
        let err = time_averaged_error(&a, &zero).unwrap()[0].1;
        assert!((err - 2.0 / std::f64::consts::PI).abs() < 1e-5, "{err}");
    }

    #[test]
    fn resamples_reference() {
        let coarse = series(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]);
        let fine = series(vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5], vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5]);
        assert!(time_averaged_error(&coarse, &fine).unwrap()[0].1.abs() < 1e-15);
        assert!(time_averaged_error(&fine, &coarse).unwrap()[0].1.abs() < 1e-15);
        let late = series(vec![5.0, 6.0], vec![0.0, 0.0]);
        assert_eq!(time_averaged_error(&coarse, &late), Err(Error::EmptyOverlap));
    }

    #[test]
    fn slopes() {
        let eps = [0.1, 0.05, 0.01];
        let quad: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 3.0 * e * e)).collect();
        assert!((convergence_slope(&quad).unwrap() - 2.0).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 0.7 * e)).collect();
        assert!((convergence_slope(&lin).unwrap() - 1.0).abs() < 1e-12);
        let mixed: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 0.01 * e + 5.0 * e * e)).collect();
        let s = convergence_slope(&mixed).unwrap();
        assert!(s > 1.0 && s < 2.0);
        assert!(convergence_slope(&quad[..2]).is_err());
        assert!(convergence_slope(&[(0.1, 1.0), (0.0, 1.0), (0.2, 1.0)]).is_err());
    }
}
