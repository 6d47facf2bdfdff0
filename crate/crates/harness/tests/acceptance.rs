//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Pass criterion numbers to run a subset:
//! `cargo test --test acceptance -- 1 5`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use semiclassical::densities::{eval_mu, eval_mu_ladder_oracle};
use semiclassical::dynamics::{step_order8, step_strang, Harmonic};
use semiclassical::egorov::{convergence_slope, EstimatorMethod};
use semiclassical::phase_space::{InitialState, MultiIndex, PhasePoint};
use semiclassical::quadrature::{trapezoid_box, trapezoid_box_many};
use semiclassical::sampling::*;
use semiclassical_harness::config::{ModeName, RunConfig};
use semiclassical_harness::pipeline::{self, QP_MEAN};
use semiclassical_harness::presets::{self, Scale};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

fn convergence_order() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cmp = pipeline::torsional_experiment(Scale::Desk, ModeName::Halton, tmp.path(), &mut std::io::sink())
        .map_err(|e| e.to_string())?;
    let slope = |obs: &str, m: &str| cmp.slope(obs, m).unwrap_or(f64::NAN);
    let (spec, naive) = (slope(QP_MEAN, "spectrogram"), slope(QP_MEAN, "naive-husimi"));
    let per_obs: Vec<String> = ["q1", "q2", "p1", "p2"]
        .iter()
        .map(|o| format!("{o} {:.2}/{:.2}", slope(o, "spectrogram"), slope(o, "naive-husimi")))
        .collect();
    check(
        spec >= 1.6 && naive <= 1.3,
        format!("mean q,p error slope: spectrogram {spec:.3} (>= 1.6), naive-husimi {naive:.3} (<= 1.3); per observable {}", per_obs.join(", ")),
    )
}

/// Exact energy of a Gaussian packet in the torsional potential.
fn torsional_energy(q0: &[f64], p0: &[f64], eps: f64) -> f64 {
    let d = q0.len() as f64;
    let damp = (-eps / 4.0).exp();
    eps * d / 4.0 + p0.iter().map(|p| p * p).sum::<f64>() / 2.0 + q0.iter().map(|q| 1.0 - q.cos() * damp).sum::<f64>()
}

fn energy_bound() -> Outcome {
    let mut cfg: RunConfig = presets::torsional(Scale::Desk, ModeName::Mc).remove(0);
    cfg.methods.truncate(1);
    cfg.observables = vec!["total_energy".into()];
    cfg.reference = None;
    assert_eq!(cfg.sampler.seeds.len(), 10);
    let eps = cfg.eps;
    let run = pipeline::estimate(&cfg).map_err(|e| e.to_string())?.remove(0);
    assert_eq!(run.method, EstimatorMethod::Spectrogram);
    let exact = torsional_energy(&[1.0, 0.0], &[0.0, 0.0], eps);
    let e = run.combined.get("total_energy").unwrap();
    let se = run.combined.std_error("total_energy").unwrap();
    let mut worst = f64::NEG_INFINITY;
    for (v, s) in e.iter().zip(se) {
        worst = worst.max((v - exact).abs() - (eps * eps / 16.0 + 3.0 * s));
    }
    let errors: Vec<f64> = e.iter().map(|v| v - exact).collect();
    let time_sd = mean_var(&errors).1.sqrt();
    let drift = run.combined.meta.energy_drift_bound.unwrap_or(f64::NAN);
    check(
        worst <= 0.0 && time_sd <= 2.0 * drift,
        format!(
            "N={} x {} seeds: max(|E - E_exact| - bound) = {worst:.3e} (<= 0), error at t=0 {:.3e}, time sd {time_sd:.3e} <= 2 x drift bound {drift:.3e}",
            cfg.sampler.count,
            cfg.sampler.seeds.len(),
            errors[0]
        ),
    )
}

fn harmonic_config(count: usize, seed: u64, t_stride: usize) -> RunConfig {
    let text = serde_json::json!({
        "eps": 0.1,
        "potential": {"name": "harmonic", "params": {"dim": 1}},
        "initial_state": {"family": "gaussian", "center": {"q": [0.8], "p": [-0.3]}},
        "methods": ["spectrogram"],
        "sampler": {"mode": "mc", "count": count, "seeds": [seed]},
        "integrator": {"scheme": "order8", "dt": 0.1, "t_final": 5.0, "record_stride": t_stride},
        "observables": ["q1", "p1"],
        "output_dir": "unused"
    });
    RunConfig::from_json_str(&text.to_string()).unwrap()
}

fn rotating_center(t: f64) -> [f64; 2] {
    [0.8 * t.cos() - 0.3 * t.sin(), -0.8 * t.sin() - 0.3 * t.cos()]
}

fn harmonic_exactness() -> Outcome {
    let run = pipeline::estimate(&harmonic_config(100_000, 1, 1)).map_err(|e| e.to_string())?.remove(0);
    let s = &run.combined;
    let mut worst: f64 = 0.0;
    let recorded = s.times.len() - 1;
    for (m, &t) in s.times.iter().enumerate().skip(1) {
        for (i, name) in ["q1", "p1"].iter().enumerate() {
            let z = (s.get(name).unwrap()[m] - rotating_center(t)[i]).abs() / s.std_error(name).unwrap()[m];
            worst = worst.max(z);
        }
    }
    // root mean square error over seeds at t = 1..5
    let mut points = Vec::new();
    for n in [1_000usize, 10_000, 100_000] {
        let mut sq = Vec::new();
        for seed in 0..20 {
            let r = pipeline::estimate(&harmonic_config(n, 100 + seed, 10)).map_err(|e| e.to_string())?.remove(0);
            for (m, &t) in r.combined.times.iter().enumerate().skip(1) {
                for (i, name) in ["q1", "p1"].iter().enumerate() {
                    sq.push((r.combined.get(name).unwrap()[m] - rotating_center(t)[i]).powi(2));
                }
            }
        }
        points.push((n as f64, (sq.iter().sum::<f64>() / sq.len() as f64).sqrt()));
    }
    let slope = convergence_slope(&points).map_err(|e| e.to_string())?;
    check(
        recorded == 50 && worst < 3.0 && (slope + 0.5).abs() <= 0.1,
        format!("{recorded} recorded times, largest deviation {worst:.2} SE (< 3); RMS error slope in N {slope:.3} (-0.5 +- 0.1)"),
    )
}

fn normal_moment(m: f64, s2: f64, n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => m,
        2 => m * m + s2,
        3 => m.powi(3) + 3.0 * m * s2,
        4 => m.powi(4) + 6.0 * m * m * s2 + 3.0 * s2 * s2,
        _ => unreachable!(),
    }
}

fn exponents(vars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_degree - used).map(move |n| {
                    let mut e = e.clone();
                    e.push(n);
                    e
                })
            })
            .collect();
    }
    out
}

/// Deterministic pseudo-random centers in [-1.5, 1.5].
fn centers(count: usize, vars: usize, mut state: u64) -> Vec<Vec<f64>> {
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 3.0 - 1.5
    };
    (0..count).map(|_| (0..vars).map(|_| next()).collect()).collect()
}

fn moment_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (vars, eps, nodes, seed) in [(2usize, 0.1, 160usize, 7u64), (2, 0.02, 160, 8), (4, 0.05, 40, 9)] {
        for c in centers(3, vars, seed) {
            let state = InitialState::gaussian(PhasePoint::from_flat(&c).unwrap(), eps).map_err(|e| e.to_string())?;
            let monomials = exponents(vars, 3);
            let r = 8.0 * eps.sqrt();
            let lo: Vec<f64> = c.iter().map(|x| x - r).collect();
            let hi: Vec<f64> = c.iter().map(|x| x + r).collect();
            let got = trapezoid_box_many(&lo, &hi, nodes, monomials.len(), |x, out| {
                let mu = eval_mu(&state, &PhasePoint::from_flat(x).unwrap()).unwrap();
                for (o, e) in out.iter_mut().zip(&monomials) {
                    *o = mu * x.iter().zip(e).map(|(xi, &n)| xi.powi(n as i32)).product::<f64>();
                }
            })
            .map_err(|e| e.to_string())?;
            for (e, g) in monomials.iter().zip(&got) {
                let exact: f64 = c.iter().zip(e).map(|(&m, &n)| normal_moment(m, eps / 2.0, n)).product();
                worst = worst.max((g - exact).abs() / exact.abs().max(eps.powf(1.5)));
                checked += 1;
            }
        }
    }
    let mut gaps = Vec::new();
    for eps in [1e-1f64, 1e-2, 1e-3] {
        let c = [0.4f64, -0.2];
        let state = InitialState::gaussian(PhasePoint::from_1d(c[0], c[1]), eps).map_err(|e| e.to_string())?;
        let r = 8.0 * eps.sqrt();
        let got = trapezoid_box(&[c[0] - r, c[1] - r], &[c[0] + r, c[1] + r], 200, |x| {
            x[0].powi(4) * eval_mu(&state, &PhasePoint::from_flat(x).unwrap()).unwrap()
        })
        .map_err(|e| e.to_string())?;
        gaps.push((eps, (got - normal_moment(c[0], eps / 2.0, 4)).abs()));
    }
    let slope = convergence_slope(&gaps).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-9 && (slope - 2.0).abs() <= 0.1 && gaps.iter().all(|&(_, g)| g > 0.0),
        format!("{checked} moments of degree <= 3, worst relative error {worst:.2e} (<= 1e-9); q^4 gap slope {slope:.4} (2 +- 0.1)"),
    )
}

fn henon_heiles_cross_check() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rows = pipeline::henon_heiles_experiment(Scale::Desk, tmp.path(), &mut std::io::sink()).map_err(|e| e.to_string())?;
    let sup = |m: &str| rows.iter().find(|r| r.observable == "potential" && r.method == m).map(|r| r.sup_deviation);
    let (Some(spec), Some(naive)) = (sup("spectrogram"), sup("naive-husimi")) else {
        return Err("missing potential-energy rows".into());
    };
    check(
        spec <= naive / 3.0,
        format!("sup |V_spec - V_wigner| = {spec:.3e}, sup |V_naive - V_wigner| = {naive:.3e}, ratio {:.3} (<= 1/3)", spec / naive),
    )
}

fn cubic_well_escape() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rows = pipeline::cubic_well_experiment(Scale::Desk, &[1, 3], tmp.path(), &mut std::io::sink()).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [1, 3] {
        let Some(r) = rows.iter().find(|r| r.k == k && r.method == "spectrogram") else {
            return Err(format!("no spectrogram row for k={k}"));
        };
        let onset_gap = match (r.onset, r.reference_onset) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        ok &= r.max_deviation <= 0.2 && onset_gap <= 1.0;
        parts.push(format!(
            "k={k}: max |P - P_ref| {:.3} (<= 0.2), onsets {:.2} vs {:.2} (gap <= 1)",
            r.max_deviation,
            r.onset.unwrap_or(f64::NAN),
            r.reference_onset.unwrap_or(f64::NAN)
        ));
    }
    check(ok, parts.join("; "))
}

fn superposition_structure() -> Outcome {
    let w = presets::two_packet_window();
    let [(q1, p1), (q2, p2)] = w.centers;
    let state = InitialState::superposition(PhasePoint::from_1d(q1, p1), PhasePoint::from_1d(q2, p2), w.eps)
        .map_err(|e| e.to_string())?;
    let mu = |q: f64, p: f64| eval_mu(&state, &PhasePoint::from_1d(q, p)).unwrap();
    let (at1, at2) = (mu(q1, p1), mu(q2, p2));
    let (mq, mp) = ((q1 + q2) / 2.0, (p1 + p2) / 2.0);
    let mut mid_min = f64::INFINITY;
    for i in 0..=40 {
        for j in 0..=40 {
            let (dq, dp) = (w.eps * (i as f64 / 20.0 - 1.0), w.eps * (j as f64 / 20.0 - 1.0));
            if dq * dq + dp * dp <= w.eps * w.eps {
                mid_min = mid_min.min(mu(mq + dq, mp + dp));
            }
        }
    }
    let table = pipeline::density_grid(&state, w.q_range, w.p_range, w.nodes).map_err(|e| e.to_string())?;
    let mut oracle_gap: f64 = 0.0;
    for row in &table.rows {
        let oracle = eval_mu_ladder_oracle(&state, &PhasePoint::from_1d(row[0], row[1])).unwrap();
        oracle_gap = oracle_gap.max((row[4] - oracle).abs());
    }
    check(
        at1 > 0.0 && at2 > 0.0 && mid_min < 0.0 && oracle_gap <= 1e-10,
        format!(
            "mu at centers {at1:.4}, {at2:.4} (> 0); min near midpoint {mid_min:.4} (< 0); ladder gap on {} nodes {oracle_gap:.2e} (<= 1e-10)",
            table.rows.len()
        ),
    )
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

fn sampler_laws() -> Outcome {
    const N: usize = 100_000;
    let mut failures = Vec::new();
    let center = PhasePoint::new(vec![0.3, -1.0], vec![0.5, 0.2]).unwrap();
    let radius = |pts: &[PhasePoint<f64>], c: &PhasePoint<f64>, j: usize| -> Vec<f64> {
        pts.iter().map(|w| w.sub(c).block_norm_sqr(j)).collect()
    };

    // Gamma(m + 1, 2ε) block radii
    let eps = 0.05;
    for m in 0..4u32 {
        let pd = ProductDensity { center: center.clone(), block_orders: MultiIndex::new(vec![m, 2]), eps };
        let pts = sample_product_density(&pd, &SamplerConfig::monte_carlo(N, 11 + m as u64)).unwrap();
        for (j, order) in [(0, m), (1, 2)] {
            let (k, theta) = ((order + 1) as f64, 2.0 * eps);
            let (mean, var) = mean_var(&radius(&pts, &center, j));
            let se_mean = (k * theta * theta / N as f64).sqrt();
            let se_var = ((3.0 * k * (k + 2.0) * theta.powi(4) - (k * theta * theta).powi(2)) / N as f64).sqrt();
            if (mean - k * theta).abs() > 3.0 * se_mean || (var - k * theta * theta).abs() > 4.0 * se_var {
                failures.push(format!("gamma moments m={m} block {j}"));
            }
        }
    }

    // Kolmogorov–Smirnov at the 1% level
    let critical = 1.6276 / (N as f64).sqrt();
    let origin = PhasePoint::from_1d(0.0, 0.0);
    let pd = ProductDensity { center: origin.clone(), block_orders: MultiIndex::new(vec![1]), eps: 0.1 };
    for cfg in [SamplerConfig::monte_carlo(N, 2024), SamplerConfig::halton(N)] {
        let pts = sample_product_density(&pd, &cfg).unwrap();
        let d = ks_statistic(radius(&pts, &origin, 0), |x| gamma_cdf(2, 0.2, x));
        if d >= critical {
            failures.push(format!("KS radius {}: {d:.4}", cfg.mode.name()));
        }
        let angles: Vec<f64> =
            pts.iter().map(|w| (w.p[0].atan2(w.q[0]) + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)).collect();
        let d = ks_statistic(angles, |x| x.clamp(0.0, 1.0));
        if d >= critical {
            failures.push(format!("KS angle {}: {d:.4}", cfg.mode.name()));
        }
    }

    // the two sphere-radial routes agree in law
    let sd = SphereRadialDensity { center: center.clone(), eps: 0.01 };
    let direct = sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 41).with_sphere_route(SphereRoute::Direct)).unwrap();
    let blocks =
        sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 42).with_sphere_route(SphereRoute::BlockMixture)).unwrap();
    for j in 0..2 {
        let (a, b) = (radius(&direct, &center, j), radius(&blocks, &center, j));
        let mut both = a.clone();
        both.extend(&b);
        both.sort_by(f64::total_cmp);
        // two-sample KS through the pooled empirical grid
        let ecdf = |xs: &[f64], t: f64| xs.partition_point(|&x| x <= t) as f64 / xs.len() as f64;
        let (mut sa, mut sb) = (a.clone(), b.clone());
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        let d = both.iter().step_by(97).map(|&t| (ecdf(&sa, t) - ecdf(&sb, t)).abs()).fold(0.0, f64::max);
        let critical2 = 1.6276 * (2.0 / N as f64).sqrt();
        if d >= critical2 {
            failures.push(format!("route equality block {j}: {d:.4}"));
        }
    }

    // exact weight sums
    let mut mixtures = 0;
    for k in [vec![0], vec![3], vec![1, 2], vec![4, 0, 1]] {
        let d = k.len();
        let c = PhasePoint::new(vec![0.1; d], vec![-0.2; d]).unwrap();
        for state in [InitialState::hermite(c.clone(), MultiIndex::new(k.clone()), 0.1).unwrap(), InitialState::gaussian(c, 0.1).unwrap()] {
            let mixture = signed_mixture_decomposition(&state).unwrap();
            mixtures += 1;
            if mixture.weight_sum() != Weight::from_integer(1) || mixture.pool_unit_spectrograms().weight_sum() != Weight::from_integer(1) {
                failures.push(format!("weight sum {k:?}"));
            }
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("gamma moments, KS radius/angle (mc, halton), route equality, {mixtures} weight sums")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn period_error(step: fn(&mut [PhasePoint<f64>], f64, &Harmonic), n: usize) -> (f64, f64) {
    let dt = 2.0 * std::f64::consts::PI / n as f64;
    let mut z = vec![PhasePoint::from_1d(1.0, 0.0)];
    for _ in 0..n {
        step(&mut z, dt, &Harmonic { dim: 1 });
    }
    (dt, ((z[0].q[0] - 1.0).powi(2) + z[0].p[0].powi(2)).sqrt())
}

fn integrator_order() -> Outcome {
    let slope = |step: fn(&mut [PhasePoint<f64>], f64, &Harmonic)| {
        let pts: Vec<(f64, f64)> = [32, 64, 128].iter().map(|&n| period_error(step, n)).collect();
        convergence_slope(&pts).unwrap()
    };
    let (eighth, second) = (slope(step_order8), slope(step_strang));
    check(eighth >= 7.0 && (second - 2.0).abs() <= 0.1, format!("order8 slope {eighth:.3} (>= 7), strang slope {second:.4} (2 +- 0.1)"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "convergence order", convergence_order),
        (2, "total-energy bound", energy_bound),
        (3, "harmonic exactness", harmonic_exactness),
        (4, "moment exactness", moment_exactness),
        (5, "henon-heiles cross-method", henon_heiles_cross_check),
        (6, "cubic-well escape", cubic_well_escape),
        (7, "superposition density", superposition_structure),
        (8, "sampler laws", sampler_laws),
        (9, "integrator order", integrator_order),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} {name}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
