use proptest::prelude::*;
use semiclassical::phase_space::{InitialState, MultiIndex, PhasePoint};
use semiclassical::sampling::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const N: usize = 100_000;

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

fn block_radius(points: &[PhasePoint<f64>], center: &PhasePoint<f64>, j: usize) -> Vec<f64> {
    points.iter().map(|w| w.sub(center).block_norm_sqr(j)).collect()
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

/// Chi-square p-value of `xs` against `Gamma(shape, scale)` on equal-probability bins.
fn radial_chi_square(xs: &[f64], shape: u32, scale: f64, bins: usize) -> f64 {
    let edges: Vec<f64> =
        (1..bins).map(|b| gamma_inverse_cdf(shape, scale, b as f64 / bins as f64).unwrap()).collect();
    let mut counts = vec![0usize; bins];
    for &x in xs {
        counts[edges.partition_point(|&e| e <= x)] += 1;
    }
    let expected = xs.len() as f64 / bins as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(stat)
}

fn center() -> PhasePoint<f64> {
    PhasePoint::new(vec![0.3, -1.0], vec![0.5, 0.2]).unwrap()
}

#[test]
fn gamma_radius_moments() {
    let eps = 0.05;
    for m in 0..4u32 {
        let pd = ProductDensity { center: center(), block_orders: MultiIndex::new(vec![m, 2]), eps };
        let pts = sample_product_density(&pd, &SamplerConfig::monte_carlo(N, 11 + m as u64)).unwrap();
        for (j, order) in [(0, m), (1, 2)] {
            let k = (order + 1) as f64;
            let theta = 2.0 * eps;
            let (mean, var) = mean_var(&block_radius(&pts, &pd.center, j));
            let se_mean = (k * theta * theta / N as f64).sqrt();
            let mu4 = 3.0 * k * (k + 2.0) * theta.powi(4);
            let se_var = ((mu4 - (k * theta * theta).powi(2)) / N as f64).sqrt();
            assert!((mean - k * theta).abs() < 3.0 * se_mean, "m={m} j={j}: mean {mean}");
            assert!((var - k * theta * theta).abs() < 4.0 * se_var, "m={m} j={j}: var {var}");
        }
    }
}

#[test]
fn zero_order_block_is_an_isotropic_gaussian() {
    let eps = 0.1;
    let pd = ProductDensity { center: center(), block_orders: MultiIndex::zeros(2), eps };
    let pts = sample_product_density(&pd, &SamplerConfig::monte_carlo(N, 3)).unwrap();
    for j in 0..2 {
        for coord in [0, 1] {
            let xs: Vec<f64> = pts
                .iter()
                .map(|w| if coord == 0 { w.q[j] - pd.center.q[j] } else { w.p[j] - pd.center.p[j] })
                .collect();
            let (m, v) = mean_var(&xs);
            let se_var = (2.0 * eps * eps / N as f64).sqrt();
            assert!(m.abs() < 3.0 * (eps / N as f64).sqrt(), "{m}");
            assert!((v - eps).abs() < 3.0 * se_var, "{v}");
        }
    }
}

#[test]
fn kolmogorov_smirnov_first_order_radius() {
    let eps = 0.1;
    let critical = 1.6276 / (N as f64).sqrt();
    let pd = ProductDensity { center: PhasePoint::from_1d(0.0, 0.0), block_orders: MultiIndex::new(vec![1]), eps };
    for cfg in [SamplerConfig::monte_carlo(N, 2024), SamplerConfig::halton(N)] {
        let pts = sample_product_density(&pd, &cfg).unwrap();
        let d = ks_statistic(block_radius(&pts, &pd.center, 0), |x| gamma_cdf(2, 0.2, x));
        assert!(d < critical, "{:?}: D = {d}", cfg.mode);
    }
}

#[test]
fn kolmogorov_smirnov_angles_are_uniform() {
    let pd = ProductDensity { center: PhasePoint::from_1d(0.0, 0.0), block_orders: MultiIndex::new(vec![2]), eps: 0.1f64 };
    let pts = sample_product_density(&pd, &SamplerConfig::monte_carlo(N, 77)).unwrap();
    let angles: Vec<f64> = pts.iter().map(|w| (w.p[0].atan2(w.q[0]) + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)).collect();
    assert!(ks_statistic(angles, |x| x.clamp(0.0, 1.0)) < 1.6276 / (N as f64).sqrt());
}

#[test]
fn radial_bins_pass_chi_square() {
    let eps = 0.02;
    for (seed, orders) in [(1u64, vec![0, 1]), (2, vec![3, 0]), (3, vec![5, 2])] {
        let pd = ProductDensity { center: center(), block_orders: MultiIndex::new(orders.clone()), eps };
        let pts = sample_product_density(&pd, &SamplerConfig::monte_carlo(N, seed)).unwrap();
        for (j, &m) in orders.iter().enumerate() {
            let p = radial_chi_square(&block_radius(&pts, &pd.center, j), m + 1, 2.0 * eps, 40);
            assert!(p > 0.01, "orders {orders:?} block {j}: p = {p}");
        }
    }
    // sphere-radial total radius
    let sd = SphereRadialDensity { center: center(), eps };
    let pts = sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 9)).unwrap();
    let r2: Vec<f64> = pts.iter().map(|w| w.sub(&sd.center).norm_sqr()).collect();
    let p = radial_chi_square(&r2, 3, 2.0 * eps, 40);
    assert!(p > 0.01, "sphere radius: p = {p}");
}

#[test]
fn sphere_radial_mean_radius_and_direction() {
    let eps = 0.05;
    let d = 3;
    let c = PhasePoint::new(vec![0.1, 0.2, 0.3], vec![-0.1, 0.0, 1.0]).unwrap();
    let sd = SphereRadialDensity { center: c.clone(), eps };
    let pts = sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 5)).unwrap();
    let r2: Vec<f64> = pts.iter().map(|w| w.sub(&c).norm_sqr()).collect();
    let (m, _) = mean_var(&r2);
    let k = (d + 1) as f64;
    assert!((m - 2.0 * eps * k).abs() < 3.0 * (k / N as f64).sqrt() * 2.0 * eps, "{m}");
    // unit direction components have variance 1/(2d)
    let se = (1.0 / (2.0 * d as f64) / N as f64).sqrt();
    for i in 0..d {
        for coord in [0, 1] {
            let u: Vec<f64> = pts
                .iter()
                .map(|w| {
                    let x = w.sub(&c);
                    (if coord == 0 { x.q[i] } else { x.p[i] }) / x.norm_sqr().sqrt()
                })
                .collect();
            let (m, _) = mean_var(&u);
            assert!(m.abs() < 3.0 * se, "block {i} coord {coord}: {m}");
        }
    }
}

#[test]
fn sphere_routes_agree_in_law() {
    let eps = 0.01;
    let c = center();
    let sd = SphereRadialDensity { center: c.clone(), eps };
    let direct = sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 41).with_sphere_route(SphereRoute::Direct)).unwrap();
    let blocks =
        sample_sphere_radial(&sd, &SamplerConfig::monte_carlo(N, 42).with_sphere_route(SphereRoute::BlockMixture)).unwrap();
    for j in 0..2 {
        for power in [1, 2] {
            let a: Vec<f64> = block_radius(&direct, &c, j).iter().map(|t| t.powi(power)).collect();
            let b: Vec<f64> = block_radius(&blocks, &c, j).iter().map(|t| t.powi(power)).collect();
            let ((ma, va), (mb, vb)) = (mean_var(&a), mean_var(&b));
            let se = ((va + vb) / N as f64).sqrt();
            assert!((ma - mb).abs() < 3.0 * se, "block {j} power {power}: {ma} vs {mb}");
        }
    }
}

#[test]
fn unit_spectrogram_components_match_the_sphere_law() {
    // the d unit-order products of a Gaussian decomposition, pooled with
    // equal shares, against E|w − z|² = 2ε(d + 1)
    let eps = 0.03;
    let state = InitialState::gaussian(center(), eps).unwrap();
    let mixture = signed_mixture_decomposition(&state).unwrap();
    let mut r2 = vec![];
    for (c, (w, comp)) in mixture.components.iter().enumerate() {
        if *w.numer() < 0 {
            let cfg = SamplerConfig::monte_carlo(N / 2, 8).with_stream(component_stream(0, c));
            r2.extend(sample_component(comp, &cfg).unwrap().iter().map(|w| w.sub(comp.center()).norm_sqr()));
        }
    }
    let (m, v) = mean_var(&r2);
    assert!((m - 6.0 * eps).abs() < 3.0 * (v / r2.len() as f64).sqrt(), "{m}");
}

fn analytic_gaussian_moment(center: &[f64], e: &[u32], eps: f64) -> f64 {
    let s2 = eps / 2.0;
    center
        .iter()
        .zip(e)
        .map(|(&m, &n)| match n {
            0 => 1.0,
            1 => m,
            2 => m * m + s2,
            3 => m.powi(3) + 3.0 * m * s2,
            _ => unreachable!(),
        })
        .product()
}

const MONOMIALS: [[u32; 2]; 9] = [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2], [3, 0], [2, 1], [1, 2], [0, 3]];

/// Signed-mixture estimate of each monomial with its standard error.
fn t0_estimates(state: &InitialState<f64>, cfg: &SamplerConfig) -> Vec<(f64, f64)> {
    let mixture = signed_mixture_decomposition(state).unwrap().pool_unit_spectrograms();
    let ensembles = sample_mixture(&mixture, cfg).unwrap();
    MONOMIALS
        .iter()
        .map(|e| {
            let (mut est, mut var) = (0.0, 0.0);
            for ens in &ensembles {
                let w = weight_to_real::<f64>(ens.weight);
                let xs: Vec<f64> = ens.points.iter().map(|z| z.q[0].powi(e[0] as i32) * z.p[0].powi(e[1] as i32)).collect();
                let (m, v) = mean_var(&xs);
                est += w * m;
                var += w * w * v / xs.len() as f64;
            }
            (est, var.sqrt())
        })
        .collect()
}

#[test]
fn moments_at_time_zero_are_unbiased() {
    let eps = 0.1;
    let c = [0.8, -0.4];
    let state = InitialState::gaussian(PhasePoint::from_1d(c[0], c[1]), eps).unwrap();
    for seed in [1, 2] {
        for (e, (est, se)) in MONOMIALS.iter().zip(t0_estimates(&state, &SamplerConfig::monte_carlo(N, seed))) {
            let exact = analytic_gaussian_moment(&c, e, eps);
            assert!((est - exact).abs() < 3.0 * se, "seed {seed} {e:?}: {est} vs {exact} (se {se})");
        }
    }
    let total_error = |n: usize| -> f64 {
        MONOMIALS
            .iter()
            .zip(t0_estimates(&state, &SamplerConfig::halton(n)))
            .map(|(e, (est, _))| (est - analytic_gaussian_moment(&c, e, eps)).abs())
            .sum()
    };
    let errors: Vec<f64> = [1 << 10, 1 << 13, 1 << 16].into_iter().map(total_error).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

#[test]
fn halton_coordinates_are_equidistributed() {
    let pts = halton_points::<f64>(8, 1 << 12, 64).unwrap();
    for i in 0..8 {
        let m = pts.iter().map(|x| x[i]).sum::<f64>() / pts.len() as f64;
        assert!((m - 0.5).abs() < 1e-3, "coordinate {i}: {m}");
    }
}

#[test]
fn mixtures_are_identical_across_thread_pools() {
    let state = InitialState::hermite(center(), MultiIndex::new(vec![2, 1]), 0.1).unwrap();
    let mixture = signed_mixture_decomposition(&state).unwrap();
    let cfg = SamplerConfig::monte_carlo(5000, 99);
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(5).build().unwrap();
    let a = serial.install(|| sample_mixture(&mixture, &cfg).unwrap());
    let b = wide.install(|| sample_mixture(&mixture, &cfg).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn decomposition_weights_sum_to_one(k in prop::collection::vec(0u32..6, 1..4), eps in 0.01..1.0f64) {
        let d = k.len();
        let c = PhasePoint::new(vec![0.1; d], vec![-0.2; d]).unwrap();
        for state in [InitialState::hermite(c.clone(), MultiIndex::new(k.clone()), eps).unwrap(), InitialState::gaussian(c, eps).unwrap()] {
            let mixture = signed_mixture_decomposition(&state).unwrap();
            let weights = mixture.weights();
            prop_assert_eq!(mixture.weight_sum(), Weight::from_integer(1));
            prop_assert!(weights.iter().any(|w| *w.numer() > 0));
            prop_assert!(weights.iter().any(|w| *w.numer() < 0));
            prop_assert!(weights.iter().all(|w| *w.denom() <= 2));
            let pooled = mixture.pool_unit_spectrograms();
            prop_assert_eq!(pooled.weight_sum(), Weight::from_integer(1));
        }
    }

    #[test]
    fn gamma_quantile_round_trips(shape in 1u32..40, scale in 0.001..10.0f64, u in 1e-6..(1.0 - 1e-6)) {
        let tau = gamma_inverse_cdf(shape, scale, u).unwrap();
        prop_assert!(tau > 0.0);
        prop_assert!((gamma_cdf(shape, scale, tau) - u).abs() < 1e-10);
    }

    #[test]
    fn normal_quantile_is_antisymmetric(u in 1e-9..0.5f64) {
        let a = normal_inverse_cdf::<f64>(u).unwrap();
        let b = normal_inverse_cdf::<f64>(1.0 - u).unwrap();
        prop_assert!((a + b).abs() < 1e-12 * a.abs().max(1.0) + 1e-15 / u);
    }
}
