use crate::error::{Error, Result};
use crate::scalar::Real;

// Acklam's rational approximation coefficients.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const P_LOW: f64 = 0.02425;

fn acklam(u: f64) -> f64 {
    if u < P_LOW {
        let q = (-2.0 * u.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Lower half quantile refined by one Halley step on `Φ(x) − u`.
fn lower_quantile(u: f64) -> f64 {
    let x = acklam(u);
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - u;
    let r = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    x - r / (1.0 + 0.5 * x * r)
}

/// Standard normal quantile `Φ⁻¹(u)`.
pub fn normal_inverse_cdf<T: Real>(u: T) -> Result<T> {
    if !(u > T::zero() && u < T::one()) {
        return Err(Error::ProbabilityOutOfRange(u.to_f64_lossy()));
    }
    let u = u.to_f64_lossy();
    let x = if u <= 0.5 { lower_quantile(u) } else { -lower_quantile(1.0 - u) };
    Ok(T::lit(x))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
