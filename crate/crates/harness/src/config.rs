//! JSON run configuration, its validation and the conversion into core
//! objects.

use std::path::{Path, PathBuf};

use semiclassical::dynamics::{CubicWell, Free, Harmonic, HenonHeiles, IntegratorConfig, Potential, Scheme, Torsional};
use semiclassical::egorov::{Dependence, EstimatorMethod, ObservableSymbol};
use semiclassical::phase_space::{InitialState, MultiIndex, PhasePoint};
use semiclassical::reference::{GridAxis, GridSpec};
use semiclassical::sampling::{SamplerConfig, SamplerMode, SphereRoute, StreamCoupling, HALTON_MAX_DIM};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eps: f64,
    pub potential: PotentialSpec,
    pub initial_state: StateSpec,
    #[serde(default)]
    pub methods: Vec<MethodName>,
    pub sampler: SamplerSpec,
    pub integrator: IntegratorSpec,
    pub observables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialName {
    Free,
    Harmonic,
    Torsional,
    HenonHeiles,
    CubicWell,
}

/// Potential name plus optional parameters. Which parameters apply depends
/// on the name; missing ones take the usual defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub name: PotentialName,
    #[serde(default)]
    pub params: PotentialParams,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Henon–Heiles cubic coupling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    /// Henon–Heiles quartic confinement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confinement: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quartic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PointSpec {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Self {
        Self { q, p }
    }

    fn to_point(&self) -> Result<PhasePoint<f64>> {
        Ok(PhasePoint::new(self.q.clone(), self.p.clone())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateSpec {
    Gaussian { center: PointSpec },
    Hermite { center: PointSpec, k: Vec<u32> },
    Superposition { centers: [PointSpec; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Spectrogram,
    NaiveHusimi,
    Wigner,
}

impl MethodName {
    pub fn method(self) -> EstimatorMethod {
        match self {
            Self::Spectrogram => EstimatorMethod::Spectrogram,
            Self::NaiveHusimi => EstimatorMethod::NaiveHusimi,
            Self::Wigner => EstimatorMethod::WignerGaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Mc,
    Halton,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum RouteName {
    #[default]
    Auto,
    Direct,
    BlockMixture,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingName {
    #[default]
    Independent,
    Common,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub mode: ModeName,
    pub count: usize,
    /// One run per seed; more than one is Monte Carlo only.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_skip")]
    pub skip: u64,
    #[serde(default)]
    pub sphere_route: RouteName,
    #[serde(default)]
    pub coupling: CouplingName,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_skip() -> u64 {
    64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Strang,
    Order8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    pub scheme: SchemeName,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

fn default_stride() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    #[serde(default = "default_true")]
    pub enabled: bool,
    pub grid: GridJson,
    pub dt: f64,
    /// Defaults to the stride that records at the estimator's times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<usize>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub axes: Vec<AxisJson>,
    #[serde(default = "default_tolerance")]
    pub boundary_tolerance: f64,
}

fn default_tolerance() -> f64 {
    GridSpec::<f64>::DEFAULT_BOUNDARY_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct AxisJson {
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

/// `a / b` as a positive integer, if it is one up to rounding.
fn integer_ratio(a: f64, b: f64) -> Option<usize> {
    let r = a / b;
    let n = r.round();
    (n >= 1.0 && (r - n).abs() <= 1e-9 * r.max(1.0)).then_some(n as usize)
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

impl RunConfig {
    /// Parses and validates a JSON document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = json_pointer(e.path());
            HarnessError::schema(pointer, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// JSON Schema of the configuration document.
    pub fn json_schema() -> serde_json::Value {
        serde_json::to_value(schemars::schema_for!(RunConfig)).expect("schema serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn dim(&self) -> usize {
        let p = &self.potential.params;
        match self.potential.name {
            PotentialName::Torsional => 2,
            PotentialName::CubicWell => 1,
            PotentialName::HenonHeiles => p.dim.unwrap_or(32),
            PotentialName::Free | PotentialName::Harmonic => p.dim.unwrap_or(0),
        }
    }

    /// Checks every cross-field constraint. Errors carry the JSON pointer of
    /// the offending value.
    pub fn validate(&self) -> Result<()> {
        let err = |ptr: &str, msg: String| Err(HarnessError::schema(ptr, msg));
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return err("/eps", format!("must be positive, got {}", self.eps));
        }
        self.validate_potential()?;
        let d = self.dim();
        self.validate_state(d)?;

        let reference_on = self.reference.as_ref().is_some_and(|r| r.enabled);
        if self.methods.is_empty() && !reference_on {
            return err("/methods", "no estimator methods and no reference: nothing to run".into());
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return err(&format!("/methods/{i}"), "duplicate method".into());
            }
            match (&self.initial_state, m) {
                (StateSpec::Superposition { .. }, _) => {
                    return err(&format!("/methods/{i}"), "superposition states have no sampler".into());
                }
                (StateSpec::Hermite { .. }, MethodName::Wigner) => {
                    return err(&format!("/methods/{i}"), "the wigner method needs a gaussian initial state".into());
                }
                _ => {}
            }
        }

        let s = &self.sampler;
        if s.count == 0 {
            return err("/sampler/count", "must be at least 1".into());
        }
        if s.seeds.is_empty() {
            return err("/sampler/seeds", "needs at least one seed".into());
        }
        for (i, seed) in s.seeds.iter().enumerate() {
            if s.seeds[..i].contains(seed) {
                return err(&format!("/sampler/seeds/{i}"), "duplicate seed".into());
            }
        }
        if s.mode == ModeName::Halton {
            if s.seeds.len() > 1 {
                return err("/sampler/seeds", "halton points are deterministic; use a single seed".into());
            }
            if 2 * d > HALTON_MAX_DIM {
                return err("/sampler/mode", format!("halton supports 2d <= {HALTON_MAX_DIM}, got d = {d}"));
            }
            if s.sphere_route == RouteName::Direct && 2 * d + 1 > HALTON_MAX_DIM {
                return err(
                    "/sampler/sphere_route",
                    format!("the direct route needs {} halton coordinates, the limit is {HALTON_MAX_DIM}", 2 * d + 1),
                );
            }
        }

        let ig = &self.integrator;
        if !(ig.dt > 0.0 && ig.dt.is_finite()) {
            return err("/integrator/dt", format!("must be positive, got {}", ig.dt));
        }
        if !(ig.t_final >= ig.dt && ig.t_final.is_finite()) {
            return err("/integrator/t_final", format!("must be at least dt, got {}", ig.t_final));
        }
        if ig.record_stride == 0 {
            return err("/integrator/record_stride", "must be at least 1".into());
        }
        if self.integrator_config().validate().is_err() || integer_ratio(ig.t_final, ig.dt).is_none() {
            return err("/integrator/t_final", format!("{} is not an integer multiple of dt {}", ig.t_final, ig.dt));
        }

        if self.observables.is_empty() {
            return err("/observables", "needs at least one observable".into());
        }
        for (i, name) in self.observables.iter().enumerate() {
            let ptr = format!("/observables/{i}");
            if self.observables[..i].contains(name) {
                return err(&ptr, format!("duplicate observable `{name}`"));
            }
            let symbol = match ObservableSymbol::parse(name, d, self.barrier()) {
                Ok(s) => s,
                Err(e) => return err(&ptr, e.to_string()),
            };
            if reference_on && symbol.dependence() == Dependence::Mixed {
                return err(&ptr, format!("`{name}` mixes positions and momenta; the grid reference cannot evaluate it"));
            }
        }

        if let Some(r) = self.reference.as_ref().filter(|r| r.enabled) {
            self.validate_reference(r, d)?;
        }
        if self.output_dir.as_os_str().is_empty() {
            return err("/output_dir", "must not be empty".into());
        }
        Ok(())
    }

    fn validate_potential(&self) -> Result<()> {
        let p = &self.potential.params;
        let err = |field: &str, msg: String| Err(HarnessError::schema(format!("/potential/params/{field}"), msg));
        let fixed = |dim: usize| match p.dim {
            Some(d) if d != dim => err("dim", format!("this potential has dimension {dim}, got {d}")),
            _ => Ok(()),
        };
        let allowed: &[&str] = match self.potential.name {
            PotentialName::Free | PotentialName::Harmonic => {
                match p.dim {
                    None => return err("dim", "required for this potential".into()),
                    Some(0) => return err("dim", "must be at least 1".into()),
                    _ => {}
                }
                &["dim"]
            }
            PotentialName::Torsional => {
                fixed(2)?;
                &["dim"]
            }
            PotentialName::HenonHeiles => {
                if p.dim.is_some_and(|d| d < 2) {
                    return err("dim", "needs at least two degrees of freedom".into());
                }
                &["dim", "coupling", "confinement"]
            }
            PotentialName::CubicWell => {
                fixed(1)?;
                &["dim", "quadratic", "cubic", "quartic"]
            }
        };
        let given = [
            ("coupling", p.coupling),
            ("confinement", p.confinement),
            ("quadratic", p.quadratic),
            ("cubic", p.cubic),
            ("quartic", p.quartic),
        ];
        for (field, value) in given {
            if let Some(v) = value {
                if !allowed.contains(&field) {
                    return err(field, "not a parameter of this potential".into());
                }
                if !v.is_finite() {
                    return err(field, format!("must be finite, got {v}"));
                }
            }
        }
        Ok(())
    }

    fn validate_state(&self, d: usize) -> Result<()> {
        let check = |pt: &PointSpec, ptr: &str| -> Result<()> {
            if pt.q.len() != d {
                return Err(HarnessError::schema(
                    format!("{ptr}/q"),
                    format!("has {} entries, the potential has dimension {d}", pt.q.len()),
                ));
            }
            if pt.p.len() != d {
                return Err(HarnessError::schema(
                    format!("{ptr}/p"),
                    format!("has {} entries, the potential has dimension {d}", pt.p.len()),
                ));
            }
            if pt.q.iter().chain(&pt.p).any(|x| !x.is_finite()) {
                return Err(HarnessError::schema(ptr, "coordinates must be finite"));
            }
            Ok(())
        };
        match &self.initial_state {
            StateSpec::Gaussian { center } => check(center, "/initial_state/center"),
            StateSpec::Hermite { center, k } => {
                check(center, "/initial_state/center")?;
                if k.len() != d {
                    return Err(HarnessError::schema(
                        "/initial_state/k",
                        format!("has {} entries, the potential has dimension {d}", k.len()),
                    ));
                }
                Ok(())
            }
            StateSpec::Superposition { centers } => {
                for (i, c) in centers.iter().enumerate() {
                    check(c, &format!("/initial_state/centers/{i}"))?;
                }
                Ok(())
            }
        }
    }

    fn validate_reference(&self, r: &ReferenceSpec, d: usize) -> Result<()> {
        let err = |ptr: &str, msg: String| Err(HarnessError::schema(ptr, msg));
        if !(1..=2).contains(&d) {
            return err("/reference", format!("the grid reference supports d = 1 or 2, got {d}"));
        }
        if r.grid.axes.len() != d {
            return err("/reference/grid/axes", format!("needs {d} axes, got {}", r.grid.axes.len()));
        }
        for (i, a) in r.grid.axes.iter().enumerate() {
            if a.nodes < GridSpec::<f64>::MIN_NODES || a.nodes % 2 != 0 {
                return err(
                    &format!("/reference/grid/axes/{i}/nodes"),
                    format!("must be even and at least {}, got {}", GridSpec::<f64>::MIN_NODES, a.nodes),
                );
            }
            if !(a.hi > a.lo && a.lo.is_finite() && a.hi.is_finite()) {
                return err(&format!("/reference/grid/axes/{i}/hi"), format!("[{}, {}] is empty", a.lo, a.hi));
            }
        }
        if !(r.grid.boundary_tolerance > 0.0) {
            return err("/reference/grid/boundary_tolerance", "must be positive".into());
        }
        if !(r.dt > 0.0 && r.dt.is_finite()) || integer_ratio(self.integrator.t_final, r.dt).is_none() {
            return err("/reference/dt", format!("must divide t_final {} into whole steps", self.integrator.t_final));
        }
        let interval = self.integrator.dt * self.integrator.record_stride as f64;
        match r.record_stride {
            None if integer_ratio(interval, r.dt).is_none() => err(
                "/reference/dt",
                format!("does not divide the estimator record interval {interval}; set record_stride explicitly"),
            ),
            Some(0) => err("/reference/record_stride", "must be at least 1".into()),
            Some(s) if integer_ratio(interval, r.dt * s as f64).is_none() => err(
                "/reference/record_stride",
                format!("record interval {} does not divide the estimator record interval {interval}", r.dt * s as f64),
            ),
            _ => Ok(()),
        }
    }

    /// Location of the escape barrier, for potentials that have one.
    pub fn barrier(&self) -> Option<f64> {
        match self.potential.name {
            PotentialName::CubicWell => self.cubic_well().barrier_top(),
            _ => None,
        }
    }

    fn cubic_well(&self) -> CubicWell {
        let p = &self.potential.params;
        let base = CubicWell::default();
        CubicWell {
            quadratic: p.quadratic.unwrap_or(base.quadratic),
            cubic: p.cubic.unwrap_or(base.cubic),
            quartic: p.quartic.unwrap_or(base.quartic),
        }
    }

    pub fn potential(&self) -> Box<dyn Potential<f64>> {
        let p = &self.potential.params;
        let d = self.dim();
        match self.potential.name {
            PotentialName::Free => Box::new(Free { dim: d }),
            PotentialName::Harmonic => Box::new(Harmonic { dim: d }),
            PotentialName::Torsional => Box::new(Torsional),
            PotentialName::HenonHeiles => Box::new(HenonHeiles {
                dim: d,
                coupling: p.coupling.unwrap_or(HenonHeiles::COUPLING),
                confinement: p.confinement.unwrap_or(HenonHeiles::CONFINEMENT),
            }),
            PotentialName::CubicWell => Box::new(self.cubic_well()),
        }
    }

    pub fn state(&self) -> Result<InitialState<f64>> {
        Ok(match &self.initial_state {
            StateSpec::Gaussian { center } => InitialState::gaussian(center.to_point()?, self.eps)?,
            StateSpec::Hermite { center, k } => {
                InitialState::hermite(center.to_point()?, MultiIndex::new(k.clone()), self.eps)?
            }
            StateSpec::Superposition { centers } => {
                InitialState::superposition(centers[0].to_point()?, centers[1].to_point()?, self.eps)?
            }
        })
    }

    pub fn observables(&self) -> Result<Vec<ObservableSymbol<f64>>> {
        let d = self.dim();
        self.observables
            .iter()
            .map(|n| ObservableSymbol::parse(n, d, self.barrier()).map_err(HarnessError::from))
            .collect()
    }

    pub fn sampler_config(&self, seed: u64) -> SamplerConfig {
        let s = &self.sampler;
        let mode = match s.mode {
            ModeName::Mc => SamplerMode::MonteCarlo,
            ModeName::Halton => SamplerMode::Halton,
        };
        let route = match s.sphere_route {
            RouteName::Auto => SphereRoute::Auto,
            RouteName::Direct => SphereRoute::Direct,
            RouteName::BlockMixture => SphereRoute::BlockMixture,
        };
        let coupling = match s.coupling {
            CouplingName::Independent => StreamCoupling::Independent,
            CouplingName::Common => StreamCoupling::Common,
        };
        let mut cfg = SamplerConfig::new(mode, s.count, seed).with_sphere_route(route).with_coupling(coupling);
        cfg.halton_skip = s.skip;
        cfg
    }

    pub fn integrator_config(&self) -> IntegratorConfig<f64> {
        let ig = &self.integrator;
        let scheme = match ig.scheme {
            SchemeName::Strang => Scheme::Strang,
            SchemeName::Order8 => Scheme::Order8,
        };
        IntegratorConfig::new(scheme, ig.dt, ig.t_final).with_stride(ig.record_stride)
    }

    /// The enabled reference grid.
    pub fn reference_grid(&self) -> Option<GridSpec<f64>> {
        let r = self.reference.as_ref().filter(|r| r.enabled)?;
        let axes = r.grid.axes.iter().map(|a| GridAxis::new(a.lo, a.hi, a.nodes)).collect();
        Some(GridSpec::new(axes).with_boundary_tolerance(r.grid.boundary_tolerance))
    }

    /// Reference record stride, explicit or aligned with the estimator.
    pub fn reference_stride(&self) -> Option<usize> {
        let r = self.reference.as_ref().filter(|r| r.enabled)?;
        r.record_stride.or_else(|| {
            integer_ratio(self.integrator.dt * self.integrator.record_stride as f64, r.dt)
        })
    }
}
