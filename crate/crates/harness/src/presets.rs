//! Ready-made configurations for the three benchmark experiments, at full
//! size and reduced for a desktop machine.

use std::fmt;
use std::path::PathBuf;

use crate::config::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Desk,
    Paper,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Self::Desk => "desk",
            Self::Paper => "paper",
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Desk runs use this many times fewer trajectories.
pub const DESK_DIVISOR: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub config: RunConfig,
}

struct TorsionalRow {
    eps: f64,
    mc_count: usize,
    halton_count: usize,
    steps: usize,
    half_width: f64,
    nodes: usize,
}

const TORSIONAL_TABLE: [TorsionalRow; 5] = [
    TorsionalRow { eps: 0.1, mc_count: 50_000, halton_count: 50_000, steps: 5000, half_width: 3.0, nodes: 1536 },
    TorsionalRow { eps: 0.05, mc_count: 300_000, halton_count: 100_000, steps: 5000, half_width: 3.0, nodes: 1536 },
    TorsionalRow { eps: 0.01, mc_count: 600_000, halton_count: 200_000, steps: 7500, half_width: 2.0, nodes: 2048 },
    TorsionalRow { eps: 0.005, mc_count: 1_500_000, halton_count: 800_000, steps: 10_000, half_width: 2.0, nodes: 2048 },
    TorsionalRow { eps: 0.001, mc_count: 10_000_000, halton_count: 2_000_000, steps: 10_000, half_width: 2.0, nodes: 2048 },
];

pub const TORSIONAL_T_FINAL: f64 = 20.0;
pub const TORSIONAL_SEEDS: u64 = 10;
const TORSIONAL_DESK_NODES: usize = 256;

fn torsional_config(row: &TorsionalRow, scale: Scale, mode: ModeName) -> RunConfig {
    let (count, seeds) = match mode {
        ModeName::Mc => (row.mc_count, (0..TORSIONAL_SEEDS).collect()),
        ModeName::Halton => (row.halton_count, vec![0]),
    };
    let (count, nodes) = match scale {
        Scale::Paper => (count, row.nodes),
        Scale::Desk => (count / DESK_DIVISOR, TORSIONAL_DESK_NODES),
    };
    let estimator_dt = 0.1;
    let record_stride = 2;
    let reference_dt = TORSIONAL_T_FINAL / row.steps as f64;
    let axis = AxisJson { lo: -row.half_width, hi: row.half_width, nodes };
    RunConfig {
        eps: row.eps,
        potential: PotentialSpec { name: PotentialName::Torsional, params: PotentialParams::default() },
        initial_state: StateSpec::Gaussian { center: PointSpec::new(vec![1.0, 0.0], vec![0.0, 0.0]) },
        methods: vec![MethodName::Spectrogram, MethodName::NaiveHusimi],
        sampler: SamplerSpec {
            mode,
            count,
            seeds,
            skip: 64,
            sphere_route: RouteName::Auto,
            coupling: CouplingName::Independent,
        },
        integrator: IntegratorSpec {
            scheme: SchemeName::Order8,
            dt: estimator_dt,
            t_final: TORSIONAL_T_FINAL,
            record_stride,
        },
        observables: ["q1", "q2", "p1", "p2", "kinetic", "potential", "total_energy"].map(String::from).to_vec(),
        reference: Some(ReferenceSpec {
            enabled: true,
            grid: GridJson { axes: vec![axis.clone(), axis], boundary_tolerance: 1e-7 },
            dt: reference_dt,
            record_stride: Some(row.steps / (TORSIONAL_T_FINAL / (estimator_dt * record_stride as f64)).round() as usize),
        }),
        output_dir: PathBuf::from(format!("out/torsional/{scale}/{}/eps_{}", mode_name(mode), row.eps)),
    }
}

fn mode_name(mode: ModeName) -> &'static str {
    match mode {
        ModeName::Mc => "mc",
        ModeName::Halton => "halton",
    }
}

/// One configuration per ε, largest first. Desk runs keep the three
/// largest ε.
pub fn torsional(scale: Scale, mode: ModeName) -> Vec<RunConfig> {
    let rows = match scale {
        Scale::Paper => &TORSIONAL_TABLE[..],
        Scale::Desk => &TORSIONAL_TABLE[..3],
    };
    rows.iter().map(|r| torsional_config(r, scale, mode)).collect()
}

pub const HENON_HEILES_DIM: usize = 32;
pub const HENON_HEILES_EPS: f64 = 0.0029;
pub const HENON_HEILES_CENTER: f64 = 0.1215;

pub fn henon_heiles(scale: Scale) -> RunConfig {
    let d = HENON_HEILES_DIM;
    let sampler = match scale {
        Scale::Paper => SamplerSpec {
            mode: ModeName::Halton,
            count: 1 << 17,
            seeds: vec![0],
            skip: 64,
            sphere_route: RouteName::Auto,
            coupling: CouplingName::Independent,
        },
        Scale::Desk => SamplerSpec {
            mode: ModeName::Mc,
            count: (1 << 17) / DESK_DIVISOR,
            seeds: vec![0],
            skip: 64,
            sphere_route: RouteName::Auto,
            coupling: CouplingName::Common,
        },
    };
    RunConfig {
        eps: HENON_HEILES_EPS,
        potential: PotentialSpec {
            name: PotentialName::HenonHeiles,
            params: PotentialParams { dim: Some(d), ..PotentialParams::default() },
        },
        initial_state: StateSpec::Gaussian { center: PointSpec::new(vec![HENON_HEILES_CENTER; d], vec![0.0; d]) },
        methods: vec![MethodName::Spectrogram, MethodName::NaiveHusimi, MethodName::Wigner],
        sampler,
        integrator: IntegratorSpec { scheme: SchemeName::Order8, dt: 0.02, t_final: 10.0, record_stride: 5 },
        observables: ["potential", "kinetic", "total_energy"].map(String::from).to_vec(),
        reference: None,
        output_dir: PathBuf::from(format!("out/henon-heiles/{scale}")),
    }
}

pub const CUBIC_WELL_EPS: f64 = 0.4642;
pub const CUBIC_WELL_ORDERS: [u32; 4] = [0, 1, 3, 6];

pub fn cubic_well(scale: Scale, k: u32) -> RunConfig {
    let (count, lo, hi, nodes, tolerance) = match scale {
        Scale::Paper => (1 << 14, -40.0, 4.0, 1 << 15, 1e-2),
        Scale::Desk => ((1 << 14) / DESK_DIVISOR, -40.0, 8.0, 1 << 13, 1e-10),
    };
    let center = PointSpec::new(vec![0.4642], vec![-1.0]);
    let (initial_state, methods) = if k == 0 {
        (StateSpec::Gaussian { center }, vec![MethodName::Spectrogram, MethodName::Wigner])
    } else {
        (StateSpec::Hermite { center, k: vec![k] }, vec![MethodName::Spectrogram])
    };
    RunConfig {
        eps: CUBIC_WELL_EPS,
        potential: PotentialSpec { name: PotentialName::CubicWell, params: PotentialParams::default() },
        initial_state,
        methods,
        sampler: SamplerSpec {
            mode: ModeName::Halton,
            count,
            seeds: vec![0],
            skip: 64,
            sphere_route: RouteName::Auto,
            coupling: CouplingName::Independent,
        },
        integrator: IntegratorSpec { scheme: SchemeName::Order8, dt: 0.01, t_final: 6.0, record_stride: 2 },
        observables: ["escape", "q1", "p1", "total_energy"].map(String::from).to_vec(),
        reference: Some(ReferenceSpec {
            enabled: true,
            grid: GridJson { axes: vec![AxisJson { lo, hi, nodes }], boundary_tolerance: tolerance },
            dt: 1e-3,
            record_stride: Some(20),
        }),
        output_dir: PathBuf::from(format!("out/cubic-well/{scale}/k{k}")),
    }
}

/// Every preset, named `<experiment>/<scale>[/<variant>]`.
pub fn catalog() -> Vec<Preset> {
    let mut out = Vec::new();
    for scale in [Scale::Desk, Scale::Paper] {
        for mode in [ModeName::Halton, ModeName::Mc] {
            for cfg in torsional(scale, mode) {
                out.push(Preset { name: format!("torsional/{scale}/{}/eps_{}", mode_name(mode), cfg.eps), config: cfg });
            }
        }
        out.push(Preset { name: format!("henon-heiles/{scale}"), config: henon_heiles(scale) });
        for k in CUBIC_WELL_ORDERS {
            out.push(Preset { name: format!("cubic-well/{scale}/k{k}"), config: cubic_well(scale, k) });
        }
    }
    out
}

pub fn find(name: &str) -> Option<Preset> {
    catalog().into_iter().find(|p| p.name == name)
}

/// Phase-space window and state of the two-packet density plot.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityWindow {
    pub eps: f64,
    pub centers: [(f64, f64); 2],
    pub q_range: (f64, f64),
    pub p_range: (f64, f64),
    pub nodes: usize,
}

pub fn two_packet_window() -> DensityWindow {
    DensityWindow { eps: 0.14, centers: [(0.0, 1.0), (1.0, -1.5)], q_range: (-1.5, 2.5), p_range: (-3.0, 2.5), nodes: 161 }
}
