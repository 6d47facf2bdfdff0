use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semiclassical::phase_space::{InitialState, MultiIndex, PhasePoint};
use semiclassical_harness::config::{MethodName, ModeName, RunConfig};
use semiclassical_harness::pipeline;
use semiclassical_harness::presets::{self, Scale};
use semiclassical_harness::HarnessError;

#[derive(Parser)]
#[command(name = "semiclassical", version, about = "Phase-space densities, trajectory estimators and grid references")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the Wigner, Husimi and new densities of a state.
    DensityGrid(DensityGridArgs),
    /// Dump the initial sample points of a method.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "spectrogram")]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the estimators of a configuration.
    Estimate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the grid reference of a configuration.
    Reference {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write the final wave field.
        #[arg(long)]
        dump_field: bool,
    },
    /// Time-averaged errors and convergence slopes of finished runs.
    Compare {
        /// Where errors.csv and slopes.csv go.
        #[arg(long)]
        out: PathBuf,
        /// Run directories holding estimator and reference series.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
    /// Full preset pipeline of one experiment.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentArg,
        #[arg(long, value_enum, default_value = "desk")]
        scale: ScaleArg,
        /// Sampler of the torsional study.
        #[arg(long, value_enum, default_value = "halton")]
        sampler: SamplerArg,
        /// Hermite orders of the cubic-well study.
        #[arg(long, value_delimiter = ',', default_values_t = presets::CUBIC_WELL_ORDERS)]
        orders: Vec<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// List presets, or print one as a configuration file.
    Presets { name: Option<String> },
    /// Print the JSON Schema of configuration files.
    Schema,
}

#[derive(Args)]
struct DensityGridArgs {
    #[arg(long, value_enum, default_value = "superposition")]
    state: StateArg,
    #[arg(long)]
    eps: Option<f64>,
    /// Packet center as `q1,..,qd:p1,..,pd`; give two for a superposition.
    #[arg(long, allow_hyphen_values = true)]
    center: Vec<String>,
    /// Hermite multi-index, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    /// `lo,hi` of the first plotted axis.
    #[arg(long, allow_hyphen_values = true)]
    q_range: Option<String>,
    /// `lo,hi` of the second plotted axis.
    #[arg(long, allow_hyphen_values = true)]
    p_range: Option<String>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Tabulate along a ray from the center out to this distance instead.
    #[arg(long)]
    profile: Option<f64>,
    /// For two-dimensional states: fixed momentum `p1,p2` of the `(q1, q2)` slice.
    #[arg(long, allow_hyphen_values = true)]
    slice_p: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Gaussian,
    Hermite,
    Superposition,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectrogram,
    NaiveHusimi,
    Wigner,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Torsional,
    HenonHeiles,
    CubicWell,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Desk,
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Halton,
    Mc,
}

fn parse_list(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("`{s}` is not a number")))
        .collect()
}

fn parse_range(text: &str) -> anyhow::Result<(f64, f64)> {
    match parse_list(text)?[..] {
        [lo, hi] if hi > lo => Ok((lo, hi)),
        _ => bail!("range `{text}` must be `lo,hi` with lo < hi"),
    }
}

fn parse_center(text: &str) -> anyhow::Result<PhasePoint<f64>> {
    let (q, p) = text.split_once(':').with_context(|| format!("center `{text}` must be `q..:p..`"))?;
    Ok(PhasePoint::new(parse_list(q)?, parse_list(p)?)?)
}

fn density_grid(args: &DensityGridArgs) -> anyhow::Result<()> {
    let window = presets::two_packet_window();
    let eps = args.eps.unwrap_or(window.eps);
    let mut centers = args.center.iter().map(|c| parse_center(c)).collect::<anyhow::Result<Vec<_>>>()?;
    let state = match args.state {
        StateArg::Superposition => {
            if centers.is_empty() {
                centers = window.centers.iter().map(|&(q, p)| PhasePoint::from_1d(q, p)).collect();
            }
            let [a, b] = <[PhasePoint<f64>; 2]>::try_from(centers).map_err(|_| anyhow::anyhow!("a superposition needs two centers"))?;
            InitialState::superposition(a, b, eps)?
        }
        StateArg::Gaussian | StateArg::Hermite => {
            let center = match centers.len() {
                0 => PhasePoint::from_1d(window.centers[0].0, window.centers[0].1),
                1 => centers.remove(0),
                n => bail!("expected one center, got {n}"),
            };
            match args.state {
                StateArg::Hermite => {
                    let k = if args.k.is_empty() { vec![1; center.dim()] } else { args.k.clone() };
                    InitialState::hermite(center, MultiIndex::new(k), eps)?
                }
                _ => InitialState::gaussian(center, eps)?,
            }
        }
    };
    let table = if let Some(r_max) = args.profile {
        pipeline::density_profile(&state, r_max, args.nodes.unwrap_or(401))?
    } else {
        let q = args.q_range.as_deref().map(parse_range).transpose()?.unwrap_or(window.q_range);
        let p = args.p_range.as_deref().map(parse_range).transpose()?.unwrap_or(window.p_range);
        let nodes = args.nodes.unwrap_or(window.nodes);
        if state.dim() == 2 {
            let momentum = match args.slice_p.as_deref().map(parse_list).transpose()? {
                Some(v) if v.len() == 2 => [v[0], v[1]],
                Some(_) => bail!("--slice-p needs two values"),
                None => {
                    let m = state.mean();
                    [m.p[0], m.p[1]]
                }
            };
            pipeline::density_slice(&state, q, p, nodes, momentum)?
        } else {
            pipeline::density_grid(&state, q, p, nodes)?
        }
    };
    table.write(&args.out)?;
    println!("{} rows -> {}", table.rows.len(), args.out.display());
    Ok(())
}

fn load(config: &Path, out_dir: Option<&PathBuf>) -> Result<RunConfig, HarnessError> {
    let mut cfg = RunConfig::from_file(config)?;
    if let Some(dir) = out_dir {
        cfg.output_dir = dir.clone();
    }
    Ok(cfg)
}

fn print_final_values(series: &semiclassical::egorov::ExpectationSeries<f64>) {
    let last = series.times.len() - 1;
    print!("  {:<14} t={:<8}", series.method.name(), series.times[last]);
    for (name, v) in series.names.iter().zip(&series.values) {
        print!(" {name}={:.6e}", v[last]);
    }
    println!();
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::DensityGrid(args) => density_grid(&args)?,
        Command::Sample { config, method, out } => {
            let cfg = load(&config, None)?;
            let method = match method {
                MethodArg::Spectrogram => MethodName::Spectrogram,
                MethodArg::NaiveHusimi => MethodName::NaiveHusimi,
                MethodArg::Wigner => MethodName::Wigner,
            };
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            let mut file = BufWriter::new(File::create(&out).with_context(|| out.display().to_string())?);
            pipeline::sample_dump(&cfg, method, &mut file)?;
            file.flush()?;
        }
        Command::Estimate { config, out_dir } => {
            let cfg = load(&config, out_dir.as_ref())?;
            let runs = pipeline::estimate(&cfg)?;
            pipeline::write_config(&cfg.output_dir, &cfg)?;
            pipeline::write_estimates(&cfg.output_dir, &cfg, &runs)?;
            for r in &runs {
                print_final_values(&r.combined);
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Reference { config, out_dir, dump_field } => {
            let cfg = load(&config, out_dir.as_ref())?;
            let Some((series, field)) = pipeline::reference(&cfg)? else {
                bail!("{}: the configuration has no enabled reference", config.display());
            };
            pipeline::write_config(&cfg.output_dir, &cfg)?;
            pipeline::write_reference(&cfg.output_dir, &cfg, &series, dump_field.then_some(&field))?;
            print_final_values(&series);
            if !series.meta.boundary_violation_times.is_empty() {
                eprintln!(
                    "warning: wave function reached the grid boundary at {} recorded times",
                    series.meta.boundary_violation_times.len()
                );
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Compare { out, runs } => {
            let comparison = pipeline::compare(&runs)?;
            comparison.write(&out)?;
            comparison.report(&mut std::io::stdout())?;
        }
        Command::Experiment { which, scale, sampler, orders, out } => {
            let scale = match scale {
                ScaleArg::Desk => Scale::Desk,
                ScaleArg::Paper => Scale::Paper,
            };
            let stdout = &mut std::io::stdout();
            match which {
                ExperimentArg::Torsional => {
                    let mode = match sampler {
                        SamplerArg::Halton => ModeName::Halton,
                        SamplerArg::Mc => ModeName::Mc,
                    };
                    pipeline::torsional_experiment(scale, mode, &out, stdout)?;
                }
                ExperimentArg::HenonHeiles => {
                    pipeline::henon_heiles_experiment(scale, &out, stdout)?;
                }
                ExperimentArg::CubicWell => {
                    pipeline::cubic_well_experiment(scale, &orders, &out, stdout)?;
                }
            }
        }
        Command::Presets { name: None } => {
            let mut out = std::io::stdout().lock();
            for p in presets::catalog() {
                writeln!(out, "{}", p.name)?;
            }
        }
        Command::Presets { name: Some(name) } => {
            let Some(p) = presets::find(&name) else {
                bail!("no preset named `{name}`; run `semiclassical presets` for the list");
            };
            writeln!(std::io::stdout().lock(), "{}", p.config.to_json_pretty())?;
        }
        Command::Schema => {
            writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&RunConfig::json_schema())?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<HarnessError>().is_some_and(|h| h.pointer().is_some()) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
