use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pdlab_core::geom::{build_delaunay, sample_delaunay, PointSet, Triangulation};
use pdlab_core::grid::Which;
use pdlab_core::harness::{
    calibrate_r, render_svg, run_experiment, summary_csv, write_outputs, CalibrationConfig,
    ExperimentConfig, ExperimentName, Overlay,
};
use pdlab_core::seeds::replica_seed;
use pdlab_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "pdlab",
    version,
    about = "Poisson-Delaunay percolation and first-passage experiments",
    after_help = "Experiments: fn-scaling, kappa, gamma-area, fpp-variance, segment-walk, cluster-tail, \
                  good-box, path-density, stabbing, confinement, reimer, cover-animal.\n\
                  Run one with `pdlab <experiment> --config FILE [--seed S] [--width W] [--out DIR]`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smallest box side whose bad (or ugly) probability is below a target.
    CalibrateR(CalibrateArgs),
    /// Draw a Delaunay triangulation with its Voronoi tiling as SVG.
    Render(RenderArgs),
    #[command(external_subcommand)]
    Experiment(Vec<String>),
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    target: f64,
    #[arg(long, default_value = "ugly", value_parser = parse_which)]
    mode: Which,
    #[arg(long, default_value_t = 4000)]
    replicas: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Sample the instance of replica `--replica` of this experiment config.
    #[arg(long, conflicts_with = "points", required_unless_present = "points")]
    config: Option<PathBuf>,
    /// Point file (window header plus one `x y` line per point).
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    replica: u64,
    #[arg(long)]
    no_voronoi: bool,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Parser, Debug)]
#[command(name = "pdlab <experiment>", no_binary_name = true)]
struct RunArgs {
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_which(s: &str) -> std::result::Result<Which, String> {
    match s {
        "ugly" => Ok(Which::Ugly),
        "bad" => Ok(Which::Bad),
        _ => Err(format!("expected `ugly` or `bad`, got `{s}`")),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let name: ExperimentName = args.experiment.parse()?;
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.experiment != name {
        return Err(Error::config(
            "experiment",
            format!("config is for `{}`, not `{name}`", cfg.experiment),
        ));
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.width {
        cfg.width = w;
    }
    let out = run_experiment(&cfg)?;
    write_outputs(&out, &args.out)?;
    print!("{}", summary_csv(&out));
    Ok(())
}

fn calibrate(a: CalibrateArgs) -> Result<()> {
    let cfg = CalibrationConfig {
        replicas: a.replicas,
        seed: a.seed,
        ..CalibrationConfig::new(a.lambda, a.target, a.mode)
    };
    let c = calibrate_r(&cfg)?;
    println!(
        "{}",
        serde_json::to_string(&c).map_err(|e| Error::Internal(e.to_string()))?
    );
    Ok(())
}

fn instance(a: &RenderArgs) -> Result<Triangulation> {
    match (&a.config, &a.points) {
        (Some(path), _) => {
            let cfg = ExperimentConfig::load(path)?;
            let seed = replica_seed(cfg.seed, cfg.experiment.as_str(), a.replica);
            sample_delaunay(cfg.window, cfg.intensity, seed)
        }
        (None, Some(path)) => build_delaunay(&PointSet::read(path)?),
        (None, None) => Err(Error::config("config", "need --config or --points")),
    }
}

fn render(a: RenderArgs) -> Result<()> {
    let tri = instance(&a)?;
    let mut overlays = vec![Overlay::Delaunay];
    if !a.no_voronoi {
        overlays.push(Overlay::Voronoi);
    }
    overlays.push(Overlay::Sites);
    let svg = render_svg(Some(&tri), &tri.point_set().window().rect(), &overlays);
    write_file(&a.out, &svg)
}

fn write_file(path: &Path, s: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, s)?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::CalibrateR(a) => calibrate(a),
        Command::Render(a) => render(a),
        Command::Experiment(argv) => match RunArgs::try_parse_from(argv) {
            Ok(a) => run(a),
            Err(e) => e.exit(),
        },
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pdlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
