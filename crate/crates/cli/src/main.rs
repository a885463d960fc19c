use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use atsp_cli::generate::{self, Family};
use atsp_cli::{bench, compare, input, metrics, svg};
use atsp_core::pipeline::PipelineError;
use atsp_core::{solve, Backend, Execution, FlatnessParams, Mode, Phase, PointCloud, SideRadius, SolveParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

#[derive(Parser)]
#[command(name = "atsp", version, about = "Multiscale two-to-one tours through point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write tour, metrics and optionally an SVG.
    Solve(SolveCmd),
    /// Run the dyadic worst-case family and check the cubic lower bound.
    Sharpness(SharpnessCmd),
    /// Sweep sizes and fit the growth exponent of the distance meter.
    Bench(BenchCmd),
    /// Compare tour length against MST, nearest insertion and the optimum.
    Compare(CompareCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Width,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Lenient,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Half,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Sharpness,
    Uniform,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Neighbourhood radius factor.
    #[arg(long, default_value_t = 300.0)]
    c0: f64,
    /// Grid half-resolution for the grid backend (default ceil(40 c0 sqrt(N-1))).
    #[arg(long)]
    grid_l: Option<u32>,
    #[arg(long, value_enum, default_value_t = BackendArg::Width)]
    backend: BackendArg,
    /// Flatness threshold; a vertex is flat when alpha <= threshold.
    #[arg(long, default_value_t = 0.0625)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
    /// Radius of the old-neighbour test at flat vertices, as a fraction of c0 s.
    #[arg(long, value_enum, default_value_t = SideArg::Half)]
    side_radius: SideArg,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn params(&self) -> Result<SolveParams> {
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            bail!("--c0 must be positive, got {}", self.c0);
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            bail!("--threshold must lie in (0, 1), got {}", self.threshold);
        }
        let flatness = FlatnessParams {
            c0: self.c0,
            grid_l: self.grid_l,
            backend: match self.backend {
                BackendArg::Width => Backend::Width,
                BackendArg::Grid => Backend::Grid,
            },
            threshold: self.threshold,
            execution: if self.sequential { Execution::Sequential } else { Execution::Parallel },
            ..FlatnessParams::default()
        };
        Ok(SolveParams {
            flatness,
            mode: match self.mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Lenient => Mode::Lenient,
            },
            side_radius: match self.side_radius {
                SideArg::Half => SideRadius::Half,
                SideArg::Full => SideRadius::Full,
            },
        })
    }
}

#[derive(Args)]
struct SolveCmd {
    /// Point file; without it a uniform instance is generated from --n/--dim/--seed.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory (metrics go to stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write tour.svg (planar inputs only).
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SharpnessCmd {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BenchCmd {
    #[arg(long, value_delimiter = ',', default_values_t = [32, 64, 128, 256])]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Sharpness)]
    family: FamilyArg,
    /// Dimension of the uniform family.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct CompareCmd {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

fn load(path: &Path) -> Result<(PointCloud, usize)> {
    let loaded = input::read_points(path)?;
    if loaded.duplicates > 0 {
        warn!("dropped {} duplicate point(s)", loaded.duplicates);
    }
    Ok((loaded.cloud, loaded.duplicates))
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn run_solve(cmd: SolveCmd) -> Result<()> {
    let params = cmd.solver.params()?;
    let (cloud, duplicates) = match (&cmd.input, cmd.n) {
        (Some(path), _) => load(path)?,
        (None, Some(n)) => (generate::uniform(n, cmd.dim, cmd.seed)?, 0),
        (None, None) => bail!("--input or --n is required"),
    };
    if let Some(w) = params.flatness.profile_warning(cloud.dim()) {
        warn!("{w}");
    }
    if let Some(dir) = &cmd.output {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let sol = match solve(&cloud, &params) {
        Ok(sol) => sol,
        Err(PipelineError::Invariant { level, violation, trace }) => {
            let text = metrics::render_failure(&cloud, duplicates, &params, level, &violation.to_string(), &trace);
            match &cmd.output {
                Some(dir) => write(dir, "metrics.txt", &text)?,
                None => print!("{text}"),
            }
            bail!("invariant violated at level {level}: {violation}");
        }
        Err(e) => return Err(e.into()),
    };
    for d in &sol.trace.deviations {
        warn!("{d}");
    }
    let text = metrics::render(&cloud, duplicates, &params, &sol);
    let times = metrics::render_times(&sol.trace);
    eprint!("{times}");
    let Some(dir) = &cmd.output else {
        print!("{text}");
        return Ok(());
    };
    let tour: String = sol.tour.sequence().iter().map(|i| format!("{i}\n")).collect();
    write(dir, "tour.txt", &tour)?;
    write(dir, "metrics.txt", &text)?;
    write(dir, "timings.txt", &times)?;
    if cmd.svg {
        match svg::render(&cloud, &sol.tour) {
            Some(body) => write(dir, "tour.svg", &body)?,
            None => warn!("--svg ignored: input has {} dimensions", cloud.dim()),
        }
    }
    info!("wrote results to {}", dir.display());
    Ok(())
}

fn run_sharpness(cmd: SharpnessCmd) -> Result<()> {
    let params = cmd.solver.params()?;
    let cloud = generate::sharpness(cmd.n)?;
    let sol = solve(&cloud, &params)?;
    let meter = sol.meter.count(Phase::NetRefinement);
    let n = cmd.n as u64;
    let bound = n * n * n / 32;
    println!("n = {}", cmd.n);
    println!("meter.net_refinement = {meter}");
    println!("bound = {bound}");
    println!("bound_ok = {}", meter >= bound);
    println!("refinements = {}", sol.trace.ladder.len() - 1);
    println!("meter.total = {}", sol.meter.total());
    println!("tour_length = {}", sol.tour_length);
    if meter < bound {
        bail!("net refinement meter {meter} below n^3/32 = {bound}");
    }
    Ok(())
}

fn run_bench(cmd: BenchCmd) -> Result<()> {
    let params = cmd.solver.params()?;
    let family = match cmd.family {
        FamilyArg::Sharpness => Family::Sharpness,
        FamilyArg::Uniform => Family::Uniform { dim: cmd.dim },
    };
    let sweep = bench::sweep(family, &cmd.sizes, cmd.seed, &params)?;
    print!("{}", sweep.render());
    sweep.check()?;
    Ok(())
}

fn run_compare(cmd: CompareCmd) -> Result<()> {
    let params = cmd.solver.params()?;
    let (cloud, _) = load(&cmd.input)?;
    let report = compare::compare(&cloud, &params)?;
    print!("{}", compare::render(&report, cloud.len()));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(c) => run_solve(c),
        Command::Sharpness(c) => run_sharpness(c),
        Command::Bench(c) => run_bench(c),
        Command::Compare(c) => run_compare(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
