//! `uncertain-extent`: quantizations, kernels, shape inclusion probabilities
//! and exact distributions for uncertain point sets.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uncertain_extent::{Direction, ShapeFamily, Statistic};

#[derive(Parser, Debug)]
#[command(name = "uncertain-extent", version, about)]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true, env = "UNCERTAIN_EXTENT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo ε-quantization of a statistic.
    Quantize(QuantizeArgs),
    /// (ε,α)-kernel and the width or statistic quantization it answers.
    Kernel(KernelArgs),
    /// Shape inclusion probability grid and isolines (planar models).
    Sip(SipArgs),
    /// Exact weighted CDF over per-point samples.
    Exact(ExactArgs),
    /// Cylinder experiment: full-set and kernel quantizations.
    ExperimentCylinder(CylinderArgs),
    /// Center point of a planar or 3D model.
    Center(CenterArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Uncertain point set as JSON.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_parser = unit_interval)]
    eps: f64,
    #[arg(long, value_parser = unit_interval, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the derived trial count.
    #[arg(long, value_parser = positive)]
    trials: Option<usize>,
    /// C in the univariate trial count C·ln(1/(εδ))/ε².
    #[arg(long, value_parser = positive_real)]
    sample_constant: Option<f64>,
}

#[derive(Args, Debug)]
struct QuantizeArgs {
    #[command(flatten)]
    common: Common,
    /// diam, dwid:x,y[,z], seb2-radius, aabb-perimeter, aabb-volume,
    /// aabb-widths, chull-area, chull-perimeter.
    #[arg(long)]
    stat: Statistic,
    /// Keep every trial instead of reducing.
    #[arg(long)]
    no_reduce: bool,
    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("query").required(true).args(["direction", "stat"]))]
struct KernelArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = unit_interval, default_value_t = 0.1)]
    alpha: f64,
    /// Build kernels of at most this many points instead of targeting α.
    #[arg(long, value_parser = positive)]
    cap: Option<usize>,
    /// Width direction, comma separated.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    direction: Option<Direction>,
    /// Statistic answered by the kernels instead of a width.
    #[arg(long)]
    stat: Option<Statistic>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the kernels as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SipArgs {
    #[command(flatten)]
    common: Common,
    /// seb2-ball or aabb-box.
    #[arg(long)]
    family: ShapeFamily,
    /// xmin,ymin,xmax,ymax; defaults to the model bulk plus a margin.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    bbox: Option<[f64; 4]>,
    #[arg(long, default_value_t = uncertain_extent::sip::DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Comma separated levels in (0,1).
    #[arg(long, value_delimiter = ',', value_parser = unit_interval)]
    levels: Option<Vec<f64>>,
    /// Grid CSV (x,y,sip).
    #[arg(long)]
    grid_out: Option<PathBuf>,
    #[arg(long)]
    svg_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["model", "samples"]))]
struct ExactArgs {
    /// Model to sample per point; needs --eps.
    #[arg(long, requires = "eps")]
    model: Option<PathBuf>,
    /// Sample family as JSON.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// aabb-perimeter, aabb-volume, aabb-widths or seb2-radius.
    #[arg(long, alias = "stat")]
    family: Statistic,
    #[arg(long, value_parser = unit_interval)]
    eps: Option<f64>,
    /// Cut Gaussians at this many standard deviations.
    #[arg(long)]
    truncate_sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check against exhaustive enumeration.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the perturbed sample family as JSON.
    #[arg(long)]
    samples_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CylinderArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 3.0)]
    sigma: f64,
    #[arg(long, value_parser = unit_interval, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, default_value_t = 40, value_parser = positive)]
    trials: usize,
    #[arg(long, default_value_t = 40, value_parser = positive)]
    cap: usize,
    /// ε-quantizations of the full sampled sets.
    #[arg(long, default_value = "cylinder_full.csv")]
    out_full: PathBuf,
    /// (ε,α)-quantizations of the kernels.
    #[arg(long, default_value = "cylinder_kernel.csv")]
    out_kernel: PathBuf,
}

#[derive(Args, Debug)]
struct CenterArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0,1)"))
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    Direction::new(parse_floats(s)?).map_err(|e| e.to_string())
}

fn parse_bbox(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s)?;
    let b: [f64; 4] = v.try_into().map_err(|_| "expected xmin,ymin,xmax,ymax".to_string())?;
    if b[0] < b[2] && b[1] < b[3] {
        Ok(b)
    } else {
        Err("bbox must have xmin < xmax and ymin < ymax".into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Quantize(a) => commands::quantize(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Sip(a) => commands::sip(a),
        Command::Exact(a) => commands::exact(a),
        Command::ExperimentCylinder(a) => commands::experiment_cylinder(a),
        Command::Center(a) => commands::center(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
