use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use latticeforge_core::eval::{t_bound_theorem, truncation_bound, wce_dual_bruteforce, worst_case_error};
use latticeforge_core::points::generate_points;
use latticeforge_core::{ConstructorRegistry, LatticeConfig, Problem};

use crate::artifact::{fmt_f64, loglog_slope, write_atomic, Evaluation, VectorFile};
use crate::descriptor::{parse_list, ReductionDescriptor, WeightDescriptor};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "latticeforge", version, about = "Rank-1 lattice rules by reduced CBC-DBD construction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a generating vector and write it as a vector file.
    Construct(ConstructArgs),
    /// Worst-case error of a stored vector.
    Wce(WceArgs),
    /// Error and bound versus N for the reduced and baseline constructions.
    Convergence(ConvergenceArgs),
    /// Construction times over a grid of m and d.
    Bench(BenchArgs),
    /// Export the lattice points of a stored vector as CSV.
    Points(PointsArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub d: usize,
    /// poly:q | geo:c | explicit:path, optionally with ^p.
    #[arg(long)]
    pub weights: String,
    /// zero | log:p | explicit:path.
    #[arg(long, default_value = "zero")]
    pub reduction: String,
    #[arg(long, default_value = "reduced-fast")]
    pub method: String,
    #[arg(long)]
    pub output: PathBuf,
    /// Smoothness used for the stored error.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Weights for the stored error; defaults to the construction weights
    /// raised to alpha.
    #[arg(long)]
    pub eval_weights: Option<String>,
    /// Skip the error evaluation.
    #[arg(long)]
    pub no_eval: bool,
}

#[derive(Debug, Args)]
pub struct WceArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Defaults to the weights the vector was constructed with.
    #[arg(long)]
    pub weights: Option<String>,
    /// Cross-check against dual-lattice enumeration (d <= 3).
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 2000)]
    pub cutoff: u64,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Exponent range a..b (inclusive) or list.
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long)]
    pub weights: String,
    #[arg(long)]
    pub reduction: String,
    #[arg(long)]
    pub no_baseline: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub d: String,
    #[arg(long, default_value = "geo:0.95")]
    pub weights: String,
    #[arg(long, default_value = "log:1.5")]
    pub reduction: String,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Largest N * d exported.
    #[arg(long, default_value_t = 1e7)]
    pub max_cells: f64,
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Construct(a) => construct(&a).map(|(_, line)| line),
        Command::Wce(a) => wce(&a),
        Command::Convergence(a) => convergence(&a),
        Command::Bench(a) => bench(&a),
        Command::Points(a) => points(&a),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    latticeforge_core::kernel::check_alpha(alpha).map_err(CliError::from)
}

pub fn construct(a: &ConstructArgs) -> Result<(VectorFile, String)> {
    let wd: WeightDescriptor = a.weights.parse()?;
    let rd: ReductionDescriptor = a.reduction.parse()?;
    if !a.no_eval {
        check_alpha(a.alpha)?;
    }
    let registry = ConstructorRegistry::standard();
    let constructor = registry.get(&a.method).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = LatticeConfig::new(a.m, a.d)?;
    let problem = Problem::new(cfg, &rd.resolve()?, &wd.resolve()?)?;
    let result = constructor.construct(&problem)?;

    let mut file = VectorFile::from_result(&result, wd.to_string(), rd.to_string());
    if !a.no_eval {
        let ed = match &a.eval_weights {
            Some(s) => s.parse()?,
            None => wd.pow(a.alpha),
        };
        let gamma = ed.resolve()?.values(a.d)?;
        let e = worst_case_error(&result.vector, a.alpha, &gamma)?;
        file.evaluation =
            Some(Evaluation { alpha: a.alpha, weights: ed.to_string(), error: e.value, method: e.method.to_string() });
    }
    file.save(&a.output)?;
    let line = format!(
        "m={} n={} d={} d_star={} method={} op_count={} time={:.6}s",
        file.m, file.n, file.d, file.d_star, file.method, file.op_count, file.wall_time
    );
    Ok((file, line))
}

pub fn wce(a: &WceArgs) -> Result<String> {
    check_alpha(a.alpha)?;
    let file = VectorFile::load(&a.input)?;
    let z = file.vector()?;
    let wd: WeightDescriptor = a.weights.as_deref().unwrap_or(&file.weights).parse()?;
    let gamma = wd.resolve()?.values(z.d())?;
    let e = worst_case_error(&z, a.alpha, &gamma)?;
    let mut out = format!("error={} method={} tail_bound={}", fmt_f64(e.value), e.method, fmt_f64(e.tail_bound));
    if e.overflow {
        out.push_str(" overflow=true");
    }
    if a.oracle {
        let o = wce_dual_bruteforce(&z, a.alpha, &gamma, a.cutoff)?;
        let gap = (o.value - e.value).abs();
        let agree = gap <= o.tail_bound + e.tail_bound + 1e-12 * e.value.abs();
        write!(out, " oracle={} oracle_tail_bound={} agree={agree}", fmt_f64(o.value), fmt_f64(o.tail_bound)).unwrap();
        if !agree {
            return Err(CliError::Validation(format!("{out}: oracle disagrees by {gap:e}")));
        }
    }
    Ok(out)
}

pub fn convergence(a: &ConvergenceArgs) -> Result<String> {
    check_alpha(a.alpha)?;
    let ms = parse_list(&a.m)?;
    let wd: WeightDescriptor = a.weights.parse()?;
    let weights = wd.resolve()?;
    let reduction = a.reduction.parse::<ReductionDescriptor>()?.resolve()?;
    let gamma_eval = weights.pow(a.alpha)?.values(a.d)?;
    let registry = ConstructorRegistry::standard();

    let mut csv = String::from("N,error_reduced,error_baseline,bound_theorem\n");
    let (mut reduced_pts, mut baseline_pts) = (Vec::new(), Vec::new());
    for &m in &ms {
        let m = u32::try_from(m).map_err(|_| CliError::Usage(format!("m = {m} out of range")))?;
        let cfg = LatticeConfig::new(m, a.d)?;
        let problem = Problem::new(cfg, &reduction, &weights)?;
        let n = cfg.n() as f64;
        let z = registry.get("reduced-fast")?.construct(&problem)?.vector;
        let e_red = worst_case_error(&z, a.alpha, &gamma_eval)?.value;
        reduced_pts.push((n, e_red));
        let e_base = if a.no_baseline {
            String::new()
        } else {
            let zb = registry.get("baseline")?.construct(&problem)?.vector;
            let e = worst_case_error(&zb, a.alpha, &gamma_eval)?.value;
            baseline_pts.push((n, e));
            fmt_f64(e)
        };
        let bound = truncation_bound(cfg, problem.w(), &gamma_eval, a.alpha)?
            + t_bound_theorem(cfg, problem.w(), problem.gamma()).powf(a.alpha);
        writeln!(csv, "{},{},{},{}", cfg.n(), fmt_f64(e_red), e_base, fmt_f64(bound)).unwrap();
    }
    if let Some(s) = loglog_slope(&reduced_pts) {
        writeln!(csv, "# slope_reduced={}", fmt_f64(s)).unwrap();
    }
    if let Some(s) = loglog_slope(&baseline_pts) {
        writeln!(csv, "# slope_baseline={}", fmt_f64(s)).unwrap();
    }
    emit(&a.output, csv)
}

pub fn bench(a: &BenchArgs) -> Result<String> {
    let ms = parse_list(&a.m)?;
    let ds = parse_list(&a.d)?;
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let weights = a.weights.parse::<WeightDescriptor>()?.resolve()?;
    let reduction = a.reduction.parse::<ReductionDescriptor>()?.resolve()?;
    let registry = ConstructorRegistry::standard();
    let mut csv = String::from("m,d,method,seconds,op_count\n");
    for &m in &ms {
        for &d in &ds {
            let m = u32::try_from(m).map_err(|_| CliError::Usage(format!("m = {m} out of range")))?;
            let cfg = LatticeConfig::new(m, d as usize)?;
            let problem = Problem::new(cfg, &reduction, &weights)?;
            for method in ["reduced-fast", "baseline"] {
                let c = registry.get(method)?;
                let mut times = Vec::with_capacity(a.reps);
                let mut ops = 0;
                for _ in 0..a.reps {
                    let r = c.construct(&problem)?;
                    times.push(r.wall_time);
                    ops = r.op_count;
                }
                writeln!(csv, "{m},{d},{method},{},{ops}", fmt_f64(median(&mut times))).unwrap();
            }
        }
    }
    emit(&a.output, csv)
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn points(a: &PointsArgs) -> Result<String> {
    let file = VectorFile::load(&a.input)?;
    let cells = file.n as f64 * file.d as f64;
    if cells > a.max_cells {
        return Err(CliError::Guard(format!(
            "N * d = {cells:e} cells exceeds the export limit {:e}; pass a larger --max-cells to export anyway",
            a.max_cells
        )));
    }
    let z = file.vector()?;
    let mut buf = Vec::new();
    generate_points(&z).write_csv(&mut buf)?;
    write_atomic(&a.output, &buf)?;
    Ok(format!("wrote {} points in {} dimensions to {}", file.n, file.d, a.output.display()))
}

fn emit(output: &Option<PathBuf>, csv: String) -> Result<String> {
    match output {
        Some(p) => {
            write_atomic(p, csv.as_bytes())?;
            Ok(csv.lines().filter(|l| l.starts_with('#')).collect::<Vec<_>>().join("\n"))
        }
        None => Ok(csv.trim_end().to_string()),
    }
}
