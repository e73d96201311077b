//! `idcalc`: evaluate, map, factor and verify infinitely divisible laws
//! given as JSON measure specs.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails
//! or is inconclusive, 2 on invalid input, 3 on numerical failure.

mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use idcalc::simulate::{KernelIntegralSpec, PathConfig};
use idcalc::{Beta, Error, IdMeasure};

use crate::output::{write_exponent_table, write_reports, ExponentRow};

#[derive(Debug, Parser)]
#[command(name = "idcalc", version, about = "Random-integral mappings of infinitely divisible laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the characteristic exponent of a measure on a grid.
    Exponent(ExponentArgs),
    /// Apply a mapping and print the exponent of the image.
    Map(MapArgs),
    /// Compute the factor ρ of ν and check the factorization.
    Factor(FactorArgs),
    /// Run named identity checks and write verification reports.
    Verify(VerifyArgs),
    /// Sample a random integral and test its empirical characteristic function.
    Simulate(SimulateArgs),
    /// Tabulate the Lévy-area example and check its identities.
    LevyArea(LevyAreaArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Measure spec (JSON).
    #[arg(long)]
    measure: PathBuf,
    /// Frequencies along the first axis; defaults to ±{0.1, 0.5, 1, 2, 5}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    /// Output file; `.csv` selects CSV, anything else JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExponentArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mapping {
    JBeta,
    JBetaInverse,
    I,
    IOfJBeta,
    Cor1a,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "j-beta")]
    mapping: Mapping,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Skip the log-moment check required by the I-type mappings.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct FactorArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Lemma1c,
    Lemma1d,
    Lemma1e,
    Prop1,
    Cor1a,
    Cor1b,
    Cor5,
    Prop2,
    Cor3,
    Levyarea,
    Roundtrip,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long = "mc.n", default_value_t = 100_000)]
    pub n: usize,
    #[arg(long = "mc.step", default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long = "mc.eps", default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long = "mc.smax", default_value_t = 20.0)]
    pub s_max: f64,
    /// Disable the Gaussian stand-in for jumps below the cutoff.
    #[arg(long = "mc.no-gaussian-correction")]
    pub no_gaussian_correction: bool,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
}

impl McArgs {
    pub fn path_config(&self) -> PathConfig {
        PathConfig {
            step: self.step,
            horizon: 1.0_f64.max(self.step),
            small_jump_cutoff: self.eps,
            gaussian_correction: !self.no_gaussian_correction,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Measure spec (JSON); not needed for `levyarea` or `--all`.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "all")]
    identity: Option<Identity>,
    /// Run every identity over the built-in seed families and β ∈ {0.5, 1, 2}.
    #[arg(long, conflicts_with = "identity")]
    all: bool,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Second index for `lemma1c`.
    #[arg(long, default_value_t = 2.0)]
    beta2: f64,
    /// Second measure for `lemma1d`; defaults to the first.
    #[arg(long)]
    measure2: Option<PathBuf>,
    /// Convolution power for `lemma1d`.
    #[arg(long, default_value_t = 0.5)]
    power: f64,
    /// Conditioning time for `levyarea`.
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    /// Report file (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Integral {
    JBeta,
    I,
    IOfJBeta,
    Cor1a,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    measure: PathBuf,
    #[arg(long, value_enum, default_value = "j-beta")]
    integral: Integral,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    /// Report file (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sample dump, one sample per line.
    #[arg(long)]
    samples: Option<PathBuf>,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Debug, Args)]
struct LevyAreaArgs {
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
    /// Plot table (CSV).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verification report (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Quadrature { .. } | Error::Domain(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub fn load_measure(path: &Path) -> CliResult<IdMeasure<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let spec = idcalc::spec::MeasureSpec::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().map_or("measure".into(), |s| s.to_string_lossy().into_owned());
    Ok(spec.build::<f64>()?.with_label(label))
}

fn beta(b: f64) -> CliResult<Beta<f64>> {
    Ok(Beta::new(b)?)
}

pub fn grid_points(grid: &Option<Vec<f64>>, dim: usize) -> CliResult<Vec<Vec<f64>>> {
    match grid {
        None => Ok(idcalc::grid::identity_grid(dim)),
        Some(v) if v.is_empty() => Err(Failure::Input("grid must be nonempty".into())),
        Some(v) => Ok(idcalc::grid::axis_grid(v, dim)),
    }
}

fn tabulate(m: &IdMeasure<f64>, grid: &[Vec<f64>]) -> CliResult<Vec<ExponentRow>> {
    grid.iter()
        .map(|y| {
            let z = m.exponent(y)?;
            Ok(ExponentRow {
                y: y.clone(),
                re: z.re,
                im: z.im,
            })
        })
        .collect()
}

fn emit_table(label: &str, rows: &[ExponentRow], out: &Option<PathBuf>) -> CliResult<()> {
    for r in rows {
        println!("{label}  y={:?}  Φ = {:.12e} {:+.12e}i", r.y, r.re, r.im);
    }
    if let Some(path) = out {
        write_exponent_table(label, rows, path)?;
    }
    Ok(())
}

fn run_exponent(a: ExponentArgs) -> CliResult<bool> {
    let m = load_measure(&a.common.measure)?;
    let grid = grid_points(&a.common.grid, m.dim())?;
    emit_table(m.label(), &tabulate(&m, &grid)?, &a.common.out)?;
    Ok(true)
}

fn run_map(a: MapArgs) -> CliResult<bool> {
    let m = load_measure(&a.common.measure)?;
    let b = beta(a.beta)?;
    let gate = if a.force {
        idcalc::LogMomentGate::Override
    } else {
        idcalc::LogMomentGate::Check
    };
    let image = match a.mapping {
        Mapping::JBeta => idcalc::j_beta(&m, b)?,
        Mapping::JBetaInverse => idcalc::j_beta_inverse(&m, b)?,
        Mapping::I => idcalc::i_map(&m, gate)?,
        Mapping::IOfJBeta => idcalc::i_of_j_beta(&m, b, gate)?,
        Mapping::Cor1a => idcalc::corollary1a_kernel(&m, b)?,
    };
    let grid = grid_points(&a.common.grid, m.dim())?;
    emit_table(image.label(), &tabulate(&image, &grid)?, &a.common.out)?;
    Ok(true)
}

fn run_factor(a: FactorArgs) -> CliResult<bool> {
    let nu = load_measure(&a.common.measure)?;
    let b = beta(a.beta)?;
    let rho = idcalc::factorization::factor_rho(&nu, b)?;
    let grid = grid_points(&a.common.grid, nu.dim())?;
    emit_table(rho.label(), &tabulate(&rho, &grid)?, &None)?;
    let report = idcalc::factorization::verify_factor(&nu, &rho, b)?;
    output::print_summary(&report);
    if let Some(path) = &a.common.out {
        write_reports(std::slice::from_ref(&report), path)?;
    }
    Ok(report.pass)
}

fn run_verify(a: VerifyArgs) -> CliResult<bool> {
    let reports = if a.all {
        verify::all(&a.mc)?
    } else {
        verify::single(a.identity.expect("required by clap"), &a)?
    };
    for r in &reports {
        output::print_summary(r);
    }
    if let Some(path) = &a.out {
        write_reports(&reports, path)?;
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("{passed}/{} reports pass", reports.len());
    Ok(passed == reports.len())
}

fn run_simulate(a: SimulateArgs) -> CliResult<bool> {
    let m = load_measure(&a.measure)?;
    let b = beta(a.beta)?;
    let gate = idcalc::LogMomentGate::Check;
    let (spec, target) = match a.integral {
        Integral::JBeta => (KernelIntegralSpec::j_beta(b), idcalc::j_beta(&m, b)?),
        Integral::I => (KernelIntegralSpec::i_map(a.mc.s_max), idcalc::i_map(&m, gate)?),
        Integral::IOfJBeta => (KernelIntegralSpec::i_of_j_beta(b, a.mc.s_max), idcalc::i_of_j_beta(&m, b, gate)?),
        Integral::Cor1a => (KernelIntegralSpec::cor1a(b), idcalc::corollary1a_kernel(&m, b)?),
    };
    let report = verify::monte_carlo(&m, &spec, &target, &a.mc, &grid_points(&a.grid, m.dim())?, a.samples.as_deref())?;
    output::print_summary(&report);
    if let Some(path) = &a.out {
        write_reports(std::slice::from_ref(&report), path)?;
    }
    Ok(report.pass)
}

fn run_levy_area(a: LevyAreaArgs) -> CliResult<bool> {
    use idcalc::levyarea::{area_table, verify_levy_area, write_area_csv, AreaParams};
    let p = AreaParams::new(a.u)?;
    let ts: Vec<f64> = match &a.grid {
        Some(g) if g.is_empty() => return Err(Failure::Input("grid must be nonempty".into())),
        Some(g) => g.clone(),
        None => (-50..=50).map(|k| k as f64 * 0.1).collect(),
    };
    let rows = area_table(p, &ts)?;
    match &a.out {
        Some(path) => write_area_csv(&rows, std::fs::File::create(path)?)?,
        None => write_area_csv(&rows, std::io::stdout())?,
    }
    let report = verify_levy_area(p)?;
    output::print_summary(&report);
    if let Some(path) = &a.report {
        write_reports(std::slice::from_ref(&report), path)?;
    }
    Ok(report.pass)
}

fn configure_threads() {
    if let Some(n) = std::env::var("IDCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Exponent(a) => run_exponent(a),
        Command::Map(a) => run_map(a),
        Command::Factor(a) => run_factor(a),
        Command::Verify(a) => run_verify(a),
        Command::Simulate(a) => run_simulate(a),
        Command::LevyArea(a) => run_levy_area(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}
