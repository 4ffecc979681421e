use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hierinfo::hierarchy::{hierarchy_spectrum, shannon_entropy, DEFAULT_MAX_ITER, DEFAULT_TOL};
use hierinfo::io::{emit_csv, emit_plot_script, format_sig, plot_script_path, read_distribution, read_state};
use hierinfo::measurement::validate_projector_set;
use hierinfo::quantum_state::validate_density;
use hierinfo::selftest::run_selftest;
use hierinfo::sweep::{
    check_monotone, find_interior_maximum, run_sweep, uniform_grid, Family, FamilySpec, MeasurementSpec,
};
use hierinfo::{Error, JointDistribution, Result};

/// Hierarchical information spectra of mixed GHZ / W states under local
/// projective measurements.
#[derive(Parser)]
#[command(name = "hierinfo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the mixing weight alpha and write a CSV table.
    Sweep(SweepArgs),
    /// Spectrum of one family member or of a distribution file.
    Spectrum(SpectrumArgs),
    /// Validate the density operator and projector sets of a family member.
    Validate(ValidateArgs),
    /// Run the oracle-equivalence and invariant checks.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ghz,
    W,
    Custom,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value = "w")]
    family: FamilyArg,
    /// Pure-state file for `--family custom`.
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    qubits: usize,
    /// Euler angles `theta,phi,lambda` of a local basis rotation; give once
    /// for all sites or once per site.
    #[arg(long = "rotation", value_name = "THETA,PHI,LAMBDA")]
    rotations: Vec<String>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = 1.0)]
    stop: f64,
    /// Number of grid intervals between start and stop.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Explicit comma-separated grid, overriding start/stop/steps.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// CSV destination; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write a matplotlib script next to the CSV.
    #[arg(long, requires = "output")]
    plot: bool,
    /// Evaluate grid points in parallel.
    #[arg(long)]
    parallel: bool,
    /// Print shape diagnostics (monotonicity, interior maxima) to stderr.
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Distribution file; overrides the family options.
    #[arg(long)]
    distribution: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

fn parse_rotation(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::InvalidArgument(format!("rotation {s:?}: {e}"))))
        .collect::<Result<_>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| Error::InvalidArgument(format!("rotation {s:?} needs three angles")))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec<f64>> {
        let mut spec = match self.family {
            FamilyArg::Ghz => FamilySpec::ghz(self.qubits),
            FamilyArg::W => FamilySpec::w(self.qubits),
            FamilyArg::Custom => {
                let path = self
                    .state_file
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("--family custom needs --state-file".into()))?;
                FamilySpec::custom(read_state(open(path)?)?)
            }
        };
        if !matches!(spec.family, Family::Custom(_)) && self.qubits < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 qubits, got {}", self.qubits)));
        }
        if !self.rotations.is_empty() {
            let angles = self.rotations.iter().map(|s| parse_rotation(s)).collect::<Result<_>>()?;
            spec = spec.with_measurement(MeasurementSpec::Rotated(angles));
        }
        Ok(spec)
    }
}

fn print_spectrum(p: &JointDistribution<f64>, solver: &SolverArgs) -> Result<()> {
    let s = hierarchy_spectrum(p, solver.tol, solver.max_iter)?;
    let mut out = io::stdout().lock();
    for (k, level) in (1..=s.n).zip(&s.levels) {
        writeln!(
            out,
            "I{k} = {} bits  (cycles {}, residual {:.3e}{})",
            format_sig(s.level(k), 12),
            level.iterations,
            level.residual,
            if level.divergent { ", divergent" } else { "" }
        )?;
    }
    writeln!(out, "H(p) = {} bits", format_sig(shannon_entropy(p), 12))?;
    writeln!(out, "sum rule residual = {:.3e}", s.sum_rule_residual())?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let spec = args.family.spec()?;
    let grid = match &args.alphas {
        Some(a) => a.clone(),
        None => uniform_grid(args.start, args.stop, args.steps),
    };
    let table = run_sweep(&spec, &grid, args.solver.tol, args.solver.max_iter, args.parallel)?;
    match &args.output {
        Some(path) => {
            emit_csv(&table, BufWriter::new(File::create(path)?))?;
            if args.plot {
                let csv_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                emit_plot_script(&table, &csv_name, BufWriter::new(File::create(plot_script_path(path))?))?;
            }
        }
        None => emit_csv(&table, io::stdout().lock())?,
    }
    if args.summary && !table.rows.is_empty() {
        for k in 1..=table.n {
            let m = find_interior_maximum(&table, k)?;
            let mono = check_monotone(&table, k, 1e-9)?;
            eprintln!(
                "I{k}: max {} at alpha = {} ({}); {mono}",
                format_sig(m.value, 8),
                m.alpha,
                if m.is_interior { "interior" } else { "endpoint" }
            );
        }
    }
    Ok(())
}

fn validate(args: &ValidateArgs) -> Result<()> {
    let spec = args.family.spec()?;
    let rho = spec.state(args.alpha)?;
    let mut out = io::stdout().lock();
    let report = validate_density(&rho);
    writeln!(out, "density operator ({} family, alpha = {}):\n{report}", spec.label(), args.alpha)?;
    let mut ok = report.all_passed();
    for (site, basis) in spec.bases()?.iter().enumerate() {
        let r = validate_projector_set(basis);
        writeln!(out, "projectors on site {site}:\n{r}")?;
        ok &= r.all_passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Error::NumericalFailure("validation failed".into()))
    }
}

fn selftest(seed: u64) -> Result<()> {
    let outcomes = run_selftest(seed)?;
    let mut out = io::stdout().lock();
    for o in &outcomes {
        writeln!(
            out,
            "{} {:<26} worst {:.3e} (tol {:.0e})",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.worst,
            o.tolerance
        )?;
    }
    if outcomes.iter().all(|o| o.passed) {
        Ok(())
    } else {
        Err(Error::NumericalFailure("self-test failed".into()))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => sweep(&args),
        Command::Spectrum(args) => match &args.distribution {
            Some(path) => print_spectrum(&read_distribution(open(path)?)?, &args.solver),
            None => print_spectrum(&args.family.spec()?.distribution(args.alpha)?, &args.solver),
        },
        Command::Validate(args) => validate(&args),
        Command::Selftest { seed } => selftest(seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
