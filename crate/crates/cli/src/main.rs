//! `cweno`: convergence tables, benchmark runs, cost comparisons and
//! coefficient dumps.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when a run
//! aborts on a non-physical or non-finite state.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cweno::exact::parse_rational;
use cweno::export::{export_tables, AnyTables, Format};
use cweno::harness::accuracy::{run_accuracy, write_accuracy_csv, Example, TableSpec};
use cweno::harness::compare::{
    compare, reference_scheme, CompareOptions, Reference, REFERENCE_CELLS,
};
use cweno::harness::schlieren::DEFAULT_KAPPA;
use cweno::harness::solve::{solve, write_outputs, SolveOptions};
use cweno::reconstruct::Scheme;
use cweno::solver::problems::ProblemId;
use cweno::solver::SchemeSpec;
use cweno::stencil::{lpr_extra, uniform_c_ext, Sampling, TableBuilder};
use cweno::{Error, Execution, Result};

#[derive(Parser, Debug)]
#[command(name = "cweno", version, about = "WENO / CWENO reconstruction toolkit")]
struct Cli {
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Error and order table for one reconstruction example.
    Accuracy(AccuracyArgs),
    /// Run a benchmark problem and write its fields.
    Solve(SolveArgs),
    /// Compare wall time (and accuracy when a reference exists) of schemes.
    Compare(CompareArgs),
    /// Dump exact stencil coefficient tables.
    Coeffs(CoeffsArgs),
}

#[derive(Args, Debug)]
struct AccuracyArgs {
    /// Example number 1-4.
    #[arg(long)]
    example: u8,
    #[arg(long)]
    r: usize,
    /// Order of the smooth extremum (examples 1 and 3).
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// weno, cweno-lpr, cweno or all; may be repeated.
    #[arg(long, default_value = "all")]
    scheme: Vec<String>,
    #[arg(long, default_value_t = 40)]
    n_start: usize,
    #[arg(long, default_value_t = 5120)]
    n_max: usize,
    /// MPFR working precision.
    #[arg(long, default_value_t = 333)]
    bits: u32,
    #[arg(long)]
    s1: Option<u32>,
    #[arg(long)]
    s2: Option<u32>,
    /// Regularization as `p/q` or a decimal such as `1e-100`.
    #[arg(long)]
    eps: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// weno, cweno-lpr or cweno.
    #[arg(long, default_value = "cweno")]
    scheme: String,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Global-weight remap exponents (CWENO only).
    #[arg(long)]
    s1: Option<u32>,
    #[arg(long)]
    s2: Option<u32>,
}

impl SchemeArgs {
    fn spec(&self) -> Result<SchemeSpec> {
        let scheme: Scheme = self.scheme.parse()?;
        let mut spec = SchemeSpec::new(scheme, self.r);
        if self.s1.is_some() || self.s2.is_some() {
            if scheme != Scheme::CwenoGlobal {
                return Err(Error::Domain(
                    "--s1/--s2 apply to the cweno scheme only".into(),
                ));
            }
            let (d1, d2) = cweno::reconstruct::default_remap(self.r);
            spec = spec.with_remap(self.s1.unwrap_or(d1), self.s2.unwrap_or(d2));
        }
        Ok(spec)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// shu-osher, dmr or riemann3.
    #[arg(long)]
    problem: String,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Use the published grid sizes instead of the desk-scale defaults.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// Schlieren contrast.
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    problem: String,
    /// Comma-separated schemes; `cweno:S1:S2` sets remap exponents.
    #[arg(long, default_value = "weno,cweno-lpr,cweno")]
    schemes: String,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Comma-separated `NXxNY` (or `NX` in 1D) grid sizes.
    #[arg(long)]
    resolutions: Option<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    tfinal: Option<f64>,
    /// Score Shu-Osher densities against a fine reference run.
    #[arg(long)]
    reference: bool,
    #[arg(long, default_value_t = REFERENCE_CELLS)]
    reference_cells: usize,
    /// JSON destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long)]
    r: usize,
    /// Evaluation offset as `p/q`.
    #[arg(long, default_value = "1/2")]
    tau: String,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Treat samples as point values instead of cell averages.
    #[arg(long)]
    point_values: bool,
    /// Also derive the CWENO-LPR extra polynomial with uniform weights.
    #[arg(long)]
    lpr: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_schemes(list: &[String]) -> Result<Vec<Scheme>> {
    let mut out = Vec::new();
    for item in list.iter().flat_map(|s| s.split(',')) {
        if item.trim() == "all" {
            out.extend([Scheme::WenoJs, Scheme::CwenoLpr, Scheme::CwenoGlobal]);
        } else {
            out.push(item.trim().parse()?);
        }
    }
    Ok(out)
}

fn cmd_accuracy(a: &AccuracyArgs, exec: Execution) -> Result<()> {
    let mut spec = TableSpec::new(Example::from_number(a.example)?, a.r, a.k, a.n_max);
    spec.n_start = a.n_start;
    spec.schemes = parse_schemes(&a.scheme)?;
    spec.bits = a.bits;
    spec.s1 = a.s1;
    spec.s2 = a.s2;
    spec.eps = a.eps.as_deref().map(parse_rational).transpose()?;
    let rows = run_accuracy(&spec, exec)?;
    write_accuracy_csv(&rows, output(&a.out)?)
}

fn cmd_solve(a: &SolveArgs, exec: Execution) -> Result<()> {
    let problem: ProblemId = a.problem.parse()?;
    let mut opts = SolveOptions::new(problem, a.scheme.spec()?);
    if a.full {
        let (nx, ny) = problem.full_resolution();
        opts.nx = Some(nx);
        opts.ny = Some(ny);
    }
    opts.nx = a.nx.or(opts.nx);
    opts.ny = a.ny.or(opts.ny);
    opts.cfl = a.cfl;
    opts.t_final = a.tfinal;
    opts.exec = exec;
    let (nx, ny) = opts.resolution();
    let stem = if problem == ProblemId::ShuOsher {
        format!("{}_{}_n{nx}", problem.name(), a.scheme.scheme)
    } else {
        format!("{}_{}_{nx}x{ny}", problem.name(), a.scheme.scheme)
    };
    let (report, snap) = solve(&opts)?;
    let paths = write_outputs(&snap, report.final_time, &a.out, &stem, a.kappa)?;
    let summary = serde_json::json!({ "report": report, "outputs": paths });
    let report_path = a.out.join(format!("{stem}.report.json"));
    serde_json::to_writer_pretty(BufWriter::new(File::create(&report_path)?), &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

/// `weno`, `cweno-lpr`, `cweno` or `cweno:S1:S2`.
fn parse_scheme_token(token: &str, r: usize) -> Result<SchemeSpec> {
    let mut parts = token.trim().split(':');
    let scheme: Scheme = parts.next().unwrap_or_default().parse()?;
    let rest: Vec<&str> = parts.collect();
    match rest.as_slice() {
        [] => Ok(SchemeSpec::new(scheme, r)),
        [s1, s2] if scheme == Scheme::CwenoGlobal => {
            let p = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))
            };
            Ok(SchemeSpec::new(scheme, r).with_remap(p(s1)?, p(s2)?))
        }
        _ => Err(Error::Parse(format!(
            "bad scheme {token:?}; expected cweno:S1:S2"
        ))),
    }
}

fn parse_resolution(token: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad resolution {token:?}"));
    let n = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match token.split_once('x') {
        Some((a, b)) => Ok((n(a)?, n(b)?)),
        None => Ok((n(token)?, 1)),
    }
}

fn cmd_compare(a: &CompareArgs, exec: Execution) -> Result<()> {
    let problem: ProblemId = a.problem.parse()?;
    let schemes = a
        .schemes
        .split(',')
        .map(|t| parse_scheme_token(t, a.r))
        .collect::<Result<Vec<_>>>()?;
    let resolutions = match &a.resolutions {
        Some(list) => list
            .split(',')
            .map(parse_resolution)
            .collect::<Result<Vec<_>>>()?,
        None => vec![problem.default_resolution()],
    };
    if a.reference && problem != ProblemId::ShuOsher {
        return Err(Error::Domain(
            "a reference solution exists only for shu-osher".into(),
        ));
    }
    let reference = if a.reference {
        Some(Reference::compute(
            a.reference_cells,
            reference_scheme(),
            a.tfinal,
            exec,
        )?)
    } else {
        None
    };
    let opts = CompareOptions {
        problem,
        schemes,
        resolutions,
        repeats: a.repeats,
        t_final: a.tfinal,
        exec,
    };
    let report = compare(&opts, reference.as_ref())?;
    let mut out = output(&a.out)?;
    report.write_json(&mut out)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<()> {
    let tau = parse_rational(&a.tau)?;
    let format: Format = a.format.parse()?;
    let sampling = if a.point_values {
        Sampling::PointValues
    } else {
        Sampling::CellAverages
    };
    let tables = TableBuilder::new(a.r, tau).sampling(sampling).build()?;
    let any: AnyTables = if a.lpr {
        lpr_extra(&tables, &uniform_c_ext(a.r))?.into()
    } else {
        tables.into()
    };
    export_tables(&any, format, output(&a.out)?)
}

fn run(cli: &Cli) -> Result<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Accuracy(a) => cmd_accuracy(a, exec),
        Command::Solve(a) => cmd_solve(a, exec),
        Command::Compare(a) => cmd_compare(a, exec),
        Command::Coeffs(a) => cmd_coeffs(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
