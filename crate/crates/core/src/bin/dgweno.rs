//! Command line front end: single runs, convergence studies, the sensor
//! comparison and the property suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgweno::harness::{compare_sensors, convergence_study, run_simulation, RunConfig, Scheme, SensorChoice, SensorKind};
use dgweno::law::NumericalFlux;
use dgweno::{suite, Error};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "dgweno", version, about = "DG solver with WENO-sensor artificial viscosity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark to its final time.
    Run {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Grid convergence study; writes eoc.csv when --out is given.
    Converge {
        #[command(flatten)]
        opts: RunOpts,
        /// Cells per axis, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
        /// Schemes to compare.
        #[arg(long, value_delimiter = ',', default_value = "dg,lo,weno")]
        schemes: Vec<SchemeArg>,
    },
    /// WENO runs with the Zhao sensor and γ for b = 0, 0.1, 0.2 (1D only).
    Sensors {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Property suite, TAP output.
    Test {
        /// Only cases whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Skip the extra fresh-seed iteration.
        #[arg(long)]
        fixed_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dg,
    Lo,
    Weno,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Dg => Scheme::Dg,
            SchemeArg::Lo => Scheme::Lo,
            SchemeArg::Weno => Scheme::Weno,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FluxArg {
    Llf,
    Hll,
}

#[derive(Clone, Copy, ValueEnum)]
enum SensorArg {
    Relative,
    Zhao,
}

/// Config file plus flags that override its keys.
#[derive(Args)]
struct RunOpts {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    flux: Option<FluxArg>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    sensor: Option<SensorArg>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dump_sensor: bool,
}

impl RunOpts {
    fn load(&self) -> dgweno::Result<RunConfig> {
        let mut c = RunConfig::from_file(&self.config)?;
        if let Some(s) = self.scheme {
            c.scheme = s.into();
        }
        if let Some(p) = self.p {
            c.p = p;
        }
        if let Some(f) = self.flux {
            c.flux = Some(match f {
                FluxArg::Llf => NumericalFlux::Llf,
                FluxArg::Hll => NumericalFlux::Hll,
            });
        }
        if let Some(q) = self.q {
            c.q = q;
        }
        if let Some(b) = self.b {
            c.b = b;
        }
        if let Some(s) = self.sensor {
            c.sensor = match s {
                SensorArg::Relative => SensorKind::Relative,
                SensorArg::Zhao => SensorKind::Zhao,
            };
        }
        if let Some(t) = self.theta {
            c.theta = t;
        }
        if let Some(cfl) = self.cfl {
            c.cfl = Some(cfl);
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        c.dump_sensor |= self.dump_sensor;
        // surface config problems before any work is done
        c.resolve()?;
        Ok(c)
    }
}

fn exit_for(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(match err {
        Error::Config(_) | Error::UnknownBenchmark(_) | Error::Unsupported(_) => EXIT_CONFIG,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_FAILED,
    })
}

fn fmt_ranges(r: &[[f64; 2]]) -> String {
    r.iter().map(|[a, b]| format!("[{a:.6}, {b:.6}]")).collect::<Vec<_>>().join(" ")
}

fn run(opts: &RunOpts) -> dgweno::Result<ExitCode> {
    let c = opts.load()?;
    let r = run_simulation(&c)?;
    println!(
        "{} {} p={} mesh={:?} t={} steps={} wall={:.2}s",
        r.problem, r.scheme, r.p, r.mesh, r.time, r.steps, r.wall_time
    );
    println!("ranges {}", fmt_ranges(&r.ranges));
    if let Some(e) = &r.l1_error {
        println!("l1_error {:?}", e);
    }
    if let Some(f) = &r.failure {
        eprintln!("numerical failure at step {} (t = {}): {}", f.step, f.time, f.message);
        return Ok(ExitCode::from(EXIT_NUMERICAL));
    }
    Ok(ExitCode::SUCCESS)
}

fn converge(opts: &RunOpts, meshes: &[usize], schemes: &[SchemeArg]) -> dgweno::Result<ExitCode> {
    let c = opts.load()?;
    let schemes: Vec<Scheme> = schemes.iter().map(|&s| s.into()).collect();
    let rows = convergence_study(&c, meshes, &schemes)?;
    println!("{:<6} {:>2} {:>6} {:>12} {:>6}", "scheme", "p", "cells", "L1 error", "EOC");
    for row in &rows {
        let eoc = row.eoc.map(|e| format!("{e:.2}")).unwrap_or_else(|| "-".into());
        println!("{:<6} {:>2} {:>6} {:>12.3e} {:>6}", row.scheme, row.p, row.cells, row.error, eoc);
    }
    Ok(ExitCode::SUCCESS)
}

fn sensors(opts: &RunOpts) -> dgweno::Result<ExitCode> {
    let c = opts.load()?;
    let runs = compare_sensors(&c, &SensorChoice::standard_set())?;
    let mut code = ExitCode::SUCCESS;
    for r in &runs {
        let l1 = r.report.l1_error.as_ref().map(|e| format!("{:.4e}", e[0])).unwrap_or_else(|| "-".into());
        println!("{:<20} l1={} ranges {}", r.label, l1, fmt_ranges(&r.report.ranges));
        if r.report.failure.is_some() {
            code = ExitCode::from(EXIT_NUMERICAL);
        }
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { opts } => run(opts),
        Command::Converge { opts, meshes, schemes } => converge(opts, meshes, schemes),
        Command::Sensors { opts } => sensors(opts),
        Command::Test { filter, fixed_only } => {
            let report = if *fixed_only {
                suite::run_suite_with(filter.as_deref(), None)
            } else {
                suite::run_suite(filter.as_deref())
            };
            print!("{}", report.tap());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
        }
    };
    result.unwrap_or_else(|e| exit_for(&e))
}
