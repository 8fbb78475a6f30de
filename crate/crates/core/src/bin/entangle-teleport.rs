use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use entangle_teleport::sweep::{
    self, Fig3Params, Format, Grid, Table, VerifyParams, DEFAULT_SEED, DEFAULT_TOL, FIG3_TARGETS,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Teleportation of entangled two-qubit states through Werner channels:
/// closed-form laws checked against a density-matrix simulation.
#[derive(Debug, Parser)]
#[command(name = "entangle-teleport", version)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: OutputFormat,

    /// Output file (default: standard output)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for random input states
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,

    /// Absolute tolerance for formula/simulation agreement
    #[arg(long, default_value_t = DEFAULT_TOL, global = true)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every closed-form law against the simulation; exit 1 on failure
    Verify {
        #[arg(long, default_value_t = 0.1)]
        grid_step: f64,
        /// Number of Haar-random pure inputs
        #[arg(long, default_value_t = 50)]
        seeds: usize,
    },
    /// Replica entanglement over (e12, ew)
    Fig2 {
        #[arg(long, default_value_t = 101)]
        e12_steps: usize,
        #[arg(long, default_value_t = 101)]
        ew_steps: usize,
    },
    /// Replica entanglement against intermediate-state purity
    Fig3 {
        /// Entanglement of the second channel
        #[arg(long, default_value_t = 0.6)]
        e46: f64,
        /// Intermediate entanglement bins
        #[arg(long, value_delimiter = ',', default_values_t = FIG3_TARGETS.to_vec())]
        targets: Vec<f64>,
        /// Half-width of each bin
        #[arg(long, default_value_t = 0.002)]
        target_tol: f64,
        /// Points per sweep axis (theta and first-channel entanglement)
        #[arg(long, default_value_t = 200)]
        density: usize,
    },
    /// Replica fidelity over (e12, ew)
    Fidelity {
        #[arg(long, default_value_t = 11)]
        e12_steps: usize,
        #[arg(long, default_value_t = 11)]
        ew_steps: usize,
    },
    /// Correlation-information transfer over (e12, ew)
    Info {
        #[arg(long, default_value_t = 11)]
        e12_steps: usize,
        #[arg(long, default_value_t = 11)]
        ew_steps: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let usage = |e: entangle_teleport::Error| Failure::Usage(e.to_string());
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let (table, passed): (Table, bool) = match &cli.command {
        Command::Verify { grid_step, seeds } => {
            let params = VerifyParams { grid_step: *grid_step, seeds: *seeds, tol: cli.tol, seed: cli.seed };
            let report = sweep::verify(&params).map_err(usage)?;
            for c in &report.checks {
                eprintln!(
                    "{:<36} {:>6} samples  max dev {:>20}  {}",
                    c.name,
                    c.samples,
                    sweep::format_number(c.max_deviation),
                    if c.passed { "PASS" } else { "FAIL" }
                );
            }
            if report.zero_e72_points > 0 {
                eprintln!(
                    "note: {} grid points evaluate the intermediate-correlation law at e72 = 0",
                    report.zero_e72_points
                );
            }
            (report.to_table(), report.passed())
        }
        Command::Fig2 { e12_steps, ew_steps } => {
            let grid = Grid::new(*e12_steps, *ew_steps).map_err(usage)?;
            (sweep::fig2(&grid, cli.seed, cli.tol).map_err(usage)?, true)
        }
        Command::Fig3 { e46, targets, target_tol, density } => {
            let params = Fig3Params { e46: *e46, targets: targets.clone(), target_tol: *target_tol, density: *density };
            (sweep::fig3(&params, cli.seed, cli.tol).map_err(usage)?, true)
        }
        Command::Fidelity { e12_steps, ew_steps } => {
            let grid = Grid::new(*e12_steps, *ew_steps).map_err(usage)?;
            (sweep::fidelity_sweep(&grid, cli.seed, cli.tol).map_err(usage)?, true)
        }
        Command::Info { e12_steps, ew_steps } => {
            let grid = Grid::new(*e12_steps, *ew_steps).map_err(usage)?;
            (sweep::info_sweep(&grid, cli.seed, cli.tol).map_err(usage)?, true)
        }
    };
    emit(&table, cli.format.into(), cli.out.as_ref()).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(passed)
}

fn emit(table: &Table, format: Format, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(format, &mut w)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
