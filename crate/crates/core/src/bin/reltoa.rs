use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reltoa::cli::{
    cmd_classical, cmd_kernel_eval, cmd_sweep, cmd_traversal, cmd_validate, write_run, CommandOutput,
    ScenarioConfig, SweepAxis,
};
use reltoa::oracle::{default_golden_path, seed_goldens};

/// Relativistic time-of-arrival and barrier traversal times from a scenario file.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    /// Scenario config (TOML). Without it the built-in reference scenario is used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides [outputs].directory.
    #[arg(long, global = true, env = "RELTOA_OUT_DIR")]
    out: Option<PathBuf>,

    /// Worker threads for sweeps and grids (default: available parallelism).
    #[arg(long, global = true, env = "RELTOA_THREADS")]
    threads: Option<usize>,

    /// Overrides quadrature.rel_tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Regenerate the golden reference file from the oracles before running
    /// the command (or alone).
    #[arg(long, global = true)]
    seed_goldens: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full traversal report for the configured scenario.
    Traversal,
    /// Traversal reports along one parameter.
    Sweep {
        /// k0, sigma, V0 or L; defaults to [sweep].axis.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated values; defaults to the [sweep] section.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Option<Vec<f64>>,
    },
    /// Barrier time-kernel factor on the [kernel_grid].
    KernelEval,
    /// Classical arrival times for [classical].states.
    Classical,
    /// Limit probes and invariants; exits nonzero if any fail.
    Validate,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    match s {
        "k0" => Ok(SweepAxis::K0),
        "sigma" => Ok(SweepAxis::Sigma),
        "V0" | "v0" => Ok(SweepAxis::V0),
        "L" => Ok(SweepAxis::L),
        other => Err(format!("sweep axis must be one of k0, sigma, V0, L; got {other}")),
    }
}

fn run(args: Args) -> Result<bool, String> {
    if args.seed_goldens {
        let path = default_golden_path();
        eprintln!("seeding goldens: recomputing reference values into {}", path.display());
        let set = seed_goldens(&path).map_err(|e| e.to_string())?;
        eprintln!("seeding goldens: wrote {} entries", set.goldens.len());
    }
    let Some(command) = args.command else {
        if args.seed_goldens {
            return Ok(true);
        }
        return Err("no command given; see --help".into());
    };

    let mut config = match &args.config {
        Some(path) => ScenarioConfig::load(path).map_err(|e| e.to_string())?,
        None => ScenarioConfig::default(),
    };
    if let Some(tol) = args.tolerance {
        config.quadrature.rel_tolerance = tol;
    }
    if let Some(dir) = &args.out {
        config.outputs.directory = dir.clone();
    }
    config.validate().map_err(|e| e.to_string())?;
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;

    let (name, output): (&str, CommandOutput) = pool.install(|| {
        let out = match &command {
            Command::Traversal => ("traversal", cmd_traversal(&config)),
            Command::Sweep { axis, values } => {
                let section = config.sweep.clone();
                let axis = match (axis, &section) {
                    (Some(a), _) => parse_axis(a)?,
                    (None, Some(s)) => s.axis,
                    (None, None) => return Err("sweep needs --axis or a [sweep] section".to_string()),
                };
                let values = match (values, &section) {
                    (Some(v), _) => v.clone(),
                    (None, Some(s)) => s.points().map_err(|e| e.to_string())?,
                    (None, None) => Vec::new(),
                };
                ("sweep", cmd_sweep(&config, axis, &values))
            }
            Command::KernelEval => ("kernel_eval", cmd_kernel_eval(&config)),
            Command::Classical => ("classical", cmd_classical(&config)),
            Command::Validate => ("validate", cmd_validate(&config)),
        };
        Ok((out.0, out.1.map_err(|e| e.to_string())?))
    })?;

    let (csv, manifest) = write_run(
        &config.outputs.directory,
        &config.outputs.stem,
        name,
        &config.to_toml(),
        threads,
        &output.table,
        output.error_estimates.clone(),
        output.warnings.clone(),
    )
    .map_err(|e| e.to_string())?;
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", csv.display());
    println!("{}", manifest.display());
    if name == "validate" {
        let fails = output.table.rows.iter().filter(|r| matches!(&r[6], reltoa::cli::manifest::Cell::Text(s) if s == "fail")).count();
        println!("{} checks, {} failed", output.table.rows.len(), fails);
    }
    Ok(output.passed)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
