//! Load a scenario file, run a command and write its CSV and manifest.
//!
//! cargo run --example scenario_config -- crates/core/configs/reference.toml /tmp/reltoa-out

use std::path::PathBuf;

use reltoa::cli::{cmd_classical, write_run, ScenarioConfig};

fn main() -> reltoa::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = match args.next() {
        Some(path) => ScenarioConfig::load(&PathBuf::from(path))?,
        None => ScenarioConfig::default(),
    };
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("reltoa-example"));
    let out = cmd_classical(&config)?;
    print!("{}", out.table.render());
    let (csv, manifest) = write_run(&out_dir, &config.outputs.stem, "classical", &config.to_toml(), 1, &out.table, out.error_estimates, out.warnings)?;
    println!("wrote {} and {}", csv.display(), manifest.display());
    Ok(())
}
