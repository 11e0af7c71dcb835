//! Traversal time across the cutoff κ_c as the carrier wavenumber grows.

use reltoa::cli::{cmd_sweep, ScenarioConfig, SweepAxis};

fn main() -> reltoa::Result<()> {
    let mut config = ScenarioConfig::default();
    config.packet.sigma = 10.0;
    config.packet.q0 = -100.0;
    let values: Vec<f64> = (2..=30).map(|i| 0.1 * i as f64).collect();
    let out = cmd_sweep(&config, SweepAxis::K0, &values)?;
    let col = out.table.column_index("tau_trav").expect("column");
    for row in &out.table.rows {
        if let (reltoa::cli::manifest::Cell::Number(k0), reltoa::cli::manifest::Cell::Number(tau)) = (&row[0], &row[col]) {
            let bar = "#".repeat((tau * 8.0).clamp(0.0, 70.0) as usize);
            println!("{k0:>4.1} {tau:>10.3e} {bar}");
        }
    }
    Ok(())
}
