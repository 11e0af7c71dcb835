//! Every limit probe for the reference scenario.

use reltoa::limits::{run_limit_probe, standard_battery};
use reltoa::numerics::QuadratureSpec;
use reltoa::oracle::reference_scenario;

fn main() -> reltoa::Result<()> {
    let (barrier, packet, units) = reference_scenario();
    for spec in standard_battery(&barrier, &packet, &units, &QuadratureSpec::default()) {
        let p = run_limit_probe(&spec)?;
        println!(
            "{:<28} {:<6} target {:>14.8e} last {:>14.8e} rate {:>7.3} {}",
            p.name,
            format!("{:?}", p.parameter),
            p.target,
            p.observed.last().unwrap(),
            p.fitted_rate,
            if p.passed { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
