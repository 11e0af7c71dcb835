//! Production routines next to the independent reference computations.

use reltoa::kernels::{barrier_factor_reduced, f_factor_reduced, free_factor_reduced};
use reltoa::numerics::QuadratureSpec;
use reltoa::oracle::{barrier_factor_oracle, f_factor_series, free_factor_oracle, reference_scenario, tau_trav_oracle};
use reltoa::traversal::traversal_report;

fn main() -> reltoa::Result<()> {
    let spec = QuadratureSpec::default();
    let row = |name: &str, a: f64, b: f64| println!("{name:<28} {a:>22.15e} {b:>22.15e} {:>9.1e}", (a - b).abs() / b.abs());
    row("T_F(1)", free_factor_reduced(1.0, &spec)?.value, free_factor_oracle(1.0, 1e-13)?);
    row("F_B(U = 0.25, 1)", f_factor_reduced(0.25, 1.0, &spec)?.value, f_factor_series(0.25, 1.0, 40, 1e-13)?);
    row("T_B(U = -0.5, 1)", barrier_factor_reduced(-0.5, 1.0, &spec)?.value, barrier_factor_oracle(-0.5, 1.0, 1e-13)?);
    let (barrier, packet, units) = reference_scenario();
    let r = traversal_report(&packet, &barrier, &units, &spec)?;
    row("tau_trav", r.tau_trav, tau_trav_oracle(&packet, &barrier, &units, 1e-13)?);
    Ok(())
}
