//! The free time-kernel factor 𝒯_F across its small, middle and large
//! separation regimes.

use reltoa::kernels::free_factor;
use reltoa::numerics::QuadratureSpec;
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let spec = QuadratureSpec::default();
    let units = Units::natural();
    println!("{:>10} {:>22} {:>10} {:>22}", "zeta", "T_F", "abs err", "zeta * T_F");
    for zeta in [1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        let v = free_factor(zeta, &units, &spec)?;
        println!("{zeta:>10} {:>22.15e} {:>10.1e} {:>22.15e}", v.value, v.abs_error, zeta * v.value);
    }
    // in units with a heavier particle the same curve is compressed
    let heavy = Units::new(4.0, 1.0, 1.0)?;
    println!("\nmu = 4: T_F(0.25) = {:.15}", free_factor(0.25, &heavy, &spec)?.value);
    println!("mu = 1: T_F(1.00) = {:.15}", free_factor(1.0, &units, &spec)?.value);
    Ok(())
}
