//! Barrier factors: ℱ_B from its θ-integral and its contour form, 𝒯_B for
//! both signs of the potential, and T̃_B in the three regions.

use reltoa::classical::SquareBarrier;
use reltoa::kernels::{barrier_factor, barrier_tkf, f_factor, f_factor_contour, free_factor, KernelPoint};
use reltoa::numerics::QuadratureSpec;
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let spec = QuadratureSpec::default();
    let units = Units::natural();

    println!("F_B at small |V0|: theta integral vs contour form");
    for v0 in [0.05, -0.05] {
        for zeta in [0.5, 1.0, 3.0] {
            let direct = f_factor(v0, zeta, &units, &spec)?;
            let contour = f_factor_contour(v0, zeta, &units, &spec, None)?;
            println!("  V0 = {v0:>5}, zeta = {zeta}: {:.12} {:.12}", direct.value, contour.value);
        }
    }
    match f_factor_contour(-0.5, 1.0, &units, &spec, Some(0.5)) {
        Ok(v) => println!("contour form at V0 = -0.5: {}", v.value),
        Err(e) => println!("contour form at V0 = -0.5: {e}"),
    }

    println!("\nT_B(V0, zeta) against T_F(zeta)");
    for zeta in [0.1, 1.0, 4.0] {
        let tf = free_factor(zeta, &units, &spec)?.value;
        let up = barrier_factor(0.5, zeta, &units, &spec)?;
        let down = barrier_factor(-0.5, zeta, &units, &spec)?;
        println!(
            "  zeta = {zeta}: T_F = {tf:.10}, T_B(+0.5) = {:.10}, T_B(-0.5) = {:.10} (Im residual {:.1e})",
            up.value, down.value, down.im_residual
        );
    }

    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    println!("\nT~_B(eta, zeta = 1) by region");
    for eta in [-10.0, -4.0, 1.0] {
        let v = barrier_tkf(KernelPoint { eta, zeta: 1.0 }, &barrier, &units, &spec)?;
        println!("  eta = {eta:>5}: {:.12}", v.value);
    }
    Ok(())
}
