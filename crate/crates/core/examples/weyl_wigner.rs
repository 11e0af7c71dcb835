//! Phase-space functions of the free and far-side barrier kernels as ħ
//! shrinks, against the classical arrival times.

use reltoa::classical::{classical_barrier_toa_closed, free_toa, ClassicalState, SquareBarrier};
use reltoa::limits::{weyl_barrier, weyl_free};
use reltoa::numerics::QuadratureSpec;
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let spec = QuadratureSpec::default();
    let units = Units::natural();
    let state = ClassicalState { q0: -10.0, p0: 1.0 };
    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    let far = ClassicalState { q0: -10.0, p0: 2.0 };
    let free_target = free_toa(&state, &units);
    let barrier_target = classical_barrier_toa_closed(&far, &barrier, &units)?;
    println!("targets: free {free_target:.10}, barrier {barrier_target:.10}");
    for hbar in [1.0, 0.5, 0.25] {
        let scaled = units.with_hbar(hbar);
        let f = weyl_free(&state, &scaled, &spec)?;
        let b = weyl_barrier(&far, &barrier, &scaled, &spec)?;
        println!(
            "hbar = {hbar:<5} free {f:.10} ({:.1e})  barrier {b:.10} ({:.1e})",
            (f - free_target).abs() / free_target,
            (b - barrier_target).abs() / barrier_target
        );
    }
    Ok(())
}
