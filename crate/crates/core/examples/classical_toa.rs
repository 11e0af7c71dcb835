//! Classical arrival times at the origin, free and across a square barrier.

use reltoa::classical::{
    classical_barrier_toa_closed, crtoa_hamiltonian, crtoa_quadrature, free_toa, ClassicalState,
    PiecewiseConstant, SquareBarrier,
};
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let units = Units::natural();
    let free = ClassicalState { q0: -10.0, p0: 1.0 };
    println!("free, q0 = -10, p0 = 1: {:.10} (closed form {:.10})",
        crtoa_quadrature(&free, &PiecewiseConstant::zero(), 0.0, &units)?,
        free_toa(&free, &units));

    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    let potential = PiecewiseConstant::from_barrier(&barrier);
    println!("\nbarrier (a, b, V0) = (-5, -3, 0.5)");
    println!("{:>6} {:>5} {:>14} {:>14} {:>14}", "q0", "p0", "closed", "quadrature", "hamiltonian");
    for (q0, p0) in [(-10.0, 2.0), (-10.0, 1.2), (-4.0, 2.0), (-2.0, 0.5)] {
        let s = ClassicalState { q0, p0 };
        let show = |r: reltoa::Result<f64>| r.map_or("forbidden".to_string(), |v| format!("{v:.10}"));
        println!(
            "{q0:>6} {p0:>5} {:>14} {:>14} {:>14}",
            show(classical_barrier_toa_closed(&s, &barrier, &units)),
            show(crtoa_quadrature(&s, &potential, 0.0, &units)),
            show(crtoa_hamiltonian(&s, &potential, 0.0, &units)),
        );
    }
    Ok(())
}
