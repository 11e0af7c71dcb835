//! Traversal time as c grows, approaching the non-relativistic result at
//! rate c⁻².

use reltoa::classical::SquareBarrier;
use reltoa::numerics::QuadratureSpec;
use reltoa::traversal::nonrel_traversal;
use reltoa::wavepacket::GaussianPacket;
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let units = Units::natural();
    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    let packet = GaussianPacket::new(-50.0, 5.0, 2.0)?;
    let record = nonrel_traversal(&packet, &barrier, &units, &[1.0, 10.0, 100.0, 1000.0], &QuadratureSpec::default())?;
    println!("target {:.10}", record.target);
    for (c, tau) in record.c_values.iter().zip(&record.tau_trav) {
        println!("c = {c:>6}: tau_trav = {tau:.10}, |diff| = {:.3e}", (tau - record.target).abs());
    }
    println!("fitted rate {:.3}", record.fitted_rate);
    Ok(())
}
