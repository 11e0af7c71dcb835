//! Expected arrival times and the traversal time for a Gaussian packet.

use reltoa::classical::SquareBarrier;
use reltoa::numerics::QuadratureSpec;
use reltoa::traversal::{tau_top, traversal_report};
use reltoa::wavepacket::GaussianPacket;
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let units = Units::natural();
    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    let packet = GaussianPacket::new(-50.0, 5.0, 2.0)?;
    let r = traversal_report(&packet, &barrier, &units, &QuadratureSpec::default())?;
    println!("kappa_c          {:.10}", r.kappa_c);
    println!("tau_free         {:.10}", r.tau_free);
    println!("tau_barrier      {:.10}", r.tau_barrier);
    println!("delta_tau        {:.10}", r.delta_tau);
    println!("Im Q_c*          {:.10}", r.q_c);
    println!("Im R_c*          {:.10}", r.r_c_position);
    println!("tau_trav         {:.10}", r.tau_trav);
    println!("tau_top(k0)      {:.10}", tau_top(packet.k0, &barrier, &units)?);
    println!("route gap        {:.1e}", r.diagnostics.route_gap);
    println!("identity gap     {:.1e}", r.diagnostics.delta_identity_gap);
    Ok(())
}
