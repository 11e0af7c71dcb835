//! A packet whose momenta all lie below the relativistic cutoff crosses the
//! barrier in (numerically) zero time.

use reltoa::classical::SquareBarrier;
use reltoa::numerics::QuadratureSpec;
use reltoa::traversal::{instantaneity_bound, traversal_report};
use reltoa::wavepacket::{GaussianPacket, WavePacket};
use reltoa::Units;

fn main() -> reltoa::Result<()> {
    let units = Units::natural();
    let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &units)?;
    let packet = GaussianPacket::new(-200.0, 20.0, 0.6)?;
    let r = traversal_report(&packet, &barrier, &units, &QuadratureSpec::default())?;
    println!("kappa_c = {:.7}, k0 = {}", r.kappa_c, packet.k0);
    println!("momentum mass above kappa_c: {:.3e}", packet.mass_above(r.kappa_c));
    println!("tau_trav = {:.3e}  (t_c = {})", r.tau_trav, r.t_c);
    if let Some(bound) = instantaneity_bound(&packet, &barrier, &units) {
        println!("analytic bound t_c * R~+ <= {:.3e}", r.t_c * bound);
    }
    println!("tau_free - tau_barrier = {:.3e}", r.delta_tau);
    Ok(())
}
