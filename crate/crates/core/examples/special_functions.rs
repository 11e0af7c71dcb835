//! ₀F₁(;1;z) and J₀ against the exact rational series.

use num_complex::Complex64;
use reltoa::numerics::{bessel_j0, hyp0f1_one};
use reltoa::oracle::exact_hyp0f1;

fn main() -> reltoa::Result<()> {
    println!("{:>18} {:>24} {:>24} {:>10}", "z", "hyp0f1_one", "exact series", "rel err");
    for z in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-50.0, 0.0),
        Complex64::new(50.0, 0.0),
        Complex64::new(-20.0, 12.0),
        Complex64::new(3.0, -45.0),
    ] {
        let fast = hyp0f1_one(z)?;
        let (exact, _) = exact_hyp0f1(z, 200)?;
        let err = (fast - exact).norm() / exact.norm();
        println!("{:>18} {:>24.15e} {:>24.15e} {:>10.1e}", z.to_string(), fast.re, exact.re, err);
    }
    println!();
    for x in [0.5, 2.404_825_557_695_773, 10.0, 100.0] {
        println!("J0({x}) = {:.15e}", bessel_j0(x));
    }
    Ok(())
}
