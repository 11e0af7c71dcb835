use num_complex::Complex64;
use reltoa::classical::{classical_barrier_toa_closed, ClassicalState};
use reltoa::kernels::{
    barrier_factor_reduced, barrier_tkf, f_factor_reduced, free_factor_reduced, KernelPoint,
};
use reltoa::numerics::{branch_cut_integral, hyp0f1_one, QuadratureSpec};
use reltoa::oracle::{compute_goldens, default_golden_path, reference_scenario, GoldenSet};
use reltoa::traversal::{nonrel_traversal_target, tau_top, traversal_report};

fn goldens() -> GoldenSet {
    GoldenSet::read(&default_golden_path()).expect("checked-in golden file")
}

fn check(set: &GoldenSet, name: &str, actual: f64) {
    let golden = set.get(name).unwrap_or_else(|| panic!("missing golden {name}"));
    let rel = (actual - golden.value).abs() / golden.value.abs();
    assert!(
        rel <= golden.tolerance,
        "{name}: {actual:.15e} vs golden {:.15e} (rel {rel:.2e} > {:.1e})",
        golden.value,
        golden.tolerance
    );
}

#[test]
fn special_functions_match_goldens() {
    let set = goldens();
    let eval = |re: f64, im: f64| hyp0f1_one(Complex64::new(re, im)).unwrap();
    check(&set, "hyp0f1_z_1", eval(1.0, 0.0).re);
    check(&set, "hyp0f1_z_minus_1", eval(-1.0, 0.0).re);
    check(&set, "hyp0f1_z_minus_50", eval(-50.0, 0.0).re);
    check(&set, "hyp0f1_z_50", eval(50.0, 0.0).re);
    let off = eval(-20.0, 12.0);
    check(&set, "hyp0f1_z_offaxis_re", off.re);
    check(&set, "hyp0f1_z_offaxis_im", off.im);
}

#[test]
fn kernels_match_goldens() {
    let set = goldens();
    let spec = QuadratureSpec::default();
    let q1 = branch_cut_integral(|_| Ok(1.0), 1.0, &spec).unwrap().value;
    check(&set, "branch_cut_unit", q1);
    check(&set, "free_factor_lambda_1", free_factor_reduced(1.0, &spec).unwrap().value);
    check(&set, "free_factor_lambda_0_01", free_factor_reduced(0.01, &spec).unwrap().value);
    check(&set, "f_factor_u_0_25_lambda_1", f_factor_reduced(0.25, 1.0, &spec).unwrap().value);
    check(&set, "f_factor_u_minus_0_5_lambda_3", f_factor_reduced(-0.5, 3.0, &spec).unwrap().value);
    check(
        &set,
        "barrier_factor_u_minus_0_5_lambda_1",
        barrier_factor_reduced(-0.5, 1.0, &spec).unwrap().value,
    );
    let (barrier, _, units) = reference_scenario();
    let point = KernelPoint { eta: -10.0, zeta: 1.0 };
    check(
        &set,
        "tkf_region_three_eta_minus_10_lambda_1",
        barrier_tkf(point, &barrier, &units, &spec).unwrap().value,
    );
}

#[test]
fn classical_and_traversal_match_goldens() {
    let set = goldens();
    let spec = QuadratureSpec::default();
    let (barrier, packet, units) = reference_scenario();
    let state = ClassicalState { q0: -10.0, p0: 2.0 };
    check(
        &set,
        "classical_barrier_worked",
        classical_barrier_toa_closed(&state, &barrier, &units).unwrap(),
    );
    check(&set, "tau_top_k0_2", tau_top(2.0, &barrier, &units).unwrap());
    let report = traversal_report(&packet, &barrier, &units, &spec).unwrap();
    check(&set, "tau_trav_reference", report.tau_trav);
    check(
        &set,
        "nonrel_target_reference",
        nonrel_traversal_target(&packet, &barrier, &units, &spec).unwrap().value,
    );
}

#[test]
fn golden_file_is_reproducible_from_oracles() {
    let frozen = goldens();
    let fresh = compute_goldens().unwrap();
    assert_eq!(frozen.goldens.len(), fresh.goldens.len());
    for (a, b) in frozen.goldens.iter().zip(&fresh.goldens) {
        assert_eq!(a.name, b.name);
        assert!(
            (a.value - b.value).abs() <= 1e-13 * a.value.abs(),
            "{}: frozen {} vs recomputed {}",
            a.name,
            a.value,
            b.value
        );
    }
}
