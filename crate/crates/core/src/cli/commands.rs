//! The five commands. Each builds a table plus error estimates and warnings;
//! writing files is left to the caller.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::config::{ScenarioConfig, SweepAxis};
use super::manifest::{Cell, Column, CsvTable};
use crate::classical::{
    classical_barrier_toa_closed, crtoa_hamiltonian, crtoa_quadrature, PiecewiseConstant, Region,
};
use crate::error::{Error, Result};
use crate::kernels::{barrier_factor, barrier_tkf, free_factor, KernelPoint};
use crate::limits::{run_limit_probe, standard_battery};
use crate::numerics::QuadratureSpec;
use crate::traversal::{kappa_c, traversal_report, TraversalReport};
use crate::wavepacket::GaussianPacket;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: CsvTable,
    pub error_estimates: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    /// False when a validation check failed.
    pub passed: bool,
}

impl CommandOutput {
    fn new(table: CsvTable) -> Self {
        CommandOutput {
            table,
            error_estimates: BTreeMap::new(),
            warnings: Vec::new(),
            passed: true,
        }
    }
}

const REPORT_COLUMNS: [Column; 19] = [
    Column::new("kappa_c", "1/length", "relativistic cutoff wavenumber"),
    Column::new("tau_free", "time", "free expected arrival time"),
    Column::new("tau_barrier", "time", "expected arrival time with the barrier"),
    Column::new("delta_tau", "time", "tau_free - tau_barrier"),
    Column::new("q_c", "1", "Im Q_c* (position route)"),
    Column::new("r_c_position", "1", "Im R_c* (position route)"),
    Column::new("r_tilde_plus", "time/length", "momentum integral over k > kappa_c"),
    Column::new("r_tilde_minus", "time/length", "momentum integral over k < -kappa_c"),
    Column::new("tau_trav", "time", "traversal time t_c (r_tilde_plus - r_tilde_minus)"),
    Column::new("t_c", "time", "photon crossing time L/c"),
    Column::new("tau_trav_bound", "time", "analytic bound on tau_trav when k0 < kappa_c, else nan"),
    Column::new("route_gap", "1", "relative gap between position and momentum routes for Im R_c*"),
    Column::new("delta_identity_gap", "time", "|delta_tau - (L/v0)(q_c - r_c_position)|"),
    Column::new("support_leak", "1", "probability the packet starts inside or past the barrier"),
    Column::new("mass_above_cutoff", "1", "momentum probability above kappa_c"),
    Column::new("tau_free_error", "time", "quadrature error estimate of tau_free"),
    Column::new("tau_barrier_error", "time", "quadrature error estimate of tau_barrier"),
    Column::new("r_tilde_error", "time/length", "summed error estimate of r_tilde_plus and r_tilde_minus"),
    Column::new("status", "-", "ok, or the error that stopped this row"),
];

fn report_cells(report: &TraversalReport) -> Vec<Cell> {
    let d = &report.diagnostics;
    vec![
        report.kappa_c.into(),
        report.tau_free.into(),
        report.tau_barrier.into(),
        report.delta_tau.into(),
        report.q_c.into(),
        report.r_c_position.into(),
        report.r_tilde_plus.into(),
        report.r_tilde_minus.into(),
        report.tau_trav.into(),
        report.t_c.into(),
        d.tau_trav_bound.unwrap_or(f64::NAN).into(),
        d.route_gap.into(),
        d.delta_identity_gap.into(),
        d.support_leak.into(),
        d.mass_above_cutoff.into(),
        d.tau_free_error.into(),
        d.tau_barrier_error.into(),
        (d.r_tilde_plus_error + d.r_tilde_minus_error).into(),
        "ok".into(),
    ]
}

fn failed_cells(kappa: f64, err: &Error) -> Vec<Cell> {
    let mut cells: Vec<Cell> = vec![kappa.into()];
    cells.extend((1..REPORT_COLUMNS.len() - 1).map(|_| Cell::Number(f64::NAN)));
    cells.push(format!("error: {err}").into());
    cells
}

fn report_warnings(report: &TraversalReport, label: &str) -> Vec<String> {
    let d = &report.diagnostics;
    let mut w = Vec::new();
    if d.route_gap > 1e-3 {
        w.push(format!("{label}route gap {:.2e} above 1e-3", d.route_gap));
    }
    if d.support_leak > 1e-12 {
        w.push(format!("{label}packet leaks {:.2e} of its probability into the barrier", d.support_leak));
    }
    if report.tau_trav < 0.0 {
        w.push(format!("{label}negative traversal time {:.3e}", report.tau_trav));
    }
    w
}

pub fn cmd_traversal(config: &ScenarioConfig) -> Result<CommandOutput> {
    config.validate()?;
    let units = config.units();
    let report = traversal_report(&config.packet, &config.barrier, &units, &config.quadrature)?;
    let mut table = CsvTable::new("traversal report, one scenario", REPORT_COLUMNS.to_vec());
    table.push(report_cells(&report));
    let mut out = CommandOutput::new(table);
    let d = &report.diagnostics;
    out.error_estimates = BTreeMap::from([
        ("tau_free".to_string(), d.tau_free_error),
        ("tau_barrier".to_string(), d.tau_barrier_error),
        ("q_c".to_string(), d.q_c_error),
        ("r_c_position".to_string(), d.r_c_position_error),
        ("r_tilde_plus".to_string(), d.r_tilde_plus_error),
        ("r_tilde_minus".to_string(), d.r_tilde_minus_error),
    ]);
    out.warnings = report_warnings(&report, "");
    Ok(out)
}

/// One traversal report per sweep value, computed in parallel on the current
/// rayon pool and written in input order. A failing point fills its row with
/// nan and records the error; the sweep continues.
pub fn cmd_sweep(config: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<CommandOutput> {
    config.validate()?;
    let units = config.units();
    let results: Vec<(f64, Result<TraversalReport>)> = values
        .par_iter()
        .map(|&x| {
            let (barrier, packet) = axis.apply(&config.barrier, &config.packet, x);
            let result = barrier
                .validate(&units)
                .and_then(|_| traversal_report(&packet, &barrier, &units, &config.quadrature));
            (kappa_c(barrier.v0, &units), result)
        })
        .collect();
    let mut columns = vec![Column::new(
        axis.label(),
        match axis {
            SweepAxis::K0 => "1/length",
            SweepAxis::Sigma | SweepAxis::L => "length",
            SweepAxis::V0 => "energy",
        },
        "sweep value",
    )];
    columns.extend(REPORT_COLUMNS);
    let mut table = CsvTable::new(format!("traversal sweep over {}", axis.label()), columns);
    let mut out_warnings = Vec::new();
    for (x, (kappa, result)) in values.iter().zip(results) {
        let mut row: Vec<Cell> = vec![(*x).into()];
        match result {
            Ok(report) => {
                row.extend(report_cells(&report));
                out_warnings.extend(report_warnings(&report, &format!("{} = {x}: ", axis.label())));
            }
            Err(e) => {
                out_warnings.push(format!("{} = {x}: {e}", axis.label()));
                row.extend(failed_cells(kappa, &e));
            }
        }
        table.push(row);
    }
    let mut out = CommandOutput::new(table);
    out.warnings = out_warnings;
    Ok(out)
}

/// T̃_B(η, ζ) on the configured grid. With V0 = 0 this is (η/2)𝒯_F(ζ).
pub fn cmd_kernel_eval(config: &ScenarioConfig) -> Result<CommandOutput> {
    config.validate()?;
    let grid = config
        .kernel_grid
        .as_ref()
        .ok_or_else(|| Error::invalid("kernel_grid", "section missing from config"))?;
    let units = config.units();
    let columns = vec![
        Column::new("eta", "length", "mean coordinate (q + q')/2"),
        Column::new("zeta", "length", "separation q - q'"),
        Column::new("region", "-", "I (eta > b), II (a <= eta <= b) or III (eta < a)"),
        Column::new("value", "length", "barrier time-kernel factor"),
        Column::new("im_residual", "length", "imaginary part left after summing conjugate terms"),
        Column::new("abs_error", "length", "quadrature error estimate"),
        Column::new("status", "-", "ok, or the error for this point"),
    ];
    let mut table = CsvTable::new("barrier time-kernel factor on a grid", columns);
    let points: Vec<KernelPoint> = grid
        .eta
        .iter()
        .flat_map(|&eta| grid.zeta.iter().map(move |&zeta| KernelPoint { eta, zeta }))
        .collect();
    let values: Vec<_> = points
        .par_iter()
        .map(|p| barrier_tkf(*p, &config.barrier, &units, &config.quadrature))
        .collect();
    let mut worst = 0.0f64;
    for (p, v) in points.iter().zip(values) {
        let region = format!("{:?}", Region::locate(p.eta, &config.barrier));
        let mut row: Vec<Cell> = vec![p.eta.into(), p.zeta.into(), region.into()];
        match v {
            Ok(v) => {
                worst = worst.max(v.abs_error);
                row.extend([v.value.into(), v.im_residual.into(), v.abs_error.into(), "ok".into()]);
            }
            Err(e) => row.extend([
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                format!("error: {e}").into(),
            ]),
        }
        table.push(row);
    }
    let mut out = CommandOutput::new(table);
    out.error_estimates.insert("max_abs_error".into(), worst);
    Ok(out)
}

/// Closed-form arrival times next to both segment integrations.
pub fn cmd_classical(config: &ScenarioConfig) -> Result<CommandOutput> {
    config.validate()?;
    let units = config.units();
    let states = config
        .classical
        .as_ref()
        .map(|c| c.states.clone())
        .ok_or_else(|| Error::invalid("classical", "section missing from config"))?;
    let potential = PiecewiseConstant::from_barrier(&config.barrier);
    let columns = vec![
        Column::new("q0", "length", "initial position"),
        Column::new("p0", "momentum", "initial momentum"),
        Column::new("region", "-", "region of q0 relative to the barrier"),
        Column::new("closed_form", "time", "closed-form arrival time at the origin"),
        Column::new("segment_quadrature", "time", "segment integration of the quantization-ready form"),
        Column::new("hamiltonian_literal", "time", "segment integration of the inverted Hamiltonian"),
        Column::new("relative_gap", "1", "|closed_form - segment_quadrature| / |closed_form|"),
        Column::new("status", "-", "ok, or the error for this state"),
    ];
    let mut table = CsvTable::new("classical arrival times", columns);
    let mut worst = 0.0f64;
    for s in &states {
        let region = format!("{:?}", Region::locate(s.q0, &config.barrier));
        let closed = classical_barrier_toa_closed(s, &config.barrier, &units);
        let quad = crtoa_quadrature(s, &potential, 0.0, &units);
        let literal = crtoa_hamiltonian(s, &potential, 0.0, &units).unwrap_or(f64::NAN);
        let mut row: Vec<Cell> = vec![s.q0.into(), s.p0.into(), region.into()];
        match (closed, quad) {
            (Ok(c), Ok(q)) => {
                let gap = (c - q).abs() / c.abs();
                worst = worst.max(gap);
                row.extend([c.into(), q.into(), literal.into(), gap.into(), "ok".into()]);
            }
            (Err(e), _) | (_, Err(e)) => row.extend([
                f64::NAN.into(),
                f64::NAN.into(),
                literal.into(),
                f64::NAN.into(),
                format!("error: {e}").into(),
            ]),
        }
        table.push(row);
    }
    let mut out = CommandOutput::new(table);
    out.error_estimates.insert("max_relative_gap".into(), worst);
    Ok(out)
}

struct Check {
    name: String,
    parameter: String,
    target: f64,
    observed: f64,
    fitted_rate: f64,
    passed: bool,
    message: String,
}

/// Limit probes plus kernel and route invariants. `passed` is false if any
/// check fails; numerical errors inside a check count as failures.
pub fn cmd_validate(config: &ScenarioConfig) -> Result<CommandOutput> {
    config.validate()?;
    let units = config.units();
    let spec = &config.quadrature;
    let mut checks = Vec::new();

    for probe_spec in standard_battery(&config.barrier, &config.packet, &units, spec) {
        let name = probe_spec.kind.name().to_string();
        let parameter = format!("{:?}", probe_spec.kind.parameter()).to_lowercase();
        checks.push(match run_limit_probe(&probe_spec) {
            Ok(p) => Check {
                name,
                parameter,
                target: p.target,
                observed: *p.observed.last().expect("non-empty"),
                fitted_rate: p.fitted_rate,
                passed: p.passed,
                message: p.message,
            },
            Err(e) => failed_check(name, parameter, &e),
        });
    }

    checks.push(route_check(config)?);
    checks.push(instantaneity_check(config));
    checks.push(kernel_symmetry_check(config, spec));

    let columns = vec![
        Column::new("check", "-", "name of the probe or invariant"),
        Column::new("parameter", "-", "limit parameter, or - for invariants"),
        Column::new("target", "varies", "expected value"),
        Column::new("observed", "varies", "value at the last sequence point"),
        Column::new("error", "varies", "|observed - target|"),
        Column::new("fitted_rate", "1", "log-log slope of the error along the sequence, nan if none"),
        Column::new("status", "-", "pass or fail"),
        Column::new("message", "-", "reason for a failure"),
    ];
    let mut table = CsvTable::new("validation battery", columns);
    let mut out_passed = true;
    let mut warnings = Vec::new();
    for c in &checks {
        out_passed &= c.passed;
        if !c.passed {
            warnings.push(format!("{}: {}", c.name, c.message));
        }
        table.push(vec![
            c.name.clone().into(),
            c.parameter.clone().into(),
            c.target.into(),
            c.observed.into(),
            (c.observed - c.target).abs().into(),
            c.fitted_rate.into(),
            c.passed.into(),
            c.message.clone().into(),
        ]);
    }
    let mut out = CommandOutput::new(table);
    out.passed = out_passed;
    out.warnings = warnings;
    Ok(out)
}

fn failed_check(name: String, parameter: String, e: &Error) -> Check {
    Check {
        name,
        parameter,
        target: f64::NAN,
        observed: f64::NAN,
        fitted_rate: f64::NAN,
        passed: false,
        message: e.to_string(),
    }
}

fn route_check(config: &ScenarioConfig) -> Result<Check> {
    let units = config.units();
    Ok(
        match traversal_report(&config.packet, &config.barrier, &units, &config.quadrature) {
            Ok(r) => {
                let gap = r.diagnostics.route_gap;
                let identity = r.diagnostics.delta_identity_gap / r.delta_tau.abs().max(1e-300);
                let passed = gap <= 1e-3 && identity <= 1e-8;
                Check {
                    name: "route_equivalence".into(),
                    parameter: "-".into(),
                    target: 0.0,
                    observed: gap,
                    fitted_rate: f64::NAN,
                    passed,
                    message: if passed {
                        "ok".into()
                    } else {
                        format!("route gap {gap:.2e}, delta identity gap {identity:.2e}")
                    },
                }
            }
            Err(e) => failed_check("route_equivalence".into(), "-".into(), &e),
        },
    )
}

/// A wide packet centred below κ_c, placed far enough left for its width.
fn instantaneity_check(config: &ScenarioConfig) -> Check {
    let units = config.units();
    let barrier = config.barrier;
    let kc = kappa_c(barrier.v0, &units);
    let sigma = 20.0 / kc.clamp(1e-3, 1.0);
    let packet = GaussianPacket {
        q0: barrier.a - 10.0 * sigma,
        sigma,
        k0: 0.54 * kc,
    };
    match traversal_report(&packet, &barrier, &units, &config.quadrature) {
        Ok(r) => {
            let limit = 1e-8 * r.t_c;
            let bound_ok = r.diagnostics.tau_trav_bound.is_none_or(|b| r.tau_trav <= b * (1.0 + 1e-6));
            let passed = r.tau_trav.abs() <= limit && bound_ok;
            Check {
                name: "instantaneous_below_cutoff".into(),
                parameter: "-".into(),
                target: 0.0,
                observed: r.tau_trav,
                fitted_rate: f64::NAN,
                passed,
                message: if passed {
                    "ok".into()
                } else {
                    format!("tau_trav {:.3e} above {limit:.3e} or above its bound", r.tau_trav)
                },
            }
        }
        Err(e) => failed_check("instantaneous_below_cutoff".into(), "-".into(), &e),
    }
}

/// Reality and evenness of 𝒯_F and 𝒯_B(±V0) on a fixed set of separations.
fn kernel_symmetry_check(config: &ScenarioConfig, spec: &QuadratureSpec) -> Check {
    let units = config.units();
    let length = 1.0 / units.compton_wavenumber();
    let mut worst_odd = 0.0f64;
    let mut worst_im = 0.0f64;
    let mut run = || -> Result<()> {
        for i in 1..=12 {
            let zeta = length * 0.05 * 1.7f64.powi(i);
            let f = |z: f64| free_factor(z, &units, spec);
            let (a, b) = (f(zeta)?, f(-zeta)?);
            worst_odd = worst_odd.max((a.value - b.value).abs() / a.value.abs());
            for v0 in [config.barrier.v0, -config.barrier.v0] {
                let g = |z: f64| barrier_factor(v0, z, &units, spec);
                let (a, b) = (g(zeta)?, g(-zeta)?);
                worst_odd = worst_odd.max((a.value - b.value).abs() / a.value.abs().max(1.0));
                worst_im = worst_im.max(a.im_residual.abs()).max(b.im_residual.abs());
            }
        }
        Ok(())
    };
    match run() {
        Ok(()) => {
            let passed = worst_odd <= 1e-9 && worst_im <= 1e-8;
            Check {
                name: "kernel_reality_and_evenness".into(),
                parameter: "-".into(),
                target: 0.0,
                observed: worst_odd.max(worst_im),
                fitted_rate: f64::NAN,
                passed,
                message: if passed {
                    "ok".into()
                } else {
                    format!("odd part {worst_odd:.2e}, imaginary residual {worst_im:.2e}")
                },
            }
        }
        Err(e) => failed_check("kernel_reality_and_evenness".into(), "-".into(), &e),
    }
}
