//! Single-point evaluation, the config property suite, and shared metadata.

use sha2::{Digest, Sha256};

use crate::config::{BuiltSystem, Dynamics, ObservableRequest, RunConfig};
use crate::error::{Error, Result};
use crate::observable::{LeadMatrix, LeadVector};
use crate::reservoir::Statistics;
use crate::schrodinger::thermal_noise_bounds_two_lead_from_config;
use crate::table::{fmt_bool, fmt_value, Block, OutputTable};
use crate::vertex::Coupling;

pub fn config_digest(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let out = h.finalize();
    let mut hex = String::with_capacity(64);
    for b in out {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

pub fn metadata_lines(cfg: &RunConfig, digest: &str) -> Vec<String> {
    let bound_free = match cfg.build() {
        Ok(BuiltSystem::Schrodinger(s)) => s.bound_state_free(),
        _ => true,
    };
    vec![
        format!("stargraph-transport {}", env!("CARGO_PKG_VERSION")),
        format!("config-digest: sha256:{digest}"),
        format!(
            "dynamics: {}",
            match cfg.dynamics {
                Dynamics::Schrodinger => "schrodinger",
                Dynamics::Dirac => "dirac",
            }
        ),
        format!(
            "statistics: {}",
            match cfg.statistics {
                Statistics::Fermi => "fermi",
                Statistics::Bose => "bose",
            }
        ),
        format!("leads: {}", cfg.reservoirs.len()),
        format!("bound-state-free: {bound_free}"),
        format!("bound-state-override: {}", cfg.override_bound_states),
        format!(
            "quadrature: rel_tol={:e} abs_tol={:e} max_subdivisions={}",
            cfg.quadrature.rel_tol, cfg.quadrature.abs_tol, cfg.quadrature.max_subdivisions
        ),
        format!(
            "kirchhoff: rel_tol={:e} abs_floor={:e}",
            crate::observable::KIRCHHOFF_REL_TOL,
            crate::observable::KIRCHHOFF_ABS_FLOOR
        ),
        "units: hbar = k_B = 1; temperatures are energies, x is an inverse momentum".into(),
    ]
}

pub struct PointReport {
    pub table: OutputTable,
    pub converged: bool,
    pub invariants_ok: bool,
}

fn vector_block(v: &LeadVector, title: &str) -> (Block, bool, bool) {
    let residual = v.kirchhoff_residual();
    let rows = (0..v.n())
        .map(|i| {
            vec![
                (i + 1).to_string(),
                fmt_value(v.values[i]),
                fmt_value(v.errors[i]),
                fmt_bool(v.converged),
                fmt_value(residual),
                v.note.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let block = Block {
        title: format!("{title} ({})", v.kind.units()),
        header: [
            "lead",
            "value",
            "error_estimate",
            "converged",
            "kirchhoff_residual",
            "note",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    };
    (block, v.converged, v.kirchhoff_ok())
}

fn matrix_block(m: &LeadMatrix, title: &str, check_symmetry: bool) -> (Block, bool, bool) {
    let n = m.n();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let col_residual: f64 = (0..n).map(|r| m.values[r][j]).sum::<f64>().abs();
            rows.push(vec![
                (i + 1).to_string(),
                (j + 1).to_string(),
                fmt_value(m.values[i][j]),
                fmt_value(m.errors[i][j]),
                fmt_bool(m.converged),
                fmt_value(col_residual),
                m.note.clone().unwrap_or_default(),
            ]);
        }
    }
    let block = Block {
        title: format!("{title} ({})", m.kind.units()),
        header: [
            "i",
            "j",
            "value",
            "error_estimate",
            "converged",
            "kirchhoff_residual",
            "note",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    };
    let tol = (crate::observable::KIRCHHOFF_REL_TOL * m.max_abs())
        .max(crate::observable::KIRCHHOFF_ABS_FLOOR);
    let mut ok = m.kirchhoff_ok();
    if check_symmetry {
        ok &= m.asymmetry() <= tol;
    }
    (block, m.converged, ok)
}

/// Evaluate one configuration with no sweep: one block per requested
/// observable, plus convergence and invariant summaries.
pub fn run_point(cfg: &RunConfig, digest: &str) -> Result<PointReport> {
    if cfg.sweep.is_some() {
        return Err(Error::validation(
            "run_point takes a sweep-free configuration; use run_sweep",
        ));
    }
    let system = cfg.build()?;
    let mut blocks = Vec::new();
    let mut converged = true;
    let mut invariants_ok = true;

    for req in &cfg.observables {
        match (&system, req) {
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Current) => {
                let v = sys.steady_current()?;
                let (b, c, k) = vector_block(&v, "current");
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Heat) => {
                let v = sys.heat_current()?;
                let (b, c, k) = vector_block(&v, "heat_current");
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Conductance) => {
                let m = sys.conductance()?;
                let (b, c, k) = matrix_block(&m, "conductance", false);
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Noise) => {
                let m = sys.noise_zero_freq()?;
                let (b, c, k) = matrix_block(&m, "noise", true);
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::ChargeDensity) => {
                let mut rows = Vec::new();
                for i in 0..sys.n() {
                    for &x in &cfg.x_grid {
                        let p = sys.charge_density_profile(i, x)?;
                        converged &= p.converged;
                        rows.push(vec![
                            (i + 1).to_string(),
                            fmt_value(x),
                            fmt_value(p.total),
                            fmt_value(p.oscillating),
                            fmt_value(p.equilibrium_reference),
                            fmt_value(p.nonequilibrium_shift),
                            fmt_value(p.consistency_residual),
                            fmt_bool(p.converged),
                            p.note.clone().unwrap_or_default(),
                        ]);
                    }
                }
                blocks.push(Block {
                    title: "charge_density (e*momentum; per lead and probe distance)".into(),
                    header: [
                        "lead",
                        "x",
                        "total",
                        "oscillating",
                        "equilibrium_reference",
                        "nonequilibrium_shift",
                        "consistency_residual",
                        "converged",
                        "note",
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                    rows,
                });
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::EnergyDensity) => {
                let mut rows = Vec::new();
                for i in 0..sys.n() {
                    for &x in &cfg.x_grid {
                        let p = sys.energy_density_profile(i, x)?;
                        converged &= p.converged;
                        rows.push(vec![
                            (i + 1).to_string(),
                            fmt_value(x),
                            fmt_value(p.total),
                            fmt_value(p.stefan_boltzmann),
                            fmt_value(p.nonequilibrium_shift),
                            fmt_bool(p.converged),
                            p.note.clone().unwrap_or_default(),
                        ]);
                    }
                }
                blocks.push(Block {
                    title: "energy_density (energy*momentum; per lead and probe distance)".into(),
                    header: [
                        "lead",
                        "x",
                        "total",
                        "stefan_boltzmann",
                        "nonequilibrium_shift",
                        "converged",
                        "note",
                    ]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                    rows,
                });
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::TwoLeadThermalNoise) => {
                let b = thermal_noise_bounds_two_lead_from_config(sys)?;
                converged &= b.converged;
                invariants_ok &= b.lower <= b.value && b.value <= b.upper;
                blocks.push(Block {
                    title: "two_lead_thermal_noise (e^2*energy)".into(),
                    header: ["value", "lower_bound", "upper_bound", "converged", "note"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                    rows: vec![vec![
                        fmt_value(b.value),
                        fmt_value(b.lower),
                        fmt_value(b.upper),
                        fmt_bool(b.converged),
                        b.note.clone().unwrap_or_default(),
                    ]],
                });
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Current) => {
                let v = sys.current()?;
                let (b, c, k) = vector_block(&v, "current");
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Heat) => {
                let v = sys.heat_current()?;
                let (b, c, k) = vector_block(&v, "heat_current");
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Conductance) => {
                let m = sys.conductance()?;
                let (b, c, k) = matrix_block(&m, "conductance", false);
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Noise) => {
                let m = sys.noise_zero_freq()?;
                let (b, c, k) = matrix_block(&m, "noise", true);
                blocks.push(b);
                converged &= c;
                invariants_ok &= k;
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::ChargeDensity) => {
                let (rho, _) = sys.densities()?;
                let (b, c, _) = vector_block(&rho, "charge_density (x-independent)");
                blocks.push(b);
                converged &= c;
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::EnergyDensity) => {
                let (_, eps) = sys.densities()?;
                let (b, c, _) = vector_block(&eps, "energy_density (x-independent)");
                blocks.push(b);
                converged &= c;
            }
            (BuiltSystem::Dirac(_), ObservableRequest::TwoLeadThermalNoise) => {
                return Err(Error::validation(
                    "two_lead_thermal_noise is a Schrödinger observable",
                ));
            }
        }
    }

    Ok(PointReport {
        table: OutputTable {
            metadata: metadata_lines(cfg, digest),
            blocks,
        },
        converged,
        invariants_ok,
    })
}

pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub struct CheckReport {
    pub table: OutputTable,
    pub all_passed: bool,
}

/// Run the property suite against a configuration: S-matrix laws on a probe
/// grid, conservation sums, equilibrium nulls, gauge invariance and noise
/// symmetry.
pub fn run_check(cfg: &RunConfig, digest: &str) -> Result<CheckReport> {
    let mut results: Vec<CheckResult> = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        results.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    };

    let system = cfg.build()?;

    match &system {
        BuiltSystem::Schrodinger(sys) => {
            // S-matrix laws on a log-spaced probe grid.
            let mut worst_unit = 0.0f64;
            let mut worst_ha = 0.0f64;
            for idx in 0..25 {
                let k = 0.01 * (100.0f64 / 0.01).powf(idx as f64 / 24.0);
                let s = sys.s_at(k)?;
                worst_unit = worst_unit.max(s.unitarity_defect().0);
                worst_ha = worst_ha.max(s.adjoint().max_abs_diff(&sys.s_at(-k)?));
            }
            push(
                "smatrix_unitarity",
                worst_unit <= 1e-10,
                format!("max defect {worst_unit:.3e}"),
            );
            push(
                "smatrix_hermitian_analyticity",
                worst_ha <= 1e-10,
                format!("max |S(k)^a - S(-k)| {worst_ha:.3e}"),
            );
            if let Coupling::Spectral(c) = sys.coupling() {
                if c.lambda() != 0.0 {
                    let resid = c
                        .smatrix(c.lambda())
                        .max_abs_diff(c.boundary_matrix().matrix());
                    push(
                        "smatrix_at_lambda_is_boundary_matrix",
                        resid <= 1e-10,
                        format!("|S(lambda) - U| {resid:.3e}"),
                    );
                }
            }

            let j = sys.steady_current()?;
            push(
                "current_kirchhoff",
                j.kirchhoff_ok(),
                format!("residual {:.3e}", j.kirchhoff_residual()),
            );
            let t = sys.heat_current()?;
            push(
                "heat_kirchhoff",
                t.kirchhoff_ok(),
                format!("residual {:.3e}", t.kirchhoff_residual()),
            );
            let p = sys.noise_zero_freq()?;
            push(
                "noise_kirchhoff",
                p.kirchhoff_ok(),
                format!(
                    "row {:.3e} col {:.3e}",
                    p.row_kirchhoff_residual(),
                    p.column_kirchhoff_residual()
                ),
            );
            push(
                "noise_symmetry",
                p.asymmetry() <= 1e-9 * p.max_abs().max(1e-5),
                format!("asymmetry {:.3e}", p.asymmetry()),
            );
            if sys.bank().is_equilibrium() {
                let ok = j.max_abs() <= 1e-10 && t.max_abs() <= 1e-10;
                push(
                    "equilibrium_null",
                    ok,
                    format!("max |J| {:.3e}, max |T| {:.3e}", j.max_abs(), t.max_abs()),
                );
            }
            // Gauge invariance with a fixed, aperiodic set of phases.
            let phases: Vec<f64> = (0..sys.n()).map(|i| 0.7 + 1.3 * i as f64).collect();
            let dressed = cfg_with_gauge(cfg, phases)?;
            if let BuiltSystem::Schrodinger(dsys) = dressed.build()? {
                let jd = dsys.steady_current()?;
                let worst = j
                    .values
                    .iter()
                    .zip(jd.values.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                push(
                    "gauge_invariance",
                    worst <= 1e-12 * j.max_abs().max(1.0),
                    format!("max shift {worst:.3e}"),
                );
            }
        }
        BuiltSystem::Dirac(sys) => {
            let u = sys.dressed()?;
            push(
                "boundary_matrix_unitarity",
                u.unitarity_defect() <= 1e-12,
                format!("defect {:.3e}", u.unitarity_defect()),
            );
            let j = sys.current()?;
            push(
                "current_kirchhoff",
                j.kirchhoff_ok(),
                format!("residual {:.3e}", j.kirchhoff_residual()),
            );
            let t = sys.heat_current()?;
            push(
                "heat_kirchhoff",
                t.kirchhoff_ok(),
                format!("residual {:.3e}", t.kirchhoff_residual()),
            );
            let p = sys.noise_zero_freq()?;
            push(
                "noise_kirchhoff",
                p.kirchhoff_ok(),
                format!(
                    "row {:.3e} col {:.3e}",
                    p.row_kirchhoff_residual(),
                    p.column_kirchhoff_residual()
                ),
            );
            push(
                "noise_symmetry",
                p.asymmetry() <= 1e-9 * p.max_abs().max(1e-5),
                format!("asymmetry {:.3e}", p.asymmetry()),
            );
            let closed = sys.current()?;
            let quad = sys.current_quadrature()?;
            let worst = closed
                .values
                .iter()
                .zip(quad.values.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            push(
                "current_closed_form_vs_quadrature",
                worst <= 1e-8 * closed.max_abs().max(1e-3),
                format!("max gap {worst:.3e}"),
            );
            if sys.charge_conjugation_symmetric() {
                push(
                    "charge_conjugation_null",
                    j.max_abs() <= 1e-14,
                    format!("max |J| {:.3e}", j.max_abs()),
                );
            }
        }
    }

    let all_passed = results.iter().all(|r| r.passed);
    let rows = results
        .into_iter()
        .map(|r| {
            vec![
                r.name,
                if r.passed {
                    "pass".into()
                } else {
                    "FAIL".into()
                },
                r.detail,
            ]
        })
        .collect();
    Ok(CheckReport {
        table: OutputTable {
            metadata: metadata_lines(cfg, digest),
            blocks: vec![Block {
                title: "property checks".into(),
                header: vec!["check".into(), "status".into(), "detail".into()],
                rows,
            }],
        },
        all_passed,
    })
}

fn cfg_with_gauge(cfg: &RunConfig, phases: Vec<f64>) -> Result<RunConfig> {
    let mut out = cfg.clone();
    out.gauge = Some(phases);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    const POINT: &str = r#"
[system]
dynamics = "schrodinger"
charge = 1.0
mass = 1.0

[coupling]
kind = "critical"
u = [ [[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]] ]

[[reservoirs]]
beta = 1.0
mu = 1.0

[[reservoirs]]
beta = 1.0
mu = 0.0

[observables]
requests = ["current", "noise"]
"#;

    #[test]
    fn point_report_contains_expected_current() {
        let cfg = parse_config(POINT).unwrap();
        let digest = config_digest(POINT);
        let report = run_point(&cfg, &digest).unwrap();
        assert!(report.converged);
        assert!(report.invariants_ok);
        let text = report.table.render();
        assert!(text.contains("9.86942890654e-2"), "{text}");
        assert!(text.contains("config-digest: sha256:"));
        assert!(text.contains("bound-state-free: true"));
    }

    #[test]
    fn point_output_is_byte_identical_across_runs() {
        let cfg = parse_config(POINT).unwrap();
        let digest = config_digest(POINT);
        let a = run_point(&cfg, &digest).unwrap().table.render();
        let b = run_point(&cfg, &digest).unwrap().table.render();
        assert_eq!(a, b);
    }

    #[test]
    fn equilibrium_point_reports_zero_currents() {
        let text = POINT.replace("mu = 0.0", "mu = 1.0");
        let cfg = parse_config(&text).unwrap();
        let report = run_point(&cfg, &config_digest(&text)).unwrap();
        let rendered = report.table.render();
        assert!(rendered.contains("0.00000000000e0") || report.invariants_ok);
        if let crate::config::BuiltSystem::Schrodinger(sys) = cfg.build().unwrap() {
            assert!(sys.steady_current().unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn check_suite_passes_on_sound_config() {
        let cfg = parse_config(POINT).unwrap();
        let report = run_check(&cfg, &config_digest(POINT)).unwrap();
        assert!(report.all_passed, "{}", report.table.render());
    }
}
