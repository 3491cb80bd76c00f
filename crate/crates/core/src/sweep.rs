//! Parameter sweeps over 1 or 2 axes, evaluated row-major over the grid.
//! Grid points are independent and run on a rayon pool; per-point failures
//! are recorded in the error column and the sweep continues.

use rayon::prelude::*;

use crate::config::{BuiltSystem, ObservableRequest, RunConfig};
use crate::error::{Error, Result};
use crate::run::metadata_lines;
use crate::schrodinger::thermal_noise_bounds_two_lead_from_config;
use crate::table::{fmt_bool, fmt_value, Block, OutputTable};

/// Column names for the flattened observable values of one grid point.
fn value_columns(cfg: &RunConfig) -> Vec<String> {
    let n = cfg.reservoirs.len();
    let mut cols = Vec::new();
    for req in &cfg.observables {
        match req {
            ObservableRequest::Current => {
                cols.extend((1..=n).map(|i| format!("current_{i}")));
            }
            ObservableRequest::Heat => {
                cols.extend((1..=n).map(|i| format!("heat_{i}")));
            }
            ObservableRequest::Conductance => {
                for i in 1..=n {
                    for j in 1..=n {
                        cols.push(format!("conductance_{i}_{j}"));
                    }
                }
            }
            ObservableRequest::Noise => {
                for i in 1..=n {
                    for j in 1..=n {
                        cols.push(format!("noise_{i}_{j}"));
                    }
                }
            }
            ObservableRequest::ChargeDensity => match cfg.dynamics {
                crate::config::Dynamics::Schrodinger => {
                    for i in 1..=n {
                        cols.push(format!("charge_density_total_{i}"));
                        cols.push(format!("charge_density_osc_{i}"));
                        cols.push(format!("charge_density_neq_{i}"));
                    }
                }
                crate::config::Dynamics::Dirac => {
                    cols.extend((1..=n).map(|i| format!("charge_density_{i}")));
                }
            },
            ObservableRequest::EnergyDensity => match cfg.dynamics {
                crate::config::Dynamics::Schrodinger => {
                    for i in 1..=n {
                        cols.push(format!("energy_density_total_{i}"));
                        cols.push(format!("energy_density_sb_{i}"));
                    }
                }
                crate::config::Dynamics::Dirac => {
                    cols.extend((1..=n).map(|i| format!("energy_density_{i}")));
                }
            },
            ObservableRequest::TwoLeadThermalNoise => {
                cols.push("thermal_noise_value".into());
                cols.push("thermal_noise_lower".into());
                cols.push("thermal_noise_upper".into());
            }
        }
    }
    cols
}

/// Flattened observable values at one configuration, in the column order of
/// `value_columns`. Shared by sweeps and by single-point re-evaluation so a
/// sweep cell always reproduces the point value exactly.
pub fn evaluate_flat(cfg: &RunConfig) -> Result<(Vec<f64>, bool)> {
    let system = cfg.build()?;
    let mut out = Vec::new();
    let mut converged = true;
    for req in &cfg.observables {
        match (&system, req) {
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Current) => {
                let v = sys.steady_current()?;
                converged &= v.converged;
                out.extend(v.values);
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Heat) => {
                let v = sys.heat_current()?;
                converged &= v.converged;
                out.extend(v.values);
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Conductance) => {
                let m = sys.conductance()?;
                converged &= m.converged;
                out.extend(m.values.iter().flatten());
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::Noise) => {
                let m = sys.noise_zero_freq()?;
                converged &= m.converged;
                out.extend(m.values.iter().flatten());
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::ChargeDensity) => {
                let x = *cfg
                    .x_grid
                    .first()
                    .ok_or_else(|| Error::validation("density sweeps need a probe distance x"))?;
                for i in 0..sys.n() {
                    let p = sys.charge_density_profile(i, x)?;
                    converged &= p.converged;
                    out.push(p.total);
                    out.push(p.oscillating);
                    out.push(p.nonequilibrium_shift);
                }
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::EnergyDensity) => {
                let x = *cfg
                    .x_grid
                    .first()
                    .ok_or_else(|| Error::validation("density sweeps need a probe distance x"))?;
                for i in 0..sys.n() {
                    let p = sys.energy_density_profile(i, x)?;
                    converged &= p.converged;
                    out.push(p.total);
                    out.push(p.stefan_boltzmann);
                }
            }
            (BuiltSystem::Schrodinger(sys), ObservableRequest::TwoLeadThermalNoise) => {
                let b = thermal_noise_bounds_two_lead_from_config(sys)?;
                converged &= b.converged;
                out.push(b.value);
                out.push(b.lower);
                out.push(b.upper);
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Current) => {
                let v = sys.current()?;
                out.extend(v.values);
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Heat) => {
                let v = sys.heat_current()?;
                out.extend(v.values);
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Conductance) => {
                let m = sys.conductance()?;
                out.extend(m.values.iter().flatten());
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::Noise) => {
                let m = sys.noise_zero_freq()?;
                converged &= m.converged;
                out.extend(m.values.iter().flatten());
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::ChargeDensity) => {
                let (rho, _) = sys.densities()?;
                out.extend(rho.values);
            }
            (BuiltSystem::Dirac(sys), ObservableRequest::EnergyDensity) => {
                let (_, eps) = sys.densities()?;
                out.extend(eps.values);
            }
            (BuiltSystem::Dirac(_), ObservableRequest::TwoLeadThermalNoise) => {
                return Err(Error::validation(
                    "two_lead_thermal_noise is a Schrödinger observable",
                ));
            }
        }
    }
    Ok((out, converged))
}

pub struct SweepReport {
    pub table: OutputTable,
    pub converged: bool,
    pub failures: usize,
}

/// Evaluate the sweep grid row-major (first axis outer). With two axes each
/// row carries the (x, y, value...) triple form used for contour data.
pub fn run_sweep(cfg: &RunConfig, digest: &str, workers: Option<usize>) -> Result<SweepReport> {
    let plan = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::validation("configuration has no [sweep] section"))?;

    let grids: Vec<Vec<f64>> = plan.axes.iter().map(|ax| ax.grid()).collect();
    let mut points: Vec<Vec<f64>> = Vec::new();
    match grids.len() {
        1 => {
            for &a in &grids[0] {
                points.push(vec![a]);
            }
        }
        2 => {
            for &a in &grids[0] {
                for &b in &grids[1] {
                    points.push(vec![a, b]);
                }
            }
        }
        _ => return Err(Error::validation("sweeps support 1 or 2 axes")),
    }

    let eval_point = |coords: &Vec<f64>| -> (Vec<f64>, bool, String) {
        let mut local = cfg.clone();
        for (axis, &value) in plan.axes.iter().zip(coords.iter()) {
            match local.with_axis_value(&axis.target, value) {
                Ok(next) => local = next,
                Err(e) => return (Vec::new(), false, e.to_string()),
            }
        }
        match evaluate_flat(&local) {
            Ok((values, converged)) => (values, converged, String::new()),
            Err(e) => (Vec::new(), false, e.to_string()),
        }
    };

    let results: Vec<(Vec<f64>, bool, String)> = match workers {
        Some(1) => points.iter().map(eval_point).collect(),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::internal(format!("worker pool: {e}")))?;
            pool.install(|| points.par_iter().map(eval_point).collect())
        }
        None => points.par_iter().map(eval_point).collect(),
    };

    let cols = value_columns(cfg);
    let mut header: Vec<String> = plan.axes.iter().map(|ax| ax.path.clone()).collect();
    header.extend(cols.iter().cloned());
    header.push("converged".into());
    header.push("error".into());

    let mut rows = Vec::with_capacity(points.len());
    let mut converged_all = true;
    let mut failures = 0usize;
    for (coords, (values, converged, error)) in points.iter().zip(results.iter()) {
        let mut row: Vec<String> = coords.iter().map(|&v| fmt_value(v)).collect();
        if error.is_empty() {
            row.extend(values.iter().map(|&v| fmt_value(v)));
            row.push(fmt_bool(*converged));
            row.push(String::new());
            converged_all &= *converged;
        } else {
            row.extend(std::iter::repeat(String::new()).take(cols.len()));
            row.push(fmt_bool(false));
            row.push(error.replace(',', ";"));
            failures += 1;
        }
        rows.push(row);
    }

    Ok(SweepReport {
        table: OutputTable {
            metadata: metadata_lines(cfg, digest),
            blocks: vec![Block {
                title: format!(
                    "sweep over {}",
                    plan.axes
                        .iter()
                        .map(|a| a.path.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                header,
                rows,
            }],
        },
        converged: converged_all,
        failures,
    })
}
