//! Run configuration: a strict TOML schema, exhaustive validation that
//! reports every failure at once, and construction of the executable system.

use num_complex::Complex64;
use serde::Deserialize;

use crate::dirac::DiracSystem;
use crate::error::{Error, Result};
use crate::numerics::quad::QuadratureSettings;
use crate::reservoir::{DiracReservoirBank, ReservoirBank, Statistics};
use crate::schrodinger::SchrodingerSystem;
use crate::vertex::{Coupling, GaugePhases, TwoLeadParams, UnitaryMatrix, VertexCoupling};

/// One validation failure, addressed to the offending field.
#[derive(Debug, Clone)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl std::fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for issue in &self.0 {
            writeln!(f, "config error: {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dynamics {
    Schrodinger,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableRequest {
    Current,
    Conductance,
    Heat,
    Noise,
    ChargeDensity,
    EnergyDensity,
    TwoLeadThermalNoise,
}

impl ObservableRequest {
    pub fn label(&self) -> &'static str {
        match self {
            ObservableRequest::Current => "current",
            ObservableRequest::Conductance => "conductance",
            ObservableRequest::Heat => "heat",
            ObservableRequest::Noise => "noise",
            ObservableRequest::ChargeDensity => "charge_density",
            ObservableRequest::EnergyDensity => "energy_density",
            ObservableRequest::TwoLeadThermalNoise => "two_lead_thermal_noise",
        }
    }
}

/// Coupling specification, mirroring the three constructor families.
#[derive(Debug, Clone)]
pub enum CouplingSpec {
    Explicit {
        u: Vec<Vec<Complex64>>,
        lambda: f64,
    },
    TwoLead {
        eta1: f64,
        eta2: f64,
        theta: f64,
        phi: f64,
    },
    Critical {
        u: Vec<Vec<Complex64>>,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct ReservoirSpec {
    /// Inverse temperature; infinity encodes T = 0.
    pub beta: f64,
    pub mu: f64,
    pub mu_tilde: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// What a sweep axis actually drives.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisTarget {
    ReservoirBeta(LeadSelector),
    ReservoirTemperature(LeadSelector),
    ReservoirMu(LeadSelector),
    ReservoirMuTilde(LeadSelector),
    CouplingEta1,
    CouplingEta2,
    CouplingTheta,
    CouplingPhi,
    ProbeX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeadSelector {
    One(usize),
    All,
}

#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub path: String,
    pub target: AxisTarget,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepAxis {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub axes: Vec<SweepAxis>,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dynamics: Dynamics,
    pub statistics: Statistics,
    pub mass: f64,
    pub charge: f64,
    pub coupling: CouplingSpec,
    pub reservoirs: Vec<ReservoirSpec>,
    pub gauge: Option<Vec<f64>>,
    pub quadrature: QuadratureSettings,
    pub observables: Vec<ObservableRequest>,
    pub x_grid: Vec<f64>,
    pub sweep: Option<SweepPlan>,
    pub override_bound_states: bool,
}

// ---------------------------------------------------------------------------
// Raw serde layer (strict: unknown keys are errors).

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: RawSystem,
    coupling: RawCoupling,
    reservoirs: Vec<RawReservoir>,
    gauge: Option<RawGauge>,
    quadrature: Option<RawQuadrature>,
    observables: RawObservables,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    dynamics: String,
    statistics: Option<String>,
    mass: Option<f64>,
    charge: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    kind: String,
    lambda: Option<f64>,
    u: Option<Vec<Vec<[f64; 2]>>>,
    eta1: Option<f64>,
    eta2: Option<f64>,
    theta: Option<f64>,
    phi: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawBeta {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReservoir {
    beta: RawBeta,
    mu: f64,
    mu_tilde: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGauge {
    phases: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservables {
    requests: Vec<ObservableRequest>,
    x: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axes: Vec<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    path: String,
    min: f64,
    max: f64,
    points: usize,
    spacing: Option<Spacing>,
}

// ---------------------------------------------------------------------------

fn parse_axis_path(path: &str, n_leads: usize) -> std::result::Result<AxisTarget, String> {
    let parts: Vec<&str> = path.split('.').collect();
    match parts.as_slice() {
        ["reservoirs", lead, field] => {
            let selector = if *lead == "all" {
                LeadSelector::All
            } else {
                let idx: usize = lead
                    .parse()
                    .map_err(|_| format!("lead index '{lead}' is not a number or 'all'"))?;
                if idx == 0 || idx > n_leads {
                    return Err(format!(
                        "lead index {idx} out of range 1..={n_leads}"
                    ));
                }
                LeadSelector::One(idx - 1)
            };
            match *field {
                "beta" => Ok(AxisTarget::ReservoirBeta(selector)),
                "T" | "temperature" => Ok(AxisTarget::ReservoirTemperature(selector)),
                "mu" => Ok(AxisTarget::ReservoirMu(selector)),
                "mu_tilde" => Ok(AxisTarget::ReservoirMuTilde(selector)),
                other => Err(format!("unknown reservoir field '{other}'")),
            }
        }
        ["coupling", field] => match *field {
            "eta1" => Ok(AxisTarget::CouplingEta1),
            "eta2" => Ok(AxisTarget::CouplingEta2),
            "theta" => Ok(AxisTarget::CouplingTheta),
            "phi" => Ok(AxisTarget::CouplingPhi),
            other => Err(format!(
                "coupling sweeps are restricted to the two-lead family (eta1, eta2, theta, phi), got '{other}'"
            )),
        },
        ["observables", "x"] => Ok(AxisTarget::ProbeX),
        _ => Err(format!("unrecognized parameter path '{path}'")),
    }
}

fn complex_rows(raw: &[Vec<[f64; 2]>]) -> Vec<Vec<Complex64>> {
    raw.iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect()
}

/// Parse and validate a configuration document, reporting every failure.
pub fn parse_config(text: &str) -> std::result::Result<RunConfig, ConfigErrors> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        ConfigErrors(vec![ConfigIssue {
            field: "document".into(),
            message: e.to_string(),
        }])
    })?;

    let mut issues: Vec<ConfigIssue> = Vec::new();
    let mut issue = |field: &str, message: String| {
        issues.push(ConfigIssue {
            field: field.into(),
            message,
        });
    };

    let dynamics = match raw.system.dynamics.as_str() {
        "schrodinger" => Dynamics::Schrodinger,
        "dirac" => Dynamics::Dirac,
        other => {
            issue(
                "system.dynamics",
                format!("must be 'schrodinger' or 'dirac', got '{other}'"),
            );
            Dynamics::Schrodinger
        }
    };
    let statistics = match raw.system.statistics.as_deref() {
        None => Statistics::Fermi,
        Some("fermi") => Statistics::Fermi,
        Some("bose") => {
            if dynamics == Dynamics::Dirac {
                issue(
                    "system.statistics",
                    "Dirac dynamics is fermionic; 'bose' applies to Schrödinger only".into(),
                );
            }
            Statistics::Bose
        }
        Some(other) => {
            issue(
                "system.statistics",
                format!("must be 'fermi' or 'bose', got '{other}'"),
            );
            Statistics::Fermi
        }
    };
    let mass = match (dynamics, raw.system.mass) {
        (Dynamics::Schrodinger, None) => {
            issue("system.mass", "required for Schrödinger dynamics".into());
            1.0
        }
        (Dynamics::Schrodinger, Some(m)) => {
            if !(m > 0.0) {
                issue("system.mass", format!("must be positive, got {m}"));
            }
            m
        }
        (Dynamics::Dirac, m) => {
            if m.is_some() {
                issue(
                    "system.mass",
                    "massless Dirac dynamics takes no mass".into(),
                );
            }
            1.0
        }
    };
    let charge = raw.system.charge.unwrap_or(1.0);

    let n_leads = raw.reservoirs.len();
    if n_leads == 0 {
        issue("reservoirs", "at least one reservoir is required".into());
    }

    // Coupling.
    let coupling = match raw.coupling.kind.as_str() {
        "explicit" | "critical" => {
            let kind = raw.coupling.kind.clone();
            for (name, set) in [
                ("eta1", raw.coupling.eta1.is_some()),
                ("eta2", raw.coupling.eta2.is_some()),
                ("theta", raw.coupling.theta.is_some()),
                ("phi", raw.coupling.phi.is_some()),
            ] {
                if set {
                    issue(
                        &format!("coupling.{name}"),
                        format!("not a field of the '{kind}' coupling"),
                    );
                }
            }
            let u = match &raw.coupling.u {
                None => {
                    issue("coupling.u", "matrix entries are required".into());
                    Vec::new()
                }
                Some(rows) => {
                    let u = complex_rows(rows);
                    if u.len() != n_leads && n_leads > 0 {
                        issue(
                            "coupling.u",
                            format!("{} rows for {} reservoirs", u.len(), n_leads),
                        );
                    }
                    match UnitaryMatrix::new(&u) {
                        Err(e) => issue("coupling.u", e.to_string()),
                        Ok(_) => {}
                    }
                    u
                }
            };
            if kind == "explicit" {
                let lambda = raw.coupling.lambda.unwrap_or_else(|| {
                    issue(
                        "coupling.lambda",
                        "required for the 'explicit' coupling".into(),
                    );
                    1.0
                });
                CouplingSpec::Explicit { u, lambda }
            } else {
                if raw.coupling.lambda.is_some() {
                    issue(
                        "coupling.lambda",
                        "the critical coupling is scale free and takes no lambda".into(),
                    );
                }
                CouplingSpec::Critical { u }
            }
        }
        "two_lead" => {
            if raw.coupling.u.is_some() {
                issue(
                    "coupling.u",
                    "not a field of the 'two_lead' coupling".into(),
                );
            }
            if raw.coupling.lambda.is_some() {
                issue(
                    "coupling.lambda",
                    "not a field of the 'two_lead' coupling".into(),
                );
            }
            if n_leads != 2 && n_leads > 0 {
                issue(
                    "coupling.kind",
                    format!("two_lead coupling needs exactly 2 reservoirs, got {n_leads}"),
                );
            }
            let mut get = |name: &str, v: Option<f64>, default: f64| match v {
                Some(x) => x,
                None => {
                    if name != "phi" {
                        issue(
                            &format!("coupling.{name}"),
                            "required for the 'two_lead' coupling".into(),
                        );
                    }
                    default
                }
            };
            let eta1 = get("eta1", raw.coupling.eta1, 0.0);
            let eta2 = get("eta2", raw.coupling.eta2, 0.0);
            let theta = get("theta", raw.coupling.theta, 0.0);
            let phi = get("phi", raw.coupling.phi, 0.0);
            CouplingSpec::TwoLead {
                eta1,
                eta2,
                theta,
                phi,
            }
        }
        other => {
            issue(
                "coupling.kind",
                format!("must be 'explicit', 'two_lead' or 'critical', got '{other}'"),
            );
            CouplingSpec::Critical { u: Vec::new() }
        }
    };

    // Reservoirs.
    let mut reservoirs = Vec::with_capacity(n_leads);
    for (idx, r) in raw.reservoirs.iter().enumerate() {
        let field = format!("reservoirs.{}", idx + 1);
        let beta = match &r.beta {
            RawBeta::Number(b) => {
                if !(*b > 0.0) {
                    issue(
                        &format!("{field}.beta"),
                        format!("must be positive, got {b}"),
                    );
                }
                *b
            }
            RawBeta::Text(t) => match t.as_str() {
                "zero" | "zero-temperature" | "inf" | "infinity" => f64::INFINITY,
                other => {
                    issue(
                        &format!("{field}.beta"),
                        format!("text value must name zero temperature ('zero'), got '{other}'"),
                    );
                    f64::INFINITY
                }
            },
        };
        if statistics == Statistics::Bose && dynamics == Dynamics::Schrodinger && r.mu >= 0.0 {
            issue(
                &format!("{field}.mu"),
                format!("Bose statistics requires mu < 0 strictly, got {}", r.mu),
            );
        }
        match dynamics {
            Dynamics::Dirac => {
                if r.mu_tilde.is_none() {
                    issue(
                        &format!("{field}.mu_tilde"),
                        "required for Dirac dynamics".into(),
                    );
                }
            }
            Dynamics::Schrodinger => {
                if r.mu_tilde.is_some() {
                    issue(
                        &format!("{field}.mu_tilde"),
                        "only Dirac reservoirs carry an antiparticle potential".into(),
                    );
                }
            }
        }
        reservoirs.push(ReservoirSpec {
            beta,
            mu: r.mu,
            mu_tilde: r.mu_tilde,
        });
    }

    // Gauge phases.
    let gauge = match raw.gauge {
        None => None,
        Some(g) => {
            if g.phases.len() != n_leads {
                issue(
                    "gauge.phases",
                    format!("{} phases for {} reservoirs", g.phases.len(), n_leads),
                );
            }
            Some(g.phases)
        }
    };

    // Quadrature overrides.
    let mut quadrature = QuadratureSettings::default();
    if let Some(q) = raw.quadrature {
        if let Some(r) = q.rel_tol {
            if !(r > 0.0) {
                issue("quadrature.rel_tol", format!("must be positive, got {r}"));
            }
            quadrature.rel_tol = r;
        }
        if let Some(a) = q.abs_tol {
            if !(a > 0.0) {
                issue("quadrature.abs_tol", format!("must be positive, got {a}"));
            }
            quadrature.abs_tol = a;
        }
        if let Some(m) = q.max_subdivisions {
            quadrature.max_subdivisions = m;
        }
    }

    // Observables.
    if raw.observables.requests.is_empty() {
        issue(
            "observables.requests",
            "at least one observable is required".into(),
        );
    }
    let x_grid = raw.observables.x.unwrap_or_default();
    let wants_density = raw.observables.requests.iter().any(|o| {
        matches!(
            o,
            ObservableRequest::ChargeDensity | ObservableRequest::EnergyDensity
        )
    });
    if wants_density && dynamics == Dynamics::Schrodinger && x_grid.is_empty() {
        issue(
            "observables.x",
            "density profiles need at least one probe distance x > 0".into(),
        );
    }
    for &x in &x_grid {
        if !(x > 0.0) {
            issue(
                "observables.x",
                format!("probe distances must be > 0, got {x}"),
            );
        }
    }
    if raw
        .observables
        .requests
        .iter()
        .any(|o| matches!(o, ObservableRequest::TwoLeadThermalNoise))
    {
        if !matches!(coupling, CouplingSpec::TwoLead { .. }) {
            issue(
                "observables.requests",
                "two_lead_thermal_noise needs a two_lead coupling".into(),
            );
        }
        if dynamics != Dynamics::Schrodinger {
            issue(
                "observables.requests",
                "two_lead_thermal_noise is a Schrödinger observable".into(),
            );
        }
    }

    // Sweep.
    let sweep = match raw.sweep {
        None => None,
        Some(s) => {
            if s.axes.is_empty() || s.axes.len() > 2 {
                issue(
                    "sweep.axes",
                    format!("1 or 2 axes supported, got {}", s.axes.len()),
                );
            }
            let mut axes = Vec::new();
            for (idx, ax) in s.axes.iter().enumerate() {
                let field = format!("sweep.axes.{}", idx + 1);
                let spacing = ax.spacing.unwrap_or(Spacing::Linear);
                if ax.points < 2 {
                    issue(&format!("{field}.points"), "need at least 2 points".into());
                }
                if !(ax.min < ax.max) {
                    issue(
                        &format!("{field}.min"),
                        format!("min < max required, got [{}, {}]", ax.min, ax.max),
                    );
                }
                if spacing == Spacing::Log && !(ax.min > 0.0) {
                    issue(
                        &format!("{field}.spacing"),
                        "log spacing needs min > 0".into(),
                    );
                }
                match parse_axis_path(&ax.path, n_leads) {
                    Err(msg) => issue(&format!("{field}.path"), msg),
                    Ok(target) => {
                        if matches!(
                            target,
                            AxisTarget::CouplingEta1
                                | AxisTarget::CouplingEta2
                                | AxisTarget::CouplingTheta
                                | AxisTarget::CouplingPhi
                        ) && !matches!(coupling, CouplingSpec::TwoLead { .. })
                        {
                            issue(
                                &format!("{field}.path"),
                                "coupling sweeps need a two_lead coupling".into(),
                            );
                        }
                        if matches!(target, AxisTarget::ReservoirMuTilde(_))
                            && dynamics != Dynamics::Dirac
                        {
                            issue(
                                &format!("{field}.path"),
                                "mu_tilde exists for Dirac dynamics only".into(),
                            );
                        }
                        axes.push(SweepAxis {
                            path: ax.path.clone(),
                            target,
                            min: ax.min,
                            max: ax.max,
                            points: ax.points.max(2),
                            spacing,
                        });
                    }
                }
            }
            Some(SweepPlan { axes })
        }
    };

    if !issues.is_empty() {
        return Err(ConfigErrors(issues));
    }
    Ok(RunConfig {
        dynamics,
        statistics,
        mass,
        charge,
        coupling,
        reservoirs,
        gauge,
        quadrature,
        observables: raw.observables.requests,
        x_grid,
        sweep,
        override_bound_states: false,
    })
}

/// An executable system built from a configuration.
pub enum BuiltSystem {
    Schrodinger(SchrodingerSystem),
    Dirac(DiracSystem),
}

impl RunConfig {
    /// Apply a sweep-axis value, producing the modified configuration.
    pub fn with_axis_value(&self, target: &AxisTarget, value: f64) -> Result<RunConfig> {
        let mut cfg = self.clone();
        let set_lead =
            |cfg: &mut RunConfig, sel: &LeadSelector, f: &dyn Fn(&mut ReservoirSpec)| match sel {
                LeadSelector::One(i) => f(&mut cfg.reservoirs[*i]),
                LeadSelector::All => cfg.reservoirs.iter_mut().for_each(f),
            };
        match target {
            AxisTarget::ReservoirBeta(sel) => {
                if !(value > 0.0) {
                    return Err(Error::domain(format!(
                        "swept beta must stay positive, got {value}"
                    )));
                }
                set_lead(&mut cfg, sel, &|r| r.beta = value);
            }
            AxisTarget::ReservoirTemperature(sel) => {
                if !(value > 0.0) {
                    return Err(Error::domain(format!(
                        "swept temperature must stay positive, got {value}"
                    )));
                }
                set_lead(&mut cfg, sel, &|r| r.beta = 1.0 / value);
            }
            AxisTarget::ReservoirMu(sel) => set_lead(&mut cfg, sel, &|r| r.mu = value),
            AxisTarget::ReservoirMuTilde(sel) => {
                set_lead(&mut cfg, sel, &|r| r.mu_tilde = Some(value))
            }
            AxisTarget::CouplingEta1
            | AxisTarget::CouplingEta2
            | AxisTarget::CouplingTheta
            | AxisTarget::CouplingPhi => match &mut cfg.coupling {
                CouplingSpec::TwoLead {
                    eta1,
                    eta2,
                    theta,
                    phi,
                } => match target {
                    AxisTarget::CouplingEta1 => *eta1 = value,
                    AxisTarget::CouplingEta2 => *eta2 = value,
                    AxisTarget::CouplingTheta => *theta = value,
                    AxisTarget::CouplingPhi => *phi = value,
                    _ => unreachable!(),
                },
                _ => return Err(Error::domain("coupling sweeps need a two_lead coupling")),
            },
            AxisTarget::ProbeX => {
                if !(value > 0.0) {
                    return Err(Error::domain(format!(
                        "swept x must stay positive, got {value}"
                    )));
                }
                cfg.x_grid = vec![value];
            }
        }
        Ok(cfg)
    }

    pub fn build(&self) -> Result<BuiltSystem> {
        let coupling = match &self.coupling {
            CouplingSpec::Explicit { u, lambda } => {
                Coupling::Spectral(VertexCoupling::new(UnitaryMatrix::new(u)?, *lambda)?)
            }
            CouplingSpec::TwoLead {
                eta1,
                eta2,
                theta,
                phi,
            } => Coupling::TwoLead(TwoLeadParams::new(*eta1, *eta2, *theta, *phi)?),
            CouplingSpec::Critical { u } => Coupling::Critical(UnitaryMatrix::new(u)?),
        };
        let gauge = match &self.gauge {
            None => None,
            Some(phases) => Some(GaugePhases::new(phases.clone())?),
        };
        match self.dynamics {
            Dynamics::Schrodinger => {
                let bank = ReservoirBank::new(
                    self.reservoirs.iter().map(|r| r.beta).collect(),
                    self.reservoirs.iter().map(|r| r.mu).collect(),
                    self.statistics,
                )?;
                let mut sys =
                    SchrodingerSystem::new(self.mass, self.charge, coupling, bank, gauge)?
                        .with_quadrature(self.quadrature);
                if self.override_bound_states {
                    sys = sys.with_bound_state_override();
                }
                Ok(BuiltSystem::Schrodinger(sys))
            }
            Dynamics::Dirac => {
                let u = match &self.coupling {
                    CouplingSpec::Critical { u } => UnitaryMatrix::new(u)?,
                    _ => {
                        return Err(Error::validation(
                            "Dirac dynamics is scale invariant; use the 'critical' coupling",
                        ))
                    }
                };
                let bank = DiracReservoirBank::new(
                    self.reservoirs.iter().map(|r| r.beta).collect(),
                    self.reservoirs.iter().map(|r| r.mu).collect(),
                    self.reservoirs
                        .iter()
                        .map(|r| r.mu_tilde.unwrap_or(0.0))
                        .collect(),
                )?;
                Ok(BuiltSystem::Dirac(
                    DiracSystem::new(self.charge, u, bank, gauge)?.with_quadrature(self.quadrature),
                ))
            }
        }
    }
}
