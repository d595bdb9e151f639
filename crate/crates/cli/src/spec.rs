//! Run specification: flags merged over the config file, then validated.

use liegyro::closed_form::RigidParams;
use liegyro::flow::FlowConfig;
use liegyro::rk4::IntegratorConfig;
use liegyro::{rigid_initial_state, BodyState, DiagInertia, Mat3, PrincipalMoments, Vec3};

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Lie,
    Rk4,
    All,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "closed" => Ok(Method::Closed),
            "lie" => Ok(Method::Lie),
            "rk4" => Ok(Method::Rk4),
            "all" => Ok(Method::All),
            _ => Err(CliError::Usage(format!("method must be closed|lie|rk4|all, got {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Lie => "lie",
            Method::Rk4 => "rk4",
            Method::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    /// `R₀ = 1`, `Ω₀ = m/I`.
    Rigid(Vec3),
    Explicit(BodyState),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub method: Method,
    pub moments: PrincipalMoments,
    pub init: Init,
    pub t_end: f64,
    pub samples: usize,
    pub flow: FlowConfig,
    pub integrator: IntegratorConfig,
}

/// Raw string values as they arrive from flags.
#[derive(Debug, Clone, Default)]
pub struct RawRun {
    pub method: Option<String>,
    pub inertia: Option<String>,
    pub momentum: Option<String>,
    pub omega0: Option<String>,
    pub r0: Option<String>,
    pub t_end: Option<String>,
    pub samples: Option<String>,
    pub order: Option<String>,
    pub abs_tol: Option<String>,
    pub step_safety: Option<String>,
    pub dt: Option<String>,
}

pub fn parse_list<const N: usize>(s: &str, what: &str) -> Result<[f64; N], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::Usage(format!("{what} needs {N} comma-separated values, got {}", parts.len())));
    }
    let mut out = [0.0f64; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| CliError::Usage(format!("{what}: {p:?} is not a number")))?;
        if !slot.is_finite() {
            return Err(CliError::Usage(format!("{what}: values must be finite")));
        }
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?}")))
}

impl RunSpec {
    pub fn build(raw: RawRun, file: &ConfigFile, default_method: Method) -> Result<Self, CliError> {
        let method = match file.pick(raw.method, "method") {
            Some(m) => Method::parse(&m)?,
            None => default_method,
        };
        let inertia = file
            .pick(raw.inertia, "inertia")
            .ok_or_else(|| CliError::Usage("--inertia I1,I2,I3 is required".into()))?;
        let [i1, i2, i3] = parse_list::<3>(&inertia, "inertia")?;
        let moments = PrincipalMoments::new(i1, i2, i3).map_err(|e| CliError::Usage(e.to_string()))?;

        let momentum = file.pick(raw.momentum, "momentum");
        let omega0 = file.pick(raw.omega0, "omega0");
        let r0 = file.pick(raw.r0, "r0");
        let init = match (momentum, omega0, r0) {
            (Some(m), None, None) => {
                if !moments.is_symmetric() {
                    return Err(CliError::Usage("rigid mode (--momentum) requires i1 = i2".into()));
                }
                Init::Rigid(Vec3::from_array(parse_list::<3>(&m, "momentum")?))
            }
            (None, Some(w), r) => {
                let w = Vec3::from_array(parse_list::<3>(&w, "omega0")?);
                let r = match r {
                    Some(r) => Mat3::from_row_major(parse_list::<9>(&r, "r0")?),
                    None => Mat3::IDENTITY,
                };
                Init::Explicit(BodyState::new(w, r).map_err(|e| CliError::Usage(format!("r0: {e}")))?)
            }
            (None, None, Some(_)) => return Err(CliError::Usage("--r0 needs --omega0".into())),
            (None, None, None) => {
                return Err(CliError::Usage("give --momentum (rigid mode) or --omega0 [--r0]".into()))
            }
            (Some(_), _, _) => {
                return Err(CliError::Usage("--momentum excludes --omega0/--r0".into()))
            }
        };
        if matches!(method, Method::Closed | Method::All) && !moments.is_symmetric() {
            return Err(CliError::Usage(format!(
                "method={} needs the closed form, which requires i1 = i2",
                method.name()
            )));
        }

        let t_end: f64 = match file.pick(raw.t_end, "t-end") {
            Some(s) => parse_num(&s, "t-end")?,
            None => 1.0,
        };
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(CliError::Usage(format!("t-end must be finite and ≥ 0, got {t_end}")));
        }
        let samples: usize = match file.pick(raw.samples, "samples") {
            Some(s) => parse_num(&s, "samples")?,
            None => 101,
        };
        if samples < 2 {
            return Err(CliError::Usage(format!("samples must be ≥ 2, got {samples}")));
        }

        let mut flow = FlowConfig::default();
        if let Some(s) = file.pick(raw.order, "order") {
            flow.order = parse_num(&s, "order")?;
        }
        if let Some(s) = file.pick(raw.abs_tol, "abs-tol") {
            flow.abs_tol = parse_num(&s, "abs-tol")?;
        }
        if let Some(s) = file.pick(raw.step_safety, "step-safety") {
            flow.step_safety = parse_num(&s, "step-safety")?;
        }
        flow.validate().map_err(|e| CliError::Usage(e.to_string()))?;

        let mut integrator = IntegratorConfig::default();
        if let Some(s) = file.pick(raw.dt, "dt") {
            integrator.dt = parse_num(&s, "dt")?;
        }
        integrator.validate().map_err(|e| CliError::Usage(e.to_string()))?;

        Ok(RunSpec { method, moments, init, t_end, samples, flow, integrator })
    }

    pub fn initial_state(&self) -> BodyState {
        match self.init {
            Init::Rigid(m) => rigid_initial_state(self.moments, m),
            Init::Explicit(s) => s,
        }
    }

    /// `DiagInertia` when `i1 = i2`.
    pub fn diag(&self) -> Option<DiagInertia> {
        DiagInertia::try_from(self.moments).ok()
    }

    pub fn rigid_params(&self) -> Option<RigidParams> {
        match (self.init, self.diag()) {
            (Init::Rigid(m), Some(d)) => Some(RigidParams::new(&d, m)),
            _ => None,
        }
    }
}
