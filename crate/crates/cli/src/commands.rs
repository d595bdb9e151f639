use std::path::{Path, PathBuf};

use liegyro::closed_form::{omega_solution, r_general, rigid_motion, GeneralSolutionInput};
use liegyro::flow::{lie_propagate_grid, NumericField};
use liegyro::poly::ep;
use liegyro::rk4::integrate_grid;
use liegyro::trajectory::{uniform_grid, Sample, Trajectory};
use liegyro::verify::{self, Suite};
use liegyro::BodyState;
use serde_json::json;

use crate::error::CliError;
use crate::spec::{Init, Method, RunSpec};

/// Worst closed-vs-lie difference tolerated by `compare`.
pub const LIE_THRESHOLD: f64 = 1e-8;
/// Worst closed-vs-rk4 difference tolerated by `compare`.
pub const RK4_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("format must be csv|json, got {s:?}"))),
        }
    }

    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn states(spec: &RunSpec, method: Method, times: &[f64]) -> Result<Vec<BodyState>, CliError> {
    let s0 = spec.initial_state();
    match method {
        Method::Closed => {
            let diag = spec.diag().ok_or_else(|| CliError::Usage("closed form requires i1 = i2".into()))?;
            match spec.init {
                Init::Rigid(m) => times
                    .iter()
                    .map(|&t| rigid_motion(&diag, m, t).map_err(|e| CliError::Numerical(e.to_string())))
                    .collect(),
                Init::Explicit(s) => {
                    let inp = GeneralSolutionInput::new(diag, s.omega, s.r)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(times
                        .iter()
                        .map(|&t| BodyState::from_parts_unchecked(omega_solution(&inp, t), r_general(&inp, t)))
                        .collect())
                }
            }
        }
        Method::Lie => {
            let field = ep::field_from_f64(spec.moments.0)
                .ok_or_else(|| CliError::Usage("inertia must be finite".into()))?;
            let zs = lie_propagate_grid(&NumericField::from(&field), &s0.to_array(), times, &spec.flow)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(zs.iter().map(|z| BodyState::from_array(z)).collect())
        }
        Method::Rk4 => integrate_grid(spec.moments, &s0, times, &spec.integrator)
            .map_err(|e| CliError::Numerical(e.to_string())),
        Method::All => unreachable!("expanded by the caller"),
    }
}

fn metadata(spec: &RunSpec, method: Method, timestamp: bool) -> Vec<(String, String)> {
    let mut meta = vec![
        ("method".to_string(), method.name().to_string()),
        ("inertia".into(), list(&spec.moments.0)),
    ];
    match spec.init {
        Init::Rigid(m) => meta.push(("momentum".into(), list(&m.to_array()))),
        Init::Explicit(s) => {
            meta.push(("omega0".into(), list(&s.omega.to_array())));
            meta.push(("r0".into(), list(&s.r.to_row_major())));
        }
    }
    meta.push(("t_end".into(), spec.t_end.to_string()));
    meta.push(("samples".into(), spec.samples.to_string()));
    match method {
        Method::Lie => {
            meta.push(("order".into(), spec.flow.order.to_string()));
            meta.push(("abs_tol".into(), spec.flow.abs_tol.to_string()));
            meta.push(("step_safety".into(), spec.flow.step_safety.to_string()));
        }
        Method::Rk4 => {
            meta.push(("dt".into(), spec.integrator.dt.to_string()));
            meta.push(("renormalize".into(), spec.integrator.renormalize.to_string()));
        }
        _ => {}
    }
    if let Some(p) = spec.rigid_params() {
        meta.push(("k".into(), p.k.to_string()));
        meta.push(("phi".into(), p.phi.to_string()));
        meta.push(("mhat".into(), list(&p.mhat.to_array())));
    }
    if timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        meta.push(("generated_unix".into(), secs.to_string()));
    }
    meta
}

pub fn trajectory(spec: &RunSpec, method: Method, timestamp: bool) -> Result<Trajectory, CliError> {
    let times = uniform_grid(spec.t_end, spec.samples);
    let samples: Vec<Sample> = states(spec, method, &times)?
        .into_iter()
        .zip(&times)
        .map(|(s, &t)| Sample::new(spec.moments, t, s))
        .collect();
    if samples.iter().any(|s| s.to_row().iter().any(|v| !v.is_finite())) {
        return Err(CliError::Numerical(format!("{} produced a non-finite state", method.name())));
    }
    let mut traj = Trajectory::new(samples).map_err(|e| CliError::Numerical(e.to_string()))?;
    traj.metadata = metadata(spec, method, timestamp);
    Ok(traj)
}

fn methods(m: Method) -> Vec<Method> {
    match m {
        Method::All => vec![Method::Closed, Method::Lie, Method::Rk4],
        m => vec![m],
    }
}

fn render(traj: &Trajectory, format: Format) -> String {
    match format {
        Format::Csv => traj.to_csv(),
        Format::Json => traj.to_json() + "\n",
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// `out.csv` → `out.closed.csv` etc. for multi-method runs.
pub fn method_path(out: &Path, method: Method, format: Format) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| format.ext().into());
    out.with_file_name(format!("{stem}.{}.{ext}", method.name()))
}

/// Returns text for stdout (empty when everything went to files).
pub fn simulate(spec: &RunSpec, out: Option<&Path>, format: Format, timestamp: bool) -> Result<String, CliError> {
    let trajs: Vec<(Method, Trajectory)> = methods(spec.method)
        .into_iter()
        .map(|m| trajectory(spec, m, timestamp).map(|t| (m, t)))
        .collect::<Result<_, _>>()?;
    match out {
        Some(path) if trajs.len() == 1 => {
            write(path, &render(&trajs[0].1, format))?;
            Ok(String::new())
        }
        Some(path) => {
            for (m, t) in &trajs {
                write(&method_path(path, *m, format), &render(t, format))?;
            }
            Ok(String::new())
        }
        None if trajs.len() == 1 => Ok(render(&trajs[0].1, format)),
        None => Ok(match format {
            Format::Csv => trajs.iter().map(|(_, t)| t.to_csv()).collect::<Vec<_>>().join("\n"),
            Format::Json => {
                let obj: serde_json::Map<String, serde_json::Value> =
                    trajs.iter().map(|(m, t)| (m.name().to_string(), t.to_json_value())).collect();
                serde_json::to_string_pretty(&obj).expect("finite values") + "\n"
            }
        }),
    }
}

const PAIRS: [(&str, usize, usize); 3] = [("closed_lie", 0, 1), ("closed_rk4", 0, 2), ("lie_rk4", 1, 2)];

/// Per-sample `[R, Ω]` differences for each method pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub times: Vec<f64>,
    pub rows: Vec<[f64; 6]>,
    pub worst: [f64; 6],
}

impl Comparison {
    pub fn closed_lie(&self) -> f64 {
        self.worst[0].max(self.worst[1])
    }

    pub fn closed_rk4(&self) -> f64 {
        self.worst[2].max(self.worst[3])
    }

    fn columns() -> Vec<String> {
        let mut c = vec!["t".to_string()];
        for (name, _, _) in PAIRS {
            c.push(format!("{name}_R"));
            c.push(format!("{name}_W"));
        }
        c
    }

    pub fn to_csv(&self) -> String {
        let mut out = Self::columns().join(",") + "\n";
        let fmt = |r: &[f64; 6]| r.iter().map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(",");
        for (t, r) in self.times.iter().zip(&self.rows) {
            out += &format!("{t:.16e},{}\n", fmt(r));
        }
        out += &format!("worst,{}\n", fmt(&self.worst));
        out
    }

    pub fn to_json(&self) -> String {
        let cols = Self::columns();
        let rec = |t: serde_json::Value, r: &[f64; 6]| {
            let mut m = serde_json::Map::new();
            m.insert(cols[0].clone(), t);
            for (c, v) in cols[1..].iter().zip(r) {
                m.insert(c.clone(), json!(v));
            }
            serde_json::Value::Object(m)
        };
        let rows: Vec<_> = self.times.iter().zip(&self.rows).map(|(t, r)| rec(json!(t), r)).collect();
        let v = json!({
            "rows": rows,
            "worst": rec(json!("worst"), &self.worst),
            "thresholds": { "closed_lie": LIE_THRESHOLD, "closed_rk4": RK4_THRESHOLD },
        });
        serde_json::to_string_pretty(&v).expect("finite values") + "\n"
    }
}

pub fn compare(spec: &RunSpec) -> Result<Comparison, CliError> {
    let times = uniform_grid(spec.t_end, spec.samples);
    let runs = [
        states(spec, Method::Closed, &times)?,
        states(spec, Method::Lie, &times)?,
        states(spec, Method::Rk4, &times)?,
    ];
    let mut rows = Vec::with_capacity(times.len());
    let mut worst = [0.0f64; 6];
    for n in 0..times.len() {
        let mut row = [0.0; 6];
        for (p, &(_, a, b)) in PAIRS.iter().enumerate() {
            let (x, y) = (&runs[a][n], &runs[b][n]);
            row[2 * p] = x.r.max_abs_diff(&y.r);
            row[2 * p + 1] = x.omega.max_abs_diff(y.omega);
        }
        for (w, v) in worst.iter_mut().zip(row) {
            if v.is_nan() {
                return Err(CliError::Numerical("non-finite difference".into()));
            }
            *w = w.max(v);
        }
        rows.push(row);
    }
    Ok(Comparison { times, rows, worst })
}

/// Report lines and whether every check passed.
pub fn verify(suite: Suite, seed: u64) -> (String, bool) {
    let checks = verify::run(suite, seed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut out: String = checks.iter().map(|c| format!("{c}\n")).collect();
    out += &format!("summary: {} passed, {failed} failed (seed {seed})\n", checks.len() - failed);
    (out, failed == 0)
}
