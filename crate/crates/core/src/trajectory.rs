//! Sampled trajectories and their CSV / JSON serialisation.
//!
//! Rows are `(t, Ω₁..Ω₃, R₁₁..R₃₃, E, m₁..m₃)`. Values are written with 17
//! significant digits, so parsing a written file reproduces every field bit
//! for bit.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::body::{invariants_of, BodyState, MotionInvariants, PrincipalMoments};

pub const COLUMNS: [&str; 17] = [
    "t", "W1", "W2", "W3", "R11", "R12", "R13", "R21", "R22", "R23", "R31", "R32", "R33", "E",
    "m1", "m2", "m3",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("times must be strictly increasing (row {row})")]
    NotIncreasing { row: usize },
    #[error("missing header row")]
    MissingHeader,
    #[error("unexpected header: {0}")]
    BadHeader(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: BodyState,
    pub invariants: MotionInvariants,
}

impl Sample {
    pub fn new(moments: PrincipalMoments, t: f64, state: BodyState) -> Self {
        Sample { t, state, invariants: invariants_of(moments, &state) }
    }

    pub fn to_row(&self) -> [f64; 17] {
        let mut row = [0.0; 17];
        row[0] = self.t;
        row[1..13].copy_from_slice(&self.state.to_array());
        row[13] = self.invariants.energy;
        row[14..17].copy_from_slice(&self.invariants.momentum.to_array());
        row
    }

    pub fn from_row(row: &[f64; 17]) -> Self {
        Sample {
            t: row[0],
            state: BodyState::from_array(&row[1..13]),
            invariants: MotionInvariants {
                energy: row[13],
                momentum: crate::body::Vec3::new(row[14], row[15], row[16]),
                omega3: row[3],
            },
        }
    }
}

/// Ordered samples plus free-form `key = value` metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub metadata: Vec<(String, String)>,
    samples: Vec<Sample>,
}

impl Trajectory {
    /// Times must increase strictly, except on a zero-length span where every
    /// sample sits at the same instant.
    pub fn new(samples: Vec<Sample>) -> Result<Self, TrajectoryError> {
        let degenerate = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) => a.t == b.t,
            _ => true,
        };
        for (row, w) in samples.windows(2).enumerate() {
            let ok = if degenerate { w[1].t == w[0].t } else { w[1].t > w[0].t };
            if !ok {
                return Err(TrajectoryError::NotIncreasing { row: row + 1 });
            }
        }
        Ok(Trajectory { metadata: Vec::new(), samples })
    }

    pub fn with_metadata(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str(&COLUMNS.join(","));
        out.push('\n');
        for s in &self.samples {
            let fields: Vec<String> = s.to_row().iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TrajectoryError> {
        let mut metadata = Vec::new();
        let mut samples = Vec::new();
        let mut header_seen = false;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.split_once('=') {
                    metadata.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !header_seen {
                if line.trim() != COLUMNS.join(",") {
                    return Err(TrajectoryError::BadHeader(line.to_string()));
                }
                header_seen = true;
                continue;
            }
            let mut row = [0.0; 17];
            let mut n = 0;
            for field in line.split(',') {
                if n == 17 {
                    return Err(TrajectoryError::Parse { line: line_no, msg: "too many fields".into() });
                }
                row[n] = field.trim().parse().map_err(|e| TrajectoryError::Parse {
                    line: line_no,
                    msg: format!("{field:?}: {e}"),
                })?;
                n += 1;
            }
            if n != 17 {
                return Err(TrajectoryError::Parse { line: line_no, msg: format!("{n} fields, expected 17") });
            }
            samples.push(Sample::from_row(&row));
        }
        if !header_seen {
            return Err(TrajectoryError::MissingHeader);
        }
        let mut traj = Trajectory::new(samples)?;
        traj.metadata = metadata;
        Ok(traj)
    }

    pub fn to_json_value(&self) -> Value {
        let meta: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .samples
            .iter()
            .map(|s| {
                let rec: Map<String, Value> = COLUMNS
                    .iter()
                    .zip(s.to_row())
                    .map(|(c, v)| (c.to_string(), Value::from(v)))
                    .collect();
                Value::Object(rec)
            })
            .collect();
        serde_json::json!({ "metadata": meta, "rows": rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("finite values serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, TrajectoryError> {
        let v: Value = serde_json::from_str(text).map_err(|e| TrajectoryError::Json(e.to_string()))?;
        let bad = |m: &str| TrajectoryError::Json(m.to_string());
        let mut metadata = Vec::new();
        if let Some(meta) = v.get("metadata").and_then(Value::as_object) {
            for (k, val) in meta {
                let s = val.as_str().map(str::to_string).unwrap_or_else(|| val.to_string());
                metadata.push((k.clone(), s));
            }
        }
        let rows = v.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing rows"))?;
        let mut samples = Vec::with_capacity(rows.len());
        for rec in rows {
            let mut row = [0.0; 17];
            for (slot, c) in row.iter_mut().zip(COLUMNS) {
                *slot = rec.get(c).and_then(Value::as_f64).ok_or_else(|| bad(c))?;
            }
            samples.push(Sample::from_row(&row));
        }
        let mut traj = Trajectory::new(samples)?;
        traj.metadata = metadata;
        Ok(traj)
    }
}

/// `n` equally spaced times on `[0, t_end]`, endpoints exact.
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0; n];
    }
    let last = (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { t_end } else { t_end * i as f64 / last }).collect()
}
