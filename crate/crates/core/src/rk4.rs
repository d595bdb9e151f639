//! Classical fixed-step RK4 for the Euler–Poisson equations with arbitrary
//! diagonal inertia. This is the independent numerical oracle, so it is a
//! pure discretisation: no projection unless `renormalize` is asked for.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::body::{BodyState, Mat3, PrincipalMoments, Vec3};
use crate::trajectory::{Sample, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("non-finite initial state or end time")]
    NonFiniteInput,
    #[error("state became non-finite after t = {last_good}")]
    NonFinite { last_good: f64 },
    #[error("requested times must be ascending from 0")]
    BadGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Gram–Schmidt the rows of `R` after every step.
    pub renormalize: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: 1e-4, renormalize: false }
    }
}

impl IntegratorConfig {
    pub fn with_dt(dt: f64) -> Result<Self, IntegratorError> {
        let cfg = IntegratorConfig { dt, ..Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), IntegratorError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(IntegratorError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

/// Time derivative of a body state; `r` is `Ṙ`, not a rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub omega: Vec3,
    pub r: Mat3,
}

type Z = [f64; 12];

fn rhs(i: &[f64; 3], z: &Z) -> Z {
    let (w1, w2, w3) = (z[0], z[1], z[2]);
    let mut d = [0.0; 12];
    d[0] = (i[1] - i[2]) * w2 * w3 / i[0];
    d[1] = (i[2] - i[0]) * w3 * w1 / i[1];
    d[2] = (i[0] - i[1]) * w1 * w2 / i[2];
    let w = [w1, w2, w3];
    for row in 0..3 {
        let g = &z[3 + 3 * row..6 + 3 * row];
        // Ṙ_ij = [G_i, Ω]_j
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            d[3 + 3 * row + j] = g[a] * w[b] - g[b] * w[a];
        }
    }
    d
}

/// `Ω̇ = I⁻¹[IΩ, Ω]`, `Ṙ_ij = [G_i, Ω]_j` with `G_i` the rows of `R`.
pub fn ep_rhs(inertia: PrincipalMoments, state: &BodyState) -> StateDerivative {
    let d = rhs(&inertia.0, &state.to_array());
    let mut r = [0.0; 9];
    r.copy_from_slice(&d[3..]);
    StateDerivative { omega: Vec3::new(d[0], d[1], d[2]), r: Mat3::from_row_major(r) }
}

fn axpy(z: &Z, h: f64, k: &Z) -> Z {
    let mut out = *z;
    for (o, kv) in out.iter_mut().zip(k) {
        *o += h * kv;
    }
    out
}

/// One step with compensated accumulation of the increment.
fn step(i: &[f64; 3], z: &mut Z, carry: &mut Z, h: f64) {
    let k1 = rhs(i, z);
    let k2 = rhs(i, &axpy(z, 0.5 * h, &k1));
    let k3 = rhs(i, &axpy(z, 0.5 * h, &k2));
    let k4 = rhs(i, &axpy(z, h, &k3));
    for n in 0..12 {
        let inc = h / 6.0 * (k1[n] + 2.0 * (k2[n] + k3[n]) + k4[n]) - carry[n];
        let sum = z[n] + inc;
        carry[n] = (sum - z[n]) - inc;
        z[n] = sum;
    }
}

fn renormalize(z: &mut Z, carry: &mut Z) {
    let mut rows = [Vec3::ZERO; 3];
    for (i, row) in rows.iter_mut().enumerate() {
        *row = Vec3::new(z[3 + 3 * i], z[4 + 3 * i], z[5 + 3 * i]);
    }
    let e0 = rows[0].scale(1.0 / rows[0].norm());
    let v1 = rows[1] - e0.scale(e0.dot(rows[1]));
    let e1 = v1.scale(1.0 / v1.norm());
    let v2 = rows[2] - e0.scale(e0.dot(rows[2])) - e1.scale(e1.dot(rows[2]));
    let e2 = v2.scale(1.0 / v2.norm());
    for (i, e) in [e0, e1, e2].iter().enumerate() {
        z[3 + 3 * i..6 + 3 * i].copy_from_slice(&e.to_array());
    }
    carry[3..].iter_mut().for_each(|c| *c = 0.0);
}

struct Stepper {
    i: [f64; 3],
    cfg: IntegratorConfig,
    z: Z,
    carry: Z,
    t: f64,
}

impl Stepper {
    fn new(inertia: PrincipalMoments, state0: &BodyState, cfg: &IntegratorConfig) -> Result<Self, IntegratorError> {
        cfg.validate()?;
        let z = state0.to_array();
        if z.iter().any(|v| !v.is_finite()) {
            return Err(IntegratorError::NonFiniteInput);
        }
        Ok(Stepper { i: inertia.0, cfg: *cfg, z, carry: [0.0; 12], t: 0.0 })
    }

    /// Advances from the current time to `target` in steps of `dt`, the last
    /// one shortened; calls `visit` after every step.
    fn advance(&mut self, target: f64, mut visit: impl FnMut(f64, &Z)) -> Result<(), IntegratorError> {
        let (start, span) = (self.t, target - self.t);
        if span == 0.0 {
            return Ok(());
        }
        let dir = span.signum();
        // steps are counted from `start` so `t` does not accumulate roundoff
        let full = (span.abs() / self.cfg.dt * (1.0 - 4.0 * f64::EPSILON)).floor() as u64;
        for k in 1..=full + 1 {
            let t_next = if k > full { target } else { start + dir * self.cfg.dt * k as f64 };
            let h = t_next - self.t;
            if h == 0.0 {
                continue;
            }
            step(&self.i, &mut self.z, &mut self.carry, h);
            if self.cfg.renormalize {
                renormalize(&mut self.z, &mut self.carry);
            }
            if self.z.iter().any(|v| !v.is_finite()) {
                return Err(IntegratorError::NonFinite { last_good: self.t });
            }
            self.t = t_next;
            visit(self.t, &self.z);
        }
        Ok(())
    }

    fn state(&self) -> BodyState {
        BodyState::from_array(&self.z)
    }
}

/// Every step from `0` to `t_end` (which may be negative), including `t = 0`.
pub fn integrate(
    inertia: PrincipalMoments,
    state0: &BodyState,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    if !t_end.is_finite() {
        return Err(IntegratorError::NonFiniteInput);
    }
    let mut stepper = Stepper::new(inertia, state0, cfg)?;
    let mut samples = vec![Sample::new(inertia, 0.0, *state0)];
    stepper.advance(t_end, |t, z| samples.push(Sample::new(inertia, t, BodyState::from_array(z))))?;
    if t_end < 0.0 {
        samples.reverse();
    }
    Ok(Trajectory::new(samples).expect("step times are monotone"))
}

/// States at the ascending, non-negative `times`, stepping through each.
pub fn integrate_grid(
    inertia: PrincipalMoments,
    state0: &BodyState,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<BodyState>, IntegratorError> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(IntegratorError::NonFiniteInput);
    }
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(IntegratorError::BadGrid);
    }
    let mut stepper = Stepper::new(inertia, state0, cfg)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        stepper.advance(t, |_, _| {})?;
        out.push(stepper.state());
    }
    Ok(out)
}

/// Final state at `t_end`.
pub fn integrate_to(
    inertia: PrincipalMoments,
    state0: &BodyState,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<BodyState, IntegratorError> {
    if !t_end.is_finite() {
        return Err(IntegratorError::NonFiniteInput);
    }
    let mut stepper = Stepper::new(inertia, state0, cfg)?;
    stepper.advance(t_end, |_, _| {})?;
    Ok(stepper.state())
}
