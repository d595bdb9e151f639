//! Truncated Lie-series (Taylor-jet) propagation of autonomous polynomial
//! systems `ż = h(z)`.
//!
//! The jet of the solution at `z₀` is built by power-series arithmetic in `t`:
//! if `zⁱ(t) = Σ cⁱ_n tⁿ`, then `cⁱ_{n+1} = [hⁱ(z(t))]_n / (n+1)`, where the
//! n-th coefficient of each monomial is obtained by Cauchy products of the
//! coefficients already known. `n! cⁱ_n` equals `(Dⁿ zⁱ)(z₀)` for the derivation
//! `D = hᵏ∂ₖ`, so this is the Lie series evaluated numerically.
//!
//! Long intervals are covered by re-expanding at intermediate points (flow
//! composition); the step length comes from the size of the last two jet
//! coefficients.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{rational_to_f64, PolyVectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("invalid flow configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("state has {got} components, field expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("non-finite initial state")]
    NonFiniteInput,
    #[error("jet coefficient of order {order} is not finite")]
    NonFiniteCoefficient { order: usize },
    #[error("Lie series failed to converge; propagation stopped at t = {reached}")]
    NonConvergent { reached: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub order: usize,
    pub step_safety: f64,
    pub abs_tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { order: 20, step_safety: 0.5, abs_tol: 1e-12 }
    }
}

impl FlowConfig {
    pub fn new(order: usize, step_safety: f64, abs_tol: f64) -> Result<Self, FlowError> {
        let cfg = FlowConfig { order, step_safety, abs_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_order(order: usize) -> Result<Self, FlowError> {
        FlowConfig::new(order, 0.5, 1e-12)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        if self.order < 1 {
            return Err(FlowError::InvalidConfig("order must be at least 1"));
        }
        if !(self.step_safety > 0.0 && self.step_safety < 1.0) {
            return Err(FlowError::InvalidConfig("step_safety must lie in (0, 1)"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(FlowError::InvalidConfig("abs_tol must be positive"));
        }
        Ok(())
    }
}

/// Product of variables with a coefficient; `factors` lists variable indices
/// with repetition, so `3·z₀²z₂` is `{coef: 3, factors: [0, 0, 2]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumTerm {
    pub coef: f64,
    pub factors: Vec<usize>,
}

/// Floating-point copy of a polynomial vector field, laid out for jet
/// recurrences.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericField {
    components: Vec<Vec<NumTerm>>,
}

impl NumericField {
    /// Components as term lists; every factor index must be `< components.len()`.
    pub fn new(components: Vec<Vec<NumTerm>>) -> Result<Self, FlowError> {
        let p = components.len();
        for term in components.iter().flatten() {
            if term.factors.iter().any(|&v| v >= p) {
                return Err(FlowError::Dimension { expected: p, got: term.factors.len() });
            }
            if !term.coef.is_finite() {
                return Err(FlowError::InvalidConfig("non-finite field coefficient"));
            }
        }
        Ok(NumericField { components })
    }

    pub fn varcount(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, z: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| t.factors.iter().fold(t.coef, |acc, &v| acc * z[v]))
                    .sum()
            })
            .collect()
    }
}

impl From<&PolyVectorField> for NumericField {
    fn from(f: &PolyVectorField) -> Self {
        let components = f
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, coef)| {
                        let factors = m
                            .exponents()
                            .iter()
                            .enumerate()
                            .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
                            .collect();
                        NumTerm { coef: rational_to_f64(coef), factors }
                    })
                    .collect()
            })
            .collect();
        NumericField { components }
    }
}

/// Scaled Taylor coefficients `cₙ = zⁿ(0)/n!` of the solution through `z₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    // series[v][n]
    series: Vec<Vec<f64>>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.series.first().map_or(0, |s| s.len() - 1)
    }

    pub fn varcount(&self) -> usize {
        self.series.len()
    }

    /// The p-vector `cₙ`.
    pub fn coeff(&self, n: usize) -> Vec<f64> {
        self.series.iter().map(|s| s[n]).collect()
    }

    /// Coefficients of a single variable.
    pub fn series(&self, var: usize) -> &[f64] {
        &self.series[var]
    }

    pub fn coeff_norm(&self, n: usize) -> f64 {
        self.series.iter().map(|s| s[n].abs()).fold(0.0, f64::max)
    }

    /// Truncated series at `t` (Horner).
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.series
            .iter()
            .map(|s| s.iter().rev().fold(0.0, |acc, &c| acc * t + c))
            .collect()
    }
}

pub fn taylor_coefficients(
    field: &NumericField,
    z0: &[f64],
    order: usize,
) -> Result<Jet, FlowError> {
    let p = field.varcount();
    if z0.len() != p {
        return Err(FlowError::Dimension { expected: p, got: z0.len() });
    }
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::NonFiniteInput);
    }
    let mut series: Vec<Vec<f64>> = z0
        .iter()
        .map(|&v| {
            let mut s = Vec::with_capacity(order + 1);
            s.push(v);
            s
        })
        .collect();

    // Partial products per term: partial[c][t][k] is the series of the
    // product of the first k+2 factors of term t in component c.
    let mut partial: Vec<Vec<Vec<Vec<f64>>>> = field
        .components
        .iter()
        .map(|terms| {
            terms
                .iter()
                .map(|t| vec![Vec::with_capacity(order); t.factors.len().saturating_sub(1)])
                .collect()
        })
        .collect();

    for n in 0..order {
        for (c, terms) in field.components.iter().enumerate() {
            let mut h_n = 0.0;
            for (ti, term) in terms.iter().enumerate() {
                let value = match term.factors.len() {
                    0 => {
                        if n == 0 {
                            1.0
                        } else {
                            0.0
                        }
                    }
                    1 => series[term.factors[0]][n],
                    _ => {
                        let chain = &mut partial[c][ti];
                        for k in 0..chain.len() {
                            let right = &series[term.factors[k + 1]];
                            let acc: f64 = if k == 0 {
                                let left = &series[term.factors[0]];
                                (0..=n).map(|i| left[i] * right[n - i]).sum()
                            } else {
                                let left = &chain[k - 1];
                                (0..=n).map(|i| left[i] * right[n - i]).sum()
                            };
                            chain[k].push(acc);
                        }
                        *chain.last().unwrap().last().unwrap()
                    }
                };
                h_n += term.coef * value;
            }
            series[c].push(h_n / (n + 1) as f64);
        }
        if series.iter().any(|s| !s[n + 1].is_finite()) {
            return Err(FlowError::NonFiniteCoefficient { order: n + 1 });
        }
    }
    Ok(Jet { series })
}

/// Largest step for which the jet's last two terms stay below `abs_tol`,
/// scaled by `step_safety`. Infinite when both terms vanish.
pub fn step_estimate(jet: &Jet, cfg: &FlowConfig) -> f64 {
    let n = jet.order();
    let mut h = f64::INFINITY;
    for k in [n, n.saturating_sub(1)] {
        if k == 0 {
            continue;
        }
        let norm = jet.coeff_norm(k);
        if norm > 0.0 {
            h = h.min((cfg.abs_tol / norm).powf(1.0 / k as f64));
        }
    }
    h * cfg.step_safety
}

/// Statistics of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowStats {
    pub substeps: usize,
}

const MAX_SUBSTEPS: usize = 1_000_000;

/// Evaluates the flow `z(t, z₀)`; `t` may be negative.
pub fn lie_propagate(
    field: &NumericField,
    z0: &[f64],
    t: f64,
    cfg: &FlowConfig,
) -> Result<Vec<f64>, FlowError> {
    lie_propagate_with_stats(field, z0, t, cfg).map(|(z, _)| z)
}

pub fn lie_propagate_with_stats(
    field: &NumericField,
    z0: &[f64],
    t: f64,
    cfg: &FlowConfig,
) -> Result<(Vec<f64>, FlowStats), FlowError> {
    cfg.validate()?;
    if z0.len() != field.varcount() {
        return Err(FlowError::Dimension { expected: field.varcount(), got: z0.len() });
    }
    if !t.is_finite() || z0.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::NonFiniteInput);
    }
    let mut z = z0.to_vec();
    if t == 0.0 {
        return Ok((z, FlowStats { substeps: 0 }));
    }
    let dir = t.signum();
    let span = t.abs();
    let mut done = 0.0f64;
    let mut substeps = 0usize;
    while done < span {
        let reached = dir * done;
        let jet = taylor_coefficients(field, &z, cfg.order).map_err(|e| match e {
            FlowError::NonFiniteCoefficient { .. } => FlowError::NonConvergent { reached },
            other => other,
        })?;
        let remaining = span - done;
        let h = step_estimate(&jet, cfg).min(remaining);
        if h.is_nan() || h <= f64::EPSILON * span.max(1.0) || substeps >= MAX_SUBSTEPS {
            return Err(FlowError::NonConvergent { reached });
        }
        z = jet.eval(dir * h);
        if z.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::NonConvergent { reached });
        }
        done = if h == remaining { span } else { done + h };
        substeps += 1;
    }
    Ok((z, FlowStats { substeps }))
}

/// States at each of `times` (ascending), composing flows between them.
pub fn lie_propagate_grid(
    field: &NumericField,
    z0: &[f64],
    times: &[f64],
    cfg: &FlowConfig,
) -> Result<Vec<Vec<f64>>, FlowError> {
    let mut out = Vec::with_capacity(times.len());
    let mut z = z0.to_vec();
    let mut t_prev = 0.0;
    for &t in times {
        z = lie_propagate(field, &z, t - t_prev, cfg).map_err(|e| match e {
            FlowError::NonConvergent { reached } => FlowError::NonConvergent { reached: t_prev + reached },
            other => other,
        })?;
        out.push(z.clone());
        t_prev = t;
    }
    Ok(out)
}
