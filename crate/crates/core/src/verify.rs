//! Self-checks runnable from the command line. Each check yields one
//! machine-readable line: `PASS|FAIL <suite>/<name> <detail>`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::body::{DiagInertia, Vec3};
use crate::closed_form::{precession_geometry, r11_coefficient_with, rigid_rotation};
use crate::flow::{lie_propagate, FlowConfig, NumericField};
use crate::poly::{ep, rat, PolyVectorField, Polynomial};

pub const SEED_ENV: &str = "LIEGYRO_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kernel,
    Lemma1,
    Coeffs,
    Flow,
    Geometry,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["kernel", "lemma1", "coeffs", "flow", "geometry", "all"];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Kernel, Suite::Lemma1, Suite::Coeffs, Suite::Flow, Suite::Geometry],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Lemma1 => "lemma1",
            Suite::Coeffs => "coeffs",
            Suite::Flow => "flow",
            Suite::Geometry => "geometry",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "kernel" => Suite::Kernel,
            "lemma1" => Suite::Lemma1,
            "coeffs" => Suite::Coeffs,
            "flow" => Suite::Flow,
            "geometry" => Suite::Geometry,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}/{} {}", self.suite, self.name, self.detail)
    }
}

fn check(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { suite, name: name.into(), passed, detail: detail.into() }
}

/// Seed from `LIEGYRO_SEED`, default 0.
pub fn seed_from_env() -> Result<u64, String> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got {v:?}")),
        Err(_) => Ok(0),
    }
}

pub fn run(suite: Suite, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Kernel => out.extend(kernel()),
            Suite::Lemma1 => out.extend(lemma1(seed)),
            Suite::Coeffs => out.extend(coeffs()),
            Suite::Flow => out.extend(flow(seed)),
            Suite::Geometry => out.extend(geometry()),
            Suite::All => unreachable!(),
        }
    }
    out
}

pub fn kernel() -> Vec<Check> {
    let (i2, i3) = (rat(2, 1), rat(1, 1));
    let moments = [i2.clone(), i2.clone(), i3.clone()];
    let field = ep::symmetric_field(&i2, &i3);
    let mut cases = vec![("grad_E".to_string(), ep::energy(&moments))];
    for i in 0..3 {
        cases.push((format!("grad_m{}", i + 1), ep::momentum(&moments, i)));
    }
    cases.push(("grad_W3".into(), ep::omega(2)));
    cases.push(("grad_W1^2+W2^2".into(), ep::transverse_sq()));
    cases
        .into_iter()
        .map(|(name, p)| {
            let d = field.apply(&p).expect("same variable count");
            let detail = if d.is_zero() { "exact zero".to_string() } else { format!("got {}", d.render(&ep::NAMES)) };
            check(Suite::Kernel.name(), name, d.is_zero(), detail)
        })
        .collect()
}

/// Random nonzero rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 9`.
pub fn random_rational(rng: &mut StdRng) -> BigRational {
    loop {
        let v = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn lemma1(seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (i2, i3) = (rat(2, 1), rat(1, 1));
    let field = ep::symmetric_field(&i2, &i3);
    let mut out = Vec::new();
    for trial in 0..10 {
        let (a2, a3) = (random_rational(&mut rng), random_rational(&mut rng));
        for i in 0..3 {
            let iterates = field.iterates(&ep::paired(&a2, &a3, i), 7).expect("order within cap");
            let mut bad = Vec::new();
            for n in 1..=3usize {
                let even = ep::lemma1_even_rhs(&i2, &i3, &a2, &a3, i, n).expect("n ≥ 1");
                if iterates[2 * n] != even {
                    bad.push(format!("D^{}", 2 * n));
                }
                if iterates[2 * n + 1] != ep::lemma1_odd_rhs(&i2, &i3, &a2, &a3, i, n) {
                    bad.push(format!("D^{}", 2 * n + 1));
                }
            }
            let name = format!("A{trial}_row{}", i + 1);
            let detail = if bad.is_empty() {
                format!("A=diag({a2},{a2},{a3}) orders 2..7 exact")
            } else {
                format!("A=diag({a2},{a2},{a3}) mismatch at {}", bad.join(","))
            };
            out.push(check(Suite::Lemma1.name(), name, bad.is_empty(), detail));
        }
    }
    out
}

/// Symbolic `Dⁿ R₁₁` at the rigid datum `I = (1, 1, 2)`, `m = (0, 3, 4)`.
pub fn symbolic_r11_derivatives(max_order: usize) -> Vec<BigRational> {
    let field = ep::symmetric_field(&rat(1, 1), &rat(2, 1));
    let z = ep::point([rat(0, 1), rat(3, 1), rat(2, 1)], ep::identity_rows());
    field
        .iterates_capped(&ep::r(0, 0), max_order, max_order)
        .expect("order within cap")
        .iter()
        .map(|p| p.eval_rational(&z).expect("12 coordinates"))
        .collect()
}

pub fn coeffs() -> Vec<Check> {
    let symbolic = symbolic_r11_derivatives(9);
    let (k, phi, m3) = (rat(5, 1), rat(-2, 1), rat(4, 5));
    let mut out = Vec::new();
    for (order, value) in symbolic.iter().enumerate() {
        if order % 2 == 0 {
            let c = r11_coefficient_with(&k, &phi, &m3, order / 2);
            out.push(check(
                Suite::Coeffs.name(),
                format!("n{}", order / 2),
                &c == value,
                format!("formula {c}, symbolic {value}"),
            ));
        } else {
            out.push(check(Suite::Coeffs.name(), format!("odd{order}"), value.is_zero(), format!("symbolic {value}")));
        }
    }
    out
}

/// Random quadratic field on `p` variables: every monomial of degree ≤ 2
/// gets a coefficient `j/8`, `|j| ≤ 4`.
pub fn random_quadratic_field(rng: &mut StdRng, p: usize) -> PolyVectorField {
    let mut exps: Vec<Vec<u32>> = vec![vec![0; p]];
    for a in 0..p {
        let mut e = vec![0; p];
        e[a] = 1;
        exps.push(e);
        for b in a..p {
            let mut e = vec![0; p];
            e[a] += 1;
            e[b] += 1;
            exps.push(e);
        }
    }
    let comps = (0..p)
        .map(|_| {
            let terms = exps.iter().map(|e| (rat(rng.gen_range(-4..=4), 8), e.clone()));
            Polynomial::from_terms(p, terms).expect("exponent length p")
        })
        .collect();
    PolyVectorField::new(comps).expect("shared variable count")
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Worst `|z(t+s) − z(t, z(s))|` over a few `(t, s)` pairs in `[−0.2, 0.2]²`.
pub fn group_law_defect(field: &NumericField, z0: &[f64], rng: &mut StdRng, cfg: &FlowConfig) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let (t, s) = (rng.gen_range(-0.2..=0.2), rng.gen_range(-0.2..=0.2));
        let direct = lie_propagate(field, z0, t + s, cfg).map_err(|e| e.to_string())?;
        let mid = lie_propagate(field, z0, s, cfg).map_err(|e| e.to_string())?;
        let composed = lie_propagate(field, &mid, t, cfg).map_err(|e| e.to_string())?;
        worst = worst.max(max_diff(&direct, &composed));
    }
    Ok(worst)
}

pub fn flow(seed: u64) -> Vec<Check> {
    const TOL: f64 = 1e-10;
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = FlowConfig::default();
    let mut out = Vec::new();
    for n in 0..20 {
        let p = rng.gen_range(1..=4);
        let field = NumericField::from(&random_quadratic_field(&mut rng, p));
        let z0: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        out.push(match group_law_defect(&field, &z0, &mut rng, &cfg) {
            Ok(d) => check(Suite::Flow.name(), format!("group_law_random{n}"), d <= TOL, format!("p={p} defect {d:.3e}")),
            Err(e) => check(Suite::Flow.name(), format!("group_law_random{n}"), false, e),
        });
    }
    let ep_field = NumericField::from(&ep::symmetric_field(&rat(1, 1), &rat(2, 1)));
    let z0 = crate::body::rigid_initial_state(DiagInertia::new(1.0, 2.0).expect("valid"), Vec3::new(0.0, 3.0, 4.0))
        .to_array();
    out.push(match group_law_defect(&ep_field, &z0, &mut rng, &cfg) {
        Ok(d) => check(Suite::Flow.name(), "group_law_ep", d <= TOL, format!("defect {d:.3e}")),
        Err(e) => check(Suite::Flow.name(), "group_law_ep", false, e),
    });
    out
}

pub fn geometry() -> Vec<Check> {
    let top = DiagInertia::new(1.0, 2.0).expect("valid");
    let m = Vec3::new(0.0, 3.0, 4.0);
    let (mut cos_err, mut speed_err): (f64, f64) = (0.0, 0.0);
    let h = 1e-6;
    for n in 0..64 {
        let t = 0.1 * n as f64;
        let g = precession_geometry(&top, m, t).expect("aligned datum");
        cos_err = cos_err.max((g.cos_theta - 0.8).abs());
        let fwd = rigid_rotation(&top, m, t + h).expect("aligned datum").col(2);
        let back = rigid_rotation(&top, m, t - h).expect("aligned datum").col(2);
        let speed = (fwd - back).scale(1.0 / (2.0 * h)).norm();
        speed_err = speed_err.max((speed - 3.0).abs());
    }
    vec![
        check(Suite::Geometry.name(), "cos_theta", cos_err <= 1e-13, format!("max |cos θ − 0.8| = {cos_err:.3e} over 64 times")),
        check(Suite::Geometry.name(), "axis_speed", speed_err <= 1e-6, format!("max ||Ṙ₃| − 3| = {speed_err:.3e} (central differences)")),
    ]
}
