//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::time::Instant;

use liegyro::closed_form::*;
use liegyro::flow::{lie_propagate, lie_propagate_grid, FlowConfig, NumericField};
use liegyro::poly::{ep, rat};
use liegyro::rk4::{integrate, integrate_grid, IntegratorConfig};
use liegyro::trajectory::uniform_grid;
use liegyro::verify::{random_quadratic_field, random_rational};
use liegyro::*;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const M: Vec3 = Vec3::new(0.0, 3.0, 4.0);

fn top() -> DiagInertia {
    DiagInertia::new(1.0, 2.0).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn kernel_suite() -> Outcome {
    let (i2, i3) = (rat(2, 1), rat(1, 1));
    let moments = [i2.clone(), i2.clone(), i3.clone()];
    let field = ep::symmetric_field(&i2, &i3);
    let mut integrals = vec![ep::energy(&moments), ep::omega(2), ep::transverse_sq()];
    integrals.extend((0..3).map(|i| ep::momentum(&moments, i)));
    let zero = integrals.iter().filter(|p| field.apply(p).unwrap().is_zero()).count();
    outcome(zero == 6, format!("{zero}/6 derivatives are the zero polynomial"))
}

fn lemma1_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0);
    let (i2, i3) = (rat(2, 1), rat(1, 1));
    let field = ep::symmetric_field(&i2, &i3);
    let (mut ok, mut total) = (0, 0);
    for _ in 0..10 {
        let (a2, a3) = (random_rational(&mut rng), random_rational(&mut rng));
        for i in 0..3 {
            let it = field.iterates(&ep::paired(&a2, &a3, i), 7).unwrap();
            for n in 1..=3 {
                total += 2;
                ok += usize::from(it[2 * n] == ep::lemma1_even_rhs(&i2, &i3, &a2, &a3, i, n).unwrap());
                ok += usize::from(it[2 * n + 1] == ep::lemma1_odd_rhs(&i2, &i3, &a2, &a3, i, n));
            }
        }
    }
    outcome(ok == total, format!("{ok}/{total} exact identities (10 random A, i=1..3, n=1..3, even and odd)"))
}

fn coefficient_suite() -> Outcome {
    let field = ep::symmetric_field(&rat(1, 1), &rat(2, 1));
    let z = ep::point([rat(0, 1), rat(3, 1), rat(2, 1)], ep::identity_rows());
    let values: Vec<_> =
        field.iterates(&ep::r(0, 0), 8).unwrap().iter().map(|p| p.eval_rational(&z).unwrap()).collect();
    let (k, phi, m3) = (rat(5, 1), rat(-2, 1), rat(4, 5));
    let even_ok = (0..=4).all(|n| r11_coefficient_with(&k, &phi, &m3, n) == values[2 * n]);
    let odd_ok = (0..4).all(|n| values[2 * n + 1].is_zero());
    let shown: Vec<String> = (0..=4).map(|n| values[2 * n].to_string()).collect();
    outcome(even_ok && odd_ok, format!("n≤4 exact [{}], odd orders 1..7 vanish: {odd_ok}", shown.join(", ")))
}

fn series_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in [0.1f64, 0.3, 0.5] {
        let closed = (5.0 * t).cos() * (-2.0 * t).cos() - 0.8 * (5.0 * t).sin() * (-2.0 * t).sin();
        worst = worst.max((r11_partial_sum(&top(), M, t, 30).unwrap() - closed).abs());
    }
    outcome(worst <= 1e-12, format!("max error {worst:.3e} (tol 1e-12)"))
}

fn closed_grid(times: &[f64]) -> Vec<BodyState> {
    times.iter().map(|&t| rigid_motion(&top(), M, t).unwrap()).collect()
}

fn worst_r(a: &[BodyState], b: &[BodyState]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.r.max_abs_diff(&y.r)).fold(0.0, f64::max)
}

fn three_way_suite() -> Outcome {
    let times = uniform_grid(2.0, 200);
    let closed = closed_grid(&times);
    let s0 = rigid_initial_state(top(), M);
    let field = NumericField::from(&ep::symmetric_field(&rat(1, 1), &rat(2, 1)));
    let cfg = FlowConfig::new(20, 0.5, 1e-12).unwrap();
    let lie: Vec<BodyState> = lie_propagate_grid(&field, &s0.to_array(), &times, &cfg)
        .unwrap()
        .iter()
        .map(|z| BodyState::from_array(z))
        .collect();
    let rk = |dt| integrate_grid(top().into(), &s0, &times, &IntegratorConfig::with_dt(dt).unwrap()).unwrap();
    let (e_lie, e4, e5) = (worst_r(&closed, &lie), worst_r(&closed, &rk(1e-4)), worst_r(&closed, &rk(1e-5)));
    outcome(
        e_lie <= 1e-9 && e4 <= 1e-6 && e5 <= 1e-8,
        format!("lie {e_lie:.3e} (≤1e-9), rk4 dt=1e-4 {e4:.3e} (≤1e-6), rk4 dt=1e-5 {e5:.3e} (≤1e-8)"),
    )
}

fn conservation_suite() -> Outcome {
    let states = closed_grid(&uniform_grid(2.0, 200));
    let first = invariants_of(top(), &states[0]);
    let (mut ortho, mut det, mut drift): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in &states {
        ortho = ortho.max(s.r.orthogonality_defect());
        det = det.max((s.r.det() - 1.0).abs());
        let inv = invariants_of(top(), s);
        drift = drift
            .max((inv.energy - first.energy).abs() / first.energy)
            .max(inv.momentum.max_abs_diff(first.momentum) / first.momentum.norm());
    }
    outcome(
        ortho <= 1e-12 && det <= 1e-12 && drift <= 1e-11,
        format!("‖RRᵀ−1‖ {ortho:.3e}, |det−1| {det:.3e} (≤1e-12), relative drift {drift:.3e} (≤1e-11)"),
    )
}

fn geometry_suite() -> Outcome {
    let h = 1e-6;
    let (mut cos_err, mut speed_err): (f64, f64) = (0.0, 0.0);
    for n in 0..64 {
        let t = 0.1 * n as f64;
        let axis = rigid_rotation(&top(), M, t).unwrap().col(2);
        cos_err = cos_err.max((Vec3::new(0.0, 0.6, 0.8).dot(axis) - 0.8).abs());
        let fwd = rigid_rotation(&top(), M, t + h).unwrap().col(2);
        let back = rigid_rotation(&top(), M, t - h).unwrap().col(2);
        speed_err = speed_err.max(((fwd - back).scale(0.5 / h).norm() - 3.0).abs());
    }
    outcome(
        cos_err <= 1e-13 && speed_err <= 1e-6,
        format!("|cos θ − 0.8| {cos_err:.3e} (≤1e-13), ||Ṙ₃| − 3| {speed_err:.3e} (≤1e-6), 64 times"),
    )
}

fn degenerate_suite() -> Outcome {
    let m = Vec3::new(0.0, 0.0, 5.0);
    let times = uniform_grid(2.0, 200);
    let s0 = rigid_initial_state(top(), m);
    let closed: Vec<BodyState> = times.iter().map(|&t| rigid_motion(&top(), m, t).unwrap()).collect();
    let inp = GeneralSolutionInput::new(top(), s0.omega, s0.r).unwrap();
    let general: Vec<BodyState> = times
        .iter()
        .map(|&t| BodyState::from_parts_unchecked(omega_solution(&inp, t), r_general(&inp, t)))
        .collect();
    let field = NumericField::from(&ep::symmetric_field(&rat(1, 1), &rat(2, 1)));
    let lie: Vec<BodyState> = lie_propagate_grid(&field, &s0.to_array(), &times, &FlowConfig::default())
        .unwrap()
        .iter()
        .map(|z| BodyState::from_array(z))
        .collect();
    let rk = integrate_grid(top().into(), &s0, &times, &IntegratorConfig::default()).unwrap();
    let agree = [worst_r(&closed, &general), worst_r(&closed, &lie), worst_r(&closed, &rk), worst_r(&lie, &rk)]
        .into_iter()
        .fold(0.0, f64::max);

    let r0 = Mat3::rot_z(0.3) * Mat3([[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [0.0, 0.8, 0.6]]);
    let gaps: Vec<f64> = [1e-6f64, 1e-8, 1e-10]
        .iter()
        .map(|s| {
            let a = (s / 2.0).sqrt();
            let inp = GeneralSolutionInput::new(top(), Vec3::new(a, a, 2.5), r0).unwrap();
            times
                .iter()
                .map(|&t| r_general_transverse(&inp, t).unwrap().max_abs_diff(&r_precession(&inp, t)))
                .fold(0.0, f64::max)
        })
        .collect();
    let monotone = gaps[0] > gaps[1] && gaps[1] > gaps[2];
    outcome(
        agree <= 1e-10 && monotone,
        format!(
            "pure spin max pairwise diff {agree:.3e} (≤1e-10); branch gaps {:.2e} > {:.2e} > {:.2e}",
            gaps[0], gaps[1], gaps[2]
        ),
    )
}

fn group_law_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0);
    let cfg = FlowConfig::default();
    let mut worst: f64 = 0.0;
    let mut check = |field: &NumericField, z0: &[f64], rng: &mut StdRng| {
        for _ in 0..5 {
            let (t, s): (f64, f64) = (rng.gen_range(-0.2..=0.2), rng.gen_range(-0.2..=0.2));
            let direct = lie_propagate(field, z0, t + s, &cfg).unwrap();
            let mid = lie_propagate(field, z0, s, &cfg).unwrap();
            worst = worst.max(max_diff(&direct, &lie_propagate(field, &mid, t, &cfg).unwrap()));
        }
    };
    for _ in 0..20 {
        let p = rng.gen_range(1..=4);
        let field = NumericField::from(&random_quadratic_field(&mut rng, p));
        let z0: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        check(&field, &z0, &mut rng);
    }
    let ep_field = NumericField::from(&ep::symmetric_field(&rat(1, 1), &rat(2, 1)));
    check(&ep_field, &rigid_initial_state(top(), M).to_array(), &mut rng);
    outcome(worst <= 1e-10, format!("20 random quadratic fields + EP field, max defect {worst:.3e} (≤1e-10)"))
}

fn rk4_order_suite() -> Outcome {
    let s0 = rigid_initial_state(top(), M);
    let err = |dt: f64| {
        let traj = integrate(top().into(), &s0, 1.0, &IntegratorConfig::with_dt(dt).unwrap()).unwrap();
        traj.samples()
            .iter()
            .map(|s| s.state.r.max_abs_diff(&rigid_rotation(&top(), M, s.t).unwrap()))
            .fold(0.0, f64::max)
    };
    let (a, b) = (err(2e-4), err(1e-4));
    let ratio = a / b;
    outcome(
        (12.0..=20.0).contains(&ratio),
        format!("error {a:.3e} → {b:.3e} on [0,1], ratio {ratio:.2} (in [12,20])"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("symbolic kernel", kernel_suite),
        ("even/odd iterate closed forms", lemma1_suite),
        ("R11 coefficients", coefficient_suite),
        ("series summation", series_suite),
        ("three-way agreement", three_way_suite),
        ("conservation and orthogonality", conservation_suite),
        ("precession geometry", geometry_suite),
        ("degenerate branch", degenerate_suite),
        ("flow group law", group_law_suite),
        ("RK4 order", rk4_order_suite),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} {name}: {} [{:.2?}]", n + 1, o.detail, start.elapsed());
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
