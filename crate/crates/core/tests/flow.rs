use liegyro::closed_form::{rigid_motion, rigid_rotation};
use liegyro::flow::*;
use liegyro::poly::{ep, rat, PolyVectorField, Polynomial};
use liegyro::verify::random_quadratic_field;
use liegyro::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn top() -> DiagInertia {
    DiagInertia::new(1.0, 2.0).unwrap()
}

fn ep_numeric() -> NumericField {
    NumericField::from(&ep::symmetric_field(&rat(1, 1), &rat(2, 1)))
}

fn rigid_z0() -> Vec<f64> {
    rigid_initial_state(top(), Vec3::new(0.0, 3.0, 4.0)).to_array().to_vec()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn group_law_on_random_quadratic_fields(seed in any::<u64>(), p in 1usize..=4,
                                            t in -0.2f64..0.2, s in -0.2f64..0.2,
                                            z in prop::collection::vec(-1.0f64..1.0, 4)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let field = NumericField::from(&random_quadratic_field(&mut rng, p));
        let cfg = FlowConfig::default();
        let z0 = &z[..p];
        let direct = lie_propagate(&field, z0, t + s, &cfg).unwrap();
        let mid = lie_propagate(&field, z0, s, &cfg).unwrap();
        let composed = lie_propagate(&field, &mid, t, &cfg).unwrap();
        prop_assert!(max_diff(&direct, &composed) <= 10.0 * cfg.abs_tol);
    }

    #[test]
    fn group_law_on_ep_field(t in -0.2f64..0.2, s in -0.2f64..0.2) {
        let cfg = FlowConfig::default();
        let field = ep_numeric();
        let z0 = rigid_z0();
        let direct = lie_propagate(&field, &z0, t + s, &cfg).unwrap();
        let composed = lie_propagate(&field, &lie_propagate(&field, &z0, s, &cfg).unwrap(), t, &cfg).unwrap();
        prop_assert!(max_diff(&direct, &composed) <= 10.0 * cfg.abs_tol);
    }

    #[test]
    fn integrals_are_conserved_along_the_flow(w in prop::array::uniform3(-2.0f64..2.0), t in -1.5f64..1.5) {
        let moments = [rat(3, 2), rat(3, 2), rat(1, 2)];
        let field = ep::field(&moments);
        let num = NumericField::from(&field);
        let z0 = BodyState::from_parts_unchecked(Vec3::from_array(w), Mat3::rot_z(0.4)).to_array();
        let cfg = FlowConfig::default();
        let z = lie_propagate(&num, &z0, t, &cfg).unwrap();
        let mut integrals = vec![ep::energy(&moments), ep::omega(2), ep::transverse_sq()];
        integrals.extend((0..3).map(|i| ep::momentum(&moments, i)));
        for f in integrals {
            let (a, b) = (f.eval_f64(&z0).unwrap(), f.eval_f64(&z).unwrap());
            prop_assert!((a - b).abs() <= cfg.abs_tol * a.abs().max(1.0), "{} → {}", a, b);
        }
    }
}

#[test]
fn small_step_recovers_the_vector_field() {
    let field = ep_numeric();
    let z0 = rigid_z0();
    let h = field.eval(&z0);
    let cfg = FlowConfig::default();
    let err = |eps: f64| {
        let z = lie_propagate(&field, &z0, eps, &cfg).unwrap();
        let fd: Vec<f64> = z.iter().zip(&z0).map(|(a, b)| (a - b) / eps).collect();
        max_diff(&fd, &h)
    };
    let ratio = err(1e-3) / err(1e-4);
    assert!((8.0..=12.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn error_decreases_with_order() {
    let z0 = rigid_z0();
    let field = ep_numeric();
    let exact = rigid_rotation(&top(), Vec3::new(0.0, 3.0, 4.0), 0.1).unwrap().to_row_major();
    let mut prev = f64::INFINITY;
    for order in 6..=20 {
        let jet = taylor_coefficients(&field, &z0, order).unwrap();
        let err = max_diff(&jet.eval(0.1)[3..], &exact);
        assert!(err <= prev + 1e-14, "order {order}: {err} after {prev}");
        prev = err;
    }
    assert!(prev < 1e-14);
}

#[test]
fn jet_matches_symbolic_derivatives() {
    let sym = ep::symmetric_field(&rat(3, 2), &rat(1, 2));
    let field = NumericField::from(&sym);
    let z0 = BodyState::from_parts_unchecked(Vec3::new(0.4, -0.9, 1.3), Mat3::rot_z(0.7)).to_array();
    let jet = taylor_coefficients(&field, &z0, 6).unwrap();
    let mut factorial = 1.0;
    for n in 0..=6 {
        if n > 0 {
            factorial *= n as f64;
        }
        let c = jet.coeff(n);
        for (var, cv) in c.iter().enumerate() {
            let p = Polynomial::var(ep::VARCOUNT, var).unwrap();
            let symbolic = sym.apply_n(&p, n).unwrap().eval_f64(&z0).unwrap();
            let numeric = cv * factorial;
            assert!((numeric - symbolic).abs() <= 1e-12 * symbolic.abs().max(1.0), "n={n} var={var}");
        }
    }
}

#[test]
fn pure_spin_jet_is_the_trig_series() {
    let w = 1.7;
    let z0 = BodyState::from_parts_unchecked(Vec3::new(0.0, 0.0, w), Mat3::IDENTITY).to_array();
    let jet = taylor_coefficients(&ep_numeric(), &z0, 12).unwrap();
    let mut fact = 1.0;
    for n in 0..=12usize {
        if n > 0 {
            fact *= n as f64;
        }
        let wn = w.powi(n as i32) / fact;
        // cos: 1, 0, −1, 0, …;  sin: 0, 1, 0, −1, …
        let cos_n = [1.0, 0.0, -1.0, 0.0][n % 4] * wn;
        let sin_n = [0.0, 1.0, 0.0, -1.0][n % 4] * wn;
        let c = BodyState::from_array(&jet.coeff(n)).r;
        let expected = Mat3([[cos_n, -sin_n, 0.0], [sin_n, cos_n, 0.0], [0.0, 0.0, 0.0]]);
        let expected = if n == 0 { Mat3::IDENTITY } else { expected };
        assert!(c.max_abs_diff(&expected) <= 1e-15 * wn.max(1.0), "n={n}");
    }
}

#[test]
fn rigid_datum_at_seven_tenths() {
    let z = lie_propagate(&ep_numeric(), &rigid_z0(), 0.7, &FlowConfig::default()).unwrap();
    let exact = rigid_motion(&top(), Vec3::new(0.0, 3.0, 4.0), 0.7).unwrap();
    assert!(max_diff(&z, &exact.to_array()) <= 1e-10);
}

#[test]
fn grid_matches_pointwise_propagation() {
    let field = ep_numeric();
    let cfg = FlowConfig::default();
    let times = [0.0, 0.25, 0.5, 1.0];
    let grid = lie_propagate_grid(&field, &rigid_z0(), &times, &cfg).unwrap();
    for (t, z) in times.iter().zip(&grid) {
        let direct = lie_propagate(&field, &rigid_z0(), *t, &cfg).unwrap();
        assert!(max_diff(z, &direct) <= 1e-11);
    }
}

#[test]
fn finite_time_blowup_is_reported() {
    // ż = z² from z₀ = 1 blows up at t = 1
    let sym = PolyVectorField::new(vec![Polynomial::var(1, 0).unwrap().pow(2)]).unwrap();
    let field = NumericField::from(&sym);
    match lie_propagate(&field, &[1.0], 2.0, &FlowConfig::default()) {
        Err(FlowError::NonConvergent { reached }) => assert!(reached > 0.9 && reached < 1.0, "{reached}"),
        other => panic!("expected divergence, got {other:?}"),
    }
    // before the pole the solution is 1/(1 − t)
    let z = lie_propagate(&field, &[1.0], 0.5, &FlowConfig::default()).unwrap();
    assert!((z[0] - 2.0).abs() < 1e-11);
}

#[test]
fn symbolic_and_rational_evaluation_agree() {
    let sym = ep::symmetric_field(&rat(1, 1), &rat(2, 1));
    let z = ep::point([rat(0, 1), rat(3, 1), rat(2, 1)], ep::identity_rows());
    let zf: Vec<f64> = z.iter().map(|q| q.to_f64().unwrap()).collect();
    let d2 = sym.apply_n(&ep::r(0, 0), 2).unwrap();
    assert_eq!(d2.eval_rational(&z).unwrap(), rat(-13, 1));
    assert_eq!(d2.eval_f64(&zf).unwrap(), -13.0);
}
