use std::process::{Command, Output};

use liegyro::trajectory::Trajectory;
use liegyro::Mat3;

fn liegyro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liegyro")).args(args).env_remove("LIEGYRO_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const RIGID: [&str; 4] = ["--inertia", "1,1,2", "--momentum", "0,3,4"];

#[test]
fn zero_span_closed_run_repeats_identity() {
    let mut args = vec!["simulate", "--method", "closed", "--t-end", "0", "--samples", "2"];
    args.extend(RIGID);
    let o = liegyro(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let traj = Trajectory::from_csv(&stdout(&o)).unwrap();
    assert_eq!(traj.len(), 2);
    assert_eq!(traj.samples()[0], traj.samples()[1]);
    assert_eq!(traj.samples()[0].state.r, Mat3::IDENTITY);
}

#[test]
fn rigid_metadata_header() {
    let mut args = vec!["simulate", "--samples", "3"];
    args.extend(RIGID);
    let text = stdout(&liegyro(&args));
    assert!(text.contains("# k = 5\n"));
    assert!(text.contains("# phi = -2\n"));
    assert!(text.contains("# mhat = 0,0.6,0.8\n"));
    assert!(!text.contains("generated"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,W1,W2,W3,R11,R12,R13,R21,R22,R23,R31,R32,R33,E,m1,m2,m3");
}

#[test]
fn all_methods_share_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let mut args = vec!["simulate", "--method", "all", "--t-end", "1", "--samples", "11", "--out"];
    args.push(out.to_str().unwrap());
    args.extend(RIGID);
    assert_eq!(code(&liegyro(&args)), 0);
    let load = |m: &str| {
        let text = std::fs::read_to_string(dir.path().join(format!("run.{m}.csv"))).unwrap();
        Trajectory::from_csv(&text).unwrap()
    };
    let (c, l, r) = (load("closed"), load("lie"), load("rk4"));
    assert_eq!(c.times(), l.times());
    assert_eq!(c.times(), r.times());
    assert_eq!(c.len(), 11);
    for (a, b) in c.samples().iter().zip(l.samples()) {
        assert!(a.state.r.max_abs_diff(&b.state.r) < 1e-9);
    }
}

#[test]
fn output_is_deterministic_unless_timestamped() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["simulate", "--method", "lie", "--samples", "20", "--out", path.to_str().unwrap()];
        args.extend(RIGID);
        args.extend(extra);
        assert_eq!(code(&liegyro(&args)), 0);
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv", &[]), run("b.csv", &[]));
    let stamped = String::from_utf8(run("c.csv", &["--timestamp"])).unwrap();
    assert!(stamped.contains("# generated_unix = "));
}

#[test]
fn json_output_round_trips() {
    let mut args = vec!["simulate", "--method", "rk4", "--samples", "5", "--format", "json"];
    args.extend(RIGID);
    let o = liegyro(&args);
    let traj = Trajectory::from_json(&stdout(&o)).unwrap();
    assert_eq!(traj.len(), 5);
    assert!(traj.metadata.iter().any(|(k, v)| k == "dt" && v == "0.0001"));
}

#[test]
fn compare_rigid_datum() {
    let mut args = vec!["compare", "--t-end", "2", "--samples", "50"];
    args.extend(RIGID);
    let o = liegyro(&args);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let worst: Vec<f64> =
        text.lines().last().unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert!(worst[0] <= 1e-9 && worst[1] <= 1e-9, "{worst:?}");
}

#[test]
fn compare_zero_span_and_pure_spin() {
    let mut args = vec!["compare", "--t-end", "0", "--samples", "2"];
    args.extend(RIGID);
    let text = stdout(&liegyro(&args));
    let worst: Vec<f64> = text.lines().last().unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert!(worst.iter().all(|&v| v == 0.0));

    let o = liegyro(&["compare", "--inertia", "1,1,2", "--momentum", "0,0,5", "--t-end", "2", "--samples", "40"]);
    assert_eq!(code(&o), 0);
    let worst: Vec<f64> =
        stdout(&o).lines().last().unwrap().split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert!(worst.iter().all(|&v| v <= 1e-10), "{worst:?}");
}

#[test]
fn compare_fails_with_coarse_rk4() {
    let mut args = vec!["compare", "--t-end", "2", "--samples", "5", "--dt", "0.1"];
    args.extend(RIGID);
    let o = liegyro(&args);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed-vs-rk4"));
}

#[test]
fn verify_suites() {
    let o = liegyro(&["verify", "--suite", "kernel"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["grad_E", "grad_m1", "grad_m2", "grad_m3", "grad_W3"] {
        assert!(text.contains(&format!("PASS kernel/{name} ")), "{name}");
    }
    let o = liegyro(&["verify", "--suite", "geometry"]);
    assert!(stdout(&o).contains("PASS geometry/cos_theta"));
    let o = liegyro(&["verify", "--suite", "coeffs"]);
    assert!(stdout(&o).contains("PASS coeffs/n4 formula 582385, symbolic 582385"));
}

#[test]
fn verify_seed_from_environment() {
    let run = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_liegyro"))
            .args(["verify", "--suite", "lemma1"])
            .env("LIEGYRO_SEED", seed)
            .output()
            .unwrap();
        (code(&o), stdout(&o))
    };
    let (c1, a) = run("7");
    let (_, b) = run("7");
    let (_, other) = run("8");
    assert_eq!(c1, 0);
    assert_eq!(a, b);
    assert_ne!(a, other);
    assert_eq!(run("seven").0, 1);
}

#[test]
fn usage_errors_exit_one() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["simulate", "--momentum", "0,3,4"],
        vec!["simulate", "--inertia", "1,1,2", "--momentum", "0,3,4", "--samples", "1"],
        vec!["simulate", "--inertia", "1,2,3", "--omega0", "1,0,1", "--method", "closed"],
        vec!["simulate", "--inertia", "1,2,3", "--momentum", "0,3,4", "--method", "rk4"],
        vec!["simulate", "--inertia", "1,1,2", "--momentum", "0,3"],
        vec!["simulate", "--bogus"],
        vec!["verify", "--suite", "nope"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = liegyro(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = liegyro(&["simulate", "--inertia", "1,2,3", "--omega0", "1,0,1", "--method", "closed"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("i1 = i2"));
    assert_eq!(code(&liegyro(&["--help"])), 0);
}

#[test]
fn asymmetric_body_runs_numerically() {
    let o = liegyro(&["simulate", "--inertia", "1,2,3", "--omega0", "0.2,1,0.3", "--method", "lie", "--samples", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(Trajectory::from_csv(&stdout(&o)).unwrap().len(), 4);
}

#[test]
fn divergence_exits_three() {
    let o = liegyro(&[
        "simulate", "--inertia", "1,2,3", "--omega0", "1e150,1e150,1e150", "--method", "rk4", "--dt", "0.1",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# rigid datum\ninertia = 1,1,2\nmomentum = 0,3,4\nsamples = 7\nmethod = rk4\n").unwrap();
    let o = liegyro(&["simulate", "--config", cfg.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let traj = Trajectory::from_csv(&stdout(&o)).unwrap();
    assert_eq!(traj.len(), 3);
    assert!(traj.metadata.contains(&("method".to_string(), "rk4".to_string())));
}
