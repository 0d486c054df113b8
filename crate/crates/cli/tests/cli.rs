//! Runs the binary against the shipped documents. Golden outputs live in
//! tests/golden; regenerate with `UPDATE_GOLDEN=1 cargo test -p eqbundle-cli`.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqbundle")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eqbundle"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, want, "output of {args:?} differs from {name}");
}

#[test]
fn golden_dimension() {
    golden("dimension_lift1.txt", &["dimension", &data("three_cp2_bar_lift1.toml")]);
    golden("dimension_lift2.txt", &["dimension", &data("three_cp2_bar_lift2.toml")]);
    golden("dimension_lift2.json", &["--machine", "dimension", &data("three_cp2_bar_lift2.toml")]);
    golden("dimension_s4.txt", &["dimension", &data("s4_su2.toml")]);
}

#[test]
fn golden_checks() {
    golden("check_rotation.txt", &["check", &data("three_cp2_bar_lift1.toml")]);
    golden("check_line.txt", &["check", "--mode", "line", &data("cp2_three_points.toml")]);
    golden("check_line_fixed.json", &["check", "--mode", "line", "--machine", &data("cp2_fixed_line.toml")]);
    golden("check_su2.txt", &["check", "--mode", "su2", &data("s4_su2.toml")]);
    golden("check_su2_bar.txt", &["check", "--mode", "su2", &data("cp2_bar_su2.toml")]);
    golden("gsign.txt", &["gsign", &data("three_cp2_bar_lift1.toml")]);
}

#[test]
fn golden_solve_expand_sum_search() {
    golden("solve_m.txt", &["solve", &data("cp2_fixed_line.toml"), "--free", "m[0]"]);
    golden("solve_lambda.txt", &["solve", &data("cp2_three_points.toml"), "--free", "lambda[2]"]);
    golden("expand_point.txt", &["expand", "point", "--a", "1", "--b", "2", "--order", "4", "--p", "5"]);
    golden("expand_boundary.txt", &["expand", "boundary", "--c", "2", "--m", "3", "--order", "3"]);
    golden(
        "expand_su2_sphere.json",
        &["expand", "su2-sphere", "--c", "2", "--alpha", "-1", "--m", "-1", "--ell", "1", "--machine"],
    );
    golden("sum_spheres.txt", &["sum", &data("cp2_bar_su2.toml"), &data("cp2_bar_weight3.toml"), "--at", "spheres"]);
    golden(
        "search_p5.txt",
        &[
            "search",
            "--p",
            "5",
            "--points",
            "3",
            "--sphere",
            "-2",
            "--signature",
            "-3",
            "--euler",
            "5",
            "--b2",
            "3",
            "--limit",
            "6",
        ],
    );
}

#[test]
fn solve_values() {
    let out = run(&["--machine", "solve", &data("cp2_fixed_line.toml"), "--free", "m[0]"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], -1);
    // λ_2 ≡ λ + b with λ = 1, b = 3 mod 7
    let out = run(&["--machine", "solve", &data("cp2_three_points.toml"), "--free", "lambda[2]"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"].as_i64().unwrap().rem_euclid(7), 4);
}

#[test]
fn dimensions_of_example() {
    for (file, want) in [("three_cp2_bar_lift1.toml", 1), ("three_cp2_bar_lift2.toml", 3)] {
        let out = run(&["dimension", &data(file)]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).ends_with(&format!("dimension: {want}\n")));
    }
}

const BASE: &str = "p = 5\nsignature = 1\neuler = 3\nb2 = 1\n";

#[test]
fn exit_codes() {
    // unreadable
    assert_eq!(code(&run_stdin(&["check", "-"], "p = [")), 2);
    assert_eq!(code(&run_stdin(&["check", "-"], "p = 5")), 2);
    assert_eq!(code(&run(&["check", "/nonexistent/file.toml"])), 2);
    assert_eq!(code(&run(&["solve", &data("cp2_fixed_line.toml"), "--free", "mu[0]"])), 2);
    assert_eq!(code(&run(&["expand", "point", "--a", "0", "--b", "1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    // readable but unusable
    assert_eq!(code(&run(&["check", "--mode", "line", &data("s4_su2.toml")])), 3);
    assert_eq!(code(&run(&["dimension", &data("cp2_three_points.toml")])), 3);
    assert_eq!(code(&run(&["solve", &data("cp2_three_points.toml"), "--free", "lambda[0]", "--free", "lambda[1]"])), 3);
    assert_eq!(code(&run(&["solve", &data("cp2_three_points.toml")])), 3);
    let zero = format!("{BASE}points = [[0, 1], [1, 2], [1, 3]]\n");
    assert_eq!(code(&run_stdin(&["check", "-"], &zero)), 3);
    let search = ["search", "--p", "5", "--points", "2", "--signature", "1", "--euler", "3", "--b2", "1"];
    assert_eq!(code(&run(&search)), 3);
    // relation failures
    let perturbed = format!("{BASE}points = [[1, 2], [1, -1], [-1, -1]]\n");
    let out = run_stdin(&["check", "-"], &perturbed);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
    let unsolvable = "p = 5\nsignature = 1\neuler = 3\nb2 = 1\npoints = [[1, 1]]\nspheres = [{ c = 1, alpha = 5 }]\n\
                      [line]\nlambda_points = [1]\nlambda_spheres = [0]\nm_spheres = [0]\n";
    assert_eq!(code(&run_stdin(&["solve", "-", "--free", "lambda_sphere[0]"], unsolvable)), 1);
    let fibre_as_adjoint = "p = 5\nsignature = 0\neuler = 2\nb2 = 0\npoints = [[1, 2], [1, -2]]\n\
                            [su2]\nweights = \"adjoint\"\nell_points = [3, 4]\nc2 = 1\n";
    let out = run_stdin(&["dimension", "-"], fibre_as_adjoint);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not an integer"));
}

#[test]
fn machine_mode_exit_codes_match() {
    let perturbed = format!("{BASE}points = [[1, 2], [1, -1], [-1, -1]]\n");
    let out = run_stdin(&["--machine", "check", "-"], &perturbed);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let out = run_stdin(&["--machine", "check", "-"], "p = [");
    assert_eq!(code(&out), 2);
}

#[test]
fn assume_m_zero() {
    let doc = "p = 5\nsignature = -1\neuler = 3\nb2 = 1\npoints = [[2, -2]]\nspheres = [{ c = 2, alpha = -1 }]\n\
               [su2]\nell_points = [2]\nell_spheres = [0]\nc2 = 1\n";
    assert_eq!(code(&run_stdin(&["dimension", "-"], doc)), 3);
    assert_eq!(code(&run_stdin(&["dimension", "-", "--assume-m-zero"], doc)), 0);
}

#[test]
fn sum_output_round_trips_through_check() {
    let out = run(&[
        "sum",
        &data("three_cp2_bar_lift1.toml"),
        &data("three_cp2_bar_lift1.toml"),
        "--at",
        "points",
        "--reverse-second",
    ]);
    assert_eq!(code(&out), 0);
    let check = run_stdin(&["check", "-"], &stdout(&out));
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}
