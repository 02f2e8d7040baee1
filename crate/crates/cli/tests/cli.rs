use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use guardwalk::gen::{square, square_with_hole, two_hole_example};
use guardwalk::geometry::PolygonWithHoles;
use guardwalk::io::{parse_polygon, polygon_to_string};

fn gw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gw"))
        .args(args)
        .current_dir(dir)
        .env_remove("GW_SEED")
        .output()
        .expect("gw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn put(dir: &Path, name: &str, p: &PolygonWithHoles) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, polygon_to_string(p)).unwrap();
    path
}

#[test]
fn gen_round_trips() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        vec!["gen", "comb", "--teeth", "8"],
        vec!["gen", "ring-of-holes", "--holes", "2"],
        vec!["gen", "random", "--n", "40", "--holes", "2", "--seed", "7"],
    ] {
        let o = gw(&args, d.path());
        assert!(o.status.success(), "{}", stderr(&o));
        let p = parse_polygon(&stdout(&o)).unwrap();
        assert_eq!(polygon_to_string(&p), stdout(&o));
    }
    let comb = parse_polygon(&stdout(&gw(&["gen", "comb", "--teeth", "8"], d.path()))).unwrap();
    assert_eq!(comb.h(), 0);
    let ring = parse_polygon(&stdout(&gw(&["gen", "ring-of-holes", "--holes", "2"], d.path()))).unwrap();
    assert!(ring.n() >= 3 * ring.h() + 3);
}

#[test]
fn gen_random_is_seeded() {
    let d = tempfile::tempdir().unwrap();
    let a = gw(&["gen", "random", "--n", "40", "--seed", "7"], d.path());
    let b = gw(&["gen", "random", "--n", "40", "--seed", "7"], d.path());
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_gw"))
        .args(["gen", "random", "--n", "40"])
        .env("GW_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let e = gw(&["gen", "random", "--n", "40", "--seed", "8"], d.path());
    assert_ne!(a.stdout, e.stdout);
}

#[test]
fn bad_generator_parameters_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(gw(&["gen", "comb", "--teeth", "1"], d.path()).status.code(), Some(2));
}

#[test]
fn guards_summary_lines() {
    let d = tempfile::tempdir().unwrap();
    for (p, name, bound) in [(square(), "sq", 1), (square_with_hole(), "sqh", 4), (two_hole_example(), "fig", 8)] {
        let f = put(d.path(), name, &p);
        let o = gw(&["guards", f.to_str().unwrap()], d.path());
        assert!(o.status.success());
        let last = stdout(&o).lines().last().unwrap().to_string();
        let w: Vec<&str> = last.split_whitespace().collect();
        assert_eq!((w[0], w[2], w[3]), ("guards", "bound", &*bound.to_string()));
        assert!(w[1].parse::<usize>().unwrap() <= bound);
    }
    let f = put(d.path(), "sq", &square());
    assert!(stdout(&gw(&["guards", f.to_str().unwrap()], d.path())).ends_with("guards 1 bound 1\n"));
}

#[test]
fn invalid_polygon_file_exit_2_with_line() {
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("bad");
    fs::write(&f, "POLY 1\nouter 3\n0 0\n1 x\n0 1\n").unwrap();
    let o = gw(&["guards", f.to_str().unwrap()], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let o = gw(&["guards", "missing-file"], d.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_failures() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "sqh", &square_with_hole());
    let fs_ = f.to_str().unwrap();
    assert!(gw(&["guards", fs_, "-o", "g"], d.path()).status.success());
    let o = gw(&["verify", fs_, "g", "--samples", "3000"], d.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "coverage 1.0 connected yes bound ok\n");

    // one guard short
    let text = fs::read_to_string(d.path().join("g")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(1);
    fs::write(d.path().join("g1"), lines.join("\n")).unwrap();
    let o = gw(&["verify", fs_, "g1", "--samples", "3000"], d.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("uncovered point"), "{}", stderr(&o));

    // two opposite corners hidden from each other by the hole
    fs::write(d.path().join("g2"), "GUARDS 1\n0 0 0\n2 10 10\n").unwrap();
    let o = gw(&["verify", fs_, "g2", "--samples", "3000"], d.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("connected no"));
    assert!(stderr(&o).contains("component 1"));
}

#[test]
fn simulate_metrics_and_errors() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "sqh", &square_with_hole());
    let fs_ = f.to_str().unwrap();
    let o = gw(&["simulate", fs_, "--mode", "warmup", "--agents", "4", "--trace", "t", "--guards-out", "g"], d.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let m = stdout(&o);
    let w: Vec<&str> = m.split_whitespace().collect();
    assert_eq!((w[0], w[2], w[4], w[6]), ("rounds", "broadcasts", "peak_mem", "guards"));
    assert!(w[7].parse::<usize>().unwrap() <= 4);
    assert!(fs::read_to_string(d.path().join("t")).unwrap().starts_with("TRACE 1\n"));
    assert!(gw(&["verify", fs_, "g"], d.path()).status.success());

    let o = gw(&["simulate", fs_, "--mode", "small-memory"], d.path());
    assert!(o.status.success());
    let w: Vec<String> = stdout(&o).split_whitespace().map(String::from).collect();
    assert!(w[5].parse::<usize>().unwrap() <= guardwalk::sim::small_memory::MEMORY_BUDGET);

    let o = gw(&["simulate", fs_, "--model", "proximity"], d.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("rounds "));

    let o = gw(&["simulate", fs_, "--mode", "small-memory", "--agents", "2"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4 required"), "{}", stderr(&o));

    let o = gw(&["simulate", fs_, "--start", "5", "5"], d.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_overlays() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "sqh", &square_with_hole());
    let fs_ = f.to_str().unwrap();
    assert!(gw(&["guards", fs_, "-o", "g"], d.path()).status.success());
    let o = gw(&["render", fs_, "--dual", "--guards", "g"], d.path());
    assert!(o.status.success());
    let svg = stdout(&o);
    assert_eq!(svg.matches(r#"class="triangle""#).count(), 8);
    assert_eq!(svg.matches(r#"class="dual-node""#).count(), 8);
    assert_eq!(svg.matches(r#"class="dual-edge""#).count(), 8);
    let g = fs::read_to_string(d.path().join("g")).unwrap().lines().count() - 2;
    assert_eq!(svg.matches(r#"class="guard""#).count(), g);

    // a trace recorded on another polygon is refused
    let other = put(d.path(), "sq", &square());
    assert!(gw(&["simulate", other.to_str().unwrap(), "--trace", "t"], d.path()).status.success());
    let o = gw(&["render", fs_, "--trace", "t"], d.path());
    assert_eq!(o.status.code(), Some(2));
}
