use std::path::Path;
use std::process::{Command, Output};

use atsp_cli::metrics::{lookup, parse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn atsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atsp")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn single_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.txt", "3 4\n");
    let out = atsp(&["solve", "--input", &input, "--output", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(dir.path().join("tour.txt")).unwrap(), "0\n");
    let pairs = parse(&std::fs::read_to_string(dir.path().join("metrics.txt")).unwrap());
    assert_eq!(lookup(&pairs, "tour_length"), Some("0"));
    assert_eq!(lookup(&pairs, "ratio_tour_mst"), Some("-"));
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.txt", "# pts\n0 0\n1 oops\n");
    let out = atsp(&["solve", "--input", &input]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn duplicates_warn_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "dup.txt", "0 0\n1 0\n0 0\n");
    let out = atsp(&["solve", "--input", &input]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("dropped 1 duplicate"));
    let pairs = parse(&stdout(&out));
    assert_eq!(lookup(&pairs, "duplicates_dropped"), Some("1"));
    assert_eq!(lookup(&pairs, "points"), Some("2"));
}

#[test]
fn random_planar_instance_passes_invariants_and_svg_is_pure() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let base = ["solve", "--n", "200", "--dim", "2", "--seed", "9", "--output"];
    let plain = atsp(&[&base[..], &[a.to_str().unwrap()]].concat());
    let drawn = atsp(&[&base[..], &[b.to_str().unwrap(), "--svg"]].concat());
    assert!(plain.status.success() && drawn.status.success());
    let ma = std::fs::read(a.join("metrics.txt")).unwrap();
    assert_eq!(ma, std::fs::read(b.join("metrics.txt")).unwrap());
    assert_eq!(std::fs::read(a.join("tour.txt")).unwrap(), std::fs::read(b.join("tour.txt")).unwrap());
    assert!(!a.join("tour.svg").exists());
    assert!(std::fs::read_to_string(b.join("tour.svg")).unwrap().contains("<polyline"));

    let text = String::from_utf8(ma).unwrap();
    let pairs = parse(&text);
    assert_eq!(lookup(&pairs, "points"), Some("200"));
    assert_eq!(lookup(&pairs, "repairs"), Some("0"));
    assert_eq!(lookup(&pairs, "ratio_lower_ok"), Some("true"));
    for (k, v) in pairs.iter().filter(|(k, _)| k.starts_with("level.")) {
        assert!(v.contains("connected=true"), "{k}");
        let field = |name: &str| -> usize {
            v.split_whitespace().find_map(|f| f.strip_prefix(name)).unwrap().parse().unwrap()
        };
        assert!(field("edges=") <= field("budget="), "{k}");
    }
}

#[test]
fn sequential_flag_gives_identical_metrics() {
    let a = atsp(&["solve", "--n", "120", "--dim", "3", "--seed", "4"]);
    let b = atsp(&["solve", "--n", "120", "--dim", "3", "--seed", "4", "--sequential"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strict_violation_exits_nonzero() {
    // literal side radius on this 1-D instance leaves a point isolated
    let mut r = ChaCha8Rng::seed_from_u64(93);
    let n = r.random_range(2..=200);
    let body: String = (0..n).map(|_| format!("{}\n", r.random::<f64>())).collect();
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "line.txt", &body);
    let out_dir = dir.path().join("out");
    let args = ["solve", "--input", &input, "--side-radius", "full", "--output", out_dir.to_str().unwrap()];
    let out = atsp(&args);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("invariant violated"));
    let pairs = parse(&std::fs::read_to_string(out_dir.join("metrics.txt")).unwrap());
    assert_eq!(lookup(&pairs, "status"), Some("violation"));

    let lenient = atsp(&["solve", "--input", &input, "--side-radius", "full", "--mode", "lenient"]);
    assert!(lenient.status.success());
    assert_eq!(lookup(&parse(&stdout(&lenient)), "repairs"), Some("1"));
    assert!(atsp(&["solve", "--input", &input]).status.success());
}

#[test]
fn sharpness_and_bench() {
    let out = atsp(&["sharpness", "--n", "8"]);
    assert!(out.status.success());
    let pairs = parse(&stdout(&out));
    assert_eq!(lookup(&pairs, "bound"), Some("16"));
    assert_eq!(lookup(&pairs, "bound_ok"), Some("true"));
    assert!(!atsp(&["sharpness", "--n", "10"]).status.success());

    let out = atsp(&["bench", "--sizes", "32,64,128,256"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let slope: f64 = lookup(&parse(&stdout(&out)), "slope_net_refinement").unwrap().parse().unwrap();
    assert!((2.8..=3.2).contains(&slope));
    assert!(!atsp(&["bench", "--sizes", "32,64"]).status.success());

    let out = atsp(&["bench", "--family", "uniform", "--dim", "2", "--sizes", "100,200,400"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("slope_total"));
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(!atsp(&["solve", "--n", "5", "--threshold", "1.5"]).status.success());
    assert!(!atsp(&["solve", "--n", "5", "--c0", "0"]).status.success());
    assert!(!atsp(&["solve"]).status.success());
}

#[test]
fn grid_backend_runs_at_small_c0() {
    let out = atsp(&["solve", "--n", "40", "--dim", "2", "--backend", "grid", "--c0", "2", "--grid-l", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let pairs = parse(&stdout(&out));
    assert_eq!(lookup(&pairs, "backend"), Some("grid"));
    assert_eq!(lookup(&pairs, "grid_l"), Some("8"));
}
