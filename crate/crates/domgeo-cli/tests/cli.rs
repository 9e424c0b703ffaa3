//! End-to-end tests driving the compiled `domgeo` binary.

use std::path::Path;
use std::process::{Command, Output};

fn domgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domgeo"))
        .args(args)
        .env_remove("DOMGEO_THREADS")
        .output()
        .expect("binary runs")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const THREE_POINTS: &str = "3 1 2\n0 0 0\n1 2 2\n5 1 1\n";

#[test]
fn solve_prints_the_expected_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    write(&input, THREE_POINTS);
    for algo in ["brute", "sweep", "rangetree"] {
        let out = domgeo(&["solve", "--algo", algo, "--input", input.to_str().unwrap()]);
        assert!(out.status.success(), "{algo}: {}", stderr(&out));
        assert_eq!(stdout(&out), "0 1 1\n1 - -\n2 1 16\n", "{algo}");
    }
}

#[test]
fn solve_output_is_bit_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let out_a = dir.path().join("a.txt");
    let out_b = dir.path().join("b.txt");
    let gen = domgeo(&[
        "gen", "--n", "200", "--seed", "5", "--dist", "grid",
        "--output", input.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    for out_path in [&out_a, &out_b] {
        let out = domgeo(&[
            "solve", "--algo", "sweep",
            "--input", input.to_str().unwrap(),
            "--output", out_path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
}

#[test]
fn verify_passes_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    for (algo, d_real, d_feat) in [("sweep", "1", "2"), ("rangetree", "2", "3"), ("offline", "2", "2")] {
        for seed in ["3", "4"] {
            let input = dir.path().join(format!("{algo}-{seed}.txt"));
            let gen = domgeo(&[
                "gen", "--n", "120", "--d-real", d_real, "--d-feat", d_feat,
                "--seed", seed, "--dist", "grid", "--output", input.to_str().unwrap(),
            ]);
            assert!(gen.status.success());
            let out = domgeo(&[
                "solve", "--algo", algo, "--input", input.to_str().unwrap(), "--verify",
            ]);
            assert!(out.status.success(), "{algo} seed {seed}: {}", stderr(&out));
        }
    }
}

#[test]
fn incompatible_algorithm_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    write(&input, THREE_POINTS);
    let out = domgeo(&["solve", "--algo", "offline", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let out = domgeo(&["solve", "--algo", "voronoi", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_and_parse_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = domgeo(&[
        "solve", "--algo", "brute",
        "--input", dir.path().join("nope.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    let input = dir.path().join("short.txt");
    write(&input, "2 1 1\n");
    let out = domgeo(&["solve", "--algo", "brute", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    write(&input, "2 1 1\n0 1\n3 x\n");
    let out = domgeo(&["solve", "--algo", "brute", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn gen_is_deterministic_and_validates_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = domgeo(&[
            "gen", "--n", "50", "--d-real", "2", "--d-feat", "3", "--seed", "77",
            "--dist", "correlated", "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = domgeo(&["gen", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = domgeo(&["gen", "--n", "5", "--dist", "pareto"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn anti_chain_instances_have_no_matches() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("anti.txt");
    let gen = domgeo(&[
        "gen", "--n", "40", "--seed", "1", "--dist", "anti-chain",
        "--output", input.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let out = domgeo(&["solve", "--algo", "sweep", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    for (i, line) in stdout(&out).lines().enumerate() {
        assert_eq!(line, format!("{i} - -"));
    }
}

#[test]
fn bench_writes_counters_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = domgeo(&[
            "bench", "--algos", "brute,sweep", "--sizes", "32,64", "--seeds", "1,2,3",
            "--csv", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let read = |p: &Path| -> Vec<Vec<String>> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.split(',').map(str::to_owned).collect())
            .collect()
    };
    let (ra, rb) = (read(&a), read(&b));
    assert_eq!(
        ra[0].join(","),
        "algorithm,n,d_real,d_feat,seed,wall_ns,node_visits,indexes_built,indexed_points"
    );
    // Header plus 2 algorithms x 2 sizes x 3 seeds.
    assert_eq!(ra.len(), 1 + 12);
    assert_eq!(ra.len(), rb.len());
    for (la, lb) in ra.iter().zip(&rb).skip(1) {
        // Everything except wall time is exact and reproducible.
        assert_eq!(la[..5], lb[..5]);
        assert_eq!(la[6..], lb[6..]);
        for cell in &la[5..] {
            cell.parse::<u64>().unwrap();
        }
    }
}

#[test]
fn thread_env_var_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    write(&input, THREE_POINTS);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_domgeo"))
            .args(["solve", "--algo", "sweep", "--input", input.to_str().unwrap()])
            .env("DOMGEO_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("fast").status.code(), Some(2));
    let two = run("2");
    if cfg!(feature = "parallel") {
        assert_eq!(two.status.code(), Some(0), "{}", stderr(&two));
    } else {
        assert_eq!(two.status.code(), Some(2));
    }
}
