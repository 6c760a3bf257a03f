mod common;

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use common::golden;

fn eventodist(args: &[&str]) -> Output {
    run_in(&golden::dir(), args, None, None)
}

fn run_in(dir: &Path, args: &[&str], precision: Option<&str>, stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eventodist"));
    cmd.args(args)
        .current_dir(dir)
        .env_remove(eventodist::cli::PRECISION_ENV)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if let Some(p) = precision {
        cmd.env(eventodist::cli::PRECISION_ENV, p);
    }
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("eventodist-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn documented_invocations() {
    let o = eventodist(&[
        "binomial", "pmf", "--dist", "d.json", "--trials", "2", "--at", "1,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.2);
    let o = eventodist(&["poisson", "pmf", "--lambda", "l.json", "--at", "0,0"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), (-1.75f64).exp());
    let o = eventodist(&[
        "lattice", "count", "--target", "2,2", "--cap", "3", "--events", "x,y",
    ]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn rational_mode_prints_fractions() {
    let o = run_in(
        &golden::dir(),
        &[
            "binomial", "pmf", "--dist", "d.json", "--trials", "2", "--at", "1,1",
        ],
        Some("rational"),
        None,
    );
    assert_eq!(stdout(&o), "1/5\n");
    let bad = run_in(
        &golden::dir(),
        &[
            "binomial", "pmf", "--dist", "d.json", "--trials", "2", "--at", "1,1",
        ],
        Some("quad"),
        None,
    );
    assert_eq!(bad.status.code(), Some(2));
    assert!(
        stderr(&bad).contains("EVENTODIST_PRECISION"),
        "{}",
        stderr(&bad)
    );
}

#[test]
fn named_counts_and_stdin() {
    let text = std::fs::read_to_string(golden::dir().join("d.json")).unwrap();
    let o = run_in(
        &golden::dir(),
        &[
            "binomial",
            "pmf",
            "--dist",
            "-",
            "--trials",
            "2",
            "--at-named",
            "y=1,x=1",
        ],
        None,
        Some(&text),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(eventodist(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        eventodist(&["binomial", "pmf", "--dist", "d.json"])
            .status
            .code(),
        Some(1)
    );
    let help = eventodist(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("binomial"));
}

#[test]
fn validation_errors_exit_two_and_name_the_field() {
    let dir = scratch_dir("validation");
    std::fs::write(
        dir.join("bad.json"),
        r#"{ "events": ["x","y"], "p": { "": 0.4, "x": 0.2, "y": -0.3, "x,y": 0.7 } }"#,
    )
    .unwrap();
    let o = run_in(
        &dir,
        &[
            "binomial", "pmf", "--dist", "bad.json", "--trials", "2", "--at", "1,1",
        ],
        None,
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(r#"$.p["y"]"#), "{}", stderr(&o));

    std::fs::write(dir.join("broken.json"), "{\n  \"events\": [\"x\",\n}").unwrap();
    let o = run_in(
        &dir,
        &[
            "binomial",
            "table",
            "--dist",
            "broken.json",
            "--trials",
            "2",
        ],
        None,
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = run_in(
        &dir,
        &[
            "binomial",
            "pmf",
            "--dist",
            "missing.json",
            "--trials",
            "2",
            "--at",
            "1,1",
        ],
        None,
        None,
    );
    assert_eq!(o.status.code(), Some(2));

    let o = eventodist(&[
        "binomial", "pmf", "--dist", "d.json", "--trials", "2", "--at", "1,1,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tables_go_to_files() {
    let dir = scratch_dir("output");
    let target = dir.join("table.csv");
    let o = eventodist(&[
        "binomial",
        "table",
        "--dist",
        "d.json",
        "--trials",
        "3",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    assert_eq!(
        written,
        std::fs::read(golden::dir().join("binomial_table.csv")).unwrap()
    );
}

#[test]
fn sampling_is_byte_deterministic() {
    let args = [
        "sample",
        "bernoulli",
        "--dist",
        "d.json",
        "--trials",
        "3",
        "--reps",
        "50",
        "--seed",
        "9",
    ];
    let a = eventodist(&args);
    let b = eventodist(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y"));
    assert_eq!(lines.count(), 50);

    let args = [
        "sample", "poisson", "--lambda", "l.json", "--reps", "20", "--seed", "9", "--format",
        "json",
    ];
    let p = eventodist(&args);
    let rows: serde_json::Value = serde_json::from_slice(&p.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 20);
    assert_eq!(p.stdout, eventodist(&args).stdout);
}

#[test]
fn moments_and_convergence() {
    let o = eventodist(&["moments", "binomial", "--dist", "d.json", "--trials", "10"]);
    let text = stdout(&o);
    assert!(text.starts_with("event,mean,x,y\n"), "{text}");
    assert_eq!(text.lines().count(), 3);
    let o = eventodist(&["moments", "poisson", "--lambda", "l.json"]);
    assert_eq!(
        stdout(&o),
        "event,mean,x,y\nx,1.25,1.25,0.25\ny,0.75,0.25,0.75\n"
    );
    let o = eventodist(&[
        "poisson",
        "converge",
        "--lambda",
        "l.json",
        "--trials",
        "10,100,1000",
        "--box",
        "6",
    ]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,sup_deviation");
    assert_eq!(rows.len(), 4);
    let last: f64 = rows[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!(last < 1e-2);
}

#[test]
fn poisson_table_covers_the_box() {
    let o = eventodist(&[
        "poisson", "table", "--lambda", "l.json", "--box", "6", "--format", "json",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 49);
    let mass: f64 = rows
        .iter()
        .map(|r| r["probability"].as_f64().unwrap())
        .sum();
    assert!(mass > 0.99 && mass <= 1.0 + 1e-12);
}
