use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const WORKED: &str =
    "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]\n";

fn branesim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branesim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("worked.brane"), WORKED).unwrap();
    fs::write(
        dir.path().join("worked.rates"),
        "# worked example\nn = 10\nk = 5\nm = 5\n",
    )
    .unwrap();
    fs::write(dir.path().join("pino.brane"), "pino<n>(0)[void]").unwrap();
    fs::write(dir.path().join("ten.rates"), "n = 10").unwrap();
    fs::write(dir.path().join("void.brane"), "void").unwrap();
    dir
}

#[test]
fn oracle_golden() {
    let dir = workspace();
    let out = branesim(
        &["oracle", "--input", "pino.brane", "--rates", "ten.rates"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "id -> [void] : 10\n");
    let out = branesim(&["oracle", "--input", "void.brane"], dir.path());
    assert_eq!(stdout(&out), "");
    let out = branesim(
        &[
            "oracle",
            "--input",
            "worked.brane",
            "--rates",
            "worked.rates",
        ],
        dir.path(),
    );
    let text = stdout(&out);
    let id: Vec<&str> = text.lines().filter(|l| l.starts_with("id ")).collect();
    assert_eq!(id.len(), 1);
    assert!(id[0].ends_with(" : 10000000"));
}

#[test]
fn check_golden() {
    let dir = workspace();
    let out = branesim(&["check", "--input", "pino.brane"], dir.path());
    assert_eq!(
        stdout(&out),
        "canonical: pino<n>(0)[void]\ncells: 1\nsize: 2\n"
    );
}

#[test]
fn run_first_step() {
    let dir = workspace();
    let out = branesim(
        &[
            "run",
            "--input",
            "worked.brane",
            "--rates",
            "worked.rates",
            "--seed",
            "3",
            "--max-steps",
            "1",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("run,step,time,kind,name,propensity"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        (fields[0], fields[1], fields[3], fields[4], fields[5]),
        ("0", "1", "phago", "n", "10000000")
    );
    assert_eq!(lines.next(), None);
}

#[test]
fn void_run_is_empty() {
    let dir = workspace();
    let out = branesim(
        &["run", "--input", "void.brane", "--max-steps", "5"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "run,step,time,kind,name,propensity\n");
}

#[test]
fn files_are_reproducible() {
    let dir = workspace();
    let mut outputs = Vec::new();
    for tag in ["a", "b"] {
        let trace = format!("trace_{tag}.csv");
        let census = format!("census_{tag}.csv");
        let out = branesim(
            &[
                "run",
                "--input",
                "worked.brane",
                "--rates",
                "worked.rates",
                "--seed",
                "11",
                "--max-steps",
                "30",
                "--runs",
                "3",
                "--trace",
                &trace,
                "--census",
                &census,
                "--census-every",
                "10",
                "--check",
            ],
            dir.path(),
        );
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push((
            fs::read(dir.path().join(&trace)).unwrap(),
            fs::read(dir.path().join(&census)).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let census = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(census.starts_with("run,time,outer,complex,count\n"));
    assert_eq!(
        String::from_utf8(outputs[0].0.clone())
            .unwrap()
            .lines()
            .count(),
        1 + 3 * 30
    );
}

#[test]
fn exit_codes() {
    let dir = workspace();
    fs::write(dir.path().join("bad.brane"), "phago<n>[").unwrap();
    fs::write(dir.path().join("bad.rates"), "n = zero").unwrap();
    let parse = branesim(
        &["run", "--input", "bad.brane", "--max-steps", "1"],
        dir.path(),
    );
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("1:10"));
    let rates = branesim(
        &[
            "run",
            "--input",
            "pino.brane",
            "--rates",
            "bad.rates",
            "--max-steps",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(rates.status.code(), Some(2));
    let limits = branesim(&["run", "--input", "pino.brane"], dir.path());
    assert_eq!(limits.status.code(), Some(4));
}

#[test]
fn adequacy_command() {
    let dir = workspace();
    let out = branesim(
        &[
            "adequacy",
            "--cases",
            "50",
            "--seed",
            "4",
            "--max-depth",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("0 failures\n"));
}
