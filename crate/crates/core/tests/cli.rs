//! End-to-end checks of the command-line front end: exit codes, config
//! handling, and the provenance guarantee that a CSV header reproduces its
//! own body.

use std::fs;
use std::path::Path;

use cavity_anneal::cli;

fn run(args: &[&str]) -> i32 {
    let argv = std::iter::once("cavity-anneal").chain(args.iter().copied());
    cli::run(argv)
}

fn body_of(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn validation_failures_exit_2() {
    assert_eq!(run(&["anneal", "--t_f", "0"]), 2);
    assert_eq!(run(&["anneal", "--no-such-flag"]), 2);
    assert_eq!(run(&["anneal", "--V", "0.5"]), 2);
    assert_eq!(run(&["phase-diagram", "--model", "adiabatic"]), 2);
    assert_eq!(run(&["anneal", "--model", "star-trek"]), 2);
}

#[test]
fn unknown_config_keys_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "t_ff = 100\n").unwrap();
    assert_eq!(run(&["anneal", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn numerical_abort_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // dt far too coarse: the integrator must abort, not emit garbage.
    assert_eq!(
        run(&[
            "anneal",
            "--t_f",
            "10",
            "--dt",
            "0.5",
            "--out",
            dir.path().to_str().unwrap(),
        ]),
        1
    );
}

#[test]
fn anneal_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        run(&["anneal", "--t_f", "20", "--nc", "1", "--out", out, "--cadence", "100"]),
        0
    );
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("## cavity-anneal anneal"));
    assert!(csv.contains("# t_f = 20"));
    assert!(csv.contains("t,Jt,n1,n2,n3,n4,nphot1,nphot2,fidelity"));
    assert!(dir.path().join("trajectory.svg").exists());

    // plots off suppresses the SVG.
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = dir2.path().to_str().unwrap();
    assert_eq!(
        run(&["anneal", "--t_f", "20", "--nc", "1", "--out", out2, "--plots", "off"]),
        0
    );
    assert!(!dir2.path().join("trajectory.svg").exists());
}

#[test]
fn provenance_header_reproduces_the_body() {
    let first = tempfile::tempdir().unwrap();
    let out1 = first.path().to_str().unwrap();
    assert_eq!(
        run(&[
            "anneal", "--t_f", "30", "--nc", "2", "--U", "0.45", "--out", out1, "--plots", "off",
        ]),
        0
    );
    let produced = fs::read_to_string(first.path().join("trajectory.csv")).unwrap();

    // Strip the leading comment marker: the header is a config file.
    let config_text: String = produced
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.strip_prefix("# ").unwrap_or(l))
        .collect::<Vec<_>>()
        .join("\n");
    let second = tempfile::tempdir().unwrap();
    let cfg = second.path().join("replay.conf");
    fs::write(&cfg, config_text).unwrap();

    let out2 = second.path().to_str().unwrap();
    assert_eq!(
        run(&[
            "anneal",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out2,
            "--plots",
            "off",
        ]),
        0
    );
    assert_eq!(
        body_of(&first.path().join("trajectory.csv")),
        body_of(&second.path().join("trajectory.csv")),
        "replaying the embedded provenance must reproduce the data rows"
    );
}

#[test]
fn config_file_flags_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "t_f = 20\nnc = 1\nU = 0.3\nplots = off\n").unwrap();
    let out = dir.path().join("a");
    assert_eq!(
        run(&[
            "anneal",
            "--config",
            cfg.to_str().unwrap(),
            "--U",
            "0.6",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let produced = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(produced.contains("# U = 0.6"), "flag must override the file");
    assert!(produced.contains("# t_f = 20"), "file value must survive");
}

#[test]
fn spectrum_csv_shape_matches_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // Coarse grid for speed; the column count is what the defaults pin.
    assert_eq!(
        run(&["spectrum", "--grid-points", "21", "--out", out, "--plots", "off"]),
        0
    );
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut rows = csv.lines().filter(|l| !l.starts_with('#'));
    let header = rows.next().unwrap();
    assert_eq!(
        header,
        "s,Jt,E1_rel,E2_rel,E3_rel,E4_rel,E5_rel,E6_rel,E7_rel,E8_rel,E9_rel,E10_rel"
    );
    assert_eq!(rows.count(), 21);
}
