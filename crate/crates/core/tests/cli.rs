use std::io::Read;
use std::process::{Command, Stdio};
use std::time::Instant;

use wallace_rng::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_STATE, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wallace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn parse_lines(s: &str) -> Vec<f64> {
    s.lines().map(|l| l.parse().unwrap()).collect()
}

#[test]
fn gen_prints_parseable_lines() {
    let (code, out, _) = invoke(&["gen", "--seed", "1", "--count", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(parse_lines(&out).len(), 4);
}

#[test]
fn text_and_binary_agree() {
    let (_, text, _) = invoke(&["gen", "--seed", "8", "--count", "50", "--mu", "-2", "--sigma", "3"]);
    let mut bin = Vec::new();
    let code = run(
        ["wallace", "gen", "--seed", "8", "--count", "50", "--mu", "-2", "--sigma", "3", "--format", "f64le"],
        &mut bin,
        &mut Vec::new(),
    );
    assert_eq!(code, EXIT_OK);
    let decoded: Vec<f64> = bin.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let parsed = parse_lines(&text);
    assert_eq!(decoded.len(), 50);
    assert!(decoded.iter().zip(&parsed).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn state_file_resumes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.bin");
    let p = path.to_str().unwrap();
    let (c1, first, _) = invoke(&["gen", "--seed", "1", "--count", "10", "--state-file", p]);
    let (c2, second, _) = invoke(&["gen", "--seed", "1", "--count", "10", "--state-file", p]);
    let (c3, whole, _) = invoke(&["gen", "--seed", "1", "--count", "20"]);
    assert_eq!((c1, c2, c3), (EXIT_OK, EXIT_OK, EXIT_OK));
    assert_eq!(first + &second, whole);
}

#[test]
fn malformed_state_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.bin");
    std::fs::write(&path, b"not a state file").unwrap();
    let (code, _, err) = invoke(&["gen", "--state-file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_STATE);
    assert!(err.contains("magic"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["gen", "--sigma", "-1"][..],
        &["gen", "--f", "0"],
        &["gen", "--pool-exponent", "40"],
        &["gen", "--bogus"],
        &["test", "--samples", "0"],
        &["test", "--methods", "mersenne"],
        &["bench", "--seconds", "0"],
        &["diag", "--gamma", "1024"],
        &["diag", "--samples", "100"],
        &[],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["gen", "stream", "test", "bench", "diag"] {
        assert!(out.contains(sub));
    }
}

#[test]
fn full_suite_passes_at_seed_one() {
    let (code, out, _) = invoke(&["test", "--suite", "all", "--seed", "1", "--f", "3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let summary = out.lines().last().unwrap();
    assert!(summary.starts_with("summary ") && summary.ends_with("result=PASS"), "{summary}");
    assert!(out.lines().filter(|l| l.starts_with("test=")).all(|l| l.ends_with("result=PASS")));
}

#[test]
fn flawed_configuration_fails_the_gate() {
    let (code, out, _) = invoke(&["test", "--suite", "autocorr", "--diag-flawed"]);
    assert_eq!(code, EXIT_FAILURE);
    let line = out.lines().find(|l| l.contains("wallace-unit-stride")).unwrap();
    assert!(line.contains("autocorr_lag_2047") && line.ends_with("result=FAIL"), "{line}");
    let r: f64 = line.split("statistic=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(r.abs() >= 0.5);
}

#[test]
fn diag_reports_both_configs() {
    let (code, out, _) = invoke(&["diag"]);
    assert_eq!(code, EXIT_OK);
    let r_of = |name: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(&format!("diag config={name} "))).unwrap();
        line.split("r=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap()
    };
    assert!(r_of("unit-stride").abs() >= 0.5);
    assert!(r_of("recommended").abs() <= 0.01);

    let (code, out, _) = invoke(&["diag", "--samples", "10000"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("diag ")).count(), 2);
}

#[test]
fn bench_rows_are_positive() {
    let start = Instant::now();
    let (code, out, _) = invoke(&["bench", "--seconds", "0.1"]);
    assert!(start.elapsed().as_secs_f64() < 2.0);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("bench ")).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let ns: f64 = row.rsplit("ns_per_value=").next().unwrap().parse().unwrap();
        assert!(ns > 0.0, "{row}");
    }
}

#[test]
fn binary_stream_is_deterministic_and_stops_on_close() {
    let exe = env!("CARGO_BIN_EXE_wallace");
    let mut heads = Vec::new();
    for _ in 0..2 {
        let mut child = Command::new(exe)
            .args(["stream", "--seed", "3", "--format", "f64le"])
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        let mut buf = [0u8; 80];
        child.stdout.as_mut().unwrap().read_exact(&mut buf).unwrap();
        drop(child.stdout.take());
        let status = child.wait().unwrap();
        assert_eq!(status.code(), Some(0));
        heads.push(buf);
    }
    assert_eq!(heads[0], heads[1]);

    let mut gen = Vec::new();
    run(["wallace", "gen", "--seed", "3", "--count", "10", "--format", "f64le"], &mut gen, &mut Vec::new());
    assert_eq!(&gen[..], &heads[0][..]);
}

#[test]
fn text_stream_is_newline_delimited() {
    let exe = env!("CARGO_BIN_EXE_wallace");
    let mut child = Command::new(exe)
        .args(["stream", "--format", "text"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut buf = [0u8; 4096];
    child.stdout.as_mut().unwrap().read_exact(&mut buf).unwrap();
    drop(child.stdout.take());
    assert_eq!(child.wait().unwrap().code(), Some(0));
    let text = String::from_utf8_lossy(&buf);
    let complete: Vec<&str> = text.lines().take(10).collect();
    assert!(complete.iter().all(|l| l.parse::<f64>().is_ok()));
}

#[test]
fn binary_runs_gen() {
    let out = Command::new(env!("CARGO_BIN_EXE_wallace")).args(["gen", "--count", "3"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_wallace")).args(["gen", "--sigma", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
