use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_omega-probe"));
    c.env_remove("OMEGA_PROBE_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omega-probe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn generate(name: &str, omega: &str, n: &str, narrow: &str) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap().to_string();
    let o = run(&[
        "generate", "--omega", omega, "--n", n, "--narrow", narrow, "--seed", "3", "-o", &p,
    ]);
    assert!(o.status.success(), "{}", text(&o));
    p
}

#[test]
fn reconstruct_and_verify_round_trip() {
    let poly = generate("hept.json", "pi/3", "7", "0");
    let tr = scratch("hept.jsonl");
    let tr = tr.to_str().unwrap();
    let o = run(&[
        "reconstruct",
        "--polygon",
        &poly,
        "--omega",
        "pi/3",
        "--transcript",
        tr,
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("exact = true"));
    let o = run(&[
        "verify",
        "--polygon",
        &poly,
        "--omega",
        "pi/3",
        "--transcript",
        tr,
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("PASS"));
    // the same transcript does not fit a different polygon
    let other = generate("other.json", "pi/3", "6", "0");
    let o = run(&[
        "verify",
        "--polygon",
        &other,
        "--omega",
        "pi/3",
        "--transcript",
        tr,
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
}

#[test]
fn probe_prints_one_record() {
    let poly = generate("probe.json", "pi/4", "6", "0");
    let o = run(&[
        "probe",
        "--polygon",
        &poly,
        "--omega",
        "pi/4",
        "--line",
        "-3,0,1,0",
    ]);
    assert!(o.status.success(), "{}", text(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("\"outcome\""));
}

#[test]
fn cloud_writes_csv_and_svg() {
    let poly = generate("cloud.json", "pi/2", "6", "1");
    let svg = scratch("cloud.svg");
    let o = run(&[
        "cloud",
        "--polygon",
        &poly,
        "--omega",
        "pi/2",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(String::from_utf8_lossy(&o.stdout).lines().count() > 6);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn duel_meets_the_lower_bound() {
    let o = run(&[
        "duel",
        "--omega",
        "pi/3",
        "--n",
        "6",
        "--algorithm",
        "greedy",
        "--seed",
        "1",
    ]);
    assert!(o.status.success(), "{}", text(&o));
    let t = text(&o);
    assert!(
        t.contains("probes_used = 10") && t.contains("audit: ok"),
        "{t}"
    );
}

#[test]
fn suite_reports_pass_and_csv() {
    let csv = scratch("suite.csv");
    let o = run(&[
        "suite",
        "--omega",
        "pi/2",
        "--n-min",
        "5",
        "--n-max",
        "9",
        "--trials",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("result: PASS"));
    let body = std::fs::read_to_string(csv).unwrap();
    assert!(body.starts_with("trial,n,n_b,omega,algorithm"));
    assert_eq!(body.lines().count(), 6);
}

#[test]
fn seed_can_come_from_the_environment() {
    let a = bin()
        .args(["generate", "--omega", "pi/4", "--n", "8"])
        .env("OMEGA_PROBE_SEED", "11")
        .output()
        .unwrap();
    let b = run(&["generate", "--omega", "pi/4", "--n", "8", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_with_two() {
    let o = run(&["generate", "--omega", "pi/6", "--n", "6", "--narrow", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["generate", "--omega", "two", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
}
