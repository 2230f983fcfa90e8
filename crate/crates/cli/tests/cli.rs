use std::io::Write;
use std::process::{Command, Stdio};

use gradcalc::output::Format;
use gradcalc::{run_script, RunOptions};
use serde_json::Value;

const PLANE: &str = "chart M { x:0, y:0 }\n";

fn run(src: &str, format: Format) -> (String, String, i32) {
    let (out, code) = run_script(src, &RunOptions::default(), format);
    (out.stdout, out.stderr, code)
}

fn json(src: &str) -> (Value, i32) {
    let (out, _, code) = run(src, Format::Json);
    (serde_json::from_str(&out).unwrap(), code)
}

#[test]
fn lift_prints_the_prolonged_field() {
    let (out, err, code) = run(&format!("{PLANE}vf X on M = x*d/dy\nlift X lambda=1 r=1\n"), Format::Text);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "> lift X lambda=1 r=1\nx*d/dy + x_1*d/dy_1\n");
}

#[test]
fn passing_check_exits_zero() {
    let (v, code) = json(&format!("{PLANE}tensor(2,0) antisym L on M = d/dx ^^ d/dy\ncheck poisson L\n"));
    assert_eq!(code, 0);
    assert_eq!(v["records"][0]["report"]["verdict"], "pass");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["gradcalc_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn failing_check_exits_one_with_witness() {
    let src = "chart E { x:1, y:2 }\nvf K on E = x*d/dy\ncheck weighted K k=1\ndegree K\n";
    let (v, code) = json(src);
    assert_eq!(code, 1);
    let report = &v["records"][0]["report"];
    assert_eq!(report["verdict"], "fail");
    assert!(report["witness"].is_object());
    // execution continues after a failed check
    assert_eq!(v["records"][1]["degree"]["value"], -1);
}

#[test]
fn parse_errors_exit_two() {
    let (v, code) = json(&format!("{PLANE}vf X on M = x * d/dz\n"));
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "E301");
    assert_eq!(v["error"]["stage"], "name");
    assert_eq!(v["error"]["message"], "z not in M");
    assert_eq!(v["error"]["line"], 2);
    let (_, err, code) = run("chart M { x:0 } @", Format::Text);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[E101] 1:17"), "{err}");
}

#[test]
fn semantic_errors_exit_three_after_earlier_output() {
    let src = format!("{PLANE}vf X on M = d/dx\nform w on M = dx\nlift X lambda=0 r=1\nbracket lie X w\nd X\n");
    let (v, code) = json(&src);
    assert_eq!(code, 3);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);
    assert_eq!(v["error"]["code"], "E401");
    assert_eq!(v["error"]["line"], 5);
}

#[test]
fn commands_cover_the_engine() {
    let src = format!(
        "{PLANE}vf X on M = x*d/dy
vf Y on M = y*d/dx
fn f on M = x^2*y
form w on M = x*dy
tensor(1,1) J on M = d/dy ox dx - d/dx ox dy
bracket lie X Y as Z
liederiv X w
d w
check almost-complex J
check nijenhuis J
lift J lambda=1 r=1 as J1
check almost-complex J1
oracle taylor f lambda=2 r=3
oracle spot Z Z
check involutive X Y
eval f at x=2, y=-1/3
"
    );
    let (out, err, code) = run(&src, Format::Text);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("Z = x*d/dx - y*d/dy"), "{out}");
    assert!(out.contains("> d w\ndx ^^ dy\n"), "{out}");
    assert!(out.contains("> eval f at x=2, y=-1/3\n-4/3\n"), "{out}");
}

#[test]
fn json_is_deterministic_for_a_seed() {
    let src = format!("{PLANE}vf X on M = d/dx\nvf Y on M = x*d/dy\ncheck involutive X Y\ncheck weighted-distribution X Y\n");
    let go = |seed| run_script(&src, &RunOptions { seed, samples: 5 }, Format::Json).0.stdout;
    assert_eq!(go(7), go(7));
    let v: Value = serde_json::from_str(&go(7)).unwrap();
    assert_eq!(v["records"][0]["report"]["seed"], 7);
    assert_eq!(v["records"][0]["report"]["probabilistic"], true);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gradcalc"))
}

#[test]
fn binary_reads_stdin_and_sets_exit_codes() {
    let mut child = binary()
        .args(["run", "-", "--format", "json", "--seed", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(format!("{PLANE}tensor(2,0) antisym L on M = d/dx ^^ d/dy + y*d/dy ^^ d/dx\ncheck poisson L\n").as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 3);

    let dir = std::env::temp_dir().join(format!("gradcalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.gc");
    std::fs::write(&file, "chart M { x:0 }\nvf X on M = d/dx\nvf Y on M = x*d/dx\ncheck poisson X Y\n").unwrap();
    let out = binary().arg("run").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E202"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_suite_subset_runs() {
    let out = binary().args(["check-suite", "--only", "1", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criteria"][0]["key"], "lift-displays");
    assert_eq!(v["seed"], 42);
}
