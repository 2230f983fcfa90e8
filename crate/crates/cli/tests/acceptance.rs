//! Acceptance suite: criteria 1-10 run the theorem battery in-process,
//! criterion 11 drives the `check-suite` binary twice and compares bytes.
//! Prints one pass/fail line per criterion and fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use gradcalc_core::battery;
use serde_json::Value;

const SEED: u64 = 42;

/// Wall-clock budgets for the criteria that state one.
fn budget(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(1)),
        2 => Some(Duration::from_secs(120)),
        11 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

struct Line {
    id: u32,
    key: String,
    passed: bool,
    detail: String,
}

fn battery_line(id: u32) -> Line {
    let o = battery::run(id, SEED).expect("criterion exists");
    let within = budget(id).is_none_or(|b| o.seconds < b.as_secs_f64());
    let mut detail = format!("{} cases, {} failures, {:.2}s", o.cases, o.failures, o.seconds);
    for p in &o.parts {
        detail.push_str(&format!("; {} {} inputs/{} failures", p.name, p.cases, p.failures));
    }
    if !within {
        detail.push_str(" (over time budget)");
    }
    for n in &o.notes {
        detail.push_str(&format!("\n      {n}"));
    }
    Line {
        id,
        key: o.key.to_string(),
        passed: o.passed && within,
        detail,
    }
}

fn suite_json() -> (Vec<u8>, i32, Duration) {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_gradcalc"))
        .args(["check-suite", "--seed", &SEED.to_string(), "--format", "json"])
        .output()
        .expect("run check-suite");
    (out.stdout, out.status.code().unwrap_or(-1), started.elapsed())
}

fn cli_line() -> Line {
    let (first, code_a, time_a) = suite_json();
    let (second, code_b, time_b) = suite_json();
    let identical = first == second;
    let parsed: Option<Value> = serde_json::from_slice(&first).ok();
    let all_ten = parsed.as_ref().is_some_and(|v| {
        let ids: Vec<u64> = v["criteria"]
            .as_array()
            .map(|a| a.iter().filter_map(|c| c["id"].as_u64()).collect())
            .unwrap_or_default();
        ids == (1..=10).collect::<Vec<u64>>() && v["passed"] == true && v["schema"] == 1
    });
    let within = time_a.max(time_b) < budget(11).unwrap();
    Line {
        id: 11,
        key: "cli-determinism".into(),
        passed: identical && all_ten && within && code_a == 0 && code_b == 0,
        detail: format!(
            "byte-identical: {identical}, criteria 1-10 reported passing: {all_ten}, exit codes {code_a}/{code_b}, runs {:.2}s and {:.2}s",
            time_a.as_secs_f64(),
            time_b.as_secs_f64()
        ),
    }
}

#[test]
fn acceptance() {
    let mut lines: Vec<Line> = (1..=10).map(battery_line).collect();
    lines.push(cli_line());
    println!();
    for l in &lines {
        println!(
            "criterion {:>2} {:<22} {}  {}",
            l.id,
            l.key,
            if l.passed { "PASS" } else { "FAIL" },
            l.detail
        );
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
