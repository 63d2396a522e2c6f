//! End-to-end acceptance: one pass/fail line per criterion. Criteria 1–11
//! drive the library verification suites directly; criterion 12 runs the
//! installed binary twice and compares reports byte for byte.

use std::process::Command;
use std::time::{Duration, Instant};
use wittsym::exec::ExecMode;
use wittsym::report::strip_timing;
use wittsym::verify::run_suite;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failures: Vec::new() }
    }

    fn check(&mut self, idx: u32, what: &str, ok: bool, detail: String) {
        println!(
            "criterion {idx:2}: {} — {what}{}",
            if ok { "pass" } else { "FAIL" },
            if detail.is_empty() {
                String::new()
            } else {
                format!(" ({detail})")
            }
        );
        if !ok {
            self.failures.push(format!("criterion {idx}: {what}: {detail}"));
        }
    }

    fn suite(&mut self, idx: u32, name: &str, what: &str, budget: Option<Duration>) {
        let started = Instant::now();
        match run_suite(name, 42, ExecMode::default()) {
            Ok(report) => {
                let elapsed = started.elapsed();
                let mut ok = report.pass;
                let mut detail = format!(
                    "{} properties in {:.1}s",
                    report.properties.len(),
                    elapsed.as_secs_f64()
                );
                for p in report.properties.iter().filter(|p| !p.pass) {
                    detail = format!("{}: {}", p.name, p.detail);
                }
                if let Some(b) = budget {
                    if elapsed > b {
                        ok = false;
                        detail = format!("over budget: {elapsed:?} > {b:?}");
                    }
                }
                self.check(idx, what, ok, detail);
            }
            Err(e) => self.check(idx, what, false, e.to_string()),
        }
    }
}

#[test]
fn acceptance() {
    let mut g = Gate::new();
    g.suite(
        1,
        "witt-ring",
        "Witt ring laws and ghost homomorphism",
        Some(Duration::from_secs(30)),
    );
    g.suite(2, "structure", "structure-map identities on W_S(F_q)", None);
    g.suite(3, "asw", "Artin–Schreier–Witt cokernel invariants", None);
    g.suite(4, "kato", "presented H^n matches the ASW oracle and vanishes at n >= 2", None);
    g.suite(5, "dec", "decomposition is a bijective ring homomorphism", None);
    g.suite(
        6,
        "certificates",
        "certificate generation, replay, corruption detection",
        Some(Duration::from_secs(60)),
    );
    g.suite(7, "welldef", "t and pi are PF-invariant, kill wp, and are onto", None);
    g.suite(8, "ntr", "norm-trace compatibility including the inseparable rule", None);
    g.suite(9, "cartier", "Cartier kernel is exactly the exact forms", None);
    g.suite(10, "mackey", "double-coset square for G_m and W_r", None);
    g.suite(11, "bta", "dlog-generator rewriting replays exactly", None);

    // CLI determinism: identical reports (timing stripped) and exit 0
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_wittsym"))
            .args(["verify", "--suite", "all", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let started = Instant::now();
    let (a, b) = (run(), run());
    let ok = a.status.success()
        && b.status.success()
        && strip_timing(&String::from_utf8_lossy(&a.stdout))
            == strip_timing(&String::from_utf8_lossy(&b.stdout));
    g.check(
        12,
        "CLI determinism under a fixed seed",
        ok,
        format!("two full runs in {:.1}s", started.elapsed().as_secs_f64()),
    );

    assert!(g.failures.is_empty(), "{}", g.failures.join("\n"));
}
