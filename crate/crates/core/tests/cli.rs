//! Black-box tests of the `wittsym` binary: documented examples, exit
//! codes, and the certificate file round trip.

use std::process::{Command, Output};

fn wittsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn asw_invariants_of_gf4() {
    let v = json(&wittsym(&["asw", "--field", "GF(4)", "--r", "1"]));
    assert_eq!(v["statement"], "eq:ASW");
    assert_eq!(v["results"]["invariants"], serde_json::json!([2]));
    assert_eq!(v["results"]["order"], 2);
}

#[test]
fn kato_h2_vanishes() {
    let v = json(&wittsym(&[
        "kato",
        "invariants",
        "--field",
        "GF(3)",
        "--r",
        "1",
        "--n",
        "2",
    ]));
    assert_eq!(v["statement"], "thm:bij n≥2");
    assert_eq!(v["results"]["invariants"], serde_json::json!([]));
}

#[test]
fn witt_addition_carries() {
    let v = json(&wittsym(&[
        "witt", "add", "--tset", "1,2", "--field", "GF(2)", "--x", "1,0", "--y", "1,0",
    ]));
    assert_eq!(v["results"]["result"], serde_json::json!([0, 1]));
}

#[test]
fn witt_ghost_coordinates() {
    let v = json(&wittsym(&[
        "witt", "ghost", "--tset", "1,2,3,6", "--x", "2,1,1,1",
    ]));
    assert_eq!(
        v["results"]["ghost"],
        serde_json::json!(["2", "6", "11", "75"])
    );
}

#[test]
fn parse_errors_exit_2() {
    // 2,4 is not divisor-closed
    let out = wittsym(&[
        "witt", "wp", "--tset", "2,4", "--field", "GF(2)", "--x", "1,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = wittsym(&["asw", "--field", "GF(6)", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = wittsym(&["verify", "--suite", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_exceeded_exits_3() {
    let out = wittsym(&["asw", "--field", "GF(9)", "--r", "2", "--bound-elems", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn certificate_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("wittsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("st.json");
    let v = json(&wittsym(&[
        "mackey",
        "certify",
        "--kind",
        "steinberg",
        "--field",
        "GF(5)",
        "--a",
        "2",
        "--l",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]));
    assert_eq!(v["results"]["verified"], true);
    let v = json(&wittsym(&["mackey", "verify", "--cert", path.to_str().unwrap()]));
    assert_eq!(v["results"]["ok"], true);
    assert_eq!(v["results"]["failed_at"], serde_json::Value::Null);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_format_renders() {
    let out = wittsym(&[
        "--format", "text", "asw", "--field", "GF(2)", "--r", "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("eq:ASW"), "text output: {text}");
    assert!(text.contains('4'), "invariant 4 shown: {text}");
}

#[test]
fn env_bounds_are_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_wittsym"))
        .args(["asw", "--field", "GF(9)", "--r", "2"])
        .env("WITTSYM_BOUND_ELEMS", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
    // explicit flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_wittsym"))
        .args(["asw", "--field", "GF(9)", "--r", "2", "--bound-elems", "8192"])
        .env("WITTSYM_BOUND_ELEMS", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
}
