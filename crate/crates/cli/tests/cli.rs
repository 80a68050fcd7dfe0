use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use toricoh::fan::{build_del_pezzo_fan, Fan};

const GOLDEN: &[(&str, &[&str])] = &[
    ("info", &["info", "--fan", "delpezzo:2"]),
    ("validate", &["validate", "--fan", "pn:2"]),
    ("symmetry", &["symmetry", "--fan", "delpezzo:4"]),
    ("cohomology", &["cohomology", "--fan", "pn:1", "--divisor", "-2,0"]),
    ("ext", &["ext", "--fan", "pn:1", "--l1", "0,0", "--l2", "2,0"]),
    ("search-h1", &["search-h1", "--fan", "pn:1", "--box", "2"]),
    ("pattern-homology", &["pattern-homology", "--fan", "delpezzo:2", "--pattern-neg", "1,4"]),
    ("cycle-check", &["cycle-check", "--fan", "delpezzo:2", "--pattern-neg", "1,4", "--dim", "1"]),
    ("chow-mult", &["chow-mult", "--fan", "delpezzo:2", "--a", "1,0,0,0,0,0", "--b", "1,0,0,0,0,0"]),
    ("chow-split", &["chow-split", "--fan", "delpezzo:2", "--box", "1"]),
    ("prop43", &["prop43", "--n", "2", "--i", "1", "--coeff", "1"]),
    ("rr-chi", &["rr-chi", "--fan", "delpezzo:2", "--named", "E1=1,E2=1,E3=1,E4=1,E5=1,E6=1"]),
];

fn toricoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricoh"))
        .args(args)
        .env_remove("TORICOH_MAX_RAYS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = toricoh(args);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code().expect("exit code"))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let out = toricoh(args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden_dir().join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path:?}"));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name}");
    }
}

#[test]
fn reports_follow_the_schema() {
    let keys = ["argv", "command", "error", "exit_code", "fan", "result", "status", "warnings"];
    for (name, args) in GOLDEN {
        let (v, code) = json(args);
        let obj = v.as_object().unwrap();
        assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), keys, "{name}");
        assert_eq!(v["command"], *name);
        assert_eq!(v["status"], "ok");
        assert_eq!(v["exit_code"], code);
        assert!(v["argv"].is_array() && v["warnings"].is_array());
        assert!(v["result"].is_object());
        for field in ["source", "dimension", "ray_count", "rays", "max_cones", "verified"] {
            assert!(v["fan"].get(field).is_some(), "{name}: fan.{field}");
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for (_, args) in GOLDEN {
        let a = toricoh(args);
        let b = toricoh(args);
        assert_eq!(a.stdout, b.stdout);
    }
}

fn leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        Value::Array(items) => items.iter().for_each(|x| leaves(x, out)),
        Value::String(s) => out.push(s.clone()),
        other => out.push(other.to_string()),
    }
}

#[test]
fn table_mode_shows_every_value() {
    for (name, args) in GOLDEN {
        let (v, _) = json(args);
        let mut table_args = vec!["--format", "table"];
        table_args.extend_from_slice(args);
        let table = String::from_utf8(toricoh(&table_args).stdout).unwrap();
        let mut values = Vec::new();
        leaves(&v["result"], &mut values);
        leaves(&v["fan"], &mut values);
        for value in values {
            assert!(table.contains(&value), "{name}: {value} missing from table");
        }
    }
}

#[test]
fn classical_examples() {
    let (v, _) = json(&["cohomology", "--fan", "pn:1", "--divisor", "-2,0"]);
    assert_eq!(v["result"]["h"], serde_json::json!([0, 1]));
    let (v, _) = json(&["search-h1", "--fan", "pn:2", "--box", "3"]);
    assert_eq!(v["result"]["class_count"], 0);
    let (v, _) = json(&["cycle-check", "--fan", "delpezzo:2", "--pattern-neg", "1,4", "--dim", "1"]);
    assert_eq!(v["result"]["holds"], false);
    assert!(v["result"]["incidence"].as_array().unwrap().iter().all(|r| r["count"] == 1));
    let (v, _) = json(&["info", "--fan", "pn:3"]);
    assert_eq!(v["result"]["ray_count"], 4);
    let (v, _) = json(&["info", "--fan", "delpezzo:2"]);
    assert_eq!(v["result"]["ray_count"], 6);
    let (v, _) = json(&["rr-chi", "--fan", "delpezzo:2", "--divisor", "1,1,1,1,1,1"]);
    assert_eq!(v["result"]["chi_riemann_roch"], "7");
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn fan_files_round_trip() {
    let fan = build_del_pezzo_fan(2).unwrap();
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("v2.json");
    std::fs::write(&path, fan.to_json_string()).unwrap();
    assert_eq!(Fan::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap(), fan);

    let (from_file, code) = json(&["cohomology", "--fan", path.to_str().unwrap(), "--divisor", "1,0,-1,2,0,0"]);
    let (built, _) = json(&["cohomology", "--fan", "delpezzo:2", "--divisor", "1,0,-1,2,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(from_file["result"], built["result"]);
    assert_eq!(from_file["fan"]["rays"], built["fan"]["rays"]);
    assert_eq!(from_file["fan"]["max_cones"], built["fan"]["max_cones"]);
}

#[test]
fn bad_fans_are_refused() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let dup = dir.join("duplicate.json");
    std::fs::write(&dup, r#"{"dimension":1,"rays":[[1],[1]],"max_cones":[[1],[2]]}"#).unwrap();
    let (v, code) = json(&["info", "--fan", dup.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");

    // a single half-line: smooth but not complete
    let half = dir.join("half.json");
    std::fs::write(&half, r#"{"dimension":1,"rays":[[1]],"max_cones":[[1]]}"#).unwrap();
    let half = half.to_str().unwrap();
    assert_eq!(json(&["info", "--fan", half]).1, 2);
    let (v, code) = json(&["info", "--fan", half, "--allow-unverified"]);
    assert_eq!(code, 0);
    assert_eq!(v["fan"]["verified"], false);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(json(&["cohomology", "--fan", half, "--allow-unverified", "--divisor", "0"]).1, 2);
    let (v, code) = json(&["validate", "--fan", half]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["complete"], false);

    assert_eq!(json(&["info", "--fan", "delpezzo:3"]).1, 2);
    assert_eq!(json(&["info", "--fan", "cube:2"]).1, 2);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(toricoh(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(toricoh(&["cohomology", "--fan", "pn:1"]).status.code(), Some(64));
    assert_eq!(toricoh(&["cohomology", "--fan", "pn:1", "--divisor", "a,b"]).status.code(), Some(64));
    assert_eq!(toricoh(&["info", "--fan", "pn:1", "--bogus"]).status.code(), Some(64));
    assert_eq!(toricoh(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(json(&["cohomology", "--fan", "pn:1", "--divisor", "1,2,3"]).1, 2);
    assert_eq!(json(&["prop43", "--n", "2", "--i", "4"]).1, 2);
    assert_eq!(json(&["prop43", "--n", "2", "--i", "1", "--coeff", "0"]).1, 2);
    assert_eq!(json(&["chow-mult", "--fan", "pn:2", "--a", "1,0,0", "--b", "1,0,0"]).1, 2);
    assert_eq!(json(&["search-h1", "--fan", "pn:1", "--box", "0"]).1, 2);
    let capped = Command::new(env!("CARGO_BIN_EXE_toricoh"))
        .args(["cohomology", "--fan", "delpezzo:4", "--divisor", "0,0,0,0,0,0,0,0,0,0"])
        .env("TORICOH_MAX_RAYS", "8")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}
