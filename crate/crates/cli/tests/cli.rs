use std::process::{Command, Output};

use serde_json::Value;

fn germforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germforge"))
        .args(args)
        .env_remove("GERMFORGE_JET_BUDGET")
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = germforge(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn tau_of_a_cubic() {
    let o = germforge(&["tau", "-e", "z^3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("tau: 2"));
    assert_eq!(json(&["tau", "-e", "z^3"])["results"]["tau"], 2);
}

#[test]
fn theorem51_verdict() {
    let v = json(&["simple", "--f-codim", "1", "-g", "x^3+y^3+z^3+x*y*z"]);
    assert_eq!(v["results"]["status"], "NonSimple");
    assert_eq!(v["results"]["justification"], "Theorem51");
}

#[test]
fn catalog_overrides_for_the_quintic_cusp() {
    let v = json(&["simple", "-m", "(y^2, y^5)", "-g", "z^3"]);
    assert_eq!(v["results"]["status"], "Simple");
    assert_eq!(v["results"]["justification"], "Catalog(F_4)");
    assert_eq!(v["results"]["theorem_verdict"], "Unknown");
    let v = json(&["simple", "-m", "(y^2, y^5)", "-g", "z^4"]);
    assert_eq!(v["results"]["status"], "NonSimple");
}

#[test]
fn exit_codes() {
    assert_eq!(germforge(&["mu"]).status.code(), Some(1));
    assert_eq!(germforge(&["mu", "-e", "x^2 +"]).status.code(), Some(1));
    assert_eq!(germforge(&["mu", "-e", "x^2*y^2", "--jet-order", "8"]).status.code(), Some(2));
    let lower_bound = ["acodim", "-m", "(t^3)", "-g", "x^4+y^5+x^2*y^3", "--require-exact"];
    assert_eq!(germforge(&lower_bound).status.code(), Some(3));
    assert_eq!(germforge(&["augment", "-m", "(t^3)", "-g", "x+y^2"]).status.code(), Some(3));
}

#[test]
fn environment_sets_the_budget() {
    let o = Command::new(env!("CARGO_BIN_EXE_germforge"))
        .args(["mu", "-e", "x^2*y^2"])
        .env("GERMFORGE_JET_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lower_bounds_are_flagged() {
    let v = json(&["acodim", "-m", "(t^3)", "-g", "x^4+y^5+x^2*y^3"]);
    assert_eq!(v["results"]["exact"], false);
    assert_eq!(v["warnings"][0]["kind"], "LowerBoundOnly");
}

#[test]
fn json_errors_carry_the_exit_code() {
    let o = germforge(&["--json", "mu", "-e", "x^2*y^2", "--jet-order", "8"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "NotCertifiedByOrder");
    assert_eq!(v["error"]["exit_code"], 2);
}

#[test]
fn json_round_trips() {
    let o = germforge(&["--json", "versal", "-m", "cusp_2", "-g", "z^3", "--verify"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["results"]["versal"], true);
    assert_eq!(v["results"]["parameters"].as_array().unwrap().len(), 2);
}

#[test]
fn table44_is_deterministic_and_labels_the_conjecture() {
    let a = germforge(&["--json", "table44"]);
    let b = germforge(&["--json", "table44"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["results"]["rows"].as_array().unwrap();
    let families: Vec<&str> = rows.iter().map(|r| r["family"].as_str().unwrap()).collect();
    assert_eq!(families, ["3_P", "4_Q", "4²_k", "5_k", "5²", "5³"]);
    assert_eq!(v["results"]["all_codims_match_formulas"], true);
    assert!(v["warnings"].as_array().unwrap().iter().any(|w| w["kind"] == "Conjecture"));
    let text = stdout(&germforge(&["table44"]));
    assert!(text.contains("Conjecture (unproved)"));
}

#[test]
fn germ_files() {
    let dir = std::env::temp_dir().join(format!("germforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defs.germ");
    std::fs::write(
        &path,
        "function J(a, b) = a^3 + b^6 + a^2*b^2\ngerm f(t) = (t^3)\nunfolding F(t; s) of f = (t^3 + s*t)\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["--germ-file", p, "acodim", "-m", "f", "--opsu", "F", "-g", "J"]);
    assert_eq!(v["results"]["codim"], 10);
    let v = json(&["--germ-file", p, "modality", "-m", "f", "-g", "J"]);
    assert_eq!(v["results"]["modality"], "1");
    std::fs::write(&path, "germ f(t) = (t^3 + 1)\n").unwrap();
    assert_eq!(germforge(&["--germ-file", p, "catalog", "list"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn catalog_listing() {
    let v = json(&["catalog", "list"]);
    let names: Vec<&str> = v["results"]["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["F_4", "S_1", "mt5_3", "5²", "5³", "4²_2", "3_E8"] {
        assert!(names.contains(&n), "{n}");
    }
    assert_eq!(json(&["catalog", "show", "F_4"])["results"]["codim"], 4);
}
