use serde_json::Value;
use std::process::{Command, Output};

fn tncg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tncg")).args(args).env_remove("TNCG_SEED").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn axioms_json_lists_each_ko_and_order_check() {
    let out = tncg(&["verify", "--suite", "axioms", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], "axioms");
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass" && c["anchor"].is_string()));
    let count = |needle: &str| checks.iter().filter(|c| c["anchor"].as_str().unwrap().contains(needle)).count();
    assert_eq!(count("KO sign table"), 5);
    assert_eq!(count("order-zero condition [a"), 5);
    assert_eq!(count("order-one condition"), 10);
}

#[test]
fn seed_flag_and_environment_agree() {
    let flag = tncg(&["verify", "--suite", "boost", "--seed", "9", "--json"]);
    let env = Command::new(env!("CARGO_BIN_EXE_tncg"))
        .args(["verify", "--suite", "boost", "--json"])
        .env("TNCG_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(json_of(&flag)["seed"], 9);
    let other = tncg(&["verify", "--suite", "boost", "--seed", "10", "--json"]);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn boost_trials_are_honoured() {
    let out = tncg(&["verify", "--suite", "boost", "--trials", "1000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["trials"], 1000);
    assert!(v["checks"][0]["detail"].as_str().unwrap().starts_with("1000 trials"));
}

#[test]
fn failed_check_exits_with_one() {
    let out = tncg(&["verify", "--suite", "boost", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL] random boosts sampled"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(tncg(&["verify", "--suite", "spectral"]).status.code(), Some(2));
    assert_eq!(tncg(&["demo", "maxwell"]).status.code(), Some(2));
    assert_eq!(tncg(&["prove", "lemma-9"]).status.code(), Some(2));
    assert_eq!(tncg(&["verify", "--seed", "minus-one"]).status.code(), Some(2));
}

#[test]
fn demos_print_their_densities() {
    let out = tncg(&["demo", "manifold"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("no ∂₀ appears"));
    assert!(text.contains("f0"));
    let weyl = stdout(&tncg(&["demo", "weyl"]));
    assert!(weyl.contains("left Weyl lagrangian under the first identification"));
    assert!(weyl.contains("right Weyl lagrangian under the second identification"));
    let dirac = json_of(&tncg(&["demo", "dirac", "--json"]));
    assert_eq!(dirac["passed"], true);
    assert_eq!(dirac["stated_form_matches"], true);
    assert!(dirac["density"].as_str().unwrap().contains("phi1_1"));
}

#[test]
fn every_curved_identity_is_provable() {
    for id in tncg::lichnerowicz::lemmas::CURVED_IDENTITIES {
        let out = tncg(&["prove", id, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{id}");
        let v = json_of(&out);
        assert_eq!(v["holds"], true, "{id}");
        assert!(v.get("trace").is_none());
    }
    let traced = stdout(&tncg(&["prove", "endomorphism", "--trace"]));
    assert!(traced.lines().filter(|l| l.contains(" → ")).count() > 10);
}

#[test]
fn golden_update_is_idempotent_on_a_passing_tree() {
    let path = tncg::scenario::goldens::path("weyl");
    let before = std::fs::read_to_string(&path).unwrap();
    let out = tncg(&["demo", "weyl", "--update-goldens"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("golden written"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), before);
}
