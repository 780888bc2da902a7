//! End-to-end tests of the command-line binary: worked examples for every
//! subcommand, byte-exact generating functions, and the exit-code contract
//! (0 success, 1 failed verification, 2 usage errors).

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_oddmaj"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn stats_on_a_signed_window() {
    let (code, stdout, _) = run(&["stats", "--family", "B", "[-2,5,3,1,-4]"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("ofmaj = 6"), "stdout: {stdout}");
    assert!(stdout.contains("efmaj = 6"), "stdout: {stdout}");
    assert!(stdout.contains("maj = 9"), "stdout: {stdout}");
    assert!(stdout.contains("neg = 2"), "stdout: {stdout}");
}

#[test]
fn stats_on_a_plain_window_compact_form() {
    let (code, stdout, _) = run(&["stats", "81725634"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("family:       A"), "stdout: {stdout}");
    assert!(stdout.contains("omaj = 3"), "stdout: {stdout}");
    assert!(stdout.contains("emaj = 3"), "stdout: {stdout}");
}

#[test]
fn genfun_bivariate_plain_rank_three() {
    let (code, stdout, _) = run(&[
        "genfun",
        "--family",
        "A",
        "--n",
        "3",
        "--stats",
        "omaj:q1,emaj:q2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1 + 2*q1 + 2*q2 + q1*q2\n");
}

#[test]
fn genfun_trivariate_signed_rank_two() {
    let (code, stdout, _) = run(&[
        "genfun",
        "--family",
        "B",
        "--n",
        "2",
        "--stats",
        "ofmaj:x,odes:y,oneg:z",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1 + 3*x*z + 3*x^2*y + x^3*y*z\n");
}

#[test]
fn genfun_rank_one_is_constant() {
    let (code, stdout, _) = run(&["genfun", "--family", "A", "--n", "1", "--stats", "maj:q"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
}

#[test]
fn genfun_json_emits_term_list() {
    let (code, stdout, _) = run(&[
        "genfun", "--family", "A", "--n", "2", "--stats", "maj:q", "--json",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    let terms = value.as_array().expect("term list");
    assert_eq!(terms.len(), 2, "1 + q has two terms: {stdout}");
    for t in terms {
        assert!(t.get("coeffs").is_some());
        assert!(t.get("exponents").is_some());
    }
}

#[test]
fn genfun_ceiling_requires_force() {
    let (code, _, stderr) = run(&["genfun", "--family", "B", "--n", "9", "--stats", "fmaj:q"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds"), "stderr: {stderr}");
    assert!(stderr.contains("force"), "stderr: {stderr}");
}

#[test]
fn genfun_rejects_unknown_statistic_token() {
    let (code, _, stderr) = run(&["genfun", "--family", "A", "--n", "3", "--stats", "bogus:q"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");
}

#[test]
fn verify_single_identity_with_rank_cap() {
    let (code, stdout, _) = run(&["verify", "cor-gessel-simion-odd", "--n-max", "4"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("PASS cor-gessel-simion-odd n=4"),
        "stdout: {stdout}"
    );
    assert!(stdout.contains("all 4 checks passed"), "stdout: {stdout}");
    assert!(!stdout.contains("FAIL"), "stdout: {stdout}");
}

#[test]
fn verify_unknown_identity_is_a_usage_error() {
    let (code, _, stderr) = run(&["verify", "bogus-id"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown identity"), "stderr: {stderr}");
}

#[test]
fn search_plain_descent_weights_finds_nothing_at_rank_five() {
    let (code, stdout, _) = run(&["search", "descent-major", "--n", "5", "--target", "oddlen"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "NONE");
}

#[test]
fn search_signed_descent_weights_finds_nothing_at_rank_two() {
    let (code, stdout, _) = run(&[
        "search",
        "descent-neg-major",
        "--n",
        "2",
        "--target",
        "oddlen",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "NONE");
}

#[test]
fn search_plain_descent_weights_can_succeed() {
    // maj itself is realized by the weights j_i = i.
    let (code, stdout, _) = run(&["search", "descent-major", "--n", "3", "--target", "maj"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("FOUND"), "stdout: {stdout}");
}

#[test]
fn overpartitions_weight_listing() {
    let (code, stdout, _) = run(&["overpartitions", "--max-part", "3", "--weight", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 8, "stdout: {stdout}");
}

#[test]
fn overpartitions_bounded_parts_polynomial() {
    let (code, stdout, _) = run(&["overpartitions", "--max-part", "2", "--parts", "1"]);
    assert_eq!(code, 0);
    // Exactly one part from {1, 2}, possibly overlined.
    assert_eq!(stdout.trim(), "2*q + 2*q^2");
}

#[test]
fn list_prints_the_whole_registry() {
    let (code, stdout, _) = run(&["list"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines.len() >= 30, "only {} identities listed", lines.len());
    assert!(stdout.contains("thm-odd-eulerian"));
    assert!(stdout.contains("b5-signed-bivariate"));
}
