use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn gcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcover")).args(args).env_remove("GCOVER_TOL").env_remove("GCOVER_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = gcover(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("certificate is JSON"))
}

fn scratch(name: &str, body: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_bundled_pauli_fixture() {
    let (code, cert) = json(&["validate", &fixture("pauli2.json")]);
    assert_eq!(code, 0);
    assert_eq!(cert["pass"], true);
    let checks = cert["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.values().all(|v| v == true));
    assert_eq!(cert["results"]["simple"], true);
}

#[test]
fn thin_from_first_basis_vector() {
    let o = gcover(&["thin", "--vector", "1,0", &fixture("pauli2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let spans: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with('(')).map(|l| l.split_whitespace().last().unwrap().to_string()).collect();
    assert_eq!(spans, ["span{e_1}", "span{e_1}", "span{e_2}", "span{e_2}"]);
}

#[test]
fn thin_samples_are_grouped_into_classes() {
    let (code, cert) = json(&["thin", "--sample", "4", &fixture("pauli2.json")]);
    assert_eq!(code, 0);
    assert_eq!(cert["results"]["coverings"].as_array().unwrap().len(), 4);
    // generic vectors of the Pauli module give pairwise inequivalent coverings
    assert_eq!(cert["results"]["equivalence_classes"]["count"], 4);
    let (_, cert) = json(&["thin", "--sample", "4", &fixture("cyclic_m2.json")]);
    assert_eq!(cert["results"]["equivalence_classes"]["count"], 1);
}

#[test]
fn normal_form_of_commutative_torus_is_trivial() {
    let (code, cert) = json(&["normal-form", &fixture("commutative_torus.json")]);
    assert_eq!(code, 0);
    let nf = &cert["results"]["normal_form"];
    assert_eq!(nf["P"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(nf["block_count"], 0);
    assert_eq!(nf["central_rank"], 2);
}

#[test]
fn normal_form_of_rank_four_torus() {
    let (code, cert) = json(&["normal-form", &fixture("rank4_torus.json")]);
    assert_eq!(code, 0);
    let nf = &cert["results"]["normal_form"];
    let dims: Vec<u64> = nf["blocks"].as_array().unwrap().iter().map(|b| b["d"].as_u64().unwrap()).collect();
    // kernel index is the product of d^2
    assert_eq!(cert["results"]["gamma_kernel"]["index"].as_u64().unwrap(), dims.iter().map(|d| d * d).product::<u64>());
}

#[test]
fn stabilizer_of_z4_character_is_trivial() {
    let (code, cert) = json(&["stabilizer", &fixture("z4_character.json")]);
    assert_eq!(code, 0);
    assert_eq!(cert["results"]["stabilizer"]["order"], 1);
    let (_, cert) = json(&["stabilizer", &fixture("pauli2.json")]);
    assert_eq!(cert["results"]["stabilizer"]["order"], 4);
}

#[test]
fn isotypic_of_pauli_is_one_copy() {
    let (code, cert) = json(&["isotypic", &fixture("pauli2.json")]);
    assert_eq!(code, 0);
    let comps = cert["results"]["isotypic"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["multiplicity"], 1);
}

#[test]
fn certificates_are_byte_identical_across_runs() {
    let args = ["--format", "json", "--seed", "11", "certify", &fixture("pauli2.json")];
    let a = gcover(&args);
    let b = gcover(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn environment_supplies_seed_and_tolerance() {
    let o = Command::new(env!("CARGO_BIN_EXE_gcover"))
        .args(["--format", "json", "thin", &fixture("cyclic_m2.json")])
        .env("GCOVER_SEED", "42")
        .env("GCOVER_TOL", "1e-7")
        .output()
        .unwrap();
    let cert: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["seed"], 42);
    assert_eq!(cert["tolerance"], 1e-7);
}

#[test]
fn certify_passes_on_unique_covering_instances() {
    for f in ["cyclic_m2.json", "z4_character.json", "sl2_chevalley.json"] {
        let o = gcover(&["certify", "--deep", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
    let o = gcover(&["certify", &fixture("pauli2.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn deep_certify_names_the_covering_round_trip_on_pauli() {
    // the graded module forgets which of the infinitely many thin coverings produced it
    let (code, cert) = json(&["certify", "--deep", &fixture("pauli2.json")]);
    assert_eq!(code, 2);
    assert_eq!(cert["first_failure"], "roundtrip.covering");
    assert_eq!(cert["checks"]["roundtrip.graded"], true);
}

#[test]
fn multiloop_dimension_and_residuals() {
    let (code, cert) = json(&["multiloop", &fixture("sl2_chevalley.json")]);
    assert_eq!(code, 0);
    assert_eq!(cert["results"]["multiloop"]["dim"], 7);
    assert!(cert["residuals"]["loop_module.commutator"].as_f64().unwrap() <= 1e-9);
    let (_, cert) = json(&["multiloop", "--cutoff", "1", &fixture("sl2_chevalley.json")]);
    assert_eq!(cert["results"]["multiloop"]["dim"], 5);
}

#[test]
fn multiloop_requires_a_lie_problem() {
    let o = gcover(&["multiloop", "--cutoff", "2", &fixture("pauli2.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compare_finds_the_twist_between_characters() {
    let text = std::fs::read_to_string(fixture("z4_character.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    // C[Z_4] acting through g -> i^{3g}
    for (k, m) in v["module"]["action"].as_array_mut().unwrap().iter_mut().enumerate() {
        *m = serde_json::json!([[{"zeta": [4, 3 * k]}]]);
    }
    let other = scratch("z4_cube.json", &v.to_string());
    let (code, cert) = json(&["compare", &fixture("z4_character.json"), &other]);
    assert_eq!(code, 0);
    assert_eq!(cert["results"]["isomorphic"], false);
    assert_eq!(cert["results"]["twists_to_b"], serde_json::json!([[2]]));
    assert_eq!(cert["results"]["graded_isomorphic"], true);
}

#[test]
fn compare_rejects_different_algebras() {
    let o = gcover(&["compare", &fixture("pauli2.json"), &fixture("cyclic_m2.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn schema_errors_exit_3_with_position() {
    let bad = scratch("bad_unit.json", "{\n  \"group\": {\"invariant_factors\": [2]},\n  \"algebra\": {\"dim\": 1, \"structure\": [[[[1, 0]]]], \"unit\": [{\"rat\": [1, 0]}], \"grading\": [[0]]},\n  \"module\": {\"dim\": 1, \"action\": [[[[1, 0]]]]}\n}\n");
    let o = gcover(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    let truncated = scratch("truncated.json", "{\"group\": ");
    assert_eq!(gcover(&["validate", &truncated]).status.code(), Some(3));
}

#[test]
fn verification_failures_exit_2() {
    // module matrices that do not respect the product
    let text = std::fs::read_to_string(fixture("cyclic_m2.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["module"]["action"][2] = serde_json::json!([[[0, 0], [2, 0]], [[0, 0], [0, 0]]]);
    let bad = scratch("cyclic_bad.json", &v.to_string());
    let o = gcover(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("representation"));
}
