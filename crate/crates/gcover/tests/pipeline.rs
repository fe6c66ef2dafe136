//! Parsed fixtures driven through the library pipeline, with independent
//! checks from the oracles.

use gcover::schema::parse_problem;
use gcover_core::algebra::Rep;
use gcover_core::covering::{classify, equivalent, graded_iso_up_to_shift, graded_module_from_covering, is_thin, orbit_covering};
use gcover_core::group::GrpElt;
use gcover_core::instances::{clock_shift, cyclic_m2};
use gcover_core::oracles::{brute_force_is_thin, OracleBudget};
use gcover_core::rng::SeededRng;
use gcover_core::twisting::twist;
use gcover_core::Tolerance;
use proptest::prelude::*;
use std::path::PathBuf;

fn load(name: &str) -> Rep {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let text = std::fs::read_to_string(path).unwrap();
    parse_problem(&text).unwrap().rep(&Tolerance::default()).unwrap()
}

#[test]
fn fixtures_match_the_built_in_instances() {
    let tol = Tolerance::default();
    // same algebra up to basis order: compare the classification instead
    for (fixture, builtin) in [("cyclic_m2.json", cyclic_m2()), ("pauli2.json", clock_shift(2))] {
        let a = classify(&load(fixture), &tol).unwrap();
        let b = classify(&builtin, &tol).unwrap();
        assert_eq!(a.twist.subgroup.order(), b.twist.subgroup.order(), "{fixture}");
        assert_eq!(a.decomposition.simple_dim(), b.decomposition.simple_dim(), "{fixture}");
    }
}

#[test]
fn classified_coverings_are_thin_by_brute_force() {
    let tol = Tolerance::default();
    let budget = OracleBudget::default();
    for f in ["pauli2.json", "cyclic_m2.json", "z4_character.json", "sl2_chevalley.json"] {
        let rep = load(f);
        let cl = classify(&rep, &tol).unwrap();
        let mut rng = SeededRng::new(5);
        for _ in 0..3 {
            let c = cl.thin_g(&rng.complex_vec(cl.decomposition.simple_dim()), &tol).unwrap();
            assert!(is_thin(&rep, &c, &tol), "{f}");
            assert!(brute_force_is_thin(&rep, &c, &budget, &tol).unwrap(), "{f}");
        }
    }
}

#[test]
fn classified_covering_matches_the_orbit_of_its_vector() {
    // on the Pauli fixture every vector generates a thin covering, and the
    // classification reproduces it from the vector's torus coordinates
    let tol = Tolerance::default();
    let rep = load("pauli2.json");
    let cl = classify(&rep, &tol).unwrap();
    let mut rng = SeededRng::new(9);
    for _ in 0..5 {
        let v = rng.complex_vec(2);
        let from_class = cl.thin_g(&cl.simple_coordinates(&v, &tol).unwrap(), &tol).unwrap();
        let orbit = orbit_covering(&rep, &v, &tol).unwrap();
        assert_eq!(equivalent(&from_class, &orbit, &tol), Some(rep.group().zero()));
    }
}

#[test]
fn twisting_keeps_thin_coverings_thin() {
    let tol = Tolerance::default();
    let rep = load("z4_character.json");
    let c = orbit_covering(&rep, &[gcover_core::C64::new(1.0, 0.0)], &tol).unwrap();
    for sigma in rep.group().characters() {
        let tw = twist(&rep, &sigma).unwrap();
        assert!(is_thin(&tw, &c, &tol));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_pauli_graded_modules_are_all_isomorphic(seed in 0u64..1_000_000, n in 2usize..4) {
        let tol = Tolerance::default();
        let rep = clock_shift(n);
        let mut rng = SeededRng::new(seed);
        let c1 = orbit_covering(&rep, &rng.complex_vec(n), &tol).unwrap();
        let c2 = orbit_covering(&rep, &rng.complex_vec(n), &tol).unwrap();
        let g1 = graded_module_from_covering(&rep, &c1, &tol).unwrap();
        let g2 = graded_module_from_covering(&rep, &c2, &tol).unwrap();
        prop_assert!(graded_iso_up_to_shift(&g1, &g2, &tol).is_some());
    }

    #[test]
    fn shifted_coverings_are_equivalent(seed in 0u64..1_000_000, a in 0u64..3, b in 0u64..3) {
        let tol = Tolerance::default();
        let rep = clock_shift(3);
        let mut rng = SeededRng::new(seed);
        let c = orbit_covering(&rep, &rng.complex_vec(3), &tol).unwrap();
        let h = GrpElt(vec![a, b]);
        prop_assert_eq!(equivalent(&c, &c.shifted(&h), &tol), Some(h));
    }
}
