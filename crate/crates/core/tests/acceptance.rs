//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; a failing criterion carries its counterexample in the panic.

use std::time::Instant;

use bootcat::corpus::{self, CorpusConfig};
use bootcat::spectrum::AxiomCheck;
use bootcat::verify::*;
use bootcat::BootObject;

const SEED: u64 = 0xB007;

fn mixed_corpus(size: usize) -> Vec<BootObject> {
    corpus::objects(&CorpusConfig::new(SEED, size))
}

fn compact_corpus(size: usize) -> Vec<BootObject> {
    corpus::objects(&CorpusConfig::compact(SEED + 1, size))
}

fn report(number: u32, name: &str, checks: &[AxiomCheck]) {
    let cases: usize = checks.iter().map(|c| c.cases).sum();
    let failed: Vec<&AxiomCheck> = checks.iter().filter(|c| !c.pass).collect();
    if failed.is_empty() {
        println!("criterion {number:2} ({name}): PASS [{cases} cases]");
    } else {
        println!("criterion {number:2} ({name}): FAIL");
        panic!(
            "criterion {number} ({name}) failed: {:?}",
            failed
                .iter()
                .map(|c| format!("{}: {:?}", c.name, c.counterexample))
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let checks = check_oracle_equivalence(SEED, 500, 64);
    let elapsed = start.elapsed();
    assert_eq!(checks.iter().map(|c| c.cases).sum::<usize>(), 2000);
    report(1, "oracle equivalence, 500 pairs, order <= 64", &checks);
    assert!(
        elapsed.as_secs() < 60,
        "oracle equivalence took {elapsed:?}, budget is 60s"
    );
}

#[test]
fn criterion_02_uct_coherence() {
    let corpus = mixed_corpus(200);
    let checks = vec![
        check_uct_unit_law(&corpus),
        check_hom_only_criterion(&corpus),
    ];
    assert_eq!(checks[0].cases, 200);
    report(2, "UCT unit law and Hom-only criterion", &checks);
}

#[test]
fn criterion_03_kunneth_coherence() {
    let corpus = compact_corpus(100);
    let checks = vec![
        check_kunneth_unit(&corpus),
        check_tensor_symmetry(&corpus),
        check_tensor_associativity(&corpus),
        check_tensor_suspension(&corpus),
        check_residue_square(50),
    ];
    report(3, "Kunneth unit/symmetry/associativity/suspension", &checks);
}

#[test]
fn criterion_04_residue_dichotomy() {
    let checks = vec![check_residue_dichotomy(50)];
    // all points p, q in {0} + primes <= 50: (pi(50) + 1)^2 cases
    assert_eq!(checks[0].cases, 16 * 16);
    report(4, "residue dichotomy over points <= 50", &checks);
}

#[test]
fn criterion_05_residue_decomposition() {
    let corpus = mixed_corpus(200);
    let checks = vec![check_residue_decomposition(&corpus, 50)];
    assert_eq!(checks[0].cases, 200 * 16);
    report(5, "coefficient K-theory is residue-field linear", &checks);
}

#[test]
fn criterion_06_classification_roundtrip() {
    let corpus = mixed_corpus(200);
    let roundtrip = check_classification_roundtrip(13);
    // subsets of {0} + 6 primes, plus the whole spectrum
    assert_eq!(roundtrip.cases, 128 + 1);
    let checks = vec![
        roundtrip,
        check_class_distinctness(13),
        check_generated_membership(&corpus, SEED, 200),
    ];
    report(6, "classification round-trip and membership", &checks);
}

#[test]
fn criterion_07_smashing_restriction() {
    let checks = vec![check_smashing_iff_spec_closed(13)];
    report(7, "smashing iff specialization closed", &checks);
}

#[test]
fn criterion_08_boot_v_equivalence() {
    let corpus = mixed_corpus(200);
    let equivalence = check_boot_v_equivalence(&corpus, 13);
    // spec-closed subsets over 6 primes plus the whole spectrum, times corpus
    assert_eq!(equivalence.cases, 65 * 200);
    let checks = vec![equivalence, check_supp_agreement(&corpus)];
    report(8, "localization kernels and support agreement", &checks);
}

#[test]
fn criterion_09_support_datum() {
    let corpus = compact_corpus(100);
    let checks = check_support_datum(&corpus);
    assert_eq!(checks.len(), 6);
    report(9, "support-datum axioms on the compact corpus", &checks);
}

#[test]
fn criterion_10_cone_correctness() {
    let corpus = compact_corpus(100);
    let checks = vec![check_cone_moore(64), check_cone_les(SEED, 100, &corpus)];
    report(10, "cones of multiplication and LES bookkeeping", &checks);
}

#[test]
fn criterion_11_prufer_colimit() {
    let checks = vec![check_prufer_colimit(13, 4, 8)];
    // p, q over the 6 primes <= 13, k <= 4
    assert_eq!(checks[0].cases, 6 * 6 * 4);
    report(
        11,
        "Tor against Prufer groups via stabilized stages",
        &checks,
    );
}
