//! Named verification suites over seeded corpora. Each check returns an
//! `AxiomCheck` with a counterexample when it fails; the acceptance tests
//! and the `verify` subcommand both drive these.

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::corpus::{self, CorpusConfig};
use crate::graded::GradedValue;
use crate::groups::{self, Bifunctor, GroupExpr};
use crate::object::{
    cone, is_isomorphic, k_with_coefficients, kk_groups, kk_is_hom_only, residue_object,
    tensor_object, unit, BootObject, HomPartMorphism,
};
use crate::spectrum::{
    enumerate_spec_closed, generated_support, in_generated, is_smashing, is_specialization_closed,
    localization_kernel_member, member, member_boot_v, primes_up_to, supp, supp_injective,
    support_datum_check, thick_classification_demo, AxiomCheck, LocalizingSubcat, SpecPoint,
    SpecSubset,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Oracle,
    Uct,
    Kunneth,
    Classification,
    Smashing,
    SupportDatum,
    All,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown suite \"{0}\"; expected oracle, uct, kunneth, classification, smashing, support-datum or all")]
pub struct UnknownSuite(pub String);

impl Suite {
    pub fn parse(name: &str) -> Result<Suite, UnknownSuite> {
        match name {
            "oracle" => Ok(Suite::Oracle),
            "uct" => Ok(Suite::Uct),
            "kunneth" => Ok(Suite::Kunneth),
            "classification" => Ok(Suite::Classification),
            "smashing" => Ok(Suite::Smashing),
            "support-datum" => Ok(Suite::SupportDatum),
            "all" => Ok(Suite::All),
            other => Err(UnknownSuite(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Uct => "uct",
            Suite::Kunneth => "kunneth",
            Suite::Classification => "classification",
            Suite::Smashing => "smashing",
            Suite::SupportDatum => "support-datum",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub max_order: u64,
    pub prime_bound: u64,
    pub corpus_size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            max_order: 64,
            prime_bound: 13,
            corpus_size: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<AxiomCheck>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn cases(&self) -> usize {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

fn check(name: &str, cases: usize, counterexample: Option<String>) -> AxiomCheck {
    AxiomCheck {
        name: name.to_string(),
        pass: counterexample.is_none(),
        cases,
        counterexample,
    }
}

/// Closed-form tables against the enumerative oracle, one check per
/// bifunctor over a seeded pair corpus.
pub fn check_oracle_equivalence(seed: u64, pairs: usize, max_order: u64) -> Vec<AxiomCheck> {
    let corpus = corpus::finite_pairs(seed, pairs, max_order);
    Bifunctor::ALL
        .iter()
        .map(|&which| {
            let mut bad = None;
            for (g, h) in &corpus {
                let want = groups::oracle_bifunctor(which, g, h, max_order)
                    .expect("corpus respects the bound");
                let got = groups::table_bifunctor(which, g, h);
                if got != groups::GroupValue::Exact(GroupExpr::from(want.clone())) {
                    bad = Some(format!(
                        "{}({:?}, {:?}) = {} but oracle says {:?}",
                        which.name(),
                        g,
                        h,
                        got,
                        want
                    ));
                    break;
                }
            }
            check(
                &format!("{} agrees with brute force", which.name()),
                corpus.len(),
                bad,
            )
        })
        .collect()
}

pub fn check_uct_unit_law(corpus: &[BootObject]) -> AxiomCheck {
    let u = unit();
    let mut bad = None;
    for b in corpus {
        let got = kk_groups(&u, b);
        if got != GradedValue::from(b.ktheory().clone()) {
            bad = Some(format!("KK(unit, {b}) = {got:?}"));
            break;
        }
    }
    check("KK(unit, B) equals K(B)", corpus.len(), bad)
}

pub fn check_hom_only_criterion(corpus: &[BootObject]) -> AxiomCheck {
    let mut bad = None;
    let mut cases = 0;
    'outer: for a in corpus {
        for b in corpus {
            if !a.ktheory().is_free() && !b.ktheory().is_divisible() {
                continue;
            }
            cases += 1;
            if !kk_is_hom_only(a, b) {
                bad = Some(format!("source {a}, target {b}"));
                break 'outer;
            }
        }
    }
    check(
        "free source or divisible target forces Hom-only KK",
        cases,
        bad,
    )
}

/// Cones of multiplication by n on the unit realize the Moore objects.
pub fn check_cone_moore(max_n: u64) -> AxiomCheck {
    let mut bad = None;
    for n in 1..=max_n {
        let phi = HomPartMorphism::multiplication(&unit(), n as i64).expect("unit endomorphism");
        let c = cone(&phi);
        if c.extension_ambiguous {
            bad = Some(format!("cone(mult {n}) flagged ambiguous"));
            break;
        }
        if !is_isomorphic(&c.object, &crate::object::moore(n.max(2)))
            && !(n == 1 && c.object.ktheory().is_zero())
        {
            bad = Some(format!("cone(mult {n}) has K = {}", c.object.ktheory()));
            break;
        }
    }
    check(
        "cone(mult n on unit) is the Moore object",
        max_n as usize,
        bad,
    )
}

/// Exactness bookkeeping for random unambiguous morphisms: in each degree
/// the first isomorphism theorem must tie kernel, cokernel, source and
/// target together, in rank and in torsion order.
pub fn check_cone_les(seed: u64, want: usize, corpus: &[BootObject]) -> AxiomCheck {
    let compact: Vec<&BootObject> = corpus.iter().filter(|o| o.is_compact()).collect();
    let mut rng = corpus::rng(seed ^ 0xc04e);
    let mut bad = None;
    let mut done = 0;
    let mut attempts = 0;
    while done < want && attempts < want * 50 {
        attempts += 1;
        let a = compact[rng.random_range(0..compact.len())];
        let b = compact[rng.random_range(0..compact.len())];
        let Some(phi) = corpus::random_morphism(&mut rng, a, b) else {
            continue;
        };
        let c = cone(&phi);
        if c.extension_ambiguous {
            continue;
        }
        done += 1;
        for (ker, cok, src, tgt) in [
            (
                &c.kernel.deg0,
                &c.cokernel.deg0,
                &a.ktheory().deg0,
                &b.ktheory().deg0,
            ),
            (
                &c.kernel.deg1,
                &c.cokernel.deg1,
                &a.ktheory().deg1,
                &b.ktheory().deg1,
            ),
        ] {
            let rank_ok = src.fg().rank() as i64 - ker.fg().rank() as i64
                == tgt.fg().rank() as i64 - cok.fg().rank() as i64;
            if !rank_ok {
                bad = Some(format!("rank bookkeeping fails for {phi:?}"));
                break;
            }
            if src.is_finite() && tgt.is_finite() {
                let (ko, to_, co, so) = (
                    ker.fg().order().unwrap(),
                    tgt.fg().order().unwrap(),
                    cok.fg().order().unwrap(),
                    src.fg().order().unwrap(),
                );
                if ko * to_ != co * so {
                    bad = Some(format!("order bookkeeping fails for {phi:?}"));
                    break;
                }
            }
        }
        // the splice itself: K(cone) = coker + shifted kernel
        let expect = c.cokernel.direct_sum(&c.kernel.suspend());
        if c.object.ktheory() != &expect {
            bad = Some(format!("splice mismatch for {phi:?}"));
        }
        if bad.is_some() {
            break;
        }
    }
    if done < want && bad.is_none() {
        bad = Some(format!("only {done} unambiguous morphisms found"));
    }
    check("long exact sequence bookkeeping on cones", done, bad)
}

pub fn check_kunneth_unit(corpus: &[BootObject]) -> AxiomCheck {
    let u = unit();
    let mut bad = None;
    for b in corpus {
        if !is_isomorphic(&tensor_object(&u, b), b) {
            bad = Some(format!("unit (x) {b}"));
            break;
        }
    }
    check("unit (x) B is isomorphic to B", corpus.len(), bad)
}

pub fn check_tensor_symmetry(corpus: &[BootObject]) -> AxiomCheck {
    let mut bad = None;
    let mut cases = 0;
    'outer: for a in corpus {
        for b in corpus {
            cases += 1;
            if !is_isomorphic(&tensor_object(a, b), &tensor_object(b, a)) {
                bad = Some(format!("A = {a}, B = {b}"));
                break 'outer;
            }
        }
    }
    check("tensor symmetry", cases, bad)
}

/// Associativity over deterministically sampled triples of the corpus.
pub fn check_tensor_associativity(corpus: &[BootObject]) -> AxiomCheck {
    let n = corpus.len();
    let mut bad = None;
    let mut cases = 0;
    for i in 0..n {
        let (a, b, c) = (
            &corpus[i],
            &corpus[(3 * i + 1) % n],
            &corpus[(7 * i + 2) % n],
        );
        cases += 1;
        let left = tensor_object(&tensor_object(a, b), c);
        let right = tensor_object(a, &tensor_object(b, c));
        if !is_isomorphic(&left, &right) {
            bad = Some(format!("A = {a}, B = {b}, C = {c}"));
            break;
        }
    }
    check("tensor associativity", cases, bad)
}

pub fn check_tensor_suspension(corpus: &[BootObject]) -> AxiomCheck {
    let n = corpus.len();
    let mut bad = None;
    for i in 0..n {
        let (a, b) = (&corpus[i], &corpus[(5 * i + 3) % n]);
        let left = tensor_object(&a.suspend(), b);
        let right = tensor_object(a, b).suspend();
        if !is_isomorphic(&left, &right) {
            bad = Some(format!("A = {a}, B = {b}"));
            break;
        }
    }
    check("suspension commutes with tensor", n, bad)
}

/// K(kappa(p) (x) kappa(p)) is one copy of F_p in each degree.
pub fn check_residue_square(prime_bound: u64) -> AxiomCheck {
    let mut bad = None;
    let primes = primes_up_to(prime_bound);
    for &p in &primes {
        let k = residue_object(SpecPoint::prime(p));
        let sq = tensor_object(&k, &k);
        let want = GroupExpr::cyclic(p);
        if sq.ktheory().deg0 != want || sq.ktheory().deg1 != want {
            bad = Some(format!("p = {p}: K = {}", sq.ktheory()));
            break;
        }
    }
    check(
        "kappa(p) (x) kappa(p) is F_p in both degrees",
        primes.len(),
        bad,
    )
}

/// kappa(p) (x) kappa(q) vanishes exactly off the diagonal.
pub fn check_residue_dichotomy(prime_bound: u64) -> AxiomCheck {
    let mut points = vec![SpecPoint::Zero];
    points.extend(primes_up_to(prime_bound).into_iter().map(SpecPoint::Prime));
    let mut bad = None;
    let mut cases = 0;
    'outer: for &p in &points {
        for &q in &points {
            cases += 1;
            let t = tensor_object(&residue_object(p), &residue_object(q));
            if t.ktheory().is_zero() != (p != q) {
                bad = Some(format!("p = {p}, q = {q}"));
                break 'outer;
            }
        }
    }
    check("kappa(p) (x) kappa(q) = 0 iff p != q", cases, bad)
}

/// K(A; F_p) is an F_p-vector object for every corpus object.
pub fn check_residue_decomposition(corpus: &[BootObject], prime_bound: u64) -> AxiomCheck {
    let mut points = vec![SpecPoint::Zero];
    points.extend(primes_up_to(prime_bound).into_iter().map(SpecPoint::Prime));
    let is_fp_vector = |g: &GroupExpr, p: SpecPoint| -> bool {
        match p {
            SpecPoint::Zero => {
                g.fg().rank() == 0 && g.fg().factors().is_empty() && g.prufer_atoms().is_empty()
            }
            SpecPoint::Prime(q) => {
                g.fg().rank() == 0
                    && g.q_copies() == 0
                    && g.prufer_atoms().is_empty()
                    && g.fg().factors().iter().all(|d| *d == BigUint::from(q))
            }
        }
    };
    let mut bad = None;
    let mut cases = 0;
    'outer: for a in corpus {
        for &p in &points {
            cases += 1;
            let k = k_with_coefficients(a, p);
            if !is_fp_vector(&k.deg0, p) || !is_fp_vector(&k.deg1, p) {
                bad = Some(format!("A = {a}, p = {p}: K = {k}"));
                break 'outer;
            }
        }
    }
    check("K(A; F_p) is an F_p-vector object", cases, bad)
}

/// Tor against a Prufer group equals the stabilized finite-stage value.
pub fn check_prufer_colimit(prime_bound: u64, max_k: u32, max_n: u32) -> AxiomCheck {
    let primes = primes_up_to(prime_bound);
    let mut bad = None;
    let mut cases = 0;
    'outer: for &p in &primes {
        for &q in &primes {
            for k in 1..=max_k {
                cases += 1;
                let target = GroupExpr::cyclic_big(&BigUint::from(q).pow(k));
                let stage =
                    |n: u32| groups::tor(&GroupExpr::cyclic_big(&BigUint::from(p).pow(n)), &target);
                let stabilized = stage(max_n);
                if stage(max_n - 1) != stabilized {
                    bad = Some(format!("p = {p}, q = {q}, k = {k}: stages not stable"));
                    break 'outer;
                }
                if groups::tor(&GroupExpr::prufer(p), &target) != stabilized {
                    bad = Some(format!("p = {p}, q = {q}, k = {k}"));
                    break 'outer;
                }
            }
        }
    }
    check(
        "Tor(I(p), Z/q^k) equals the stabilized stage value",
        cases,
        bad,
    )
}

/// All finite subsets over the primes up to the bound, with and without the
/// generic point, plus the whole spectrum.
pub fn enumerate_subsets(prime_bound: u64) -> Vec<SpecSubset> {
    let mut points = vec![SpecPoint::Zero];
    points.extend(primes_up_to(prime_bound).into_iter().map(SpecPoint::Prime));
    let mut out = Vec::new();
    for mask in 0u64..(1 << points.len()) {
        let set: std::collections::BTreeSet<SpecPoint> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        out.push(SpecSubset::finite(set));
    }
    out.push(SpecSubset::All);
    out
}

fn canonical_generators(s: &SpecSubset) -> Vec<BootObject> {
    match s {
        SpecSubset::All => vec![unit()],
        SpecSubset::Fin(points) => points.iter().map(|&p| residue_object(p)).collect(),
    }
}

pub fn check_classification_roundtrip(prime_bound: u64) -> AxiomCheck {
    let sets = enumerate_subsets(prime_bound);
    let mut bad = None;
    for s in &sets {
        if &generated_support(&canonical_generators(s)) != s {
            bad = Some(format!("S = {s}"));
            break;
        }
    }
    check(
        "generated support of canonical generators recovers S",
        sets.len(),
        bad,
    )
}

pub fn check_class_distinctness(prime_bound: u64) -> AxiomCheck {
    let sets = enumerate_subsets(prime_bound);
    let mut bad = None;
    let mut cases = 0;
    'outer: for (i, s) in sets.iter().enumerate() {
        for t in sets.iter().skip(i + 1) {
            cases += 1;
            let witness = match (s, t) {
                (SpecSubset::Fin(a), SpecSubset::Fin(b)) => {
                    let p = a.symmetric_difference(b).next().expect("distinct sets");
                    residue_object(*p)
                }
                _ => unit(),
            };
            let ls = LocalizingSubcat::new(s.clone());
            let lt = LocalizingSubcat::new(t.clone());
            if member(&witness, &ls) == member(&witness, &lt) {
                bad = Some(format!("S = {s}, T = {t} agree on {witness}"));
                break 'outer;
            }
        }
    }
    check(
        "distinct subsets give distinct membership predicates",
        cases,
        bad,
    )
}

/// Membership in the subcategory generated by a random family agrees with
/// the membership predicate of L at the family's support.
pub fn check_generated_membership(corpus: &[BootObject], seed: u64, families: usize) -> AxiomCheck {
    let mut rng = corpus::rng(seed ^ 0xfa0113);
    let mut bad = None;
    let mut cases = 0;
    'outer: for _ in 0..families {
        let size = rng.random_range(1..=3usize);
        let family: Vec<BootObject> = (0..size)
            .map(|_| corpus[rng.random_range(0..corpus.len())].clone())
            .collect();
        let l = LocalizingSubcat::new(generated_support(&family));
        for a in corpus {
            cases += 1;
            if in_generated(a, &family) != member(a, &l) {
                bad = Some(format!("A = {a}, family support {}", l.set));
                break 'outer;
            }
        }
    }
    check(
        "in_generated matches the support membership predicate",
        cases,
        bad,
    )
}

pub fn check_thick_demo(prime_bound: u64) -> Vec<AxiomCheck> {
    thick_classification_demo(prime_bound).checks
}

pub fn check_smashing_iff_spec_closed(prime_bound: u64) -> AxiomCheck {
    let sets = enumerate_subsets(prime_bound);
    let mut bad = None;
    for s in &sets {
        if is_smashing(&LocalizingSubcat::new(s.clone())) != is_specialization_closed(s) {
            bad = Some(format!("S = {s}"));
            break;
        }
    }
    // the named example: the class of the generic point alone
    let generic = SpecSubset::points(&[SpecPoint::Zero]);
    if bad.is_none() && is_smashing(&LocalizingSubcat::new(generic)) {
        bad = Some("L_{0} reported smashing".to_string());
    }
    check("smashing iff specialization closed", sets.len() + 1, bad)
}

pub fn check_boot_v_equivalence(corpus: &[BootObject], prime_bound: u64) -> AxiomCheck {
    let sets = enumerate_spec_closed(prime_bound);
    let mut bad = None;
    let mut cases = 0;
    'outer: for v in &sets {
        for a in corpus {
            cases += 1;
            let lhs = member_boot_v(a, v);
            let rhs = localization_kernel_member(a, v).expect("V is specialization closed");
            if lhs != rhs {
                bad = Some(format!("A = {a}, V = {v}: {lhs} vs {rhs}"));
                break 'outer;
            }
        }
    }
    check(
        "injective support membership matches localization kernels",
        cases,
        bad,
    )
}

pub fn check_supp_agreement(corpus: &[BootObject]) -> AxiomCheck {
    let mut bad = None;
    for a in corpus {
        if supp(a) != supp_injective(a) {
            bad = Some(format!("A = {a}: {} vs {}", supp(a), supp_injective(a)));
            break;
        }
    }
    check("tensor support equals injective support", corpus.len(), bad)
}

pub fn check_support_datum(corpus: &[BootObject]) -> Vec<AxiomCheck> {
    support_datum_check(corpus)
        .expect("corpus is compact")
        .axioms
}

fn mixed_corpus(cfg: &VerifyConfig) -> Vec<BootObject> {
    corpus::objects(&CorpusConfig::new(cfg.seed, cfg.corpus_size))
}

fn compact_corpus(cfg: &VerifyConfig, size: usize) -> Vec<BootObject> {
    corpus::objects(&CorpusConfig::compact(cfg.seed.wrapping_add(1), size))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    match suite {
        Suite::Oracle => vec![SuiteReport {
            suite: "oracle",
            checks: check_oracle_equivalence(cfg.seed, cfg.corpus_size, cfg.max_order),
        }],
        Suite::Uct => {
            let corpus = mixed_corpus(cfg);
            vec![SuiteReport {
                suite: "uct",
                checks: vec![
                    check_uct_unit_law(&corpus),
                    check_hom_only_criterion(&corpus),
                    check_cone_moore(cfg.max_order),
                    check_cone_les(
                        cfg.seed,
                        100,
                        &compact_corpus(cfg, cfg.corpus_size.min(100)),
                    ),
                ],
            }]
        }
        Suite::Kunneth => {
            let corpus = compact_corpus(cfg, cfg.corpus_size.min(100));
            let mixed = mixed_corpus(cfg);
            vec![SuiteReport {
                suite: "kunneth",
                checks: vec![
                    check_kunneth_unit(&mixed),
                    check_tensor_symmetry(&corpus),
                    check_tensor_associativity(&corpus),
                    check_tensor_suspension(&corpus),
                    check_residue_square(cfg.prime_bound),
                    check_residue_dichotomy(cfg.prime_bound),
                    check_residue_decomposition(&mixed, cfg.prime_bound),
                    check_prufer_colimit(cfg.prime_bound.min(13), 4, 8),
                ],
            }]
        }
        Suite::Classification => {
            let corpus = mixed_corpus(cfg);
            let mut checks = vec![
                check_classification_roundtrip(cfg.prime_bound.min(13)),
                check_class_distinctness(cfg.prime_bound.min(13)),
                check_generated_membership(&corpus, cfg.seed, 200),
            ];
            checks.extend(check_thick_demo(cfg.prime_bound.min(13)));
            vec![SuiteReport {
                suite: "classification",
                checks,
            }]
        }
        Suite::Smashing => {
            let corpus = mixed_corpus(cfg);
            vec![SuiteReport {
                suite: "smashing",
                checks: vec![
                    check_smashing_iff_spec_closed(cfg.prime_bound.min(13)),
                    check_boot_v_equivalence(&corpus, cfg.prime_bound.min(13)),
                    check_supp_agreement(&corpus),
                ],
            }]
        }
        Suite::SupportDatum => {
            let corpus = compact_corpus(cfg, cfg.corpus_size.min(100));
            vec![SuiteReport {
                suite: "support-datum",
                checks: check_support_datum(&corpus),
            }]
        }
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::Oracle,
                Suite::Uct,
                Suite::Kunneth,
                Suite::Classification,
                Suite::Smashing,
                Suite::SupportDatum,
            ] {
                out.extend(run_suite(s, cfg));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass_at_small_scale() {
        let cfg = VerifyConfig {
            seed: 1,
            max_order: 24,
            prime_bound: 5,
            corpus_size: 24,
        };
        for report in run_suite(Suite::All, &cfg) {
            assert!(
                report.all_pass(),
                "suite {} failed: {:?}",
                report.suite,
                report.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(Suite::parse("spectral").is_err());
        assert_eq!(Suite::parse("support-datum"), Ok(Suite::SupportDatum));
    }
}
