//! Spec Z combinatorics: supports of objects, membership predicates for the
//! localizing-subcategory classification, smashing and thickness tests, and
//! the support-datum report.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use crate::arith::{is_prime_u64, prime_divisors};
use crate::groups::{self, DivAtom};
use crate::object::{
    cone, k_with_coefficients, moore, realize, tensor_object, unit, BootObject, HomPartMorphism,
};

/// A point of Spec Z: the generic point or a prime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SpecPoint {
    Zero,
    Prime(u64),
}

impl SpecPoint {
    pub fn prime(p: u64) -> SpecPoint {
        assert!(is_prime_u64(p), "{p} is not prime");
        SpecPoint::Prime(p)
    }

    /// 0 for the generic point, p for a prime; anything else is rejected.
    pub fn try_from_u64(v: u64) -> Option<SpecPoint> {
        if v == 0 {
            Some(SpecPoint::Zero)
        } else if is_prime_u64(v) {
            Some(SpecPoint::Prime(v))
        } else {
            None
        }
    }

    pub fn as_u64(self) -> u64 {
        match self {
            SpecPoint::Zero => 0,
            SpecPoint::Prime(p) => p,
        }
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u64())
    }
}

/// A subset of Spec Z of the shape the model can store: everything, or a
/// finite set of points. All supports arising from the object algebra are
/// of this shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SpecSubset {
    All,
    Fin(BTreeSet<SpecPoint>),
}

impl SpecSubset {
    pub fn empty() -> SpecSubset {
        SpecSubset::Fin(BTreeSet::new())
    }

    pub fn finite(points: BTreeSet<SpecPoint>) -> SpecSubset {
        SpecSubset::Fin(points)
    }

    pub fn points(points: &[SpecPoint]) -> SpecSubset {
        SpecSubset::Fin(points.iter().copied().collect())
    }

    pub fn contains(&self, p: SpecPoint) -> bool {
        match self {
            SpecSubset::All => true,
            SpecSubset::Fin(s) => s.contains(&p),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SpecSubset::Fin(s) if s.is_empty())
    }

    pub fn union(&self, other: &SpecSubset) -> SpecSubset {
        match (self, other) {
            (SpecSubset::All, _) | (_, SpecSubset::All) => SpecSubset::All,
            (SpecSubset::Fin(a), SpecSubset::Fin(b)) => {
                SpecSubset::Fin(a.union(b).copied().collect())
            }
        }
    }

    pub fn intersect(&self, other: &SpecSubset) -> SpecSubset {
        match (self, other) {
            (SpecSubset::All, s) => s.clone(),
            (s, SpecSubset::All) => s.clone(),
            (SpecSubset::Fin(a), SpecSubset::Fin(b)) => {
                SpecSubset::Fin(a.intersection(b).copied().collect())
            }
        }
    }

    pub fn is_subset_of(&self, other: &SpecSubset) -> bool {
        match (self, other) {
            (_, SpecSubset::All) => true,
            (SpecSubset::All, SpecSubset::Fin(_)) => false,
            (SpecSubset::Fin(a), SpecSubset::Fin(b)) => a.is_subset(b),
        }
    }
}

impl fmt::Display for SpecSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecSubset::All => write!(f, "all"),
            SpecSubset::Fin(s) => {
                write!(f, "{{")?;
                for (i, p) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for SpecSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The localizing subcategory L_S attached to a subset of Spec Z; equality
/// of subcategories is equality of the subsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalizingSubcat {
    pub set: SpecSubset,
}

impl LocalizingSubcat {
    pub fn new(set: SpecSubset) -> Self {
        LocalizingSubcat { set }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("subset is not specialization closed")]
    NotSpecializationClosed,
    #[error("support datum requires compact objects; {0} is not compact")]
    NonCompactInput(String),
}

/// Candidate points where an object's K-theory could be supported: the
/// generic point plus every prime occurring in its invariant factors or
/// Prufer atoms.
fn candidate_points(a: &BootObject) -> BTreeSet<SpecPoint> {
    let mut out = BTreeSet::new();
    out.insert(SpecPoint::Zero);
    for part in [&a.ktheory().deg0, &a.ktheory().deg1] {
        for d in part.fg().factors() {
            for p in prime_divisors(d) {
                out.insert(SpecPoint::Prime(p));
            }
        }
        for atom in part.divisible_atoms() {
            match atom {
                DivAtom::Rationals => {}
                DivAtom::Prufer(p) => {
                    out.insert(SpecPoint::Prime(p));
                }
            }
        }
    }
    out
}

/// Tensor-side support: the points p with K(A; F_p) nonzero. A free
/// summand survives tensoring with every residue field, so it forces the
/// whole spectrum; otherwise only the finitely many candidate points can
/// contribute and each is probed through the actual coefficient K-theory.
pub fn supp(a: &BootObject) -> SpecSubset {
    let kt = a.ktheory();
    if kt.deg0.fg().rank() > 0 || kt.deg1.fg().rank() > 0 {
        return SpecSubset::All;
    }
    let points = candidate_points(a)
        .into_iter()
        .filter(|&q| !k_with_coefficients(a, q).is_zero())
        .collect();
    SpecSubset::Fin(points)
}

/// Resolution-side support: the points contributed by the minimal injective
/// resolution of the K-theory, degreewise.
pub fn supp_injective(a: &BootObject) -> SpecSubset {
    groups::injective_support(&a.ktheory().deg0)
        .union(&groups::injective_support(&a.ktheory().deg1))
}

/// Membership in L_S: the support stays inside S.
pub fn member(a: &BootObject, l: &LocalizingSubcat) -> bool {
    supp(a).is_subset_of(&l.set)
}

/// Membership in the injectively supported class Boot_V.
pub fn member_boot_v(a: &BootObject, v: &SpecSubset) -> bool {
    supp_injective(a).is_subset_of(v)
}

pub fn is_specialization_closed(s: &SpecSubset) -> bool {
    match s {
        SpecSubset::All => true,
        SpecSubset::Fin(points) => !points.contains(&SpecPoint::Zero),
    }
}

/// Smallest specialization closed superset: a set containing the generic
/// point closes up to the whole spectrum.
pub fn specialization_closure(s: &SpecSubset) -> SpecSubset {
    if is_specialization_closed(s) {
        s.clone()
    } else {
        SpecSubset::All
    }
}

/// Kernel-of-localizations membership: K-theory localizations vanish at
/// every point outside V. Only the object's candidate points (and the
/// generic point) can fail, so the check is finite.
pub fn localization_kernel_member(a: &BootObject, v: &SpecSubset) -> Result<bool, SpectrumError> {
    if !is_specialization_closed(v) {
        return Err(SpectrumError::NotSpecializationClosed);
    }
    match v {
        SpecSubset::All => Ok(true),
        SpecSubset::Fin(_) => {
            let kt = a.ktheory();
            Ok(candidate_points(a)
                .into_iter()
                .filter(|q| !v.contains(*q))
                .all(|q| {
                    groups::localization_vanishes(&kt.deg0, q)
                        && groups::localization_vanishes(&kt.deg1, q)
                }))
        }
    }
}

/// The localizing subcategory is smashing exactly when its subset is
/// specialization closed.
pub fn is_smashing(l: &LocalizingSubcat) -> bool {
    is_specialization_closed(&l.set)
}

/// Support of the localizing subcategory generated by a family.
pub fn generated_support(family: &[BootObject]) -> SpecSubset {
    family
        .iter()
        .fold(SpecSubset::empty(), |acc, a| acc.union(&supp(a)))
}

/// Whether `a` lies in the localizing subcategory generated by the family.
pub fn in_generated(a: &BootObject, family: &[BootObject]) -> bool {
    supp(a).is_subset_of(&generated_support(family))
}

/// The residue objects lying in the right orthogonal of L. The complement
/// of a finite set is cofinite and is returned as a marker rather than a
/// stored set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrthogonalResidues {
    /// Every residue object except those at the listed points.
    AllExcept(BTreeSet<SpecPoint>),
    /// Exactly the listed points.
    Exactly(BTreeSet<SpecPoint>),
}

impl OrthogonalResidues {
    pub fn contains(&self, p: SpecPoint) -> bool {
        match self {
            OrthogonalResidues::AllExcept(excluded) => !excluded.contains(&p),
            OrthogonalResidues::Exactly(points) => points.contains(&p),
        }
    }
}

pub fn orthogonal_residues(l: &LocalizingSubcat) -> OrthogonalResidues {
    match &l.set {
        SpecSubset::All => OrthogonalResidues::Exactly(BTreeSet::new()),
        SpecSubset::Fin(points) => OrthogonalResidues::AllExcept(points.clone()),
    }
}

/// One verified property with a counterexample slot.
#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl AxiomCheck {
    fn run(name: &str, cases: usize, counterexample: Option<String>) -> AxiomCheck {
        AxiomCheck {
            name: name.to_string(),
            pass: counterexample.is_none(),
            cases,
            counterexample,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SupportDatumReport {
    pub axioms: Vec<AxiomCheck>,
}

impl SupportDatumReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }
}

/// Check the support-datum axioms on a corpus of compact objects:
/// normalization on 0 and the unit, additivity over coproducts, suspension
/// invariance, the triangle estimate on unambiguous cones, and the tensor
/// formula supp(A (x) B) = supp A and supp B.
pub fn support_datum_check(corpus: &[BootObject]) -> Result<SupportDatumReport, SpectrumError> {
    for a in corpus {
        if !a.is_compact() {
            return Err(SpectrumError::NonCompactInput(a.label().to_string()));
        }
    }

    let mut axioms = Vec::new();

    axioms.push(AxiomCheck::run(
        "supp(0) = {}",
        1,
        (!supp(&realize(crate::graded::GradedGroup::zero())).is_empty())
            .then(|| "zero object has nonempty support".to_string()),
    ));

    axioms.push(AxiomCheck::run(
        "supp(unit) = all",
        1,
        (supp(&unit()) != SpecSubset::All).then(|| format!("supp(unit) = {}", supp(&unit()))),
    ));

    let mut bad = None;
    let mut cases = 0;
    for a in corpus {
        for b in corpus {
            cases += 1;
            let lhs = supp(&crate::object::coproduct(&[a.clone(), b.clone()]));
            let rhs = supp(a).union(&supp(b));
            if lhs != rhs {
                bad = Some(format!("A = {a}, B = {b}: {lhs} vs {rhs}"));
                break;
            }
        }
        if bad.is_some() {
            break;
        }
    }
    axioms.push(AxiomCheck::run("supp(A + B) = supp A u supp B", cases, bad));

    let mut bad = None;
    for a in corpus {
        if supp(&a.suspend()) != supp(a) {
            bad = Some(format!("A = {a}"));
            break;
        }
    }
    axioms.push(AxiomCheck::run("supp(SA) = supp A", corpus.len(), bad));

    let mut bad = None;
    let mut cases = 0;
    for a in corpus {
        for n in [0i64, 2, 3, 6] {
            let Ok(phi) = HomPartMorphism::multiplication(a, n) else {
                continue;
            };
            let c = cone(&phi);
            if c.extension_ambiguous {
                continue;
            }
            cases += 1;
            if !supp(&c.object).is_subset_of(&supp(a)) {
                bad = Some(format!("A = {a}, n = {n}"));
                break;
            }
        }
        if bad.is_some() {
            break;
        }
    }
    if bad.is_none() {
        for pair in corpus.windows(2) {
            let Ok(phi) = HomPartMorphism::zero_map(pair[0].clone(), pair[1].clone()) else {
                continue;
            };
            let c = cone(&phi);
            if c.extension_ambiguous {
                continue;
            }
            cases += 1;
            let bound = supp(&pair[0]).union(&supp(&pair[1]));
            if !supp(&c.object).is_subset_of(&bound) {
                bad = Some(format!("A = {}, B = {}", pair[0], pair[1]));
                break;
            }
        }
    }
    axioms.push(AxiomCheck::run(
        "supp(cone f) <= supp(src) u supp(tgt)",
        cases,
        bad,
    ));

    let mut bad = None;
    let mut cases = 0;
    for a in corpus {
        for b in corpus {
            cases += 1;
            let lhs = supp(&tensor_object(a, b));
            let rhs = supp(a).intersect(&supp(b));
            if lhs != rhs {
                bad = Some(format!("A = {a}, B = {b}: {lhs} vs {rhs}"));
                break;
            }
        }
        if bad.is_some() {
            break;
        }
    }
    axioms.push(AxiomCheck::run(
        "supp(A (x) B) = supp A n supp B",
        cases,
        bad,
    ));

    Ok(SupportDatumReport { axioms })
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub prime_bound: u64,
    pub class_count: usize,
    pub checks: Vec<AxiomCheck>,
}

impl ClassificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime_u64(p)).collect()
}

/// All specialization closed subsets over the primes up to the bound, plus
/// the whole spectrum.
pub fn enumerate_spec_closed(prime_bound: u64) -> Vec<SpecSubset> {
    let primes = primes_up_to(prime_bound);
    let mut out = Vec::new();
    for mask in 0u64..(1 << primes.len()) {
        let points: BTreeSet<SpecPoint> = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| SpecPoint::Prime(p))
            .collect();
        out.push(SpecSubset::Fin(points));
    }
    out.push(SpecSubset::All);
    out
}

/// Enumerate the thick classes over the primes up to the bound, build each
/// from Moore-object generators (cones of multiplication on the unit), and
/// verify distinctness and the tensor-ideal property.
pub fn thick_classification_demo(prime_bound: u64) -> ClassificationReport {
    assert!(prime_bound >= 2, "prime bound must be at least 2");
    let sets = enumerate_spec_closed(prime_bound);
    let class_count = sets.len();

    let generators = |s: &SpecSubset| -> Vec<BootObject> {
        match s {
            SpecSubset::All => vec![unit()],
            SpecSubset::Fin(points) => points
                .iter()
                .map(|p| {
                    let phi = HomPartMorphism::multiplication(&unit(), p.as_u64() as i64)
                        .expect("unit endomorphism");
                    cone(&phi).object
                })
                .collect(),
        }
    };

    let mut checks = Vec::new();

    let mut bad = None;
    for s in &sets {
        let gens = generators(s);
        if &generated_support(&gens) != s {
            bad = Some(format!("S = {s}"));
            break;
        }
    }
    checks.push(AxiomCheck::run(
        "generators recover their subset",
        sets.len(),
        bad,
    ));

    let mut bad = None;
    let mut cases = 0;
    'outer: for (i, s) in sets.iter().enumerate() {
        for t in sets.iter().skip(i + 1) {
            cases += 1;
            let ls = LocalizingSubcat::new(s.clone());
            let lt = LocalizingSubcat::new(t.clone());
            let witness = distinguishing_witness(s, t);
            let distinct = member(&witness, &ls) != member(&witness, &lt);
            if !distinct {
                bad = Some(format!("S = {s}, T = {t}"));
                break 'outer;
            }
        }
    }
    checks.push(AxiomCheck::run("classes pairwise distinct", cases, bad));

    let probes = [moore(2), moore(6), moore(15), unit(), moore(30)];
    let mut bad = None;
    let mut cases = 0;
    'outer: for s in &sets {
        let l = LocalizingSubcat::new(s.clone());
        for a in generators(s) {
            for b in &probes {
                cases += 1;
                if !member(&tensor_object(&a, b), &l) {
                    bad = Some(format!("S = {s}, A = {a}, B = {b}"));
                    break 'outer;
                }
            }
        }
    }
    checks.push(AxiomCheck::run("classes are tensor ideals", cases, bad));

    ClassificationReport {
        prime_bound,
        class_count,
        checks,
    }
}

/// An object separating two distinct subsets: a residue object at a point
/// of the symmetric difference, or kappa(0) against the whole spectrum.
fn distinguishing_witness(s: &SpecSubset, t: &SpecSubset) -> BootObject {
    match (s, t) {
        (SpecSubset::Fin(a), SpecSubset::Fin(b)) => {
            let p = a
                .symmetric_difference(b)
                .next()
                .expect("distinct finite sets differ");
            crate::object::residue_object(*p)
        }
        // the whole spectrum differs from any stored finite set at the
        // generic point
        _ => crate::object::residue_object(SpecPoint::Zero),
    }
}
