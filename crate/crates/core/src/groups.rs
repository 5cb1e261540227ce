//! Canonical expressions for the countable abelian groups the model works
//! with, and the four bifunctors Hom, Ext, tensor and Tor on them.
//!
//! A group is stored as a finitely generated part in invariant-factor form
//! plus divisible atoms: copies of Q and Prufer groups I(p) = Z[1/p]/Z.
//! Equality of canonical forms is the isomorphism test, so every operation
//! normalizes its output. Hom and Ext can leave this algebra (for example
//! Hom(I(p), I(p)) is the p-adic integers); such values are returned as
//! `UnrepresentableNonzero` and only support a vanishing verdict.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use crate::arith::{is_prime_u64, prime_divisors, valuation};
use crate::linalg::{cokernel_invariants, IntMatrix};
use crate::spectrum::{SpecPoint, SpecSubset};

/// Finitely generated abelian group in invariant-factor form: free rank plus
/// a divisor chain d_1 | d_2 | ... with every d_i >= 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGGroup {
    rank: usize,
    factors: Vec<BigUint>,
}

impl FGGroup {
    /// Build from data already in canonical form (as produced by the Smith
    /// normal form); the chain condition is checked in debug builds.
    pub fn new(rank: usize, factors: Vec<BigUint>) -> Self {
        debug_assert!(factors.iter().all(|d| *d >= BigUint::from(2u32)));
        debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        FGGroup { rank, factors }
    }

    pub fn trivial() -> Self {
        FGGroup::new(0, Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        FGGroup::new(rank, Vec::new())
    }

    pub fn cyclic(n: u64) -> Self {
        FGGroup::cyclic_big(&BigUint::from(n))
    }

    /// Z/n, with Z/0 = Z and Z/1 = 0.
    pub fn cyclic_big(n: &BigUint) -> Self {
        if n.is_zero() {
            FGGroup::free(1)
        } else if n.is_one() {
            FGGroup::trivial()
        } else {
            FGGroup::new(0, vec![n.clone()])
        }
    }

    /// Canonicalize an arbitrary list of cyclic orders into the invariant
    /// factor chain by running the diagonal presentation through Smith form.
    pub fn from_orders(rank: usize, orders: &[BigUint]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|d| BigInt::from(d.clone())).collect();
        let g = cokernel_invariants(&IntMatrix::diagonal(&diag));
        FGGroup::new(rank + g.rank(), g.factors)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    /// Test convenience; panics if a factor exceeds u64.
    pub fn factors_u64(&self) -> Vec<u64> {
        self.factors
            .iter()
            .map(|d| d.to_u64().expect("factor exceeds u64"))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.iter().fold(BigUint::one(), |acc, d| acc * d))
    }

    pub fn direct_sum(&self, other: &FGGroup) -> FGGroup {
        let orders: Vec<BigUint> = self
            .factors
            .iter()
            .chain(other.factors.iter())
            .cloned()
            .collect();
        FGGroup::from_orders(self.rank + other.rank, &orders)
    }
}

impl fmt::Debug for FGGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GroupExpr::from(self.clone()))
    }
}

/// An indecomposable divisible group: Q or a Prufer group I(p).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DivAtom {
    Rationals,
    Prufer(u64),
}

impl DivAtom {
    pub fn prufer(p: u64) -> Self {
        assert!(is_prime_u64(p), "Prufer index {p} is not prime");
        DivAtom::Prufer(p)
    }
}

/// Canonical expression for a countable abelian group in the supported
/// algebra: f.g. part, copies of Q, and a multiset of Prufer atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupExpr {
    fg: FGGroup,
    q_copies: usize,
    prufer: Vec<u64>,
}

impl GroupExpr {
    pub fn new(fg: FGGroup, q_copies: usize, mut prufer: Vec<u64>) -> Self {
        for &p in &prufer {
            assert!(is_prime_u64(p), "Prufer index {p} is not prime");
        }
        prufer.sort_unstable();
        GroupExpr {
            fg,
            q_copies,
            prufer,
        }
    }

    pub fn zero() -> Self {
        GroupExpr::new(FGGroup::trivial(), 0, Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        GroupExpr::new(FGGroup::free(rank), 0, Vec::new())
    }

    pub fn cyclic(n: u64) -> Self {
        GroupExpr::new(FGGroup::cyclic(n), 0, Vec::new())
    }

    pub fn cyclic_big(n: &BigUint) -> Self {
        GroupExpr::new(FGGroup::cyclic_big(n), 0, Vec::new())
    }

    pub fn rationals(copies: usize) -> Self {
        GroupExpr::new(FGGroup::trivial(), copies, Vec::new())
    }

    pub fn prufer(p: u64) -> Self {
        GroupExpr::new(FGGroup::trivial(), 0, vec![p])
    }

    /// Canonicalize a presentation matrix plus divisible atoms.
    pub fn canonicalize(presentation: &IntMatrix, q_copies: usize, prufer: &[u64]) -> Self {
        GroupExpr::new(cokernel_invariants(presentation), q_copies, prufer.to_vec())
    }

    pub fn fg(&self) -> &FGGroup {
        &self.fg
    }

    pub fn q_copies(&self) -> usize {
        self.q_copies
    }

    pub fn prufer_atoms(&self) -> &[u64] {
        &self.prufer
    }

    /// The divisible summands, one atom per copy.
    pub fn divisible_atoms(&self) -> impl Iterator<Item = DivAtom> + '_ {
        std::iter::repeat_n(DivAtom::Rationals, self.q_copies)
            .chain(self.prufer.iter().map(|&p| DivAtom::Prufer(p)))
    }

    pub fn is_zero(&self) -> bool {
        self.fg.is_trivial() && self.q_copies == 0 && self.prufer.is_empty()
    }

    /// Purely finitely generated (no divisible atoms).
    pub fn is_fg(&self) -> bool {
        self.q_copies == 0 && self.prufer.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.is_fg() && self.fg.is_free()
    }

    pub fn is_finite(&self) -> bool {
        self.is_fg() && self.fg.is_finite()
    }

    /// Only divisible summands (the f.g. part is trivial).
    pub fn is_divisible(&self) -> bool {
        self.fg.is_trivial()
    }

    pub fn direct_sum(&self, other: &GroupExpr) -> GroupExpr {
        let mut prufer = self.prufer.clone();
        prufer.extend_from_slice(&other.prufer);
        GroupExpr::new(
            self.fg.direct_sum(&other.fg),
            self.q_copies + other.q_copies,
            prufer,
        )
    }

    fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        out.extend(std::iter::repeat_n(Atom::Free, self.fg.rank));
        out.extend(self.fg.factors.iter().cloned().map(Atom::Cyclic));
        out.extend(std::iter::repeat_n(Atom::Rationals, self.q_copies));
        out.extend(self.prufer.iter().map(|&p| Atom::Prufer(p)));
        out
    }
}

impl From<FGGroup> for GroupExpr {
    fn from(fg: FGGroup) -> Self {
        GroupExpr::new(fg, 0, Vec::new())
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<String> = Vec::new();
        match self.fg.rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            r => terms.push(format!("Z^{r}")),
        }
        for d in &self.fg.factors {
            terms.push(format!("Z/{d}"));
        }
        terms.extend(std::iter::repeat_n("Q".to_string(), self.q_copies));
        for p in &self.prufer {
            terms.push(format!("I({p})"));
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Result of Hom or Ext: either a group in the algebra, or a certificate
/// that the true value is nonzero but lies outside it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupValue {
    Exact(GroupExpr),
    UnrepresentableNonzero(String),
}

impl GroupValue {
    pub fn zero() -> Self {
        GroupValue::Exact(GroupExpr::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroupValue::Exact(g) => g.is_zero(),
            GroupValue::UnrepresentableNonzero(_) => false,
        }
    }

    pub fn as_exact(&self) -> Option<&GroupExpr> {
        match self {
            GroupValue::Exact(g) => Some(g),
            GroupValue::UnrepresentableNonzero(_) => None,
        }
    }

    pub fn unrepresentable_tag(&self) -> Option<&str> {
        match self {
            GroupValue::Exact(_) => None,
            GroupValue::UnrepresentableNonzero(t) => Some(t),
        }
    }

    /// Direct sum in value semantics: an unrepresentable-nonzero summand
    /// absorbs everything else.
    pub fn direct_sum(&self, other: &GroupValue) -> GroupValue {
        use GroupValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.direct_sum(b)),
            (UnrepresentableNonzero(t), Exact(_)) | (Exact(_), UnrepresentableNonzero(t)) => {
                UnrepresentableNonzero(t.clone())
            }
            (UnrepresentableNonzero(a), UnrepresentableNonzero(b)) => {
                let tags: BTreeSet<&str> = a.split(", ").chain(b.split(", ")).collect();
                UnrepresentableNonzero(tags.into_iter().collect::<Vec<_>>().join(", "))
            }
        }
    }
}

impl From<GroupExpr> for GroupValue {
    fn from(g: GroupExpr) -> Self {
        GroupValue::Exact(g)
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Exact(g) => write!(f, "{g}"),
            GroupValue::UnrepresentableNonzero(tag) => {
                write!(f, "nonzero (unrepresentable: {tag})")
            }
        }
    }
}

impl fmt::Debug for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Atom {
    Free,
    Cyclic(BigUint),
    Rationals,
    Prufer(u64),
}

fn atom_expr(a: &Atom) -> GroupExpr {
    match a {
        Atom::Free => GroupExpr::free(1),
        Atom::Cyclic(d) => GroupExpr::cyclic_big(d),
        Atom::Rationals => GroupExpr::rationals(1),
        Atom::Prufer(p) => GroupExpr::prufer(*p),
    }
}

fn prime_power(p: u64, k: u32) -> GroupExpr {
    if k == 0 {
        GroupExpr::zero()
    } else {
        GroupExpr::cyclic_big(&BigUint::from(p).pow(k))
    }
}

fn hom_atoms(a: &Atom, b: &Atom) -> GroupValue {
    use Atom::*;
    match (a, b) {
        (Free, _) => atom_expr(b).into(),
        (Cyclic(n), Cyclic(m)) => GroupExpr::cyclic_big(&n.gcd(m)).into(),
        (Cyclic(n), Prufer(p)) => prime_power(*p, valuation(n, *p)).into(),
        (Cyclic(_), Free) | (Cyclic(_), Rationals) => GroupValue::zero(),
        (Rationals, Rationals) => GroupExpr::rationals(1).into(),
        (Rationals, Prufer(p)) => GroupValue::UnrepresentableNonzero(format!("Hom(Q,I({p}))")),
        (Rationals, Free) | (Rationals, Cyclic(_)) => GroupValue::zero(),
        (Prufer(p), Prufer(q)) if p == q => {
            GroupValue::UnrepresentableNonzero(format!("{p}-adic integers"))
        }
        (Prufer(_), _) => GroupValue::zero(),
    }
}

fn ext_atoms(a: &Atom, b: &Atom) -> GroupValue {
    use Atom::*;
    match (a, b) {
        (Free, _) => GroupValue::zero(),
        // divisible targets are injective
        (_, Rationals) | (_, Prufer(_)) => GroupValue::zero(),
        (Cyclic(n), Free) => GroupExpr::cyclic_big(n).into(),
        (Cyclic(n), Cyclic(m)) => GroupExpr::cyclic_big(&n.gcd(m)).into(),
        (Rationals, Free) => GroupValue::UnrepresentableNonzero("Ext(Q,Z)".to_string()),
        (Rationals, Cyclic(_)) => GroupValue::zero(),
        (Prufer(p), Free) => GroupValue::UnrepresentableNonzero(format!("{p}-adic integers")),
        (Prufer(p), Cyclic(n)) => prime_power(*p, valuation(n, *p)).into(),
    }
}

fn tensor_atoms(a: &Atom, b: &Atom) -> GroupExpr {
    use Atom::*;
    match (a, b) {
        (Free, _) => atom_expr(b),
        (_, Free) => atom_expr(a),
        (Cyclic(n), Cyclic(m)) => GroupExpr::cyclic_big(&n.gcd(m)),
        (Rationals, Rationals) => GroupExpr::rationals(1),
        // a divisible factor kills torsion, a torsion factor kills Q
        (Cyclic(_), Rationals) | (Rationals, Cyclic(_)) => GroupExpr::zero(),
        (Cyclic(_), Prufer(_)) | (Prufer(_), Cyclic(_)) => GroupExpr::zero(),
        (Rationals, Prufer(_)) | (Prufer(_), Rationals) => GroupExpr::zero(),
        (Prufer(_), Prufer(_)) => GroupExpr::zero(),
    }
}

fn tor_atoms(a: &Atom, b: &Atom) -> GroupExpr {
    use Atom::*;
    match (a, b) {
        (Free, _) | (_, Free) => GroupExpr::zero(),
        (Rationals, _) | (_, Rationals) => GroupExpr::zero(),
        (Cyclic(n), Cyclic(m)) => GroupExpr::cyclic_big(&n.gcd(m)),
        (Cyclic(n), Prufer(p)) | (Prufer(p), Cyclic(n)) => prime_power(*p, valuation(n, *p)),
        (Prufer(p), Prufer(q)) => {
            if p == q {
                GroupExpr::prufer(*p)
            } else {
                GroupExpr::zero()
            }
        }
    }
}

fn bilinear_value(
    g: &GroupExpr,
    h: &GroupExpr,
    table: impl Fn(&Atom, &Atom) -> GroupValue,
) -> GroupValue {
    let mut acc = GroupValue::zero();
    for a in g.atoms() {
        for b in h.atoms() {
            acc = acc.direct_sum(&table(&a, &b));
        }
    }
    acc
}

fn bilinear_expr(
    g: &GroupExpr,
    h: &GroupExpr,
    table: impl Fn(&Atom, &Atom) -> GroupExpr,
) -> GroupExpr {
    let mut acc = GroupExpr::zero();
    for a in g.atoms() {
        for b in h.atoms() {
            acc = acc.direct_sum(&table(&a, &b));
        }
    }
    acc
}

pub fn hom(g: &GroupExpr, h: &GroupExpr) -> GroupValue {
    bilinear_value(g, h, hom_atoms)
}

pub fn ext(g: &GroupExpr, h: &GroupExpr) -> GroupValue {
    bilinear_value(g, h, ext_atoms)
}

pub fn tensor(g: &GroupExpr, h: &GroupExpr) -> GroupExpr {
    bilinear_expr(g, h, tensor_atoms)
}

pub fn tor(g: &GroupExpr, h: &GroupExpr) -> GroupExpr {
    bilinear_expr(g, h, tor_atoms)
}

/// Whether the localization of `g` at the point `q` vanishes. Localizing at
/// the generic point means rationalization, which kills all torsion,
/// including every Prufer atom.
pub fn localization_vanishes(g: &GroupExpr, q: SpecPoint) -> bool {
    if g.fg.rank > 0 || g.q_copies > 0 {
        return false;
    }
    match q {
        SpecPoint::Zero => true,
        SpecPoint::Prime(p) => {
            // the chain condition means the last factor carries every prime
            let torsion_survives = g.fg.factors.last().is_some_and(|d| valuation(d, p) > 0);
            !torsion_survives && !g.prufer.contains(&p)
        }
    }
}

/// Points p such that I(p) occurs in the minimal injective resolution
/// I^0 -> I^1 of `g`. A free summand embeds in Q with quotient the sum of
/// all I(p), so it contributes the whole spectrum.
pub fn injective_support(g: &GroupExpr) -> SpecSubset {
    if g.fg.rank > 0 {
        return SpecSubset::All;
    }
    let mut points = BTreeSet::new();
    if g.q_copies > 0 {
        points.insert(SpecPoint::Zero);
    }
    for d in &g.fg.factors {
        for p in prime_divisors(d) {
            points.insert(SpecPoint::Prime(p));
        }
    }
    for &p in &g.prufer {
        points.insert(SpecPoint::Prime(p));
    }
    SpecSubset::finite(points)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bifunctor {
    Hom,
    Ext,
    Tensor,
    Tor,
}

impl Bifunctor {
    pub const ALL: [Bifunctor; 4] = [
        Bifunctor::Hom,
        Bifunctor::Ext,
        Bifunctor::Tensor,
        Bifunctor::Tor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Bifunctor::Hom => "hom",
            Bifunctor::Ext => "ext",
            Bifunctor::Tensor => "tensor",
            Bifunctor::Tor => "tor",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("group order {order} exceeds oracle bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("oracle requires finite groups")]
    NotFinite,
}

/// Brute-force evaluation of a bifunctor on finite groups, independent of
/// the closed-form tables above.
///
/// Hom and Tor reduce to the d-torsion subgroups of H (homomorphism images
/// of a cyclic generator, respectively kernels of multiplication), Ext and
/// tensor to the quotients H/dH (resolution-based), one piece per invariant
/// factor d of G. Each piece is enumerated element by element; the pieces
/// are recombined by multiplying torsion-count profiles, and the invariant
/// factors are reconstructed from the counts alone.
pub fn oracle_bifunctor(
    which: Bifunctor,
    g: &FGGroup,
    h: &FGGroup,
    bound: u64,
) -> Result<FGGroup, OracleError> {
    let order_of = |x: &FGGroup| -> Result<u64, OracleError> {
        let o = x.order().ok_or(OracleError::NotFinite)?;
        o.to_u64().ok_or(OracleError::BoundExceeded {
            order: u64::MAX,
            bound,
        })
    };
    let og = order_of(g)?;
    let oh = order_of(h)?;
    for o in [og, oh] {
        if o > bound {
            return Err(OracleError::BoundExceeded { order: o, bound });
        }
    }

    let h_orders = h.factors_u64();
    let h_elements = enumerate_tuples(&h_orders);
    let g_factors = g.factors_u64();

    let pieces: Vec<Piece> = g_factors
        .iter()
        .map(|&d| match which {
            Bifunctor::Hom => Piece::torsion_subgroup(&h_orders, &h_elements, d),
            Bifunctor::Tor => Piece::mult_kernel(&h_orders, &h_elements, d),
            Bifunctor::Ext | Bifunctor::Tensor => Piece::mult_quotient(&h_orders, &h_elements, d),
        })
        .collect();

    Ok(invariants_from_pieces(&pieces))
}

/// All tuples (x_1, ..., x_k) with 0 <= x_i < orders[i].
fn enumerate_tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for t in &out {
            for v in 0..d {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn kills(orders: &[u64], x: &[u64], m: u64) -> bool {
    orders
        .iter()
        .zip(x)
        .all(|(&d, &v)| (m as u128 * v as u128).is_multiple_of(d as u128))
}

/// One cyclic slot of the source group paired with H, as an enumerated
/// finite group that only needs to answer torsion counts.
enum Piece {
    /// Subgroup of H given by an explicit element list.
    Sub {
        orders: Vec<u64>,
        elements: Vec<Vec<u64>>,
    },
    /// Quotient H / dH with the image subgroup listed.
    Quot {
        orders: Vec<u64>,
        all: Vec<Vec<u64>>,
        image: std::collections::HashSet<Vec<u64>>,
    },
}

impl Piece {
    /// {h in H : d h = 0}; each element is the image of the generator under
    /// one homomorphism Z/d -> H.
    fn torsion_subgroup(orders: &[u64], all: &[Vec<u64>], d: u64) -> Piece {
        let elements = all
            .iter()
            .filter(|x| kills(orders, x, d))
            .cloned()
            .collect();
        Piece::Sub {
            orders: orders.to_vec(),
            elements,
        }
    }

    /// Kernel of multiplication by d on H.
    fn mult_kernel(orders: &[u64], all: &[Vec<u64>], d: u64) -> Piece {
        // same subgroup, arrived at as ker(d : H -> H)
        let elements = all
            .iter()
            .filter(|x| {
                orders
                    .iter()
                    .zip(x.iter())
                    .all(|(&o, &v)| (d as u128 * v as u128).is_multiple_of(o as u128))
            })
            .cloned()
            .collect();
        Piece::Sub {
            orders: orders.to_vec(),
            elements,
        }
    }

    /// H / dH with the image dH enumerated.
    fn mult_quotient(orders: &[u64], all: &[Vec<u64>], d: u64) -> Piece {
        let image = all
            .iter()
            .map(|x| {
                orders
                    .iter()
                    .zip(x.iter())
                    .map(|(&o, &v)| ((d as u128 * v as u128) % o as u128) as u64)
                    .collect::<Vec<u64>>()
            })
            .collect();
        Piece::Quot {
            orders: orders.to_vec(),
            all: all.to_vec(),
            image,
        }
    }

    fn size(&self) -> u64 {
        match self {
            Piece::Sub { elements, .. } => elements.len() as u64,
            Piece::Quot { all, image, .. } => (all.len() / image.len()) as u64,
        }
    }

    /// Number of elements x with m x = 0.
    fn torsion_count(&self, m: u64) -> u64 {
        match self {
            Piece::Sub { orders, elements } => {
                elements.iter().filter(|x| kills(orders, x, m)).count() as u64
            }
            Piece::Quot { orders, all, image } => {
                let preimage = all
                    .iter()
                    .filter(|x| {
                        let mx: Vec<u64> = orders
                            .iter()
                            .zip(x.iter())
                            .map(|(&o, &v)| ((m as u128 * v as u128) % o as u128) as u64)
                            .collect();
                        image.contains(&mx)
                    })
                    .count() as u64;
                preimage / image.len() as u64
            }
        }
    }
}

/// Reconstruct invariant factors of a finite product of pieces from torsion
/// counts: counts multiply across direct factors, and for each prime p the
/// jumps of log_p |A[p^j]| give the exponent partition.
fn invariants_from_pieces(pieces: &[Piece]) -> FGGroup {
    let total: u64 = pieces.iter().map(Piece::size).product();
    if total == 1 {
        return FGGroup::trivial();
    }
    let count = |m: u64| -> u64 { pieces.iter().map(|p| p.torsion_count(m)).product() };

    // exponent partition per prime: col[j] = #factors with valuation >= j+1
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, _) in crate::arith::prime_factorization(&BigUint::from(total)) {
        let mut cols: Vec<u32> = Vec::new();
        let mut prev = 1u64;
        let mut pj = 1u64;
        loop {
            pj = pj.checked_mul(p).expect("torsion exponent overflow");
            let c = count(pj);
            if c == prev {
                break;
            }
            let ratio = c / prev;
            assert_eq!(c % prev, 0, "torsion counts not multiplicative");
            let mut r = 0u32;
            let mut acc = 1u64;
            while acc < ratio {
                acc *= p;
                r += 1;
            }
            assert_eq!(acc, ratio, "torsion jump not a power of {p}");
            cols.push(r);
            prev = c;
        }
        per_prime.push((p, cols));
    }

    let k = per_prime
        .iter()
        .map(|(_, cols)| cols.first().copied().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    // factor i counted from the largest: valuation = #{j : cols[j] >= i+1}
    let mut factors: Vec<BigUint> = Vec::new();
    for i in 0..k {
        let mut d = BigUint::one();
        for (p, cols) in &per_prime {
            let e = cols.iter().filter(|&&c| c as usize > i).count() as u32;
            if e > 0 {
                d *= BigUint::from(*p).pow(e);
            }
        }
        factors.push(d);
    }
    factors.reverse(); // ascending chain
    FGGroup::new(0, factors)
}

/// Closed-form value of a bifunctor restricted to finite groups, for
/// comparison against the oracle.
pub fn table_bifunctor(which: Bifunctor, g: &FGGroup, h: &FGGroup) -> GroupValue {
    let ge = GroupExpr::from(g.clone());
    let he = GroupExpr::from(h.clone());
    match which {
        Bifunctor::Hom => hom(&ge, &he),
        Bifunctor::Ext => ext(&ge, &he),
        Bifunctor::Tensor => tensor(&ge, &he).into(),
        Bifunctor::Tor => tor(&ge, &he).into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> GroupExpr {
        GroupExpr::cyclic(n)
    }

    #[test]
    fn canonicalize_merges_coprime_factors() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let g = GroupExpr::canonicalize(&m, 0, &[]);
        assert_eq!(g, z(6));
    }

    #[test]
    fn canonicalize_free_with_rationals() {
        let g = GroupExpr::canonicalize(&IntMatrix::zero(1, 0), 1, &[]);
        assert_eq!(g, GroupExpr::free(1).direct_sum(&GroupExpr::rationals(1)));
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(z(2).direct_sum(&z(2)).fg().factors_u64(), vec![2, 2]);
        assert_eq!(z(2).direct_sum(&z(3)).fg().factors_u64(), vec![6]);
        let g = GroupExpr::free(1).direct_sum(&GroupExpr::prufer(2));
        assert_eq!(GroupExpr::zero().direct_sum(&g), g);
    }

    #[test]
    fn hom_represented_functor() {
        let g = GroupExpr::free(2)
            .direct_sum(&z(12))
            .direct_sum(&GroupExpr::prufer(3));
        assert_eq!(hom(&GroupExpr::free(1), &g), GroupValue::Exact(g));
    }

    #[test]
    fn hom_cyclic() {
        assert_eq!(hom(&z(4), &z(6)), GroupValue::Exact(z(2)));
        assert_eq!(hom(&z(9), &GroupExpr::free(1)), GroupValue::zero());
    }

    #[test]
    fn hom_prufer_endomorphisms_unrepresentable() {
        let v = hom(&GroupExpr::prufer(5), &GroupExpr::prufer(5));
        assert!(!v.is_zero());
        assert_eq!(v.unrepresentable_tag(), Some("5-adic integers"));
        assert_eq!(
            hom(&GroupExpr::prufer(5), &GroupExpr::prufer(7)),
            GroupValue::zero()
        );
    }

    #[test]
    fn ext_standard_resolution() {
        assert_eq!(ext(&z(6), &GroupExpr::free(1)), GroupValue::Exact(z(6)));
        assert_eq!(ext(&z(4), &z(6)), GroupValue::Exact(z(2)));
    }

    #[test]
    fn ext_into_divisible_vanishes() {
        for n in [2u64, 9, 12] {
            assert_eq!(ext(&z(n), &GroupExpr::prufer(3)), GroupValue::zero());
            assert_eq!(ext(&z(n), &GroupExpr::rationals(1)), GroupValue::zero());
        }
    }

    #[test]
    fn ext_rationals_against_free_is_unrepresentable() {
        assert!(!ext(&GroupExpr::rationals(1), &GroupExpr::free(1)).is_zero());
        assert_eq!(ext(&GroupExpr::rationals(1), &z(6)), GroupValue::zero());
    }

    #[test]
    fn prufer_rows_of_the_tables() {
        // Hom out of a cyclic group into I(p) picks up the p-primary part
        assert_eq!(hom(&z(12), &GroupExpr::prufer(2)), GroupValue::Exact(z(4)));
        assert_eq!(hom(&z(12), &GroupExpr::prufer(5)), GroupValue::zero());
        // Ext out of I(p) against Z is the p-adic integers, against a
        // cyclic group it is again the p-primary part
        let v = ext(&GroupExpr::prufer(2), &GroupExpr::free(1));
        assert_eq!(v.unrepresentable_tag(), Some("2-adic integers"));
        assert_eq!(ext(&GroupExpr::prufer(3), &z(18)), GroupValue::Exact(z(9)));
        assert_eq!(ext(&GroupExpr::prufer(5), &z(18)), GroupValue::zero());
        // Hom out of I(p) into anything finitely generated dies
        assert_eq!(hom(&GroupExpr::prufer(3), &z(9)), GroupValue::zero());
        assert_eq!(
            hom(&GroupExpr::prufer(3), &GroupExpr::free(2)),
            GroupValue::zero()
        );
        assert_eq!(
            hom(&GroupExpr::prufer(3), &GroupExpr::rationals(1)),
            GroupValue::zero()
        );
    }

    #[test]
    fn tensor_examples() {
        let g = GroupExpr::free(1).direct_sum(&z(8));
        assert_eq!(tensor(&GroupExpr::free(1), &g), g);
        assert_eq!(tensor(&z(4), &z(6)), z(2));
        assert_eq!(tensor(&GroupExpr::prufer(3), &z(9)), GroupExpr::zero());
        assert_eq!(
            tensor(&GroupExpr::prufer(3), &GroupExpr::free(1)),
            GroupExpr::prufer(3)
        );
    }

    #[test]
    fn tor_examples() {
        assert_eq!(tor(&GroupExpr::free(3), &z(12)), GroupExpr::zero());
        assert_eq!(tor(&z(4), &z(6)), z(2));
        assert_eq!(
            tor(&GroupExpr::prufer(2), &GroupExpr::prufer(2)),
            GroupExpr::prufer(2)
        );
        assert_eq!(
            tor(&GroupExpr::prufer(2), &GroupExpr::prufer(3)),
            GroupExpr::zero()
        );
        assert_eq!(tor(&GroupExpr::prufer(3), &z(18)), z(9));
    }

    #[test]
    fn localization_examples() {
        assert!(localization_vanishes(&z(9), SpecPoint::Prime(2)));
        assert!(!localization_vanishes(
            &GroupExpr::free(1).direct_sum(&z(9)),
            SpecPoint::Prime(2)
        ));
        assert!(!localization_vanishes(
            &GroupExpr::prufer(3),
            SpecPoint::Prime(3)
        ));
        assert!(localization_vanishes(
            &GroupExpr::prufer(3),
            SpecPoint::Prime(5)
        ));
        // rationalization kills every torsion group, Prufer atoms included
        assert!(localization_vanishes(
            &GroupExpr::prufer(3),
            SpecPoint::Zero
        ));
        assert!(localization_vanishes(&z(9), SpecPoint::Zero));
        assert!(!localization_vanishes(
            &GroupExpr::rationals(1),
            SpecPoint::Zero
        ));
        assert!(!localization_vanishes(
            &GroupExpr::rationals(1),
            SpecPoint::Prime(7)
        ));
    }

    #[test]
    fn injective_support_examples() {
        assert_eq!(injective_support(&GroupExpr::free(1)), SpecSubset::All);
        assert_eq!(
            injective_support(&z(8)),
            SpecSubset::points(&[SpecPoint::Prime(2)])
        );
        assert_eq!(
            injective_support(&GroupExpr::rationals(1)),
            SpecSubset::points(&[SpecPoint::Zero])
        );
        assert_eq!(
            injective_support(&z(12).direct_sum(&GroupExpr::prufer(7))),
            SpecSubset::points(&[
                SpecPoint::Prime(2),
                SpecPoint::Prime(3),
                SpecPoint::Prime(7)
            ])
        );
    }

    #[test]
    fn oracle_examples() {
        let klein = FGGroup::from_orders(0, &[BigUint::from(2u32), BigUint::from(2u32)]);
        let got = oracle_bifunctor(Bifunctor::Hom, &klein, &FGGroup::cyclic(2), 64).unwrap();
        assert_eq!(got, klein);

        let got = oracle_bifunctor(
            Bifunctor::Tensor,
            &FGGroup::cyclic(2),
            &FGGroup::cyclic(3),
            64,
        )
        .unwrap();
        assert!(got.is_trivial());

        let got = oracle_bifunctor(
            Bifunctor::Tor,
            &FGGroup::cyclic(6),
            &FGGroup::cyclic(15),
            64,
        )
        .unwrap();
        assert_eq!(got, FGGroup::cyclic(3));
    }

    #[test]
    fn oracle_bound() {
        let err = oracle_bifunctor(
            Bifunctor::Hom,
            &FGGroup::cyclic(128),
            &FGGroup::cyclic(2),
            64,
        )
        .unwrap_err();
        assert_eq!(
            err,
            OracleError::BoundExceeded {
                order: 128,
                bound: 64
            }
        );
        let err = oracle_bifunctor(Bifunctor::Hom, &FGGroup::free(1), &FGGroup::cyclic(2), 64)
            .unwrap_err();
        assert_eq!(err, OracleError::NotFinite);
    }

    /// Stage data for a directed or inverse system of cyclic groups: orders
    /// g_n and the multiplier carrying a generator one stage along.
    struct CyclicSystem {
        orders: Vec<u64>,
        multiplier: u64,
    }

    impl CyclicSystem {
        fn image_order(&self, steps: u32, target: u64) -> u64 {
            let mut m = 1u64 % target;
            for _ in 0..steps {
                m = (m as u128 * self.multiplier as u128 % target as u128) as u64;
            }
            if m == 0 {
                1
            } else {
                target / num_integer::gcd(m, target)
            }
        }

        /// Directed system: order of the image of stage `from` in the final
        /// stage under the composite transition map.
        fn colimit_image_order(&self, from: usize) -> u64 {
            let steps = (self.orders.len() - 1 - from) as u32;
            self.image_order(steps, *self.orders.last().unwrap())
        }

        /// Inverse system: order of the image of the final stage down in
        /// stage `at` under the composite restriction map.
        fn limit_image_order(&self, at: usize) -> u64 {
            let steps = (self.orders.len() - 1 - at) as u32;
            self.image_order(steps, self.orders[at])
        }
    }

    #[test]
    fn prufer_tensor_probe_collapses() {
        // I(p) (x) Z/m as colim of Z/p^n (x) Z/m with multiplication-by-p
        // transitions: the stage groups are nonzero but the composite images
        // die, matching the closed form I(p) (x) Z/m = 0.
        for (p, m) in [(2u64, 8u64), (3, 9), (2, 12), (5, 7)] {
            let orders: Vec<u64> = (1..=8).map(|n| num_integer::gcd(p.pow(n), m)).collect();
            let sys = CyclicSystem {
                orders,
                multiplier: p,
            };
            assert_eq!(sys.colimit_image_order(2), 1, "p={p} m={m}");
            assert!(tensor(&GroupExpr::prufer(p), &z(m)).is_zero());
        }
    }

    #[test]
    fn prufer_hom_probe_matches_verdicts() {
        // Hom(I(p), I(p)) = lim Hom(Z/p^n, I(p)): restrictions are the full
        // surjections, so stable images stay Z/p^n != 0.
        let p = 3u64;
        let sys = CyclicSystem {
            orders: (1..=8).map(|n| p.pow(n)).collect(),
            multiplier: 1,
        };
        assert_eq!(sys.limit_image_order(2), p.pow(3));
        assert!(!hom(&GroupExpr::prufer(p), &GroupExpr::prufer(p)).is_zero());

        // Hom(I(p), Z/p^k) = lim Hom(Z/p^n, Z/p^k): past n = k the
        // restriction is multiplication by p, so the limit dies.
        let k = 3u32;
        let sys = CyclicSystem {
            orders: (1..=8).map(|n| p.pow(n.min(k))).collect(),
            multiplier: p,
        };
        assert_eq!(sys.limit_image_order(2), 1);
        assert!(hom(&GroupExpr::prufer(p), &z(p.pow(k))).is_zero());
    }

    #[test]
    fn prufer_tor_probe_stabilizes() {
        // Tor(I(p), X) = colim Tor(Z/p^n, X) with injective transitions:
        // the stabilized stage value is the answer.
        for (p, q, k) in [(2u64, 2u64, 3u32), (2, 3, 2), (5, 5, 1), (3, 7, 4)] {
            let stage = |n: u32| tor(&z(p.pow(n)), &z(q.pow(k)));
            assert_eq!(stage(7), stage(8), "not stabilized");
            assert_eq!(tor(&GroupExpr::prufer(p), &z(q.pow(k))), stage(8));
        }
    }

    fn finite_group() -> impl Strategy<Value = FGGroup> {
        proptest::collection::vec(1u64..=16, 0..=3).prop_filter_map("order too large", |orders| {
            let big: Vec<BigUint> = orders.iter().map(|&o| BigUint::from(o)).collect();
            let g = FGGroup::from_orders(0, &big);
            let ok = g.order().and_then(|o| o.to_u64()).is_some_and(|o| o <= 64);
            ok.then_some(g)
        })
    }

    fn group_expr() -> impl Strategy<Value = GroupExpr> {
        (
            0usize..=2,
            proptest::collection::vec(2u64..=16, 0..=2),
            0usize..=1,
            proptest::collection::vec(proptest::sample::select(vec![2u64, 3, 5, 7]), 0..=2),
        )
            .prop_map(|(rank, orders, q, prufer)| {
                let big: Vec<BigUint> = orders.iter().map(|&o| BigUint::from(o)).collect();
                GroupExpr::new(FGGroup::from_orders(rank, &big), q, prufer)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn table_matches_oracle(g in finite_group(), h in finite_group()) {
            for which in Bifunctor::ALL {
                let want = oracle_bifunctor(which, &g, &h, 64).unwrap();
                let got = table_bifunctor(which, &g, &h);
                prop_assert_eq!(
                    got,
                    GroupValue::Exact(GroupExpr::from(want)),
                    "{} mismatch on {:?}, {:?}", which.name(), g, h
                );
            }
        }

        #[test]
        fn bifunctors_biadditive(a in group_expr(), b in group_expr(), c in group_expr()) {
            let ab = a.direct_sum(&b);
            prop_assert_eq!(hom(&ab, &c), hom(&a, &c).direct_sum(&hom(&b, &c)));
            prop_assert_eq!(hom(&c, &ab), hom(&c, &a).direct_sum(&hom(&c, &b)));
            prop_assert_eq!(ext(&ab, &c), ext(&a, &c).direct_sum(&ext(&b, &c)));
            prop_assert_eq!(ext(&c, &ab), ext(&c, &a).direct_sum(&ext(&c, &b)));
            prop_assert_eq!(tensor(&ab, &c), tensor(&a, &c).direct_sum(&tensor(&b, &c)));
            prop_assert_eq!(tor(&ab, &c), tor(&a, &c).direct_sum(&tor(&b, &c)));
        }

        #[test]
        fn tor_symmetric(a in group_expr(), b in group_expr()) {
            prop_assert_eq!(tor(&a, &b), tor(&b, &a));
            prop_assert_eq!(tensor(&a, &b), tensor(&b, &a));
        }

        #[test]
        fn divisible_targets_are_ext_trivial(a in group_expr(), q in 0usize..=2) {
            let divisible = GroupExpr::new(
                FGGroup::trivial(),
                q,
                vec![2, 5],
            );
            prop_assert_eq!(ext(&a, &divisible), GroupValue::zero());
        }

        #[test]
        fn vanishing_matches_oracle(g in finite_group(), h in finite_group()) {
            for which in Bifunctor::ALL {
                let want = oracle_bifunctor(which, &g, &h, 64).unwrap();
                prop_assert_eq!(table_bifunctor(which, &g, &h).is_zero(), want.is_trivial());
            }
        }

        #[test]
        fn localization_detects_zero(g in group_expr()) {
            let mut candidates = vec![SpecPoint::Zero, SpecPoint::Prime(2), SpecPoint::Prime(3)];
            if let SpecSubset::Fin(points) = injective_support(&g) {
                candidates.extend(points);
            }
            let all_vanish = candidates.iter().all(|&q| localization_vanishes(&g, q));
            prop_assert_eq!(all_vanish, g.is_zero());
        }
    }
}
