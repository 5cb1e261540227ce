//! Z/2-graded groups and the graded bifunctors.
//!
//! Degree bookkeeping follows the usual conventions: graded Hom has the
//! degree-preserving maps in degree zero and the degree-exchanging maps in
//! degree one, graded Ext pairs degrees the same way, and the graded tensor
//! and Tor of M and N collect the pieces with i + j = epsilon. (The tensor
//! convention really is the tensor product of the parts, not their sum.)

use std::fmt;
use std::ops::Add;

use crate::groups::{self, GroupExpr, GroupValue};

/// Degree in Z/2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Degree {
    Zero,
    One,
}

impl Degree {
    pub fn flip(self) -> Degree {
        match self {
            Degree::Zero => Degree::One,
            Degree::One => Degree::Zero,
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        if self == rhs {
            Degree::Zero
        } else {
            Degree::One
        }
    }
}

/// A Z/2-graded group in the supported algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    pub deg0: GroupExpr,
    pub deg1: GroupExpr,
}

impl GradedGroup {
    pub fn new(deg0: GroupExpr, deg1: GroupExpr) -> Self {
        GradedGroup { deg0, deg1 }
    }

    pub fn zero() -> Self {
        GradedGroup::new(GroupExpr::zero(), GroupExpr::zero())
    }

    /// M concentrated in degree epsilon.
    pub fn place(m: GroupExpr, degree: Degree) -> Self {
        match degree {
            Degree::Zero => GradedGroup::new(m, GroupExpr::zero()),
            Degree::One => GradedGroup::new(GroupExpr::zero(), m),
        }
    }

    pub fn part(&self, degree: Degree) -> &GroupExpr {
        match degree {
            Degree::Zero => &self.deg0,
            Degree::One => &self.deg1,
        }
    }

    /// Degree swap; an involution by Bott periodicity.
    pub fn suspend(&self) -> GradedGroup {
        GradedGroup::new(self.deg1.clone(), self.deg0.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.deg0.is_zero() && self.deg1.is_zero()
    }

    /// Both degrees purely finitely generated.
    pub fn is_fg(&self) -> bool {
        self.deg0.is_fg() && self.deg1.is_fg()
    }

    pub fn is_free(&self) -> bool {
        self.deg0.is_free() && self.deg1.is_free()
    }

    pub fn is_divisible(&self) -> bool {
        self.deg0.is_divisible() && self.deg1.is_divisible()
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        GradedGroup::new(
            self.deg0.direct_sum(&other.deg0),
            self.deg1.direct_sum(&other.deg1),
        )
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.deg0.is_zero(), self.deg1.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{} [0]", self.deg0),
            (true, false) => write!(f, "{} [1]", self.deg1),
            (false, false) => write!(f, "{} [0] ; {} [1]", self.deg0, self.deg1),
        }
    }
}

impl fmt::Debug for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Graded value: one GroupValue per degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedValue {
    pub deg0: GroupValue,
    pub deg1: GroupValue,
}

impl GradedValue {
    pub fn new(deg0: GroupValue, deg1: GroupValue) -> Self {
        GradedValue { deg0, deg1 }
    }

    pub fn zero() -> Self {
        GradedValue::new(GroupValue::zero(), GroupValue::zero())
    }

    pub fn part(&self, degree: Degree) -> &GroupValue {
        match degree {
            Degree::Zero => &self.deg0,
            Degree::One => &self.deg1,
        }
    }

    pub fn suspend(&self) -> GradedValue {
        GradedValue::new(self.deg1.clone(), self.deg0.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.deg0.is_zero() && self.deg1.is_zero()
    }

    pub fn direct_sum(&self, other: &GradedValue) -> GradedValue {
        GradedValue::new(
            self.deg0.direct_sum(&other.deg0),
            self.deg1.direct_sum(&other.deg1),
        )
    }

    pub fn unrepresentable_tags(&self) -> Vec<String> {
        let mut tags = Vec::new();
        for v in [&self.deg0, &self.deg1] {
            if let Some(t) = v.unrepresentable_tag() {
                for part in t.split(", ") {
                    if !tags.iter().any(|x| x == part) {
                        tags.push(part.to_string());
                    }
                }
            }
        }
        tags
    }
}

impl From<GradedGroup> for GradedValue {
    fn from(g: GradedGroup) -> Self {
        GradedValue::new(g.deg0.into(), g.deg1.into())
    }
}

impl fmt::Debug for GradedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg0 = {}, deg1 = {}", self.deg0, self.deg1)
    }
}

/// Graded Hom: degree-preserving maps in degree 0, degree-exchanging maps in
/// degree 1.
pub fn graded_hom(m: &GradedGroup, n: &GradedGroup) -> GradedValue {
    GradedValue::new(
        groups::hom(&m.deg0, &n.deg0).direct_sum(&groups::hom(&m.deg1, &n.deg1)),
        groups::hom(&m.deg0, &n.deg1).direct_sum(&groups::hom(&m.deg1, &n.deg0)),
    )
}

/// Graded Ext, paired by degree like graded Hom.
pub fn graded_ext(m: &GradedGroup, n: &GradedGroup) -> GradedValue {
    GradedValue::new(
        groups::ext(&m.deg0, &n.deg0).direct_sum(&groups::ext(&m.deg1, &n.deg1)),
        groups::ext(&m.deg0, &n.deg1).direct_sum(&groups::ext(&m.deg1, &n.deg0)),
    )
}

/// Graded tensor product: (M (x) N)_e = sum over i + j = e of M_i (x) N_j.
pub fn graded_tensor(m: &GradedGroup, n: &GradedGroup) -> GradedGroup {
    GradedGroup::new(
        groups::tensor(&m.deg0, &n.deg0).direct_sum(&groups::tensor(&m.deg1, &n.deg1)),
        groups::tensor(&m.deg0, &n.deg1).direct_sum(&groups::tensor(&m.deg1, &n.deg0)),
    )
}

/// Graded Tor with the same degree pairing as the graded tensor.
pub fn graded_tor(m: &GradedGroup, n: &GradedGroup) -> GradedGroup {
    GradedGroup::new(
        groups::tor(&m.deg0, &n.deg0).direct_sum(&groups::tor(&m.deg1, &n.deg1)),
        groups::tor(&m.deg0, &n.deg1).direct_sum(&groups::tor(&m.deg1, &n.deg0)),
    )
}
