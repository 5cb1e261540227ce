//! Exact model of the compact-and-divisible K-theory algebra: canonical
//! abelian-group expressions, the graded Hom/Ext/tensor/Tor calculus,
//! objects identified with their Z/2-graded K-theory, KK-groups through the
//! split universal-coefficient sequence, tensor products through the split
//! Kunneth sequence, and the classification of localizing subcategories by
//! subsets of Spec Z, all property-tested against independent oracles.

pub mod arith;
pub mod corpus;
pub mod graded;
pub mod groups;
pub mod linalg;
pub mod object;
pub mod parse;
pub mod report;
pub mod spectrum;
pub mod verify;

pub use graded::{Degree, GradedGroup, GradedValue};
pub use groups::{Bifunctor, DivAtom, FGGroup, GroupExpr, GroupValue};
pub use linalg::{IntMatrix, SmithForm};
pub use object::{BootObject, ConeResult, HomPartMorphism};
pub use parse::{parse_object, parse_spec_subset, ObjectExpr, ParseError};
pub use report::RunReport;
pub use spectrum::{LocalizingSubcat, SpecPoint, SpecSubset};
pub use verify::{Suite, SuiteReport, VerifyConfig};
