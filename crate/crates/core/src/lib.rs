//! Exact A-isotopy classification of polynomial map-germs, with a
//! perturbation lab that enumerates the Morin points of versal unfoldings.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod germ;
pub mod label;
pub mod lowdim;
pub mod matrix;
pub mod morin;
pub mod par;
pub mod parse;
pub mod perturb;
pub mod point;
pub mod poly;
pub mod rat;
pub mod sigma20;
pub mod tables;
pub mod univariate;

pub use classify::{classify, classify_all};
pub use error::{Error, Result};
pub use germ::{analyze, null_field, GermAnalysis, MapGerm, VecField};
pub use label::{Classification, ClassLabel, Criterion, CriterionValue, Family, LabelClaim, SignSlot};
pub use matrix::{PolyMatrix, RatMatrix};
pub use parse::{parse_bytes, parse_germ, parse_map, render, ParseError, ParseErrorKind, ParsedGerm};
pub use morin::{isotopy_class, recognize_morin, MorinInvariant, MorinResult};
pub use point::{AlgebraicPoint, Origin, PointEval};
pub use poly::{Monomial, Poly, MAX_VARS};
pub use rat::Rat;
pub use univariate::{RealAlgebraic, RealRoot, UPoly};
