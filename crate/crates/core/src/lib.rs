//! Exact arithmetic for metric valued fields.
//!
//! Values live in `{0} ∪ {c^q : q ∈ ℚ}` for a rational base `c ∈ (0,1)` and
//! are compared exactly on exponents. Field backends are p-adic numbers,
//! Laurent and Puiseux series, and the trivially valued rationals. On top
//! of them sit the projective predicate `‖P(x̄)‖`, chart coverings of ℙⁿ,
//! balls and spheres over ℙ¹, ordered predicates and perturbation bounds.

pub mod algebraic;
pub mod berkovich;
pub mod charts;
pub mod error;
pub mod field;
pub mod interval;
pub mod gen;
pub mod logic;
pub mod ordered;
pub mod parse;
pub mod perturbation;
pub mod poly;
pub mod projective;
pub mod real;
pub mod rng;
pub mod value;

pub use error::{MvfError, Result};
pub use field::{Backend, CoeffField, Field, FieldDescriptor, FieldElement};
pub use projective::ProjPoint;
pub use real::Real;
pub use value::{AbsValue, Base};

/// Exact rationals, used for exponents, coefficients and thresholds.
pub type Q = num_rational::BigRational;

pub(crate) fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value::fmt_q(q))
}

pub(crate) fn ser_opt_q<S: serde::Serializer>(q: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_q(q, s),
        None => s.serialize_none(),
    }
}

/// Shorthand for building a rational from machine integers.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Shorthand for an integral rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}
