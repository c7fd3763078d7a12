//! Complete valued field backends.
//!
//! A [`FieldDescriptor`] fixes the backend, the value base `c`, the working
//! relative precision and an exponent scale (used for rescaled valuations
//! `|a|' = |a|^α`). Elements carry a shared handle to their descriptor.

mod coeff;
mod element;
mod padic;
pub(crate) mod ppoly;
mod sample;
mod square;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

pub use coeff::CoeffField;
pub use element::{field_arith, ArithOp, FieldElement};
pub use sample::{element_in_window, random_element, random_unit, sample, simplest_between, Constraint};
pub use square::{is_square, nth_root, sqrt, SquareAnswer};

use crate::value::{AbsValue, Base};
use crate::Q;

/// Default relative precision (digits or exponent units).
pub const DEFAULT_PREC: u32 = 64;
/// Default Puiseux ramification bound for root finding.
pub const DEFAULT_RAM: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Backend {
    Qp { p: u64 },
    Laurent { coeff: CoeffField },
    Puiseux { coeff: CoeffField, ram: u32 },
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    pub backend: Backend,
    pub base: Base,
    pub prec: u32,
    /// Exponent multiplier: `|x| = c^{scale·v(x)}`.
    pub scale: Q,
}

pub type Field = Arc<FieldDescriptor>;

impl FieldDescriptor {
    pub fn qp(p: u64) -> Field {
        assert!(is_prime(p), "{p} is not prime");
        Arc::new(FieldDescriptor {
            backend: Backend::Qp { p },
            base: Base::inverse_of(p),
            prec: DEFAULT_PREC,
            scale: Q::one(),
        })
    }

    pub fn laurent(coeff: CoeffField) -> Field {
        Arc::new(FieldDescriptor {
            backend: Backend::Laurent { coeff },
            base: Base::half(),
            prec: DEFAULT_PREC,
            scale: Q::one(),
        })
    }

    pub fn laurent_q() -> Field {
        Self::laurent(CoeffField::Rationals)
    }

    pub fn puiseux_q() -> Field {
        Arc::new(FieldDescriptor {
            backend: Backend::Puiseux { coeff: CoeffField::Rationals, ram: DEFAULT_RAM },
            base: Base::half(),
            prec: DEFAULT_PREC,
            scale: Q::one(),
        })
    }

    pub fn trivial() -> Field {
        Arc::new(FieldDescriptor {
            backend: Backend::Trivial,
            base: Base::half(),
            prec: DEFAULT_PREC,
            scale: Q::one(),
        })
    }

    pub fn with_prec(&self, prec: u32) -> Field {
        Arc::new(FieldDescriptor { prec, ..self.clone() })
    }

    pub fn with_base(&self, base: Base) -> Field {
        Arc::new(FieldDescriptor { base, ..self.clone() })
    }

    /// The same algebraic structure with valuation `|·|^α`.
    pub fn rescaled(&self, alpha: &Q) -> Field {
        Arc::new(FieldDescriptor { scale: &self.scale * alpha, ..self.clone() })
    }

    pub fn ordered(&self) -> bool {
        match &self.backend {
            Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => {
                *coeff == CoeffField::Rationals
            }
            Backend::Trivial => true,
            Backend::Qp { .. } => false,
        }
    }

    pub fn discrete_values(&self) -> bool {
        matches!(self.backend, Backend::Qp { .. } | Backend::Laurent { .. })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.backend, Backend::Trivial)
    }

    /// Coefficient field of the series backends (residue field).
    pub fn coeff(&self) -> CoeffField {
        match &self.backend {
            Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => *coeff,
            Backend::Qp { p } => CoeffField::Prime(*p),
            Backend::Trivial => CoeffField::Rationals,
        }
    }

    /// Characteristic of the field.
    pub fn char_field(&self) -> u64 {
        match &self.backend {
            Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => coeff.characteristic(),
            _ => 0,
        }
    }

    /// Characteristic of the residue field.
    pub fn char_residue(&self) -> u64 {
        self.coeff().characteristic()
    }

    /// Number of residue classes, `None` when infinite.
    pub fn residue_size(&self) -> Option<u64> {
        match self.coeff() {
            CoeffField::Prime(p) => Some(p),
            CoeffField::Rationals => None,
        }
    }

    pub fn zero_value(&self) -> AbsValue {
        AbsValue::zero(self.base)
    }

    pub fn one_value(&self) -> AbsValue {
        AbsValue::one(self.base)
    }

    /// `c^{scale·v}` for a raw valuation exponent `v`.
    pub fn value_of_exponent(&self, v: &Q) -> AbsValue {
        AbsValue::pow(self.base, v * &self.scale)
    }

    /// Raw valuation exponent realizing a value, if it exists in this backend.
    pub fn exponent_of_value(&self, v: &AbsValue) -> Option<Q> {
        let e = v.exponent()?;
        let e = if v.base() == self.base {
            e.clone()
        } else if e.is_zero() {
            Q::zero()
        } else {
            return None;
        };
        let raw = e / &self.scale;
        match &self.backend {
            Backend::Qp { .. } | Backend::Laurent { .. } if !raw.is_integer() => None,
            Backend::Trivial if !raw.is_zero() => None,
            _ => Some(raw),
        }
    }

    /// `|n|` for an integer `n` (completions table).
    pub fn value_of_integer(&self, n: i64) -> AbsValue {
        let x = FieldElement::from_int(&Arc::new(self.clone()), n);
        x.value().expect("integers have exact values")
    }

    /// `(char K, char k)` and the rule for `|n|`.
    pub fn classify(&self) -> (u64, u64, String) {
        let ck = self.char_field();
        let cr = self.char_residue();
        let rule = match (ck, cr) {
            (0, 0) => "|n| = 1 for n != 0".to_string(),
            (0, p) => format!("|n| = ({})^v_{p}(n)", self.base.to_string().replace('/', "/")),
            (p, _) => format!("|n| = 1 if {p} does not divide n, else 0"),
        };
        (ck, cr, rule)
    }

    /// Canonical field spec string, parseable by the CLI.
    pub fn spec_string(&self) -> String {
        let mut s = match &self.backend {
            Backend::Qp { p } => format!("qp:{p}"),
            Backend::Laurent { coeff } => format!("laurent:{}", coeff.spec()),
            Backend::Puiseux { coeff, ram } => {
                let mut s = format!("puiseux:{}", coeff.spec());
                if *ram != DEFAULT_RAM {
                    s.push_str(&format!(":ram={ram}"));
                }
                s
            }
            Backend::Trivial => "trivial:q".to_string(),
        };
        let default_base = match &self.backend {
            Backend::Qp { p } => Base::inverse_of(*p),
            _ => Base::half(),
        };
        if self.base != default_base {
            s.push_str(&format!(":base={}", self.base));
        }
        if self.prec != DEFAULT_PREC {
            s.push_str(&format!(":prec={}", self.prec));
        }
        if !self.scale.is_one() {
            s.push_str(&format!(":scale={}", crate::value::fmt_q(&self.scale)));
        }
        s
    }

    /// `p` for Qp.
    pub fn prime(&self) -> Option<u64> {
        match self.backend {
            Backend::Qp { p } => Some(p),
            _ => None,
        }
    }

    /// Puiseux ramification bound.
    pub fn ramification(&self) -> Option<u32> {
        match self.backend {
            Backend::Puiseux { ram, .. } => Some(ram),
            _ => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(n)` for a nonzero integer.
pub(crate) fn vp_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    #[test]
    fn descriptor_flags() {
        assert!(FieldDescriptor::laurent_q().ordered());
        assert!(!FieldDescriptor::qp(5).ordered());
        assert!(FieldDescriptor::qp(5).discrete_values());
        assert!(!FieldDescriptor::puiseux_q().discrete_values());
        assert!(!FieldDescriptor::laurent(CoeffField::Prime(3)).ordered());
    }

    #[test]
    fn classification_table() {
        let f = FieldDescriptor::qp(5);
        assert_eq!(f.classify().0, 0);
        assert_eq!(f.classify().1, 5);
        assert_eq!(f.value_of_integer(50), AbsValue::pow(Base::inverse_of(5), qi(2)));
        let t = FieldDescriptor::trivial();
        assert_eq!((t.classify().0, t.classify().1), (0, 0));
        assert!(t.value_of_integer(7).is_one());
        let l3 = FieldDescriptor::laurent(CoeffField::Prime(3));
        assert_eq!((l3.classify().0, l3.classify().1), (3, 3));
        assert!(l3.value_of_integer(3).is_zero());
        assert!(l3.value_of_integer(4).is_one());
    }

    #[test]
    fn spec_strings() {
        assert_eq!(FieldDescriptor::qp(5).spec_string(), "qp:5");
        assert_eq!(FieldDescriptor::laurent_q().with_prec(20).spec_string(), "laurent:q:prec=20");
        assert_eq!(FieldDescriptor::laurent(CoeffField::Prime(3)).spec_string(), "laurent:f3");
    }
}
