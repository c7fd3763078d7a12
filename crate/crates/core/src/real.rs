//! Real-number expressions over absolute values and rationals.
//!
//! Predicates combine values with max/min/products exactly, but truncated
//! differences, `1 − x` and perturbation deviations leave the value monoid.
//! Those are kept as expression trees and compared exactly when every leaf
//! is rational, and by interval refinement otherwise.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::interval::{format_significant, Interval};
use crate::value::AbsValue;
use crate::Q;

/// Precision cap for refinement; operands still overlapping at this
/// width are treated as equal.
pub const MAX_BITS: u32 = 4096;

#[derive(Clone, Debug)]
pub enum Real {
    Rat(Q),
    Val(AbsValue),
    Sum(Box<Real>, Box<Real>),
    Diff(Box<Real>, Box<Real>),
    Prod(Box<Real>, Box<Real>),
    Quot(Box<Real>, Box<Real>),
    Max(Box<Real>, Box<Real>),
    Min(Box<Real>, Box<Real>),
    Abs(Box<Real>),
    /// Rational power of a nonnegative operand.
    Pow(Box<Real>, Q),
}

impl From<AbsValue> for Real {
    fn from(v: AbsValue) -> Self {
        Real::Val(v)
    }
}

impl From<&AbsValue> for Real {
    fn from(v: &AbsValue) -> Self {
        Real::Val(v.clone())
    }
}

impl From<Q> for Real {
    fn from(q: Q) -> Self {
        Real::Rat(q)
    }
}

impl Real {
    pub fn zero() -> Real {
        Real::Rat(Q::zero())
    }

    pub fn one() -> Real {
        Real::Rat(crate::qi(1))
    }

    pub fn add(self, o: Real) -> Real {
        Real::Sum(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Real) -> Real {
        Real::Diff(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Real) -> Real {
        Real::Prod(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Real) -> Real {
        Real::Quot(Box::new(self), Box::new(o))
    }

    pub fn max(self, o: Real) -> Real {
        Real::Max(Box::new(self), Box::new(o))
    }

    pub fn min(self, o: Real) -> Real {
        Real::Min(Box::new(self), Box::new(o))
    }

    pub fn abs(self) -> Real {
        Real::Abs(Box::new(self))
    }

    pub fn powq(self, q: Q) -> Real {
        Real::Pow(Box::new(self), q)
    }

    /// `|a − b|`.
    pub fn abs_diff(a: impl Into<Real>, b: impl Into<Real>) -> Real {
        a.into().sub(b.into()).abs()
    }

    /// `max(a − b, 0)`.
    pub fn trunc_sub(a: impl Into<Real>, b: impl Into<Real>) -> Real {
        a.into().sub(b.into()).max(Real::zero())
    }

    /// Exact value when every leaf is rational.
    pub fn exact(&self) -> Option<Q> {
        Some(match self {
            Real::Rat(q) => q.clone(),
            Real::Val(v) => v.to_rational()?,
            Real::Sum(a, b) => a.exact()? + b.exact()?,
            Real::Diff(a, b) => a.exact()? - b.exact()?,
            Real::Prod(a, b) => a.exact()? * b.exact()?,
            Real::Quot(a, b) => {
                let d = b.exact()?;
                if d.is_zero() {
                    return None;
                }
                a.exact()? / d
            }
            Real::Max(a, b) => a.exact()?.max(b.exact()?),
            Real::Min(a, b) => a.exact()?.min(b.exact()?),
            Real::Abs(a) => a.exact()?.abs(),
            Real::Pow(a, q) => {
                let x = a.exact()?;
                if q.is_integer() {
                    let n = q.to_integer();
                    let n: i32 = n.try_into().ok()?;
                    if n < 0 && x.is_zero() {
                        return None;
                    }
                    num_traits::Pow::pow(&x, n)
                } else if x.is_zero() && q.is_positive() {
                    Q::zero()
                } else {
                    return None;
                }
            }
        })
    }

    /// Enclosing interval at the given working precision.
    pub fn enclose(&self, bits: u32) -> Interval {
        match self {
            Real::Rat(q) => Interval::from_rational(q, bits),
            Real::Val(v) => v.enclose(bits),
            Real::Sum(a, b) => a.enclose(bits).add(&b.enclose(bits)),
            Real::Diff(a, b) => a.enclose(bits).sub(&b.enclose(bits)),
            Real::Prod(a, b) => a.enclose(bits).mul(&b.enclose(bits)),
            Real::Quot(a, b) => {
                let d = b.enclose(bits);
                let num = a.enclose(bits);
                if d.lo.sign() == num_bigint::Sign::Plus {
                    num.mul(&d.recip())
                } else if d.hi.sign() == num_bigint::Sign::Minus {
                    num.mul(&d.neg().recip()).neg()
                } else {
                    panic!("division by an interval containing zero")
                }
            }
            Real::Max(a, b) => a.enclose(bits).max(&b.enclose(bits)),
            Real::Min(a, b) => a.enclose(bits).min(&b.enclose(bits)),
            Real::Abs(a) => a.enclose(bits).abs(),
            Real::Pow(a, q) => {
                let x = a.enclose(bits);
                let x = if x.lo.sign() == num_bigint::Sign::Minus {
                    Interval { lo: crate::interval::Dyadic::zero(), ..x }
                } else {
                    x
                };
                x.pow_rational(q)
            }
        }
    }

    /// Order of two reals: exact when possible, otherwise refined up to
    /// [`MAX_BITS`]; an unresolved comparison counts as equal.
    pub fn compare(&self, o: &Real) -> Ordering {
        if let (Some(a), Some(b)) = (self.exact(), o.exact()) {
            return a.cmp(&b);
        }
        if let (Real::Val(a), Real::Val(b)) = (self, o) {
            return a.cmp(b);
        }
        let mut bits = 64;
        while bits <= MAX_BITS {
            if let Some(ord) = self.enclose(bits).compare(&o.enclose(bits)) {
                return ord;
            }
            bits *= 2;
        }
        Ordering::Equal
    }

    pub fn lt(&self, o: &Real) -> bool {
        self.compare(o) == Ordering::Less
    }

    pub fn le(&self, o: &Real) -> bool {
        self.compare(o) != Ordering::Greater
    }

    /// A rational upper bound, exact when the expression is.
    pub fn upper_bound(&self) -> Q {
        self.exact().unwrap_or_else(|| self.enclose(128).hi.to_rational())
    }

    /// A rational lower bound, exact when the expression is.
    pub fn lower_bound(&self) -> Q {
        self.exact().unwrap_or_else(|| self.enclose(128).lo.to_rational())
    }

    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.enclose(64).midpoint()).unwrap_or(f64::NAN)
    }

    /// Decimal rendering: exact rationals as `a/b`, others as `~d.ddddd`.
    pub fn render(&self) -> String {
        match self {
            Real::Val(v) => v.render(),
            _ => match self.exact() {
                Some(q) => crate::value::fmt_q(&q),
                None => format!("~{}", format_significant(&self.enclose(96).midpoint(), 6)),
            },
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}


/// Nearest `f64` to a rational.
pub fn q_to_f64(q: &Q) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}
