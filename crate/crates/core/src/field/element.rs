use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::padic::PAdic;
use super::ppoly::{PPoly, RatFunc, Series, MAX_TERMS};
use super::{vp_int, Backend, Field};
use crate::error::{MvfError, Result};
use crate::value::{fmt_q, AbsValue};
use crate::Q;

/// Size beyond which exact rational functions degrade to series.
const MAX_EXACT_SIZE: usize = 512;

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    /// Exact rational (Qp and Trivial backends).
    Rat(Q),
    /// Truncated p-adic.
    PAdic(PAdic),
    /// Exact rational function in `t` (Laurent and Puiseux backends).
    Func(RatFunc),
    /// Truncated series.
    Series(Series),
}

/// An element of a valued field, exact or known to finite precision.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl FieldElement {
    pub(crate) fn from_repr(field: &Field, repr: Repr) -> FieldElement {
        FieldElement { field: field.clone(), repr }
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn zero(f: &Field) -> FieldElement {
        FieldElement::from_rational(f, Q::zero())
    }

    pub fn one(f: &Field) -> FieldElement {
        FieldElement::from_rational(f, Q::one())
    }

    pub fn from_int(f: &Field, n: i64) -> FieldElement {
        FieldElement::from_rational(f, Q::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(f: &Field, q: Q) -> FieldElement {
        let repr = match &f.backend {
            Backend::Qp { .. } | Backend::Trivial => Repr::Rat(q),
            Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => {
                Repr::Func(RatFunc::from_poly(PPoly::constant(coeff.reduce(&q))))
            }
        };
        FieldElement::from_repr(f, repr)
    }

    /// `c · π^e` where π is `p` for Qp and `t` for series backends.
    pub fn monomial(f: &Field, c: Q, e: Q) -> Result<FieldElement> {
        let bad = || MvfError::Unsatisfiable(format!("exponent {} not available in {}", fmt_q(&e), f));
        match &f.backend {
            Backend::Qp { p } => {
                if !e.is_integer() {
                    return Err(bad());
                }
                let k: i64 = e.to_integer().try_into().map_err(|_| bad())?;
                let pk = num_traits::pow(Q::from_integer(BigInt::from(*p)), k.unsigned_abs() as usize);
                let v = if k >= 0 { c * pk } else { c / pk };
                Ok(FieldElement::from_repr(f, Repr::Rat(v)))
            }
            Backend::Laurent { coeff } => {
                if !e.is_integer() {
                    return Err(bad());
                }
                Ok(FieldElement::from_repr(
                    f,
                    Repr::Func(RatFunc::from_poly(PPoly::monomial(e, coeff.reduce(&c)))),
                ))
            }
            Backend::Puiseux { coeff, .. } => Ok(FieldElement::from_repr(
                f,
                Repr::Func(RatFunc::from_poly(PPoly::monomial(e, coeff.reduce(&c)))),
            )),
            Backend::Trivial => {
                if !e.is_zero() {
                    return Err(bad());
                }
                Ok(FieldElement::from_repr(f, Repr::Rat(c)))
            }
        }
    }

    /// `π^e`.
    pub fn uniformizer_pow(f: &Field, e: &Q) -> Result<FieldElement> {
        FieldElement::monomial(f, Q::one(), e.clone())
    }

    /// Exact generalized polynomial in `t` (series backends only).
    pub fn from_ppoly(f: &Field, p: PPoly) -> FieldElement {
        assert!(matches!(f.backend, Backend::Laurent { .. } | Backend::Puiseux { .. }));
        FieldElement::from_repr(f, Repr::Func(RatFunc::from_poly(p)))
    }

    /// `(num, den)` as exact polynomial elements when `self` is a proper
    /// rational function.
    pub(crate) fn split_fraction(&self) -> Option<(FieldElement, FieldElement)> {
        match &self.repr {
            Repr::Func(r) if !r.is_poly() => Some((
                FieldElement::from_repr(&self.field, Repr::Func(RatFunc::from_poly(r.num.clone()))),
                FieldElement::from_repr(&self.field, Repr::Func(RatFunc::from_poly(r.den.clone()))),
            )),
            _ => None,
        }
    }

    pub(crate) fn from_ratfunc(f: &Field, r: RatFunc) -> FieldElement {
        FieldElement::from_repr(f, Repr::Func(r)).degrade()
    }

    pub(crate) fn from_series(f: &Field, s: Series) -> FieldElement {
        FieldElement::from_repr(f, Repr::Series(s))
    }

    pub(crate) fn from_padic(f: &Field, x: PAdic) -> FieldElement {
        FieldElement::from_repr(f, Repr::PAdic(x))
    }

    /// The residue class representative `r` lifted to the field.
    pub fn from_residue(f: &Field, r: &Q) -> FieldElement {
        FieldElement::from_rational(f, f.coeff().reduce(r))
    }

    /// The same representation viewed in another descriptor with the same
    /// backend (used for rescaled valuations).
    pub fn with_field(&self, f: &Field) -> FieldElement {
        assert_eq!(
            std::mem::discriminant(&self.field.backend),
            std::mem::discriminant(&f.backend),
            "backend mismatch"
        );
        FieldElement { field: f.clone(), repr: self.repr.clone() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Rat(_) | Repr::Func(_))
    }

    /// Exact zero.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_zero(),
            Repr::Func(r) => r.is_zero(),
            _ => false,
        }
    }

    /// Exact zero, or inexact with no nonzero digit known.
    pub fn is_zero_at_precision(&self) -> bool {
        match &self.repr {
            Repr::PAdic(x) => x.is_zero_to_precision(),
            Repr::Series(s) => s.terms.is_zero(),
            _ => self.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_one(),
            Repr::Func(r) => r.is_poly() && r.num.is_one(),
            _ => false,
        }
    }

    /// Exact rational value, when the element is one.
    pub fn to_rational(&self) -> Option<Q> {
        match &self.repr {
            Repr::Rat(q) => Some(q.clone()),
            Repr::Func(r) if r.is_zero() => Some(Q::zero()),
            Repr::Func(r) if r.is_poly() && r.num.len() == 1 && r.num.terms[0].0.is_zero() => {
                Some(r.num.terms[0].1.clone())
            }
            _ => None,
        }
    }

    /// Raw valuation exponent; `None` for exact zero.
    pub fn valuation(&self) -> Result<Option<Q>> {
        let lost = || MvfError::PrecisionLoss(format!("no known digit of {self}"));
        Ok(match &self.repr {
            Repr::Rat(q) => {
                if q.is_zero() {
                    None
                } else {
                    match &self.field.backend {
                        Backend::Qp { p } => {
                            Some(Q::from_integer(BigInt::from(vp_int(q.numer(), *p) - vp_int(q.denom(), *p))))
                        }
                        _ => Some(Q::zero()),
                    }
                }
            }
            Repr::PAdic(x) => Some(Q::from_integer(BigInt::from(x.valuation().ok_or_else(lost)?))),
            Repr::Func(r) => r.leading().map(|(e, _)| e),
            Repr::Series(s) => Some(s.terms.lowest().ok_or_else(lost)?.0.clone()),
        })
    }

    /// `|x|`; `PrecisionLoss` when every known digit is zero.
    pub fn value(&self) -> Result<AbsValue> {
        Ok(match self.valuation()? {
            None => self.field.zero_value(),
            Some(v) => self.field.value_of_exponent(&v),
        })
    }

    /// `|x|` when determined, else the bound `c^{prec}` implied by the
    /// known digits.
    pub fn value_upper_bound(&self) -> AbsValue {
        match self.value() {
            Ok(v) => v,
            Err(_) => {
                let e = self.absolute_precision().expect("inexact element");
                self.field.value_of_exponent(&e)
            }
        }
    }

    /// Absolute precision exponent of an inexact element.
    pub fn absolute_precision(&self) -> Option<Q> {
        match &self.repr {
            Repr::PAdic(x) => Some(Q::from_integer(BigInt::from(x.absprec))),
            Repr::Series(s) => Some(s.prec.clone()),
            _ => None,
        }
    }

    /// Coefficient of the lowest term (series), first unit digit (Qp), or
    /// the element itself (Trivial).
    pub fn leading_coeff(&self) -> Result<Q> {
        let lost = || MvfError::PrecisionLoss(format!("no known digit of {self}"));
        match &self.repr {
            Repr::Rat(q) => match &self.field.backend {
                Backend::Qp { p } => {
                    if q.is_zero() {
                        return Ok(Q::zero());
                    }
                    Ok(Q::from_integer(PAdic::from_rational(q, *p, 1).residue()))
                }
                _ => Ok(q.clone()),
            },
            Repr::PAdic(x) => {
                if x.is_zero_to_precision() {
                    return Err(lost());
                }
                Ok(Q::from_integer(num_integer::Integer::mod_floor(&x.mant, &BigInt::from(x.p))))
            }
            Repr::Func(r) => Ok(r.leading().map(|(_, c)| c).unwrap_or_else(Q::zero)),
            Repr::Series(s) => Ok(s.terms.lowest().ok_or_else(lost)?.1.clone()),
        }
    }

    /// Image in the residue field.
    pub fn residue(&self) -> Result<Q> {
        if self.is_zero() {
            return Ok(Q::zero());
        }
        match self.valuation() {
            Ok(Some(v)) => {
                if v.is_negative() {
                    Err(MvfError::OutOfRing)
                } else if v.is_positive() {
                    Ok(Q::zero())
                } else if self.field.is_trivial() {
                    Ok(self.to_rational().unwrap())
                } else {
                    self.leading_coeff()
                }
            }
            Ok(None) => Ok(Q::zero()),
            Err(e) => {
                // unknown digits all lie in the maximal ideal
                if self.absolute_precision().map(|p| p.is_positive()).unwrap_or(false) {
                    Ok(Q::zero())
                } else {
                    Err(e)
                }
            }
        }
    }

    fn cf(&self) -> super::CoeffField {
        self.field.coeff()
    }

    fn rel(&self) -> u32 {
        self.field.prec
    }

    fn to_padic(&self) -> PAdic {
        match &self.repr {
            Repr::Rat(q) => PAdic::from_rational(q, self.field.prime().unwrap(), self.rel()),
            Repr::PAdic(x) => x.clone(),
            _ => unreachable!(),
        }
    }

    fn to_series(&self) -> Series {
        match &self.repr {
            Repr::Func(r) => r.to_series(&Q::from_integer(BigInt::from(self.rel())), self.cf()),
            Repr::Series(s) => s.clone(),
            _ => unreachable!(),
        }
    }

    fn degrade(self) -> FieldElement {
        match &self.repr {
            Repr::Func(r) if r.size() > MAX_EXACT_SIZE => {
                let s = self.to_series();
                FieldElement { field: self.field, repr: Repr::Series(s) }
            }
            _ => self,
        }
    }

    fn capped(self) -> FieldElement {
        let rel = self.rel();
        let repr = match self.repr {
            Repr::PAdic(x) => Repr::PAdic(x.cap(rel)),
            Repr::Series(s) => Repr::Series(s.cap(&Q::from_integer(BigInt::from(rel)))),
            other => other,
        };
        FieldElement { field: self.field, repr }
    }

    fn check_field(&self, o: &FieldElement) {
        assert!(
            self.field == o.field,
            "arithmetic across fields: {} vs {}",
            self.field,
            o.field
        );
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        self.check_field(o);
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let cf = self.cf();
        match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement::from_repr(f, Repr::Rat(a + b)),
            (Repr::Func(a), Repr::Func(b)) => FieldElement::from_ratfunc(f, a.add(b, cf)),
            (Repr::Rat(_) | Repr::PAdic(_), _) => {
                FieldElement::from_padic(f, self.to_padic().add(&o.to_padic())).capped()
            }
            _ => FieldElement::from_series(f, self.to_series().add(&o.to_series(), cf)).capped(),
        }
    }

    pub fn neg(&self) -> FieldElement {
        let cf = self.cf();
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::PAdic(x) => Repr::PAdic(x.neg()),
            Repr::Func(r) => Repr::Func(r.neg(cf)),
            Repr::Series(s) => Repr::Series(s.neg(cf)),
        };
        FieldElement::from_repr(&self.field, repr)
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        self.check_field(o);
        if self.is_zero() || o.is_zero() {
            return FieldElement::zero(&self.field);
        }
        let f = &self.field;
        let cf = self.cf();
        match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElement::from_repr(f, Repr::Rat(a * b)),
            (Repr::Func(a), Repr::Func(b)) => FieldElement::from_ratfunc(f, a.mul(b, cf)),
            (Repr::Rat(_) | Repr::PAdic(_), _) => {
                FieldElement::from_padic(f, self.to_padic().mul(&o.to_padic())).capped()
            }
            _ => FieldElement::from_series(f, self.to_series().mul(&o.to_series(), cf)).capped(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(MvfError::DivisionByZero);
        }
        let f = &self.field;
        let cf = self.cf();
        let lost = || MvfError::PrecisionLoss("inverse of an unresolved element".into());
        Ok(match &self.repr {
            Repr::Rat(a) => FieldElement::from_repr(f, Repr::Rat(a.recip())),
            Repr::Func(r) => FieldElement::from_ratfunc(f, r.inv(cf)?),
            Repr::PAdic(x) => FieldElement::from_padic(f, x.inv().ok_or_else(lost)?),
            Repr::Series(s) => FieldElement::from_series(f, s.inv(cf)?).capped(),
        })
    }

    pub fn checked_div(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check_field(o);
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power; negative exponents invert first. `0^0 = 1`.
    pub fn powi(&self, n: i64) -> Result<FieldElement> {
        if n == 0 {
            return Ok(FieldElement::one(&self.field));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = FieldElement::one(&self.field);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = FieldElement::mul(&b, &b);
            }
        }
        Ok(acc)
    }

    /// Equality decided exactly for exact operands; for inexact ones,
    /// agreement at the common precision.
    pub fn equals(&self, o: &FieldElement) -> bool {
        if self.field != o.field {
            return false;
        }
        match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a == b,
            (Repr::Func(a), Repr::Func(b)) => a.eq(b, self.cf()),
            _ => self.sub(o).is_zero_at_precision(),
        }
    }

    /// Substitute `t ↦ λt` in a Laurent element; identity on other backends.
    pub fn relabel(&self, lambda: &Q) -> FieldElement {
        let cf = self.cf();
        let repr = match &self.repr {
            Repr::Func(r) => Repr::Func(
                RatFunc::new(r.num.relabel(lambda, cf), r.den.relabel(lambda, cf), cf).unwrap(),
            ),
            Repr::Series(s) => Repr::Series(Series { terms: s.terms.relabel(lambda, cf), prec: s.prec.clone() }),
            other => other.clone(),
        };
        FieldElement::from_repr(&self.field, repr)
    }

    /// Known terms `(exponent, coefficient)` of a series-backend element,
    /// expanded to the working precision.
    pub fn series_terms(&self) -> Option<(Vec<(Q, Q)>, Option<Q>)> {
        match &self.repr {
            Repr::Func(r) if r.is_poly() => Some((r.num.terms.clone(), None)),
            Repr::Func(_) | Repr::Series(_) => {
                let s = self.to_series();
                Some((s.terms.terms, Some(s.prec)))
            }
            _ => None,
        }
    }

    /// Expansion to series precision (series backends), exact otherwise.
    pub fn to_inexact(&self) -> FieldElement {
        match &self.repr {
            Repr::Func(_) => FieldElement::from_series(&self.field, self.to_series()),
            Repr::Rat(q) if self.field.prime().is_some() && !q.is_zero() => {
                FieldElement::from_padic(&self.field, self.to_padic())
            }
            _ => self.clone(),
        }
    }

    /// Number of stored terms or digits, a rough size measure.
    pub fn size(&self) -> usize {
        match &self.repr {
            Repr::Rat(q) => (q.numer().bits() + q.denom().bits()) as usize / 8 + 1,
            Repr::PAdic(x) => x.mant.bits() as usize / 8 + 1,
            Repr::Func(r) => r.size(),
            Repr::Series(s) => s.terms.len().min(MAX_TERMS),
        }
    }
}

fn fmt_rational(q: &Q) -> String {
    fmt_q(q)
}

fn fmt_exponent(e: &Q) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({})", fmt_q(e))
    }
}

/// Canonical printing of `Σ c t^e` with `t` as variable name.
pub(crate) fn fmt_ppoly(p: &PPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if e.is_zero() {
            out.push_str(&fmt_rational(&a));
            continue;
        }
        if !a.is_one() {
            out.push_str(&fmt_rational(&a));
            out.push('*');
        }
        out.push_str(var);
        if !e.is_one() {
            out.push('^');
            out.push_str(&fmt_exponent(e));
        }
    }
    out
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(q) => write!(f, "{}", fmt_rational(q)),
            Repr::PAdic(x) => {
                let rep = x.representative();
                if rep.is_zero() {
                    write!(f, "O({}^{})", x.p, fmt_exponent(&Q::from_integer(x.absprec.into())))
                } else {
                    write!(f, "{} + O({}^{})", fmt_rational(&rep), x.p, fmt_exponent(&Q::from_integer(x.absprec.into())))
                }
            }
            Repr::Func(r) => {
                if r.is_poly() {
                    write!(f, "{}", fmt_ppoly(&r.num, "t"))
                } else {
                    write!(f, "({})/({})", fmt_ppoly(&r.num, "t"), fmt_ppoly(&r.den, "t"))
                }
            }
            Repr::Series(s) => {
                if s.terms.is_zero() {
                    write!(f, "O(t^{})", fmt_exponent(&s.prec))
                } else {
                    write!(f, "{} + O(t^{})", fmt_ppoly(&s.terms, "t"), fmt_exponent(&s.prec))
                }
            }
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                FieldElement::$m(self, o)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                FieldElement::$m(&self, &o)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                FieldElement::$m(&self, o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Checked arithmetic: division errors, and `PrecisionLoss` when an inexact
/// result has no known nonzero digit.
pub fn field_arith(op: ArithOp, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
    if x.field != y.field {
        return Err(MvfError::FieldMismatch);
    }
    let r = match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.checked_div(y)?,
        ArithOp::Neg => x.neg(),
    };
    if !r.is_exact() && r.is_zero_at_precision() {
        return Err(MvfError::PrecisionLoss(format!("cancellation: result {r}")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::value::Base;
    use crate::{q, qi};

    #[test]
    fn padic_values() {
        let f = FieldDescriptor::qp(5);
        let b = Base::inverse_of(5);
        assert_eq!(FieldElement::from_int(&f, 50).value().unwrap(), AbsValue::pow(b, qi(2)));
        let s = FieldElement::from_int(&f, 5) + FieldElement::from_int(&f, 25);
        assert_eq!(s.value().unwrap(), AbsValue::pow(b, qi(1)));
        let p = FieldElement::from_int(&f, 5) * FieldElement::from_int(&f, 25);
        assert_eq!(p.value().unwrap(), AbsValue::pow(b, qi(3)));
        let z = FieldElement::from_int(&f, 1) + FieldElement::from_int(&f, -1);
        assert!(z.is_zero() && z.value().unwrap().is_zero());
    }

    #[test]
    fn puiseux_value_reads_leading_exponent() {
        let f = FieldDescriptor::puiseux_q();
        let x = FieldElement::monomial(&f, qi(1), q(3, 2)).unwrap()
            + FieldElement::monomial(&f, qi(1), qi(2)).unwrap();
        assert_eq!(x.value().unwrap(), AbsValue::pow(Base::half(), q(3, 2)));
    }

    #[test]
    fn residues() {
        let f = FieldDescriptor::qp(5);
        assert_eq!(FieldElement::from_int(&f, 6).residue().unwrap(), qi(1));
        let l = FieldDescriptor::laurent_q();
        let x = FieldElement::monomial(&l, qi(1), qi(1)).unwrap() + FieldElement::from_int(&l, 3);
        assert_eq!(x.residue().unwrap(), qi(3));
        let big = FieldElement::monomial(&l, qi(1), qi(-1)).unwrap();
        assert_eq!(big.residue(), Err(MvfError::OutOfRing));
    }

    #[test]
    fn inexact_cancellation_is_reported() {
        let f = FieldDescriptor::qp(5).with_prec(4);
        let third = FieldElement::from_rational(&f, q(1, 3)).to_inexact();
        let approx = FieldElement::from_padic(&f, PAdic::from_rational(&q(1, 3), 5, 4));
        let r = field_arith(ArithOp::Sub, &third, &approx);
        assert!(matches!(r, Err(MvfError::PrecisionLoss(_))));
    }

    #[test]
    fn exact_rational_function_round_trip() {
        let f = FieldDescriptor::laurent_q();
        let t = FieldElement::monomial(&f, qi(1), qi(1)).unwrap();
        let one = FieldElement::one(&f);
        let x = (&one + &t).inv().unwrap();
        let back = x.inv().unwrap();
        assert!(back.equals(&(&one + &t)));
        assert!(x.is_exact());
        assert_eq!(x.value().unwrap(), AbsValue::one(Base::half()));
    }

    #[test]
    fn display_forms() {
        let f = FieldDescriptor::puiseux_q();
        let x = FieldElement::monomial(&f, qi(3), qi(-1)).unwrap()
            + FieldElement::one(&f)
            + FieldElement::monomial(&f, qi(2), q(5, 2)).unwrap();
        assert_eq!(x.to_string(), "3*t^-1 + 1 + 2*t^(5/2)");
        let y = FieldElement::monomial(&f, qi(-1), qi(1)).unwrap();
        assert_eq!(y.to_string(), "-t");
    }
}
