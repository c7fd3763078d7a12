//! Constrained and random element generation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::Rng as _;

use super::{Backend, CoeffField, Field, FieldElement};
use crate::error::{MvfError, Result};
use crate::rng::Rng;
use crate::value::{compare_value_to_real, AbsValue};
use crate::Q;

/// Constraint for [`sample`].
#[derive(Clone, Debug)]
pub enum Constraint {
    /// `|x| = v`.
    Value(AbsValue),
    /// `lo < |x| < hi` (real thresholds).
    ValueIn(Q, Q),
    /// `|x| = 1`.
    Unit,
    /// `|x| ≤ 1` with residue `r`.
    Residue(Q),
}

fn small_rational(rng: &mut Rng) -> Q {
    let mut n: i64 = rng.gen_range(-5..=5);
    if n == 0 {
        n = 1;
    }
    let d: i64 = rng.gen_range(1..=3);
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn small_coeff(cf: CoeffField, rng: &mut Rng) -> Q {
    match cf {
        CoeffField::Rationals => small_rational(rng),
        CoeffField::Prime(p) => Q::from_integer(BigInt::from(rng.gen_range(1..p))),
    }
}

fn positive_exponent(field: &Field, rng: &mut Rng) -> Q {
    match field.backend {
        Backend::Puiseux { .. } => {
            let d: i64 = [1, 2, 3][rng.gen_range(0..3)];
            let k: i64 = rng.gen_range(1..=3 * d);
            Q::new(BigInt::from(k), BigInt::from(d))
        }
        _ => Q::from_integer(BigInt::from(rng.gen_range(1..=3))),
    }
}

/// A random element of value exactly 1.
pub fn random_unit(field: &Field, rng: &mut Rng) -> FieldElement {
    match &field.backend {
        Backend::Qp { p } => {
            let bound = p.pow(3).min(1 << 20);
            let pick = |rng: &mut Rng| loop {
                let u = rng.gen_range(1..bound) as i64;
                if u as u64 % p != 0 {
                    return if rng.gen_bool(0.3) { -u } else { u };
                }
            };
            let u = pick(rng);
            let q = if rng.gen_bool(0.25) {
                Q::new(BigInt::from(u), BigInt::from(pick(rng)))
            } else {
                Q::from_integer(BigInt::from(u))
            };
            FieldElement::from_rational(field, q)
        }
        Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => {
            let cf = *coeff;
            let mut x = FieldElement::from_rational(field, small_coeff(cf, rng));
            for _ in 0..rng.gen_range(0..=2) {
                let e = positive_exponent(field, rng);
                x = x + FieldElement::monomial(field, small_coeff(cf, rng), e).unwrap();
            }
            if rng.gen_bool(0.15) {
                let e = positive_exponent(field, rng);
                let d = FieldElement::one(field)
                    + FieldElement::monomial(field, small_coeff(cf, rng), e).unwrap();
                x = x.checked_div(&d).unwrap();
            }
            x
        }
        Backend::Trivial => FieldElement::from_rational(field, small_rational(rng)),
    }
}

/// A random element: occasionally zero, otherwise `unit · π^e` with small `e`.
pub fn random_element(field: &Field, rng: &mut Rng) -> FieldElement {
    if rng.gen_bool(0.08) {
        return FieldElement::zero(field);
    }
    let e = match field.backend {
        Backend::Trivial => Q::zero(),
        Backend::Puiseux { .. } => {
            let d: i64 = [1, 2, 3, 4][rng.gen_range(0..4)];
            Q::new(BigInt::from(rng.gen_range(-2 * d..=3 * d)), BigInt::from(d))
        }
        _ => Q::from_integer(BigInt::from(rng.gen_range(-2..=3))),
    };
    random_unit(field, rng) * FieldElement::uniformizer_pow(field, &e).unwrap()
}

/// Simplest rational (least denominator, then least magnitude) strictly
/// between `a` and `b`; `b = None` means `+∞`.
pub fn simplest_between(a: &Q, b: Option<&Q>) -> Q {
    if let Some(b) = b {
        assert!(a < b, "empty interval");
        if a.is_negative() && b.is_positive() {
            return Q::zero();
        }
        if !b.is_positive() {
            // mirror into the positive half-line
            let m = simplest_between(&-b, Some(&-a));
            return -m;
        }
    }
    let k = a.floor() + Q::one();
    if b.map(|b| &k < b).unwrap_or(true) {
        return k;
    }
    let b = b.unwrap();
    let n = a.floor();
    let lo = (b - &n).recip();
    let hi = if *a == n { None } else { Some((a - &n).recip()) };
    let y = simplest_between(&lo, hi.as_ref());
    n + y.recip()
}

/// Exponent interval `(ea, eb)` (raw, before scale) with `lo < c^{s·e} < hi`.
fn exponent_window(field: &Field, lo: &Q, hi: &Q) -> (Option<f64>, Option<f64>) {
    let lc = (field.base.num as f64 / field.base.den as f64).ln() * field.scale.to_f64().unwrap();
    let conv = |x: &Q| x.to_f64().unwrap().ln() / lc;
    let ea = if hi.is_positive() { Some(conv(hi)) } else { None };
    let eb = if lo.is_positive() { Some(conv(lo)) } else { None };
    (ea, eb)
}

fn in_window(field: &Field, e: &Q, lo: &Q, hi: &Q) -> bool {
    let v = field.value_of_exponent(e);
    compare_value_to_real(&v, lo) == Ordering::Greater && compare_value_to_real(&v, hi) == Ordering::Less
}

/// Exponent chosen by the tie-breaking rule: least denominator (integers
/// only on discrete backends), then least magnitude.
pub(crate) fn exponent_in(field: &Field, lo: &Q, hi: &Q) -> Result<Q> {
    let unsat = || MvfError::Unsatisfiable(format!("no value in ({}, {}) for {}", lo, hi, field));
    if lo >= hi || !hi.is_positive() {
        return Err(unsat());
    }
    let (ea, eb) = exponent_window(field, lo, hi);
    let ea = ea.ok_or_else(unsat)?;
    let discrete = field.discrete_values();
    for pad_exp in [9, 12, 15] {
        let pad = |x: f64| x.abs() * 10f64.powi(-pad_exp) + 10f64.powi(-pad_exp - 3);
        let a = ea + pad(ea);
        let b = eb.map(|b| b - pad(b));
        if let Some(b) = b {
            if a >= b {
                continue;
            }
        }
        let qa = Q::from_f64(a).ok_or_else(unsat)?;
        let qb = b.map(|b| Q::from_f64(b).unwrap());
        let cand = if discrete {
            // integers in (qa, qb) nearest zero
            let first = qa.floor() + Q::one();
            let last = qb.as_ref().map(|b| b.ceil() - Q::one());
            if let Some(l) = &last {
                if &first > l {
                    return Err(unsat());
                }
            }
            if first.is_positive() {
                first
            } else if last.as_ref().map(|l| l.is_negative()).unwrap_or(false) {
                last.unwrap()
            } else {
                Q::zero()
            }
        } else {
            simplest_between(&qa, qb.as_ref())
        };
        if in_window(field, &cand, lo, hi) {
            return Ok(cand);
        }
    }
    Err(unsat())
}

/// The canonical element `π^e` with `lo < |π^e| < hi`, `e` chosen by the
/// tie-breaking rule of [`sample`].
pub fn element_in_window(field: &Field, lo: &Q, hi: &Q) -> Result<FieldElement> {
    if field.is_trivial() {
        if lo < &Q::one() && &Q::one() < hi {
            return Ok(FieldElement::one(field));
        }
        return Err(MvfError::Unsatisfiable(format!("no nonzero value in ({lo}, {hi}) for {field}")));
    }
    let e = exponent_in(field, lo, hi)?;
    FieldElement::uniformizer_pow(field, &e)
}

/// Pseudorandom element satisfying a constraint.
pub fn sample(field: &Field, constraint: &Constraint, rng: &mut Rng) -> Result<FieldElement> {
    match constraint {
        Constraint::Unit => Ok(random_unit(field, rng)),
        Constraint::Value(v) => {
            if v.is_zero() {
                return Ok(FieldElement::zero(field));
            }
            let e = field.exponent_of_value(v).ok_or_else(|| {
                MvfError::Unsatisfiable(format!("value {} not attained in {}", v.symbolic(), field))
            })?;
            Ok(random_unit(field, rng) * FieldElement::uniformizer_pow(field, &e)?)
        }
        Constraint::ValueIn(lo, hi) => {
            if field.is_trivial() {
                let one = Q::one();
                if lo < &one && &one < hi {
                    return Ok(random_unit(field, rng));
                }
                if lo.is_negative() && hi.is_positive() {
                    return Ok(FieldElement::zero(field));
                }
                return Err(MvfError::Unsatisfiable(format!("no value in ({lo}, {hi}) for {field}")));
            }
            let e = exponent_in(field, lo, hi)?;
            let unit = random_unit(field, rng);
            Ok(unit * FieldElement::uniformizer_pow(field, &e)?)
        }
        Constraint::Residue(r) => {
            let base = FieldElement::from_residue(field, r);
            if field.is_trivial() {
                return Ok(base);
            }
            let e = positive_exponent(field, rng);
            let small = random_unit(field, rng) * FieldElement::uniformizer_pow(field, &e)?;
            Ok(base + small)
        }
    }
}
