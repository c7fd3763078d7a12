//! Square tests and roots per backend.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::coeff::rational_root;
use super::element::Repr;
use super::padic::{ppow, PAdic};
use super::ppoly::{PPoly, RatFunc, Series};
use super::{Backend, CoeffField, Field, FieldElement};
use crate::error::{MvfError, Result};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SquareAnswer {
    Yes,
    No,
    Unresolved,
}

/// Unit part `u` of `x = p^v u` modulo `p^k`, when at least `k` digits are known.
fn padic_unit_digits(x: &FieldElement, p: u64, k: i64) -> Option<(i64, BigInt)> {
    match x.repr() {
        Repr::Rat(q) => {
            let a = PAdic::from_rational(q, p, k as u32);
            Some((a.shift, a.mant))
        }
        Repr::PAdic(a) => {
            if a.is_zero_to_precision() || a.relprec() < k {
                None
            } else {
                Some((a.shift, a.mant.mod_floor(&ppow(p, k))))
            }
        }
        _ => unreachable!(),
    }
}

/// Backend square criterion.
pub fn is_square(x: &FieldElement) -> SquareAnswer {
    if x.is_zero() {
        return SquareAnswer::Yes;
    }
    let f = x.field().clone();
    let yes = |b: bool| if b { SquareAnswer::Yes } else { SquareAnswer::No };
    match &f.backend {
        Backend::Trivial => yes(rational_root(&x.to_rational().unwrap(), 2).is_some()),
        Backend::Qp { p } => {
            let k = if *p == 2 { 3 } else { 1 };
            match padic_unit_digits(x, *p, k) {
                None => SquareAnswer::Unresolved,
                Some((v, u)) => {
                    if v % 2 != 0 {
                        return SquareAnswer::No;
                    }
                    if *p == 2 {
                        yes(u.mod_floor(&BigInt::from(8)) == BigInt::one())
                    } else {
                        let e = BigInt::from((p - 1) / 2);
                        yes(u.modpow(&e, &BigInt::from(*p)) == BigInt::one())
                    }
                }
            }
        }
        Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => {
            let v = match x.valuation() {
                Ok(Some(v)) => v,
                _ => return SquareAnswer::Unresolved,
            };
            let lattice_ok = match &f.backend {
                Backend::Laurent { .. } => v.is_integer() && v.to_integer().is_even(),
                Backend::Puiseux { ram, .. } => {
                    let scaled = &v * Q::from_integer(BigInt::from(*ram));
                    scaled.is_integer() && scaled.to_integer().is_even()
                }
                _ => unreachable!(),
            };
            if !lattice_ok {
                return SquareAnswer::No;
            }
            if coeff.characteristic() == 2 {
                return SquareAnswer::Unresolved;
            }
            yes(coeff.sqrt(&x.leading_coeff().unwrap()).is_some())
        }
    }
}

/// Square root; `Unresolved` when [`is_square`] does not answer `Yes`.
pub fn sqrt(x: &FieldElement) -> Result<FieldElement> {
    nth_root(x, 2)
}

/// An `n`-th root of `x`, exact when one exists in the exact subfield.
pub fn nth_root(x: &FieldElement, n: u32) -> Result<FieldElement> {
    let f = x.field().clone();
    if x.is_zero() {
        return Ok(x.clone());
    }
    if n == 1 {
        return Ok(x.clone());
    }
    if n == 2 && is_square(x) != SquareAnswer::Yes {
        return Err(MvfError::Unresolved(format!("{x} is not a certified square")));
    }
    match &f.backend {
        Backend::Trivial => rational_root(&x.to_rational().unwrap(), n)
            .map(|r| FieldElement::from_rational(&f, r))
            .ok_or_else(|| MvfError::RootNotFound(format!("{n}-th root of {x}"))),
        Backend::Qp { p } => padic_root(x, *p, n),
        Backend::Laurent { coeff } | Backend::Puiseux { coeff, .. } => series_root(&f, x, n, *coeff),
    }
}

fn padic_root(x: &FieldElement, p: u64, n: u32) -> Result<FieldElement> {
    let f = x.field().clone();
    if let Some(q) = x.to_rational() {
        if let Some(r) = rational_root(&q, n) {
            return Ok(FieldElement::from_rational(&f, r));
        }
    }
    let not_found = || MvfError::RootNotFound(format!("{n}-th root of {x} in Qp({p})"));
    let rel = f.prec as i64;
    let (v, u) = padic_unit_digits(x, p, rel).ok_or_else(not_found)?;
    if v % n as i64 != 0 || p as u64 > 1 << 20 {
        return Err(not_found());
    }
    if p as u64 % n as u64 == 0 && p != 2 {
        return Err(not_found());
    }
    let nb = BigInt::from(n);
    // residue root by search, then Newton lifting r ← r − (r^n − u)/(n r^{n−1})
    let (mut r, start) = if p == 2 {
        if n != 2 {
            return Err(not_found());
        }
        if u.mod_floor(&BigInt::from(8)) != BigInt::one() {
            return Err(not_found());
        }
        // bitwise lifting for p = 2
        let mut r = BigInt::one();
        for k in 3..rel {
            let m = ppow(2, k + 1);
            if (&r * &r - &u).mod_floor(&m) != BigInt::zero() {
                r += ppow(2, k - 1);
            }
        }
        let root = PAdic::normalize(2, r, v / 2, v / 2 + rel - 1);
        return Ok(FieldElement::from_padic(&f, root));
    } else {
        let pb = BigInt::from(p);
        let ur = u.mod_floor(&pb);
        let r0 = (1..p)
            .map(BigInt::from)
            .find(|r| r.modpow(&nb, &pb) == ur)
            .ok_or_else(not_found)?;
        (r0, 1i64)
    };
    let mut k = start;
    while k < rel {
        k = (2 * k).min(rel);
        let m = ppow(p, k);
        let fx = (r.modpow(&nb, &m) - &u).mod_floor(&m);
        let dfx = (&nb * r.modpow(&BigInt::from(n - 1), &m)).mod_floor(&m);
        let inv = super::padic::mod_inverse(&dfx, &m);
        r = (&r - fx * inv).mod_floor(&m);
    }
    let root = PAdic::normalize(p, r, v / n as i64, v / n as i64 + rel);
    Ok(FieldElement::from_padic(&f, root))
}

/// Root of a series-backend element by term-by-term solving of `y^n = W`.
fn series_root(f: &Field, x: &FieldElement, n: u32, cf: CoeffField) -> Result<FieldElement> {
    let not_found = |why: &str| MvfError::RootNotFound(format!("{n}-th root of {x}: {why}"));
    if cf.characteristic() != 0 && n as u64 % cf.characteristic() == 0 {
        return Err(not_found("root order divisible by the characteristic"));
    }
    let v = x.valuation()?.unwrap();
    let ve = &v / Q::from_integer(BigInt::from(n));
    if matches!(f.backend, Backend::Laurent { .. }) && !ve.is_integer() {
        return Err(not_found("valuation not divisible in Laurent series"));
    }
    let lc = x.leading_coeff()?;
    let lr = cf.nth_root(&lc, n).ok_or_else(|| not_found("leading coefficient has no root"))?;
    let rel = Q::from_integer(BigInt::from(f.prec));
    match x.repr() {
        Repr::Func(r) if r.is_poly() => {
            let (y, exact) = root_of_poly(&r.num, n, &rel, cf, &lr);
            Ok(if exact {
                FieldElement::from_ppoly(f, y)
            } else {
                FieldElement::from_series(f, Series { terms: y, prec: &ve + &rel })
            })
        }
        Repr::Func(r) => {
            let (a, ea) = root_of_poly(&r.num, n, &rel, cf, &lr);
            let dl = r.den.lowest().unwrap().1.clone();
            let dr = cf.nth_root(&dl, n);
            if let Some(dr) = dr {
                let (b, eb) = root_of_poly(&r.den, n, &rel, cf, &dr);
                if ea && eb {
                    let rf = RatFunc::new(a, b, cf)?;
                    return Ok(FieldElement::from_ratfunc(f, rf));
                }
            }
            let s = x.to_inexact();
            series_root(f, &s, n, cf)
        }
        Repr::Series(s) => {
            let (y, _) = root_of_poly(&s.terms, n, &(&s.prec - &v).min(rel.clone()), cf, &lr);
            let prec = &ve + (&s.prec - &v).min(rel);
            Ok(FieldElement::from_series(f, Series { terms: y.truncate(&prec), prec }))
        }
        _ => unreachable!(),
    }
}

/// `y` with `y^n = w` to relative precision `rel`, given the leading root
/// coefficient; reports whether the returned `y` is an exact root.
fn root_of_poly(w: &PPoly, n: u32, rel: &Q, cf: CoeffField, lead_root: &Q) -> (PPoly, bool) {
    let (v, _) = w.lowest().cloned().unwrap();
    let ve = &v / Q::from_integer(BigInt::from(n));
    let bound = &v + rel;
    let mut y = PPoly::monomial(ve.clone(), lead_root.clone());
    let nq = Q::from_integer(BigInt::from(n));
    // d(y^n)/dy at the leading term: n·lead^{n−1}·t^{(n−1)ve}
    let deriv_c = cf.mul(&nq, &num_traits::Pow::pow(lead_root, (n - 1) as i32));
    let deriv_e = &ve * Q::from_integer(BigInt::from(n - 1));
    let mut steps = 0;
    loop {
        let yn = pow_bounded(&y, n, &bound, cf);
        let r = w.truncate(&bound).sub(&yn, cf);
        let (e, d) = match r.lowest() {
            None => break,
            Some(t) => t.clone(),
        };
        steps += 1;
        if steps > super::ppoly::MAX_TERMS {
            break;
        }
        let c = cf.div(&d, &deriv_c);
        y = y.add(&PPoly::monomial(&e - &deriv_e, c), cf);
    }
    let exact = pow_bounded(&y, n, &Q::from_integer(BigInt::from(i64::MAX)), cf) == *w;
    (y, exact)
}

fn pow_bounded(y: &PPoly, n: u32, bound: &Q, cf: CoeffField) -> PPoly {
    let mut acc = PPoly::constant(Q::one());
    for _ in 0..n {
        acc = acc.mul_bounded(y, Some(bound), cf);
    }
    acc
}
