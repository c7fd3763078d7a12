//! Sparse generalized polynomials `Σ c_e t^e` with rational exponents,
//! exact rational functions in `t`, and truncated series.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::CoeffField;
use crate::error::{MvfError, Result};
use crate::Q;

/// Term-count cap; exact data beyond it is converted to truncated series.
pub const MAX_TERMS: usize = 2048;

/// Sorted by increasing exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PPoly {
    pub terms: Vec<(Q, Q)>,
}

impl PPoly {
    pub fn zero() -> PPoly {
        PPoly { terms: Vec::new() }
    }

    pub fn monomial(e: Q, c: Q) -> PPoly {
        if c.is_zero() {
            PPoly::zero()
        } else {
            PPoly { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: Q) -> PPoly {
        PPoly::monomial(Q::zero(), c)
    }

    pub fn from_map(m: BTreeMap<Q, Q>) -> PPoly {
        PPoly { terms: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn lowest(&self) -> Option<&(Q, Q)> {
        self.terms.first()
    }

    pub fn highest(&self) -> Option<&(Q, Q)> {
        self.terms.last()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn add(&self, o: &PPoly, cf: CoeffField) -> PPoly {
        let mut out = Vec::with_capacity(self.len() + o.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < o.len() {
            if j == o.len() || (i < self.len() && self.terms[i].0 < o.terms[j].0) {
                out.push(self.terms[i].clone());
                i += 1;
            } else if i == self.len() || o.terms[j].0 < self.terms[i].0 {
                out.push(o.terms[j].clone());
                j += 1;
            } else {
                let c = cf.add(&self.terms[i].1, &o.terms[j].1);
                if !c.is_zero() {
                    out.push((self.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
        PPoly { terms: out }
    }

    pub fn neg(&self, cf: CoeffField) -> PPoly {
        PPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), cf.neg(c))).collect() }
    }

    pub fn sub(&self, o: &PPoly, cf: CoeffField) -> PPoly {
        self.add(&o.neg(cf), cf)
    }

    /// Product, keeping only exponents `< bound` when a bound is given.
    pub fn mul_bounded(&self, o: &PPoly, bound: Option<&Q>, cf: CoeffField) -> PPoly {
        if self.is_zero() || o.is_zero() {
            return PPoly::zero();
        }
        if o.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1, cf).truncate_opt(bound);
        }
        if self.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1, cf).truncate_opt(bound);
        }
        let mut acc: BTreeMap<Q, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                if let Some(b) = bound {
                    if &e >= b {
                        break;
                    }
                }
                let c = cf.mul(c1, c2);
                let slot = acc.entry(e).or_insert_with(Q::zero);
                *slot = cf.add(slot, &c);
            }
        }
        PPoly::from_map(acc)
    }

    pub fn mul(&self, o: &PPoly, cf: CoeffField) -> PPoly {
        self.mul_bounded(o, None, cf)
    }

    /// Multiply by `c·t^e`.
    pub fn mul_term(&self, e: &Q, c: &Q, cf: CoeffField) -> PPoly {
        if c.is_zero() {
            return PPoly::zero();
        }
        PPoly { terms: self.terms.iter().map(|(x, y)| (x + e, cf.mul(y, c))).collect() }
    }

    /// Drop exponents `>= bound`.
    pub fn truncate(&self, bound: &Q) -> PPoly {
        PPoly { terms: self.terms.iter().filter(|(e, _)| e < bound).cloned().collect() }
    }

    fn truncate_opt(self, bound: Option<&Q>) -> PPoly {
        match bound {
            Some(b) => self.truncate(b),
            None => self,
        }
    }

    /// Substitute `t ↦ λ·t` (exponents must be integral).
    pub fn relabel(&self, lambda: &Q, cf: CoeffField) -> PPoly {
        PPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let k: i32 = e.to_integer().try_into().expect("small exponent");
                    (e.clone(), cf.mul(c, &num_traits::Pow::pow(lambda, k)))
                })
                .collect(),
        }
    }

    /// Substitute `t ↦ t^k` on exponents (`k > 0`).
    pub fn scale_exponents(&self, k: &Q) -> PPoly {
        PPoly { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    pub fn exponents_integral(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_integer())
    }

    /// Least common denominator of all exponents.
    pub fn exponent_lcd(&self) -> num_bigint::BigInt {
        let mut l = num_bigint::BigInt::one();
        for (e, _) in &self.terms {
            l = num_integer::Integer::lcm(&l, e.denom());
        }
        l
    }
}

/// Exact quotient when `den` divides `num` in the ring of generalized
/// polynomials; `den` must have lowest term `1·t^0`.
pub fn exact_quotient(num: &PPoly, den: &PPoly, cf: CoeffField) -> Option<PPoly> {
    if den.len() == 1 {
        return Some(num.clone());
    }
    let dspan = &den.highest().unwrap().0 - &den.lowest().unwrap().0;
    let mut rem = num.clone();
    let mut out = Vec::new();
    let mut steps = 0;
    while let Some((e, c)) = rem.lowest().cloned() {
        let span = &rem.highest().unwrap().0 - &e;
        if span < dspan || steps > 256 {
            return None;
        }
        rem = rem.sub(&den.mul_term(&e, &c, cf), cf);
        out.push((e, c));
        steps += 1;
    }
    Some(PPoly { terms: out })
}

/// Series quotient `num / den` known up to (not including) exponent `bound`;
/// `den` must have lowest term `1·t^0`. Returns the quotient and the
/// exponent up to which it is actually determined (lowered by the term cap).
pub fn series_quotient(num: &PPoly, den: &PPoly, bound: &Q, cf: CoeffField) -> (PPoly, Q) {
    let mut rem = num.truncate(bound);
    let mut out = Vec::new();
    while let Some((e, c)) = rem.lowest().cloned() {
        if out.len() >= MAX_TERMS {
            return (PPoly { terms: out }, e);
        }
        let sub = den.mul_term(&e, &c, cf).truncate(bound);
        rem = rem.sub(&sub, cf);
        out.push((e, c));
    }
    (PPoly { terms: out }, bound.clone())
}

/// `num/den` with `den` normalized to lowest term `1·t^0`.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: PPoly,
    pub den: PPoly,
}

impl RatFunc {
    pub fn from_poly(p: PPoly) -> RatFunc {
        RatFunc { num: p, den: PPoly::constant(Q::one()) }
    }

    pub fn new(num: PPoly, den: PPoly, cf: CoeffField) -> Result<RatFunc> {
        let (de, dc) = match den.lowest() {
            None => return Err(MvfError::DivisionByZero),
            Some(x) => x.clone(),
        };
        if num.is_zero() {
            return Ok(RatFunc::from_poly(PPoly::zero()));
        }
        let inv = cf.inv(&dc);
        let neg_e = -de;
        let den = den.mul_term(&neg_e, &inv, cf);
        let num = num.mul_term(&neg_e, &inv, cf);
        if den.len() > 1 {
            if let Some(q) = exact_quotient(&num, &den, cf) {
                return Ok(RatFunc::from_poly(q));
            }
        }
        Ok(RatFunc { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.len() == 1
    }

    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }

    /// Lowest exponent (the valuation) and its coefficient.
    pub fn leading(&self) -> Option<(Q, Q)> {
        self.num.lowest().cloned()
    }

    pub fn add(&self, o: &RatFunc, cf: CoeffField) -> RatFunc {
        if self.den == o.den {
            let num = self.num.add(&o.num, cf);
            return RatFunc::new(num, self.den.clone(), cf).unwrap();
        }
        let num = self.num.mul(&o.den, cf).add(&o.num.mul(&self.den, cf), cf);
        RatFunc::new(num, self.den.mul(&o.den, cf), cf).unwrap()
    }

    pub fn neg(&self, cf: CoeffField) -> RatFunc {
        RatFunc { num: self.num.neg(cf), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc, cf: CoeffField) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::from_poly(PPoly::zero());
        }
        if self.is_poly() && o.is_poly() {
            return RatFunc::from_poly(self.num.mul(&o.num, cf));
        }
        RatFunc::new(self.num.mul(&o.num, cf), self.den.mul(&o.den, cf), cf).unwrap()
    }

    pub fn inv(&self, cf: CoeffField) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone(), cf)
    }

    pub fn eq(&self, o: &RatFunc, cf: CoeffField) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den, cf) == o.num.mul(&self.den, cf)
    }

    /// Truncated series with relative precision `rel` beyond the valuation.
    pub fn to_series(&self, rel: &Q, cf: CoeffField) -> Series {
        let v = match self.leading() {
            Some((e, _)) => e,
            None => return Series { terms: PPoly::zero(), prec: rel.clone() },
        };
        let bound = &v + rel;
        if self.is_poly() {
            return Series { terms: self.num.truncate(&bound), prec: bound };
        }
        let (terms, prec) = series_quotient(&self.num, &self.den, &bound, cf);
        Series { terms, prec }
    }
}

/// `Σ c_e t^e + O(t^prec)`, all stored exponents below `prec`.
#[derive(Clone, Debug)]
pub struct Series {
    pub terms: PPoly,
    pub prec: Q,
}

impl Series {
    /// Lowest known exponent, or `prec` when no digit is known.
    pub fn order(&self) -> Q {
        self.terms.lowest().map(|t| t.0.clone()).unwrap_or_else(|| self.prec.clone())
    }

    pub fn add(&self, o: &Series, cf: CoeffField) -> Series {
        let prec = self.prec.clone().min(o.prec.clone());
        Series { terms: self.terms.truncate(&prec).add(&o.terms.truncate(&prec), cf), prec }
    }

    pub fn neg(&self, cf: CoeffField) -> Series {
        Series { terms: self.terms.neg(cf), prec: self.prec.clone() }
    }

    pub fn mul(&self, o: &Series, cf: CoeffField) -> Series {
        let prec = (&self.prec + o.order()).min(&o.prec + self.order());
        Series { terms: self.terms.mul_bounded(&o.terms, Some(&prec), cf), prec }
    }

    /// Reciprocal; `PrecisionLoss` when no digit is known.
    pub fn inv(&self, cf: CoeffField) -> Result<Series> {
        let (v, c) = self
            .terms
            .lowest()
            .cloned()
            .ok_or_else(|| MvfError::PrecisionLoss("inverse of an unresolved series".into()))?;
        let ci = cf.inv(&c);
        let negv = -v.clone();
        let unit = self.terms.mul_term(&negv, &ci, cf);
        let rel = &self.prec - &v;
        let (q, got) = series_quotient(&PPoly::constant(Q::one()), &unit, &rel, cf);
        Ok(Series { terms: q.mul_term(&negv, &ci, cf), prec: got - v })
    }

    /// Lower the precision to at most `rel` beyond the valuation.
    pub fn cap(&self, rel: &Q) -> Series {
        let bound = self.order() + rel;
        if bound >= self.prec && self.terms.len() <= MAX_TERMS {
            return self.clone();
        }
        let mut prec = bound.min(self.prec.clone());
        if self.terms.len() > MAX_TERMS {
            prec = prec.min(self.terms.terms[MAX_TERMS].0.clone());
        }
        Series { terms: self.terms.truncate(&prec), prec }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qi};

    const QF: CoeffField = CoeffField::Rationals;

    fn p(terms: &[(i64, i64)]) -> PPoly {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            m.insert(qi(*e), qi(*c));
        }
        PPoly::from_map(m)
    }

    #[test]
    fn rational_function_cancels_exact_factors() {
        // (1+t)^2 / (1+t) = 1+t
        let a = p(&[(0, 1), (1, 1)]);
        let r = RatFunc::new(a.mul(&a, QF), a.clone(), QF).unwrap();
        assert!(r.is_poly());
        assert_eq!(r.num, a);
    }

    #[test]
    fn series_of_geometric_quotient() {
        // 1/(1−t) = 1 + t + t^2 + ...
        let r = RatFunc::new(p(&[(0, 1)]), p(&[(0, 1), (1, -1)]), QF).unwrap();
        let s = r.to_series(&qi(5), QF);
        assert_eq!(s.prec, qi(5));
        assert_eq!(s.terms, p(&[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]));
    }

    #[test]
    fn series_inverse_round_trip() {
        let s = Series { terms: p(&[(1, 2), (2, 3), (4, -1)]), prec: qi(8) };
        let i = s.inv(QF).unwrap();
        assert_eq!(i.prec, qi(6));
        let one = s.mul(&i, QF);
        assert_eq!(one.terms, p(&[(0, 1)]));
    }

    #[test]
    fn fractional_exponents_multiply() {
        let a = PPoly::monomial(q(1, 2), qi(1));
        let b = a.mul(&a, QF);
        assert_eq!(b, PPoly::monomial(qi(1), qi(1)));
    }
}
