//! Absolute values `0` and `c^q` over a rational base `c ∈ (0,1)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{MvfError, Result};
use crate::interval::{format_significant, Interval};
use crate::Q;

/// Rational base `num/den` with `0 < num < den`, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Base {
    pub num: u64,
    pub den: u64,
}

impl Base {
    pub fn new(num: u64, den: u64) -> Result<Base> {
        if num == 0 || num >= den {
            return Err(MvfError::InvalidInput(format!(
                "base {num}/{den} is not in (0,1)"
            )));
        }
        let g = num.gcd(&den);
        Ok(Base { num: num / g, den: den / g })
    }

    /// `1/p`.
    pub fn inverse_of(p: u64) -> Base {
        Base::new(1, p).expect("p >= 2")
    }

    pub fn half() -> Base {
        Base { num: 1, den: 2 }
    }

    pub fn to_rational(self) -> Q {
        Q::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Prime exponents of the base: `c = ∏ p^e`.
    pub fn factor(self) -> Vec<(u64, i64)> {
        let mut out: Vec<(u64, i64)> = Vec::new();
        for (n, sign) in [(self.num, 1i64), (self.den, -1i64)] {
            let mut n = n;
            let mut p = 2u64;
            while p * p <= n {
                while n % p == 0 {
                    add_exp(&mut out, p, sign);
                    n /= p;
                }
                p += 1;
            }
            if n > 1 {
                add_exp(&mut out, n, sign);
            }
        }
        out.sort();
        out
    }
}

fn add_exp(v: &mut Vec<(u64, i64)>, p: u64, e: i64) {
    if let Some(slot) = v.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        v.push((p, e));
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An element of `{0} ∪ {c^q}`; `exp == None` encodes zero.
#[derive(Clone, Debug)]
pub struct AbsValue {
    base: Base,
    exp: Option<Q>,
}

impl AbsValue {
    pub fn zero(base: Base) -> Self {
        AbsValue { base, exp: None }
    }

    pub fn one(base: Base) -> Self {
        AbsValue { base, exp: Some(Q::zero()) }
    }

    /// `c^q`.
    pub fn pow(base: Base, q: Q) -> Self {
        AbsValue { base, exp: Some(q) }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.exp.is_none()
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.exp, Some(q) if q.is_zero())
    }

    /// The exponent `q` of `c^q`, or `None` for zero.
    pub fn exponent(&self) -> Option<&Q> {
        self.exp.as_ref()
    }

    pub fn mul(&self, o: &AbsValue) -> AbsValue {
        let o = o.rebase(self.base);
        match (&self.exp, &o.exp) {
            (Some(a), Some(b)) => {
                assert!(o.base == self.base, "product of values over incompatible bases");
                AbsValue { base: self.base, exp: Some(a + b) }
            }
            _ => AbsValue::zero(self.base),
        }
    }

    /// `self / o`; `None` when `o` is zero.
    pub fn div(&self, o: &AbsValue) -> Option<AbsValue> {
        let o = o.rebase(self.base);
        match (&self.exp, &o.exp) {
            (_, None) => None,
            (None, _) => Some(AbsValue::zero(self.base)),
            (Some(a), Some(b)) => {
                assert!(o.base == self.base, "quotient of values over incompatible bases");
                Some(AbsValue { base: self.base, exp: Some(a - b) })
            }
        }
    }

    /// Rational power. `0^0 = 1`; negative powers of zero panic.
    pub fn powq(&self, r: &Q) -> AbsValue {
        match &self.exp {
            Some(a) => AbsValue { base: self.base, exp: Some(a * r) },
            None if r.is_zero() => AbsValue::one(self.base),
            None if r.is_positive() => self.clone(),
            None => panic!("negative power of zero"),
        }
    }

    pub fn powi(&self, n: i64) -> AbsValue {
        self.powq(&Q::from_integer(BigInt::from(n)))
    }

    pub fn max(&self, o: &AbsValue) -> AbsValue {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &AbsValue) -> AbsValue {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    /// Re-express over another base when the value is exactly representable
    /// there (zero, one, or `c^q = c'^{q'}` symbolically); otherwise keep as is.
    fn rebase(&self, target: Base) -> AbsValue {
        if self.base == target {
            return self.clone();
        }
        match &self.exp {
            None => AbsValue::zero(target),
            Some(q) if q.is_zero() => AbsValue::one(target),
            Some(q) => match exponent_over(self.base, q, target) {
                Some(e) => AbsValue::pow(target, e),
                None => self.clone(),
            },
        }
    }

    /// Exact rational value when the exponent yields one.
    pub fn to_rational(&self) -> Option<Q> {
        match &self.exp {
            None => Some(Q::zero()),
            Some(q) => rational_power(self.base, q),
        }
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        match &self.exp {
            None => Interval::zero(bits),
            Some(q) => {
                if let Some(r) = rational_power(self.base, q) {
                    return Interval::from_rational(&r, bits);
                }
                // a few guard bits absorb the rounding of the root/power chain
                let inner = bits + 16 + q.numer().bits().min(1 << 16) as u32;
                let iv = Interval::from_rational(&self.base.to_rational(), inner).pow_rational(q);
                Interval { bits, ..iv }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.exp {
            None => 0.0,
            Some(q) => {
                let c = self.base.num as f64 / self.base.den as f64;
                c.powf(q.to_f64().unwrap_or(f64::INFINITY))
            }
        }
    }

    /// Compare with an exact rational threshold.
    pub fn cmp_rational(&self, t: &Q) -> Ordering {
        compare_value_to_real(self, t)
    }

    /// `1/5 (= (1/5)^1)` when exact, else `~0.353553 (= (1/2)^(3/2))`.
    pub fn render(&self) -> String {
        match &self.exp {
            None => "0".to_string(),
            Some(q) => {
                let sym = self.symbolic();
                match self.to_rational() {
                    Some(r) if r.numer().bits() <= 64 && r.denom().bits() <= 64 => {
                        format!("{} (= {})", fmt_q(&r), sym)
                    }
                    _ => {
                        let iv = self.enclose(96);
                        let _ = q;
                        format!("~{} (= {})", format_significant(&iv.midpoint(), 6), sym)
                    }
                }
            }
        }
    }

    /// `(1/5)^2`, `(1/2)^(3/2)`, or `0`.
    pub fn symbolic(&self) -> String {
        match &self.exp {
            None => "0".to_string(),
            Some(q) => {
                if q.is_integer() && !q.is_negative() {
                    format!("({})^{}", self.base, q)
                } else {
                    format!("({})^({})", self.base, fmt_q(q))
                }
            }
        }
    }
}

/// `a/b`, or `n` for integers.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `c^q` as an exact rational when every prime exponent of `c` times `q` is integral.
fn rational_power(base: Base, q: &Q) -> Option<Q> {
    if q.is_zero() {
        return Some(Q::one());
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (p, e) in base.factor() {
        let k = q * Q::from_integer(BigInt::from(e));
        if !k.is_integer() {
            return None;
        }
        let k = k.to_integer();
        let mag = k.abs().to_u32()?;
        let pk = num_traits::pow(BigInt::from(p), mag as usize);
        if k.is_positive() {
            num *= pk;
        } else {
            den *= pk;
        }
    }
    Some(Q::new(num, den))
}

/// Find `e` with `from^q = to^e`, if one exists.
fn exponent_over(from: Base, q: &Q, to: Base) -> Option<Q> {
    let f = from.factor();
    let t = to.factor();
    // the exponent vectors must be proportional: e·t_p = q·f_p for every p
    let mut e: Option<Q> = None;
    let mut primes: Vec<u64> = f.iter().chain(t.iter()).map(|x| x.0).collect();
    primes.sort();
    primes.dedup();
    for p in &primes {
        let fp = f.iter().find(|x| x.0 == *p).map(|x| x.1).unwrap_or(0);
        let tp = t.iter().find(|x| x.0 == *p).map(|x| x.1).unwrap_or(0);
        let lhs = q * Q::from_integer(BigInt::from(fp));
        if tp == 0 {
            if !lhs.is_zero() {
                return None;
            }
            continue;
        }
        let cand = lhs / Q::from_integer(BigInt::from(tp));
        match &e {
            None => e = Some(cand),
            Some(x) if *x == cand => {}
            Some(_) => return None,
        }
    }
    e
}

/// Three-way comparison of `u` with a rational `t`, exact whenever the
/// answer is "equal" and otherwise by interval refinement.
pub fn compare_value_to_real(u: &AbsValue, t: &Q) -> Ordering {
    let q = match &u.exp {
        None => return Q::zero().cmp(t),
        Some(q) => q,
    };
    if !t.is_positive() {
        return Ordering::Greater;
    }
    if let Some(r) = rational_power(u.base, q) {
        return r.cmp(t);
    }
    // c^q is irrational here, so it differs from t and refinement terminates
    let mut bits = 64;
    loop {
        let a = u.enclose(bits);
        let b = Interval::from_rational(t, bits);
        if let Some(o) = a.compare(&b) {
            return o;
        }
        bits *= 2;
    }
}

impl PartialEq for AbsValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AbsValue {}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.exp, &other.exp) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            _ => {}
        }
        let o = other.rebase(self.base);
        if o.base == self.base {
            // larger exponent means smaller value
            return o.exp.as_ref().unwrap().cmp(self.exp.as_ref().unwrap());
        }
        let mut bits = 64;
        loop {
            let a = self.enclose(bits);
            let b = other.enclose(bits);
            if let Some(ord) = a.compare(&b) {
                return ord;
            }
            bits *= 2;
            assert!(bits <= 1 << 20, "value comparison did not resolve");
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn half() -> Base {
        Base::half()
    }

    #[test]
    fn ordering_reverses_exponents() {
        let a = AbsValue::pow(half(), q(1, 1));
        let b = AbsValue::pow(half(), q(2, 1));
        assert!(b < a);
        assert!(AbsValue::zero(half()) < b);
    }

    #[test]
    fn products_add_exponents() {
        let a = AbsValue::pow(half(), q(1, 3));
        let b = AbsValue::pow(half(), q(1, 6));
        assert_eq!(a.mul(&b).exponent().unwrap(), &q(1, 2));
        assert!(a.mul(&AbsValue::zero(half())).is_zero());
    }

    #[test]
    fn threshold_comparisons() {
        let v = AbsValue::pow(half(), q(3, 2));
        assert_eq!(compare_value_to_real(&v, &q(36, 100)), Ordering::Less);
        assert_eq!(compare_value_to_real(&v, &q(35, 100)), Ordering::Greater);
        let w = AbsValue::pow(half(), q(2, 1));
        assert_eq!(compare_value_to_real(&w, &q(1, 4)), Ordering::Equal);
        assert_eq!(compare_value_to_real(&AbsValue::zero(half()), &q(1, 10)), Ordering::Less);
    }

    #[test]
    fn symbolic_equality_across_bases() {
        let quarter = Base::new(1, 4).unwrap();
        let a = AbsValue::pow(quarter, q(1, 1));
        let b = AbsValue::pow(half(), q(2, 1));
        assert_eq!(a, b);
        // (1/4)^(1/2) = 1/2 is rational even with a fractional exponent
        let c = AbsValue::pow(quarter, q(1, 2));
        assert_eq!(c.to_rational(), Some(q(1, 2)));
    }

    #[test]
    fn rendering() {
        let b5 = Base::inverse_of(5);
        assert_eq!(AbsValue::pow(b5, q(1, 1)).render(), "1/5 (= (1/5)^1)");
        assert_eq!(AbsValue::pow(half(), q(3, 2)).render(), "~0.353553 (= (1/2)^(3/2))");
        assert_eq!(AbsValue::zero(b5).render(), "0");
    }
}
