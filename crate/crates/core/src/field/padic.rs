//! Inexact p-adic numbers `p^shift · mant + O(p^absprec)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::vp_int;
use crate::Q;

/// Either a unit mantissa (`p ∤ mant`) with `shift` the valuation, or a
/// zero mantissa with `shift == absprec` (zero to the known precision).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    pub p: u64,
    pub mant: BigInt,
    pub shift: i64,
    pub absprec: i64,
}

pub(crate) fn ppow(p: u64, k: i64) -> BigInt {
    assert!(k >= 0);
    num_traits::pow(BigInt::from(p), k as usize)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

impl PAdic {
    pub fn normalize(p: u64, m: BigInt, shift: i64, absprec: i64) -> PAdic {
        if absprec <= shift {
            return PAdic { p, mant: BigInt::zero(), shift: absprec, absprec };
        }
        let modulus = ppow(p, absprec - shift);
        let m = m.mod_floor(&modulus);
        if m.is_zero() {
            return PAdic { p, mant: m, shift: absprec, absprec };
        }
        let v = vp_int(&m, p);
        let m = m / ppow(p, v);
        let shift = shift + v;
        let m = m.mod_floor(&ppow(p, absprec - shift));
        PAdic { p, mant: m, shift, absprec }
    }

    /// Expansion of a nonzero rational to `rel` digits beyond its valuation.
    pub fn from_rational(q: &Q, p: u64, rel: u32) -> PAdic {
        assert!(!q.is_zero());
        let vn = vp_int(q.numer(), p);
        let vd = vp_int(q.denom(), p);
        let un = q.numer() / ppow(p, vn);
        let ud = q.denom() / ppow(p, vd);
        let modulus = ppow(p, rel as i64);
        let m = (un * mod_inverse(&ud, &modulus)).mod_floor(&modulus);
        let v = vn - vd;
        PAdic { p, mant: m, shift: v, absprec: v + rel as i64 }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.shift)
        }
    }

    pub fn relprec(&self) -> i64 {
        self.absprec - self.shift
    }

    pub fn add(&self, o: &PAdic) -> PAdic {
        let s = self.shift.min(o.shift);
        let absprec = self.absprec.min(o.absprec);
        if absprec <= s {
            return PAdic::normalize(self.p, BigInt::zero(), absprec, absprec);
        }
        let m = &self.mant * ppow(self.p, self.shift - s) + &o.mant * ppow(self.p, o.shift - s);
        PAdic::normalize(self.p, m, s, absprec)
    }

    pub fn neg(&self) -> PAdic {
        PAdic::normalize(self.p, -&self.mant, self.shift, self.absprec)
    }

    pub fn mul(&self, o: &PAdic) -> PAdic {
        let absprec = (self.absprec + o.shift).min(o.absprec + self.shift);
        let shift = self.shift + o.shift;
        PAdic::normalize(self.p, &self.mant * &o.mant, shift, absprec)
    }

    /// Reciprocal of an element with known valuation.
    pub fn inv(&self) -> Option<PAdic> {
        if self.mant.is_zero() {
            return None;
        }
        let rel = self.relprec();
        let m = mod_inverse(&self.mant, &ppow(self.p, rel));
        Some(PAdic { p: self.p, mant: m, shift: -self.shift, absprec: -self.shift + rel })
    }

    /// Keep at most `rel` digits beyond the valuation.
    pub fn cap(&self, rel: u32) -> PAdic {
        let bound = self.shift + rel as i64;
        if bound >= self.absprec {
            return self.clone();
        }
        PAdic::normalize(self.p, self.mant.clone(), self.shift, bound)
    }

    /// Residue class in `0..p` (requires `shift >= 0`).
    pub fn residue(&self) -> BigInt {
        if self.shift > 0 || self.mant.is_zero() {
            BigInt::zero()
        } else {
            self.mant.mod_floor(&BigInt::from(self.p))
        }
    }

    /// Representative `p^shift · mant` as a rational.
    pub fn representative(&self) -> Q {
        if self.shift >= 0 {
            Q::from_integer(&self.mant * ppow(self.p, self.shift))
        } else {
            Q::new(self.mant.clone(), ppow(self.p, -self.shift))
        }
    }

    #[cfg(test)]
    /// Equality with an exact rational at the known precision.
    pub fn agrees_with(&self, q: &Q) -> bool {
        if q.is_zero() {
            return self.mant.is_zero();
        }
        let other = PAdic::from_rational(q, self.p, (self.relprec().max(1)) as u32 + 4);
        self.add(&other.neg()).mant.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn expansion_of_one_third_in_five_adics() {
        let x = PAdic::from_rational(&q(1, 3), 5, 6);
        let three = PAdic::from_rational(&q(3, 1), 5, 6);
        let one = x.mul(&three);
        assert!(one.agrees_with(&q(1, 1)));
        assert_eq!(one.relprec(), 6);
    }

    #[test]
    fn cancellation_loses_digits() {
        let a = PAdic::from_rational(&q(1, 1), 5, 4);
        let b = PAdic::from_rational(&q(626, 1), 5, 4);
        let d = a.add(&b.neg());
        assert!(d.is_zero_to_precision());
        assert_eq!(d.absprec, 4);
    }

    #[test]
    fn inverse_of_non_unit() {
        let x = PAdic::from_rational(&q(50, 1), 5, 8);
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-2));
        assert!(x.mul(&y).agrees_with(&q(1, 1)));
    }
}
