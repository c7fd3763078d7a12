use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::Q;

/// Coefficient (and residue) field of the series backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoeffField {
    Rationals,
    Prime(u64),
}

impl CoeffField {
    pub fn characteristic(self) -> u64 {
        match self {
            CoeffField::Rationals => 0,
            CoeffField::Prime(p) => p,
        }
    }

    pub fn spec(self) -> String {
        match self {
            CoeffField::Rationals => "q".to_string(),
            CoeffField::Prime(p) => format!("f{p}"),
        }
    }

    /// Canonical representative: rationals unchanged, `F_p` as `0..p`.
    pub fn reduce(self, x: &Q) -> Q {
        match self {
            CoeffField::Rationals => x.clone(),
            CoeffField::Prime(p) => {
                let pb = BigInt::from(p);
                let n = x.numer().mod_floor(&pb);
                let d = x.denom().mod_floor(&pb);
                assert!(!d.is_zero(), "denominator divisible by {p}");
                let dinv = d.modpow(&BigInt::from(p - 2), &pb);
                Q::from_integer((n * dinv).mod_floor(&pb))
            }
        }
    }

    pub fn add(self, a: &Q, b: &Q) -> Q {
        self.reduce(&(a + b))
    }

    pub fn sub(self, a: &Q, b: &Q) -> Q {
        self.reduce(&(a - b))
    }

    pub fn mul(self, a: &Q, b: &Q) -> Q {
        self.reduce(&(a * b))
    }

    pub fn neg(self, a: &Q) -> Q {
        self.reduce(&-a)
    }

    pub fn inv(self, a: &Q) -> Q {
        assert!(!a.is_zero(), "inverse of zero coefficient");
        match self {
            CoeffField::Rationals => a.recip(),
            CoeffField::Prime(_) => self.reduce(&a.recip()),
        }
    }

    pub fn div(self, a: &Q, b: &Q) -> Q {
        self.mul(a, &self.inv(b))
    }

    /// Square root in the coefficient field, if it exists.
    pub fn sqrt(self, a: &Q) -> Option<Q> {
        match self {
            CoeffField::Rationals => rational_root(a, 2),
            CoeffField::Prime(p) => {
                let a = self.reduce(a).to_integer().to_u64().unwrap();
                (0..p).find(|x| (x * x) % p == a).map(|x| Q::from_integer(BigInt::from(x)))
            }
        }
    }

    /// `n`-th root in the coefficient field, if it exists.
    pub fn nth_root(self, a: &Q, n: u32) -> Option<Q> {
        match self {
            CoeffField::Rationals => rational_root(a, n),
            CoeffField::Prime(p) => {
                let a = self.reduce(a).to_integer().to_u64().unwrap();
                (0..p)
                    .find(|x| {
                        let xb = BigInt::from(*x);
                        xb.modpow(&BigInt::from(n), &BigInt::from(p)) == BigInt::from(a)
                    })
                    .map(|x| Q::from_integer(BigInt::from(x)))
            }
        }
    }
}

/// Exact rational `n`-th root.
pub(crate) fn rational_root(a: &Q, n: u32) -> Option<Q> {
    if a.is_zero() {
        return Some(Q::zero());
    }
    if a.is_negative() && n % 2 == 0 {
        return None;
    }
    let root_int = |x: &BigInt| -> Option<BigInt> {
        let r = x.abs().nth_root(n);
        if num_traits::pow(r.clone(), n as usize) == x.abs() {
            Some(if x.is_negative() { -r } else { r })
        } else {
            None
        }
    };
    let num = root_int(a.numer())?;
    let den = root_int(a.denom())?;
    Some(Q::new(num, den))
}
