//! Dyadic interval arithmetic with directed rounding.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper endpoint
//! toward +∞ after truncating mantissas to the working precision, so an
//! [`Interval`] always encloses the exact real it was computed for.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

/// Rounding direction for mantissa truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// The exact number `mant · 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { mant: n.into(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    /// Round `q` to a dyadic with roughly `bits` significant bits.
    pub fn from_rational(q: &Q, bits: u32, dir: Round) -> Self {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let num = q.numer();
        let den = q.denom();
        // choose shift so that num·2^s/den has about `bits` bits
        let s = bits as i64 + den.bits() as i64 - num.bits() as i64 + 1;
        let scaled_num = if s >= 0 { num << (s as u64) } else { num.clone() };
        let scaled_den = if s >= 0 { den.clone() } else { den << ((-s) as u64) };
        let (quo, rem) = scaled_num.div_mod_floor(&scaled_den);
        let mant = if dir == Round::Up && !rem.is_zero() { quo + 1 } else { quo };
        Dyadic { mant, exp: -s }
    }

    pub fn to_rational(&self) -> Q {
        if self.exp >= 0 {
            Q::from_integer(&self.mant << (self.exp as u64))
        } else {
            Q::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Truncate the mantissa to at most `bits` bits in the given direction.
    pub fn round(&self, bits: u32, dir: Round) -> Self {
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let k = len - bits as u64;
        let d = pow2(k);
        let (quo, rem) = self.mant.div_mod_floor(&d);
        let mant = if dir == Round::Up && !rem.is_zero() { quo + 1 } else { quo };
        Dyadic { mant, exp: self.exp + k as i64 }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        (a, b, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic { mant: a + b, exp: e }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    /// `self / other` rounded to `bits` bits.
    pub fn div(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        let q = self.to_rational() / other.to_rational();
        Dyadic::from_rational(&q, bits, dir)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(self.exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        // same nonzero sign: compare magnitudes via bit length first
        let top_a = self.mant.bits() as i64 + self.exp;
        let top_b = other.mant.bits() as i64 + other.exp;
        let positive = self.mant.sign() == Sign::Plus;
        if top_a != top_b {
            let ord = top_a.cmp(&top_b);
            return if positive { ord } else { ord.reverse() };
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub bits: u32,
}

impl Interval {
    pub fn point(d: Dyadic, bits: u32) -> Self {
        Interval { lo: d.clone(), hi: d, bits }
    }

    pub fn from_rational(q: &Q, bits: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, bits, Round::Down),
            hi: Dyadic::from_rational(q, bits, Round::Up),
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Interval::point(Dyadic::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        Interval::point(Dyadic::from_int(1), bits)
    }

    fn make(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        Interval { lo: lo.round(bits, Round::Down), hi: hi.round(bits, Round::Up), bits }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let bits = self.bits.min(o.bits);
        Interval::make(self.lo.add(&o.lo), self.hi.add(&o.hi), bits)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg(), bits: self.bits }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let bits = self.bits.min(o.bits);
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::make(lo, hi, bits)
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            bits: self.bits.min(o.bits),
        }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            bits: self.bits.min(o.bits),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.sign() != Sign::Minus {
            self.clone()
        } else if self.hi.sign() != Sign::Plus {
            self.neg()
        } else {
            let hi = self.hi.clone().max(self.lo.neg());
            Interval { lo: Dyadic::zero(), hi, bits: self.bits }
        }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip(&self) -> Interval {
        assert!(self.lo.sign() == Sign::Plus, "recip of a non-positive interval");
        let one = Dyadic::from_int(1);
        Interval {
            lo: one.div(&self.hi, self.bits, Round::Down),
            hi: one.div(&self.lo, self.bits, Round::Up),
            bits: self.bits,
        }
    }

    /// Integer power of a nonnegative interval.
    pub fn powi(&self, n: u64) -> Interval {
        assert!(self.lo.sign() != Sign::Minus, "powi of a possibly negative interval");
        Interval {
            lo: pow_dir(&self.lo, n, self.bits, Round::Down),
            hi: pow_dir(&self.hi, n, self.bits, Round::Up),
            bits: self.bits,
        }
    }

    /// `n`-th root of a nonnegative interval.
    pub fn root(&self, n: u64) -> Interval {
        assert!(n >= 1);
        assert!(self.lo.sign() != Sign::Minus, "root of a possibly negative interval");
        if n == 1 {
            return self.clone();
        }
        Interval {
            lo: root_dir(&self.lo, n, self.bits, Round::Down),
            hi: root_dir(&self.hi, n, self.bits, Round::Up),
            bits: self.bits,
        }
    }

    /// Rational power of a strictly positive interval (or of zero for q > 0).
    pub fn pow_rational(&self, q: &Q) -> Interval {
        let a = q.numer();
        let b = q.denom().to_u64().expect("exponent denominator too large");
        if a.is_zero() {
            return Interval::one(self.bits);
        }
        let base = if a.is_negative() { self.recip() } else { self.clone() };
        let a = a.abs().to_u64().expect("exponent numerator too large");
        base.powi(a).root(b)
    }

    /// Decide the order of two intervals if they are disjoint.
    pub fn compare(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> Q {
        (self.lo.to_rational() + self.hi.to_rational()) / Q::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Q {
        self.hi.to_rational() - self.lo.to_rational()
    }
}

fn pow_dir(x: &Dyadic, mut n: u64, bits: u32, dir: Round) -> Dyadic {
    let mut result = Dyadic::from_int(1);
    let mut base = x.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = result.mul(&base).round(bits, dir);
        }
        n >>= 1;
        if n > 0 {
            base = base.mul(&base).round(bits, dir);
        }
    }
    result
}

/// Directed `n`-th root of a nonnegative dyadic by bisection.
fn root_dir(z: &Dyadic, n: u64, bits: u32, dir: Round) -> Dyadic {
    if z.is_zero() {
        return Dyadic::zero();
    }
    // z = m·2^e with m in [1/2, 1); split e = n·k + r, 0 <= r < n, so that
    // z^(1/n) = 2^k · (m·2^r)^(1/n) and the second factor lies in [1/2, 2].
    let len = z.mant.bits() as i64;
    let e = z.exp + len;
    let k = e.div_euclid(n as i64);
    let r = e.rem_euclid(n as i64);
    let reduced = Dyadic::new(z.mant.clone(), z.exp - k * n as i64);
    debug_assert!(r >= 0);
    let mut lo = Dyadic::new(BigInt::one(), -1);
    let mut hi = Dyadic::from_int(2);
    let steps = bits as usize + 4;
    for _ in 0..steps {
        let mid = lo.add(&hi);
        let mid = Dyadic::new(mid.mant, mid.exp - 1).round(bits + 8, dir);
        match dir {
            Round::Down => {
                // mid is a certified lower bound when mid^n (rounded up) <= z
                if pow_dir(&mid, n, bits + 8, Round::Up) <= reduced {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Round::Up => {
                if pow_dir(&mid, n, bits + 8, Round::Down) >= reduced {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
    }
    let out = if dir == Round::Down { lo } else { hi };
    Dyadic::new(out.mant, out.exp + k)
}

/// Render a rational with `sig` significant digits, rounding to nearest.
pub fn format_significant(q: &Q, sig: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // estimate k = floor(log10 a)
    let ten = Q::from_integer(BigInt::from(10));
    let mut k: i64 = {
        let nb = a.numer().bits() as f64;
        let db = a.denom().bits() as f64;
        ((nb - db) * std::f64::consts::LOG10_2).floor() as i64
    };
    let pow10 = |e: i64| -> Q {
        if e >= 0 {
            Q::from_integer(BigInt::from(10).pow(e as u32))
        } else {
            Q::new(BigInt::one(), BigInt::from(10).pow((-e) as u32))
        }
    };
    while pow10(k) > a {
        k -= 1;
    }
    while pow10(k + 1) <= a {
        k += 1;
    }
    let _ = &ten;
    let scale = sig as i64 - 1 - k;
    let scaled = &a * pow10(scale);
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut digits = (scaled + half).floor().to_integer();
    if digits == BigInt::from(10).pow(sig as u32) {
        digits /= 10;
        k += 1;
    }
    let ds = digits.to_string();
    let body = if (-5..10).contains(&k) {
        if k >= 0 {
            let int_len = (k + 1) as usize;
            if ds.len() > int_len {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            } else {
                format!("{}{}", ds, "0".repeat(int_len - ds.len()))
            }
        } else {
            format!("0.{}{}", "0".repeat((-k - 1) as usize), ds)
        }
    } else {
        let (h, t) = ds.split_at(1);
        if t.is_empty() {
            format!("{}e{}", h, k)
        } else {
            format!("{}.{}e{}", h, t, k)
        }
    };
    let body = trim_trailing_zeros(&body);
    if neg {
        format!("-{}", body)
    } else {
        body
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if let Some(epos) = s.find('e') {
        let (m, e) = s.split_at(epos);
        return format!("{}{}", trim_trailing_zeros(m), e);
    }
    if s.contains('.') {
        let t = s.trim_end_matches('0');
        t.trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
