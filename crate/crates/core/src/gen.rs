//! Random instances for the property suites: points, polynomials, balls.

use num_bigint::BigInt;
use rand::Rng as _;

use crate::field::{random_element, random_unit, Backend, Field, FieldElement};
use crate::poly::Poly;
use crate::projective::ProjPoint;
use crate::rng::Rng;
use crate::Q;

/// A random point of ℙ¹: occasionally `∞`, otherwise `[x : 1]`.
pub fn random_point(field: &Field, rng: &mut Rng) -> ProjPoint {
    if rng.gen_bool(0.08) {
        return ProjPoint::infinity(field);
    }
    ProjPoint::finite(&random_element(field, rng))
}

/// A random point of ℙⁿ.
pub fn random_proj(field: &Field, n: usize, rng: &mut Rng) -> ProjPoint {
    loop {
        let raw: Vec<FieldElement> = (0..=n).map(|_| random_element(field, rng)).collect();
        if let Ok(p) = ProjPoint::normalize(raw) {
            return p;
        }
    }
}

/// A random element with `|x| ≤ 1`, zero with small probability.
pub fn random_in_ball(field: &Field, rng: &mut Rng) -> FieldElement {
    if rng.gen_bool(0.05) {
        return FieldElement::zero(field);
    }
    let e = match field.backend {
        Backend::Trivial => Q::from_integer(BigInt::from(0)),
        Backend::Puiseux { .. } => {
            let d: i64 = [1, 2, 3][rng.gen_range(0..3)];
            Q::new(BigInt::from(rng.gen_range(0..=3 * d)), BigInt::from(d))
        }
        _ => Q::from_integer(BigInt::from(rng.gen_range(0..=3))),
    };
    random_unit(field, rng).mul(&FieldElement::uniformizer_pow(field, &e).expect("valid exponent"))
}

/// A random nonzero integer polynomial with at most `max_terms` terms and
/// per-variable degree at most `max_deg`.
pub fn random_poly(nvars: usize, max_deg: u32, max_terms: usize, rng: &mut Rng) -> Poly {
    loop {
        let nterms = rng.gen_range(1..=max_terms);
        let terms = (0..nterms).map(|_| {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            let mut c: i64 = rng.gen_range(-5..=5);
            if c == 0 {
                c = 1;
            }
            (e, BigInt::from(c))
        });
        let p = Poly::from_terms(nvars, terms.collect::<Vec<_>>());
        if !p.is_zero() {
            return p;
        }
    }
}
