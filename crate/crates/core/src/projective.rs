//! Normalized points of ℙⁿ over a valued field.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{MvfError, Result};
use crate::field::{Field, FieldElement};
use crate::value::AbsValue;
use crate::Q;

/// `[a_0 : … : a_n]` with `max |a_i| = 1`, the pivot being the least index
/// of value 1 and stored as exactly 1.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
    pivot: usize,
}

impl ProjPoint {
    /// Divide by the first coordinate of maximal value.
    pub fn normalize(raw: Vec<FieldElement>) -> Result<ProjPoint> {
        if raw.is_empty() {
            return Err(MvfError::ZeroVector);
        }
        let mut best: Option<(usize, AbsValue)> = None;
        let mut undetermined: Vec<AbsValue> = Vec::new();
        for (i, x) in raw.iter().enumerate() {
            match x.value() {
                Ok(v) => {
                    if v.is_zero() {
                        continue;
                    }
                    if best.as_ref().map(|(_, b)| v > *b).unwrap_or(true) {
                        best = Some((i, v));
                    }
                }
                Err(_) => undetermined.push(x.value_upper_bound()),
            }
        }
        let Some((pivot, vmax)) = best else {
            return Err(if undetermined.is_empty() {
                MvfError::ZeroVector
            } else {
                MvfError::PrecisionLoss("no coordinate with known value".into())
            });
        };
        if undetermined.iter().any(|u| *u >= vmax) {
            return Err(MvfError::PrecisionLoss("pivot not determined at working precision".into()));
        }
        let f = raw[pivot].field().clone();
        let inv = raw[pivot].inv()?;
        let coords = raw
            .iter()
            .enumerate()
            .map(|(i, x)| if i == pivot { FieldElement::one(&f) } else { x.mul(&inv) })
            .collect();
        Ok(ProjPoint { coords, pivot })
    }

    /// `x ↦ [x : 1]`.
    pub fn finite(x: &FieldElement) -> ProjPoint {
        ProjPoint::normalize(vec![x.clone(), FieldElement::one(x.field())]).expect("second coordinate is 1")
    }

    /// `∞ = [1 : 0]`.
    pub fn infinity(f: &Field) -> ProjPoint {
        ProjPoint { coords: vec![FieldElement::one(f), FieldElement::zero(f)], pivot: 0 }
    }

    pub fn zero(f: &Field) -> ProjPoint {
        ProjPoint { coords: vec![FieldElement::zero(f), FieldElement::one(f)], pivot: 1 }
    }

    pub fn one(f: &Field) -> ProjPoint {
        ProjPoint::finite(&FieldElement::one(f))
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    /// On ℙ¹: the point `∞`.
    pub fn is_infinity(&self) -> bool {
        self.dim() == 1 && self.coords[1].is_zero_at_precision() && self.pivot == 0
    }

    /// On ℙ¹: the affine coordinate `a/a*`, or `None` at `∞`.
    pub fn to_element(&self) -> Option<FieldElement> {
        assert_eq!(self.dim(), 1);
        if self.is_infinity() {
            return None;
        }
        Some(if self.pivot == 1 { self.coords[0].clone() } else { self.coords[1].inv().ok()? })
    }

    /// `‖x‖ = |a_0|`.
    pub fn norm(&self) -> AbsValue {
        self.coords[0].value_upper_bound()
    }

    /// `‖x*‖ = |a_1|` on ℙ¹.
    pub fn star(&self) -> AbsValue {
        self.coords[1].value_upper_bound()
    }

    /// Unnormalized representative scaled by `u`.
    pub fn scaled(&self, u: &FieldElement) -> Vec<FieldElement> {
        self.coords.iter().map(|x| x.mul(u)).collect()
    }

    pub fn with_field(&self, f: &Field) -> ProjPoint {
        ProjPoint { coords: self.coords.iter().map(|x| x.with_field(f)).collect(), pivot: self.pivot }
    }

    /// Apply a coordinatewise map and renormalize.
    pub fn map_coords(&self, g: impl Fn(&FieldElement) -> FieldElement) -> Result<ProjPoint> {
        ProjPoint::normalize(self.coords.iter().map(g).collect())
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, o: &ProjPoint) -> bool {
        self.pivot == o.pivot && self.coords == o.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// `d(a, b) = max_{i<j} |a_i b_j − a_j b_i|`.
pub fn proj_distance(a: &ProjPoint, b: &ProjPoint) -> Result<AbsValue> {
    if a.dim() != b.dim() {
        return Err(MvfError::InvalidInput("points of different dimension".into()));
    }
    let mut d = a.field().zero_value();
    for i in 0..=a.dim() {
        for j in i + 1..=a.dim() {
            let m = a.coords[i].mul(&b.coords[j]).sub(&a.coords[j].mul(&b.coords[i]));
            d = std::cmp::max(d, m.value()?);
        }
    }
    Ok(d)
}

/// Segre embedding, `(a ⊗ b)_{i+(n+1)j} = a_i b_j`.
pub fn segre(a: &ProjPoint, b: &ProjPoint) -> ProjPoint {
    let n = a.dim();
    let mut raw = Vec::with_capacity((n + 1) * (b.dim() + 1));
    for bj in &b.coords {
        for ai in &a.coords {
            raw.push(ai.mul(bj));
        }
    }
    debug_assert_eq!(raw.len(), (n + 1) * (b.dim() + 1));
    ProjPoint::normalize(raw).expect("product of pivots is a unit")
}

fn determinant(m: &[Vec<i64>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> =
        m.iter().map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect()).collect();
    let mut det = Q::one();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if r != c {
            a.swap(r, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

/// Action of a determinant-one integer matrix.
pub fn sl_action(m: &[Vec<i64>], a: &ProjPoint) -> Result<ProjPoint> {
    let n = a.dim() + 1;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(MvfError::InvalidInput(format!("matrix must be {n}x{n}")));
    }
    if !determinant(m).is_one() {
        return Err(MvfError::InvalidInput("matrix determinant is not 1".into()));
    }
    let f = a.field().clone();
    let raw = m
        .iter()
        .map(|row| {
            row.iter()
                .zip(&a.coords)
                .fold(FieldElement::zero(&f), |acc, (&k, x)| acc.add(&FieldElement::from_int(&f, k).mul(x)))
        })
        .collect();
    ProjPoint::normalize(raw)
}

/// `‖[a]‖ = |a_0|`.
pub fn proj_norm(a: &ProjPoint) -> AbsValue {
    a.norm()
}

/// `[a_0 : a_1] ↦ [a_1 : a_0]`.
pub fn invert(x: &ProjPoint) -> ProjPoint {
    assert_eq!(x.dim(), 1);
    ProjPoint::normalize(vec![x.coords[1].clone(), x.coords[0].clone()]).expect("normalized input")
}

/// `x ↦ xⁿ` with `0⁰ = ∞⁰ = 1`, `∞ⁿ = ∞` and `0ⁿ = ∞` for `n < 0`.
pub fn power(x: &ProjPoint, n: i64) -> ProjPoint {
    assert_eq!(x.dim(), 1);
    if n == 0 {
        return ProjPoint::one(x.field());
    }
    let y = if n < 0 { invert(x) } else { x.clone() };
    let k = n.unsigned_abs() as i64;
    let raw = y.coords.iter().map(|c| c.powi(k).expect("nonnegative power")).collect();
    ProjPoint::normalize(raw).expect("pivot power is 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::value::Base;
    use crate::{q, qi};

    fn qp5() -> Field {
        FieldDescriptor::qp(5)
    }

    fn pt(f: &Field, xs: &[i64]) -> ProjPoint {
        ProjPoint::normalize(xs.iter().map(|&x| FieldElement::from_int(f, x)).collect()).unwrap()
    }

    fn el(f: &Field, n: i64) -> FieldElement {
        FieldElement::from_int(f, n)
    }

    #[test]
    fn normalization_examples() {
        let f = qp5();
        let a = pt(&f, &[5, 25]);
        assert_eq!(a.coords(), &[el(&f, 1), el(&f, 5)]);
        let z = pt(&f, &[0, 7]);
        assert_eq!(z, ProjPoint::zero(&f));
        let t = pt(&f, &[1, 1, 5]);
        assert_eq!(t.pivot(), 0);
        assert_eq!(t.coords(), &[el(&f, 1), el(&f, 1), el(&f, 5)]);
        assert!(matches!(ProjPoint::normalize(vec![el(&f, 0), el(&f, 0)]), Err(MvfError::ZeroVector)));
    }

    #[test]
    fn distance_examples() {
        let f = qp5();
        let b = Base::inverse_of(5);
        let x = pt(&f, &[1, 1]);
        assert!(proj_distance(&x, &x).unwrap().is_zero());
        assert!(proj_distance(&ProjPoint::infinity(&f), &ProjPoint::zero(&f)).unwrap().is_one());
        assert_eq!(proj_distance(&x, &pt(&f, &[6, 1])).unwrap(), AbsValue::pow(b, qi(1)));
    }

    #[test]
    fn segre_examples() {
        let f = qp5();
        let inf = ProjPoint::infinity(&f);
        assert_eq!(segre(&inf, &inf), pt(&f, &[1, 0, 0, 0]));
        assert_eq!(segre(&pt(&f, &[1, 5]), &pt(&f, &[1, 1])), pt(&f, &[1, 5, 1, 5]));
    }

    #[test]
    fn sl_examples() {
        let f = qp5();
        let x = ProjPoint::finite(&el(&f, 5));
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(sl_action(&id, &x).unwrap(), x);
        let w = vec![vec![0, 1], vec![-1, 0]];
        assert_eq!(sl_action(&w, &x).unwrap(), pt(&f, &[1, -5]));
        assert!(sl_action(&[vec![2, 0], vec![0, 1]], &x).is_err());
    }

    #[test]
    fn norm_and_star() {
        let f = qp5();
        assert!(proj_norm(&ProjPoint::infinity(&f)).is_one());
        assert!(proj_norm(&ProjPoint::zero(&f)).is_zero());
        let x = ProjPoint::finite(&FieldElement::from_rational(&f, q(1, 5)));
        assert_eq!(x, pt(&f, &[1, 5]));
        assert!(x.norm().is_one());
        assert_eq!(x.star(), AbsValue::pow(Base::inverse_of(5), qi(1)));
    }

    #[test]
    fn inversion_and_powers() {
        let f = qp5();
        assert_eq!(invert(&ProjPoint::infinity(&f)), ProjPoint::zero(&f));
        let x = pt(&f, &[1, 5]);
        let y = invert(&x);
        assert_eq!(y.pivot(), 1);
        assert_eq!(y, pt(&f, &[5, 1]));
        assert_eq!(invert(&y), x);
        assert_eq!(power(&ProjPoint::infinity(&f), 0), ProjPoint::one(&f));
        assert_eq!(power(&ProjPoint::zero(&f), -2), ProjPoint::infinity(&f));
        assert_eq!(power(&pt(&f, &[5, 1]), 2), pt(&f, &[25, 1]));
    }
}
