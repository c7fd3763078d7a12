use num_bigint::BigInt;

use super::{homogenize, HomPoly, Poly};
use crate::error::{MvfError, Result};
use crate::field::{Field, FieldElement};
use crate::projective::ProjPoint;
use crate::value::AbsValue;

/// `[1, x, x², …, x^d]`.
fn powers(x: &FieldElement, d: u32) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::one(x.field())];
    for k in 1..=d as usize {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

fn check_points(n: usize, pts: &[ProjPoint]) -> Result<Field> {
    if pts.len() != n {
        return Err(MvfError::InvalidInput(format!("expected {n} points, got {}", pts.len())));
    }
    if pts.iter().any(|p| p.dim() != 1) {
        return Err(MvfError::InvalidInput("arguments must lie on the projective line".into()));
    }
    match pts.first() {
        Some(p) => Ok(p.field().clone()),
        None => Err(MvfError::InvalidInput("no points to evaluate at".into())),
    }
}

/// `Q(ā, ā*)` at the stored representatives.
pub fn eval_hom(qh: &HomPoly, pts: &[ProjPoint]) -> Result<FieldElement> {
    let f = check_points(qh.npairs(), pts)?;
    let coords: Vec<Vec<FieldElement>> = pts.iter().map(|p| p.coords().to_vec()).collect();
    Ok(eval_hom_raw(qh, &f, &coords))
}

/// `[n₀d₁ : n₁d₀]` for `[n₀/d₀ : n₁/d₁]`, and the scalar `d₀d₁` applied.
fn cleared(p: &ProjPoint) -> Option<(Vec<FieldElement>, FieldElement)> {
    let (a0, a1) = (p.coord(0), p.coord(1));
    let (s0, s1) = (a0.split_fraction(), a1.split_fraction());
    if s0.is_none() && s1.is_none() {
        return None;
    }
    let one = || FieldElement::one(p.field());
    let (n0, d0) = s0.unwrap_or_else(|| (a0.clone(), one()));
    let (n1, d1) = s1.unwrap_or_else(|| (a1.clone(), one()));
    Some((vec![n0.mul(&d1), n1.mul(&d0)], d0.mul(&d1)))
}

/// `Q(ā, ā*)` on raw coordinate pairs.
fn eval_hom_raw(qh: &HomPoly, f: &Field, coords: &[Vec<FieldElement>]) -> FieldElement {
    let n = qh.npairs();
    let deg = qh.pair_degrees();
    let mut tables = Vec::with_capacity(2 * n);
    for k in 0..2 {
        for i in 0..n {
            tables.push(powers(&coords[i][k], deg[i]));
        }
    }
    let mut acc = FieldElement::zero(f);
    for (e, c) in qh.terms() {
        let mut m = FieldElement::from_rational(f, crate::Q::from_integer(c.clone()));
        for (slot, &k) in e.iter().enumerate() {
            if k > 0 {
                m = m.mul(&tables[slot][k as usize]);
            }
        }
        acc = acc.add(&m);
    }
    acc
}

/// `‖Q(ā)‖` for a bihomogeneous `Q`. Rational-function coordinates are
/// first scaled to polynomials, `|Q(λā)| = |Q(ā)|·∏|λ_i|^{d_i}`, which keeps
/// the arithmetic free of growing denominators.
pub fn eval_norm_hom(qh: &HomPoly, pts: &[ProjPoint]) -> Result<AbsValue> {
    let f = check_points(qh.npairs(), pts)?;
    let deg = qh.pair_degrees();
    let mut coords = Vec::with_capacity(pts.len());
    let mut scale = f.one_value();
    for (p, &d) in pts.iter().zip(deg.iter()) {
        match cleared(p) {
            Some((c, lambda)) if d > 0 => {
                scale = scale.mul(&lambda.value()?.powi(d as i64));
                coords.push(c);
            }
            _ => coords.push(p.coords().to_vec()),
        }
    }
    let v = eval_hom_raw(qh, &f, &coords).value()?;
    Ok(v.div(&scale).expect("nonzero denominators"))
}

/// `‖P(ā)‖ = |P^h(ā, ā*)|`.
pub fn eval_norm(p: &Poly, pts: &[ProjPoint]) -> Result<AbsValue> {
    if p.is_zero() {
        let f = check_points(p.nvars(), pts)?;
        return Ok(f.zero_value());
    }
    eval_norm_hom(&homogenize(p), pts)
}

/// `‖P*(ā)‖ = ∏ ‖a_i*‖^{deg_{X_i} P}`.
pub fn eval_star(p: &Poly, pts: &[ProjPoint]) -> Result<AbsValue> {
    let f = check_points(p.nvars(), pts)?;
    let d = p.degree_vector();
    let mut acc = f.one_value();
    for (pt, &k) in pts.iter().zip(&d) {
        if k > 0 {
            acc = acc.mul(&pt.star().powi(k as i64));
        }
    }
    Ok(acc)
}

/// `P(ā)` for affine arguments.
pub fn eval_affine(p: &Poly, xs: &[FieldElement]) -> Result<FieldElement> {
    let f = xs.first().map(|x| x.field().clone()).ok_or_else(|| MvfError::InvalidInput("no arguments".into()))?;
    let d = p.degree_vector();
    let tables: Vec<Vec<FieldElement>> = xs.iter().zip(&d).map(|(x, &k)| powers(x, k)).collect();
    let mut acc = FieldElement::zero(&f);
    for (e, c) in p.terms() {
        let mut m = FieldElement::from_rational(&f, crate::Q::from_integer(BigInt::clone(c)));
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                m = m.mul(&tables[i][k as usize]);
            }
        }
        acc = acc.add(&m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::qi;
    use crate::value::Base;

    fn pt(f: &Field, a: i64, b: i64) -> ProjPoint {
        ProjPoint::normalize(vec![FieldElement::from_int(f, a), FieldElement::from_int(f, b)]).unwrap()
    }

    #[test]
    fn norm_examples() {
        let f = FieldDescriptor::qp(5);
        let x_minus_y = Poly::var(2, 0).sub(&Poly::var(2, 1));
        // |1 - 5| = |-4| = 1 in Q_5; the points 1 and 6 are close
        assert!(eval_norm(&x_minus_y, &[pt(&f, 1, 1), pt(&f, 5, 1)]).unwrap().is_one());
        let v = eval_norm(&x_minus_y, &[pt(&f, 1, 1), pt(&f, 6, 1)]).unwrap();
        assert_eq!(v, AbsValue::pow(Base::inverse_of(5), qi(1)));
        let w = eval_norm(&x_minus_y, &[ProjPoint::infinity(&f), pt(&f, 5, 1)]).unwrap();
        assert!(w.is_one());
        assert!(eval_norm(&Poly::zero(2), &[pt(&f, 1, 1), pt(&f, 2, 3)]).unwrap().is_zero());
    }

    #[test]
    fn star_examples() {
        let f = FieldDescriptor::qp(5);
        let sq = Poly::var(1, 0).pow(2);
        assert!(eval_star(&sq, &[ProjPoint::infinity(&f)]).unwrap().is_zero());
        let xy = Poly::var(2, 0).mul(&Poly::var(2, 1));
        assert!(eval_star(&xy, &[pt(&f, 5, 1), pt(&f, 1, 1)]).unwrap().is_one());
        assert!(eval_star(&Poly::constant(1, 4), &[pt(&f, 3, 1)]).unwrap().is_one());
    }

    #[test]
    fn affine_factorization() {
        let f = FieldDescriptor::qp(5);
        let p = Poly::var(1, 0).pow(2).add(&Poly::constant(1, 1));
        let x = FieldElement::from_rational(&f, crate::q(1, 5));
        let lhs = eval_norm(&p, &[ProjPoint::finite(&x)]).unwrap();
        let rhs = eval_affine(&p, &[x.clone()]).unwrap().value().unwrap().mul(&eval_star(&p, &[ProjPoint::finite(&x)]).unwrap());
        assert_eq!(lhs, rhs);
    }
}
