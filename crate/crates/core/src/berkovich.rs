//! Closed balls and spheres over ℙ¹, their Hausdorff distance, and the
//! Gauss seminorm `|P(α)| = ⋁ r^k |b_k|` of the type a sphere determines.

use std::fmt;

use crate::error::{MvfError, Result};
use crate::field::{element_in_window, Field, FieldElement};
use crate::poly::UniPoly;
use crate::projective::{invert, proj_distance, ProjPoint};
use crate::value::AbsValue;

/// Closed ball `B(center, radius)` for the projective metric.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: ProjPoint,
    pub radius: AbsValue,
}

impl Ball {
    pub fn new(center: ProjPoint, radius: AbsValue) -> Result<Ball> {
        if center.dim() != 1 {
            return Err(MvfError::InvalidInput("ball centers live in P^1".into()));
        }
        if radius > center.field().one_value() {
            return Err(MvfError::InvalidInput(format!("radius {} exceeds 1", radius.render())));
        }
        Ok(Ball { center, radius })
    }

    pub fn field(&self) -> &Field {
        self.center.field()
    }

    pub fn contains_point(&self, x: &ProjPoint) -> Result<bool> {
        Ok(proj_distance(&self.center, x)? <= self.radius)
    }

    /// An equal ball whose center has value at most 1 whenever one exists.
    fn finite_chart(&self) -> (Ball, bool) {
        let c = &self.center;
        if c.to_element().map(|e| e.value().map(|v| v <= c.field().one_value()).unwrap_or(false)).unwrap_or(false) {
            return (self.clone(), false);
        }
        if self.radius.is_one() {
            // the whole line
            return (Ball { center: ProjPoint::zero(c.field()), radius: self.radius.clone() }, false);
        }
        (Ball { center: invert(c), radius: self.radius.clone() }, true)
    }
}

impl PartialEq for Ball {
    fn eq(&self, o: &Ball) -> bool {
        self.radius == o.radius && proj_distance(&self.center, &o.center).map(|d| d <= self.radius).unwrap_or(false)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius.render())
    }
}

/// `B ⊇ B′`: `rad(B′) ≤ rad(B)` and `d(centers) ≤ rad(B)`.
pub fn ball_contains(b: &Ball, b2: &Ball) -> Result<bool> {
    Ok(b2.radius <= b.radius && proj_distance(&b.center, &b2.center)? <= b.radius)
}

/// A finite strictly decreasing chain of balls; the class is decided by
/// the last ball.
#[derive(Clone, Debug)]
pub struct Sphere {
    chain: Vec<Ball>,
}

impl Sphere {
    pub fn new(chain: Vec<Ball>) -> Result<Sphere> {
        if chain.is_empty() {
            return Err(MvfError::InvalidInput("empty chain".into()));
        }
        for w in chain.windows(2) {
            if !(w[1].radius < w[0].radius && ball_contains(&w[0], &w[1])?) {
                return Err(MvfError::InvalidInput(format!("{} does not strictly contain {}", w[0], w[1])));
            }
        }
        Ok(Sphere { chain })
    }

    pub fn ball(b: Ball) -> Sphere {
        Sphere { chain: vec![b] }
    }

    pub fn chain(&self) -> &[Ball] {
        &self.chain
    }

    pub fn last(&self) -> &Ball {
        self.chain.last().expect("nonempty")
    }

    /// `rad(S)`, the radius of the last ball.
    pub fn radius(&self) -> &AbsValue {
        &self.last().radius
    }

    pub fn field(&self) -> &Field {
        self.last().field()
    }
}

impl PartialEq for Sphere {
    fn eq(&self, o: &Sphere) -> bool {
        self.last() == o.last()
    }
}

impl fmt::Display for Sphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" ⊃ "))
    }
}

/// `d_H` of two balls by the case split: equal, strictly nested, disjoint.
pub fn hausdorff_cases(b: &Ball, b2: &Ball) -> Result<AbsValue> {
    if b == b2 {
        return Ok(b.field().zero_value());
    }
    if ball_contains(b, b2)? {
        return Ok(b.radius.clone());
    }
    if ball_contains(b2, b)? {
        return Ok(b2.radius.clone());
    }
    // disjoint balls in an ultrametric space are at the distance of their centers
    proj_distance(&b.center, &b2.center)
}

/// `0` for equal last balls, else `rad ∨ rad′ ∨ d(centers)`.
pub fn hausdorff(s: &Sphere, s2: &Sphere) -> Result<AbsValue> {
    let (b, b2) = (s.last(), s2.last());
    let closed = if b == b2 {
        b.field().zero_value()
    } else {
        AbsValue::max(&b.radius, &b2.radius).max(proj_distance(&b.center, &b2.center)?)
    };
    let cases = hausdorff_cases(b, b2)?;
    assert_eq!(closed, cases, "closed form disagrees with the case analysis on {b}, {b2}");
    Ok(closed)
}

/// `⋁_k r^k |b_k|` with `P = Σ b_k (X − a)^k`.
fn gauss_at(p: &UniPoly, a: &FieldElement, r: &AbsValue) -> Result<AbsValue> {
    let shifted = p.taylor_shift(a);
    let mut g = p.field().zero_value();
    for (k, b) in shifted.coeffs().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let rk = if k == 0 { p.field().one_value() } else { r.powi(k as i64) };
        g = g.max(rk.mul(&b.value()?));
    }
    Ok(g)
}

/// `|P(α)|` for `α` realizing the type of `S`. Balls around points of
/// value `> 1` are moved by `x ↦ x⁻¹`, under which
/// `|P(α)| = |P̃(β)| / |β|^d` with `P̃` the reversed polynomial.
pub fn gauss_norm(s: &Sphere, p: &UniPoly) -> Result<AbsValue> {
    let f = s.field();
    if p.field() != f {
        return Err(MvfError::FieldMismatch);
    }
    let (b, inverted) = s.last().finite_chart();
    let a = b.center.to_element().expect("finite chart");
    if !inverted {
        return gauss_at(p, &a, &b.radius);
    }
    let Some(d) = p.degree() else {
        return Ok(f.zero_value());
    };
    let rev = UniPoly::new(f, p.coeffs().iter().rev().cloned().collect());
    let num = gauss_at(&rev, &a, &b.radius)?;
    let beta = gauss_at(&UniPoly::linear(&FieldElement::zero(f)), &a, &b.radius)?;
    if d == 0 {
        return Ok(num);
    }
    num.div(&beta.powi(d as i64))
        .ok_or_else(|| MvfError::DegenerateInstance("the type is the point ∞, where P has a pole".into()))
}

/// `‖x − a‖` forced by `p_S`: `rad(S) ∨ d(a, center)`.
pub fn type_predicate(s: &Sphere, a: &ProjPoint) -> Result<AbsValue> {
    Ok(s.radius().max(&proj_distance(a, &s.last().center)?))
}

/// `k` spheres of radius `r` inside `B`, pairwise at Hausdorff distance
/// `sep > r`, with residue-distinct centers.
#[derive(Clone, Debug)]
pub struct FarFamily {
    pub spheres: Vec<Sphere>,
    pub separation: AbsValue,
}

pub fn far_family(b: &Ball, r: &AbsValue, k: usize) -> Result<FarFamily> {
    let f = b.field().clone();
    if *r >= b.radius {
        return Err(MvfError::InvalidInput("sub-radius must be smaller than the ball".into()));
    }
    if let Some(q) = f.residue_size() {
        if (q as usize) < k {
            return Err(MvfError::Unsatisfiable(format!("residue field has {q} elements, {k} requested")));
        }
    }
    let (fin, inverted) = b.finite_chart();
    let c = fin.center.to_element().expect("finite chart");
    // a step of value in (r, rad B]
    let e = match f.exponent_of_value(&b.radius) {
        Some(x) => FieldElement::uniformizer_pow(&f, &x)?,
        None => {
            let lo = r.to_rational().unwrap_or_else(|| crate::Real::from(r.clone()).upper_bound());
            let hi = crate::Real::from(b.radius.clone()).lower_bound();
            element_in_window(&f, &lo, &hi)?
        }
    };
    let separation = e.value()?;
    let spheres = (0..k)
        .map(|j| {
            let x = c.add(&FieldElement::from_int(&f, j as i64).mul(&e));
            let pt = ProjPoint::finite(&x);
            let pt = if inverted { invert(&pt) } else { pt };
            let small = Ball::new(pt, r.clone())?;
            if k == 1 {
                Ok(Sphere::ball(small))
            } else {
                Sphere::new(vec![b.clone(), small])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FarFamily { spheres, separation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::gen::{random_in_ball, random_point};
    use crate::rng::{label, split};
    use crate::value::Base;
    use crate::{q, qi};

    fn fin(f: &Field, x: i64) -> ProjPoint {
        ProjPoint::finite(&FieldElement::from_int(f, x))
    }

    fn half(e: i64) -> AbsValue {
        AbsValue::pow(Base::half(), qi(e))
    }

    #[test]
    fn containment_examples() {
        let l = FieldDescriptor::laurent_q();
        let b = Ball::new(fin(&l, 0), half(2)).unwrap();
        assert!(ball_contains(&b, &Ball::new(fin(&l, 0), half(3)).unwrap()).unwrap());
        let f = FieldDescriptor::qp(5);
        let v = |e| AbsValue::pow(Base::inverse_of(5), qi(e));
        let b0 = Ball::new(fin(&f, 0), v(1)).unwrap();
        assert!(!ball_contains(&Ball::new(fin(&f, 0), v(1)).unwrap(), &Ball::new(fin(&f, 1), v(1)).unwrap()).unwrap());
        let b5 = Ball::new(fin(&f, 5), v(1)).unwrap();
        assert!(ball_contains(&b0, &b5).unwrap());
        assert_eq!(b0, b5);
    }

    #[test]
    fn hausdorff_examples() {
        let l = FieldDescriptor::laurent_q();
        let s = |c: i64, r: i64| Sphere::ball(Ball::new(fin(&l, c), half(r)).unwrap());
        assert!(hausdorff(&s(0, 2), &s(0, 2)).unwrap().is_zero());
        assert_eq!(hausdorff(&s(0, 2), &s(0, 3)).unwrap(), half(2));
        assert!(hausdorff(&s(0, 2), &s(1, 2)).unwrap().is_one());
        let chain = Sphere::new(vec![Ball::new(fin(&l, 0), half(1)).unwrap(), Ball::new(fin(&l, 0), half(3)).unwrap()]).unwrap();
        assert_eq!(chain, s(0, 3));
        assert!(Sphere::new(vec![Ball::new(fin(&l, 0), half(3)).unwrap(), Ball::new(fin(&l, 0), half(1)).unwrap()]).is_err());
    }

    #[test]
    fn gauss_examples() {
        // radius (1/3)^{3/4}: r^2 < 1/3, so |3| dominates
        let f = FieldDescriptor::qp(3);
        let r = AbsValue::pow(Base::inverse_of(3), q(3, 4));
        let s = Sphere::ball(Ball::new(fin(&f, 0), r.clone()).unwrap());
        let p = UniPoly::from_rationals(&f, &[qi(3), qi(0), qi(1)]);
        assert_eq!(gauss_norm(&s, &p).unwrap(), AbsValue::pow(Base::inverse_of(3), qi(1)));
        let point = Sphere::ball(Ball::new(fin(&f, 6), f.zero_value()).unwrap());
        assert_eq!(gauss_norm(&point, &p).unwrap(), p.eval(&FieldElement::from_int(&f, 6)).value().unwrap());
        // P = X − a on B(b, r)
        let l = FieldDescriptor::laurent_q();
        let t = FieldElement::monomial(&l, qi(1), qi(1)).unwrap();
        let a = FieldElement::one(&l).add(&t);
        let s = Sphere::ball(Ball::new(fin(&l, 1), half(3)).unwrap());
        assert_eq!(gauss_norm(&s, &UniPoly::linear(&a)).unwrap(), half(1));
        let s = Sphere::ball(Ball::new(fin(&l, 1), half(1)).unwrap());
        assert_eq!(gauss_norm(&s, &UniPoly::linear(&a.add(&t))).unwrap(), half(1));
    }

    #[test]
    fn gauss_through_inversion() {
        let l = FieldDescriptor::laurent_q();
        let tinv = FieldElement::monomial(&l, qi(1), qi(-1)).unwrap();
        // B(1/t, |t|^2): α = 1/β with |β − t| ≤ |t|^2, so |α| = 2
        let s = Sphere::ball(Ball::new(ProjPoint::finite(&tinv), half(2)).unwrap());
        let x = UniPoly::linear(&FieldElement::zero(&l));
        assert_eq!(gauss_norm(&s, &x).unwrap(), half(-1));
        let xm = UniPoly::linear(&tinv);
        // α − 1/t = (t − β)/(tβ): |t|^2 / |t|^2
        assert!(gauss_norm(&s, &xm).unwrap().is_one());
        let at_inf = Sphere::ball(Ball::new(ProjPoint::infinity(&l), l.zero_value()).unwrap());
        assert!(gauss_norm(&at_inf, &x).is_err());
        assert!(gauss_norm(&at_inf, &UniPoly::from_rationals(&l, &[qi(7)])).unwrap().is_one());
    }

    #[test]
    fn type_predicate_examples() {
        let l = FieldDescriptor::laurent_q();
        let s = Sphere::ball(Ball::new(fin(&l, 0), half(2)).unwrap());
        assert_eq!(type_predicate(&s, &fin(&l, 0)).unwrap(), half(2));
        assert!(type_predicate(&s, &fin(&l, 1)).unwrap().is_one());
        assert!(type_predicate(&s, &ProjPoint::infinity(&l)).unwrap().is_one());
    }

    #[test]
    fn far_family_examples() {
        let f = FieldDescriptor::qp(5);
        let unit = Ball::new(fin(&f, 0), f.one_value()).unwrap();
        let r = AbsValue::pow(Base::inverse_of(5), qi(2));
        let fam = far_family(&unit, &r, 5).unwrap();
        assert!(fam.separation.is_one());
        for (i, s) in fam.spheres.iter().enumerate() {
            assert_eq!(s.radius(), &r);
            assert_eq!(s.last().center, fin(&f, i as i64));
            for s2 in &fam.spheres[i + 1..] {
                assert!(hausdorff(s, s2).unwrap().is_one());
            }
        }
        assert!(matches!(far_family(&unit, &r, 6), Err(MvfError::Unsatisfiable(_))));
        assert_eq!(far_family(&unit, &r, 1).unwrap().spheres.len(), 1);
        let l = FieldDescriptor::laurent_q();
        let fam = far_family(&Ball::new(fin(&l, 0), l.one_value()).unwrap(), &half(3), 100).unwrap();
        assert_eq!(fam.spheres.len(), 100);
        assert!(hausdorff(&fam.spheres[0], &fam.spheres[99]).unwrap().is_one());
        // dense radius between 1/4 and 1/2 on Puiseux
        let p = FieldDescriptor::puiseux_q();
        let b = Ball::new(fin(&p, 0), AbsValue::pow(Base::half(), q(1, 3))).unwrap();
        let fam = far_family(&b, &half(2), 3).unwrap();
        assert_eq!(hausdorff(&fam.spheres[0], &fam.spheres[2]).unwrap(), fam.separation);
    }

    /// Spheres with exact-valued radii on Laurent(ℚ).
    fn random_sphere(f: &Field, seed: u64, i: u64) -> Sphere {
        let mut rng = split(seed, &[label("sphere"), i]);
        let c = random_point(f, &mut rng);
        let r = half((i % 4) as i64);
        let outer = Ball::new(c.clone(), half(0)).unwrap();
        if r.is_one() {
            Sphere::ball(outer)
        } else {
            Sphere::new(vec![outer, Ball::new(c, r).unwrap()]).unwrap()
        }
    }

    fn random_upoly(f: &Field, seed: u64, i: u64) -> UniPoly {
        let mut rng = split(seed, &[label("upoly"), i]);
        let d = 1 + (i % 3) as usize;
        UniPoly::new(f, (0..=d).map(|_| crate::field::random_element(f, &mut rng)).collect())
    }

    #[test]
    fn gauss_multiplicative() {
        let l = FieldDescriptor::laurent_q();
        for i in 0..200 {
            let s = random_sphere(&l, 11, i);
            let (p, q) = (random_upoly(&l, 12, i), random_upoly(&l, 13, i));
            match (gauss_norm(&s, &p), gauss_norm(&s, &q), gauss_norm(&s, &p.mul(&q))) {
                (Ok(a), Ok(b), Ok(c)) => assert_eq!(a.mul(&b), c, "{s}"),
                (a, b, c) => assert!(a.is_err() || b.is_err() || c.is_err()),
            }
        }
    }

    #[test]
    fn gauss_is_a_saturated_upper_bound() {
        let l = FieldDescriptor::laurent_q();
        let mut attained = 0;
        let trials = 100;
        for i in 0..trials {
            let mut rng = split(21, &[label("sat"), i]);
            let c = random_in_ball(&l, &mut rng);
            let k = (i % 3) as i64;
            let s = Sphere::ball(Ball::new(ProjPoint::finite(&c), half(k)).unwrap());
            let p = random_upoly(&l, 22, i);
            let g = gauss_norm(&s, &p).unwrap();
            let tk = FieldElement::uniformizer_pow(&l, &qi(k)).unwrap();
            let mut best = l.zero_value();
            for _ in 0..200 {
                let x = c.add(&tk.mul(&random_in_ball(&l, &mut rng)));
                let v = p.eval(&x).value().unwrap();
                assert!(v <= g);
                best = best.max(v);
            }
            attained += (best == g) as usize;
        }
        assert!(attained * 10 >= trials as usize * 9, "{attained}");
    }

    #[test]
    fn hausdorff_ultrametric_and_types_separate() {
        let l = FieldDescriptor::laurent_q();
        let fam: Vec<Sphere> = (0..50).map(|i| random_sphere(&l, 31, i)).collect();
        let tests: Vec<ProjPoint> = fam.iter().map(|s| s.last().center.clone()).collect();
        for a in &fam {
            for b in &fam {
                let dab = hausdorff(a, b).unwrap();
                for c in fam.iter().step_by(5) {
                    assert!(hausdorff(a, c).unwrap() <= dab.clone().max(hausdorff(b, c).unwrap()));
                }
                if a != b {
                    let differ = tests.iter().any(|x| type_predicate(a, x).unwrap() != type_predicate(b, x).unwrap());
                    assert!(differ, "{a} vs {b}");
                }
            }
        }
    }
}
