//! Signs, the formally real check, the predicates `⟨P⟩` and `⟨P⟩^Sq`, the
//! OMVF suite, real closed witnesses and the ordered extension step.

use num_traits::{Signed, Zero};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::roots_univariate;
use crate::error::{MvfError, Result};
use crate::field::{is_square, random_element, sqrt, Backend, Field, FieldElement, SquareAnswer};
use crate::gen::{random_in_ball, random_point, random_poly};
use crate::logic::{max_gap, rational_window, AxiomReport, Violation};
use crate::poly::{eval_hom, eval_norm, eval_star, homogenize, Poly, UniPoly};
use crate::projective::{power, proj_distance, ProjPoint};
use crate::real::Real;
use crate::rng::{label, split, Rng};
use crate::value::AbsValue;
use crate::Q;

fn require_ordered(f: &Field) -> Result<()> {
    if f.ordered() {
        Ok(())
    } else {
        Err(MvfError::UnorderedField)
    }
}

/// Sign of the leading coefficient (series) or of the rational (trivial).
pub fn sign(x: &FieldElement) -> Result<i8> {
    require_ordered(x.field())?;
    if x.is_zero() {
        return Ok(0);
    }
    let c = x.leading_coeff()?;
    Ok(if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    })
}

/// `P(x̄)` as a point of ℙ¹: `[P^h(ā) : ∏ a_i*^{d_i}]`.
pub fn value_point(field: &Field, p: &Poly, pts: &[ProjPoint]) -> Result<ProjPoint> {
    if p.is_zero() {
        return Ok(ProjPoint::zero(field));
    }
    let d = p.degree_vector();
    let mut star = FieldElement::one(field);
    for (pt, &k) in pts.iter().zip(&d) {
        if k > 0 {
            star = star.mul(&pt.coord(1).powi(k as i64)?);
        }
    }
    let top = if pts.is_empty() {
        let c = p.terms().next().map(|(_, c)| c.clone()).unwrap_or_default();
        FieldElement::from_rational(field, Q::from_integer(c))
    } else {
        eval_hom(&homogenize(p), pts)?
    };
    ProjPoint::normalize(vec![top, star])
}

/// `⟨P(x̄)⟩`: zero when `P(x̄) ≥ 0` or `P(x̄) = ∞`, else `‖P‖ ∧ ‖P*‖`.
pub fn angle_pred(field: &Field, p: &Poly, pts: &[ProjPoint]) -> Result<AbsValue> {
    require_ordered(field)?;
    let s = if pts.is_empty() { field.one_value() } else { eval_star(p, pts)? };
    if s.is_zero() {
        return Ok(field.zero_value());
    }
    let v = value_point(field, p, pts)?;
    let x = v.to_element().expect("finite value");
    if sign(&x)? >= 0 {
        return Ok(field.zero_value());
    }
    let n = if pts.is_empty() { x.value()? } else { eval_norm(p, pts)? };
    Ok(n.min(s))
}

/// `⟨[a_0 : … : a_n]⟩`: zero when `a_0 a_1 ≥ 0`, else `|a_0| ∧ |a_1|`.
pub fn angle_proj(a: &ProjPoint) -> Result<AbsValue> {
    require_ordered(a.field())?;
    let (a0, a1) = (a.coord(0), a.coord(1));
    if sign(&a0.mul(a1))? >= 0 {
        return Ok(a.field().zero_value());
    }
    Ok(a0.value()?.min(a1.value()?))
}

#[derive(Clone, Debug)]
pub enum SqWitness {
    Zero,
    Infinity,
    Root(FieldElement),
}

impl SqWitness {
    pub fn point(&self, field: &Field) -> ProjPoint {
        match self {
            SqWitness::Zero => ProjPoint::zero(field),
            SqWitness::Infinity => ProjPoint::infinity(field),
            SqWitness::Root(y) => ProjPoint::finite(y),
        }
    }
}

impl std::fmt::Display for SqWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SqWitness::Zero => f.write_str("0"),
            SqWitness::Infinity => f.write_str("inf"),
            SqWitness::Root(y) => write!(f, "{y}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SqAnswer {
    pub value: AbsValue,
    pub witness: SqWitness,
}

/// `⟨P(x̄)⟩^Sq = inf_y ‖P(x̄) − y²‖` in closed form, with a witness `y`.
pub fn sq_pred(field: &Field, p: &Poly, pts: &[ProjPoint]) -> Result<SqAnswer> {
    let s = if pts.is_empty() { field.one_value() } else { eval_star(p, pts)? };
    if s.is_zero() {
        return Ok(SqAnswer { value: field.zero_value(), witness: SqWitness::Infinity });
    }
    let x = value_point(field, p, pts)?.to_element().expect("finite value");
    match is_square(&x) {
        SquareAnswer::Yes => Ok(SqAnswer { value: field.zero_value(), witness: SqWitness::Root(sqrt(&x)?) }),
        SquareAnswer::Unresolved => Err(MvfError::Unresolved(format!("square class of {x}"))),
        SquareAnswer::No => {
            let n = if pts.is_empty() { x.value()? } else { eval_norm(p, pts)? };
            let witness = if n <= s { SqWitness::Zero } else { SqWitness::Infinity };
            Ok(SqAnswer { value: n.min(s.clone()), witness })
        }
    }
}

/// `‖x − y²‖` as a distance on ℙ¹.
pub fn sq_distance(x: &ProjPoint, y: &ProjPoint) -> Result<AbsValue> {
    proj_distance(x, &power(y, 2))
}

fn fixed_fr_tuples() -> Vec<Vec<i64>> {
    vec![vec![1, 2], vec![1, 1], vec![0], vec![1, 1, 1], vec![3, 4]]
}

fn sum_of_squares(n: usize) -> Poly {
    (0..n).fold(Poly::zero(n), |acc, i| acc.add(&Poly::var(n, i).pow(2)))
}

/// Check `|Σ x_i²| = ⋁ |x_i|²` on tuples and its homogenized ℙ¹ form
/// `‖Σ x_i²‖ = ⋁ ‖x_i‖² ∏_{j≠i} ‖x_j*‖²`.
pub fn fr_check(field: &Field, trials: usize, seed: u64) -> AxiomReport {
    let fixed: Vec<Vec<ProjPoint>> = fixed_fr_tuples()
        .into_iter()
        .map(|t| t.into_iter().map(|n| ProjPoint::finite(&FieldElement::from_int(field, n))).collect())
        .collect();
    let random: Vec<Vec<ProjPoint>> = (0..trials)
        .map(|i| {
            let mut rng = split(seed, &[label("FR"), i as u64]);
            let n = rng.gen_range(1..=4);
            (0..n).map(|_| random_point(field, &mut rng)).collect()
        })
        .collect();
    let results: Vec<Result<Option<Violation>>> = fixed.iter().chain(&random).collect::<Vec<_>>().par_iter().map(|x| fr_instance(field, x)).collect();
    let mut violations = Vec::new();
    for r in results {
        match r {
            Ok(Some(v)) => violations.push(v),
            Ok(None) => {}
            Err(e) => violations.push(Violation::error(&e)),
        }
    }
    let max_gap = max_gap(&violations);
    AxiomReport {
        axiom: "FR".into(),
        field: field.spec_string(),
        trials: fixed.len() + trials,
        seed,
        max_gap,
        violations,
        certified: 0,
        achieved_inf: None,
        note: Some(format!("{} fixed integer tuples precede the random ones", fixed.len())),
    }
}

fn fr_instance(field: &Field, x: &[ProjPoint]) -> Result<Option<Violation>> {
    let n = x.len();
    let lhs = eval_norm(&sum_of_squares(n), x)?;
    let mut rhs = field.zero_value();
    for i in 0..n {
        let mut term = x[i].norm().powi(2);
        for (j, xj) in x.iter().enumerate() {
            if j != i {
                term = term.mul(&xj.star().powi(2));
            }
        }
        rhs = rhs.max(term);
    }
    // field-level form on the finite coordinates
    let finite: Vec<FieldElement> = x.iter().filter_map(|p| p.to_element()).collect();
    let (fl, fr) = if finite.len() == n {
        let s = finite.iter().fold(FieldElement::zero(field), |acc, y| acc.add(&y.mul(y)));
        let m = finite.iter().map(|y| y.value().map(|v| v.powi(2))).collect::<Result<Vec<_>>>()?;
        (Some(s.value()?), Some(m.into_iter().fold(field.zero_value(), |a, b| a.max(b))))
    } else {
        (None, None)
    };
    let inst = || x.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    if lhs != rhs {
        return Ok(Some(Violation::between(inst(), lhs, rhs)));
    }
    if let (Some(a), Some(b)) = (fl, fr) {
        if a != b {
            return Ok(Some(Violation::between(format!("field form at {}", inst()), a, b)));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmvfAxiom {
    Tot,
    AS,
    CA,
    CM,
}

impl OmvfAxiom {
    pub const ALL: [OmvfAxiom; 4] = [OmvfAxiom::Tot, OmvfAxiom::AS, OmvfAxiom::CA, OmvfAxiom::CM];

    pub fn name(self) -> &'static str {
        match self {
            OmvfAxiom::Tot => "Tot",
            OmvfAxiom::AS => "AS",
            OmvfAxiom::CA => "CA",
            OmvfAxiom::CM => "CM",
        }
    }
}

const OMVF_VARS: usize = 2;

fn omvf_trial(field: &Field, ax: OmvfAxiom, rng: &mut Rng) -> Result<Option<Violation>> {
    let x: Vec<ProjPoint> = (0..OMVF_VARS).map(|_| random_point(field, rng)).collect();
    let p = random_poly(OMVF_VARS, 2, 3, rng);
    // a quarter of the Q's cancel the top of P to exercise degree drops
    let qq = if rng.gen_bool(0.25) { p.neg().add(&random_poly(OMVF_VARS, 1, 2, rng)) } else { random_poly(OMVF_VARS, 2, 3, rng) };
    let ang = |r: &Poly| angle_pred(field, r, &x);
    let star = |r: &Poly| if r.is_zero() { Ok(field.one_value()) } else { eval_star(r, &x) };
    let (lhs, rhs, ok, inst) = match ax {
        OmvfAxiom::Tot => {
            let l = ang(&p)?.min(ang(&p.neg())?);
            let ok = l.is_zero();
            (l, field.zero_value(), ok, format!("P = {p}"))
        }
        OmvfAxiom::AS => {
            let l = ang(&p)?.max(ang(&p.neg())?);
            let r = eval_norm(&p, &x)?.min(star(&p)?);
            let ok = l == r;
            (l, r, ok, format!("P = {p}"))
        }
        OmvfAxiom::CA => {
            let s = p.add(&qq);
            let l = ang(&s)?.mul(&star(&p)?).mul(&star(&qq)?);
            let r = ang(&qq)?.mul(&star(&p)?).mul(&star(&s)?).max(ang(&p)?.mul(&star(&qq)?).mul(&star(&s)?));
            let ok = l <= r;
            (l, r, ok, format!("P = {p}, Q = {qq}"))
        }
        OmvfAxiom::CM => {
            let l = ang(&p.mul(&qq).neg())?;
            let r = ang(&p)?.mul(&ang(&qq)?);
            let ok = l >= r;
            (l, r, ok, format!("P = {p}, Q = {qq}"))
        }
    };
    if ok {
        return Ok(None);
    }
    let at = x.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    Ok(Some(Violation::between(format!("{inst} at {at}"), lhs, rhs)))
}

/// Tot, AS, CA and CM over sampled polynomials and points.
pub fn omvf_suite(field: &Field, trials: usize, seed: u64) -> Result<Vec<AxiomReport>> {
    require_ordered(field)?;
    Ok(OmvfAxiom::ALL
        .iter()
        .map(|&ax| {
            let res: Vec<Result<Option<Violation>>> = (0..trials)
                .into_par_iter()
                .map(|i| omvf_trial(field, ax, &mut split(seed, &[label(ax.name()), i as u64])))
                .collect();
            let mut violations = Vec::new();
            for r in res {
                match r {
                    Ok(Some(v)) => violations.push(v),
                    Ok(None) => {}
                    Err(e) => violations.push(Violation::error(&e)),
                }
            }
            AxiomReport {
                axiom: ax.name().into(),
                field: field.spec_string(),
                trials,
                seed,
                max_gap: max_gap(&violations),
                violations,
                certified: 0,
                achieved_inf: None,
                note: if ax == OmvfAxiom::CA { Some("stars taken at each polynomial's own degree".into()) } else { None },
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct RcmvfInstance {
    pub axiom: String,
    pub input: String,
    pub witness: String,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RcmvfReport {
    pub field: String,
    pub instances: Vec<RcmvfInstance>,
    /// Witnesses whose residual is not zero at precision.
    pub failures: usize,
    /// Inputs with no witness in the backend (its coefficient field is not real closed).
    pub unresolved: usize,
}

/// `y` with `y⁴ = x²`.
pub fn fourth_root_of_square(x: &FieldElement) -> Result<FieldElement> {
    let a = if sign(x)? < 0 { x.neg() } else { x.clone() };
    sqrt(&a)
}

/// A root of a monic odd-degree polynomial.
pub fn odd_root(p: &UniPoly) -> Result<FieldElement> {
    let deg = p.degree().unwrap_or(0);
    if deg % 2 == 0 || !p.is_monic() {
        return Err(MvfError::InvalidInput("expected a monic odd-degree polynomial".into()));
    }
    let found = roots_univariate(p)?;
    found
        .roots
        .into_iter()
        .map(|(r, _)| r)
        .find(|r| p.eval(r).is_zero_at_precision())
        .ok_or_else(|| MvfError::RootNotFound(format!("{p}")))
}

/// Witnesses for the real closed axioms on sampled inputs.
pub fn rcmvf_demo(field: &Field, samples: usize, seed: u64) -> Result<RcmvfReport> {
    require_ordered(field)?;
    if !matches!(field.backend, Backend::Puiseux { .. } | Backend::Laurent { .. }) {
        return Err(MvfError::InvalidInput("root finding needs a series backend".into()));
    }
    let mut instances = Vec::new();
    let (mut failures, mut unresolved) = (0, 0);
    let mut rng = split(seed, &[label("RCMVF")]);
    let t = FieldElement::uniformizer_pow(field, &Q::from_integer(1.into()))?;
    let mut xs = vec![FieldElement::zero(field), t.clone(), t.mul(&t)];
    xs.extend((0..samples).map(|_| random_element(field, &mut rng)));
    for x in &xs {
        let res = fourth_root_of_square(x).and_then(|y| {
            let r = x.mul(x).sub(&y.powi(4)?);
            Ok((y, r))
        });
        let (w, r) = match res {
            Ok((y, r)) => {
                failures += !r.is_zero_at_precision() as usize;
                (y.to_string(), residual_str(&r))
            }
            Err(e) => {
                unresolved += 1;
                (format!("unresolved: {e}"), "-".into())
            }
        };
        instances.push(RcmvfInstance { axiom: "x^2 - y^4".into(), input: x.to_string(), witness: w, residual: r });
    }
    let mut polys = vec![UniPoly::new(field, vec![t.neg(), FieldElement::zero(field), FieldElement::zero(field), FieldElement::one(field)])];
    for _ in 0..samples {
        let deg = [1, 3][rng.gen_range(0..2)];
        let mut cs: Vec<FieldElement> = (0..deg).map(|_| random_in_ball(field, &mut rng)).collect();
        cs.push(FieldElement::one(field));
        polys.push(UniPoly::new(field, cs));
    }
    for p in &polys {
        let (w, r) = match odd_root(p) {
            Ok(y) => (y.to_string(), residual_str(&p.eval(&y))),
            Err(e) => {
                unresolved += 1;
                (format!("unresolved: {e}"), "-".into())
            }
        };
        instances.push(RcmvfInstance { axiom: "odd root".into(), input: p.to_string(), witness: w, residual: r });
    }
    Ok(RcmvfReport { field: field.spec_string(), instances, failures, unresolved })
}

fn residual_str(r: &FieldElement) -> String {
    match r.value() {
        Ok(v) => v.render(),
        Err(_) => format!("< {}", r.value_upper_bound().render()),
    }
}

#[derive(Clone, Debug)]
pub struct OrderedStep {
    pub d: FieldElement,
    /// Cell of `c`: `None` below `a_0`, `Some(i)` between `a_i` and `a_{i+1}` or above the last.
    pub cell: Option<usize>,
    pub deviations: Vec<Real>,
    pub sides_match: bool,
    pub satisfied: bool,
}

/// Positive element whose value is `|x|`, or within `ε` of it.
fn positive_of_value(target: &Field, v: &AbsValue, eps: &Q) -> Result<FieldElement> {
    if v.is_zero() {
        return Ok(FieldElement::zero(target));
    }
    if let Some(e) = target.exponent_of_value(v) {
        return FieldElement::uniformizer_pow(target, &e);
    }
    let lo = Real::trunc_sub(Real::from(v.clone()), Real::from(eps.clone()));
    let hi = Real::from(v.clone()).add(Real::from(eps.clone()));
    let (lo, hi) = rational_window(&lo, &hi)?;
    crate::field::element_in_window(target, &lo, &hi)
}

/// `d'` in `(0, 1)` matching `c'` in `(0, 1)` against `0` and `1`.
fn unit_cell(target: &Field, c: &FieldElement, eps: &Q) -> Result<FieldElement> {
    let one = FieldElement::one(target);
    let vc = c.value()?;
    let v1 = one.sub(c).value()?;
    if !vc.is_one() && v1.is_one() {
        return positive_of_value(target, &vc, eps);
    }
    if !v1.is_one() {
        // |1 − c| < 1: solve for 1 − c and reflect
        let d = positive_of_value(target, &v1, eps)?;
        return Ok(one.sub(&d));
    }
    // |c| = |1 − c| = 1
    if !target.discrete_values() && !target.is_trivial() {
        let lo = (Q::from_integer(1.into()) - eps).max(Q::zero());
        if let Ok(d) = crate::field::element_in_window(target, &lo, &Q::from_integer(1.into())) {
            return Ok(d);
        }
    }
    Ok(FieldElement::from_rational(target, crate::q(1, 2)))
}

/// Find `d` on the same side of each `θa_i` as `c` is of `a_i`, with
/// `||d − θa_i| − |c − a_i|| < ε`. `A` must be strictly increasing.
pub fn extend_step_ordered(
    a: &[FieldElement],
    theta: &dyn Fn(&FieldElement) -> FieldElement,
    target: &Field,
    c: &FieldElement,
    eps: &Q,
) -> Result<OrderedStep> {
    require_ordered(c.field())?;
    require_ordered(target)?;
    if !eps.is_positive() {
        return Err(MvfError::InvalidInput("tolerance must be positive".into()));
    }
    for w in a.windows(2) {
        if sign(&w[1].sub(&w[0]))? <= 0 {
            return Err(MvfError::InvalidInput("A must be strictly increasing".into()));
        }
    }
    if a.iter().any(|x| x.sub(c).is_zero()) {
        return Err(MvfError::InvalidInput("c lies in A".into()));
    }
    let images: Vec<FieldElement> = a.iter().map(theta).collect();
    let (d, cell) = if a.is_empty() {
        let s = sign(c)?;
        let d = positive_of_value(target, &c.value()?, eps)?;
        (if s < 0 { d.neg() } else { d }, None)
    } else {
        let below = a.iter().take_while(|x| sign(&c.sub(x)).map(|s| s > 0).unwrap_or(false)).count();
        if below == 0 {
            let d0 = positive_of_value(target, &a[0].sub(c).value()?, eps)?;
            (images[0].sub(&d0), None)
        } else if below == a.len() {
            let d0 = positive_of_value(target, &c.sub(&a[below - 1]).value()?, eps)?;
            (images[below - 1].add(&d0), Some(below - 1))
        } else {
            let i = below - 1;
            let w = a[i + 1].sub(&a[i]);
            let cc = c.sub(&a[i]).checked_div(&w)?;
            // distances in the unit cell are scaled by |a_{i+1} − a_i|
            let cell_eps = Real::from(eps.clone()).div(Real::from(w.value()?)).lower_bound();
            let dd = unit_cell(target, &cc, &cell_eps)?;
            (images[i].add(&dd.mul(&images[i + 1].sub(&images[i]))), Some(i))
        }
    };
    let mut deviations = Vec::with_capacity(a.len());
    let mut sides_match = true;
    for (ai, bi) in a.iter().zip(&images) {
        deviations.push(Real::abs_diff(c.sub(ai).value()?, d.sub(bi).value()?));
        sides_match &= sign(&c.sub(ai))? == sign(&d.sub(bi))?;
    }
    let e = Real::from(eps.clone());
    let satisfied = sides_match && deviations.iter().all(|x| x.lt(&e));
    Ok(OrderedStep { d, cell, deviations, sides_match, satisfied })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::rng::seeded;
    use crate::value::Base;
    use crate::{q, qi};

    fn lq() -> Field {
        FieldDescriptor::laurent_q()
    }

    fn t(f: &Field, e: i64) -> FieldElement {
        FieldElement::uniformizer_pow(f, &qi(e)).unwrap()
    }

    #[test]
    fn signs() {
        let f = lq();
        assert_eq!(sign(&t(&f, 2)).unwrap(), 1);
        assert_eq!(sign(&t(&f, 1).neg()).unwrap(), -1);
        assert_eq!(sign(&FieldElement::zero(&f)).unwrap(), 0);
        assert_eq!(sign(&FieldElement::one(&FieldDescriptor::qp(5))), Err(MvfError::UnorderedField));
    }

    #[test]
    fn angle_examples() {
        let f = lq();
        let x = Poly::var(1, 0);
        assert!(angle_pred(&f, &x, &[ProjPoint::infinity(&f)]).unwrap().is_zero());
        assert!(angle_pred(&f, &x, &[ProjPoint::finite(&t(&f, 2))]).unwrap().is_zero());
        let v = angle_pred(&f, &x, &[ProjPoint::finite(&t(&f, 1).neg())]).unwrap();
        assert_eq!(v, AbsValue::pow(Base::half(), qi(1)));
        // ⟨x⟩ = ⟨1/x⟩ for negative x
        let y = FieldElement::from_int(&f, -3).add(&t(&f, 1));
        let a = angle_pred(&f, &x, &[ProjPoint::finite(&y)]).unwrap();
        let b = angle_pred(&f, &x, &[ProjPoint::finite(&y.inv().unwrap())]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sq_examples() {
        let f = FieldDescriptor::qp(5);
        let five = sq_pred(&f, &Poly::constant(0, 5), &[]).unwrap();
        assert_eq!(five.value, AbsValue::pow(Base::inverse_of(5), qi(1)));
        assert!(matches!(five.witness, SqWitness::Zero));
        let four = sq_pred(&f, &Poly::constant(0, 4), &[]).unwrap();
        assert!(four.value.is_zero());
        match four.witness {
            SqWitness::Root(y) => assert!(y.mul(&y).equals(&FieldElement::from_int(&f, 4))),
            w => panic!("{w}"),
        }
        let inf = sq_pred(&f, &Poly::var(1, 0), &[ProjPoint::infinity(&f)]).unwrap();
        assert!(inf.value.is_zero() && matches!(inf.witness, SqWitness::Infinity));
    }

    #[test]
    fn sq_witness_attains_and_samples_never_beat_it() {
        let f = lq();
        let mut rng = seeded(11);
        let p = Poly::var(1, 0).sub(&Poly::constant(1, 2));
        for _ in 0..20 {
            let x = [random_point(&f, &mut rng)];
            let ans = sq_pred(&f, &p, &x).unwrap();
            let v = value_point(&f, &p, &x).unwrap();
            let at = sq_distance(&v, &ans.witness.point(&f)).unwrap();
            match &ans.witness {
                // series square roots are known to working precision
                SqWitness::Root(_) => assert!(at <= f.value_of_exponent(&qi(f.prec as i64))),
                _ => assert_eq!(at, ans.value),
            }
            for _ in 0..10 {
                let y = random_point(&f, &mut rng);
                assert!(sq_distance(&v, &y).unwrap() >= ans.value);
            }
        }
    }

    #[test]
    fn fr_discriminates() {
        assert!(fr_check(&lq(), 200, 1).violations.is_empty());
        assert!(fr_check(&FieldDescriptor::trivial(), 200, 1).violations.is_empty());
        let r5 = fr_check(&FieldDescriptor::qp(5), 50, 1);
        assert!(r5.violations.iter().any(|v| v.instance == "[1 : 1], [1 : 1/2]" && v.lhs.starts_with("1/5") && v.rhs.starts_with("1")));
        assert!(!fr_check(&FieldDescriptor::qp(2), 50, 1).violations.is_empty());
    }

    #[test]
    fn omvf_on_laurent() {
        for r in omvf_suite(&lq(), 200, 3).unwrap() {
            assert!(r.violations.is_empty(), "{r:?}");
        }
        assert!(omvf_suite(&FieldDescriptor::qp(5), 1, 1).is_err());
    }

    #[test]
    fn rcmvf_witnesses() {
        let f = FieldDescriptor::puiseux_q();
        let x = t(&f, 2);
        let y = fourth_root_of_square(&x).unwrap();
        assert!(y.powi(4).unwrap().equals(&x.mul(&x)));
        let p = UniPoly::new(&f, vec![t(&f, 1).neg(), FieldElement::zero(&f), FieldElement::zero(&f), FieldElement::one(&f)]);
        let r = odd_root(&p).unwrap();
        assert!(r.equals(&FieldElement::uniformizer_pow(&f, &q(1, 3)).unwrap()));
        assert!(fourth_root_of_square(&FieldElement::zero(&f)).unwrap().is_zero());
        let rep = rcmvf_demo(&f, 6, 4).unwrap();
        assert_eq!(rep.failures, 0, "{:?}", rep.instances);
        // t and t^2 have witnesses t^{1/2} and t
        assert_eq!(rep.instances[1].witness, "t^(1/2)");
        assert_eq!(rep.instances[2].witness, "t");
    }

    #[test]
    fn ordered_step_examples() {
        let f = lq();
        let a = [FieldElement::zero(&f), FieldElement::one(&f)];
        let id = |x: &FieldElement| x.clone();
        let s = extend_step_ordered(&a, &id, &f, &t(&f, 1), &q(1, 10)).unwrap();
        assert!(s.satisfied);
        assert_eq!(s.cell, Some(0));
        assert!(FieldElement::one(&f).sub(&s.d).value().unwrap().is_one());
        // above A
        let s = extend_step_ordered(&a, &id, &f, &FieldElement::from_int(&f, 5), &q(1, 10)).unwrap();
        assert!(s.satisfied);
        let e = extend_step_ordered(&[], &id, &f, &t(&f, 1).neg(), &q(1, 10)).unwrap();
        assert_eq!(sign(&e.d).unwrap(), -1);
        // |c| = |1 − c| = 1
        let s = extend_step_ordered(&a, &id, &f, &FieldElement::from_rational(&f, q(1, 3)), &q(1, 10)).unwrap();
        assert!(s.satisfied);
    }

    #[test]
    fn ordered_step_random() {
        let f = FieldDescriptor::puiseux_q();
        let mut rng = seeded(21);
        let id = |x: &FieldElement| x.clone();
        for _ in 0..100 {
            let n = rng.gen_range(0..5);
            let mut a: Vec<FieldElement> = (0..n).map(|_| random_element(&f, &mut rng)).collect();
            a.sort_by(|x, y| sign(&x.sub(y)).unwrap().cmp(&0));
            a.dedup_by(|x, y| x.sub(y).is_zero());
            let c = random_element(&f, &mut rng);
            if a.iter().any(|x| x.sub(&c).is_zero()) {
                continue;
            }
            let s = extend_step_ordered(&a, &id, &f, &c, &q(1, 20)).unwrap();
            let shown: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            assert!(s.satisfied, "A = {shown:?}, c = {c}, d = {}, dev = {:?}, sides {}", s.d, s.deviations.iter().map(|x| x.render()).collect::<Vec<_>>(), s.sides_match);
        }
    }
}
