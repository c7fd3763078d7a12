//! Pseudo ε-perturbations: measuring ε on a sample, `ε′ = ε(1−2ε)^{−3}`,
//! the two lemmas, and distance preservation above a radius `r`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MvfError, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{eval_norm, Poly};
use crate::projective::{invert, proj_distance, ProjPoint};
use crate::real::Real;
use crate::value::AbsValue;
use crate::Q;

/// A bijection `θ` between two models, applied pointwise on ℙ¹.
#[derive(Clone, Debug)]
pub enum PerturbationMap {
    Identity,
    /// Same elements, valuation `|·|^α`.
    Rescale(Q),
    /// `t ↦ λt` on Laurent elements.
    Relabel(Q),
    /// `x ↦ x + π^k·[π^m]x` on series elements, `k < m`.
    Jitter { k: Q, m: Q },
    /// A finite table `a ↦ θa`.
    ExplicitPairs(Vec<(ProjPoint, ProjPoint)>),
    /// `θ′ : x ↦ θ(x⁻¹)⁻¹`.
    Inverted(Box<PerturbationMap>),
}

impl fmt::Display for PerturbationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerturbationMap::Identity => write!(f, "identity"),
            PerturbationMap::Rescale(a) => write!(f, "rescale:{a}"),
            PerturbationMap::Relabel(l) => write!(f, "relabel:{l}"),
            PerturbationMap::Jitter { k, m } => write!(f, "jitter:{k}:{m}"),
            PerturbationMap::ExplicitPairs(p) => write!(f, "pairs({})", p.len()),
            PerturbationMap::Inverted(t) => write!(f, "inverted({t})"),
        }
    }
}

impl PerturbationMap {
    pub fn target(&self, source: &Field) -> Field {
        match self {
            PerturbationMap::Rescale(a) => source.rescaled(a),
            PerturbationMap::ExplicitPairs(p) if !p.is_empty() => p[0].1.field().clone(),
            PerturbationMap::Inverted(t) => t.target(source),
            _ => source.clone(),
        }
    }

    pub fn apply(&self, x: &ProjPoint) -> Result<ProjPoint> {
        match self {
            PerturbationMap::Identity => Ok(x.clone()),
            PerturbationMap::Rescale(a) => Ok(x.with_field(&x.field().rescaled(a))),
            PerturbationMap::Relabel(l) => x.map_coords(|c| c.relabel(l)),
            PerturbationMap::Jitter { k, m } => {
                let Some(e) = x.to_element() else {
                    return Ok(x.clone());
                };
                Ok(ProjPoint::finite(&jitter(&e, k, m)?))
            }
            PerturbationMap::ExplicitPairs(p) => p
                .iter()
                .find(|(a, _)| a == x)
                .map(|(_, b)| b.clone())
                .ok_or_else(|| MvfError::InvalidInput(format!("{x} is outside the table's domain"))),
            PerturbationMap::Inverted(t) => Ok(invert(&t.apply(&invert(x))?)),
        }
    }

    pub fn apply_elem(&self, x: &FieldElement) -> Result<FieldElement> {
        self.apply(&ProjPoint::finite(x))?
            .to_element()
            .ok_or_else(|| MvfError::InvalidInput(format!("θ sends {x} to ∞")))
    }

    /// True when `θ` is, by construction, an isomorphism on a substructure
    /// whose value group is dense.
    pub fn fixes_dense_substructure(&self, source: &Field) -> bool {
        match self {
            PerturbationMap::Identity | PerturbationMap::Relabel(_) => !source.discrete_values() && !source.is_trivial(),
            PerturbationMap::Rescale(a) => a.is_one() && !source.discrete_values() && !source.is_trivial(),
            PerturbationMap::Inverted(t) => t.fixes_dense_substructure(source),
            _ => false,
        }
    }
}

/// `x + π^k · c_m(x)` with `c_m(x)` the coefficient of `π^m` in `x`.
fn jitter(x: &FieldElement, k: &Q, m: &Q) -> Result<FieldElement> {
    let f = x.field();
    let (terms, prec) = x
        .series_terms()
        .ok_or_else(|| MvfError::InvalidInput("jitter needs a series backend".into()))?;
    if prec.as_ref().map(|p| p <= m).unwrap_or(false) {
        return Err(MvfError::PrecisionLoss(format!("coefficient of t^{m} unknown")));
    }
    let c = terms.iter().find(|(e, _)| e == m).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
    if c.is_zero() {
        return Ok(x.clone());
    }
    Ok(x.add(&FieldElement::monomial(f, c, k.clone())?))
}

/// `ε(1−2ε)^{−3}`, defined for `ε < 1/2`.
pub fn eps_prime(eps: &Q) -> Option<Q> {
    let d = Q::one() - Q::from_integer(2.into()) * eps;
    if !d.is_positive() {
        return None;
    }
    Some(eps / (&d * &d * &d))
}

/// Largest `ε` (to 2^{−60}) with `ε′ ≤ r − ε`, by bisection on the
/// monotone constraint; the returned value satisfies it exactly.
pub fn eps_for_radius(r: &Q) -> Result<Q> {
    if !r.is_positive() || r > &Q::one() {
        return Err(MvfError::InvalidInput("radius must lie in (0, 1]".into()));
    }
    let ok = |e: &Q| eps_prime(e).map(|ep| ep <= r - e).unwrap_or(false);
    let mut lo = Q::zero();
    let mut hi = r.clone().min(Q::new(1.into(), 2.into()));
    for _ in 0..60 {
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The five families of the definition, as atoms on ℙ¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "|a|")]
    Norm,
    #[serde(rename = "|a*|")]
    Star,
    #[serde(rename = "|a-b-c|")]
    Diff,
    #[serde(rename = "|ab-c|")]
    Prod,
    #[serde(rename = "|ab-bc-ac|")]
    Sym,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Norm, Family::Star, Family::Diff, Family::Prod, Family::Sym];

    pub fn name(self) -> &'static str {
        match self {
            Family::Norm => "|a|",
            Family::Star => "|a*|",
            Family::Diff => "|a-b-c|",
            Family::Prod => "|ab-c|",
            Family::Sym => "|ab-bc-ac|",
        }
    }

    fn arity(self) -> usize {
        match self {
            Family::Norm | Family::Star => 1,
            _ => 3,
        }
    }

    fn poly(self) -> Poly {
        let x = |i| Poly::var(3, i);
        match self {
            Family::Norm => Poly::var(1, 0),
            Family::Star => Poly::one(1),
            Family::Diff => x(0).sub(&x(1)).sub(&x(2)),
            Family::Prod => x(0).mul(&x(1)).sub(&x(2)),
            Family::Sym => x(0).mul(&x(1)).sub(&x(1).mul(&x(2))).sub(&x(0).mul(&x(2))),
        }
    }

    fn eval(self, p: &Poly, pts: &[ProjPoint]) -> Result<AbsValue> {
        match self {
            Family::Star => Ok(pts[0].star()),
            _ => eval_norm(p, pts),
        }
    }
}

/// `|u − v|` as a certified upper bound (exact 0 on equal values).
fn deviation(u: &AbsValue, v: &AbsValue) -> (Real, Q) {
    if u == v {
        return (Real::zero(), Q::zero());
    }
    let d = Real::abs_diff(u.clone(), v.clone());
    let ub = d.upper_bound();
    (d, ub)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyWorst {
    pub family: Family,
    pub instance: String,
    pub source: String,
    pub target: String,
    pub deviation: String,
    #[serde(skip)]
    pub bound: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub map: String,
    pub sample_size: usize,
    /// Upper bound for the supremum of all deviations.
    #[serde(serialize_with = "crate::ser_q")]
    pub eps: Q,
    pub eps_approx: f64,
    #[serde(serialize_with = "crate::ser_opt_q")]
    pub eps_prime: Option<Q>,
    pub families: Vec<FamilyWorst>,
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

type ValueKey = (crate::value::Base, Option<Q>);

fn key(v: &AbsValue) -> ValueKey {
    (v.base(), v.exponent().cloned())
}

/// Supremum of the five deviation families over all tuples from `sample`.
pub fn measure_pseudo_eps(theta: &PerturbationMap, sample: &[ProjPoint]) -> Result<PerturbationReport> {
    let images: Vec<ProjPoint> = sample.iter().map(|x| theta.apply(x)).collect::<Result<_>>()?;
    // few distinct value pairs occur, and bounding each one is the costly part
    let memo: Mutex<HashMap<(ValueKey, ValueKey), Q>> = Mutex::new(HashMap::new());
    let bound = |u: &AbsValue, v: &AbsValue| -> Q {
        if u == v {
            return Q::zero();
        }
        let k = (key(u), key(v));
        if let Some(b) = memo.lock().expect("memo").get(&k) {
            return b.clone();
        }
        let b = deviation(u, v).1;
        memo.lock().expect("memo").insert(k, b.clone());
        b
    };
    let mut families = Vec::new();
    let mut eps = Q::zero();
    for fam in Family::ALL {
        let p = fam.poly();
        let idx = tuples(sample.len(), fam.arity());
        let results: Vec<Result<Option<(Q, usize)>>> = idx
            .par_iter()
            .enumerate()
            .map(|(n, t)| {
                let src: Vec<ProjPoint> = t.iter().map(|&i| sample[i].clone()).collect();
                let tgt: Vec<ProjPoint> = t.iter().map(|&i| images[i].clone()).collect();
                let ub = bound(&fam.eval(&p, &src)?, &fam.eval(&p, &tgt)?);
                Ok((!ub.is_zero()).then_some((ub, n)))
            })
            .collect();
        let mut worst: Option<(Q, usize)> = None;
        for r in results {
            if let Some((ub, n)) = r? {
                if worst.as_ref().map(|b| ub > b.0).unwrap_or(true) {
                    worst = Some((ub, n));
                }
            }
        }
        if let Some((ub, n)) = worst {
            let src: Vec<ProjPoint> = idx[n].iter().map(|&i| sample[i].clone()).collect();
            let tgt: Vec<ProjPoint> = idx[n].iter().map(|&i| images[i].clone()).collect();
            let (u, v) = (fam.eval(&p, &src)?, fam.eval(&p, &tgt)?);
            let instance = src.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            eps = eps.max(ub.clone());
            families.push(FamilyWorst {
                family: fam,
                instance,
                source: u.render(),
                target: v.render(),
                deviation: deviation(&u, &v).0.render(),
                bound: ub,
            });
        }
    }
    Ok(PerturbationReport {
        map: theta.to_string(),
        sample_size: sample.len(),
        eps_approx: crate::real::q_to_f64(&eps),
        eps_prime: eps_prime(&eps),
        eps,
        families,
    })
}

fn finite(xs: &[&FieldElement]) -> Vec<ProjPoint> {
    xs.iter().map(|x| ProjPoint::finite(x)).collect()
}

/// `(1 − ε)^{−1}` as an exact rational.
fn inv_one_minus(eps: &Q) -> Q {
    Q::one() / (Q::one() - eps)
}

fn value_le(v: &AbsValue, t: &Q) -> bool {
    Real::from(v.clone()).le(&Real::from(t.clone()))
}

/// Both sides of a lemma's conclusion `lhs < rhs`, with a certified
/// lower bound on `rhs − lhs`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaOutcome {
    pub lhs: String,
    pub rhs: String,
    #[serde(serialize_with = "crate::ser_q")]
    pub margin: Q,
    pub holds: bool,
}

fn outcome(lhs: Real, rhs: Real) -> LemmaOutcome {
    let holds = lhs.lt(&rhs);
    let margin = rhs.clone().sub(lhs.clone()).lower_bound();
    LemmaOutcome { lhs: lhs.render(), rhs: rhs.render(), margin, holds }
}

fn need(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(MvfError::HypothesisFailure(what.into()))
    }
}

fn eps_prime_checked(eps: &Q) -> Result<Q> {
    eps_prime(eps).ok_or_else(|| MvfError::HypothesisFailure("ε ≥ 1/2".into()))
}

/// `|θa − θb − θ(a−b)| < ε′` for `|a|, |b| ≤ (1−ε)^{−1}`.
pub fn prelemma_check(theta: &PerturbationMap, a: &FieldElement, b: &FieldElement, eps: &Q) -> Result<LemmaOutcome> {
    let ep = eps_prime_checked(eps)?;
    let bound = inv_one_minus(eps);
    need(value_le(&a.value()?, &bound) && value_le(&b.value()?, &bound), "|a|, |b| ≤ (1-ε)^-1")?;
    let (ta, tb, tab) = (theta.apply_elem(a)?, theta.apply_elem(b)?, theta.apply_elem(&a.sub(b))?);
    Ok(outcome(Real::from(ta.sub(&tb).sub(&tab).value()?), Real::from(ep)))
}

/// The sample the first lemma's proof evaluates the families on.
pub fn lemma1_closure(a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Result<Vec<ProjPoint>> {
    let e = a.sub(b).checked_div(c)?;
    Ok(finite(&[&FieldElement::zero(a.field()), a, b, c, &a.sub(b), &e]))
}

/// `|(θa−θb)/θc − θ((a−b)/c)| < ε′/r` under
/// `|a|,|b| ≤ (1−ε)^{−1}` and `r ≤ |a−b| < |c| = |θc| < |θa−θb|`.
pub fn lemma1_check(
    theta: &PerturbationMap,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    r: &Q,
    eps: &Q,
) -> Result<LemmaOutcome> {
    let ep = eps_prime_checked(eps)?;
    need(r.is_positive(), "r > 0")?;
    let bound = inv_one_minus(eps);
    need(value_le(&a.value()?, &bound) && value_le(&b.value()?, &bound), "|a|, |b| ≤ (1-ε)^-1")?;
    let (ta, tb, tc) = (theta.apply_elem(a)?, theta.apply_elem(b)?, theta.apply_elem(c)?);
    let dab = a.sub(b).value()?;
    let tdab = ta.sub(&tb).value()?;
    need(Real::from(r.clone()).le(&Real::from(dab.clone())), "r ≤ |a-b|")?;
    need(dab < c.value()?, "|a-b| < |c|")?;
    need(c.value()? == tc.value()?, "|c| = |θc|")?;
    need(tc.value()? < tdab, "|θc| < |θa-θb|")?;
    let e = a.sub(b).checked_div(c)?;
    let lhs = ta.sub(&tb).checked_div(&tc)?.sub(&theta.apply_elem(&e)?).value()?;
    Ok(outcome(Real::from(lhs), Real::from(ep / r)))
}

/// The second lemma: `|θa| = |b|` and `|θ(a²) − b²| < |b|²` under
/// `|a| ≤ 1`, `√ε′ < |b|` and `|θa − b| < |b|`.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Outcome {
    pub values_equal: bool,
    pub square: LemmaOutcome,
}

pub fn lemma2_check(theta: &PerturbationMap, a: &FieldElement, b: &FieldElement, eps: &Q) -> Result<Lemma2Outcome> {
    let ep = eps_prime_checked(eps)?;
    let bv = b.value()?;
    need(a.value()? <= a.field().one_value(), "|a| ≤ 1")?;
    need(Real::from(ep).lt(&Real::from(bv.powi(2))), "√ε′ < |b|")?;
    let ta = theta.apply_elem(a)?;
    need(ta.sub(b).value()? < bv, "|θa - b| < |b|")?;
    let values_equal = ta.value()? == bv;
    let lhs = theta.apply_elem(&a.mul(a))?.sub(&b.mul(b)).value()?;
    Ok(Lemma2Outcome { values_equal, square: outcome(Real::from(lhs), Real::from(bv.powi(2))) })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub n: u32,
    pub hypotheses: bool,
    pub values_equal: bool,
    pub conclusion: bool,
}

/// Lemma 2 applied to `(e^{2^n}, B^{2^n})` for `n < steps`, stopping at
/// the first step whose hypotheses fail.
pub fn squaring_chain(theta: &PerturbationMap, e: &FieldElement, big_b: &FieldElement, steps: u32, eps: &Q) -> Result<Vec<ChainStep>> {
    let mut out = Vec::new();
    let (mut x, mut y) = (e.clone(), big_b.clone());
    for n in 0..steps {
        match lemma2_check(theta, &x, &y, eps) {
            Ok(o) => out.push(ChainStep { n, hypotheses: true, values_equal: o.values_equal, conclusion: o.square.holds }),
            Err(MvfError::HypothesisFailure(_)) => {
                out.push(ChainStep { n, hypotheses: false, values_equal: false, conclusion: false });
                break;
            }
            Err(err) => return Err(err),
        }
        x = x.mul(&x);
        y = y.mul(&y);
    }
    Ok(out)
}

/// Which of the proof's (overlapping) cases a pair falls in.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct CaseCounts {
    /// `|a| ≤ 1−ε` and `|b| ≥ (1−ε)^{−1}`, or the reverse.
    pub split: usize,
    /// `|a|, |b| > 1−ε`, reduced by inversion.
    pub both_large: usize,
    /// `|a|, |b| < (1−ε)^{−1}`.
    pub both_small: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChangedPair {
    pub a: String,
    pub b: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub map: String,
    #[serde(serialize_with = "crate::ser_q")]
    pub r: Q,
    #[serde(serialize_with = "crate::ser_q")]
    pub eps: Q,
    /// Largest admissible ε for this `r`.
    #[serde(serialize_with = "crate::ser_q")]
    pub eps_r: Q,
    pub eps_ok: bool,
    pub substructure_ok: bool,
    pub hypothesis: Option<String>,
    pub pairs_checked: usize,
    pub preserved: usize,
    pub changed: Vec<ChangedPair>,
    pub cases: CaseCounts,
    /// No pair contradicts the theorem (changes are allowed when a hypothesis fails).
    pub consistent: bool,
}

/// Pairs with `d(a,b) ≥ r` keep their distance under `θ`, provided `θ` is a
/// pseudo ε-perturbation with `ε′/(r−ε) ≤ 1` fixing a dense substructure.
pub fn distance_preservation_check(theta: &PerturbationMap, sample: &[ProjPoint], r: &Q, eps: &Q) -> Result<DistanceReport> {
    let eps_r = eps_for_radius(r)?;
    let eps_ok = eps < r && eps_prime(eps).map(|ep| ep <= r - eps).unwrap_or(false);
    let source = sample.first().map(|x| x.field().clone()).ok_or_else(|| MvfError::InvalidInput("empty sample".into()))?;
    let substructure_ok = theta.fixes_dense_substructure(&source);
    let hypothesis = match (eps_ok, substructure_ok) {
        (true, true) => None,
        (false, _) => Some(format!("ε = {eps} exceeds ε(r) = {}", crate::real::q_to_f64(&eps_r))),
        (true, false) => Some(format!("{theta} fixes no dense-valued substructure")),
    };
    let images: Vec<ProjPoint> = sample.iter().map(|x| theta.apply(x)).collect::<Result<_>>()?;
    let low = Q::one() - eps;
    let high = inv_one_minus(eps);
    let mut cases = CaseCounts::default();
    let (mut checked, mut preserved) = (0, 0);
    let mut changed = Vec::new();
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            let d = proj_distance(&sample[i], &sample[j])?;
            if !Real::from(r.clone()).le(&Real::from(d.clone())) {
                continue;
            }
            checked += 1;
            let size = |p: &ProjPoint| p.to_element().map(|x| x.value()).transpose();
            let (va, vb) = (size(&sample[i])?, size(&sample[j])?);
            let small = |v: &Option<AbsValue>| v.as_ref().map(|v| value_le(v, &low)).unwrap_or(false);
            let large = |v: &Option<AbsValue>| v.as_ref().map(|v| !value_le(v, &high)).unwrap_or(true);
            let above = |v: &Option<AbsValue>| v.as_ref().map(|v| !value_le(v, &low)).unwrap_or(true);
            let below = |v: &Option<AbsValue>| v.as_ref().map(|v| Real::from(v.clone()).lt(&Real::from(high.clone()))).unwrap_or(false);
            cases.split += ((small(&va) && large(&vb)) || (small(&vb) && large(&va))) as usize;
            cases.both_large += (above(&va) && above(&vb)) as usize;
            cases.both_small += (below(&va) && below(&vb)) as usize;
            let d2 = proj_distance(&images[i], &images[j])?;
            if d == d2 {
                preserved += 1;
            } else {
                changed.push(ChangedPair { a: sample[i].to_string(), b: sample[j].to_string(), source: d.render(), target: d2.render() });
            }
        }
    }
    let consistent = hypothesis.is_some() || changed.is_empty();
    Ok(DistanceReport {
        map: theta.to_string(),
        r: r.clone(),
        eps: eps.clone(),
        eps_r,
        eps_ok,
        substructure_ok,
        hypothesis,
        pairs_checked: checked,
        preserved,
        changed,
        cases,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::{q, qi};

    fn qp5_sample() -> Vec<ProjPoint> {
        let f = FieldDescriptor::qp(5);
        [qi(0), qi(1), qi(5), q(1, 5), qi(2)].iter().map(|x| ProjPoint::finite(&FieldElement::from_rational(&f, x.clone()))).collect()
    }

    #[test]
    fn identity_and_trivial_rescale_measure_zero() {
        let s = qp5_sample();
        assert!(measure_pseudo_eps(&PerturbationMap::Identity, &s).unwrap().eps.is_zero());
        let r1 = measure_pseudo_eps(&PerturbationMap::Rescale(qi(1)), &s).unwrap();
        assert!(r1.eps.is_zero() && r1.families.is_empty());
        assert_eq!(r1.eps_prime, Some(Q::zero()));
    }

    /// Independent f64 recomputation of the five families under `|·|^α`.
    fn rescale_oracle(vals: &[(i64, i64)], alpha: f64) -> f64 {
        // points as exact rationals n/d in Qp(5); value of a rational
        fn v5(n: i64, d: i64) -> f64 {
            if n == 0 {
                return 0.0;
            }
            let (mut n, mut d, mut k) = (n.abs(), d.abs(), 0i32);
            while n % 5 == 0 {
                n /= 5;
                k += 1;
            }
            while d % 5 == 0 {
                d /= 5;
                k -= 1;
            }
            5f64.powi(-k)
        }
        // |P(a)| for P a rational expression is computed from exact integers
        let frac = |(n, d): (i64, i64)| (n, d);
        let mut worst = 0f64;
        let norm = |v: f64| v.min(1.0);
        let star = |v: f64| if v > 1.0 { 1.0 / v } else { 1.0 };
        for &a in vals {
            let va = v5(a.0, a.1);
            worst = worst.max((norm(va) - norm(va).powf(alpha)).abs());
            worst = worst.max((star(va) - star(va).powf(alpha)).abs());
        }
        let _ = frac;
        // three-variable families: normalize via ‖P‖ = |P(a)| ∏ ‖a*‖^deg
        for &a in vals {
            for &b in vals {
                for &c in vals {
                    let (sa, sb, sc) = (star(v5(a.0, a.1)), star(v5(b.0, b.1)), star(v5(c.0, c.1)));
                    // a - b - c, ab - c, ab - bc - ac with common denominators
                    let den = a.1 * b.1 * c.1;
                    let diff = (a.0 * b.1 * c.1 - b.0 * a.1 * c.1 - c.0 * a.1 * b.1, den);
                    let prod = (a.0 * b.0 * c.1 - c.0 * a.1 * b.1, den);
                    let sym = (a.0 * b.0 * c.1 - b.0 * c.0 * a.1 - a.0 * c.0 * b.1, den);
                    for (p, w) in [(diff, sa * sb * sc), (prod, sa * sb * sc), (sym, sa * sb * sc)] {
                        let u = v5(p.0, p.1) * w;
                        worst = worst.max((u - u.powf(alpha)).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn rescale_matches_oracle_and_shrinks() {
        let s = qp5_sample();
        let vals = [(0, 1), (1, 1), (5, 1), (1, 5), (2, 1)];
        let mut last = None;
        for (alpha, af) in [(q(11, 10), 1.1), (q(101, 100), 1.01), (q(1001, 1000), 1.001)] {
            let rep = measure_pseudo_eps(&PerturbationMap::Rescale(alpha), &s).unwrap();
            let oracle = rescale_oracle(&vals, af);
            assert!((rep.eps_approx - oracle).abs() < 1e-9, "{} vs {oracle}", rep.eps_approx);
            if let Some(prev) = last {
                assert!(rep.eps < prev);
            }
            last = Some(rep.eps.clone());
        }
        let rep = measure_pseudo_eps(&PerturbationMap::Rescale(q(21, 20)), &s).unwrap();
        let single = 0.2 - 0.2f64.powf(1.05);
        assert!(rep.eps_approx >= single - 1e-12);
        assert!((rep.eps_approx - rescale_oracle(&vals, 1.05)).abs() < 1e-9);
    }

    #[test]
    fn eps_prime_arithmetic() {
        assert_eq!(eps_prime(&Q::zero()), Some(Q::zero()));
        // 1/10 / (4/5)^3 = 125/640
        assert_eq!(eps_prime(&q(1, 10)), Some(q(25, 128)));
        assert_eq!(eps_prime(&q(1, 2)), None);
        for k in 1..40 {
            let e = q(k, 100);
            assert!(eps_prime(&e).unwrap() > e);
        }
    }

    #[test]
    fn eps_for_half() {
        let e = eps_for_radius(&q(1, 2)).unwrap();
        let ef = crate::real::q_to_f64(&e);
        // Newton on g(x) = x - (r - x)(1 - 2x)^3, an independent formulation
        let mut x = 0.1f64;
        for _ in 0..50 {
            let g = x - (0.5 - x) * (1.0 - 2.0 * x).powi(3);
            let dg = 1.0 + (1.0 - 2.0 * x).powi(3) + 6.0 * (0.5 - x) * (1.0 - 2.0 * x).powi(2);
            x -= g / dg;
        }
        assert!((ef - x).abs() < 1e-12, "{ef} vs {x}");
        assert!((ef - 0.137_7).abs() < 1e-3);
        assert!(eps_prime(&e).unwrap() <= q(1, 2) - &e);
        assert!(eps_for_radius(&Q::zero()).is_err());
    }

    #[test]
    fn inverted_map_is_no_worse() {
        let s = qp5_sample();
        let theta = PerturbationMap::Rescale(q(11, 10));
        let inv_sample: Vec<ProjPoint> = s.iter().map(invert).collect();
        let a = measure_pseudo_eps(&theta, &s).unwrap();
        let b = measure_pseudo_eps(&PerturbationMap::Inverted(Box::new(theta)), &inv_sample).unwrap();
        assert!(b.eps <= a.eps);
    }

    #[test]
    fn identity_lemmas() {
        let f = FieldDescriptor::puiseux_q();
        let a = FieldElement::from_int(&f, 3);
        let o = lemma2_check(&PerturbationMap::Identity, &a, &a, &Q::zero()).unwrap();
        assert!(o.values_equal && o.square.holds);
        let t = FieldElement::monomial(&f, qi(1), q(1, 2)).unwrap();
        let p = prelemma_check(&PerturbationMap::Identity, &a, &t, &q(1, 100)).unwrap();
        assert!(p.holds);
        // identity never moves |a - b| above |c|
        let r = lemma1_check(&PerturbationMap::Identity, &a, &t, &t, &q(1, 10), &q(1, 100));
        assert!(matches!(r, Err(MvfError::HypothesisFailure(_))));
    }

    #[test]
    fn jitter_instance_of_lemma_one() {
        let f = FieldDescriptor::laurent_q();
        let t = |e: i64| FieldElement::monomial(&f, qi(1), qi(e)).unwrap();
        let theta = PerturbationMap::Jitter { k: qi(3), m: qi(6) };
        // a, b agree below t^6, so |a-b| = 2^-6 while |θa-θb| = 2^-3
        let a = FieldElement::one(&f).add(&t(6));
        let b = FieldElement::one(&f);
        let c = t(4);
        let eps = measure_pseudo_eps(&theta, &lemma1_closure(&a, &b, &c).unwrap()).unwrap().eps;
        let out = lemma1_check(&theta, &a, &b, &c, &q(1, 64), &eps).unwrap();
        assert!(out.holds, "{out:?}");
    }

    #[test]
    fn distance_checks() {
        let p = FieldDescriptor::puiseux_q();
        let sample: Vec<ProjPoint> = [qi(0), qi(1), qi(2), q(1, 3)]
            .iter()
            .map(|x| ProjPoint::finite(&FieldElement::from_rational(&p, x.clone())))
            .chain([ProjPoint::infinity(&p), ProjPoint::finite(&FieldElement::monomial(&p, qi(1), q(1, 2)).unwrap())])
            .collect();
        let id = distance_preservation_check(&PerturbationMap::Identity, &sample, &q(1, 2), &Q::zero()).unwrap();
        assert!(id.hypothesis.is_none() && id.changed.is_empty() && id.consistent);
        assert!(id.pairs_checked > 0);
        let theta = PerturbationMap::Rescale(q(101, 100));
        let eps = measure_pseudo_eps(&theta, &sample).unwrap().eps;
        let rs = distance_preservation_check(&theta, &sample, &q(1, 2), &eps).unwrap();
        assert!(rs.hypothesis.is_some() && rs.consistent);
        assert!(!rs.changed.is_empty());
    }
}
