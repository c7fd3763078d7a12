use std::fmt;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::linear::{linear_solve, solve_precondition};
use crate::algebraic::roots_univariate;
use crate::error::{MvfError, Result};
use crate::field::{element_in_window, random_element, Backend, Field, FieldElement};
use crate::gen::{random_point, random_poly};
use crate::poly::{eval_hom, eval_norm, homogenize, ult_instance, Poly, UniPoly};
use crate::projective::{proj_distance, ProjPoint};
use crate::real::Real;
use crate::rng::{label, split, Rng};
use crate::value::AbsValue;
use crate::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    Norm,
    Comm,
    Ult,
    Prod,
    Dist,
    Lin,
    /// Nonzero values of `‖x*‖` lie in `c^ℕ` (discrete backends only).
    DiscreteValues,
    AcmvfHalf,
    AcmvfRoots,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Norm => "Norm",
            Axiom::Comm => "Comm",
            Axiom::Ult => "Ult",
            Axiom::Prod => "Prod",
            Axiom::Dist => "Dist",
            Axiom::Lin => "Lin",
            Axiom::DiscreteValues => "MVF_Z",
            Axiom::AcmvfHalf => "ACMVF-half",
            Axiom::AcmvfRoots => "ACMVF-roots",
        }
    }

    pub const MVF: [Axiom; 6] = [Axiom::Norm, Axiom::Comm, Axiom::Ult, Axiom::Prod, Axiom::Dist, Axiom::Lin];

    /// Axioms of a named suite for a given backend.
    pub fn suite(name: &str, field: &Field) -> Result<Vec<Axiom>> {
        let mut v = Axiom::MVF.to_vec();
        if field.discrete_values() {
            v.push(Axiom::DiscreteValues);
        }
        match name {
            "mvf" => Ok(v),
            "acmvf" => {
                v.push(Axiom::AcmvfHalf);
                if matches!(field.backend, Backend::Laurent { .. } | Backend::Puiseux { .. }) {
                    v.push(Axiom::AcmvfRoots);
                }
                Ok(v)
            }
            other => Err(MvfError::InvalidInput(format!("unknown suite {other}"))),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A counterexample: the instance and both sides of the failed comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub gap: String,
    #[serde(skip)]
    pub gap_approx: f64,
}

impl Violation {
    pub fn between(instance: String, lhs: impl Into<Real>, rhs: impl Into<Real>) -> Violation {
        let (l, r): (Real, Real) = (lhs.into(), rhs.into());
        let gap = Real::abs_diff(l.clone(), r.clone());
        Violation { instance, lhs: l.render(), rhs: r.render(), gap: gap.render(), gap_approx: gap.to_f64() }
    }

    pub fn error(e: &MvfError) -> Violation {
        Violation {
            instance: format!("error: {e}"),
            lhs: "-".into(),
            rhs: "-".into(),
            gap: "-".into(),
            gap_approx: f64::INFINITY,
        }
    }
}

/// Rendered largest gap, `0` when there is none.
pub fn max_gap(vs: &[Violation]) -> String {
    vs.iter()
        .max_by(|a, b| a.gap_approx.total_cmp(&b.gap_approx))
        .map(|v| v.gap.clone())
        .unwrap_or_else(|| "0".into())
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub field: String,
    pub trials: usize,
    pub seed: u64,
    pub violations: Vec<Violation>,
    pub max_gap: String,
    /// Side conditions certified symbolically (Ult).
    pub certified: usize,
    /// Infimum achieved over all sampled witnesses (existential axioms).
    pub achieved_inf: Option<String>,
    pub note: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Trial {
    Ok { certified: bool },
    Fail(Violation),
    Inf(Real, bool),
}

fn pts_str(pts: &[ProjPoint]) -> String {
    pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn cmp_trial(instance: impl FnOnce() -> String, lhs: AbsValue, rhs: AbsValue, ok: bool) -> Trial {
    if ok {
        Trial::Ok { certified: false }
    } else {
        Trial::Fail(Violation::between(instance(), lhs, rhs))
    }
}

fn star_pow(pts: &[ProjPoint], k: &[u32]) -> AbsValue {
    let f = pts[0].field();
    pts.iter().zip(k).fold(f.one_value(), |acc, (p, &e)| acc.mul(&p.star().powi(e as i64)))
}

const NVARS: usize = 3;
const MAX_DEG: u32 = 3;
const MAX_TERMS: usize = 4;

fn trial(axiom: Axiom, field: &Field, rng: &mut Rng) -> Result<Trial> {
    let pts = |rng: &mut Rng, n: usize| -> Vec<ProjPoint> { (0..n).map(|_| random_point(field, rng)).collect() };
    Ok(match axiom {
        Axiom::Norm => {
            let x = pts(rng, 1);
            let norm = eval_norm(&Poly::var(1, 0), &x)?;
            // ‖x*‖ as ‖x − ∞‖
            let star = eval_norm(&Poly::var(2, 0).sub(&Poly::var(2, 1)), &[x[0].clone(), ProjPoint::infinity(field)])?;
            let lhs = norm.max(star);
            let ok = lhs.is_one();
            cmp_trial(|| pts_str(&x), lhs, field.one_value(), ok)
        }
        Axiom::Comm => {
            let x = pts(rng, 3);
            let v = |i| Poly::var(3, i);
            let p = if rng.gen_bool(0.5) { v(0).sub(&v(1)).sub(&v(2)) } else { v(0).sub(&v(1).mul(&v(2))) };
            let lhs = eval_norm(&p, &x)?;
            let rhs = eval_norm(&p, &[x[0].clone(), x[2].clone(), x[1].clone()])?;
            let ok = lhs == rhs;
            cmp_trial(|| format!("P = {p} at {}", pts_str(&x)), lhs, rhs, ok)
        }
        Axiom::Ult => {
            let a = random_poly(NVARS, MAX_DEG, MAX_TERMS, rng);
            let b = random_poly(NVARS, MAX_DEG, MAX_TERMS, rng);
            let inst = ult_instance(&a, &b)?;
            let x = pts(rng, NVARS);
            let lhs = star_pow(&x, &inst.alpha).mul(&eval_norm(&inst.p, &x)?);
            let rhs = star_pow(&x, &inst.beta)
                .mul(&eval_norm(&a, &x)?)
                .max(star_pow(&x, &inst.gamma).mul(&eval_norm(&b, &x)?));
            let ok = lhs <= rhs;
            match cmp_trial(|| format!("A = {a}, B = {b} at {}", pts_str(&x)), lhs, rhs, ok) {
                Trial::Ok { .. } => Trial::Ok { certified: true },
                t => t,
            }
        }
        Axiom::Prod => {
            let p = random_poly(NVARS, 2, MAX_TERMS, rng);
            let qq = random_poly(NVARS, 2, MAX_TERMS, rng);
            let x = pts(rng, NVARS);
            let lhs = eval_norm(&p.mul(&qq), &x)?;
            let rhs = eval_norm(&p, &x)?.mul(&eval_norm(&qq, &x)?);
            let ok = lhs == rhs;
            cmp_trial(|| format!("P = {p}, Q = {qq} at {}", pts_str(&x)), lhs, rhs, ok)
        }
        Axiom::Dist => {
            let x = pts(rng, 2);
            let lhs = proj_distance(&x[0], &x[1])?;
            let rhs = eval_norm(&Poly::var(2, 0).sub(&Poly::var(2, 1)), &x)?;
            let ok = lhs == rhs;
            cmp_trial(|| pts_str(&x), lhs, rhs, ok)
        }
        Axiom::Lin => {
            // P(x̄, Y) = A(x̄)·Y − B(x̄)
            let n = 2;
            let a = random_poly(n, 2, 3, rng);
            let b = if rng.gen_bool(0.1) { Poly::zero(n) } else { random_poly(n, 2, 3, rng) };
            let x = pts(rng, n);
            let witness = lin_witness(&a, &b, &x)?;
            let mut args = x.clone();
            args.push(witness.clone());
            let p = super::linear::linear_form(&a, &b);
            let lhs = eval_norm(&p, &args)?;
            let ok = lhs.is_zero();
            cmp_trial(|| format!("P = {p} at {}; witness {witness}", pts_str(&x)), lhs, field.zero_value(), ok)
        }
        Axiom::DiscreteValues => {
            let x = pts(rng, 1);
            let s = x[0].star();
            let ok = match s.exponent() {
                None => true,
                Some(e) => {
                    let raw = field.exponent_of_value(&s);
                    e >= &Q::from_integer(0.into()) && raw.map(|r| r.is_integer()).unwrap_or(false)
                }
            };
            cmp_trial(|| pts_str(&x), s.clone(), s, ok)
        }
        Axiom::AcmvfHalf => {
            let half = Real::from(q(1, 2));
            let mut cands = vec![random_element(field, rng)];
            if !field.is_trivial() {
                let k = rng.gen_range(-3..=3);
                cands.push(FieldElement::uniformizer_pow(field, &Q::from_integer(k.into()))?);
            }
            if let Ok(w) = element_in_window(field, &q(499_999, 1_000_000), &q(500_001, 1_000_000)) {
                cands.push(w);
            }
            let best = cands
                .iter()
                .map(|y| y.value().map(|v| Real::abs_diff(v, half.clone())))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min_by(|a, b| a.compare(b))
                .expect("nonempty");
            let exact = best.exact().map(|x| num_traits::Zero::is_zero(&x)).unwrap_or(false);
            Trial::Inf(best, exact)
        }
        Axiom::AcmvfRoots => {
            // Hensel lifting to the full default precision is slow on dense ramified series
            let field = &field.with_prec(field.prec.min(ROOTS_PREC));
            let deg = rng.gen_range(1..=3);
            let mut cs: Vec<FieldElement> = (0..deg).map(|_| crate::gen::random_in_ball(field, rng)).collect();
            cs.push(FieldElement::one(field));
            let poly = UniPoly::new(field, cs);
            let mut best: Option<AbsValue> = None;
            let mut witnessed = false;
            if let Ok(found) = roots_univariate(&poly) {
                for (root, _) in &found.roots {
                    let r = poly.eval(root);
                    let v = if r.is_zero() || r.is_zero_at_precision() {
                        field.zero_value()
                    } else {
                        poly_norm_at(&poly, &ProjPoint::finite(root))?
                    };
                    if v.is_zero() {
                        witnessed = true;
                    }
                    best = Some(best.map_or(v.clone(), |b| std::cmp::min(b, v)));
                }
            }
            for _ in 0..4 {
                let y = random_point(field, rng);
                let v = poly_norm_at(&poly, &y)?;
                best = Some(best.map_or(v.clone(), |b| std::cmp::min(b, v)));
            }
            Trial::Inf(Real::from(best.expect("samples")), witnessed)
        }
    })
}

/// `‖P(y)‖` for a univariate polynomial over the field.
fn poly_norm_at(p: &UniPoly, y: &ProjPoint) -> Result<AbsValue> {
    let d = p.degree().unwrap_or(0) as i64;
    let (a, s) = (y.coord(0), y.coord(1));
    let mut acc = FieldElement::zero(p.field());
    for (k, c) in p.coeffs().iter().enumerate() {
        acc = acc.add(&c.mul(&a.powi(k as i64)?).mul(&s.powi(d - k as i64)?));
    }
    acc.value()
}

/// Exact witness for `∃y ‖A(x̄)Y − B(x̄)‖ = 0`: the solver when its
/// precondition holds, otherwise the projective solution of the
/// homogenized linear equation.
pub fn lin_witness(a: &Poly, b: &Poly, x: &[ProjPoint]) -> Result<ProjPoint> {
    if !solve_precondition(a, b, x)?.is_zero() {
        return linear_solve(a, b, x);
    }
    let f = x[0].field().clone();
    let (da, db) = (a.degree_vector(), b.degree_vector());
    let d: Vec<u32> = da.iter().zip(&db).map(|(p, q)| *p.max(q)).collect();
    let star = |k: &[u32]| -> Result<FieldElement> {
        let mut acc = FieldElement::one(&f);
        for (pt, (&di, &ki)) in x.iter().zip(d.iter().zip(k)) {
            acc = acc.mul(&pt.coord(1).powi((di - ki) as i64)?);
        }
        Ok(acc)
    };
    let c1 = star(&da)?.mul(&eval_hom(&homogenize(a), x)?);
    let c2 = if b.is_zero() { FieldElement::zero(&f) } else { star(&db)?.mul(&eval_hom(&homogenize(b), x)?) };
    // c1·y − c2·y* = 0
    match ProjPoint::normalize(vec![c2, c1]) {
        Ok(p) => Ok(p),
        Err(MvfError::ZeroVector) => Ok(ProjPoint::one(&f)),
        Err(e) => Err(e),
    }
}

/// Working precision for the ACMVF root trials.
const ROOTS_PREC: u32 = 16;

/// Run `trials` seeded instances of each axiom.
pub fn run_axiom_suite(field: &Field, which: &[Axiom], trials: usize, seed: u64) -> Vec<AxiomReport> {
    which.iter().map(|&ax| run_axiom(field, ax, trials, seed)).collect()
}

pub fn run_axiom(field: &Field, axiom: Axiom, trials: usize, seed: u64) -> AxiomReport {
    let results: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = split(seed, &[label(axiom.name()), i as u64]);
            trial(axiom, field, &mut rng)
        })
        .collect();
    let mut violations = Vec::new();
    let mut certified = 0;
    let mut best_inf: Option<Real> = None;
    let mut witnessed = 0;
    for r in results {
        match r {
            Ok(Trial::Ok { certified: c }) => certified += c as usize,
            Ok(Trial::Fail(v)) => violations.push(v),
            Ok(Trial::Inf(v, w)) => {
                witnessed += w as usize;
                // one statement for Half: inf over all samples; one per polynomial for Roots: worst trial
                let keep_old = |b: &Real| if axiom == Axiom::AcmvfRoots { v.le(b) } else { b.le(&v) };
                best_inf = Some(match best_inf {
                    Some(b) if keep_old(&b) => b,
                    _ => v,
                });
            }
            Err(e) => violations.push(Violation::error(&e)),
        }
    }
    let note = match axiom {
        Axiom::AcmvfHalf => {
            let reached = best_inf.as_ref().and_then(|v| v.exact()).map(|x| num_traits::Zero::is_zero(&x)).unwrap_or(false);
            Some(if reached {
                "witness with value exactly 1/2".to_string()
            } else if field.discrete_values() || field.is_trivial() {
                "1/2 unreachable: discrete value set; approximate semantics, achieved inf reported".to_string()
            } else {
                "approximate semantics, achieved inf reported".to_string()
            })
        }
        Axiom::AcmvfRoots => Some(format!("{witnessed}/{trials} trials with an exact root; approximate semantics")),
        Axiom::Ult => Some("side condition certified symbolically for each instance".to_string()),
        _ => None,
    };
    AxiomReport {
        axiom: axiom.name().to_string(),
        field: field.spec_string(),
        trials,
        seed,
        max_gap: max_gap(&violations),
        violations,
        certified,
        achieved_inf: best_inf.map(|v| v.render()),
        note,
    }
}
