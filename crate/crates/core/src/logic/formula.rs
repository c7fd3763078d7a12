use std::fmt;

use crate::error::{MvfError, Result};
use crate::field::Field;
use crate::poly::{eval_norm, Poly};
use crate::projective::{proj_distance, ProjPoint};
use crate::real::Real;
use crate::value::fmt_q;
use crate::Q;

/// Continuous-logic formula over ℙ¹. Variable `i` is `X_i` inside
/// polynomial atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    /// `‖P(x̄)‖`
    Norm(Poly),
    /// `‖x_i*‖`
    Star(usize),
    /// `d(x_i, x_j)`
    Dist(usize, usize),
    /// `⟨P(x̄)⟩`
    Angle(Poly),
    /// `⟨P(x̄)⟩^Sq`
    AngleSq(Poly),
    Const(Q),
    Max(Box<Formula>, Box<Formula>),
    Min(Box<Formula>, Box<Formula>),
    Mul(Box<Formula>, Box<Formula>),
    /// `φ ∸ ψ`
    TruncSub(Box<Formula>, Box<Formula>),
    Pow(Box<Formula>, Q),
    /// `1 − φ`
    Not(Box<Formula>),
    Inf(usize, Box<Formula>),
    Sup(usize, Box<Formula>),
}

/// Value of a formula together with the size of the quantifier sample.
#[derive(Clone, Debug)]
pub struct FormulaValue {
    pub value: Real,
    pub quantifiers: usize,
    pub sample_size: usize,
}

impl Formula {
    /// Largest variable index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Formula::Norm(p) | Formula::Angle(p) | Formula::AngleSq(p) => p.nvars(),
            Formula::Star(i) => i + 1,
            Formula::Dist(i, j) => i.max(j) + 1,
            Formula::Const(_) => 0,
            Formula::Max(a, b) | Formula::Min(a, b) | Formula::Mul(a, b) | Formula::TruncSub(a, b) => {
                a.arity().max(b.arity())
            }
            Formula::Pow(a, _) | Formula::Not(a) => a.arity(),
            Formula::Inf(i, a) | Formula::Sup(i, a) => a.arity().max(i + 1),
        }
    }

    fn quantifier_count(&self) -> usize {
        match self {
            Formula::Max(a, b) | Formula::Min(a, b) | Formula::Mul(a, b) | Formula::TruncSub(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
            Formula::Pow(a, _) | Formula::Not(a) => a.quantifier_count(),
            Formula::Inf(_, a) | Formula::Sup(_, a) => 1 + a.quantifier_count(),
            _ => 0,
        }
    }
}

fn poly_args(p: &Poly, env: &[Option<ProjPoint>], f: &Field) -> Result<Vec<ProjPoint>> {
    let d = p.degree_vector();
    (0..p.nvars())
        .map(|i| match env.get(i).cloned().flatten() {
            Some(x) => Ok(x),
            None if d[i] == 0 => Ok(ProjPoint::one(f)),
            None => Err(MvfError::InvalidInput(format!("variable X{i} is unassigned"))),
        })
        .collect()
}

fn var(env: &[Option<ProjPoint>], i: usize) -> Result<&ProjPoint> {
    env.get(i)
        .and_then(|x| x.as_ref())
        .ok_or_else(|| MvfError::InvalidInput(format!("variable X{i} is unassigned")))
}

fn eval_in(f: &Formula, env: &mut Vec<Option<ProjPoint>>, samples: &[ProjPoint], field: &Field) -> Result<Real> {
    Ok(match f {
        Formula::Norm(p) => Real::from(eval_norm(p, &poly_args(p, env, field)?)?),
        Formula::Star(i) => Real::from(var(env, *i)?.star()),
        Formula::Dist(i, j) => Real::from(proj_distance(var(env, *i)?, var(env, *j)?)?),
        Formula::Angle(p) => Real::from(crate::ordered::angle_pred(field, p, &poly_args(p, env, field)?)?),
        Formula::AngleSq(p) => Real::from(crate::ordered::sq_pred(field, p, &poly_args(p, env, field)?)?.value),
        Formula::Const(q) => Real::from(q.clone()),
        Formula::Max(a, b) => pick(eval_in(a, env, samples, field)?, eval_in(b, env, samples, field)?, true),
        Formula::Min(a, b) => pick(eval_in(a, env, samples, field)?, eval_in(b, env, samples, field)?, false),
        Formula::Mul(a, b) => eval_in(a, env, samples, field)?.mul(eval_in(b, env, samples, field)?),
        Formula::TruncSub(a, b) => Real::trunc_sub(eval_in(a, env, samples, field)?, eval_in(b, env, samples, field)?),
        Formula::Pow(a, q) => eval_in(a, env, samples, field)?.powq(q.clone()),
        Formula::Not(a) => Real::one().sub(eval_in(a, env, samples, field)?),
        Formula::Inf(i, a) | Formula::Sup(i, a) => {
            if samples.is_empty() {
                return Err(MvfError::InvalidInput("quantifier over an empty sample set".into()));
            }
            if env.len() <= *i {
                env.resize(i + 1, None);
            }
            let saved = env[*i].take();
            let mut best: Option<Real> = None;
            for s in samples {
                env[*i] = Some(s.clone());
                let v = eval_in(a, env, samples, field)?;
                best = Some(match best {
                    None => v,
                    Some(b) => pick(b, v, matches!(f, Formula::Sup(..))),
                });
            }
            env[*i] = saved;
            best.expect("nonempty sample")
        }
    })
}

/// Larger (or smaller) of two reals, keeping the winning expression.
fn pick(a: Real, b: Real, larger: bool) -> Real {
    let a_wins = if larger { !a.lt(&b) } else { !b.lt(&a) };
    if a_wins {
        a
    } else {
        b
    }
}

/// Evaluate with `assignment[i]` bound to `x_i`; quantifiers range over `samples`.
pub fn eval_formula(f: &Formula, assignment: &[ProjPoint], samples: &[ProjPoint], field: &Field) -> Result<FormulaValue> {
    let mut env: Vec<Option<ProjPoint>> = assignment.iter().cloned().map(Some).collect();
    let value = eval_in(f, &mut env, samples, field)?;
    let quantifiers = f.quantifier_count();
    Ok(FormulaValue { value, quantifiers, sample_size: if quantifiers > 0 { samples.len() } else { 0 } })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Norm(p) => write!(f, "norm({p})"),
            Formula::Star(i) => write!(f, "star(X{i})"),
            Formula::Dist(i, j) => write!(f, "dist(X{i}, X{j})"),
            Formula::Angle(p) => write!(f, "angle({p})"),
            Formula::AngleSq(p) => write!(f, "sq({p})"),
            Formula::Const(q) => f.write_str(&fmt_q(q)),
            Formula::Max(a, b) => write!(f, "max({a}, {b})"),
            Formula::Min(a, b) => write!(f, "min({a}, {b})"),
            Formula::Mul(a, b) => write!(f, "mul({a}, {b})"),
            Formula::TruncSub(a, b) => write!(f, "tsub({a}, {b})"),
            Formula::Pow(a, q) => write!(f, "pow({a}, {})", fmt_q(q)),
            Formula::Not(a) => write!(f, "not({a})"),
            Formula::Inf(i, a) => write!(f, "inf(X{i}, {a})"),
            Formula::Sup(i, a) => write!(f, "sup(X{i}, {a})"),
        }
    }
}
