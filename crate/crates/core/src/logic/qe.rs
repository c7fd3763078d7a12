use std::cmp::Ordering;

use num_traits::{One, Signed};

use crate::error::{MvfError, Result};
use crate::field::{element_in_window, Backend, CoeffField, Field, FieldElement};
use crate::gen::random_in_ball;
use crate::real::{Real, MAX_BITS};
use crate::rng::Rng;
use crate::value::AbsValue;
use crate::Q;

/// Rationals `lo' ≥ lo` and `hi' ≤ hi` with `lo' < hi'`.
pub(crate) fn rational_window(lo: &Real, hi: &Real) -> Result<(Q, Q)> {
    if let (Some(a), Some(b)) = (lo.exact(), hi.exact()) {
        if a < b {
            return Ok((a, b));
        }
    }
    let mut bits = 64;
    while bits <= MAX_BITS {
        let a = lo.enclose(bits).hi.to_rational();
        let b = hi.enclose(bits).lo.to_rational();
        if a < b {
            return Ok((a, b));
        }
        bits *= 2;
    }
    Err(MvfError::Unsatisfiable("empty value window".into()))
}

/// Which branch of the extension step produced `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendCase {
    /// `A` is empty.
    Vacuous,
    /// `c` is in `A`; `d` is its image.
    Member,
    /// `|c| > r`: `d = d₀ + θa₀` with `r < |d₀| < min(r + ε, |c|)`.
    CaseI,
    /// `|c| ≤ r`: `d = b_j·e` with residue-distinct units `b_j`.
    CaseII,
}

#[derive(Clone, Debug)]
pub struct ExtendStep {
    pub d: FieldElement,
    pub case: ExtendCase,
    /// `min |c − a_i|`, absent for empty `A`.
    pub r: Option<AbsValue>,
    /// The possibly decreased tolerance.
    pub eps_used: Q,
    /// `||c − a_i| − |d − θa_i||` for each `a_i`.
    pub deviations: Vec<Real>,
    pub satisfied: bool,
}

/// `k` units with pairwise distance 1, or `None` if the residue field is too small.
fn residue_distinct_units(f: &Field, k: usize) -> Option<Vec<FieldElement>> {
    let available = match (&f.backend, f.coeff()) {
        (Backend::Qp { p }, _) => Some(*p as usize - 1),
        (_, CoeffField::Prime(p)) => Some(p as usize - 1),
        _ => None,
    };
    if available.map(|a| a < k).unwrap_or(false) {
        return None;
    }
    Some((1..=k as i64).map(|j| FieldElement::from_int(f, j)).collect())
}

/// One back-and-forth step: find `d` in the target with
/// `||c − a_i| − |d − θa_i|| < ε` for all `a_i ∈ A`.
pub fn extend_step_acvf(
    a: &[FieldElement],
    theta: &dyn Fn(&FieldElement) -> FieldElement,
    target: &Field,
    c: &FieldElement,
    eps: &Q,
) -> Result<ExtendStep> {
    if !eps.is_positive() {
        return Err(MvfError::InvalidInput("tolerance must be positive".into()));
    }
    if a.is_empty() {
        return Ok(ExtendStep {
            d: FieldElement::zero(target),
            case: ExtendCase::Vacuous,
            r: None,
            eps_used: eps.clone(),
            deviations: vec![],
            satisfied: true,
        });
    }
    let images: Vec<FieldElement> = a.iter().map(theta).collect();
    let dists: Vec<AbsValue> = a.iter().map(|ai| c.sub(ai).value()).collect::<Result<_>>()?;
    let r = dists.iter().min().expect("nonempty").clone();
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| dists[i].cmp(&dists[j]));
    let k = dists.iter().filter(|d| **d == r).count();
    // shrink ε below every gap |c − a_i| − r > 0
    let mut eps_used = eps.clone();
    for d in dists.iter().filter(|d| **d > r) {
        let half_gap = Real::from(d.clone()).sub(Real::from(r.clone())).div(Real::from(Q::from_integer(2.into())));
        eps_used = eps_used.min(half_gap.lower_bound());
    }
    let a0 = &images[order[0]];
    let (d, case) = if r.is_zero() {
        (a0.clone(), ExtendCase::Member)
    } else if c.value()? > r {
        let lo = Real::from(r.clone());
        let hi = pick_min(Real::from(r.clone()).add(Real::from(eps_used.clone())), Real::from(c.value()?));
        let (lo, hi) = rational_window(&lo, &hi)?;
        let d0 = element_in_window(target, &lo, &hi)?;
        (d0.add(a0), ExtendCase::CaseI)
    } else {
        let units = residue_distinct_units(target, k + 1)
            .ok_or_else(|| MvfError::Unsatisfiable("residue field too small for the pigeonhole step".into()))?;
        let lo = Real::trunc_sub(Real::from(r.clone()), Real::from(eps_used.clone()));
        let (lo, hi) = rational_window(&lo, &Real::from(r.clone()))?;
        // discrete targets have no value strictly inside; |e| = r keeps every deviation at 0
        let e = match element_in_window(target, &lo, &hi) {
            Ok(e) => e,
            Err(err) => match target.exponent_of_value(&r) {
                Some(x) => FieldElement::uniformizer_pow(target, &x)?,
                None => return Err(err),
            },
        };
        let ev = e.value()?;
        let close: Vec<&FieldElement> = order[..k].iter().map(|&i| &images[i]).collect();
        let chosen = units
            .iter()
            .map(|b| b.mul(&e))
            .find(|d| close.iter().all(|ai| d.sub(ai).value().map(|v| v >= ev).unwrap_or(false)))
            .ok_or_else(|| MvfError::Unsatisfiable("no residue-distinct candidate separated".into()))?;
        (chosen, ExtendCase::CaseII)
    };
    let mut deviations = Vec::with_capacity(a.len());
    for (i, img) in images.iter().enumerate() {
        deviations.push(Real::abs_diff(dists[i].clone(), d.sub(img).value()?));
    }
    let satisfied = deviations.iter().all(|x| x.lt(&Real::from(eps.clone())));
    Ok(ExtendStep { d, case, r: Some(r), eps_used, deviations, satisfied })
}

fn pick_min(a: Real, b: Real) -> Real {
    if a.compare(&b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Element `a` with `1 − 2^{−n} < |a| < 1`, and the minimum of
/// `|a·y − 1|` over sampled `|y| ≤ 1`.
#[derive(Clone, Debug)]
pub struct NonSaturation {
    pub a: FieldElement,
    pub value: AbsValue,
    pub min: AbsValue,
    pub samples: usize,
}

pub fn nonsaturation_witness(field: &Field, n: u32, m: usize, rng: &mut Rng) -> Result<NonSaturation> {
    if field.discrete_values() || field.is_trivial() {
        return Err(MvfError::Unsatisfiable(format!("{field} has no values in (1 - 2^-{n}, 1)")));
    }
    let lo = Q::one() - Q::new(1.into(), num_bigint::BigInt::from(2u32).pow(n));
    let a = element_in_window(field, &lo, &Q::one())?;
    let value = a.value()?;
    let one = FieldElement::one(field);
    let mut min = field.one_value();
    let mut seen = false;
    for _ in 0..m {
        let y = random_in_ball(field, rng);
        let v = a.mul(&y).sub(&one).value()?;
        if !seen || v < min {
            min = v;
            seen = true;
        }
    }
    Ok(NonSaturation { a, value, min, samples: m })
}
