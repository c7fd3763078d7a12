use crate::error::{MvfError, Result};
use crate::field::FieldElement;
use crate::poly::{eval_hom, eval_norm, eval_star, homogenize, Poly};
use crate::projective::{proj_distance, ProjPoint};
use crate::value::AbsValue;

/// `R = P·Y − Q` with `Y` appended as the last variable.
pub fn linear_form(p: &Poly, q: &Poly) -> Poly {
    let n = p.nvars();
    let y = Poly::var(n + 1, n);
    p.extend_vars(n + 1).mul(&y).sub(&q.extend_vars(n + 1))
}

fn truncated(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x.saturating_sub(*y)).collect()
}

/// `∏ a_i*^{k_i}` on the stored representatives.
fn star_power(pts: &[ProjPoint], k: &[u32]) -> FieldElement {
    let f = pts[0].field();
    pts.iter().zip(k).fold(FieldElement::one(f), |acc, (pt, &e)| {
        if e == 0 {
            acc
        } else {
            acc.mul(&pt.coord(1).powi(e as i64).expect("nonnegative power"))
        }
    })
}

fn star_value(pts: &[ProjPoint], k: &[u32]) -> AbsValue {
    let f = pts[0].field();
    pts.iter().zip(k).fold(f.one_value(), |acc, (pt, &e)| acc.mul(&pt.star().powi(e as i64)))
}

/// `‖P(ā)‖·‖Q*(ā)‖`, the quantity that must not vanish.
pub fn solve_precondition(p: &Poly, q: &Poly, a: &[ProjPoint]) -> Result<AbsValue> {
    Ok(eval_norm(p, a)?.mul(&eval_star(q, a)?))
}

/// The unique `b` with `‖P(ā)b − Q(ā)‖ = 0`, i.e. `Q(ā)/P(ā)`.
pub fn linear_solve(p: &Poly, q: &Poly, a: &[ProjPoint]) -> Result<ProjPoint> {
    if solve_precondition(p, q, a)?.is_zero() {
        return Err(MvfError::DegenerateInstance("‖P(a)‖·‖Q*(a)‖ = 0".into()));
    }
    let (dp, dq) = (p.degree_vector(), q.degree_vector());
    let alpha = truncated(&dq, &dp);
    let beta = truncated(&dp, &dq);
    let ph = eval_hom(&homogenize(p), a)?;
    let qh = if q.is_zero() { FieldElement::zero(a[0].field()) } else { eval_hom(&homogenize(q), a)? };
    let b = ProjPoint::normalize(vec![star_power(a, &beta).mul(&qh), star_power(a, &alpha).mul(&ph)])?;
    debug_assert!(!b.is_infinity());
    Ok(b)
}

/// `‖R(ā, b)‖` for `R = PY − Q`.
pub fn residual(p: &Poly, q: &Poly, a: &[ProjPoint], b: &ProjPoint) -> Result<AbsValue> {
    let mut args = a.to_vec();
    args.push(b.clone());
    eval_norm(&linear_form(p, q), &args)
}

/// Both steps of the uniqueness estimate
/// `d(y,z) ≤ (‖R(ā,y)‖‖z*‖ ∨ ‖R(ā,z)‖‖y*‖)/(‖P(ā)‖‖ā*‖^α) ≤ (‖R(ā,y)‖ ∨ ‖R(ā,z)‖)/(‖P(ā)‖‖Q*(ā)‖)`.
#[derive(Clone, Debug)]
pub struct LipschitzCheck {
    pub distance: AbsValue,
    pub middle: AbsValue,
    pub bound: AbsValue,
    pub holds: bool,
}

pub fn lipschitz_bound_check(p: &Poly, q: &Poly, a: &[ProjPoint], y: &ProjPoint, z: &ProjPoint) -> Result<LipschitzCheck> {
    let pre = solve_precondition(p, q, a)?;
    if pre.is_zero() {
        return Err(MvfError::DegenerateInstance("‖P(a)‖·‖Q*(a)‖ = 0".into()));
    }
    let alpha = truncated(&q.degree_vector(), &p.degree_vector());
    let ry = residual(p, q, a, y)?;
    let rz = residual(p, q, a, z)?;
    let np = eval_norm(p, a)?;
    let distance = proj_distance(y, z)?;
    let middle = ry
        .mul(&z.star())
        .max(rz.mul(&y.star()))
        .div(&np.mul(&star_value(a, &alpha)))
        .expect("nonzero under the precondition");
    let bound = ry.max(rz.clone()).div(&pre).expect("nonzero precondition");
    let holds = distance <= middle && middle <= bound;
    Ok(LipschitzCheck { distance, middle, bound, holds })
}
