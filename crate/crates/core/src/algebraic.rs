//! Newton polygons, Newton–Puiseux root finding and the `V(J)` projection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{MvfError, Result};
use crate::field::{Backend, CoeffField, Field, FieldElement};
use crate::poly::{ParamPoly, UniPoly};
use crate::projective::{proj_distance, ProjPoint};
use crate::value::{fmt_q, AbsValue};
use crate::Q;

pub const MAX_DEGREE: usize = 6;
const MAX_DEPTH: usize = 24;

/// A segment of the lower hull: `mult` roots of valuation `root_valuation`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    /// Hull slope `(v_to − v_from)/(to − from)`.
    #[serde(serialize_with = "crate::ser_q")]
    pub slope: Q,
    #[serde(serialize_with = "crate::ser_q")]
    pub root_valuation: Q,
    pub mult: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonPolygon {
    pub degree: usize,
    /// Multiplicity of the root `0` (exactly vanishing low coefficients).
    pub zero_roots: usize,
    /// Hull vertices `(i, v(a_i))`.
    #[serde(serialize_with = "ser_vertices")]
    pub vertices: Vec<(usize, Q)>,
    pub segments: Vec<Segment>,
}

fn ser_vertices<S: serde::Serializer>(v: &[(usize, Q)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (i, q) in v {
        seq.serialize_element(&(i, fmt_q(q)))?;
    }
    seq.end()
}

impl NewtonPolygon {
    /// `(value of the roots, multiplicity)` per segment.
    pub fn root_values(&self, field: &Field) -> Vec<(AbsValue, usize)> {
        self.segments.iter().map(|s| (field.value_of_exponent(&s.root_valuation), s.mult)).collect()
    }
}

fn vanishes(c: &FieldElement) -> bool {
    c.is_zero() || c.is_zero_at_precision()
}

/// Lower convex hull of `(i, v(a_i))` over the nonvanishing coefficients.
pub fn newton_slopes(p: &UniPoly) -> Result<NewtonPolygon> {
    let degree = p.degree().ok_or_else(|| MvfError::InvalidInput("zero polynomial".into()))?;
    let cs = p.coeffs();
    let zero_roots = cs.iter().take_while(|c| vanishes(c)).count();
    let mut pts = Vec::new();
    for (i, c) in cs.iter().enumerate().skip(zero_roots) {
        if vanishes(c) {
            continue;
        }
        pts.push((i, c.valuation()?.expect("nonzero coefficient")));
    }
    let mut hull: Vec<(usize, Q)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (i1, v1) = &hull[hull.len() - 2];
            let (i2, v2) = &hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (v2 - v1) * Q::from_integer(BigInt::from(pt.0 - i1));
            let rhs = (&pt.1 - v1) * Q::from_integer(BigInt::from(i2 - i1));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let (i0, v0) = &w[0];
            let (i1, v1) = &w[1];
            let slope = (v1 - v0) / Q::from_integer(BigInt::from(i1 - i0));
            Segment { from: *i0, to: *i1, root_valuation: -slope.clone(), slope, mult: i1 - i0 }
        })
        .collect();
    Ok(NewtonPolygon { degree, zero_roots, vertices: hull, segments })
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<(FieldElement, usize)>,
    /// Some roots lie outside the backend or could not be separated.
    pub partial: bool,
    pub notes: Vec<String>,
}

impl RootSet {
    pub fn count(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

fn exponent_allowed(f: &Field, e: &Q) -> Result<bool> {
    Ok(match &f.backend {
        Backend::Qp { .. } | Backend::Laurent { .. } => e.is_integer(),
        Backend::Trivial => e.is_zero(),
        Backend::Puiseux { ram, .. } => {
            let den = e.denom().to_u64().unwrap_or(u64::MAX);
            if (*ram as u64) % den != 0 {
                return Err(MvfError::RamificationExceeded(*ram));
            }
            true
        }
    })
}

/// Divisors of `|n|`, or `None` when `n` is too large to factor by trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let m = n.to_u64()?;
    if m > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            if d * d != m {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Multiplicity of `z` as a root, by repeated synthetic division.
fn residue_mult(cf: CoeffField, mut cs: Vec<Q>, z: &Q) -> usize {
    let mut m = 0;
    while cs.len() > 1 {
        let mut q = vec![Q::zero(); cs.len() - 1];
        let mut carry = Q::zero();
        for k in (0..cs.len()).rev() {
            let v = cf.add(&cs[k], &cf.mul(&carry, z));
            if k == 0 {
                if !v.is_zero() {
                    return m;
                }
            } else {
                q[k - 1] = v.clone();
            }
            carry = v;
        }
        m += 1;
        cs = q;
    }
    m
}

/// Nonzero roots of a residue polynomial (low to high coefficients) and
/// whether they account for its whole degree.
fn residue_roots(cf: CoeffField, cs: &[Q]) -> (Vec<(Q, usize)>, bool) {
    let deg = cs.len() - 1;
    let candidates: Vec<Q> = match cf {
        CoeffField::Prime(p) => (1..p).map(|z| Q::from_integer(BigInt::from(z))).collect(),
        CoeffField::Rationals => {
            let lcm = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = cs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
            match (divisors(&ints[0]), divisors(&ints[deg])) {
                (Some(ps), Some(qs)) => {
                    let mut v: Vec<Q> = Vec::new();
                    for a in &ps {
                        for b in &qs {
                            for s in [1, -1] {
                                let z = Q::new(a * s, b.clone());
                                if !v.contains(&z) {
                                    v.push(z);
                                }
                            }
                        }
                    }
                    v
                }
                _ => vec![],
            }
        }
    };
    let mut out = Vec::new();
    let mut total = 0;
    for z in candidates {
        let m = residue_mult(cf, cs.to_vec(), &z);
        if m > 0 {
            total += m;
            out.push((z, m));
        }
    }
    (out, total == deg)
}

/// Newton iteration from an approximate simple root.
fn newton(p: &UniPoly, y0: FieldElement) -> Result<FieldElement> {
    let dp = p.derivative();
    let mut y = y0;
    let iters = 6 + (p.field().prec.max(1) as f64).log2().ceil() as usize;
    for k in 0..iters {
        let r = p.eval(&y);
        if vanishes(&r) {
            return Ok(y);
        }
        if k == 0 {
            y = y.to_inexact();
            continue;
        }
        let step = r.checked_div(&dp.eval(&y))?;
        if vanishes(&step) {
            return Ok(y);
        }
        y = y.sub(&step);
    }
    Ok(y)
}

fn find(p: &UniPoly, above: Option<&Q>, depth: usize, notes: &mut Vec<String>, partial: &mut bool) -> Result<Vec<(FieldElement, usize)>> {
    let f = p.field().clone();
    let mut out = Vec::new();
    let np = newton_slopes(p)?;
    if np.zero_roots > 0 {
        out.push((FieldElement::zero(&f), np.zero_roots));
    }
    let cs = p.coeffs();
    for seg in &np.segments {
        let sigma = &seg.root_valuation;
        if above.map(|a| sigma <= a).unwrap_or(false) {
            continue;
        }
        if !exponent_allowed(&f, sigma)? {
            *partial = true;
            notes.push(format!("{} roots of valuation {} lie outside {}", seg.mult, fmt_q(sigma), f));
            continue;
        }
        // residue polynomial of the segment
        let v_from = np.vertices.iter().find(|(j, _)| *j == seg.from).expect("segment endpoint").1.clone();
        let line = |i: usize| -> Q { &v_from + &seg.slope * Q::from_integer(BigInt::from(i - seg.from)) };
        let mut rcs = Vec::with_capacity(seg.mult + 1);
        for i in seg.from..=seg.to {
            let c = &cs[i];
            let on = !vanishes(c) && c.valuation()?.map(|v| v == line(i)).unwrap_or(false);
            rcs.push(if on { f.coeff().reduce(&c.leading_coeff()?) } else { Q::zero() });
        }
        let (zs, complete) = residue_roots(f.coeff(), &rcs);
        if !complete {
            *partial = true;
            notes.push(format!("residue polynomial of valuation {} does not split over {}", fmt_q(sigma), f.coeff().spec()));
        }
        for (z, mu) in zs {
            let y0 = FieldElement::monomial(&f, z, sigma.clone())?;
            if mu == 1 {
                out.push((newton(p, y0)?, 1));
            } else if depth >= MAX_DEPTH {
                *partial = true;
                notes.push(format!("cannot separate a {mu}-fold cluster near {y0} at working precision"));
            } else {
                let shifted = p.taylor_shift(&y0);
                for (r, m) in find(&shifted, Some(sigma), depth + 1, notes, partial)? {
                    out.push((y0.add(&r), m));
                }
            }
        }
    }
    Ok(out)
}

/// Roots of a monic polynomial of degree at most 6, with multiplicities.
/// Qp returns only roots in the ground field and is always flagged partial.
pub fn roots_univariate(p: &UniPoly) -> Result<RootSet> {
    let deg = p.degree().ok_or_else(|| MvfError::InvalidInput("zero polynomial".into()))?;
    if deg > MAX_DEGREE {
        return Err(MvfError::InvalidInput(format!("degree {deg} exceeds {MAX_DEGREE}")));
    }
    if !p.is_monic() {
        return Err(MvfError::InvalidInput("polynomial is not monic".into()));
    }
    let mut notes = Vec::new();
    let mut partial = p.field().prime().is_some();
    if partial {
        notes.push("ground-field roots only".into());
    }
    if deg == 0 {
        return Ok(RootSet { roots: vec![], partial, notes });
    }
    let roots = find(p, None, 0, &mut notes, &mut partial)?;
    if roots.is_empty() && partial {
        return Err(MvfError::Unresolved(notes.join("; ")));
    }
    Ok(RootSet { roots, partial, notes })
}

/// `y ∈ V(J)` near `x`, with the certificate `d(x, y) ≤ ⋁ ‖f_j(x)‖^{1/m}`.
#[derive(Clone, Debug)]
pub struct VjProjection {
    pub y: ProjPoint,
    pub distance: AbsValue,
    pub bound: AbsValue,
    pub residuals: Vec<AbsValue>,
    pub holds: bool,
}

/// Check the normalized shape: `f_j` involves `X_0..X_d` and `X_{d+1+j}`
/// only, is homogeneous of degree `m` and monic in `X_{d+1+j}`.
fn check_family(n: usize, family: &[ParamPoly], m: u32) -> Result<usize> {
    if family.is_empty() || family.len() > n {
        return Err(MvfError::MalformedFamily(format!("{} polynomials for ℙ^{n}", family.len())));
    }
    let d = n - family.len();
    for (j, f) in family.iter().enumerate() {
        if f.nvars() != n + 1 {
            return Err(MvfError::MalformedFamily(format!("f{j} has {} variables, expected {}", f.nvars(), n + 1)));
        }
        let yj = d + 1 + j;
        for (e, _) in f.terms() {
            if e.iter().sum::<u32>() != m {
                return Err(MvfError::MalformedFamily(format!("f{j} is not homogeneous of degree {m}")));
            }
            if e.iter().enumerate().any(|(k, &x)| k > d && k != yj && x > 0) {
                return Err(MvfError::MalformedFamily(format!("f{j} involves another Y variable")));
            }
        }
        if f.degree_in(yj) != m || !f.is_monic_in(yj) {
            return Err(MvfError::MalformedFamily(format!("f{j} is not monic of degree {m} in Y{j}")));
        }
    }
    Ok(d)
}

pub fn vj_project(x: &ProjPoint, family: &[ParamPoly], m: u32) -> Result<VjProjection> {
    let n = x.dim();
    let d = check_family(n, family, m)?;
    let f = x.field().clone();
    let coords = x.coords().to_vec();
    let residuals = family.iter().map(|fj| fj.eval_affine(&coords).value()).collect::<Result<Vec<_>>>()?;
    // all of X_0..X_d vanish: the bound is 1 and any point of V(J) will do
    let base = if coords[..=d].iter().all(|c| c.is_zero()) {
        let mut e = vec![FieldElement::zero(&f); n + 1];
        e[0] = FieldElement::one(&f);
        e
    } else {
        coords.clone()
    };
    let mut gammas = Vec::with_capacity(family.len());
    for (j, fj) in family.iter().enumerate() {
        let yj = d + 1 + j;
        let g = fj.specialize(yj, &base);
        let roots = roots_univariate(&g).map_err(|e| MvfError::RootNotFound(format!("g{j}: {e}")))?;
        if roots.roots.is_empty() {
            return Err(MvfError::RootNotFound(format!("g{j} has no root in {f}")));
        }
        let target = &coords[yj];
        let mut best: Option<(AbsValue, FieldElement)> = None;
        for (r, _) in roots.roots {
            let dist = r.sub(target).value_upper_bound();
            if best.as_ref().map(|(b, _)| dist < *b).unwrap_or(true) {
                best = Some((dist, r));
            }
        }
        gammas.push(best.expect("nonempty").1);
    }
    let mut raw: Vec<FieldElement> = base[..=d].to_vec();
    raw.extend(gammas);
    let y = ProjPoint::normalize(raw)?;
    let distance = proj_distance(x, &y)?;
    let inv_m = Q::new(BigInt::one(), BigInt::from(m));
    let bound = residuals.iter().fold(f.zero_value(), |acc, r| acc.max(r.powq(&inv_m)));
    let holds = distance <= bound;
    Ok(VjProjection { y, distance, bound, residuals, holds })
}
