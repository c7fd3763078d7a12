//! Covering ℙⁿ by tuples of ℙ¹ points: the defect φ, repair into `E_n`,
//! the surjection `ρ_n`, its section and the embedding of ℙ¹ as `D_n`.

use std::fmt;

use crate::error::{MvfError, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{eval_norm, Poly};
use crate::projective::{invert, proj_distance, ProjPoint};
use crate::value::AbsValue;

/// Upper-triangle entries `a^{ij}`, `i < j ≤ n`, in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartTuple {
    n: usize,
    entries: Vec<ProjPoint>,
}

/// `M(n) = n(n+1)/2`.
pub fn chart_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j <= n);
    // rows 0..i contribute n, n-1, …, n-i+1 entries
    i * n - i * (i.saturating_sub(1)) / 2 + (j - i - 1)
}

impl ChartTuple {
    pub fn new(n: usize, entries: Vec<ProjPoint>) -> Result<ChartTuple> {
        if n == 0 {
            return Err(MvfError::InvalidInput("chart dimension must be at least 1".into()));
        }
        if entries.len() != chart_len(n) {
            return Err(MvfError::InvalidInput(format!("expected {} entries for n = {n}, got {}", chart_len(n), entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.dim() != 1) {
            return Err(MvfError::InvalidInput(format!("chart entry {bad} is not in P^1")));
        }
        let f = entries[0].field();
        if entries.iter().any(|e| e.field() != f) {
            return Err(MvfError::FieldMismatch);
        }
        Ok(ChartTuple { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[ProjPoint] {
        &self.entries
    }

    pub fn field(&self) -> &Field {
        self.entries[0].field()
    }

    /// The full matrix entry: `a^{ii} = 1`, `a^{ji} = (a^{ij})⁻¹`.
    pub fn get(&self, i: usize, j: usize) -> ProjPoint {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => ProjPoint::one(self.field()),
            std::cmp::Ordering::Less => self.entries[slot(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => invert(&self.entries[slot(self.n, j, i)]),
        }
    }

    fn from_fn(n: usize, mut g: impl FnMut(usize, usize) -> ProjPoint) -> ChartTuple {
        let mut entries = Vec::with_capacity(chart_len(n));
        for i in 0..n {
            for j in i + 1..=n {
                entries.push(g(i, j));
            }
        }
        ChartTuple { n, entries }
    }

    /// Entrywise maximum of ℙ¹ distances.
    pub fn distance(&self, o: &ChartTuple) -> Result<AbsValue> {
        if self.n != o.n {
            return Err(MvfError::InvalidInput("chart tuples of different dimension".into()));
        }
        let mut d = self.field().zero_value();
        for (a, b) in self.entries.iter().zip(&o.entries) {
            d = d.max(proj_distance(a, b)?);
        }
        Ok(d)
    }
}

impl fmt::Display for ChartTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.n {
            for j in i + 1..=self.n {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "a{i}{j}={}", self.entries[slot(self.n, i, j)])?;
            }
        }
        Ok(())
    }
}

/// `‖x y − z‖` on ℙ¹, i.e. `|x₀y₀z₁ − z₀x₁y₁|`.
fn triangle_atom(x: &ProjPoint, y: &ProjPoint, z: &ProjPoint) -> Result<AbsValue> {
    let p = Poly::var(3, 0).mul(&Poly::var(3, 1)).sub(&Poly::var(3, 2));
    eval_norm(&p, &[x.clone(), y.clone(), z.clone()])
}

/// `φ(ā) = ⋁_{i<j<k} ‖a^{ij}a^{jk} − a^{ik}‖`.
pub fn phi_defect(a: &ChartTuple) -> Result<AbsValue> {
    let n = a.n;
    let mut phi = a.field().zero_value();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..=n {
                phi = phi.max(triangle_atom(&a.get(i, j), &a.get(j, k), &a.get(i, k))?);
            }
        }
    }
    Ok(phi)
}

/// `|x| ≤ 1` for a point of ℙ¹ (∞ is unbounded).
fn bounded(x: &ProjPoint) -> bool {
    x.to_element().map(|e| e.value().map(|v| v <= x.field().one_value()).unwrap_or(false)).unwrap_or(false)
}

fn row_bounded(a: &ChartTuple, idx: &[usize], i: usize) -> bool {
    idx.iter().all(|&j| bounded(&a.get(i, j)))
}

/// Walk from row `idx[0]`, moving to row `j` whenever `|a^{ij}| > 1`. Each
/// move strictly increases the number of bounded entries, so at most
/// `|idx|` moves are made when the defect is below 1.
fn walk(a: &ChartTuple, idx: &[usize]) -> Option<usize> {
    let mut i = idx[0];
    for _ in 0..=idx.len() {
        match idx.iter().find(|&&j| !bounded(&a.get(i, j))) {
            None => return Some(i),
            Some(&j) => i = j,
        }
    }
    None
}

/// Least row `ℓ` with `|a^{ℓj}| ≤ 1` for all `j`.
pub fn find_bounded_row(a: &ChartTuple) -> Result<usize> {
    if phi_defect(a)?.is_one() {
        return Err(MvfError::NoBoundedRow);
    }
    let idx: Vec<usize> = (0..=a.n).collect();
    let reached = walk(a, &idx).ok_or(MvfError::NoBoundedRow)?;
    let least = idx.iter().copied().find(|&i| row_bounded(a, &idx, i)).expect("walk found one");
    debug_assert!(least <= reached);
    Ok(least)
}

/// `[a₀b₀ : a₁b₁]`, valid when both factors have value ≤ 1.
fn safe_product(a: &ProjPoint, b: &ProjPoint) -> ProjPoint {
    assert!(bounded(a) && bounded(b), "product outside the bounded regime");
    // for |x| ≤ 1 the stored second coordinate is a unit
    let raw = vec![a.coord(0).mul(b.coord(0)), a.coord(1).mul(b.coord(1))];
    ProjPoint::normalize(raw).expect("second coordinate is a unit")
}

/// The nearest point of `E_n` built by the telescoping products, with
/// `φ(c̄) = 0` and `d(ā, c̄) ≤ φ(ā)`.
pub fn repair(a: &ChartTuple) -> Result<ChartTuple> {
    if phi_defect(a)?.is_one() {
        return Err(MvfError::NoBoundedRow);
    }
    // order the indices so the permuted upper triangle is bounded
    let mut rest: Vec<usize> = (0..=a.n).collect();
    let mut order = Vec::with_capacity(a.n + 1);
    while !rest.is_empty() {
        let l = walk(a, &rest).ok_or(MvfError::NoBoundedRow)?;
        order.push(l);
        rest.retain(|&i| i != l);
    }
    let m = a.n + 1;
    let mut pos = vec![0; m];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    // c^{order[p], order[q]} for p < q
    let mut upper: Vec<Vec<Option<ProjPoint>>> = vec![vec![None; m]; m];
    for p in 0..m {
        let mut acc = ProjPoint::one(a.field());
        for q in p + 1..m {
            acc = safe_product(&acc, &a.get(order[q - 1], order[q]));
            upper[p][q] = Some(acc.clone());
        }
    }
    Ok(ChartTuple::from_fn(a.n, |i, j| {
        let (p, q) = (pos[i], pos[j]);
        if p < q {
            upper[p][q].clone().expect("filled")
        } else {
            invert(upper[q][p].as_ref().expect("filled"))
        }
    }))
}

/// The unique solution of `a₀^{ij}Y_i = a₁^{ij}Y_j`, read off a bounded row.
pub fn rho(a: &ChartTuple) -> Result<ProjPoint> {
    let phi = phi_defect(a)?;
    if !phi.is_zero() {
        return Err(MvfError::NotInE(phi.render()));
    }
    let l = find_bounded_row(a)?;
    let f = a.field();
    let raw = (0..=a.n)
        .map(|j| if j == l { FieldElement::one(f) } else { a.get(l, j).to_element().expect("bounded row is finite") })
        .collect();
    ProjPoint::normalize(raw)
}

/// `a^{ij} = [b_j : b_i]`, or `[1 : 1]` when both vanish.
pub fn chart_section(b: &ProjPoint) -> Result<ChartTuple> {
    let n = b.dim();
    if n == 0 {
        return Err(MvfError::InvalidInput("chart dimension must be at least 1".into()));
    }
    let mut err = None;
    let t = ChartTuple::from_fn(n, |i, j| {
        let (bi, bj) = (b.coord(i), b.coord(j));
        if bi.is_zero() && bj.is_zero() {
            return ProjPoint::one(b.field());
        }
        ProjPoint::normalize(vec![bj.clone(), bi.clone()]).unwrap_or_else(|e| {
            err = Some(e);
            ProjPoint::one(b.field())
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(t),
    }
}

/// `d(D_n, [b]) = ⋁_{i≥2} |b_i|`.
pub fn dist_to_dn(b: &ProjPoint) -> Result<AbsValue> {
    let mut d = b.field().zero_value();
    for x in &b.coords()[2.min(b.coords().len())..] {
        d = d.max(x.value()?);
    }
    Ok(d)
}

/// `θ_n([a₀ : a₁ : 0 : … : 0]) = [a₀ : a₁]`.
pub fn theta(b: &ProjPoint) -> Result<ProjPoint> {
    if b.dim() < 1 || b.coords()[2..].iter().any(|x| !x.is_zero()) {
        return Err(MvfError::NotInDn);
    }
    ProjPoint::normalize(b.coords()[..2].to_vec())
}

/// `|x₀y₁ − x₁y₀|`, which vanishes exactly on the graph of `θ_n`.
pub fn theta_graph(x: &ProjPoint, y: &ProjPoint) -> Result<AbsValue> {
    x.coord(0).mul(y.coord(1)).sub(&x.coord(1).mul(y.coord(0))).value()
}
