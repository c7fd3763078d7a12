use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{fmt_terms, Poly};
use crate::error::{MvfError, Result};

/// Polynomial in `X_0..X_{n−1}, X_0*..X_{n−1}*`, homogeneous of degree
/// `pair_deg[i]` in each pair `(X_i, X_i*)`. Exponent vectors list the
/// `X` exponents first, then the `X*` exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    n: usize,
    pair_deg: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl HomPoly {
    /// Build from terms, checking bihomogeneity against `pair_deg`.
    pub fn new(pair_deg: Vec<u32>, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<HomPoly> {
        let n = pair_deg.len();
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != 2 * n {
                return Err(MvfError::InvalidInput("exponent vector length".into()));
            }
            for i in 0..n {
                if e[i] + e[n + i] != pair_deg[i] {
                    return Err(MvfError::InvalidInput(format!(
                        "monomial not homogeneous of degree {} in pair {}",
                        pair_deg[i], i
                    )));
                }
            }
            let slot = map.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                map.remove(&e);
            }
        }
        Ok(HomPoly { n, pair_deg, terms: map })
    }

    pub fn npairs(&self) -> usize {
        self.n
    }

    pub fn pair_degrees(&self) -> &[u32] {
        &self.pair_deg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply by `(X̄*)^α`.
    pub fn times_star(&self, alpha: &[u32]) -> HomPoly {
        let n = self.n;
        let pair_deg = self.pair_deg.iter().zip(alpha).map(|(d, a)| d + a).collect();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            for i in 0..n {
                e[n + i] += alpha[i];
            }
            (e, c.clone())
        });
        HomPoly::new(pair_deg, terms).expect("degrees stay consistent")
    }

    pub fn mul(&self, o: &HomPoly) -> HomPoly {
        assert_eq!(self.n, o.n);
        let pair_deg = self.pair_deg.iter().zip(&o.pair_deg).map(|(a, b)| a + b).collect();
        let mut terms = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                terms.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2));
            }
        }
        HomPoly::new(pair_deg, terms).expect("product is bihomogeneous")
    }

    /// Difference of two polynomials with equal pair degrees (a zero
    /// operand adopts the other's degrees).
    pub fn sub(&self, o: &HomPoly) -> Result<HomPoly> {
        let pair_deg = if self.is_zero() { o.pair_deg.clone() } else { self.pair_deg.clone() };
        if !self.is_zero() && !o.is_zero() && self.pair_deg != o.pair_deg {
            return Err(MvfError::InvalidInput("pair degrees differ".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .chain(o.terms.iter().map(|(e, c)| (e.clone(), -c)));
        HomPoly::new(pair_deg, terms)
    }

    /// Set every `X_i* = 1`.
    pub fn dehomogenize(&self) -> Poly {
        let n = self.n;
        Poly::from_terms(n, self.terms.iter().map(|(e, c)| (e[..n].to_vec(), c.clone())))
    }

    pub fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("X{i}")).chain((0..n).map(|i| format!("X{i}'"))).collect()
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = HomPoly::names(self.n);
        f.write_str(&fmt_terms(self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c.clone())), &names))
    }
}

/// `P^h = P(X̄/X̄*)·(X̄*)^{deg P}`.
pub fn homogenize(p: &Poly) -> HomPoly {
    let d = p.degree_vector();
    let n = p.nvars();
    let terms = p.terms().map(|(e, c)| {
        let mut v = e.clone();
        v.extend((0..n).map(|i| d[i] - e[i]));
        (v, c.clone())
    });
    HomPoly::new(d.clone(), terms).expect("homogenization is bihomogeneous")
}

/// `Q = Q̄^h·(X̄*)^α`, verified by recomposition.
pub fn decompose(qp: &HomPoly) -> (Poly, Vec<u32>) {
    let n = qp.npairs();
    if qp.is_zero() {
        return (Poly::zero(n), vec![0; n]);
    }
    let mut alpha = vec![u32::MAX; n];
    for (e, _) in qp.terms() {
        for i in 0..n {
            alpha[i] = alpha[i].min(e[n + i]);
        }
    }
    let p = qp.dehomogenize();
    debug_assert_eq!(homogenize(&p).times_star(&alpha), *qp);
    (p, alpha)
}

/// Instance of the ultrametric axiom side condition
/// `(X̄*)^α P^h = (X̄*)^β A^h − (X̄*)^γ B^h` with `P = A − B`.
#[derive(Clone, Debug)]
pub struct UltInstance {
    pub a: Poly,
    pub b: Poly,
    pub p: Poly,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: Vec<u32>,
}

/// Build the instance and certify the identity symbolically.
pub fn ult_instance(a: &Poly, b: &Poly) -> Result<UltInstance> {
    let p = a.sub(b);
    let (dp, da, db) = (p.degree_vector(), a.degree_vector(), b.degree_vector());
    let d: Vec<u32> = (0..p.nvars()).map(|i| dp[i].max(da[i]).max(db[i])).collect();
    let diff = |x: &[u32]| -> Vec<u32> { d.iter().zip(x).map(|(a, b)| a - b).collect() };
    let (alpha, beta, gamma) = (diff(&dp), diff(&da), diff(&db));
    let lhs = homogenize(&p).times_star(&alpha);
    let rhs = homogenize(a).times_star(&beta).sub(&homogenize(b).times_star(&gamma))?;
    let lhs_zero_ok = p.is_zero() && rhs.is_zero();
    if !(lhs_zero_ok || lhs == rhs) {
        return Err(MvfError::IdentityFailure(format!("Ult side condition for A = {a}, B = {b}")));
    }
    Ok(UltInstance { a: a.clone(), b: b.clone(), p, alpha, beta, gamma })
}
