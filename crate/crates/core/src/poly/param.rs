use std::collections::BTreeMap;
use std::fmt;

use super::{Poly, UniPoly};
use crate::error::{MvfError, Result};
use crate::field::{Field, FieldElement};
use crate::projective::ProjPoint;
use crate::value::AbsValue;

/// Polynomial whose coefficients are field elements of value at most 1.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl ParamPoly {
    /// Fails with `CoefficientOutsideRing` when some coefficient has value > 1.
    pub fn new(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>) -> Result<ParamPoly> {
        let mut map: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(MvfError::InvalidInput("exponent vector length".into()));
            }
            let slot = map.entry(e.clone()).or_insert_with(|| FieldElement::zero(field));
            *slot = slot.add(&c);
            if slot.is_zero() {
                map.remove(&e);
            }
        }
        let one = field.one_value();
        for (e, c) in &map {
            if c.value_upper_bound() > one {
                return Err(MvfError::CoefficientOutsideRing(format!("coefficient {c} of monomial {e:?}")));
            }
        }
        Ok(ParamPoly { field: field.clone(), nvars, terms: map })
    }

    pub fn from_poly(field: &Field, p: &Poly) -> Result<ParamPoly> {
        ParamPoly::new(
            field,
            p.nvars(),
            p.terms().map(|(e, c)| (e.clone(), FieldElement::from_rational(field, crate::Q::from_integer(c.clone())))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn degree_vector(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (di, ei) in d.iter_mut().zip(e) {
                *di = (*di).max(*ei);
            }
        }
        d
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.degree_vector()[i]
    }

    /// Monic in `X_i`: the only monomial of top `X_i`-degree is `X_i^d` with coefficient 1.
    pub fn is_monic_in(&self, i: usize) -> bool {
        let d = self.degree_in(i);
        let top: Vec<_> = self.terms.iter().filter(|(e, _)| e[i] == d).collect();
        top.len() == 1 && {
            let (e, c) = top[0];
            c.is_one() && e.iter().enumerate().all(|(k, &x)| k == i || x == 0)
        }
    }

    /// `P(x̄)` at affine arguments.
    pub fn eval_affine(&self, xs: &[FieldElement]) -> FieldElement {
        assert_eq!(xs.len(), self.nvars);
        let mut acc = FieldElement::zero(&self.field);
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in xs.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&x.powi(k as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// `‖P(ā)‖ = |P^h(ā, ā*)|` at points of ℙ¹.
    pub fn eval_norm(&self, pts: &[ProjPoint]) -> Result<AbsValue> {
        assert_eq!(pts.len(), self.nvars);
        let d = self.degree_vector();
        let mut acc = FieldElement::zero(&self.field);
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, pt) in pts.iter().enumerate() {
                let (a, s) = (pt.coord(0), pt.coord(1));
                if e[i] > 0 {
                    m = m.mul(&a.powi(e[i] as i64)?);
                }
                if d[i] > e[i] {
                    m = m.mul(&s.powi((d[i] - e[i]) as i64)?);
                }
            }
            acc = acc.add(&m);
        }
        acc.value()
    }

    /// Univariate polynomial in `X_i` after substituting `xs[k]` for the
    /// other variables (`xs[i]` is ignored).
    pub fn specialize(&self, i: usize, xs: &[FieldElement]) -> UniPoly {
        let d = self.degree_in(i) as usize;
        let mut cs = vec![FieldElement::zero(&self.field); d + 1];
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (k, x) in xs.iter().enumerate() {
                if k != i && e[k] > 0 {
                    m = m.mul(&x.powi(e[k] as i64).expect("nonnegative power"));
                }
            }
            let slot = e[i] as usize;
            cs[slot] = cs[slot].add(&m);
        }
        UniPoly::new(&self.field, cs)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (k, &ek) in e.iter().enumerate() {
                match ek {
                    0 => {}
                    1 => factors.push(names[k].clone()),
                    _ => factors.push(format!("{}^{}", names[k], ek)),
                }
            }
            let cs = if c.is_one() && !factors.is_empty() { None } else { Some(format!("({c})")) };
            let mut s = cs.unwrap_or_default();
            if !factors.is_empty() {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Poly::default_names(self.nvars)))
    }
}
