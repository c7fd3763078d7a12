use std::fmt;

use crate::field::{Field, FieldElement};
use crate::Q;

/// Dense univariate polynomial over a field backend; `coeffs[k]` multiplies `Y^k`.
#[derive(Clone, Debug)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    /// Trailing exact zeros are dropped.
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn from_rationals(field: &Field, cs: &[Q]) -> UniPoly {
        UniPoly::new(field, cs.iter().map(|c| FieldElement::from_rational(field, c.clone())).collect())
    }

    /// `Y − a`.
    pub fn linear(a: &FieldElement) -> UniPoly {
        let f = a.field();
        UniPoly::new(f, vec![a.neg(), FieldElement::one(f)])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Horner evaluation.
    pub fn eval(&self, y: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(y).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&FieldElement::from_int(&self.field, k as i64)))
            .collect();
        UniPoly::new(&self.field, cs)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::new(&self.field, vec![]);
        }
        let mut out = vec![FieldElement::zero(&self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(&self.field, out)
    }

    pub fn scale(&self, s: &FieldElement) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// `P(Y + a)`.
    pub fn taylor_shift(&self, a: &FieldElement) -> UniPoly {
        let mut acc = UniPoly::new(&self.field, vec![]);
        let lin = UniPoly::new(&self.field, vec![a.clone(), FieldElement::one(&self.field)]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UniPoly::new(&self.field, vec![c.clone()]));
        }
        acc
    }

    /// `P(λY)`.
    pub fn scale_var(&self, lambda: &FieldElement) -> UniPoly {
        let mut pw = FieldElement::one(&self.field);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&pw));
            pw = pw.mul(lambda);
        }
        UniPoly::new(&self.field, out)
    }

    /// Quotient and remainder by `Y − a` (synthetic division).
    pub fn div_linear(&self, a: &FieldElement) -> (UniPoly, FieldElement) {
        let Some(d) = self.degree() else {
            return (self.clone(), FieldElement::zero(&self.field));
        };
        let mut q = vec![FieldElement::zero(&self.field); d];
        let mut carry = FieldElement::zero(&self.field);
        for k in (0..=d).rev() {
            let v = self.coeffs[k].add(&carry.mul(a));
            if k == 0 {
                return (UniPoly::new(&self.field, q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

impl PartialEq for UniPoly {
    fn eq(&self, o: &UniPoly) -> bool {
        self.coeffs == o.coeffs
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "Y".to_string(),
                _ => format!("Y^{k}"),
            };
            let cs = c.to_string();
            parts.push(if k == 0 {
                format!("({cs})")
            } else if c.is_one() {
                mono
            } else {
                format!("({cs})*{mono}")
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}
