//! Integer polynomials, homogenization in pairs `(X_i, X_i*)`, and the
//! `‖P(x̄)‖` evaluation kernel.

mod eval;
mod hom;
mod param;
mod uni;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use eval::{eval_affine, eval_hom, eval_norm, eval_norm_hom, eval_star};
pub use hom::{decompose, homogenize, ult_instance, HomPoly, UltInstance};
pub use param::ParamPoly;
pub use uni::UniPoly;

/// Sparse polynomial in `n` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, 1)
    }

    /// The variable `X_i`.
    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, BigInt::one())
    }

    pub fn monomial(exps: Vec<u32>, c: BigInt) -> Poly {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Componentwise maximal exponent; zero vector for the zero polynomial.
    pub fn degree_vector(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (di, ei) in d.iter_mut().zip(e) {
                *di = (*di).max(*ei);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Reinterpret in more variables (new ones absent).
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e = e.clone();
                e.resize(nvars, 0);
                (e, c.clone())
            }),
        )
    }

    /// Rename variables: variable `i` becomes `map[i]` in `nvars` variables.
    pub fn permute_vars(&self, map: &[usize], nvars: usize) -> Poly {
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut out = vec![0; nvars];
                for (i, k) in e.iter().enumerate() {
                    out[map[i]] += k;
                }
                (out, c.clone())
            }),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    /// Printing with custom variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        fmt_terms(self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c.clone())), names)
    }

    pub fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("X{i}")).collect()
    }
}

/// Shared printer: `coef*X0^2*X1 - 7` style, terms in the given order.
pub(crate) fn fmt_terms<'a>(terms: impl Iterator<Item = (&'a [u32], BigInt)>, names: &[String]) -> String {
    let mut out = String::new();
    for (i, (e, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (k, &ek) in e.iter().enumerate() {
            match ek {
                0 => {}
                1 => factors.push(names[k].clone()),
                _ => factors.push(format!("{}^{}", names[k], ek)),
            }
        }
        if factors.is_empty() {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Poly::default_names(self.nvars)))
    }
}
