//! Literal grammars: field specs, elements, polynomials, points, values
//! and formulas. Every error carries the byte offset it was detected at.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{MvfError, Result};
use crate::field::{is_prime, Backend, CoeffField, Field, FieldDescriptor, FieldElement};
use crate::field::DEFAULT_RAM;
use crate::logic::Formula;
use crate::poly::{ParamPoly, Poly, UniPoly};
use crate::projective::ProjPoint;
use crate::value::{AbsValue, Base};
use crate::Q;

fn perr(position: usize, expected: impl Into<String>, found: impl Into<String>) -> MvfError {
    MvfError::Parse { position, expected: expected.into(), found: found.into() }
}

// ---------------------------------------------------------------- field specs

fn parse_u64_at(s: &str, pos: usize, what: &str) -> Result<u64> {
    s.parse::<u64>().map_err(|_| perr(pos, what, s))
}

/// `qp:<p>[:prec=N]`, `laurent:q|f<p>[:base=a/b][:prec=N]`,
/// `puiseux:q|f<p>[:ram=D][:prec=N]`, `trivial:q`.
pub fn parse_field(spec: &str) -> Result<Field> {
    let mut parts = Vec::new();
    let mut pos = 0;
    for p in spec.split(':') {
        parts.push((pos, p.trim()));
        pos += p.len() + 1;
    }
    let (p0, kind) = parts[0];
    let coeff_at = |i: usize| -> Result<CoeffField> {
        let Some(&(pos, c)) = parts.get(i) else {
            return Err(perr(spec.len(), "coefficient field `q` or `f<p>`", "end of input"));
        };
        if c == "q" {
            return Ok(CoeffField::Rationals);
        }
        if let Some(p) = c.strip_prefix('f') {
            let p = parse_u64_at(p, pos + 1, "prime")?;
            if !is_prime(p) {
                return Err(perr(pos + 1, "prime", p.to_string()));
            }
            return Ok(CoeffField::Prime(p));
        }
        Err(perr(pos, "coefficient field `q` or `f<p>`", c))
    };
    let (mut field, rest) = match kind {
        "qp" => {
            let Some(&(pos, p)) = parts.get(1) else {
                return Err(perr(spec.len(), "prime", "end of input"));
            };
            let p = parse_u64_at(p, pos, "prime")?;
            if !is_prime(p) {
                return Err(perr(pos, "prime", p.to_string()));
            }
            (FieldDescriptor::qp(p), 2)
        }
        "laurent" => (FieldDescriptor::laurent(coeff_at(1)?), 2),
        "puiseux" => {
            let coeff = coeff_at(1)?;
            let f = FieldDescriptor::puiseux_q();
            (Arc::new(FieldDescriptor { backend: Backend::Puiseux { coeff, ram: DEFAULT_RAM }, ..(*f).clone() }), 2)
        }
        "trivial" => {
            if let Some(&(pos, c)) = parts.get(1) {
                if c != "q" {
                    return Err(perr(pos, "`q`", c));
                }
                (FieldDescriptor::trivial(), 2)
            } else {
                (FieldDescriptor::trivial(), 1)
            }
        }
        other => return Err(perr(p0, "one of qp, laurent, puiseux, trivial", other)),
    };
    for &(pos, opt) in &parts[rest..] {
        let (key, val) = opt.split_once('=').ok_or_else(|| perr(pos, "option key=value", opt))?;
        let vpos = pos + key.len() + 1;
        match (key, &field.backend) {
            ("prec", _) => {
                let n = parse_u64_at(val, vpos, "precision")?;
                if n == 0 || n > 4096 {
                    return Err(perr(vpos, "precision in 1..=4096", val));
                }
                field = field.with_prec(n as u32);
            }
            ("base", Backend::Laurent { .. } | Backend::Puiseux { .. } | Backend::Trivial) => {
                let (a, b) = val.split_once('/').ok_or_else(|| perr(vpos, "base a/b", val))?;
                let a = parse_u64_at(a, vpos, "numerator")?;
                let b = parse_u64_at(b, vpos + a.to_string().len() + 1, "denominator")?;
                let base = Base::new(a, b).map_err(|_| perr(vpos, "base in (0,1)", val))?;
                field = field.with_base(base);
            }
            ("ram", Backend::Puiseux { coeff, .. }) => {
                let d = parse_u64_at(val, vpos, "ramification bound")?;
                if d == 0 || d > 10_000 {
                    return Err(perr(vpos, "ramification bound in 1..=10000", val));
                }
                let coeff = *coeff;
                field = Arc::new(FieldDescriptor { backend: Backend::Puiseux { coeff, ram: d as u32 }, ..(*field).clone() });
            }
            ("scale", _) => {
                let q = parse_rational(val).map_err(|_| perr(vpos, "rational scale", val))?;
                if !q.is_positive() {
                    return Err(perr(vpos, "positive scale", val));
                }
                field = field.rescaled(&q);
            }
            _ => return Err(perr(pos, format!("option valid for {kind}"), key)),
        }
    }
    Ok(field)
}

/// `n`, `-n`, `a/b` or a decimal `1.05`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || perr(0, "rational", t);
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(perr(t.find('/').unwrap_or(0) + 1, "nonzero denominator", "0"));
        }
        return Ok(Q::new(a, b));
    }
    if let Some((i, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = i.starts_with('-');
        let ip: BigInt = if i.is_empty() || i == "-" { BigInt::zero() } else { i.parse().map_err(|_| bad())? };
        let fp: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        let mag = Q::new(ip.abs() * &den + fp, den);
        return Ok(if neg { -mag } else { mag });
    }
    Ok(Q::from_integer(t.parse().map_err(|_| bad())?))
}

// ---------------------------------------------------------------- tokens

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Sym(c) => c.to_string(),
        Tok::End => "end of input".into(),
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let (pos, c) = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < b.len() && b[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = b.get(j).map(|x| x.0).unwrap_or(s.len());
            out.push((pos, Tok::Int(s[pos..end].parse().expect("digits"))));
            i = j;
        } else if c == 'X' && b.get(i + 1).map(|x| x.1.is_ascii_digit()).unwrap_or(false) {
            out.push((pos, Tok::Ident(format!("X{}", b[i + 1].1))));
            i += 2;
        } else if c.is_ascii_uppercase() {
            out.push((pos, Tok::Ident(c.to_string())));
            i += 1;
        } else if c.is_ascii_lowercase() {
            let mut j = i;
            while j < b.len() && b[j].1.is_ascii_lowercase() {
                j += 1;
            }
            let end = b.get(j).map(|x| x.0).unwrap_or(s.len());
            out.push((pos, Tok::Ident(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^(),[]:;".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else if c == '∞' {
            out.push((pos, Tok::Ident("inf".into())));
            i += 1;
        } else {
            return Err(perr(pos, "number, variable or operator", c.to_string()));
        }
    }
    out.push((s.len(), Tok::End));
    Ok(out)
}

// ---------------------------------------------------------------- expressions

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Var(String, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, Q, usize),
    Call(String, Vec<Expr>, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Parser> {
        Ok(Parser { toks: lex(s)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(perr(self.pos(), format!("`{c}`"), describe(self.peek())))
        }
    }

    fn at_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(perr(self.pos(), "end of input", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.at_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.at_sym('*') {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.at_sym('/') {
                let pos = self.pos();
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if self.starts_primary() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.at_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.at_sym('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.at_sym('^') {
            let pos = self.pos();
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e, pos));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            t => {
                self.i -= usize::from(t != Tok::End);
                Err(perr(self.pos(), "integer", describe(&t)))
            }
        }
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = self.at_sym('-');
        if neg {
            self.bump();
        }
        let n = self.int()?;
        Ok(if neg { -n } else { n })
    }

    fn exponent(&mut self) -> Result<Q> {
        if self.at_sym('(') {
            self.bump();
            let a = self.signed_int()?;
            let mut q = Q::from_integer(a);
            if self.at_sym('/') {
                self.bump();
                let pos = self.pos();
                let b = self.int()?;
                if b.is_zero() {
                    return Err(perr(pos, "nonzero denominator", "0"));
                }
                q /= Q::from_integer(b);
            }
            self.expect(')')?;
            return Ok(q);
        }
        Ok(Q::from_integer(self.signed_int()?))
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Num(n)),
            Tok::Ident(name) => {
                if self.at_sym('(') {
                    self.bump();
                    let mut args = Vec::new();
                    if !self.at_sym(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.at_sym(',') {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(')')?;
                    Ok(Expr::Call(name, args, pos))
                } else {
                    Ok(Expr::Var(name, pos))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            t => {
                self.i -= usize::from(t != Tok::End);
                Err(perr(pos, "number, variable or `(`", describe(&t)))
            }
        }
    }
}

// ---------------------------------------------------------------- elements

fn t_of(f: &Field, e: Q, pos: usize) -> Result<FieldElement> {
    match f.backend {
        Backend::Laurent { .. } | Backend::Puiseux { .. } => {
            FieldElement::monomial(f, Q::one(), e).map_err(|err| perr(pos, "exponent allowed by the field", err.to_string()))
        }
        _ => Err(perr(pos, format!("element of {}", f.spec_string()), "t")),
    }
}

fn eval_elem(e: &Expr, f: &Field) -> Result<FieldElement> {
    Ok(match e {
        Expr::Num(n) => FieldElement::from_rational(f, Q::from_integer(n.clone())),
        Expr::Var(v, pos) if v == "t" => t_of(f, Q::one(), *pos)?,
        Expr::Var(v, pos) => return Err(perr(*pos, "`t` or a number", v.clone())),
        Expr::Neg(a) => eval_elem(a, f)?.neg(),
        Expr::Add(a, b) => eval_elem(a, f)?.add(&eval_elem(b, f)?),
        Expr::Sub(a, b) => eval_elem(a, f)?.sub(&eval_elem(b, f)?),
        Expr::Mul(a, b) => eval_elem(a, f)?.mul(&eval_elem(b, f)?),
        Expr::Div(a, b, pos) => eval_elem(a, f)?.checked_div(&eval_elem(b, f)?).map_err(|_| perr(*pos, "nonzero divisor", "0"))?,
        Expr::Pow(a, q, pos) => {
            if let Expr::Var(v, vpos) = &**a {
                if v == "t" {
                    return t_of(f, q.clone(), *vpos);
                }
            }
            if !q.is_integer() {
                return Err(perr(*pos, "integer exponent", crate::value::fmt_q(q)));
            }
            let n: i64 = q.to_integer().try_into().map_err(|_| perr(*pos, "small exponent", q.to_string()))?;
            eval_elem(a, f)?.powi(n).map_err(|_| perr(*pos, "nonzero base for a negative power", "0"))?
        }
        // precision markers printed after inexact elements
        Expr::Call(name, _, _) if name == "O" => FieldElement::zero(f),
        Expr::Call(name, _, pos) => return Err(perr(*pos, "element literal", name.clone())),
    })
}

/// Integers, rationals and series `3*t^-1 + 1 + 2*t^(5/2)`.
pub fn parse_element(field: &Field, s: &str) -> Result<FieldElement> {
    let mut p = Parser::new(s)?;
    let e = p.expr()?;
    p.end()?;
    eval_elem(&e, field)
}

// ---------------------------------------------------------------- polynomials

const Y_SLOT: usize = 10;

/// Sparse polynomial over a field in `X0..X9, Y`.
#[derive(Clone, Debug)]
struct Sparse {
    terms: BTreeMap<[u32; 11], FieldElement>,
}

impl Sparse {
    fn constant(c: FieldElement) -> Sparse {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 11], c);
        }
        Sparse { terms }
    }

    fn var(f: &Field, i: usize) -> Sparse {
        let mut e = [0; 11];
        e[i] = 1;
        Sparse { terms: BTreeMap::from([(e, FieldElement::one(f))]) }
    }

    fn add(&self, o: &Sparse) -> Sparse {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let s = match terms.get(e) {
                Some(a) => a.add(c),
                None => c.clone(),
            };
            if s.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(*e, s);
            }
        }
        Sparse { terms }
    }

    fn neg(&self) -> Sparse {
        Sparse { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    fn mul(&self, o: &Sparse) -> Sparse {
        let mut acc = Sparse { terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = [0; 11];
                for k in 0..11 {
                    e[k] = e1[k] + e2[k];
                }
                let mut terms = BTreeMap::new();
                terms.insert(e, c1.mul(c2));
                acc = acc.add(&Sparse { terms });
            }
        }
        acc
    }

    fn as_constant(&self, f: &Field) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero(f)),
            1 => self.terms.get(&[0; 11]).cloned(),
            _ => None,
        }
    }
}

fn eval_sparse(e: &Expr, f: &Field) -> Result<Sparse> {
    Ok(match e {
        Expr::Num(n) => Sparse::constant(FieldElement::from_rational(f, Q::from_integer(n.clone()))),
        Expr::Var(v, pos) => match v.as_str() {
            "t" => Sparse::constant(t_of(f, Q::one(), *pos)?),
            "Y" => Sparse::var(f, Y_SLOT),
            x if x.starts_with('X') => Sparse::var(f, x[1..].parse().expect("lexed digit")),
            _ => return Err(perr(*pos, "X0..X9, Y or t", v.clone())),
        },
        Expr::Neg(a) => eval_sparse(a, f)?.neg(),
        Expr::Add(a, b) => eval_sparse(a, f)?.add(&eval_sparse(b, f)?),
        Expr::Sub(a, b) => eval_sparse(a, f)?.add(&eval_sparse(b, f)?.neg()),
        Expr::Mul(a, b) => eval_sparse(a, f)?.mul(&eval_sparse(b, f)?),
        Expr::Div(a, b, pos) => {
            let d = eval_sparse(b, f)?
                .as_constant(f)
                .ok_or_else(|| perr(*pos, "constant divisor", "polynomial"))?;
            let inv = d.inv().map_err(|_| perr(*pos, "nonzero divisor", "0"))?;
            eval_sparse(a, f)?.mul(&Sparse::constant(inv))
        }
        Expr::Pow(a, q, pos) => {
            if let Expr::Var(v, vpos) = &**a {
                if v == "t" {
                    return Ok(Sparse::constant(t_of(f, q.clone(), *vpos)?));
                }
            }
            let base = eval_sparse(a, f)?;
            if let Some(c) = base.as_constant(f) {
                if q.is_integer() {
                    let n: i64 = q.to_integer().try_into().map_err(|_| perr(*pos, "small exponent", q.to_string()))?;
                    return Ok(Sparse::constant(c.powi(n).map_err(|_| perr(*pos, "nonzero base", "0"))?));
                }
            }
            if !q.is_integer() || q.is_negative() {
                return Err(perr(*pos, "nonnegative integer exponent", crate::value::fmt_q(q)));
            }
            let n: u32 = q.to_integer().try_into().map_err(|_| perr(*pos, "small exponent", q.to_string()))?;
            let mut acc = Sparse::constant(FieldElement::one(f));
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            acc
        }
        Expr::Call(name, _, pos) => return Err(perr(*pos, "polynomial", name.clone())),
    })
}

fn parse_sparse(field: &Field, s: &str) -> Result<Sparse> {
    let mut p = Parser::new(s)?;
    let e = p.expr()?;
    p.end()?;
    eval_sparse(&e, field)
}

fn x_arity(sp: &Sparse) -> usize {
    sp.terms.keys().flat_map(|e| (0..10).filter(move |&k| e[k] > 0)).max().map(|k| k + 1).unwrap_or(0)
}

fn uses_y(sp: &Sparse) -> bool {
    sp.terms.keys().any(|e| e[Y_SLOT] > 0)
}

/// Integer polynomial in `X0..X9` (and `Y` appended after the last `X`).
pub fn parse_poly(s: &str) -> Result<Poly> {
    let f = FieldDescriptor::trivial();
    let sp = parse_sparse(&f, s)?;
    let nx = x_arity(&sp);
    let n = nx + uses_y(&sp) as usize;
    let mut terms = Vec::new();
    for (e, c) in &sp.terms {
        let q = c.to_rational().expect("trivial field elements are rational");
        if !q.is_integer() {
            return Err(perr(0, "integer coefficients", crate::value::fmt_q(&q)));
        }
        let mut ev: Vec<u32> = e[..nx].to_vec();
        if n > nx {
            ev.push(e[Y_SLOT]);
        }
        terms.push((ev, q.to_integer()));
    }
    Ok(Poly::from_terms(n.max(1), terms))
}

/// Univariate polynomial in `Y` over the field.
pub fn parse_unipoly(field: &Field, s: &str) -> Result<UniPoly> {
    let sp = parse_sparse(field, s)?;
    if x_arity(&sp) > 0 {
        return Err(perr(0, "polynomial in Y only", "X variable"));
    }
    let deg = sp.terms.keys().map(|e| e[Y_SLOT] as usize).max().unwrap_or(0);
    let mut cs = vec![FieldElement::zero(field); deg + 1];
    for (e, c) in sp.terms {
        cs[e[Y_SLOT] as usize] = c;
    }
    Ok(UniPoly::new(field, cs))
}

/// Polynomial in `X0..X{n-1}` with field coefficients; `n` may exceed the
/// variables actually used.
pub fn parse_param_poly(field: &Field, s: &str, n: usize) -> Result<ParamPoly> {
    let sp = parse_sparse(field, s)?;
    if uses_y(&sp) {
        return Err(perr(0, "polynomial in X0..X9", "Y"));
    }
    let nx = x_arity(&sp);
    if nx > n {
        return Err(perr(0, format!("variables X0..X{}", n - 1), format!("X{}", nx - 1)));
    }
    ParamPoly::new(field, n, sp.terms.into_iter().map(|(e, c)| (e[..n].to_vec(), c)))
}

/// `f0; f1; ...` over `n` variables.
pub fn parse_family(field: &Field, s: &str, n: usize) -> Result<Vec<ParamPoly>> {
    let mut out = Vec::new();
    let mut off = 0;
    for part in s.split(';') {
        out.push(parse_param_poly(field, part, n).map_err(|e| shift(e, off))?);
        off += part.len() + 1;
    }
    Ok(out)
}

fn shift(e: MvfError, by: usize) -> MvfError {
    match e {
        MvfError::Parse { position, expected, found } => MvfError::Parse { position: position + by, expected, found },
        other => other,
    }
}

// ---------------------------------------------------------------- points and values

/// `[e0 : ... : en]`, `inf`, or a bare element `e` for `[e : 1]`.
pub fn parse_point(field: &Field, s: &str) -> Result<ProjPoint> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    if t == "inf" || t == "∞" {
        return Ok(ProjPoint::infinity(field));
    }
    let Some(inner) = t.strip_prefix('[') else {
        return Ok(ProjPoint::finite(&parse_element(field, t).map_err(|e| shift(e, lead))?));
    };
    let inner = inner.strip_suffix(']').ok_or_else(|| perr(lead + t.len(), "`]`", "end of input"))?;
    let mut coords = Vec::new();
    let mut off = lead + 1;
    for part in inner.split(':') {
        coords.push(parse_element(field, part).map_err(|e| shift(e, off))?);
        off += part.len() + 1;
    }
    if coords.len() < 2 {
        return Err(perr(lead, "at least two coordinates", t));
    }
    ProjPoint::normalize(coords).map_err(|e| match e {
        MvfError::ZeroVector => perr(lead, "a nonzero coordinate", "all zero"),
        other => other,
    })
}

/// Comma-separated points; commas inside brackets are not separators.
pub fn parse_points(field: &Field, s: &str) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_point(field, &s[start..i]).map_err(|e| shift(e, start))?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() || out.is_empty() {
        out.push(parse_point(field, &s[start..]).map_err(|e| shift(e, start))?);
    }
    Ok(out)
}

/// `0`, `c^q` in the field's base, or a rational that is a power of it.
pub fn parse_value(field: &Field, s: &str) -> Result<AbsValue> {
    let t = s.trim();
    let base = field.one_value().base();
    if let Some(e) = t.strip_prefix("c^") {
        let e = e.trim().trim_start_matches('(').trim_end_matches(')');
        let q = parse_rational(e).map_err(|_| perr(2, "exponent", e))?;
        return Ok(AbsValue::pow(base, q));
    }
    let r = parse_rational(t)?;
    if r.is_zero() {
        return Ok(field.zero_value());
    }
    if r.is_negative() {
        return Err(perr(0, "nonnegative value", t));
    }
    let q = log_base(base, &r).ok_or_else(|| perr(0, format!("a power of {base}"), t))?;
    Ok(AbsValue::pow(base, q))
}

/// `q` with `c^q = r`, when it exists.
fn log_base(base: Base, r: &Q) -> Option<Q> {
    let fac = base.factor();
    let mut ratio: Option<Q> = None;
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    for &(p, e) in &fac {
        let bp = BigInt::from(p);
        let mut k = 0i64;
        while (&num % &bp).is_zero() {
            num /= &bp;
            k += 1;
        }
        while (&den % &bp).is_zero() {
            den /= &bp;
            k -= 1;
        }
        let q = Q::new(k.into(), e.into());
        match &ratio {
            None => ratio = Some(q),
            Some(x) if *x == q => {}
            _ => return None,
        }
    }
    if !num.is_one() || !den.is_one() {
        return None;
    }
    ratio
}

// ---------------------------------------------------------------- formulas

fn var_index(e: &Expr) -> Result<usize> {
    match e {
        Expr::Var(v, _) if v.starts_with('X') => Ok(v[1..].parse().expect("lexed digit")),
        Expr::Var(v, pos) | Expr::Call(v, _, pos) => Err(perr(*pos, "variable X0..X9", v.clone())),
        _ => Err(perr(0, "variable X0..X9", "expression")),
    }
}

fn expr_poly(e: &Expr) -> Result<Poly> {
    let f = FieldDescriptor::trivial();
    let sp = eval_sparse(e, &f)?;
    if uses_y(&sp) {
        return Err(perr(0, "polynomial in X0..X9", "Y"));
    }
    let n = x_arity(&sp).max(1);
    let mut terms = Vec::new();
    for (ev, c) in &sp.terms {
        let q = c.to_rational().expect("rational");
        if !q.is_integer() {
            return Err(perr(0, "integer coefficients", crate::value::fmt_q(&q)));
        }
        terms.push((ev[..n].to_vec(), q.to_integer()));
    }
    Ok(Poly::from_terms(n, terms))
}

fn expr_const(e: &Expr) -> Result<Q> {
    let f = FieldDescriptor::trivial();
    eval_elem(e, &f)?.to_rational().ok_or_else(|| perr(0, "rational constant", "expression"))
}

fn to_formula(e: &Expr) -> Result<Formula> {
    let bx = |x: &Expr| to_formula(x).map(Box::new);
    match e {
        Expr::Call(name, args, pos) => {
            let want = |n: usize| -> Result<()> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(perr(*pos, format!("{n} argument(s) to {name}"), args.len().to_string()))
                }
            };
            match name.as_str() {
                "norm" | "angle" | "sq" => {
                    want(1)?;
                    let p = expr_poly(&args[0])?;
                    Ok(match name.as_str() {
                        "norm" => Formula::Norm(p),
                        "angle" => Formula::Angle(p),
                        _ => Formula::AngleSq(p),
                    })
                }
                "star" => {
                    want(1)?;
                    Ok(Formula::Star(var_index(&args[0])?))
                }
                "dist" => {
                    want(2)?;
                    Ok(Formula::Dist(var_index(&args[0])?, var_index(&args[1])?))
                }
                "max" | "min" | "mul" | "tsub" => {
                    want(2)?;
                    let (a, b) = (bx(&args[0])?, bx(&args[1])?);
                    Ok(match name.as_str() {
                        "max" => Formula::Max(a, b),
                        "min" => Formula::Min(a, b),
                        "mul" => Formula::Mul(a, b),
                        _ => Formula::TruncSub(a, b),
                    })
                }
                "pow" => {
                    want(2)?;
                    Ok(Formula::Pow(bx(&args[0])?, expr_const(&args[1])?))
                }
                "not" => {
                    want(1)?;
                    Ok(Formula::Not(bx(&args[0])?))
                }
                "inf" | "sup" => {
                    want(2)?;
                    let i = var_index(&args[0])?;
                    let body = bx(&args[1])?;
                    Ok(if name == "inf" { Formula::Inf(i, body) } else { Formula::Sup(i, body) })
                }
                _ => Err(perr(*pos, "norm, star, dist, angle, sq, max, min, mul, tsub, pow, not, inf, sup", name.clone())),
            }
        }
        other => Ok(Formula::Const(expr_const(other)?)),
    }
}

/// Formulas built from `norm(P)`, `star(Xi)`, `dist(Xi, Xj)`, `angle(P)`,
/// `sq(P)`, connectives `max min mul tsub pow not`, quantifiers
/// `inf(Xi, φ)`, `sup(Xi, φ)` and rational constants.
pub fn parse_formula(s: &str) -> Result<Formula> {
    let mut p = Parser::new(s)?;
    let e = p.expr()?;
    p.end()?;
    to_formula(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random_element;
    use crate::rng::{label, split};
    use crate::{q, qi};

    #[test]
    fn field_specs() {
        assert_eq!(parse_field("qp:5").unwrap().spec_string(), "qp:5");
        assert_eq!(parse_field("laurent:q:prec=20").unwrap().spec_string(), "laurent:q:prec=20");
        assert_eq!(parse_field("laurent:q:base=1/3").unwrap().spec_string(), "laurent:q:base=1/3");
        assert_eq!(parse_field("puiseux:q:ram=12").unwrap().spec_string(), "puiseux:q:ram=12");
        assert_eq!(parse_field("laurent:f3").unwrap().spec_string(), "laurent:f3");
        assert_eq!(parse_field("trivial:q").unwrap().spec_string(), "trivial:q");
        assert_eq!(parse_field("qp:abc"), Err(perr(3, "prime", "abc")));
        assert!(matches!(parse_field("qp:6"), Err(MvfError::Parse { position: 3, .. })));
        assert!(matches!(parse_field("real"), Err(MvfError::Parse { position: 0, .. })));
        assert!(matches!(parse_field("qp:5:ram=3"), Err(MvfError::Parse { position: 5, .. })));
    }

    #[test]
    fn spec_round_trip() {
        for s in ["qp:2", "qp:7:prec=30", "laurent:q", "laurent:f5:base=1/3", "puiseux:q", "puiseux:q:ram=6:prec=40", "trivial:q"] {
            assert_eq!(parse_field(s).unwrap().spec_string(), s);
        }
    }

    #[test]
    fn element_literals() {
        let p = FieldDescriptor::puiseux_q();
        let x = parse_element(&p, "3*t^-1 + 1 + 2*t^(5/2)").unwrap();
        let t = |c: i64, e: Q| FieldElement::monomial(&p, qi(c), e).unwrap();
        assert_eq!(x, t(3, qi(-1)).add(&FieldElement::one(&p)).add(&t(2, q(5, 2))));
        assert_eq!(x.to_string(), "3*t^-1 + 1 + 2*t^(5/2)");
        let f = FieldDescriptor::qp(5);
        assert_eq!(parse_element(&f, "-7/25").unwrap(), FieldElement::from_rational(&f, q(-7, 25)));
        assert!(matches!(parse_element(&f, "t"), Err(MvfError::Parse { position: 0, .. })));
        assert!(matches!(parse_element(&f, "1 +"), Err(MvfError::Parse { position: 3, .. })));
        assert!(matches!(parse_element(&f, "1/0"), Err(MvfError::Parse { position: 1, .. })));
        let l = FieldDescriptor::laurent_q();
        assert!(parse_element(&l, "t^(1/2)").is_err());
        assert_eq!(parse_element(&l, "2t").unwrap(), FieldElement::monomial(&l, qi(2), qi(1)).unwrap());
    }

    #[test]
    fn element_round_trip() {
        for f in [FieldDescriptor::qp(5), FieldDescriptor::laurent_q(), FieldDescriptor::puiseux_q(), FieldDescriptor::trivial()] {
            for i in 0..100 {
                let x = random_element(&f, &mut split(4, &[label("rt"), i]));
                let s = x.to_string();
                let y = parse_element(&f, &s).unwrap_or_else(|e| panic!("{s}: {e}"));
                assert_eq!(y, x, "{s}");
            }
        }
    }

    #[test]
    fn polynomial_literals() {
        let p = parse_poly("X0^2*X1 - 7").unwrap();
        assert_eq!(p.to_string(), "X0^2*X1 - 7");
        assert_eq!(parse_poly("2X0X1 + X1").unwrap(), parse_poly("2*X0*X1 + X1").unwrap());
        assert_eq!(parse_poly("(X0 - X1)^2").unwrap().to_string(), parse_poly("X0^2 - 2*X0*X1 + X1^2").unwrap().to_string());
        assert!(parse_poly("X0/2").is_err());
        let l = FieldDescriptor::laurent_q();
        let u = parse_unipoly(&l, "Y^2 - (1 + t)").unwrap();
        assert_eq!(u.degree(), Some(2));
        assert_eq!(u.coeff(0), parse_element(&l, "-1 - t").unwrap());
        let fam = parse_family(&FieldDescriptor::qp(5), "X2^2 - X0*X1; X1 - X0", 3).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(matches!(parse_family(&FieldDescriptor::qp(5), "X0; X1 +", 3), Err(MvfError::Parse { position: 8, .. })));
    }

    #[test]
    fn poly_round_trip() {
        for s in ["X0 - X1", "X0^2*X1 - 7", "-X0^3 + 2*X1*X2 - 1", "0"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn point_literals() {
        let f = FieldDescriptor::qp(5);
        let pts = parse_points(&f, "[1:1], [6:1]").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(crate::projective::proj_distance(&pts[0], &pts[1]).unwrap().render(), "1/5 (= (1/5)^1)");
        assert!(parse_point(&f, "inf").unwrap().is_infinity());
        assert_eq!(parse_point(&f, "[1:0]").unwrap(), ProjPoint::infinity(&f));
        assert_eq!(parse_point(&f, "5").unwrap(), ProjPoint::finite(&FieldElement::from_int(&f, 5)));
        assert!(matches!(parse_point(&f, "[0:0]"), Err(MvfError::Parse { .. })));
        assert!(matches!(parse_point(&f, "[1:x]"), Err(MvfError::Parse { position: 3, .. })));
        let l = FieldDescriptor::laurent_q();
        let p = parse_points(&l, "[1:1],[t:1]").unwrap();
        assert_eq!(parse_points(&l, &format!("{}, {}", p[0], p[1])).unwrap(), p);
    }

    #[test]
    fn value_literals() {
        let f = FieldDescriptor::qp(5);
        assert_eq!(parse_value(&f, "1/25").unwrap(), AbsValue::pow(Base::inverse_of(5), qi(2)));
        assert_eq!(parse_value(&f, "c^(3/2)").unwrap(), AbsValue::pow(Base::inverse_of(5), q(3, 2)));
        assert!(parse_value(&f, "0").unwrap().is_zero());
        assert!(parse_value(&f, "1/3").is_err());
        let l = FieldDescriptor::laurent_q();
        assert_eq!(parse_value(&l, "1/8").unwrap(), AbsValue::pow(Base::half(), qi(3)));
        assert_eq!(parse_rational("1.05").unwrap(), q(21, 20));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
    }

    #[test]
    fn formulas() {
        let phi = parse_formula("norm(X0-X1)").unwrap();
        assert_eq!(phi, Formula::Norm(parse_poly("X0 - X1").unwrap()));
        let psi = parse_formula("inf(X1, max(dist(X0, X1), tsub(1/2, star(X1))))").unwrap();
        assert_eq!(parse_formula(&psi.to_string()).unwrap(), psi);
        assert!(matches!(parse_formula("norm(X0, X1)"), Err(MvfError::Parse { position: 0, .. })));
        assert!(matches!(parse_formula("foo(X0)"), Err(MvfError::Parse { .. })));
    }
}
