//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients in the three variables `X`, `b` and `ξ`.
//!
//! Terms are kept in a `BTreeMap` keyed by the exponent triple
//! `[deg_X, deg_b, deg_ξ]`, so iteration follows the lexicographic term
//! order with `X > b > ξ` and the last entry is the leading term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// One of the three polynomial variables. `X` stands for whichever
/// transform (`C`, `R` or `G`) the relation describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    B,
    Xi,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::B, Var::Xi];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::B => 1,
            Var::Xi => 2,
        }
    }
}

pub type Exponent = [u32; 3];

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(c: BigInt, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, BigInt)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0, 0])
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Adds `c * monomial(e)` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: Var) -> usize {
        let i = v.index();
        self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn valuation_in(&self, v: Var) -> usize {
        let i = v.index();
        self.terms.keys().map(|e| e[i] as usize).min().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        let i = v.index();
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1] + e[2]) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `v^k`.
    pub fn shift(&self, v: Var, k: u32) -> MPoly {
        let i = v.index();
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[i] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Divides by the monomial `v^k`; every term must be divisible.
    pub fn unshift(&self, v: Var, k: u32) -> MPoly {
        let i = v.index();
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    assert!(e[i] >= k, "unshift: term not divisible");
                    e[i] -= k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Removes the largest monomial power of each listed variable that
    /// divides every term.
    pub fn strip_monomial_content(&self, vars: &[Var]) -> MPoly {
        let mut out = self.clone();
        for &v in vars {
            let k = out.valuation_in(v) as u32;
            if k > 0 {
                out = out.unshift(v, k);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let i = v.index();
        MPoly::from_terms(self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[i] -= 1;
            (e2, c * BigInt::from(e[i]))
        }))
    }

    /// Splits into coefficients of `v^0, v^1, …`; each coefficient is free
    /// of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let i = v.index();
        let mut out = vec![MPoly::zero(); self.degree_in(v) + 1];
        if self.is_zero() {
            return vec![];
        }
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let k = e2[i] as usize;
            e2[i] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut e2 = *e;
                e2[v.index()] += k as u32;
                out.add_term(e2, x.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`, as a polynomial free of `v`.
    pub fn lead_coeff_in(&self, v: Var) -> MPoly {
        let d = self.degree_in(v) as u32;
        let i = v.index();
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == d)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[i] = 0;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// gcd of all integer coefficients (0 for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content-normalized form: integer content 1, leading term (lex,
    /// `X > b > ξ`) positive.
    pub fn normalized(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.integer_content();
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c / &g)).collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero()
            || (self.integer_content().is_one()
                && self.leading_term().map(|(_, c)| c.is_positive()).unwrap_or(false))
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does
    /// not divide `self` in `Z[X, b, ξ]`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading_term()?;
        let (de, dc) = (*de, dc.clone());
        if d.terms.len() == 1 {
            let mut q = BTreeMap::new();
            for (e, c) in &self.terms {
                if e[0] < de[0] || e[1] < de[1] || e[2] < de[2] {
                    return None;
                }
                let (qc, r) = c.div_rem(&dc);
                if !r.is_zero() {
                    return None;
                }
                q.insert([e[0] - de[0], e[1] - de[1], e[2] - de[2]], qc);
            }
            return Some(MPoly { terms: q });
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((re, rc)) = rem.leading_term() {
            if re[0] < de[0] || re[1] < de[1] || re[2] < de[2] {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            for (e, c) in &d.terms {
                rem.add_term([e[0] + qe[0], e[1] + qe[1], e[2] + qe[2]], -(c * &qc));
            }
            quot.terms.insert(qe, qc);
        }
        Some(quot)
    }

    /// Substitutes integer values for `b` and `ξ`, returning the
    /// coefficients of the resulting univariate polynomial in `X`.
    pub fn eval_b_xi(&self, b: &BigInt, xi: &BigInt) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree_in(Var::X) + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] += c * b.pow(e[1]) * xi.pow(e[2]);
        }
        out
    }

    /// Renders with `x_name` for the `X` variable, grouping by descending
    /// powers of `X`; coefficients list terms by ascending `(b, ξ)` degree.
    pub fn render(&self, x_name: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let coeffs = self.coeffs_in(Var::X);
        let mut out = String::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xpart = match k {
                0 => String::new(),
                1 => x_name.to_string(),
                _ => format!("{x_name}^{k}"),
            };
            let mut inner: Vec<(&Exponent, &BigInt)> = c.terms.iter().collect();
            inner.sort_by_key(|(e, _)| (e[1] + e[2], e[1], e[2]));
            let (body, negative) = if inner.len() == 1 {
                let (e, v) = inner[0];
                let mono = render_bxi(e);
                let a = v.abs();
                let body = match (mono.is_empty(), xpart.is_empty(), a.is_one()) {
                    (true, true, _) => a.to_string(),
                    (true, false, true) => xpart.clone(),
                    (true, false, false) => format!("{a}*{xpart}"),
                    (false, true, true) => mono,
                    (false, true, false) => format!("{a}*{mono}"),
                    (false, false, true) => format!("{mono}*{xpart}"),
                    (false, false, false) => format!("{a}*{mono}*{xpart}"),
                };
                (body, v.is_negative())
            } else {
                let mut s = String::new();
                for (idx, (e, v)) in inner.iter().enumerate() {
                    let mono = render_bxi(e);
                    let a = v.abs();
                    let t = match (mono.is_empty(), a.is_one()) {
                        (true, _) => a.to_string(),
                        (false, true) => mono,
                        (false, false) => format!("{a}*{mono}"),
                    };
                    if idx == 0 {
                        if v.is_negative() {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if v.is_negative() { " - " } else { " + " });
                    }
                    s.push_str(&t);
                }
                let body = if xpart.is_empty() { format!("({s})") } else { format!("({s})*{xpart}") };
                (body, false)
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn render_bxi(e: &Exponent) -> String {
    let mut parts = Vec::new();
    match e[1] {
        0 => {}
        1 => parts.push("b".to_string()),
        k => parts.push(format!("b^{k}")),
    }
    match e[2] {
        0 => {}
        1 => parts.push("xi".to_string()),
        k => parts.push(format!("xi^{k}")),
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("X"))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self.render("X"))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(*e, c.clone());
        }
        big
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut acc: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let bad = |msg: String| Error::InvalidArgument(format!("polynomial parse: {msg}"));
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' | '{' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' | '}' => {
                out.push(Tok::RParen);
                i += 1
            }
            'ξ' => {
                out.push(Tok::Var(Var::Xi));
                i += 1
            }
            '\\' => {
                if chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&'i') {
                    out.push(Tok::Var(Var::Xi));
                    i += 3;
                } else {
                    return Err(bad(format!("unexpected escape at {i}")));
                }
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Tok::Num(lit.parse().map_err(|_| bad(lit.clone()))?));
            }
            'x' if chars.get(i + 1) == Some(&'i') => {
                out.push(Tok::Var(Var::Xi));
                i += 2;
            }
            'b' => {
                out.push(Tok::Var(Var::B));
                i += 1
            }
            'X' | 'R' | 'C' | 'G' => {
                out.push(Tok::Var(Var::X));
                i += 1
            }
            other => return Err(bad(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = match self.next() {
                Some(Tok::Num(n)) => u32::try_from(&n)
                    .map_err(|_| Error::InvalidArgument("polynomial parse: exponent too large".into()))?,
                Some(Tok::LParen) => {
                    let k = match self.next() {
                        Some(Tok::Num(n)) => u32::try_from(&n).map_err(|_| {
                            Error::InvalidArgument("polynomial parse: exponent too large".into())
                        })?,
                        _ => return Err(Error::InvalidArgument("polynomial parse: bad exponent".into())),
                    };
                    if self.next() != Some(Tok::RParen) {
                        return Err(Error::InvalidArgument("polynomial parse: unclosed exponent".into()));
                    }
                    k
                }
                _ => return Err(Error::InvalidArgument("polynomial parse: bad exponent".into())),
            };
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(MPoly::constant(n)),
            Some(Tok::Var(v)) => Ok(MPoly::var(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::InvalidArgument("polynomial parse: unbalanced parentheses".into()));
                }
                Ok(inner)
            }
            other => Err(Error::InvalidArgument(format!("polynomial parse: unexpected token {other:?}"))),
        }
    }
}

/// Parses the notation used for printed relations: integers, the
/// variables `b`, `xi` (also `ξ`, `\xi`) and one of `X`/`R`/`C`/`G`,
/// with `+ - * ^`, parentheses and implicit multiplication.
impl FromStr for MPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<MPoly> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::InvalidArgument("polynomial parse: empty input".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::InvalidArgument(format!(
                "polynomial parse: trailing input at token {}",
                p.pos
            )));
        }
        Ok(out)
    }
}
