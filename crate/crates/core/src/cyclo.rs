//! The operator-valued Cauchy transform of a single factor `Z ⊇ nZ`.
//!
//! The conditional expectation onto `C[nZ]` averages over the `n`
//! rotations `λ ↦ ω^j λ`, so the transform is a quotient of a symmetric
//! product of linear factors. The product is expanded exactly in the group
//! ring `Z[ω]/(ω^n - 1)` with Laurent coefficients in `λ`; the result is
//! `C(b) = b p(b) / (q(b) - b^n ξ)` with `ξ = λ^n + λ^{-n}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::mpoly::MPoly;
use crate::exact::relation::{seed_of, AlgebraicRelation, RelationKind};
use crate::exact::series::{XiPoly, XiSeries};

/// Element `Σ c_i ω^i` of `Z[ω]/(ω^n - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    coeffs: Vec<BigInt>,
}

impl CycloElem {
    pub fn zero(n: usize) -> Self {
        CycloElem { coeffs: vec![BigInt::zero(); n] }
    }

    pub fn from_int(n: usize, c: BigInt) -> Self {
        let mut e = CycloElem::zero(n);
        e.coeffs[0] = c;
        e
    }

    /// `c ω^k`, exponent taken mod `n`.
    pub fn monomial(n: usize, k: i64, c: BigInt) -> Self {
        let mut e = CycloElem::zero(n);
        e.coeffs[k.rem_euclid(n as i64) as usize] = c;
        e
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, rhs: &CycloElem) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }

    pub fn mul(&self, rhs: &CycloElem) -> CycloElem {
        let n = self.order();
        let mut out = CycloElem::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.coeffs[(i + j) % n] += a * b;
            }
        }
        out
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Remainder modulo the `n`-th cyclotomic polynomial, low to high,
    /// trimmed. This is the image of the element under `ω ↦ e^{2πi/n}`.
    pub fn reduce_cyclotomic(&self) -> Vec<BigInt> {
        poly_rem_monic(&self.coeffs, &cyclotomic(self.order()))
    }

    /// The integer this element evaluates to at a primitive `n`-th root of
    /// unity, if that value is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self.reduce_cyclotomic().as_slice() {
            [] => Some(BigInt::zero()),
            [c] => Some(c.clone()),
            _ => None,
        }
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Remainder of `a` by the monic polynomial `m` (coefficients low to high).
fn poly_rem_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top].clone();
        let shift = top - dm;
        for (i, c) in m.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        trim(&mut r);
    }
    r
}

/// Quotient of `a` by the monic polynomial `m`, which must divide exactly.
fn poly_div_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(dm)];
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top].clone();
        let shift = top - dm;
        for (i, c) in m.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "cyclotomic division left a remainder");
    q
}

/// The cyclotomic polynomial `Φ_n`, coefficients low to high.
pub fn cyclotomic(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = poly_div_monic(&p, &cyclotomic(d));
    }
    p
}

/// Laurent polynomial in `λ` with coefficients in `Z[ω]/(ω^n - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentGR {
    n: usize,
    terms: BTreeMap<i64, CycloElem>,
}

impl LaurentGR {
    pub fn zero(n: usize) -> Self {
        LaurentGR { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut l = LaurentGR::zero(n);
        l.add_term(0, &CycloElem::from_int(n, BigInt::one()));
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, CycloElem> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> CycloElem {
        self.terms.get(&k).cloned().unwrap_or_else(|| CycloElem::zero(self.n))
    }

    pub fn add_term(&mut self, k: i64, c: &CycloElem) {
        let e = self.terms.entry(k).or_insert_with(|| CycloElem::zero(self.n));
        e.add_assign(c);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, rhs: &LaurentGR) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c);
        }
    }

    pub fn mul(&self, rhs: &LaurentGR) -> LaurentGR {
        let mut out = LaurentGR::zero(self.n);
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.add_term(i + j, &a.mul(b));
            }
        }
        out
    }

    pub fn neg(&self) -> LaurentGR {
        LaurentGR {
            n: self.n,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }
}

/// Polynomial in `b` with `LaurentGR` coefficients, low to high.
type BPoly = Vec<LaurentGR>;

fn bpoly_mul(a: &BPoly, b: &BPoly, n: usize) -> BPoly {
    let mut out = vec![LaurentGR::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_assign(&x.mul(y));
        }
    }
    out
}

/// The factor `1 - (ω^j λ + ω^{-j} λ^{-1}) b`.
fn rotated_factor(n: usize, j: i64) -> BPoly {
    let mut lin = LaurentGR::zero(n);
    lin.add_term(1, &CycloElem::monomial(n, j, -BigInt::one()));
    lin.add_term(-1, &CycloElem::monomial(n, -j, -BigInt::one()));
    vec![LaurentGR::one(n), lin]
}

/// `C(b) = b p(b) / (q(b) - b^n ξ)` for the inclusion `nZ ⊆ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyFactorization {
    pub n: usize,
    pub p_poly: Vec<BigInt>,
    pub q_poly: Vec<BigInt>,
}

impl CauchyFactorization {
    /// The relation `(q(b) - b^n ξ) X - b p(b)` satisfied by `X = C(b)`.
    pub fn relation_poly(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (j, c) in self.q_poly.iter().enumerate() {
            out.add_term([1, j as u32, 0], c.clone());
        }
        out.add_term([1, self.n as u32, 1], -BigInt::one());
        for (j, c) in self.p_poly.iter().enumerate() {
            out.add_term([0, j as u32 + 1, 0], -c);
        }
        out
    }

    /// Expansion of `b p(b) / (q(b) - b^n ξ)` through `b^order`.
    pub fn series(&self, order: usize) -> XiSeries {
        let mut num = MPoly::zero();
        for (j, c) in self.p_poly.iter().enumerate() {
            num.add_term([0, j as u32 + 1, 0], c.clone());
        }
        let mut den = MPoly::zero();
        for (j, c) in self.q_poly.iter().enumerate() {
            den.add_term([0, j as u32, 0], c.clone());
        }
        den.add_term([0, self.n as u32, 1], -BigInt::one());
        let inv = XiSeries::from_bxi(&den, order)
            .inverse()
            .expect("q(0) = 1 makes the denominator invertible");
        &XiSeries::from_bxi(&num, order) * &inv
    }

    /// The relation with its branch seed.
    pub fn relation(&self) -> AlgebraicRelation {
        AlgebraicRelation::new(RelationKind::Cauchy, self.relation_poly(), seed_of(&self.series(8)))
            .expect("the factor series annihilates its own relation")
    }
}

/// Expands the averaged product over the `n` rotations and extracts `p` and
/// `q`, asserting every integrality property along the way.
pub fn factor_cauchy(n: usize) -> Result<CauchyFactorization> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("factor index must be at least 2, got {n}")));
    }
    let factors: Vec<BPoly> = (0..n as i64).map(|j| rotated_factor(n, j)).collect();
    let one: BPoly = vec![LaurentGR::one(n)];
    let product = |skip: Option<usize>| {
        factors
            .iter()
            .enumerate()
            .filter(|(j, _)| Some(*j) != skip)
            .fold(one.clone(), |acc, (_, f)| bpoly_mul(&acc, f, n))
    };
    let den = product(None);
    let mut num = vec![LaurentGR::zero(n); n];
    for k in 0..n {
        for (slot, c) in num.iter_mut().zip(product(Some(k))) {
            slot.add_assign(&c);
        }
    }

    let internal = |msg: String| Error::Internal(format!("factor {n}: {msg}"));
    let integer_at = |l: &LaurentGR, k: i64, what: &str, j: usize| {
        l.coeff(k)
            .to_integer()
            .ok_or_else(|| internal(format!("{what} coefficient of b^{j} λ^{k} is not an integer")))
    };

    let mut q_poly = Vec::with_capacity(n + 1);
    for (j, c) in den.iter().enumerate() {
        q_poly.push(integer_at(c, 0, "denominator", j)?);
        for &k in c.terms().keys().filter(|&&k| k != 0) {
            let v = integer_at(c, k, "denominator", j)?;
            let allowed = j == n && k.unsigned_abs() as usize == n;
            if allowed {
                if v != -BigInt::one() {
                    return Err(internal(format!("b^{n} carries {v} λ^{k}, expected -1")));
                }
            } else if !v.is_zero() {
                return Err(internal(format!("unexpected term {v} b^{j} λ^{k} in denominator")));
            }
        }
    }
    if !integer_at(&den[n], n as i64, "denominator", n)?.eq(&-BigInt::one()) {
        return Err(internal(format!("b^{n} is missing its λ^{n} term")));
    }
    let mut p_poly = Vec::with_capacity(n);
    for (j, c) in num.iter().enumerate() {
        for &k in c.terms().keys().filter(|&&k| k != 0) {
            let v = integer_at(c, k, "numerator", j)?;
            if !v.is_zero() {
                return Err(internal(format!("unexpected term {v} b^{j} λ^{k} in numerator")));
            }
        }
        let v = integer_at(c, 0, "numerator", j)?;
        let (quo, rem) = v.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(internal(format!("numerator coefficient {v} of b^{j} is not divisible by {n}")));
        }
        p_poly.push(quo);
    }
    trim(&mut p_poly);
    trim(&mut q_poly);
    if !p_poly.first().is_some_and(One::is_one) || !q_poly.first().is_some_and(One::is_one) {
        return Err(internal("constant terms of p and q must be 1".into()));
    }
    if p_poly.len() > n || q_poly.len() > n + 1 {
        return Err(internal("degree bounds violated".into()));
    }
    Ok(CauchyFactorization { n, p_poly, q_poly })
}

/// `λ^{mn} + λ^{-mn}` as a polynomial in `ξ = λ^n + λ^{-n}`.
pub fn chebyshev_fold(m: usize) -> XiPoly {
    let mut prev = XiPoly::from_int(2);
    if m == 0 {
        return prev;
    }
    let mut cur = XiPoly::xi();
    for _ in 1..m {
        let next = &(&XiPoly::xi() * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `Σ_k E(T^k) b^{k+1}` through `b^order`, with `E(T^k)` read off from
/// binomial endpoint counts of the simple walk on `Z` at multiples of `n`.
pub fn direct_cauchy_series(n: usize, order: usize) -> Result<XiSeries> {
    if n < 2 || order < 1 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2 and order >= 1, got n = {n}, order = {order}"
        )));
    }
    let folds: Vec<XiPoly> = (0..=order / n + 1).map(chebyshev_fold).collect();
    let mut out = XiSeries::zero(order);
    let mut row = vec![BigInt::one()];
    for k in 0..order {
        // row holds binom(k, i), i = 0..=k; endpoint j = 2i - k
        let mut e = XiPoly::zero();
        for (i, c) in row.iter().enumerate() {
            let j = 2 * i as i64 - k as i64;
            if j < 0 || j % n as i64 != 0 {
                continue;
            }
            let m = j as usize / n;
            let term = if m == 0 {
                XiPoly::constant(c.clone().into())
            } else {
                folds[m].scale(&c.clone().into())
            };
            e.add_assign_ref(&term);
        }
        out.set_coeff(k + 1, e);
        let mut next = vec![BigInt::one(); k + 2];
        for i in 1..=k {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    Ok(out)
}
