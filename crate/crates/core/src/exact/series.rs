//! Polynomials in `ξ` over the rationals and truncated power series in `b`
//! whose coefficients are such polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Var};
use crate::error::{Error, Result};

/// Polynomial in `ξ` with rational coefficients, stored as integer
/// numerators (low degree first, trailing zeros trimmed) over one positive
/// denominator coprime to their content.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XiPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Default for XiPoly {
    fn default() -> Self {
        XiPoly::zero()
    }
}

impl XiPoly {
    pub fn zero() -> Self {
        XiPoly { num: Vec::new(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_bigints([BigInt::from(c)])
    }

    pub fn xi() -> Self {
        Self::from_ints([0, 1])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(num, den)
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        Self::from_bigints(it.into_iter().map(BigInt::from))
    }

    pub fn from_bigints<I: IntoIterator<Item = BigInt>>(it: I) -> Self {
        Self::from_parts(it.into_iter().collect(), BigInt::one())
    }

    /// `(Σ num_k ξ^k) / den`, brought to canonical form.
    pub fn from_parts(num: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut p = XiPoly { num, den };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.num.last().is_some_and(Zero::is_zero) {
            self.num.pop();
        }
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    /// Integer numerators over [`XiPoly::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        match self.num.get(k) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.num.len().saturating_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Integer coefficients, or `None` if any coefficient is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn scale(&self, c: &BigRational) -> XiPoly {
        if c.is_zero() || self.is_zero() {
            return XiPoly::zero();
        }
        Self::from_parts(
            self.num.iter().map(|x| x * c.numer()).collect(),
            &self.den * c.denom(),
        )
    }

    pub fn scale_int(&self, c: &BigInt) -> XiPoly {
        if c.is_zero() || self.is_zero() {
            return XiPoly::zero();
        }
        Self::from_parts(self.num.iter().map(|x| x * c).collect(), self.den.clone())
    }

    /// Multiplies by `ξ^k`.
    pub fn shift(&self, k: usize) -> XiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.num.iter().cloned());
        XiPoly { num, den: self.den.clone() }
    }

    /// Adds `num / den` (numerators not yet trimmed) to `self`.
    fn add_parts(&mut self, mut num: Vec<BigInt>, den: &BigInt) {
        if self.den == *den {
            if self.num.len() < num.len() {
                self.num.resize(num.len(), BigInt::zero());
            }
            for (a, b) in self.num.iter_mut().zip(num) {
                *a += b;
            }
        } else {
            let l = self.den.lcm(den);
            let fs = &l / &self.den;
            let fo = &l / den;
            if !fs.is_one() {
                for c in self.num.iter_mut() {
                    *c *= &fs;
                }
            }
            if !fo.is_one() {
                for c in num.iter_mut() {
                    *c *= &fo;
                }
            }
            if self.num.len() < num.len() {
                self.num.resize(num.len(), BigInt::zero());
            }
            for (a, b) in self.num.iter_mut().zip(num) {
                *a += b;
            }
            self.den = l;
        }
        self.normalize();
    }

    pub fn add_assign_ref(&mut self, rhs: &XiPoly) {
        if rhs.is_zero() {
            return;
        }
        self.add_parts(rhs.num.clone(), &rhs.den);
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &XiPoly, b: &XiPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let n = a.num.len() + b.num.len() - 1;
        let mut prod = vec![BigInt::zero(); n];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        if a.den.is_one() && b.den.is_one() {
            self.add_parts(prod, &BigInt::one());
        } else {
            self.add_parts(prod, &(&a.den * &b.den));
        }
    }

    /// Exact quotient by `d`, or `None` if `d` does not divide `self` in
    /// `Q[ξ]`.
    pub fn div_exact(&self, d: &XiPoly) -> Option<XiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(XiPoly::zero());
        }
        let dd = d.degree();
        if self.num.len() <= dd {
            return None;
        }
        // quotient of numerators over Q, then adjust denominators
        let lead = &d.num[dd];
        let mut rem: Vec<BigRational> = self.num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut q = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &rem[k + dd] / BigRational::from_integer(lead.clone());
            if !f.is_zero() {
                for (i, c) in d.num.iter().enumerate() {
                    rem[k + i] -= &f * BigRational::from_integer(c.clone());
                }
            }
            q[k] = f;
        }
        if !rem.iter().all(Zero::is_zero) {
            return None;
        }
        let scale = BigRational::new(d.den.clone(), self.den.clone());
        Some(XiPoly::from_coeffs(q).scale(&scale))
    }

    pub fn eval(&self, xi: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.num.iter().rev() {
            acc = acc * xi + BigRational::from_integer(c.clone());
        }
        acc / BigRational::from_integer(self.den.clone())
    }

    /// Common denominator of all coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.den.clone()
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "xi".to_string(),
                _ => format!("xi^{k}"),
            };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiPoly({self})")
    }
}

impl Add for &XiPoly {
    type Output = XiPoly;
    fn add(self, rhs: &XiPoly) -> XiPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &XiPoly {
    type Output = XiPoly;
    fn sub(self, rhs: &XiPoly) -> XiPoly {
        let mut out = self.clone();
        out.add_assign_ref(&-rhs);
        out
    }
}

impl Neg for &XiPoly {
    type Output = XiPoly;
    fn neg(self) -> XiPoly {
        XiPoly {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &XiPoly {
    type Output = XiPoly;
    fn mul(self, rhs: &XiPoly) -> XiPoly {
        let mut out = XiPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

/// Power series `c_0 + c_1 b + … + c_K b^K` truncated after order `K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XiSeries {
    coeffs: Vec<XiPoly>,
}

impl XiSeries {
    pub fn zero(order: usize) -> Self {
        XiSeries {
            coeffs: vec![XiPoly::zero(); order + 1],
        }
    }

    /// The series `b` itself, truncated at `order`.
    pub fn b(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = XiPoly::one();
        }
        s
    }

    pub fn constant(c: XiPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from its coefficients; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<XiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        XiSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[XiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &XiPoly {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: XiPoly) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> XiSeries {
        assert!(order <= self.order(), "cannot extend a truncated series");
        XiSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &XiPoly) -> XiSeries {
        XiSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `b^k`; the order is kept.
    pub fn mul_b_pow(&self, k: usize) -> XiSeries {
        let mut out = Self::zero(self.order());
        for i in 0..=self.order() {
            if i + k <= self.order() {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// Divides by `b`; needs `c_0 = 0` and lowers the order by one.
    pub fn div_b(&self) -> Result<XiSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument("series has a nonzero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::InvalidArgument("series of order 0 cannot be divided by b".into()));
        }
        Ok(XiSeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplicative inverse; `c_0` must be a nonzero rational constant.
    pub fn inverse(&self) -> Result<XiSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() || !c0.is_constant() {
            return Err(Error::NotInvertible(format!("constant term {c0} is not a unit")));
        }
        let inv0 = c0.coeff(0).recip();
        let k = self.order();
        let mut out = vec![XiPoly::zero(); k + 1];
        out[0] = XiPoly::constant(inv0.clone());
        for n in 1..=k {
            let mut acc = XiPoly::zero();
            for j in 1..=n {
                acc.add_product(&self.coeffs[j], &out[n - j]);
            }
            out[n] = acc.scale(&-&inv0);
        }
        Ok(XiSeries { coeffs: out })
    }

    /// Composition `self(g(b))`; `g` must have zero constant term.
    pub fn compose(&self, g: &XiSeries) -> Result<XiSeries> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument("inner series must vanish at b = 0".into()));
        }
        let k = self.order().min(g.order());
        let g = g.truncate(k);
        let mut acc = XiSeries::constant(self.coeffs[k].clone(), k);
        for i in (0..k).rev() {
            acc = &acc * &g;
            acc.coeffs[0].add_assign_ref(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion: for `f = b·φ(b)` with
    /// `φ(0)` a nonzero constant, `[b^k] g = (1/k) [w^{k-1}] φ(w)^{-k}`.
    pub fn compositional_inverse(&self) -> Result<XiSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible("constant term must vanish".into()));
        }
        if self.order() < 1 {
            return Err(Error::NotInvertible("series of order 0 has no linear term".into()));
        }
        let c1 = &self.coeffs[1];
        if c1.is_zero() || !c1.is_constant() {
            return Err(Error::NotInvertible(format!("linear coefficient {c1} is not a unit")));
        }
        let k = self.order();
        let phi = self.div_b()?;
        let h = phi.truncate(k - 1).inverse()?;
        let mut out = XiSeries::zero(k);
        let mut hp = h.clone();
        for n in 1..=k {
            let r = BigRational::new(BigInt::one(), BigInt::from(n));
            out.coeffs[n] = hp.coeffs[n - 1].scale(&r);
            if n < k {
                hp = &hp * &h;
            }
        }
        Ok(out)
    }

    /// Evaluates `poly(x(b), b, ξ)` as a series, truncated at the common
    /// order.
    pub fn eval_relation(poly: &MPoly, x: &XiSeries) -> XiSeries {
        let order = x.order();
        let coeffs = poly.coeffs_in(Var::X);
        let mut acc = XiSeries::zero(order);
        // Horner in X over series coefficients
        for c in coeffs.iter().rev() {
            acc = &acc * x;
            let cs = Self::from_bxi(c, order);
            acc = &acc + &cs;
        }
        acc
    }

    /// Embeds an `X`-free polynomial in `b, ξ` as a truncated series.
    pub fn from_bxi(p: &MPoly, order: usize) -> XiSeries {
        let mut out = XiSeries::zero(order);
        let mut by_b: Vec<Vec<BigRational>> = vec![Vec::new(); order + 1];
        for (e, c) in p.terms() {
            debug_assert_eq!(e[0], 0);
            let (j, k) = (e[1] as usize, e[2] as usize);
            if j > order {
                continue;
            }
            let row = &mut by_b[j];
            if row.len() <= k {
                row.resize(k + 1, BigRational::zero());
            }
            row[k] += BigRational::from_integer(c.clone());
        }
        for (j, row) in by_b.into_iter().enumerate() {
            out.coeffs[j] = XiPoly::from_coeffs(row);
        }
        out
    }

    pub fn pow(&self, k: usize) -> XiSeries {
        let mut out = XiSeries::constant(XiPoly::one(), self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for XiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let bpart = match k {
                0 => String::new(),
                1 => "b".to_string(),
                _ => format!("b^{k}"),
            };
            if bpart.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{bpart}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(b^{})", self.order() + 1)
    }
}

impl fmt::Debug for XiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiSeries({self})")
    }
}

impl Add for &XiSeries {
    type Output = XiSeries;
    fn add(self, rhs: &XiSeries) -> XiSeries {
        let k = self.order().min(rhs.order());
        XiSeries {
            coeffs: (0..=k).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &XiSeries {
    type Output = XiSeries;
    fn sub(self, rhs: &XiSeries) -> XiSeries {
        let k = self.order().min(rhs.order());
        XiSeries {
            coeffs: (0..=k).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Neg for &XiSeries {
    type Output = XiSeries;
    fn neg(self) -> XiSeries {
        XiSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &XiSeries {
    type Output = XiSeries;
    fn mul(self, rhs: &XiSeries) -> XiSeries {
        let k = self.order().min(rhs.order());
        let va = self.valuation().unwrap_or(k + 1);
        let vb = rhs.valuation().unwrap_or(k + 1);
        let mut out = vec![XiPoly::zero(); k + 1];
        for (n, slot) in out.iter_mut().enumerate() {
            if n < va + vb {
                continue;
            }
            for i in va..=(n - vb) {
                slot.add_product(&self.coeffs[i], &rhs.coeffs[n - i]);
            }
        }
        XiSeries { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(ints: &[&[i64]]) -> XiSeries {
        XiSeries::from_coeffs(ints.iter().map(|c| XiPoly::from_ints(c.iter().copied())).collect())
    }

    #[test]
    fn xipoly_arithmetic() {
        let a = XiPoly::from_ints([2, 1]);
        let sq = &a * &a;
        assert_eq!(sq, XiPoly::from_ints([4, 4, 1]));
        assert_eq!(sq.div_exact(&a).unwrap(), a);
        assert!(XiPoly::from_ints([1, 0, 1]).div_exact(&a).is_none());
        assert_eq!((&a - &a), XiPoly::zero());
        assert_eq!(a.to_string(), "2 + xi");
    }

    #[test]
    fn inverse_of_one_minus_b() {
        let s = series(&[&[1], &[-1], &[], &[]]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, series(&[&[1], &[1], &[1], &[1]]));
        assert!(series(&[&[0, 1], &[1]]).inverse().is_err());
    }

    #[test]
    fn compositional_inverse_identity_and_errors() {
        let b = XiSeries::b(6);
        assert_eq!(b.compositional_inverse().unwrap(), b);
        assert!(series(&[&[1], &[1]]).compositional_inverse().is_err());
        assert!(series(&[&[], &[], &[1]]).compositional_inverse().is_err());
    }

    #[test]
    fn compose_with_b_is_identity() {
        let f = series(&[&[], &[1], &[0, 1], &[3]]);
        assert_eq!(f.compose(&XiSeries::b(3)).unwrap(), f);
    }
}
