//! Conversions between Cauchy-transform and R-transform relations, and
//! free additive summation of R-transforms by elimination.
//!
//! With `K` the compositional inverse of `C` and `R(b) = 1/K(b) - 1/b`,
//! a relation `P(C, b, ξ)` becomes `P(b, b/(1 + bR), ξ)` and a relation
//! `Q(R, b, ξ)` becomes `Q(1/b - 1/C, C, ξ)` after clearing denominators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::cyclo::{direct_cauchy_series, factor_cauchy};
use crate::error::{Error, Result};
use crate::exact::gcd::squarefree_part;
use crate::exact::mpoly::{MPoly, Var};
use crate::exact::relation::{minimal_relation_dividing, seed_of, AlgebraicRelation, RelationKind};
use crate::exact::resultant::sylvester_resultant;
use crate::exact::series::{XiPoly, XiSeries};
use crate::green::lift_branch;

/// The indices `(m_1, …, m_N)` of the central subgroup in each factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkSpec {
    m: Vec<usize>,
}

impl WalkSpec {
    pub fn new(m: Vec<usize>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidArgument("at least one factor is required".into()));
        }
        if let Some(&bad) = m.iter().find(|&&x| x < 2) {
            return Err(Error::InvalidArgument(format!("every index must be at least 2, got {bad}")));
        }
        Ok(WalkSpec { m })
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn factors(&self) -> usize {
        self.m.len()
    }

    /// Size `2N` of the symmetric generating set.
    pub fn s_size(&self) -> usize {
        2 * self.m.len()
    }

    pub fn all_two(&self) -> bool {
        self.m.iter().all(|&x| x == 2)
    }

    pub fn all_even(&self) -> bool {
        self.m.iter().all(|&x| x % 2 == 0)
    }
}

impl FromStr for WalkSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad index {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        WalkSpec::new(m)
    }
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Default order for checking that a relation annihilates its branch.
pub fn verification_order(poly: &MPoly) -> usize {
    2 * poly.total_degree() + 6
}

/// `R = 1/K - 1/b` where `K` is the compositional inverse of `c`.
pub fn r_series_of_cauchy_series(c: &XiSeries) -> Result<XiSeries> {
    let k = c.compositional_inverse()?;
    let kk = k.div_b()?;
    let one = XiSeries::constant(XiPoly::one(), kk.order());
    (&kk.inverse()? - &one).div_b()
}

/// `C` as the compositional inverse of `K = b/(1 + bR)`.
pub fn cauchy_series_of_r_series(r: &XiSeries) -> Result<XiSeries> {
    let mut one_br = vec![XiPoly::one()];
    one_br.extend(r.coeffs().iter().cloned());
    let k = XiSeries::from_coeffs(one_br).inverse()?;
    let mut kb = vec![XiPoly::zero()];
    kb.extend(k.coeffs().iter().cloned());
    XiSeries::from_coeffs(kb).compositional_inverse()
}

/// R-series of the single factor `Z ⊇ nZ` through `b^order`, from the
/// walk-count Cauchy series.
pub fn r_series_from_cauchy(n: usize, order: usize) -> Result<XiSeries> {
    r_series_of_cauchy_series(&direct_cauchy_series(n, order + 2)?)
}

fn require_kind(rel: &AlgebraicRelation, kind: RelationKind) -> Result<()> {
    if rel.kind != kind {
        return Err(Error::InvalidArgument(format!(
            "expected a {} relation, got {}",
            kind.letter(),
            rel.render()
        )));
    }
    Ok(())
}

/// Strips monomial content and repeated factors, then normalizes.
fn clean(p: &MPoly, vars: &[Var]) -> Result<MPoly> {
    let p = p.strip_monomial_content(vars);
    squarefree_part(&p, Var::X)
}

fn checked(kind: RelationKind, poly: MPoly, branch: &XiSeries) -> Result<AlgebraicRelation> {
    let rel = AlgebraicRelation::new(kind, poly, seed_of(branch))?;
    if !rel.annihilates(branch) {
        return Err(Error::BranchMismatch(format!(
            "{} does not annihilate its branch through order {}",
            rel.render(),
            branch.order()
        )));
    }
    Ok(rel)
}

/// Converts a Cauchy relation into the relation satisfied by the
/// R-transform of the same branch.
pub fn cauchy_to_r(rel: &AlgebraicRelation) -> Result<AlgebraicRelation> {
    require_kind(rel, RelationKind::Cauchy)?;
    let p = &rel.poly;
    let d = p.degree_in(Var::B) as u32;
    let one_bx = &MPoly::one() + &MPoly::monomial(BigInt::one(), [1, 1, 0]);
    let powers: Vec<MPoly> = (0..=d).map(|k| one_bx.pow(k)).collect();
    let mut out = MPoly::zero();
    for (e, c) in p.terms() {
        // c C^i b^j ξ^k -> c b^i b^j (1 + bX)^(d - j) ξ^k
        let mono = MPoly::monomial(c.clone(), [0, e[0] + e[1], e[2]]);
        out = &out + &(&mono * &powers[(d - e[1]) as usize]);
    }
    let mut out = out.strip_monomial_content(&[Var::B, Var::Xi]);
    while let Some(q) = out.div_exact(&one_bx) {
        out = q;
    }
    let poly = clean(&out, &[Var::B, Var::Xi])?;

    let order = verification_order(p).max(verification_order(&poly));
    let c = lift_branch(rel, order + 2)?;
    let r = r_series_of_cauchy_series(&c)?;
    checked(RelationKind::RTransform, poly, &r)
}

/// Converts an R relation into the relation satisfied by the Cauchy
/// transform of the same branch.
pub fn r_to_cauchy(rel: &AlgebraicRelation) -> Result<AlgebraicRelation> {
    require_kind(rel, RelationKind::RTransform)?;
    let q = &rel.poly;
    let d = q.degree_in(Var::X) as u32;
    let x_minus_b = &MPoly::var(Var::X) - &MPoly::var(Var::B);
    let bx = MPoly::monomial(BigInt::one(), [1, 1, 0]);
    let mut out = MPoly::zero();
    for (e, c) in q.terms() {
        // c R^i b^j ξ^k -> c (X - b)^i (bX)^(d - i) X^j ξ^k
        let mono = MPoly::monomial(c.clone(), [e[1], 0, e[2]]);
        let t = &(&mono * &x_minus_b.pow(e[0])) * &bx.pow(d - e[0]);
        out = &out + &t;
    }
    let poly = clean(&out, &[Var::X, Var::B, Var::Xi])?;

    let order = verification_order(q).max(verification_order(&poly));
    let r = lift_branch(rel, order)?;
    let c = cauchy_series_of_r_series(&r)?;
    checked(RelationKind::Cauchy, poly, &c)
}

/// `Res_z(qa(z), qb(X - z))`, annihilating every sum of a root of `qa`
/// and a root of `qb`.
pub fn sum_resultant(qa: &MPoly, qb: &MPoly) -> Result<MPoly> {
    let fa = qa.coeffs_in(Var::X);
    // qb(X - z) = Σ_i c_i Σ_k binom(i, k) X^(i-k) (-z)^k, grouped by k
    let cb = qb.coeffs_in(Var::X);
    let mut fb = vec![MPoly::zero(); cb.len()];
    for (i, c) in cb.iter().enumerate() {
        let mut binom = BigInt::one();
        for k in 0..=i {
            let sign = if k % 2 == 0 { binom.clone() } else { -binom.clone() };
            let term = &c.shift(Var::X, (i - k) as u32) * &MPoly::constant(sign);
            fb[k] = &fb[k] + &term;
            binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
        }
    }
    sylvester_resultant(&fa, &fb)
}

/// Relation for the sum of the given R-transforms. Each relation is paired
/// with an independently computed series of its branch; the summed series
/// selects the physical factor of the eliminant.
pub fn r_sum_relation(parts: &[(AlgebraicRelation, XiSeries)]) -> Result<AlgebraicRelation> {
    let Some((first, first_series)) = parts.first() else {
        return Err(Error::InvalidArgument("no relations to sum".into()));
    };
    require_kind(first, RelationKind::RTransform)?;
    if !first.annihilates(first_series) {
        return Err(Error::BranchMismatch(format!("series does not satisfy {}", first.render())));
    }
    let mut acc = first.clone();
    let mut acc_series = first_series.clone();
    for (rel, series) in &parts[1..] {
        require_kind(rel, RelationKind::RTransform)?;
        if !rel.annihilates(series) {
            return Err(Error::BranchMismatch(format!("series does not satisfy {}", rel.render())));
        }
        let res = sum_resultant(&acc.poly, &rel.poly)?;
        if res.is_zero() || !res.contains_var(Var::X) {
            return Err(Error::EliminationFailure(format!(
                "eliminant of {} and {} is degenerate",
                acc.render(),
                rel.render()
            )));
        }
        let sf = squarefree_part(&res, Var::X)?;
        acc_series = &acc_series + series;
        if !XiSeries::eval_relation(&sf, &acc_series).is_zero() {
            return Err(Error::EliminationFailure(format!(
                "summed series is not annihilated by the eliminant of {} and {}",
                acc.render(),
                rel.render()
            )));
        }
        acc = minimal_relation_dividing(&acc_series, &sf, RelationKind::RTransform)?;
    }
    Ok(acc)
}

/// Relations `(Q, P)` for the R-transform and Cauchy transform of the
/// adjacency operator of `G_{m_1,…,m_N}`.
pub fn pipeline(spec: &WalkSpec) -> Result<(AlgebraicRelation, AlgebraicRelation)> {
    let mut singles: Vec<(usize, AlgebraicRelation)> = Vec::new();
    for &m in spec.m() {
        if singles.iter().all(|(n, _)| *n != m) {
            let c = factor_cauchy(m)?.relation();
            singles.push((m, cauchy_to_r(&c)?));
        }
    }
    let single = |m: usize| singles.iter().find(|(n, _)| *n == m).map(|(_, r)| r.clone()).expect("computed above");

    let mut order = 24;
    let q = loop {
        let parts = spec
            .m()
            .iter()
            .map(|&m| Ok((single(m), r_series_from_cauchy(m, order)?)))
            .collect::<Result<Vec<_>>>()?;
        match r_sum_relation(&parts) {
            Err(Error::InsufficientOrder { needed, .. }) if needed > order => order = needed,
            other => break other?,
        }
    };
    let p = r_to_cauchy(&q)?;
    Ok((q, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::factor_cauchy;
    use num_rational::BigRational;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    fn q_single(n: usize) -> AlgebraicRelation {
        cauchy_to_r(&factor_cauchy(n).unwrap().relation()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(WalkSpec::new(vec![]).is_err());
        assert!("2,1".parse::<WalkSpec>().is_err());
        let s: WalkSpec = "2, 3".parse().unwrap();
        assert_eq!(s.m(), &[2, 3]);
        assert_eq!(s.s_size(), 4);
    }

    #[test]
    fn single_factor_r_relations() {
        assert_eq!(q_single(2).poly, p("b R^2 + R - b(2 + xi)").normalized());
        assert_eq!(q_single(3).poly, p("b^2R^3+2bR^2+(1-3b^2)R-b(2+ b xi)").normalized());
    }

    #[test]
    fn identity_relation_has_zero_r_transform() {
        let c = AlgebraicRelation::new(RelationKind::Cauchy, p("X - b"), XiSeries::b(4)).unwrap();
        let r = cauchy_to_r(&c).unwrap();
        assert_eq!(r.poly, p("X"));
        let back = r_to_cauchy(&r).unwrap();
        assert_eq!(back.poly, p("X - b"));
    }

    #[test]
    fn r_series_leading_terms() {
        let r = r_series_from_cauchy(2, 5).unwrap();
        let t = XiPoly::from_ints([2, 1]);
        assert_eq!(r.coeff(1), &t);
        assert!(r.coeff(2).is_zero());
        assert_eq!(r.coeff(3), &(&t * &t).scale(&BigRational::from_integer((-1).into())));
        assert_eq!(r.coeff(5), &(&(&t * &t) * &t).scale(&BigRational::from_integer(2.into())));
        let r3 = r_series_from_cauchy(3, 4).unwrap();
        assert_eq!(r3.coeff(1), &XiPoly::from_int(2));
        assert_eq!(r3.coeff(2), &XiPoly::xi());
        assert!(q_single(3).annihilates(&r3));
    }

    #[test]
    fn two_index_two_factors() {
        let spec = WalkSpec::new(vec![2, 2]).unwrap();
        let (q, pc) = pipeline(&spec).unwrap();
        assert_eq!(q.poly, p("bR^2 + 2R - 4b(2 + xi)").normalized());
        assert_eq!(pc.poly, p("(1 - 8b^2 - 4b^2 xi) C^2 - b^2").normalized());
    }

    #[test]
    fn single_factor_pipeline_round_trips() {
        for n in 2..=5 {
            let spec = WalkSpec::new(vec![n]).unwrap();
            let (_, pc) = pipeline(&spec).unwrap();
            assert_eq!(pc.poly, factor_cauchy(n).unwrap().relation().poly, "n = {n}");
        }
    }
}
