//! Branch expansion of algebraic relations, the trace on `C[H]`, and
//! return probabilities of the standard random walk.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::mpoly::MPoly;
use crate::exact::relation::AlgebraicRelation;
use crate::exact::series::{XiPoly, XiSeries};
use crate::transform::{pipeline, WalkSpec};

/// Extends the branch described by `rel` (selected by its seed) through
/// `b^order`.
///
/// Writing the root as `b·u(b)`, the relation becomes `b^v F(u, b)` with
/// `F(u, 0)` having `u(0)` as a simple root. Each coefficient of `u` is
/// then the solution of a linear equation whose coefficient is
/// `∂F/∂u (u(0), 0)`.
pub fn lift_branch(rel: &AlgebraicRelation, order: usize) -> Result<XiSeries> {
    let seed = &rel.seed;
    if !seed.coeff(0).is_zero() {
        return Err(Error::InvalidArgument(format!("branch seed {seed} has a constant term")));
    }
    if order == 0 {
        return Ok(XiSeries::zero(0));
    }
    let table = substituted_table(&rel.poly);
    let dx = table.rows.first().map_or(0, |r| r.len().saturating_sub(1));
    let f = |l: usize, i: usize| table.rows.get(l).and_then(|r| r.get(i));
    let u0 = if seed.order() >= 1 { seed.coeff(1).clone() } else { XiPoly::zero() };

    // F_0(u0) = 0 and D = F_0'(u0)
    let mut f0 = XiPoly::zero();
    let mut dcoef = XiPoly::zero();
    let mut u0_pow = XiPoly::one();
    for i in 0..=dx {
        if let Some(c) = f(0, i) {
            f0.add_product(c, &u0_pow);
        }
        if i < dx {
            if let Some(c) = f(0, i + 1) {
                let scaled = c.scale(&BigRational::from_integer(BigInt::from(i + 1)));
                dcoef.add_product(&scaled, &u0_pow);
            }
            u0_pow = &u0_pow * &u0;
        }
    }
    if !f0.is_zero() {
        return Err(Error::BranchMismatch(format!(
            "leading coefficient {u0} of the seed is not a root of the reduced relation"
        )));
    }
    if dcoef.is_zero() {
        return Err(Error::DegenerateBranch { order: 1 });
    }

    // powers[i][k] = [b^k] u^i, kept exact for k < current step
    let n_u = order; // u needed through b^(order - 1)
    let mut u: Vec<XiPoly> = vec![XiPoly::zero(); n_u];
    u[0] = u0.clone();
    let mut powers: Vec<Vec<XiPoly>> = vec![vec![XiPoly::zero(); n_u]; dx + 1];
    powers[0][0] = XiPoly::one();
    for i in 1..=dx {
        powers[i][0] = &powers[i - 1][0] * &u0;
    }
    for k in 1..n_u {
        // provisional [b^k] u^i with u_k = 0
        for i in 1..=dx {
            let mut acc = XiPoly::zero();
            for a in 0..k {
                if !powers[i - 1][a].is_zero() && !u[k - a].is_zero() {
                    acc.add_product(&powers[i - 1][a], &u[k - a]);
                }
            }
            acc.add_product(&powers[i - 1][k], &u[0]);
            powers[i][k] = acc;
        }
        let mut rest = XiPoly::zero();
        for l in 0..=k {
            let Some(row) = table.rows.get(l) else { break };
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    rest.add_product(c, &powers[i][k - l]);
                }
            }
        }
        let uk = rest
            .div_exact(&dcoef)
            .ok_or(Error::DegenerateBranch { order: k + 1 })?;
        let uk = -&uk;
        // correct the powers: [b^k] u^i += i u0^(i-1) u_k
        if !uk.is_zero() {
            let mut u0_pow = XiPoly::one();
            for i in 1..=dx {
                let t = &u0_pow * &uk;
                powers[i][k].add_assign_ref(&t.scale(&BigRational::from_integer(BigInt::from(i))));
                u0_pow = &u0_pow * &u0;
            }
        }
        u[k] = uk;
    }

    let mut coeffs = vec![XiPoly::zero()];
    coeffs.extend(u);
    let out = XiSeries::from_coeffs(coeffs);
    let check = seed.order().min(order);
    if out.truncate(check) != seed.truncate(check) {
        return Err(Error::BranchMismatch(format!(
            "lifted branch {} disagrees with seed {}",
            out.truncate(check),
            seed
        )));
    }
    Ok(out)
}

/// `P(b·u, b, ξ) / b^v` arranged as `rows[l][i]`: the `ξ`-polynomial
/// coefficient of `b^l u^i`.
struct SubstitutedTable {
    rows: Vec<Vec<XiPoly>>,
}

fn substituted_table(p: &MPoly) -> SubstitutedTable {
    let v = p.terms().map(|(e, _)| (e[0] + e[1]) as usize).min().unwrap_or(0);
    let dx = p.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
    let top = p.terms().map(|(e, _)| (e[0] + e[1]) as usize).max().unwrap_or(0);
    let mut dense: Vec<Vec<Vec<BigRational>>> = vec![vec![Vec::new(); dx + 1]; top - v + 1];
    for (e, c) in p.terms() {
        let (i, l, k) = (e[0] as usize, (e[0] + e[1]) as usize - v, e[2] as usize);
        let slot = &mut dense[l][i];
        if slot.len() <= k {
            slot.resize(k + 1, BigRational::zero());
        }
        slot[k] += BigRational::from_integer(c.clone());
    }
    let rows = dense
        .into_iter()
        .map(|r| r.into_iter().map(XiPoly::from_coeffs).collect())
        .collect();
    SubstitutedTable { rows }
}

/// The trace `τ(ξ^n) = binom(n, n/2)` for even `n`, `0` for odd `n`,
/// extended linearly.
pub fn trace_xi(f: &XiPoly) -> BigRational {
    let mut acc = BigRational::zero();
    let mut central = BigInt::one(); // binom(2j, j)
    for (n, c) in f.coeffs().iter().enumerate() {
        if n % 2 == 1 {
            continue;
        }
        let j = n / 2;
        if j > 0 {
            central = central * BigInt::from(2 * (2 * j - 1)) / BigInt::from(j);
        }
        acc += c * BigRational::from_integer(central.clone());
    }
    acc
}

/// Exact return probabilities `p_n = τ(T^n) / |S|^n`, `n ≤ order`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenSeries {
    pub spec: WalkSpec,
    pub order: usize,
    pub moments: Vec<BigInt>,
    pub probabilities: Vec<BigRational>,
}

impl GreenSeries {
    /// Builds the table from the Cauchy-transform branch and checks every
    /// structural invariant.
    pub fn from_branch(spec: &WalkSpec, c: &XiSeries, order: usize) -> Result<Self> {
        if c.order() < order + 1 {
            return Err(Error::InsufficientOrder { have: c.order(), needed: order + 1 });
        }
        let s = BigInt::from(spec.s_size());
        let mut moments = Vec::with_capacity(order + 1);
        let mut probabilities = Vec::with_capacity(order + 1);
        let mut scale = BigInt::one();
        for n in 0..=order {
            let t = trace_xi(c.coeff(n + 1));
            if !t.is_integer() {
                return Err(Error::Internal(format!("moment {n} is not an integer: {t}")));
            }
            let m = t.to_integer();
            probabilities.push(BigRational::new(m.clone(), scale.clone()));
            moments.push(m);
            scale *= &s;
        }
        let gs = GreenSeries { spec: spec.clone(), order, moments, probabilities };
        gs.check_invariants()?;
        Ok(gs)
    }

    /// `|S|^n p_n`, the number of closed paths of length `n`.
    pub fn path_counts(&self) -> &[BigInt] {
        &self.moments
    }

    fn check_invariants(&self) -> Result<()> {
        let p = &self.probabilities;
        if !p[0].is_one() {
            return Err(Error::Internal(format!("p_0 = {}", p[0])));
        }
        if self.order >= 1 && !p[1].is_zero() {
            return Err(Error::Internal(format!("p_1 = {}", p[1])));
        }
        if let Some((n, m)) = self.moments.iter().enumerate().find(|(_, m)| m.is_negative()) {
            return Err(Error::Internal(format!("negative path count {m} at n = {n}")));
        }
        for n in 0..=self.order / 2 {
            if p[2 * n] < &p[n] * &p[n] {
                return Err(Error::Internal(format!("p_{} < p_{n}^2", 2 * n)));
            }
        }
        if self.spec.all_even() {
            if let Some(n) = (1..=self.order).step_by(2).find(|&n| !p[n].is_zero()) {
                return Err(Error::Internal(format!("odd return probability p_{n} nonzero")));
            }
        }
        Ok(())
    }

    /// `Σ_{n ≤ order} p_n z^n` in floating point.
    pub fn partial_sum(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.probabilities.iter().rev() {
            acc = acc * z + ratio_to_f64(p);
        }
        acc
    }
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Return probabilities of the walk on `G_{m_1,…,m_N}` through `n = order`.
pub fn green_series(spec: &WalkSpec, order: usize) -> Result<GreenSeries> {
    let (_, p) = pipeline(spec)?;
    let c = lift_branch(&p, order + 1)?;
    GreenSeries::from_branch(spec, &c, order)
}

/// Spectral radius estimate from even-index return probabilities:
/// Richardson extrapolation of `a_n = (p_{2n+2}/p_{2n})^{1/2}`, assuming
/// `a_n = ρ + c/n + O(n^-2)`. Returns the last extrapolant and the
/// difference of the last two as uncertainty.
pub fn spectral_radius_estimate(gs: &GreenSeries) -> Result<(f64, f64)> {
    let even: Vec<&BigRational> = gs.probabilities.iter().step_by(2).collect();
    let nonzero = even.iter().filter(|p| !p.is_zero()).count();
    if nonzero < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 nonzero even-index terms, have {nonzero}"
        )));
    }
    if even.iter().any(|p| p.is_zero()) {
        return Err(Error::InsufficientData("an even-index return probability vanishes".into()));
    }
    let a: Vec<f64> = even
        .windows(2)
        .map(|w| ratio_to_f64(&(w[1] / w[0])).sqrt())
        .collect();
    let r: Vec<f64> = (1..a.len()).map(|n| (n + 1) as f64 * a[n] - n as f64 * a[n - 1]).collect();
    let last = r[r.len() - 1];
    let prev = r[r.len() - 2];
    Ok((last, (last - prev).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::relation::RelationKind;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn lifts_inverse_square_root_branch() {
        let rel = AlgebraicRelation::new(
            RelationKind::Cauchy,
            p("(1 - 8b^2 - 4b^2 xi) C^2 - b^2"),
            XiSeries::b(4).truncate(1),
        )
        .unwrap();
        let s = lift_branch(&rel, 5).unwrap();
        let t = XiPoly::from_ints([2, 1]);
        assert_eq!(s.coeff(1), &XiPoly::one());
        assert_eq!(s.coeff(3), &t.scale(&BigRational::from_integer(2.into())));
        assert_eq!(s.coeff(5), &(&t * &t).scale(&BigRational::from_integer(6.into())));
        assert!(s.coeff(2).is_zero() && s.coeff(4).is_zero());
        assert!(rel.annihilates(&lift_branch(&rel, 30).unwrap()));
    }

    #[test]
    fn identity_relation_lifts_to_b() {
        let rel = AlgebraicRelation::new(RelationKind::Cauchy, p("C - b"), XiSeries::b(3)).unwrap();
        assert_eq!(lift_branch(&rel, 9).unwrap(), XiSeries::b(9));
    }

    #[test]
    fn r_branch_with_polynomial_seed() {
        // R = (2 + ξ) b + ... for b R^2 + R - b(2 + ξ)
        let mut seed = XiSeries::zero(1);
        seed.set_coeff(1, XiPoly::from_ints([2, 1]));
        let rel = AlgebraicRelation::new(RelationKind::RTransform, p("bR^2 + R - b(2 + xi)"), seed).unwrap();
        let r = lift_branch(&rel, 12).unwrap();
        assert!(rel.annihilates(&r));
        let t = XiPoly::from_ints([2, 1]);
        assert_eq!(r.coeff(3), &(&t * &t).scale(&BigRational::from_integer((-1).into())));
    }

    #[test]
    fn wrong_seed_is_rejected() {
        let mut seed = XiSeries::zero(1);
        seed.set_coeff(1, XiPoly::from_int(3));
        let rel = AlgebraicRelation { kind: RelationKind::Cauchy, poly: p("C^2 - b^2"), seed };
        assert!(matches!(lift_branch(&rel, 4), Err(Error::BranchMismatch(_))));
    }

    #[test]
    fn trace_rule() {
        assert_eq!(trace_xi(&XiPoly::one()), BigRational::one());
        assert_eq!(trace_xi(&XiPoly::from_ints([0, 0, 0, 1])), BigRational::zero());
        assert_eq!(trace_xi(&XiPoly::from_ints([0, 0, 0, 0, 1])), BigRational::from_integer(6.into()));
        assert_eq!(trace_xi(&XiPoly::from_ints([1, 5, 1])), BigRational::from_integer(3.into()));
    }

    #[test]
    fn integers_as_a_single_factor() {
        let spec = WalkSpec::new(vec![2]).unwrap();
        let gs = green_series(&spec, 12).unwrap();
        let mut central = BigInt::one();
        for n in 0..=12usize {
            if n % 2 == 1 {
                assert!(gs.probabilities[n].is_zero());
                continue;
            }
            let j = n / 2;
            if j > 0 {
                central = central * BigInt::from(2 * (2 * j - 1)) / BigInt::from(j);
            }
            let expect = BigRational::new(central.clone(), BigInt::from(2).pow(n as u32));
            assert_eq!(gs.probabilities[n], expect, "n = {n}");
        }
    }
}
