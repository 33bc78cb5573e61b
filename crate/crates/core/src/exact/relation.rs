//! Algebraic relations between a transform and `(b, ξ)`, and their
//! reconstruction from truncated series.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::gcd::lcm_all;
use super::linalg::rational_nullspace;
use super::modp;
use super::mpoly::{MPoly, Var};
use super::series::XiSeries;
use crate::error::{Error, Result};

/// Number of leading orders kept as the branch seed of a relation.
pub const SEED_ORDER: usize = 4;

/// Which transform the `X` slot of a relation stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Cauchy,
    RTransform,
}

impl RelationKind {
    pub fn letter(self) -> &'static str {
        match self {
            RelationKind::Cauchy => "C",
            RelationKind::RTransform => "R",
        }
    }
}

/// A polynomial `poly(X, b, ξ)` together with the leading terms of the
/// root it is meant to describe.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicRelation {
    pub kind: RelationKind,
    pub poly: MPoly,
    pub seed: XiSeries,
}

impl AlgebraicRelation {
    /// Builds a relation after normalizing `poly` and checking that `seed`
    /// annihilates it through the seed's order.
    pub fn new(kind: RelationKind, poly: MPoly, seed: XiSeries) -> Result<Self> {
        if poly.is_zero() || !poly.contains_var(Var::X) {
            return Err(Error::InvalidArgument(format!("relation must involve X: {poly}")));
        }
        let poly = poly.normalized();
        let rel = AlgebraicRelation { kind, poly, seed };
        if !rel.annihilates(&rel.seed) {
            return Err(Error::BranchMismatch(format!(
                "seed {} does not annihilate {}",
                rel.seed,
                rel.render()
            )));
        }
        Ok(rel)
    }

    /// True if substituting `s` for `X` gives zero through `s`'s order.
    pub fn annihilates(&self, s: &XiSeries) -> bool {
        XiSeries::eval_relation(&self.poly, s).is_zero()
    }

    pub fn degree_bounds(&self) -> DegreeBounds {
        DegreeBounds {
            x: self.poly.degree_in(Var::X),
            b: self.poly.degree_in(Var::B),
            xi: self.poly.degree_in(Var::Xi),
        }
    }

    pub fn render(&self) -> String {
        self.poly.render(self.kind.letter())
    }
}

impl fmt::Debug for AlgebraicRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [seed {}]", self.kind.letter(), self.render(), self.seed)
    }
}

/// Degree bounds `(deg_X, deg_b, deg_ξ)` for an unknown relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeBounds {
    pub x: usize,
    pub b: usize,
    pub xi: usize,
}

impl DegreeBounds {
    pub fn new(x: usize, b: usize, xi: usize) -> Self {
        DegreeBounds { x, b, xi }
    }

    pub fn total(&self) -> usize {
        self.x + self.b + self.xi
    }

    fn tuple(&self) -> (usize, usize, usize) {
        (self.x, self.b, self.xi)
    }
}

/// Seed taken from the leading terms of a series.
pub fn seed_of(s: &XiSeries) -> XiSeries {
    s.truncate(s.order().min(SEED_ORDER))
}

/// Powers `s^0, …, s^d` of a series, with their coefficients reduced mod p
/// when no denominator vanishes there.
struct Powers {
    series: Vec<XiSeries>,
    residues: Option<Vec<Vec<Vec<u64>>>>,
}

impl Powers {
    fn new(s: &XiSeries, d: usize) -> Self {
        let mut series = vec![XiSeries::constant(super::series::XiPoly::one(), s.order())];
        for i in 1..=d {
            series.push(&series[i - 1] * s);
        }
        let residues = series
            .iter()
            .map(|pw| {
                pw.coeffs()
                    .iter()
                    .map(|c| {
                        let den = modp::from_bigint(c.denominator());
                        (den != 0).then(|| {
                            let inv = modp::inv(den);
                            c.numerators().iter().map(|x| modp::mul(modp::from_bigint(x), inv)).collect()
                        })
                    })
                    .collect::<Option<Vec<Vec<u64>>>>()
            })
            .collect();
        Powers { series, residues }
    }
}

/// Linear system whose kernel consists of the coefficient vectors of
/// polynomials `Σ c_{ijk} X^i b^j ξ^k` annihilating a series.
struct AnnihilatorSystem<'a> {
    powers: &'a [XiSeries],
    residues: Option<&'a [Vec<Vec<u64>>]>,
    d: usize,
    db: usize,
    dxi: usize,
    rows: Vec<(usize, usize)>,
}

impl<'a> AnnihilatorSystem<'a> {
    fn new(pw: &'a Powers, d: usize, db: usize, dxi: usize) -> Self {
        let powers = &pw.series[..];
        let order = powers[0].order();
        let mut rows = Vec::new();
        for t in 0..=order {
            let mut top = dxi;
            for pw in &powers[..=d] {
                for j in 0..=db.min(t) {
                    let c = pw.coeff(t - j);
                    if !c.is_zero() {
                        let deg = c.degree() + dxi;
                        top = top.max(deg);
                    }
                }
            }
            rows.extend((0..=top).map(|u| (t, u)));
        }
        AnnihilatorSystem { powers, residues: pw.residues.as_deref(), d, db, dxi, rows }
    }

    fn unknowns(&self) -> usize {
        (self.d + 1) * (self.db + 1) * (self.dxi + 1)
    }

    fn column(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.db + 1) + j) * (self.dxi + 1) + k
    }

    fn entry(&self, row: (usize, usize), i: usize, j: usize, k: usize) -> Option<BigRational> {
        let (t, u) = row;
        if t < j || u < k {
            return None;
        }
        let c = self.powers[i].coeff(t - j);
        let x = c.numerators().get(u - k).filter(|x| !x.is_zero())?;
        Some(BigRational::new(x.clone(), c.denominator().clone()))
    }

    fn modular_rows(&self) -> Option<Vec<Vec<u64>>> {
        let res = self.residues?;
        let n = self.unknowns();
        let mut out = Vec::with_capacity(self.rows.len());
        for &(t, u) in &self.rows {
            let mut r = vec![0u64; n];
            for (i, pw) in res.iter().enumerate().take(self.d + 1) {
                for j in 0..=self.db.min(t) {
                    let c = &pw[t - j];
                    for k in 0..=self.dxi.min(u) {
                        if let Some(&x) = c.get(u - k) {
                            r[self.column(i, j, k)] = x;
                        }
                    }
                }
            }
            out.push(r);
        }
        Some(out)
    }

    /// Modular nullities of the column subsets `{key(i, j, k) <= v}` for
    /// `v = 0..levels`, from one elimination with those columns first.
    fn nullity_profile(&self, key: impl Fn(usize, usize, usize) -> usize, levels: usize) -> Option<Vec<usize>> {
        let mut cols: Vec<(usize, usize)> = Vec::with_capacity(self.unknowns());
        for i in 0..=self.d {
            for j in 0..=self.db {
                for k in 0..=self.dxi {
                    cols.push((key(i, j, k), self.column(i, j, k)));
                }
            }
        }
        cols.sort_unstable();
        let mut rows: Vec<Vec<u64>> = self
            .modular_rows()?
            .into_iter()
            .map(|r| cols.iter().map(|&(_, c)| r[c]).collect())
            .collect();
        let (_, pivots) = modp::eliminate(&mut rows, cols.len());
        let mut is_pivot = vec![false; cols.len()];
        for p in pivots {
            is_pivot[p] = true;
        }
        Some(
            (0..levels)
                .map(|v| cols.iter().zip(&is_pivot).filter(|((kv, _), &piv)| *kv <= v && !piv).count())
                .collect(),
        )
    }

    fn exact_row(&self, row: (usize, usize)) -> Vec<BigRational> {
        let mut r = vec![BigRational::zero(); self.unknowns()];
        for i in 0..=self.d {
            for j in 0..=self.db {
                for k in 0..=self.dxi {
                    if let Some(x) = self.entry(row, i, j, k) {
                        r[self.column(i, j, k)] = x;
                    }
                }
            }
        }
        r
    }

    /// Modular nullity (an upper bound for the rational nullity) and the
    /// indices of a maximal independent row set mod p.
    fn modular_screen(&self) -> Option<(usize, Vec<usize>)> {
        let mut rows = self.modular_rows()?;
        let piv = modp::pivot_rows(&mut rows, self.unknowns());
        Some((self.unknowns() - piv.len(), piv))
    }

    fn to_poly(&self, v: &[BigRational]) -> MPoly {
        let den = lcm_all(v.iter().map(|x| x.denom()));
        let mut p = MPoly::zero();
        for i in 0..=self.d {
            for j in 0..=self.db {
                for k in 0..=self.dxi {
                    let x = &v[self.column(i, j, k)];
                    if !x.is_zero() {
                        let c = (x * BigRational::from_integer(den.clone())).to_integer();
                        p.add_term([i as u32, j as u32, k as u32], c);
                    }
                }
            }
        }
        p.normalized()
    }

    /// A one-dimensional modular kernel lifted by rational reconstruction,
    /// kept only if it annihilates the series exactly.
    fn reconstructed_kernel(&self) -> Option<MPoly> {
        let kernel = modp::nullspace(self.modular_rows()?, self.unknowns());
        let [v] = kernel.as_slice() else {
            return None;
        };
        let v = v.iter().map(|&x| modp::rational_reconstruct(x)).collect::<Option<Vec<_>>>()?;
        let poly = self.to_poly(&v);
        (!poly.is_zero() && XiSeries::eval_relation(&poly, &self.powers[1]).is_zero()).then_some(poly)
    }

    /// Exact rational kernel of the system, as normalized polynomials.
    fn exact_kernel(&self, pivots: Option<&[usize]>) -> Vec<MPoly> {
        let n = self.unknowns();
        if let Some(v) = self.reconstructed_kernel() {
            return vec![v];
        }
        if let Some(piv) = pivots {
            let rows: Vec<Vec<BigRational>> = piv.iter().map(|&r| self.exact_row(self.rows[r])).collect();
            let basis = rational_nullspace(rows, n);
            let polys: Vec<MPoly> = basis.iter().map(|v| self.to_poly(v)).collect();
            if polys.iter().all(|p| XiSeries::eval_relation(p, &self.powers[1]).is_zero()) {
                return polys;
            }
        }
        let rows: Vec<Vec<BigRational>> = self.rows.iter().map(|&r| self.exact_row(r)).collect();
        rational_nullspace(rows, n)
            .iter()
            .map(|v| self.to_poly(v))
            .collect()
    }
}

/// `X`-degrees that a factor of `c` over `Q(b, ξ)` can have, ascending,
/// excluding 0.
///
/// Every factorization of `c` survives specialization of `b` and `ξ` to
/// residues that keep the leading coefficient nonzero, so the degree of a
/// true factor is a sum of factor degrees of each squarefree modular image.
/// Intersecting these sums over several images narrows the candidates.
pub fn possible_factor_degrees(c: &MPoly) -> Vec<usize> {
    const TRIALS: u64 = 24;
    const WANTED: usize = 8;
    let d = c.degree_in(Var::X);
    let mut allowed = vec![true; d + 1];
    let mut used = 0;
    for k in 0..TRIALS {
        let uni = modp::specialize(c, Var::X, modp::sample_point(1000 + k));
        if uni[d] == 0 {
            continue;
        }
        let du = modp::upoly::derivative(&uni);
        if du.is_empty() || modp::upoly::gcd_degree(&uni, &du) != 0 {
            continue;
        }
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for f in modp::upoly::factor_degrees(&uni) {
            for s in (f..=d).rev() {
                sums[s] |= sums[s - f];
            }
        }
        for (a, s) in allowed.iter_mut().zip(&sums) {
            *a &= *s;
        }
        used += 1;
        if used >= WANTED || allowed[1..d].iter().all(|a| !a) {
            break;
        }
    }
    (1..=d).filter(|&k| allowed[k]).collect()
}

/// Number of equation rows needed beyond the unknown count.
const ROW_MARGIN: usize = 4;

/// Finds the lowest-degree nonzero integer polynomial within `bounds`
/// annihilating `s` through its full order.
///
/// Degrees in `X` are tried in increasing order; for the first degree with
/// a solution the `b`- and then `ξ`-bounds are shrunk to their minimum,
/// which leaves a one-dimensional kernel unless the relation is genuinely
/// ambiguous. Kernels are screened modulo a prime first and only computed
/// over the rationals where the screen reports a nontrivial kernel.
pub fn minimal_relation(s: &XiSeries, bounds: DegreeBounds, kind: RelationKind) -> Result<AlgebraicRelation> {
    search(s, bounds, kind, None)
}

/// Like [`minimal_relation`], restricted to divisors of `candidate`, which
/// must annihilate `s`. Bounds come from `candidate`; if no annihilator of
/// lower `X`-degree exists, `candidate` itself is returned.
pub fn minimal_relation_dividing(s: &XiSeries, candidate: &MPoly, kind: RelationKind) -> Result<AlgebraicRelation> {
    let bounds = DegreeBounds::new(
        candidate.degree_in(Var::X),
        candidate.degree_in(Var::B),
        candidate.degree_in(Var::Xi),
    );
    search(s, bounds, kind, Some(candidate))
}

fn search(s: &XiSeries, bounds: DegreeBounds, kind: RelationKind, candidate: Option<&MPoly>) -> Result<AlgebraicRelation> {
    if bounds.x == 0 {
        return Err(Error::BoundsTooSmall(bounds.tuple()));
    }
    if let Some(c) = candidate {
        if !XiSeries::eval_relation(c, s).is_zero() {
            return Err(Error::EliminationFailure(format!(
                "candidate does not annihilate the branch series: {c}"
            )));
        }
    }
    let powers = Powers::new(s, bounds.x);
    let found = |p: MPoly| AlgebraicRelation::new(kind, p, seed_of(s));
    let degrees: Vec<usize> = match candidate {
        Some(c) => possible_factor_degrees(c),
        None => (1..=bounds.x).collect(),
    };
    let more_order = || Error::InsufficientOrder {
        have: s.order(),
        needed: s.order() + s.order() / 2 + 4,
    };
    let shortfall = |sys: &AnnihilatorSystem| {
        let deficit = (sys.unknowns() + ROW_MARGIN).saturating_sub(sys.rows.len());
        Error::InsufficientOrder {
            have: s.order(),
            needed: s.order() + deficit.div_ceil(bounds.xi + 1) + 1,
        }
    };
    if let Some(c) = candidate {
        // The minimal polynomial divides every annihilator, so a divisor of
        // the candidate spanning a one-dimensional kernel is minimal; the
        // b-bound grows only as far as the series order supports.
        let mut short = None;
        for d in degrees {
            if d == bounds.x {
                return match short {
                    None => found(c.normalized()),
                    Some(e) => Err(e),
                };
            }
            let supported = (0..=bounds.b)
                .map(|v| AnnihilatorSystem::new(&powers, d, v, bounds.xi))
                .take_while(|sys| sys.rows.len() >= sys.unknowns() + ROW_MARGIN)
                .last();
            let Some(sys) = supported else {
                short.get_or_insert_with(|| shortfall(&AnnihilatorSystem::new(&powers, d, 0, bounds.xi)));
                continue;
            };
            let top = sys.db;
            if !has_kernel(&sys) {
                if top < bounds.b {
                    short.get_or_insert_with(|| shortfall(&AnnihilatorSystem::new(&powers, d, top + 1, bounds.xi)));
                }
                continue;
            }
            let db = smallest_bound(&sys, |_, j, _| j, top, |v| AnnihilatorSystem::new(&powers, d, v, bounds.xi));
            let sys = AnnihilatorSystem::new(&powers, d, db, bounds.xi);
            let dxi = smallest_bound(&sys, |_, _, k| k, bounds.xi, |v| AnnihilatorSystem::new(&powers, d, db, v));
            let sys = AnnihilatorSystem::new(&powers, d, db, dxi);
            let screen = sys.modular_screen();
            if matches!(screen, Some((n, _)) if n > 1) {
                return Err(more_order());
            }
            let kernel = sys.exact_kernel(screen.map(|(_, p)| p).as_deref());
            match kernel.as_slice() {
                [] => continue,
                [f] if c.div_exact(f).is_some() => return found(f.clone()),
                _ => return Err(more_order()),
            }
        }
        return Err(short.unwrap_or(Error::BoundsTooSmall(bounds.tuple())));
    }
    for d in degrees {
        let sys = AnnihilatorSystem::new(&powers, d, bounds.b, bounds.xi);
        if sys.rows.len() < sys.unknowns() + ROW_MARGIN {
            return Err(shortfall(&sys));
        }
        if !has_kernel(&sys) {
            continue;
        }
        // shrink the b-bound, then the xi-bound
        let db = smallest_bound(&sys, |_, j, _| j, bounds.b, |v| AnnihilatorSystem::new(&powers, d, v, bounds.xi));
        let sys = AnnihilatorSystem::new(&powers, d, db, bounds.xi);
        let dxi = smallest_bound(&sys, |_, _, k| k, bounds.xi, |v| AnnihilatorSystem::new(&powers, d, db, v));
        let sys = AnnihilatorSystem::new(&powers, d, db, dxi);
        let pivots = sys.modular_screen().map(|(_, p)| p);
        let kernel = sys.exact_kernel(pivots.as_deref());
        match kernel.len() {
            0 => continue,
            1 => return found(kernel.into_iter().next().expect("one element")),
            _ => {
                return Err(Error::AmbiguousRelation {
                    first: kernel[0].render(kind.letter()),
                    second: kernel[1].render(kind.letter()),
                })
            }
        }
    }
    Err(Error::BoundsTooSmall(bounds.tuple()))
}

/// Smallest `v <= max` whose restriction `restrict(v)` has a kernel, given
/// the system `sys` at `v = max` and the column grading `key`.
fn smallest_bound<'a>(
    sys: &AnnihilatorSystem<'a>,
    key: impl Fn(usize, usize, usize) -> usize,
    max: usize,
    restrict: impl Fn(usize) -> AnnihilatorSystem<'a>,
) -> usize {
    match sys.nullity_profile(key, max + 1) {
        Some(profile) => profile.iter().position(|&n| n > 0).unwrap_or(max),
        None => (0..max).find(|&v| has_kernel(&restrict(v))).unwrap_or(max),
    }
}

/// Whether the system has a nontrivial kernel. The modular nullity bounds
/// the rational one from above and agrees with it away from a thin set of
/// primes; the kernel that is finally returned is always computed exactly
/// and checked against the series.
fn has_kernel(sys: &AnnihilatorSystem<'_>) -> bool {
    match sys.modular_screen() {
        Some((n, _)) => n > 0,
        None => !sys.exact_kernel(None).is_empty(),
    }
}
