//! Multivariate gcd over the integers by recursive primitive remainder
//! sequences, plus content removal and squarefree parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp;
use super::mpoly::{MPoly, Var};
use crate::error::{Error, Result};

/// Highest-precedence variable occurring in either polynomial.
fn main_var(f: &MPoly, g: &MPoly) -> Option<Var> {
    Var::ALL
        .into_iter()
        .find(|&v| f.contains_var(v) || g.contains_var(v))
}

fn sign_normalize(f: MPoly) -> MPoly {
    match f.leading_term() {
        Some((_, c)) if c.is_negative() => -f,
        _ => f,
    }
}

/// Greatest common divisor in `Z[X, b, ξ]`, with positive leading
/// coefficient. `gcd(0, 0) = 0`.
///
/// The heuristic evaluation gcd is tried first; its answer is accepted only
/// after exact division. Otherwise a primitive remainder sequence is used.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if !f.is_zero() && !g.is_zero() {
        if let Some(h) = heuristic_gcd(f, g, &[Var::Xi, Var::B, Var::X]) {
            return sign_normalize(h);
        }
    }
    prs_gcd(f, g)
}

fn max_norm(f: &MPoly) -> BigInt {
    f.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// `f` with `v` replaced by the integer `x`.
fn eval_var(f: &MPoly, v: Var, x: &BigInt) -> MPoly {
    let i = v.index();
    let mut powers = vec![BigInt::one()];
    for _ in 0..f.degree_in(v) {
        let next = powers.last().expect("nonempty") * x;
        powers.push(next);
    }
    MPoly::from_terms(f.terms().map(|(e, c)| {
        let mut e2 = *e;
        e2[i] = 0;
        (e2, c * &powers[e[i] as usize])
    }))
}

/// Reads the coefficients of `v` off the balanced base-`x` digits of `h`.
fn interpolate(h: &MPoly, v: Var, x: &BigInt) -> MPoly {
    let half = x / 2;
    let mut rest = h.clone();
    let mut out = MPoly::zero();
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = MPoly::from_terms(rest.terms().map(|(e, c)| {
            let mut r = c.mod_floor(x);
            if r > half {
                r -= x;
            }
            (*e, r)
        }));
        out = &out + &digit.shift(v, k);
        let diff = &rest - &digit;
        rest = MPoly::from_terms(diff.terms().map(|(e, c)| (*e, c / x)));
        k += 1;
    }
    out
}

/// Heuristic gcd by evaluation at large integers, one variable at a time.
/// Returns the full gcd (including integer content) or `None`.
fn heuristic_gcd(f: &MPoly, g: &MPoly, vars: &[Var]) -> Option<MPoly> {
    let cf = f.integer_content();
    let cg = g.integer_content();
    let c = cf.gcd(&cg);
    let Some((&v, rest)) = vars.split_first() else {
        return Some(MPoly::constant(c));
    };
    let f = f.div_exact(&MPoly::constant(cf)).expect("content divides");
    let g = g.div_exact(&MPoly::constant(cg)).expect("content divides");
    if !f.contains_var(v) && !g.contains_var(v) {
        return heuristic_gcd(&f, &g, rest).map(|h| h.scale(&c));
    }
    let mut x = max_norm(&f).min(max_norm(&g)) * 2 + 29;
    for _ in 0..6 {
        let fe = eval_var(&f, v, &x);
        let ge = eval_var(&g, v, &x);
        if !fe.is_zero() && !ge.is_zero() {
            if let Some(h) = heuristic_gcd(&fe, &ge, rest) {
                let cand = interpolate(&h, v, &x);
                if !cand.is_zero() {
                    let cc = cand.integer_content();
                    let cand = cand.div_exact(&MPoly::constant(cc)).expect("content divides");
                    if f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                        return Some(cand.scale(&c));
                    }
                }
            }
        }
        x = x * 73794 / 27011;
    }
    None
}

/// gcd by recursive primitive remainder sequences.
fn prs_gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return sign_normalize(g.clone());
    }
    if g.is_zero() {
        return sign_normalize(f.clone());
    }
    let Some(v) = main_var(f, g) else {
        let c = f.coeff(&[0, 0, 0]).gcd(&g.coeff(&[0, 0, 0]));
        return MPoly::constant(c);
    };
    if !f.contains_var(v) {
        return prs_gcd(f, &content_in(g, v));
    }
    if !g.contains_var(v) {
        return prs_gcd(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = prs_gcd(&cf, &cg);
    let mut a = f.div_exact(&cf).expect("content divides");
    let mut b = g.div_exact(&cg).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let res = loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        if !r.contains_var(v) {
            break MPoly::one();
        }
        a = b;
        b = primitive_part_in(&r, v);
    };
    sign_normalize(&c * &primitive_part_in(&res, v))
}

/// Pseudo-remainder of `f` by `g` with respect to `v`.
pub fn prem(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
    let dg = g.degree_in(v);
    let lg = g.lead_coeff_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.contains_var(v) && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lr = r.lead_coeff_in(v);
        let t = lr.shift(v, (dr - dg) as u32);
        r = &(&r * &lg) - &(&t * g);
    }
    r
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &MPoly, v: Var) -> MPoly {
    let mut coeffs = f.coeffs_in(v);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.num_terms());
    let mut acc = MPoly::zero();
    for c in &coeffs {
        acc = gcd(&acc, c);
        if acc.is_constant() && acc.coeff(&[0, 0, 0]).is_one() {
            break;
        }
    }
    acc
}

pub fn primitive_part_in(f: &MPoly, v: Var) -> MPoly {
    if f.is_zero() {
        return f.clone();
    }
    let c = content_in(f, v);
    sign_normalize(f.div_exact(&c).expect("content divides"))
}

/// Squarefree part with respect to `var`: the product of the distinct
/// irreducible factors of `f` that involve `var`, content-normalized.
///
/// A modular specialization first checks whether the primitive part is
/// already squarefree; only otherwise is the full gcd with the derivative
/// computed.
pub fn squarefree_part(f: &MPoly, var: Var) -> Result<MPoly> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("squarefree part of zero".into()));
    }
    if !f.contains_var(var) {
        return Ok(MPoly::one());
    }
    let pp = primitive_part_in(f, var);
    if specialization_is_squarefree(&pp, var) {
        return Ok(pp.normalized());
    }
    let g = gcd(&pp, &pp.derivative(var));
    let out = pp
        .div_exact(&g)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".into()))?;
    Ok(out.normalized())
}

/// Certifies squarefreeness in `var` by substituting fixed pseudo-random
/// residues for the other variables. Never returns a false positive; may
/// return false for a squarefree input.
fn specialization_is_squarefree(f: &MPoly, var: Var) -> bool {
    let d = f.degree_in(var);
    for k in 0..2 {
        let uni = modp::specialize(f, var, modp::sample_point(k));
        if uni[d] == 0 {
            continue;
        }
        let du = modp::upoly::derivative(&uni);
        if du.is_empty() {
            continue;
        }
        if modp::upoly::gcd_degree(&uni, &du) == 0 {
            return true;
        }
    }
    false
}

/// Integer gcd helper used when normalizing rational solution vectors.
pub fn lcm_all<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, d| {
        if d.is_zero() {
            acc
        } else {
            acc.lcm(d)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let a = p("X + b xi - 1");
        let b = p("b X^2 - xi");
        let c = p("X - b + 2");
        let g = gcd(&(&a * &b), &(&a * &c));
        assert_eq!(g, a.normalized());
        assert_eq!(gcd(&p("6 b"), &p("4 b^2")), p("2b"));
        assert_eq!(gcd(&b, &c), p("1"));
        let h = gcd(&(&(&a * &a) * &b), &(&a * &p("3")));
        assert_eq!(h, a.normalized());
    }

    #[test]
    fn heuristic_agrees_with_remainder_sequence() {
        let a = p("3 b X^2 - xi X + 7 b^2 - 1");
        let b = p("X^3 + b xi - 2");
        let c = p("b X - xi^2 + 5");
        let f = &(&a * &b) * &p("6");
        let g = &(&a * &c) * &p("4 b");
        let h = heuristic_gcd(&f, &g, &[Var::Xi, Var::B, Var::X]).expect("heuristic succeeds");
        assert_eq!(sign_normalize(h), prs_gcd(&f, &g));
        assert_eq!(gcd(&f, &g), &a * &p("2"));
    }

    #[test]
    fn content_and_primitive_part() {
        let f = p("(b + 1)(X^2 b - xi X + 3)");
        assert_eq!(content_in(&f, Var::X), p("b + 1"));
        assert_eq!(primitive_part_in(&f, Var::X), p("X^2 b - xi X + 3"));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("X^2 (X + 1)"), Var::X).unwrap(), p("X(X+1)").normalized());
        let f = p("(b X - 1)^2 (X - xi)");
        assert_eq!(
            squarefree_part(&f, Var::X).unwrap(),
            p("(b X - 1)(X - xi)").normalized()
        );
        let q2 = p("b X^2 + X - b(2 + xi)");
        assert_eq!(squarefree_part(&q2, Var::X).unwrap(), q2.normalized());
        // content free of X is dropped
        assert_eq!(squarefree_part(&p("b^3 (X - 1)^3"), Var::X).unwrap(), p("X - 1"));
        assert!(squarefree_part(&MPoly::zero(), Var::X).is_err());
    }
}
