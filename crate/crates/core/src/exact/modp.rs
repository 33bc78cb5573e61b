//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used only as a sound pre-screen in front of exact computations: a
//! modular rank is a lower bound for the rational rank, and a squarefree
//! specialization certifies a squarefree polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::mpoly::{MPoly, Var};

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let w = (a as u128) * (b as u128);
    let lo = (w as u64) & P;
    let hi = (w >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

pub fn from_bigint(x: &BigInt) -> u64 {
    let r = x.mod_floor(&BigInt::from(P));
    r.to_u64().expect("reduced residue fits in u64")
}

/// Residue of a rational, or `None` if its denominator vanishes mod P.
pub fn from_rational(x: &BigRational) -> Option<u64> {
    let d = from_bigint(x.denom());
    if d == 0 {
        return None;
    }
    Some(mul(from_bigint(x.numer()), inv(d)))
}

/// Deterministic pseudo-random residues for evaluation point `k`.
pub fn sample_point(k: u64) -> [u64; 3] {
    let mut state = k.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x2545_f491_4f6c_dd1d);
    let mut next = || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) % P
    };
    [next(), next(), next()]
}

/// Univariate image of `f` in `var` after substituting `pt` for the other
/// variables (the entry of `pt` at `var` is ignored).
pub fn specialize(f: &MPoly, var: Var, pt: [u64; 3]) -> Vec<u64> {
    let vi = var.index();
    let mut uni = vec![0u64; f.degree_in(var) + 1];
    for (e, c) in f.terms() {
        let mut val = from_bigint(c);
        for (k, &x) in e.iter().enumerate() {
            if k != vi && x > 0 {
                val = mul(val, pow(pt[k], x as u64));
            }
        }
        let slot = e[vi] as usize;
        uni[slot] = add(uni[slot], val);
    }
    uni
}

/// Rank of a dense matrix over GF(P). Rows are consumed.
pub fn rank(mut rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    pivot_rows(&mut rows, ncols).len()
}

/// Row-reduces in place and returns the indices (in the original order) of
/// a maximal set of linearly independent rows.
pub fn pivot_rows(rows: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    eliminate(rows, ncols).0
}

/// Row-reduces in place, taking columns left to right; returns the original
/// indices of the pivot rows and the pivot columns. A column without a
/// pivot depends on the columns before it.
pub fn eliminate(rows: &mut [Vec<u64>], ncols: usize) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        order.swap(r, piv);
        let pinv = inv(rows[r][c]);
        for x in rows[r][c..].iter_mut() {
            *x = mul(*x, pinv);
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = sub(*x, mul(f, y));
            }
        }
        cols.push(c);
        r += 1;
    }
    order.truncate(r);
    (order, cols)
}

/// A basis of the right kernel of a dense matrix over GF(P).
pub fn nullspace(mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let pinv = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = mul(*x, pinv);
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if i == r || f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x = sub(*x, mul(f, y));
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free = (0..ncols).filter(|c| !pivot_cols.contains(c));
    free.map(|f| {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (row, &pc) in rows.iter().zip(&pivot_cols) {
            v[pc] = sub(0, row[f]);
        }
        v
    })
    .collect()
}

/// The rational `n/d` with `|n|, d < sqrt(P/2)` congruent to `a`, if any.
pub fn rational_reconstruct(a: u64) -> Option<BigRational> {
    let bound = ((P / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    Some(BigRational::new(BigInt::from(r1), BigInt::from(t1)))
}

/// Univariate polynomial helpers over GF(P); coefficients low to high.
pub mod upoly {
    use super::*;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn derivative(a: &[u64]) -> Vec<u64> {
        let mut d: Vec<u64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul(c, (i as u64) % P))
            .collect();
        trim(&mut d);
        d
    }

    pub fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let linv = inv(b[db]);
        while r.len() > db {
            let dr = r.len() - 1;
            let f = mul(r[dr], linv);
            let shift = dr - db;
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = sub(r[shift + i], mul(f, c));
            }
            trim(&mut r);
        }
        r
    }

    /// Monic gcd of two polynomials, not both zero.
    pub fn gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y);
            x = y;
            y = r;
        }
        monic(&x)
    }

    /// Degree of gcd(a, b); both nonzero.
    pub fn gcd_degree(a: &[u64], b: &[u64]) -> usize {
        gcd(a, b).len().saturating_sub(1)
    }

    pub fn monic(a: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        if let Some(&l) = a.last() {
            let li = inv(l);
            for c in a.iter_mut() {
                *c = mul(*c, li);
            }
        }
        a
    }

    fn mul_mod(a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add(out[i + j], mul(x, y));
            }
        }
        rem(&out, f)
    }

    /// Exact quotient of `a` by the monic polynomial `m`.
    fn div_monic(a: &[u64], m: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let mut q = vec![0u64; r.len().saturating_sub(dm)];
        while r.len() > dm {
            let top = r.len() - 1;
            let f = r[top];
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = sub(r[shift + i], mul(f, c));
            }
            q[shift] = f;
            trim(&mut r);
        }
        q
    }

    /// `x^(P^k)` reduced modulo `f`, from `h = x^(P^(k-1)) mod f`.
    fn frobenius(h: &[u64], f: &[u64]) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut base = rem(h, f);
        let mut e = P;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &base, f);
            }
            base = mul_mod(&base, &base, f);
            e >>= 1;
        }
        result
    }

    /// Degrees of the irreducible factors of a squarefree polynomial of
    /// positive degree, by distinct-degree factorization.
    pub fn factor_degrees(f: &[u64]) -> Vec<usize> {
        let mut g = monic(f);
        let mut degrees = Vec::new();
        let mut h = vec![0, 1];
        let mut k = 1;
        while g.len() > 1 && 2 * k < g.len() {
            h = frobenius(&h, &g);
            let mut hx = h.clone();
            hx.resize(hx.len().max(2), 0);
            hx[1] = sub(hx[1], 1);
            let d = gcd(&g, &hx);
            let dd = d.len() - 1;
            if dd > 0 {
                degrees.extend(std::iter::repeat_n(k, dd / k));
                g = div_monic(&g, &d);
                h = rem(&h, &g);
            }
            k += 1;
        }
        if g.len() > 1 {
            degrees.push(g.len() - 1);
        }
        degrees
    }
}
