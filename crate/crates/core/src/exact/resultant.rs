//! Sylvester resultants evaluated by fraction-free (Bareiss) elimination.

use super::mpoly::{MPoly, Var};
use crate::error::{Error, Result};

/// Resultant of `f` and `g` eliminating `var`.
pub fn resultant(f: &MPoly, g: &MPoly, var: Var) -> Result<MPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidArgument("resultant of a zero polynomial".into()));
    }
    if f.degree_in(var) == 0 || g.degree_in(var) == 0 {
        return Err(Error::InvalidArgument(format!(
            "resultant needs positive degree in {var:?} for both inputs"
        )));
    }
    sylvester_resultant(&f.coeffs_in(var), &g.coeffs_in(var))
}

/// Resultant of two univariate polynomials given by coefficient lists
/// (index = power of the eliminated variable) over `Z[X, b, ξ]`.
pub fn sylvester_resultant(f: &[MPoly], g: &[MPoly]) -> Result<MPoly> {
    let m = f.len().checked_sub(1).filter(|&d| d > 0);
    let n = g.len().checked_sub(1).filter(|&d| d > 0);
    let (Some(m), Some(n)) = (m, n) else {
        return Err(Error::InvalidArgument("resultant needs positive degrees".into()));
    };
    if f[m].is_zero() || g[n].is_zero() {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    let size = m + n;
    let mut mat = vec![vec![MPoly::zero(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + (m - k)] = f[k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + (n - k)] = g[k].clone();
        }
    }
    bareiss_determinant(mat)
}

/// Determinant of a square matrix over `Z[X, b, ξ]`, fraction-free.
pub fn bareiss_determinant(mut mat: Vec<Vec<MPoly>>) -> Result<MPoly> {
    let size = mat.len();
    if size == 0 {
        return Ok(MPoly::one());
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&i| !mat[i][k].is_zero()) else {
                return Ok(MPoly::zero());
            };
            mat.swap(k, p);
            negate = !negate;
        }
        let (head, tail) = mat.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..size {
                let mut num = &row[j] * pivot;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    num = &num - &(&factor * &pivot_row[j]);
                }
                row[j] = if prev.is_constant() && prev.coeff(&[0, 0, 0]) == 1.into() {
                    num
                } else {
                    num.div_exact(&prev).ok_or_else(|| {
                        Error::Internal("Bareiss step is not an exact division".into())
                    })?
                };
            }
            row[k] = MPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if negate { -det } else { det })
}
