//! Closed-form Green functions of the all-index-two specs, built on the
//! complete elliptic integrals
//!
//! ```text
//! K(k)     = ∫₀^{π/2} dφ / √(1 − k² sin²φ)
//! Π(n, k)  = ∫₀^{π/2} dφ / ((1 − n sin²φ) √(1 − k² sin²φ))
//! ```
//!
//! Everything is plain `f64`. The auxiliary square-root expressions are
//! evaluated through their conjugates so that no difference of nearly equal
//! numbers is ever formed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::green::green_series;
use crate::transform::WalkSpec;

/// Below this argument `green2n2_eval` sums the power series instead of the
/// closed form.
pub const SERIES_THRESHOLD: f64 = 0.05;

/// Number of series terms used below [`SERIES_THRESHOLD`].
pub const SERIES_TERMS: usize = 60;

const AGM_TOL: f64 = 4.0 * f64::EPSILON;
const CARLSON_TOL: f64 = 1e-3;

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

/// Complete elliptic integral of the first kind (modulus `k`), via the
/// arithmetic-geometric mean.
pub fn ellint_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("ellint_K needs 0 <= k < 1, got {k}")));
    }
    let (mut a, mut g) = (1.0f64, ((1.0 - k) * (1.0 + k)).sqrt());
    while (a - g).abs() > AGM_TOL * a {
        (a, g) = (0.5 * (a + g), (a * g).sqrt());
    }
    Ok(PI / (a + g))
}

/// Complete elliptic integral of the third kind with characteristic `n`
/// entering as `1 − n sin²φ`, via `R_F(0, 1−k², 1) + (n/3) R_J(0, 1−k², 1, 1−n)`.
pub fn ellint_pi(n: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("ellint_Pi needs 0 <= k < 1, got k = {k}")));
    }
    if n.is_nan() || n >= 1.0 {
        return Err(domain(format!("ellint_Pi needs n < 1, got n = {n}")));
    }
    let kc2 = (1.0 - k) * (1.0 + k);
    let mut v = carlson_rf(0.0, kc2, 1.0);
    if n != 0.0 {
        v += n / 3.0 * carlson_rj(0.0, kc2, 1.0, 1.0 - n);
    }
    Ok(v)
}

/// Carlson's `R_F(x, y, z)`; at most one argument may be zero.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < CARLSON_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// Carlson's degenerate `R_C(x, y)` for `y > 0`.
pub fn carlson_rc(mut x: f64, mut y: f64) -> f64 {
    loop {
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        let ave = (x + 2.0 * y) / 3.0;
        let s = (y - ave) / ave;
        if s.abs() < CARLSON_TOL {
            return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt();
        }
    }
}

/// Carlson's `R_J(x, y, z, p)` for `p > 0`.
pub fn carlson_rj(mut x: f64, mut y: f64, mut z: f64, mut p: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lambda).powi(2);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        let ave = 0.2 * (x + y + z + p + p);
        let (dx, dy, dz, dp) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave, (ave - p) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < CARLSON_TOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            let series = 1.0 + ed * (-C1 + C5 * ed - C6 * ee) + eb * (C7 + dp * (-C8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec;
            return 3.0 * sum + fac * series / (ave * ave.sqrt());
        }
    }
}

/// Closed-form Green function of `G_{2,2}` on `0 <= z < 1`:
/// `4 / (π √A) · K(√(B/A))` with `A, B = 2 − z² ± 2√(1 − z²)`.
pub fn green22_eval(z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("Green function of (2,2) needs 0 <= z < 1, got {z}")));
    }
    let z2 = z * z;
    let a = 2.0 - z2 + 2.0 * (1.0 - z2).sqrt();
    // B = z⁴ / A, so the modulus √(B/A) is z² / A
    Ok(4.0 / (PI * a.sqrt()) * ellint_k(z2 / a)?)
}

/// The four square-root expressions of the `G_{2,…,2}` closed form at
/// argument `z` (the formula variable, see [`green2n2_eval`]):
///
/// ```text
/// w3, w4 = 8 − N²z² ∓ 4√(4 − N²z²)
/// w5, w6 = 2 − (N−1)z² ∓ 2√(1 − (N−1)z²)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticAux {
    pub n: usize,
    pub z: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
    pub w6: f64,
}

impl EllipticAux {
    /// `w3` and `w5` come from `w3·w4 = N⁴z⁴` and `w5·w6 = (N−1)²z⁴`.
    pub fn new(n: usize, z: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need N >= 2, got {n}")));
        }
        let nf = n as f64;
        let a = nf * nf * z * z;
        let c = (nf - 1.0) * z * z;
        if !(z >= 0.0 && a <= 4.0 && c <= 1.0) {
            return Err(domain(format!("w-functions are not real at N = {n}, z = {z}")));
        }
        let w4 = 8.0 - a + 4.0 * (4.0 - a).sqrt();
        let w6 = 2.0 - c + 2.0 * (1.0 - c).sqrt();
        Ok(EllipticAux { n, z, w3: a * a / w4, w4, w5: c * c / w6, w6 })
    }

    /// Residuals of the two conjugate-product identities
    /// `w3·w4 = (8−N²z²)² − 16(4−N²z²)` and `w5·w6 = (2−(N−1)z²)² − 4(1−(N−1)z²)`,
    /// relative to the size of the terms on the right.
    pub fn product_residuals(&self) -> (f64, f64) {
        let nf = self.n as f64;
        let a = nf * nf * self.z * self.z;
        let c = (nf - 1.0) * self.z * self.z;
        let (s1, t1) = ((8.0 - a).powi(2), 16.0 * (4.0 - a));
        let (s2, t2) = ((2.0 - c).powi(2), 4.0 * (1.0 - c));
        (
            (self.w3 * self.w4 - (s1 - t1)).abs() / (s1 + t1),
            (self.w5 * self.w6 - (s2 - t2)).abs() / (s2 + t2),
        )
    }

    /// Modulus `√(w5/w6)`.
    pub fn modulus(&self) -> f64 {
        (self.w5 / self.w6).sqrt()
    }

    /// The characteristics `N²w5/((N−1)w4)` and `N²w5/((N−1)w3)`; the
    /// second is evaluated as `(N−1)w4/(N²w6)`, its value after the
    /// conjugate products cancel, which stays finite at `z = 0`.
    pub fn characteristics(&self) -> (f64, f64) {
        let nf = self.n as f64;
        (
            nf * nf * self.w5 / ((nf - 1.0) * self.w4),
            (nf - 1.0) * self.w4 / (nf * nf * self.w6),
        )
    }
}

/// Green function of `G_{2,…,2}` with `N` factors on `0 <= z < 1`.
///
/// The printed closed form is written in the variable of the four-generator
/// walk, so it is evaluated at `2z/N`. For `z` below [`SERIES_THRESHOLD`]
/// the exact power series is summed instead.
pub fn green2n2_eval(n: usize, z: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2, got {n}")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(domain(format!("Green function of N = {n} index-two factors needs 0 <= z < 1, got {z}")));
    }
    if z < SERIES_THRESHOLD {
        return series_eval(n, z);
    }
    let nf = n as f64;
    let y = 2.0 * z / nf;
    let aux = EllipticAux::new(n, y)?;
    let k = aux.modulus();
    let mut bracket = (nf - 1.0) * ellint_k(k)?;
    if n > 2 {
        let (n_upper, n_lower) = aux.characteristics();
        let weight = (nf - 2.0).powi(2) / (2.0 * (4.0 - nf * nf * y * y).sqrt());
        bracket += weight * (ellint_pi(n_upper, k)? - ellint_pi(n_lower, k)?);
    }
    Ok(8.0 / (nf * PI * aux.w6.sqrt()) * bracket)
}

static SERIES_CACHE: Mutex<BTreeMap<usize, Vec<f64>>> = Mutex::new(BTreeMap::new());

fn series_eval(n: usize, z: f64) -> Result<f64> {
    let cached = SERIES_CACHE.lock().ok().and_then(|c| c.get(&n).cloned());
    let coeffs = match cached {
        Some(c) => c,
        None => {
            let gs = green_series(&WalkSpec::new(vec![2; n])?, SERIES_TERMS)?;
            let c: Vec<f64> = gs.probabilities.iter().map(crate::green::ratio_to_f64).collect();
            if let Ok(mut cache) = SERIES_CACHE.lock() {
                cache.insert(n, c.clone());
            }
            c
        }
    };
    Ok(coeffs.iter().rev().fold(0.0, |acc, &p| acc * z + p))
}

/// The contour roots `z3, z4, z5, z6` at `ζ`: the roots of
/// `N²ζ²z² − (1 − 2N²ζ²)z + N²ζ²` and of
/// `4(N−1)ζ²z² − (1 − 8(N−1)ζ²)z + 4(N−1)ζ²`. Each pair has product 1, so
/// the small root is taken as the reciprocal of the large one.
pub fn contour_roots(n: usize, zeta: f64) -> Result<[f64; 4]> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2, got {n}")));
    }
    let nf = n as f64;
    let s = nf * nf * zeta * zeta;
    let t = 4.0 * (nf - 1.0) * zeta * zeta;
    if !(zeta > 0.0 && 4.0 * s < 1.0 && 4.0 * t < 1.0) {
        return Err(domain(format!("contour roots are not real and distinct at N = {n}, ζ = {zeta}")));
    }
    let z4 = (1.0 - 2.0 * s + (1.0 - 4.0 * s).sqrt()) / (2.0 * s);
    let z6 = (1.0 - 2.0 * t + (1.0 - 4.0 * t).sqrt()) / (2.0 * t);
    Ok([1.0 / z4, z4, 1.0 / z6, z6])
}

/// Both sides of `(z3 − z5)(z6 − z3) = (N−2)² z3 / (4N²(N−1)ζ²)`.
pub fn residue_identity(n: usize, zeta: f64) -> Result<(f64, f64)> {
    let [z3, _, z5, z6] = contour_roots(n, zeta)?;
    let nf = n as f64;
    let lhs = (z3 - z5) * (z6 - z3);
    let rhs = (nf - 2.0).powi(2) * z3 / (4.0 * nf * nf * (nf - 1.0) * zeta * zeta);
    Ok((lhs, rhs))
}

/// The residue term `(N−2)² z3 / (4N√(N−1) √(1−4N²ζ²) √(z3(z3−z5)(z6−z3)))`,
/// which equals `(N−2)ζ / (2√(1−4N²ζ²))`.
pub fn residue_term(n: usize, zeta: f64) -> Result<f64> {
    let [z3, _, z5, z6] = contour_roots(n, zeta)?;
    let nf = n as f64;
    let root = (1.0 - 4.0 * nf * nf * zeta * zeta).sqrt();
    Ok((nf - 2.0).powi(2) * z3 / (4.0 * nf * (nf - 1.0).sqrt() * root * (z3 * (z3 - z5) * (z6 - z3)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature, used as an independent oracle.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    fn pi_quad(n: f64, k: f64) -> f64 {
        simpson(&|t: f64| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - k * k * s2).sqrt())
        }, 0.0, PI / 2.0, 1e-14)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn first_kind_values() {
        assert!(rel(ellint_k(0.0).unwrap(), PI / 2.0) < 1e-15);
        let k = 0.5f64.sqrt();
        assert!(rel(ellint_k(k).unwrap(), pi_quad(0.0, k)) < 1e-12);
        assert!(rel(ellint_k(k).unwrap(), 1.854074677301372) < 1e-14);
        assert!(matches!(ellint_k(1.0), Err(Error::Domain(_))));
        assert!(matches!(ellint_k(-0.1), Err(Error::Domain(_))));
        assert!(ellint_k(1.0 - 1e-12).unwrap() > 14.0);
    }

    #[test]
    fn third_kind_values() {
        for &k in &[0.0, 0.3, 0.7, 0.95] {
            assert!(rel(ellint_pi(0.0, k).unwrap(), ellint_k(k).unwrap()) < 1e-13);
        }
        for &n in &[-2.0, 0.0, 0.4, 0.9] {
            assert!(rel(ellint_pi(n, 0.0).unwrap(), PI / (2.0 * (1.0 - n).sqrt())) < 1e-13);
        }
        assert!(rel(ellint_pi(0.3, 0.5).unwrap(), pi_quad(0.3, 0.5)) < 1e-10);
        for i in 0..10 {
            for j in 0..10 {
                let (n, k) = (0.1 * i as f64, 0.1 * j as f64);
                assert!(rel(ellint_pi(n, k).unwrap(), pi_quad(n, k)) < 1e-10, "n={n} k={k}");
            }
        }
        assert!(ellint_pi(1.0, 0.5).is_err());
        assert!(ellint_pi(0.5, 1.0).is_err());
    }

    #[test]
    fn aux_products() {
        for n in 2..7 {
            for i in 0..=20 {
                let z = i as f64 / 20.0 * (1.0 / (n as f64 - 1.0)).sqrt().min(2.0 / n as f64);
                let aux = EllipticAux::new(n, z).unwrap();
                let (r1, r2) = aux.product_residuals();
                assert!(r1 < 1e-13 && r2 < 1e-13, "N={n} z={z}: {r1} {r2}");
                assert!(0.0 <= aux.w5 && aux.w5 <= aux.w6);
            }
        }
        assert!(EllipticAux::new(3, 0.9).is_err());
    }

    #[test]
    fn characteristic_rationalization() {
        let aux = EllipticAux::new(4, 0.3).unwrap();
        let nf = 4.0;
        let direct = nf * nf * aux.w5 / ((nf - 1.0) * aux.w3);
        assert!(rel(aux.characteristics().1, direct) < 1e-13);
    }

    #[test]
    fn green22_special_values() {
        assert!((green22_eval(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(green22_eval(0.999999).unwrap() > green22_eval(0.99).unwrap());
        assert!(green22_eval(1.0).is_err());
        // |S|^n p_n for (2,2) begins 1, 0, 4, 0, 36
        let z: f64 = 0.001;
        let approx = 1.0 + 4.0 * (z / 4.0).powi(2) + 36.0 * (z / 4.0).powi(4);
        assert!((green22_eval(z).unwrap() - approx).abs() < 1e-14);
    }

    #[test]
    fn all_index_two_consistency() {
        for i in 1..10 {
            let z = i as f64 / 10.0;
            assert!(rel(green2n2_eval(2, z).unwrap(), green22_eval(z).unwrap()) < 1e-12);
        }
        assert!((green2n2_eval(3, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // the closed form tends to 1 as z -> 0 even without the series
        let nf = 5.0;
        let aux = EllipticAux::new(5, 1e-4).unwrap();
        let (hi, lo) = aux.characteristics();
        let k = aux.modulus();
        let bracket = (nf - 1.0) * ellint_k(k).unwrap()
            + 9.0 / (2.0 * (4.0f64 - nf * nf * 1e-8).sqrt()) * (ellint_pi(hi, k).unwrap() - ellint_pi(lo, k).unwrap());
        assert!((8.0 / (nf * PI * aux.w6.sqrt()) * bracket - 1.0).abs() < 1e-7);
        assert!(green2n2_eval(3, 1.0).is_err());
        assert!(green2n2_eval(1, 0.5).is_err());
    }

    #[test]
    fn monotone_on_grid() {
        for n in 2..6 {
            let mut prev = 0.0;
            for i in 0..40 {
                let v = green2n2_eval(n, i as f64 / 40.0).unwrap();
                assert!(v > prev, "N={n} i={i}");
                prev = v;
            }
        }
    }

    #[test]
    fn residue_cancellation() {
        for n in 3..=5 {
            for &zeta in &[0.01, 0.05] {
                let (lhs, rhs) = residue_identity(n, zeta).unwrap();
                assert!(rel(lhs, rhs) < 1e-10, "N={n} ζ={zeta}");
                let nf = n as f64;
                let cancel = (nf - 2.0) * zeta / (2.0 * (1.0 - 4.0 * nf * nf * zeta * zeta).sqrt());
                assert!(rel(residue_term(n, zeta).unwrap(), cancel) < 1e-10);
            }
        }
    }
}
