//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use amalgam_green::cyclo::factor_cauchy;
use amalgam_green::elliptic::{ellint_k, ellint_pi, green22_eval, green2n2_eval, residue_identity};
use amalgam_green::exact::{MPoly, XiPoly};
use amalgam_green::green::{green_series, lift_branch, spectral_radius_estimate};
use amalgam_green::transform::{cauchy_to_r, pipeline, r_to_cauchy, WalkSpec};
use amalgam_green::walk::exact_return_probabilities;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;

use common::*;

type Outcome = Result<String, String>;

fn spec(m: &[usize]) -> WalkSpec {
    WalkSpec::new(m.to_vec()).unwrap()
}

fn normalized(s: &str) -> MPoly {
    poly(s).normalized()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn ints(cs: &[i64]) -> Vec<BigInt> {
    cs.iter().map(|&c| BigInt::from(c)).collect()
}

fn factorizations() -> Outcome {
    let t = Instant::now();
    for &(n, p, q) in FACTORS {
        let f = factor_cauchy(n).map_err(|e| e.to_string())?;
        ensure(f.p_poly == ints(p), || format!("p differs for n = {n}"))?;
        ensure(f.q_poly == ints(q), || format!("q differs for n = {n}"))?;
    }
    within(t.elapsed(), Duration::from_secs(1), "n = 2..5")?;
    Ok(format!("n = 2..5 in {:?}", t.elapsed()))
}

fn single_factor_r() -> Outcome {
    let t = Instant::now();
    for (n, q) in [(2, Q2), (3, Q3), (4, Q4), (5, Q5)] {
        let rel = cauchy_to_r(&factor_cauchy(n).map_err(|e| e.to_string())?.relation()).map_err(|e| e.to_string())?;
        ensure(rel.poly == normalized(q), || format!("Q_{n} differs: {}", rel.render()))?;
    }
    within(t.elapsed(), Duration::from_secs(1), "Q_2..Q_5")?;
    Ok(format!("Q_2..Q_5 in {:?}", t.elapsed()))
}

fn pipeline_relations() -> Outcome {
    let run = |m: &[usize]| pipeline(&spec(m)).map_err(|e| format!("{m:?}: {e}"));
    let (q, p) = run(&[2, 2])?;
    ensure(q.poly == normalized(Q22) && p.poly == normalized(P22), || "(2,2) differs".into())?;
    for n in 2..=6usize {
        let (q, p) = run(&vec![2; n])?;
        let qe = format!("bR^2 + {n}R - b{}(2 + xi)", n * n);
        let pe = format!("(1 - b^2 {}(2 + xi))C^2 + b({n} - 2)C - b^2({n} - 1)", n * n);
        ensure(q.poly == normalized(&qe) && p.poly == normalized(&pe), || format!("N = {n} family differs"))?;
    }
    let (q, p) = run(&[2, 3])?;
    ensure(q.poly == normalized(Q23) && p.poly == normalized(P23), || "(2,3) differs".into())?;
    let (_, p) = run(&[2, 4])?;
    ensure(p.poly == normalized(P24), || "P_{2,4} differs".into())?;
    let t = Instant::now();
    let (_, p) = run(&[2, 5])?;
    let elapsed = t.elapsed();
    ensure(p.poly == normalized(P25), || "P_{2,5} differs".into())?;
    within(elapsed, Duration::from_secs(60), "(2,5)")?;
    Ok(format!("(2,5) in {elapsed:?}"))
}

fn branch_expansions() -> Outcome {
    for (m, table, order) in [([2, 3], C23, 11), ([2, 4], C24, 11), ([2, 5], C25, 12)] {
        let (_, p) = pipeline(&spec(&m)).map_err(|e| e.to_string())?;
        let c = lift_branch(&p, order).map_err(|e| e.to_string())?;
        for k in 0..=order {
            let expect = table
                .iter()
                .find(|(j, _)| *j == k)
                .map_or(XiPoly::zero(), |(_, cs)| XiPoly::from_ints(cs.iter().copied()));
            ensure(c.coeff(k) == &expect, || format!("{m:?} b^{k}: got {}, want {expect}", c.coeff(k)))?;
        }
    }
    Ok("(2,3) to b^11, (2,4) to b^11, (2,5) to b^12".into())
}

fn green_coefficients() -> Outcome {
    for (m, expect) in [(&[2, 3][..], G23), (&[2, 4], G24), (&[2, 5], G25)] {
        let gs = green_series(&spec(m), expect.len() - 1).map_err(|e| e.to_string())?;
        ensure(gs.path_counts() == ints(expect).as_slice(), || {
            format!("{m:?}: got {:?}", gs.path_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>())
        })?;
    }
    Ok("(2,3) n<=10, (2,4) n<=10, (2,5) n<=11".into())
}

fn oracle_equivalence() -> Outcome {
    let mut slowest = Duration::ZERO;
    for m in [&[2, 2][..], &[2, 3], &[2, 4], &[2, 5], &[3, 3], &[2, 2, 2]] {
        let t = Instant::now();
        let s = spec(m);
        let oracle = exact_return_probabilities(&s, 12).map_err(|e| e.to_string())?;
        let gs = green_series(&s, 12).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(gs.probabilities == oracle, || format!("{m:?} differs"))?;
        within(elapsed, Duration::from_secs(60), &format!("{m:?}"))?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!("six specs, n <= 12, slowest {slowest:?}"))
}

fn closed_forms() -> Outcome {
    let err = |e: amalgam_green::Error| e.to_string();
    let g22 = green_series(&spec(&[2, 2]), 60).map_err(err)?;
    let mut worst22: f64 = 0.0;
    for i in 1..=5 {
        let z = i as f64 / 10.0;
        worst22 = worst22.max((green22_eval(z).map_err(err)? - g22.partial_sum(z)).abs());
    }
    ensure(worst22 < 1e-10, || format!("(2,2) deviation {worst22:e}"))?;
    let mut worst_n: f64 = 0.0;
    for n in [3, 4] {
        let gs = green_series(&spec(&vec![2; n]), 60).map_err(err)?;
        for z in [0.05, 0.1] {
            worst_n = worst_n.max((green2n2_eval(n, z).map_err(err)? - gs.partial_sum(z)).abs());
        }
    }
    ensure(worst_n < 1e-8, || format!("N = 3, 4 deviation {worst_n:e}"))?;
    let mut worst2: f64 = 0.0;
    for i in 1..=9 {
        let z = i as f64 / 10.0;
        worst2 = worst2.max((green2n2_eval(2, z).map_err(err)? - green22_eval(z).map_err(err)?).abs());
    }
    ensure(worst2 < 1e-12, || format!("N = 2 vs (2,2) deviation {worst2:e}"))?;
    Ok(format!("max deviations {worst22:.1e}, {worst_n:.1e}, {worst2:.1e}"))
}

/// Trapezoid rule on `[0, π/2]`; geometric convergence since the integrand
/// is a smooth function of `sin²φ`.
fn quadrature_k(k: f64) -> f64 {
    const M: usize = 20_000;
    let h = PI / 2.0 / M as f64;
    let f = |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    let inner: f64 = (1..M).map(|i| f(i as f64 * h)).sum();
    h * (inner + 0.5 * (f(0.0) + f(PI / 2.0)))
}

fn special_values() -> Outcome {
    let err = |e: amalgam_green::Error| e.to_string();
    let k0 = ellint_k(0.0).map_err(err)?;
    ensure((k0 - PI / 2.0).abs() < 1e-14, || format!("K(0) = {k0}"))?;
    let k = 0.5f64.sqrt();
    let (kv, quad) = (ellint_k(k).map_err(err)?, quadrature_k(k));
    ensure(((kv - quad) / quad).abs() < 1e-12, || format!("K(1/√2) = {kv}, quadrature {quad}"))?;
    for i in 0..20 {
        let k = i as f64 * 0.05;
        let (pi0, kk) = (ellint_pi(0.0, k).map_err(err)?, ellint_k(k).map_err(err)?);
        ensure(((pi0 - kk) / kk).abs() < 1e-12, || format!("Π(0, {k}) = {pi0}, K = {kk}"))?;
    }
    Ok(format!("K(1/√2) = {kv:.15}"))
}

fn residue_cancellation() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for zeta in [0.01, 0.05] {
            let (lhs, rhs) = residue_identity(n, zeta).map_err(|e| e.to_string())?;
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
    }
    ensure(worst < 1e-10, || format!("relative error {worst:e}"))?;
    Ok(format!("N = 3..5, max relative error {worst:.1e}"))
}

fn spectral_radius() -> Outcome {
    let gs = green_series(&spec(&[2, 2]), 60).map_err(|e| e.to_string())?;
    let (r, u) = spectral_radius_estimate(&gs).map_err(|e| e.to_string())?;
    ensure((r - 1.0).abs() <= 0.05, || format!("estimate {r} ± {u}"))?;
    Ok(format!("{r:.6} ± {u:.1e}"))
}

fn properties() -> Outcome {
    let err = |e: amalgam_green::Error| e.to_string();
    for m in 2..=5 {
        let gs = green_series(&spec(&[m]), 20).map_err(err)?;
        for (n, p) in gs.probabilities.iter().enumerate() {
            let want = if n % 2 == 0 {
                BigRational::new(binomial(BigInt::from(n), BigInt::from(n / 2)), BigInt::from(2).pow(n as u32))
            } else {
                BigRational::from_integer(0.into())
            };
            ensure(*p == want, || format!("trace rule fails for m = {m}, n = {n}"))?;
        }
    }
    for m in [&[2, 2][..], &[2, 4], &[4, 4], &[2, 2, 2], &[2, 3], &[3, 3], &[2, 5]] {
        let gs = green_series(&spec(m), 24).map_err(err)?;
        let p = &gs.probabilities;
        for n in 0..=12 {
            ensure(p[2 * n] >= &p[n] * &p[n], || format!("Cauchy–Schwarz fails for {m:?}, n = {n}"))?;
        }
        if m.iter().all(|x| x % 2 == 0) {
            ensure(p.iter().skip(1).step_by(2).all(|x| *x == BigRational::from_integer(0.into())), || {
                format!("odd return for {m:?}")
            })?;
        }
    }
    let base = pipeline(&spec(&[2, 2, 3])).map_err(err)?;
    for m in [[2, 3, 2], [3, 2, 2]] {
        let other = pipeline(&spec(&m)).map_err(err)?;
        ensure(other.0.poly == base.0.poly && other.1.poly == base.1.poly, || format!("{m:?} differs from (2,2,3)"))?;
    }
    for m in [[2, 3], [3, 4]] {
        let a = pipeline(&spec(&m)).map_err(err)?;
        let b = pipeline(&spec(&[m[1], m[0]])).map_err(err)?;
        ensure(a.0.poly == b.0.poly && a.1.poly == b.1.poly, || format!("{m:?} not symmetric"))?;
    }
    for n in 2..=7 {
        let c = factor_cauchy(n).map_err(err)?.relation();
        let back = r_to_cauchy(&cauchy_to_r(&c).map_err(err)?).map_err(err)?;
        ensure(back.poly == c.poly, || format!("round trip fails for n = {n}"))?;
    }
    Ok("trace rule, parity, Cauchy–Schwarz, permutations, round trip".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("single-factor Cauchy factorizations", factorizations),
        ("single-factor R-transform relations", single_factor_r),
        ("pipeline relations", pipeline_relations),
        ("B-valued branch expansions", branch_expansions),
        ("Green function coefficients", green_coefficients),
        ("series equals path-counting oracle", oracle_equivalence),
        ("elliptic closed forms against series", closed_forms),
        ("elliptic special values", special_values),
        ("residue cancellation identity", residue_cancellation),
        ("spectral radius of (2,2)", spectral_radius),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2}  PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}  FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
