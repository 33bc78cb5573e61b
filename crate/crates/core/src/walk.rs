//! Exact return probabilities of the simple random walk on
//! `G_{m_1,…,m_N} = ⟨a_1, …, a_N, p | a_j^{m_j} = p, p central⟩`, by
//! counting paths over group elements kept in normal form.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transform::WalkSpec;

/// Default cap on the number of distinct group elements held at once.
pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

/// Normal form `p^t · a_{i_1}^{e_1} ⋯ a_{i_k}^{e_k}` with `1 <= e_j < m_{i_j}`
/// and adjacent factor indices distinct. Factor indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord {
    pub t: i64,
    pub letters: Vec<(usize, usize)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn is_identity(&self) -> bool {
        self.t == 0 && self.letters.is_empty()
    }

    /// Builds a word, checking the normal-form conditions against `spec`.
    pub fn new(t: i64, letters: Vec<(usize, usize)>, spec: &WalkSpec) -> Result<Self> {
        let w = GroupWord { t, letters };
        w.check(spec)?;
        Ok(w)
    }

    fn check(&self, spec: &WalkSpec) -> Result<()> {
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            let m = factor_order(spec, i)?;
            if e == 0 || e >= m {
                return Err(Error::InvalidArgument(format!("exponent {e} of a_{i} outside 1..{m}")));
            }
            if k > 0 && self.letters[k - 1].0 == i {
                return Err(Error::InvalidArgument(format!("adjacent letters share factor {i}")));
            }
        }
        Ok(())
    }

    /// `w^{-1}`: each `a_i^{-e}` becomes `p^{-1} a_i^{m_i - e}`.
    pub fn inverse(&self, spec: &WalkSpec) -> GroupWord {
        let m = spec.m();
        GroupWord {
            t: -self.t - self.letters.len() as i64,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, m[i - 1] - e)).collect(),
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^{}", self.t)?;
        for (i, e) in &self.letters {
            write!(f, " a{i}^{e}")?;
        }
        Ok(())
    }
}

fn factor_order(spec: &WalkSpec, j: usize) -> Result<usize> {
    j.checked_sub(1)
        .and_then(|k| spec.m().get(k).copied())
        .ok_or_else(|| Error::InvalidArgument(format!("factor index {j} outside 1..={}", spec.m().len())))
}

/// `w · a_j^{sign}` in normal form.
pub fn word_mul_generator(w: &GroupWord, j: usize, sign: i32, spec: &WalkSpec) -> Result<GroupWord> {
    let m = factor_order(spec, j)?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    let mut out = w.clone();
    mul_in_place(&mut out, j, sign > 0, m);
    Ok(out)
}

fn mul_in_place(w: &mut GroupWord, j: usize, up: bool, m: usize) {
    match w.letters.last_mut() {
        Some(last) if last.0 == j => {
            if up {
                last.1 += 1;
                if last.1 == m {
                    w.letters.pop();
                    w.t += 1;
                }
            } else if last.1 == 1 {
                w.letters.pop();
            } else {
                last.1 -= 1;
            }
        }
        _ => {
            if up {
                w.letters.push((j, 1));
            } else {
                w.letters.push((j, m - 1));
                w.t -= 1;
            }
        }
    }
}

/// Path counts from the identity, advanced one step at a time.
pub struct Walker {
    spec: WalkSpec,
    states: HashMap<GroupWord, u128>,
    steps: usize,
    threads: usize,
    horizon: Option<usize>,
}

impl Walker {
    /// `threads <= 1` runs sequentially; otherwise steps are split over a
    /// dedicated pool of that size.
    pub fn new(spec: &WalkSpec, threads: usize) -> Self {
        let mut states = HashMap::new();
        states.insert(GroupWord::identity(), 1);
        Walker { spec: spec.clone(), states, steps: 0, threads: threads.max(1), horizon: None }
    }

    /// Keeps only the states that can still return to the identity by step
    /// `n`. A step changes the number of letters by at most one, so a word
    /// with more letters than steps remaining is dropped. Identity counts
    /// through step `n` are unaffected.
    pub fn with_horizon(mut self, n: usize) -> Self {
        self.horizon = Some(n);
        self
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn states(&self) -> &HashMap<GroupWord, u128> {
        &self.states
    }

    pub fn identity_count(&self) -> u128 {
        self.states.get(&GroupWord::identity()).copied().unwrap_or(0)
    }

    fn successors(spec: &WalkSpec, w: &GroupWord, c: u128, out: &mut HashMap<GroupWord, u128>) -> Result<()> {
        for (k, &m) in spec.m().iter().enumerate() {
            for up in [true, false] {
                let mut next = w.clone();
                mul_in_place(&mut next, k + 1, up, m);
                let slot = out.entry(next).or_insert(0);
                *slot = slot.checked_add(c).ok_or(Error::ResourceLimit { last_completed: 0 })?;
            }
        }
        Ok(())
    }

    fn merge(mut a: HashMap<GroupWord, u128>, b: HashMap<GroupWord, u128>) -> Result<HashMap<GroupWord, u128>> {
        if a.len() < b.len() {
            return Self::merge(b, a);
        }
        for (w, c) in b {
            let slot = a.entry(w).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Error::ResourceLimit { last_completed: 0 })?;
        }
        Ok(a)
    }

    /// Advances one step. Fails with `ResourceLimit` if a count would
    /// overflow or the number of states would exceed `limit`; the walker is
    /// left at the last completed step.
    pub fn step(&mut self, limit: usize) -> Result<()> {
        let spec = &self.spec;
        let next = if self.threads == 1 || self.states.len() < 4096 {
            let mut out = HashMap::with_capacity(self.states.len() * 2);
            for (w, &c) in &self.states {
                Self::successors(spec, w, c, &mut out)?;
            }
            Ok(out)
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            let items: Vec<(&GroupWord, &u128)> = self.states.iter().collect();
            let chunk = items.len().div_ceil(self.threads * 4);
            pool.install(|| {
                items
                    .par_chunks(chunk)
                    .map(|part| {
                        let mut out = HashMap::with_capacity(part.len() * 2);
                        for (w, &c) in part {
                            Self::successors(spec, w, c, &mut out)?;
                        }
                        Ok(out)
                    })
                    .try_reduce(HashMap::new, Self::merge)
            })
        };
        let mut next = next.map_err(|e| match e {
            Error::ResourceLimit { .. } => Error::ResourceLimit { last_completed: self.steps },
            other => other,
        })?;
        if let Some(h) = self.horizon {
            let left = h.saturating_sub(self.steps + 1);
            next.retain(|w, _| w.letters.len() <= left);
        }
        if next.len() > limit {
            return Err(Error::ResourceLimit { last_completed: self.steps });
        }
        self.states = next;
        self.steps += 1;
        Ok(())
    }
}

/// Number of length-`n` paths from the identity back to it, `n = 0..=n_max`.
pub fn return_counts(spec: &WalkSpec, n_max: usize, threads: usize, limit: usize) -> Result<Vec<u128>> {
    let mut walker = Walker::new(spec, threads).with_horizon(n_max);
    let mut counts = vec![1];
    for _ in 0..n_max {
        walker.step(limit)?;
        counts.push(walker.identity_count());
    }
    Ok(counts)
}

/// Exact return probabilities `p_0, …, p_{n_max}` (single-threaded, default
/// state limit).
pub fn exact_return_probabilities(spec: &WalkSpec, n_max: usize) -> Result<Vec<BigRational>> {
    return_probabilities_with(spec, n_max, 1, DEFAULT_STATE_LIMIT)
}

pub fn return_probabilities_with(spec: &WalkSpec, n_max: usize, threads: usize, limit: usize) -> Result<Vec<BigRational>> {
    let s = BigInt::from(spec.s_size());
    let counts = return_counts(spec, n_max, threads, limit)?;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(n, c)| BigRational::new(BigInt::from(c), num_traits::pow(s.clone(), n)))
        .collect())
}
