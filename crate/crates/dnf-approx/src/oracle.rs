//! Independent brute-force verifiers.
//!
//! Everything here exists to catch bugs in the fast paths, so none of it may
//! share evaluation code with [`crate::dnf`]: [`slow_eval`] walks terms
//! coordinate by coordinate instead of using packed-word compares, and
//! [`exact_error`] measures disagreement point by point instead of XORing
//! bit tables.

use crate::boolfn::{BitString, TruthTable};
use crate::dnf::{Dnf, Term};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Default arity cap for exhaustive measurement (2^20-bit tables are cheap).
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 20;

/// Default Monte Carlo sample count: half-width <= 0.005 at the worst-case
/// p = 1/2.
pub const DEFAULT_MC_SAMPLES: u64 = 38_416;

/// How an error estimate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMethod {
    Exhaustive,
    MonteCarlo,
}

impl std::fmt::Display for ErrorMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorMethod::Exhaustive => write!(f, "exhaustive"),
            ErrorMethod::MonteCarlo => write!(f, "monte_carlo"),
        }
    }
}

/// A measured disagreement fraction with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ErrorEstimate {
    pub estimate: f64,
    pub method: ErrorMethod,
    pub samples: u64,
    /// 95% confidence half-width; exactly 0 for exhaustive measurements.
    pub half_width: f64,
}

/// Evaluate a DNF at one point by scanning terms coordinate by coordinate.
/// Same contract as [`Dnf::eval`], intentionally separate implementation.
pub fn slow_eval(d: &Dnf, x: &BitString) -> Result<bool> {
    if x.n() != d.n() {
        return Err(Error::ArityMismatch {
            expected: d.n(),
            got: x.n(),
        });
    }
    'terms: for term in d.terms() {
        for i in 1..=d.n() {
            if let Some(required) = term.fixes(i) {
                if x.get(i) != required {
                    continue 'terms;
                }
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Exhaustive disagreement fraction between a DNF and a table, measured
/// through [`slow_eval`] (not the bit-stamping path).
pub fn exact_error(d: &Dnf, t: &TruthTable) -> Result<ErrorEstimate> {
    exact_error_with_cap(d, t, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn exact_error_with_cap(d: &Dnf, t: &TruthTable, cap: u32) -> Result<ErrorEstimate> {
    if d.n() != t.n() {
        return Err(Error::ArityMismatch {
            expected: t.n(),
            got: d.n(),
        });
    }
    if t.n() > cap {
        return Err(Error::ExhaustiveCapExceeded { n: t.n(), cap });
    }
    let n = t.n();
    let mut disagreements = 0u64;
    for idx in 0..t.len() {
        let x = BitString::from_index(n, idx)?;
        if slow_eval(d, &x)? != t.get_index(idx) {
            disagreements += 1;
        }
    }
    Ok(ErrorEstimate {
        estimate: disagreements as f64 / t.len() as f64,
        method: ErrorMethod::Exhaustive,
        samples: t.len() as u64,
        half_width: 0.0,
    })
}

/// Monte Carlo disagreement fraction between a DNF and an arbitrary point
/// function, from uniform input samples.
pub fn mc_error(
    d: &Dnf,
    f: impl Fn(&BitString) -> bool,
    samples: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    if samples < 100 {
        return Err(Error::TooFewSamples {
            got: samples,
            min: 100,
        });
    }
    let n = d.n();
    let mut rng = SplitMix64::new(seed);
    let mut disagreements = 0u64;
    for _ in 0..samples {
        let idx = rng.next_below(1u64 << n) as usize;
        let x = BitString::from_index(n, idx)?;
        if slow_eval(d, &x)? != f(&x) {
            disagreements += 1;
        }
    }
    let p = disagreements as f64 / samples as f64;
    Ok(ErrorEstimate {
        estimate: p,
        method: ErrorMethod::MonteCarlo,
        samples,
        half_width: 1.96 * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// Exact minimum-size DNF for tiny arities (n <= 4): classical prime
/// implicant generation followed by an exhaustive minimum-cover search.
/// Only a baseline for size comparisons.
pub fn exact_min_dnf(t: &TruthTable) -> Result<Dnf> {
    let n = t.n();
    if n > 4 {
        return Err(Error::MinDnfTooLarge { n, max: 4 });
    }
    let minterms: Vec<u32> = t.ones_indices().map(|i| i as u32).collect();
    if minterms.is_empty() {
        return Dnf::new(n);
    }

    let primes = prime_implicants(n, &minterms);

    // Covered-minterm bitmask per prime (2^n <= 16 entries).
    let target: u16 = minterms.iter().fold(0, |acc, &m| acc | (1 << m));
    let covers: Vec<u16> = primes
        .iter()
        .map(|p| {
            minterms
                .iter()
                .filter(|&&m| p.accepts_index(m as usize))
                .fold(0u16, |acc, &m| acc | (1 << m))
        })
        .collect();

    // Smallest subset of primes covering every minterm, found by searching
    // cover sizes in increasing order. Prime count at n <= 4 is tiny.
    for size in 1..=primes.len() {
        if let Some(chosen) = search_cover(&covers, target, size) {
            let mut d = Dnf::new(n)?;
            for idx in chosen {
                d.push(primes[idx])?;
            }
            return Ok(d);
        }
    }
    unreachable!("the full prime set always covers");
}

fn prime_implicants(n: u32, minterms: &[u32]) -> Vec<Term> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // Level 0: one full-width implicant per minterm.
    let mut current: Vec<(u32, u32)> = minterms.iter().map(|&m| (full, m)).collect();
    let mut primes: Vec<(u32, u32)> = Vec::new();

    while !current.is_empty() {
        let mut merged_flag = vec![false; current.len()];
        let mut next: Vec<(u32, u32)> = Vec::new();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                let (ma, va) = current[i];
                let (mb, vb) = current[j];
                if ma != mb {
                    continue;
                }
                let diff = va ^ vb;
                if diff.count_ones() == 1 {
                    merged_flag[i] = true;
                    merged_flag[j] = true;
                    next.push((ma & !diff, va & !diff));
                }
            }
        }
        for (i, &(m, v)) in current.iter().enumerate() {
            if !merged_flag[i] {
                primes.push((m, v));
            }
        }
        next.sort_unstable();
        next.dedup();
        current = next;
    }
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|(m, v)| Term::new(n, m, v).expect("merge keeps values inside mask"))
        .collect()
}

fn search_cover(covers: &[u16], target: u16, size: usize) -> Option<Vec<usize>> {
    fn rec(
        covers: &[u16],
        target: u16,
        start: usize,
        left: usize,
        acc: u16,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if acc & target == target {
            // Exact size requested; smaller covers were tried earlier.
            return left == 0;
        }
        if left == 0 || start >= covers.len() {
            return false;
        }
        for i in start..covers.len() {
            chosen.push(i);
            if rec(covers, target, i + 1, left - 1, acc | covers[i], chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(size);
    if rec(covers, target, 0, size, 0, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// Random term for cross-check corpora: each coordinate free with
/// probability 1/2, else fixed to a uniform value.
pub fn random_term(n: u32, rng: &mut SplitMix64) -> Term {
    let mut mask = 0u32;
    let mut values = 0u32;
    for i in 0..n {
        match rng.next_below(4) {
            0 | 1 => {}
            2 => mask |= 1 << i,
            _ => {
                mask |= 1 << i;
                values |= 1 << i;
            }
        }
    }
    Term::new(n, mask, values).expect("values set only inside mask")
}

/// Random DNF with 1..=max_terms terms, for cross-check corpora.
pub fn random_dnf(n: u32, max_terms: usize, rng: &mut SplitMix64) -> Dnf {
    let count = 1 + rng.next_below(max_terms as u64) as usize;
    let mut d = Dnf::new(n).expect("arity checked by caller");
    for _ in 0..count {
        d.push(random_term(n, rng)).unwrap();
    }
    d
}
