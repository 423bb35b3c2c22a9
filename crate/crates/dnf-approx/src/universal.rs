//! The two-stage randomized construction that approximates every Boolean
//! function.
//!
//! Stage one flips each 0-input of f to 1 independently with probability
//! eps/2, giving a random g >= f. Stage two returns the DNF of all special
//! sub-cubes (dimension-d cubes whose free coordinates form an aligned block
//! {dk+1..dk+d}) on which g is identically 1. The result h satisfies
//! h <= g pointwise, so the 0-side error never exceeds the flipped mass,
//! and a 1-input is missed only when none of its floor(n/d) special cubes
//! became monochromatic — cube inclusions are independent across blocks
//! because two special cubes through the same point share nothing else.
//!
//! Given the flip sampling, taking every monochromatic cube realizes
//! inclusion probability (eps/2)^{#f-zeros in the cube}; the per-point miss
//! probability therefore has the closed form in [`uncovered_prob`], which
//! the distributional test suites verify by frequency counts.

use crate::boolfn::{BitString, TruthTable};
use crate::dnf::{closeness, ApproxReport, Dnf, ParamRecord, Term};
use crate::error::{Error, Result};
use crate::rng::{trial_seed, SplitMix64};

/// How the sub-cube dimension d gets chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DMode {
    /// Evaluate the closed-form d with base-(2/eps) logarithms and floor;
    /// errors out on degenerate intermediates at small n / large eps.
    ClosedForm,
    /// max(1, floor(log2 log2 n)).
    SimpleLogLog,
    /// Use this d, clamped into [1, n].
    Explicit(u32),
}

/// Driver parameters for [`universal_approx`].
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalParams {
    pub epsilon: f64,
    pub d_mode: DMode,
    pub trials: u64,
    pub master_seed: u64,
}

/// Stage-one outcome: the flipped function g and the flip set itself.
///
/// Invariants: g(x) >= f(x) pointwise and flipped = g AND NOT f, a subset
/// of the 0-inputs of f.
#[derive(Clone, Debug)]
pub struct FlipRecord {
    pub g: TruthTable,
    pub flipped: TruthTable,
}

impl FlipRecord {
    pub fn flipped_count(&self) -> u64 {
        self.flipped.count_ones()
    }
}

/// Pick the sub-cube dimension.
pub fn choose_d(n: u32, epsilon: f64, mode: DMode) -> Result<u32> {
    if n < 1 {
        return Err(Error::ArityOutOfRange { n, max: crate::boolfn::MAX_N });
    }
    match mode {
        DMode::Explicit(d) => Ok(d.clamp(1, n)),
        DMode::SimpleLogLog => {
            if n < 2 {
                return Err(Error::DegenerateDFormula {
                    detail: "log2 log2 n needs n >= 2".into(),
                });
            }
            let d = (n as f64).log2().log2().floor();
            Ok((d.max(1.0) as u32).clamp(1, n))
        }
        DMode::ClosedForm => {
            if !(epsilon > 0.0 && epsilon <= 1.0) {
                return Err(Error::EpsilonOutOfRange {
                    value: epsilon,
                    expected: "(0, 1]",
                });
            }
            let base = 2.0 / epsilon;
            let log_b = |x: f64| x.ln() / base.ln();
            let inner = log_b(log_b(n as f64));
            if !inner.is_finite() || inner <= 0.0 {
                return Err(Error::DegenerateDFormula {
                    detail: format!("loglog_{base:.3}({n}) = {inner:.4} <= 0"),
                });
            }
            let ratio = n as f64 / ((4.0 / epsilon).ln() * inner);
            if !ratio.is_finite() || ratio <= 0.0 {
                return Err(Error::DegenerateDFormula {
                    detail: format!("inner ratio {ratio:.4} <= 0"),
                });
            }
            let d = log_b(log_b(ratio));
            if !d.is_finite() {
                return Err(Error::DegenerateDFormula {
                    detail: format!("loglog_{base:.3}({ratio:.4}) not finite"),
                });
            }
            Ok((d.floor().max(1.0) as u32).clamp(1, n))
        }
    }
}

/// All special sub-cubes as terms, in a fixed canonical order: block-major
/// (k = 0..floor(n/d)-1), then ascending assignment of the fixed
/// coordinates. Leftover coordinates (n mod d) are fixed in every cube.
/// Total count floor(n/d) * 2^(n-d); every term has width exactly n - d.
pub fn special_subcubes(n: u32, d: u32) -> Result<Vec<Term>> {
    if d < 1 || d > n {
        return Err(Error::DimensionOutOfRange { d, n });
    }
    let blocks = n / d;
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut cubes = Vec::with_capacity((blocks as usize) << (n - d));
    for k in 0..blocks {
        let block_mask = (((1u64 << d) - 1) << (d * k)) as u32;
        let fixed_mask = full & !block_mask;
        // Ascending submask enumeration of the fixed coordinates.
        let mut assignment = 0u32;
        loop {
            cubes.push(Term::new(n, fixed_mask, assignment)?);
            assignment = assignment.wrapping_sub(fixed_mask) & fixed_mask;
            if assignment == 0 {
                break;
            }
        }
    }
    Ok(cubes)
}

/// Stage one: flip each 0-input of f to 1 independently with probability
/// eps/2. One Bernoulli draw is consumed per 0-input, in ascending index
/// order.
pub fn stage1_flip(f: &TruthTable, epsilon: f64, rng: &mut SplitMix64) -> Result<FlipRecord> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            expected: "(0, 1]",
        });
    }
    let p = epsilon / 2.0;
    let mut g = f.clone();
    let mut flipped = TruthTable::zeros(f.n())?;
    for idx in 0..f.len() {
        if !f.get_index(idx) && rng.bernoulli(p) {
            g.set_index(idx, true);
            flipped.set_index(idx, true);
        }
    }
    Ok(FlipRecord { g, flipped })
}

/// Stage two: the DNF of every special sub-cube on which g is identically 1,
/// in the canonical cube order.
pub fn stage2_cover(g: &TruthTable, d: u32) -> Result<Dnf> {
    let mut h = Dnf::new(g.n())?;
    for cube in special_subcubes(g.n(), d)? {
        if cube.accepted_indices().all(|idx| g.get_index(idx as usize)) {
            h.push(cube)?;
        }
    }
    Ok(h)
}

/// Closed-form probability that a 1-input x stays uncovered by stage two:
/// prod_k (1 - (eps/2)^{z_k}), z_k = number of f-zeros among the other
/// 2^d - 1 points of the k-th special cube through x. Blocks are independent
/// because two special cubes through x intersect only at x.
pub fn uncovered_prob(f: &TruthTable, x: &BitString, epsilon: f64, d: u32) -> Result<f64> {
    if x.n() != f.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            got: x.n(),
        });
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            expected: "(0, 1]",
        });
    }
    let n = f.n();
    if d < 1 || d > n {
        return Err(Error::DimensionOutOfRange { d, n });
    }
    if !f.get(x)? {
        return Err(Error::NotAOneInput);
    }
    let p = epsilon / 2.0;
    let mut prob = 1.0;
    for k in 0..n / d {
        let block_mask = (((1u64 << d) - 1) << (d * k)) as u32;
        let base = x.word() & !block_mask;
        let mut zeros = 0u32;
        // Walk the cube's points: x with its block coordinates rewritten.
        let mut sub = 0u32;
        loop {
            let idx = base | sub;
            if idx != x.word() && !f.get_index(idx as usize) {
                zeros += 1;
            }
            sub = sub.wrapping_sub(block_mask) & block_mask;
            if sub == 0 {
                break;
            }
        }
        prob *= 1.0 - p.powi(zeros as i32);
    }
    Ok(prob)
}

/// Whether the analysis assumption min{Pr[f=0], Pr[f=1]} >= eps holds.
/// Reported as a note, never enforced.
pub fn balance_ok(f: &TruthTable, epsilon: f64) -> bool {
    let ones = f.count_ones() as f64 / f.len() as f64;
    ones.min(1.0 - ones) >= epsilon
}

/// One seeded two-stage trial. The report's width records the construction
/// width n - d.
pub fn universal_trial(
    f: &TruthTable,
    epsilon: f64,
    d: u32,
    master_seed: u64,
    trial: u64,
) -> Result<(ApproxReport, Dnf)> {
    let n = f.n();
    let ts = trial_seed(master_seed, trial);
    let mut rng = SplitMix64::new(ts);
    let flip = stage1_flip(f, epsilon, &mut rng)?;
    let h = stage2_cover(&flip.g, d)?;
    let table = h.to_table()?;
    let error = closeness(&table, f)?;
    let len = f.len() as f64;
    let zero_side = table.and_not_count(f)? as f64 / len;
    let one_side = f.and_not_count(&table)? as f64 / len;
    let mut notes = Vec::new();
    if !balance_ok(f, epsilon) {
        notes.push(format!(
            "balance assumption unmet: min(Pr[f=0], Pr[f=1]) < {epsilon}"
        ));
    }
    let report = ApproxReport {
        construction: "universal".into(),
        n,
        epsilon,
        error,
        error_zero_side: zero_side,
        error_one_side: one_side,
        size: h.size(),
        width: n - d,
        params: ParamRecord {
            d: Some(d),
            ..ParamRecord::default()
        },
        master_seed,
        trial_seed: ts,
        trial,
        error_method: "exhaustive".into(),
        error_half_width: 0.0,
        notes,
    };
    Ok((report, h))
}

/// Run seeded two-stage trials and keep the best (error, then size, then
/// trial index).
pub fn universal_approx(f: &TruthTable, params: &UniversalParams) -> Result<(ApproxReport, Dnf)> {
    if params.trials == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    let d = choose_d(f.n(), params.epsilon, params.d_mode)?;
    let mut best: Option<(ApproxReport, Dnf)> = None;
    for trial in 0..params.trials {
        let candidate = universal_trial(f, params.epsilon, d, params.master_seed, trial)?;
        let better = match &best {
            None => true,
            Some((b, bd)) => {
                (candidate.0.error, candidate.1.size(), trial) < (b.error, bd.size(), b.trial)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.unwrap())
}
