//! Random monotone DNF approximators for majority, Talagrand style.
//!
//! Each term conjoins w positive literals picked uniformly with replacement;
//! the formula ORs T = round(ln2 * 2^w) such terms. Because a weight-m input
//! satisfies one random term with probability exactly (m/n)^w, the acceptance
//! probability of the whole formula has the closed form
//! 1 - (1 - (m/n)^w)^T, which depends on the input only through its weight.
//! That closed form is the oracle every sampling test checks against.

use crate::boolfn::{binomial, majority_table};
use crate::dnf::{closeness, ApproxReport, Dnf, ParamRecord, Term};
use crate::error::{Error, Result};
use crate::oracle::DEFAULT_EXHAUSTIVE_CAP;
use crate::rng::{trial_seed, SplitMix64};

/// Parameters of the sampled construction.
///
/// From a target error fraction: w = ceil(sqrt(n)/eps) and
/// T = round-half-even(ln2 * 2^w).
#[derive(Clone, Debug, PartialEq)]
pub struct TalagrandParams {
    pub n: u32,
    pub epsilon: f64,
    /// Per-term width budget (distinct-coordinate width may come out lower).
    pub w: u32,
    /// Term count T.
    pub term_count: u64,
    pub seed: u64,
    /// Set when eps < 1/sqrt(n), outside the construction's stated range.
    pub epsilon_below_range: bool,
}

fn term_count_for_width(w: u32) -> u64 {
    (std::f64::consts::LN_2 * (w as f64).exp2()).round_ties_even() as u64
}

impl TalagrandParams {
    pub fn from_epsilon(n: u32, epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::EpsilonOutOfRange {
                value: epsilon,
                expected: "(0, inf)",
            });
        }
        let w = (((n as f64).sqrt() / epsilon).ceil() as u32).max(1);
        Ok(TalagrandParams {
            n,
            epsilon,
            w,
            term_count: term_count_for_width(w),
            seed,
            epsilon_below_range: epsilon < 1.0 / (n as f64).sqrt(),
        })
    }

    /// Fix the width directly (parameter sweeps); the implied error target
    /// is sqrt(n)/w.
    pub fn from_width(n: u32, w: u32, seed: u64) -> Result<Self> {
        if w == 0 {
            return Err(Error::DimensionOutOfRange { d: 0, n });
        }
        Ok(TalagrandParams {
            n,
            epsilon: (n as f64).sqrt() / w as f64,
            w,
            term_count: term_count_for_width(w),
            seed,
            // eps = sqrt(n)/w < 1/sqrt(n) iff w > n.
            epsilon_below_range: w > n,
        })
    }
}

/// Sample one random DNF: T terms, each the conjunction of w uniform
/// coordinate picks with replacement as positive literals. Positive literals
/// only, so the result is always monotone.
pub fn talagrand_sample(n: u32, w: u32, term_count: u64, rng: &mut SplitMix64) -> Result<Dnf> {
    if w == 0 || term_count == 0 {
        return Err(Error::DimensionOutOfRange { d: w, n });
    }
    let mut d = Dnf::new(n)?;
    for _ in 0..term_count {
        let mut mask = 0u32;
        for _ in 0..w {
            mask |= 1 << rng.next_below(n as u64);
        }
        d.push(Term::new(n, mask, mask)?)?;
    }
    Ok(d)
}

/// Exact acceptance probability of the sampled DNF at any weight-m input:
/// 1 - (1 - (m/n)^w)^T.
pub fn accept_prob(n: u32, w: u32, term_count: u64, m: u32) -> f64 {
    let per_term = (m as f64 / n as f64).powi(w as i32);
    1.0 - (1.0 - per_term).powf(term_count as f64)
}

/// Normalized weight t = (2m - n)/sqrt(n); majority is 1 iff t > 0.
pub fn weight_to_t(n: u32, m: u32) -> f64 {
    (2.0 * m as f64 - n as f64) / (n as f64).sqrt()
}

/// Expected error of a sampled DNF against majority, from the closed form:
/// 2^-n * sum_m C(n,m) * |accept_prob(m) - Maj(m)|.
pub fn expected_error(n: u32, w: u32, term_count: u64) -> f64 {
    let mut sum = 0.0;
    for m in 0..=n {
        let a = accept_prob(n, w, term_count, m);
        let maj = if 2 * m > n { 1.0 } else { 0.0 };
        sum += binomial(n, m) as f64 * (a - maj).abs();
    }
    sum / (n as f64).exp2()
}

struct Measurement {
    error: f64,
    zero_side: f64,
    one_side: f64,
    method: &'static str,
    half_width: f64,
}

fn measure_trial(d: &Dnf, n: u32, cap: u32, seed: u64) -> Result<Measurement> {
    if n <= cap {
        let maj = majority_table(n)?;
        let table = d.to_table()?;
        let error = closeness(&table, &maj)?;
        let len = maj.len() as f64;
        Ok(Measurement {
            error,
            zero_side: table.and_not_count(&maj)? as f64 / len,
            one_side: maj.and_not_count(&table)? as f64 / len,
            method: "exhaustive",
            half_width: 0.0,
        })
    } else {
        // Fast-path Monte Carlo for big n; the oracle module's sampler
        // stays separate for verification.
        let samples = crate::oracle::DEFAULT_MC_SAMPLES;
        let mut rng = SplitMix64::new(seed ^ 0xA5A5_A5A5_A5A5_A5A5);
        let mut false_pos = 0u64;
        let mut false_neg = 0u64;
        for _ in 0..samples {
            let idx = rng.next_below(1u64 << n);
            let maj = 2 * (idx as u32).count_ones() > n;
            let out = d.eval_index(idx as usize);
            false_pos += u64::from(out && !maj);
            false_neg += u64::from(!out && maj);
        }
        let error = (false_pos + false_neg) as f64 / samples as f64;
        Ok(Measurement {
            error,
            zero_side: false_pos as f64 / samples as f64,
            one_side: false_neg as f64 / samples as f64,
            method: "monte_carlo",
            half_width: 1.96 * (error * (1.0 - error) / samples as f64).sqrt(),
        })
    }
}

/// Run seeded trials of the sampled construction and keep the best
/// (error, then size, then trial index).
pub fn majority_approx(
    n: u32,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<(ApproxReport, Dnf)> {
    let params = TalagrandParams::from_epsilon(n, epsilon, seed)?;
    approx_with_params(&params, trials)
}

/// Same driver with the width pinned directly.
pub fn majority_approx_with_width(
    n: u32,
    w: u32,
    trials: u64,
    seed: u64,
) -> Result<(ApproxReport, Dnf)> {
    let params = TalagrandParams::from_width(n, w, seed)?;
    approx_with_params(&params, trials)
}

/// One seeded sampling trial.
pub fn majority_trial(params: &TalagrandParams, trial: u64) -> Result<(ApproxReport, Dnf)> {
    majority_trial_with_cap(params, trial, DEFAULT_EXHAUSTIVE_CAP)
}

/// One seeded sampling trial with an explicit exhaustive-measurement cap;
/// above the cap the error comes from Monte Carlo sampling.
pub fn majority_trial_with_cap(
    params: &TalagrandParams,
    trial: u64,
    cap: u32,
) -> Result<(ApproxReport, Dnf)> {
    let ts = trial_seed(params.seed, trial);
    let mut rng = SplitMix64::new(ts);
    let d = talagrand_sample(params.n, params.w, params.term_count, &mut rng)?;
    let m = measure_trial(&d, params.n, cap, ts)?;
    let mut notes = Vec::new();
    if params.epsilon_below_range {
        notes.push(format!(
            "epsilon {} below 1/sqrt(n) = {:.6}; construction range exceeded",
            params.epsilon,
            1.0 / (params.n as f64).sqrt()
        ));
    }
    let report = ApproxReport {
        construction: "majority".into(),
        n: params.n,
        epsilon: params.epsilon,
        error: m.error,
        error_zero_side: m.zero_side,
        error_one_side: m.one_side,
        size: d.size(),
        width: d.width(),
        params: ParamRecord {
            w: Some(params.w),
            t: Some(params.term_count),
            ..ParamRecord::default()
        },
        master_seed: params.seed,
        trial_seed: ts,
        trial,
        error_method: m.method.into(),
        error_half_width: m.half_width,
        notes,
    };
    Ok((report, d))
}

pub fn approx_with_params(params: &TalagrandParams, trials: u64) -> Result<(ApproxReport, Dnf)> {
    if trials == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    let mut best: Option<(ApproxReport, Dnf)> = None;
    for trial in 0..trials {
        let candidate = majority_trial(params, trial)?;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_from_epsilon_examples() {
        let p = TalagrandParams::from_epsilon(9, 1.0, 0).unwrap();
        assert_eq!(p.w, 3);
        assert_eq!(p.term_count, 6);
        assert!(!p.epsilon_below_range);

        let p = TalagrandParams::from_epsilon(15, 0.5, 0).unwrap();
        assert_eq!(p.w, 8);
        assert_eq!(p.term_count, 177);

        let p = TalagrandParams::from_width(15, 5, 0).unwrap();
        assert_eq!(p.term_count, 22);

        let p = TalagrandParams::from_width(15, 13, 0).unwrap();
        assert_eq!(p.term_count, 5678);

        let p = TalagrandParams::from_epsilon(9, 0.01, 0).unwrap();
        assert!(p.epsilon_below_range);
    }

    #[test]
    fn sample_shape() {
        let mut rng = SplitMix64::new(5);
        let d = talagrand_sample(9, 1, 1, &mut rng).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.width(), 1);

        let d = talagrand_sample(9, 3, 6, &mut rng).unwrap();
        assert_eq!(d.size(), 6);
        assert!(d.width() <= 3);
    }

    #[test]
    fn sample_is_always_monotone() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..20 {
            let d = talagrand_sample(9, 3, 6, &mut rng).unwrap();
            assert!(d.to_table().unwrap().is_monotone());
        }
    }

    #[test]
    fn accept_prob_endpoints() {
        assert_eq!(accept_prob(9, 3, 6, 0), 0.0);
        assert_eq!(accept_prob(9, 3, 6, 9), 1.0);
        assert_eq!(accept_prob(15, 5, 22, 15), 1.0);
    }

    #[test]
    fn accept_prob_rational_golden() {
        // 1 - (1 - (2/3)^3)^6 = 340374608/387420489, computed exactly.
        let expect = 340_374_608.0 / 387_420_489.0;
        assert!((accept_prob(9, 3, 6, 6) - expect).abs() < 1e-12);
    }

    #[test]
    fn accept_prob_matches_sampling() {
        // Small Monte Carlo cross-check; the acceptance suite runs the
        // full-depth version.
        let (n, w, t_count) = (6u32, 2u32, 3u64);
        let m = 4u32;
        let x_idx = (1usize << m) - 1; // weight-m representative
        let mut rng = SplitMix64::new(99);
        let samples = 20_000u64;
        let mut hits = 0u64;
        for _ in 0..samples {
            let d = talagrand_sample(n, w, t_count, &mut rng).unwrap();
            hits += u64::from(d.eval_index(x_idx));
        }
        let p = accept_prob(n, w, t_count, m);
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        let observed = hits as f64 / samples as f64;
        assert!(
            (observed - p).abs() <= 3.0 * sigma,
            "observed={observed} expected={p} sigma={sigma}"
        );
    }

    #[test]
    fn weight_to_t_examples() {
        assert_eq!(weight_to_t(8, 4), 0.0);
        assert_eq!(weight_to_t(9, 9), 3.0);
        assert_eq!(weight_to_t(9, 6), 1.0);
    }

    #[test]
    fn error_sides_partition_total() {
        let (report, _) = majority_approx(9, 1.0, 5, 77).unwrap();
        assert_eq!(report.error, report.error_zero_side + report.error_one_side);
        assert_eq!(report.size, 6);
        assert!(report.width <= 3);
    }

    #[test]
    fn approx_is_deterministic_given_seed() {
        let (r1, d1) = majority_approx(9, 1.0, 10, 4242).unwrap();
        let (r2, d2) = majority_approx(9, 1.0, 10, 4242).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(r1.error, r2.error);
        assert_eq!(r1.trial, r2.trial);
        assert_eq!(r1.trial_seed, r2.trial_seed);
    }

    #[test]
    fn mean_error_tracks_closed_form() {
        let (n, w) = (9u32, 3u32);
        let t_count = term_count_for_width(w);
        let maj = majority_table(n).unwrap();
        let trials = 200u64;
        let mut total = 0.0;
        let mut rng = SplitMix64::new(31337);
        for _ in 0..trials {
            let d = talagrand_sample(n, w, t_count, &mut rng).unwrap();
            total += closeness(&d.to_table().unwrap(), &maj).unwrap();
        }
        let mean = total / trials as f64;
        let expect = expected_error(n, w, t_count);
        assert!((mean - expect).abs() < 0.02, "mean={mean} expected={expect}");
    }
}
