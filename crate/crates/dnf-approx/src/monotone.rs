//! Level decomposition of monotone functions and sampled lower
//! approximators.
//!
//! Stage one ([`level_decompose`]) walks the levels of the middle window
//! [n/2 - l, n/2 + l], l = sqrt(n ln(4/eps)/2), from the bottom up. At each
//! level k it looks at the weight-k 1-inputs not already covered by the
//! slices kept so far; if they make up at least an eps/2 fraction of the
//! layer, they become a new k-regular slice of upset terms, otherwise the
//! whole level is pruned. Working with the still-uncovered 1-inputs keeps
//! the per-slice density increments disjoint, which is what bounds the slice
//! count by 2/eps; covering from the bottom surviving level upward is what
//! keeps dense functions (constant 1 at the extreme) covered. Errors can
//! then only sit outside the window (a <= eps/2 fraction, by the Hoeffding
//! tail bound, which is non-asymptotic) or on pruned levels (< eps/2 of each
//! pruned layer), so the disjunction of the slices is always a lower
//! eps-approximator.
//!
//! Stage two ([`sample_regular_slice`]) approximates one k-regular slice by
//! sampling: for each level offset l in the working interval, every
//! weight-(k + floor(l/2)) 1-input's upset term is kept with probability
//! p = 2^(-l/2), resampling until the draw is both small enough and covers
//! enough of the weight-(k+l) layer. [`monotone_approx`] composes the two
//! stages and reports per-slice sampling statistics.

use serde::Serialize;

use crate::boolfn::{binomial, weight_k_indices, BitString, TruthTable};
use crate::dnf::{closeness, upset_term, ApproxReport, Dnf, ParamRecord, Term};
use crate::error::{Error, Result, SampleCondition};
use crate::rng::{trial_seed, SplitMix64};

/// One k-regular layer of upset terms: every term has width exactly k and
/// the slice's table is pointwise below the source function.
#[derive(Clone, Debug)]
pub struct LevelSlice {
    pub k: u32,
    pub terms: Vec<Term>,
}

impl LevelSlice {
    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn to_dnf(&self, n: u32) -> Result<Dnf> {
        Dnf::from_terms(n, self.terms.clone())
    }
}

/// Per-level bookkeeping from the decomposition walk.
#[derive(Clone, Debug, Serialize)]
pub struct LevelStat {
    pub k: u32,
    /// Weight-k 1-inputs of f.
    pub ones: u64,
    /// Layer size C(n, k).
    pub layer: u64,
    /// 1-inputs not covered by lower surviving slices.
    pub new_ones: u64,
    pub survived: bool,
}

/// Output of [`level_decompose`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Content fingerprint of the source function.
    pub source: String,
    pub n: u32,
    pub epsilon: f64,
    /// Inclusive integer window [k_lo, k_hi].
    pub window: (u32, u32),
    /// Surviving slices, levels strictly increasing.
    pub slices: Vec<LevelSlice>,
    pub pruned_levels: Vec<u32>,
    pub level_stats: Vec<LevelStat>,
}

/// Deterministic fingerprint used as the decomposition's source id.
pub fn table_fingerprint(f: &TruthTable) -> String {
    let mut acc = 0u64;
    for idx in f.ones_indices() {
        acc = crate::rng::mix64(acc ^ idx as u64);
    }
    format!("n={},ones={},digest={acc:016x}", f.n(), f.count_ones())
}

impl Decomposition {
    /// Slice count t.
    pub fn t(&self) -> usize {
        self.slices.len()
    }

    /// OR of all slices, in level order.
    pub fn to_dnf(&self) -> Result<Dnf> {
        let mut d = Dnf::new(self.n)?;
        for slice in &self.slices {
            for term in &slice.terms {
                d.push(*term)?;
            }
        }
        Ok(d)
    }

    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            source: self.source.clone(),
            n: self.n,
            epsilon: self.epsilon,
            window_lo: self.window.0,
            window_hi: self.window.1,
            levels: self.level_stats.clone(),
            pruned_levels: self.pruned_levels.clone(),
            slices: self
                .slices
                .iter()
                .map(|s| SliceSummary {
                    k: s.k,
                    size: s.size(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceSummary {
    pub k: u32,
    pub size: usize,
}

/// JSON-ready view of a decomposition: window bounds, per-level densities,
/// pruned levels, per-slice sizes.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSummary {
    pub source: String,
    pub n: u32,
    pub epsilon: f64,
    pub window_lo: u32,
    pub window_hi: u32,
    pub levels: Vec<LevelStat>,
    pub pruned_levels: Vec<u32>,
    pub slices: Vec<SliceSummary>,
}

/// The slice of ALL weight-k 1-inputs of f, one upset term each.
pub fn slice_dnf(f: &TruthTable, k: u32) -> Result<LevelSlice> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    if k > f.n() {
        return Err(Error::LevelOutOfRange { k, n: f.n() });
    }
    let n = f.n();
    let terms = weight_k_indices(n, k)
        .filter(|&idx| f.get_index(idx as usize))
        .map(|idx| upset_term(&BitString::from_index(n, idx as usize).expect("in range")))
        .collect();
    Ok(LevelSlice { k, terms })
}

fn stamp_upset(table: &mut TruthTable, generator_word: u32, n: u32) {
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let free = full & !generator_word;
    let mut sub = 0u32;
    loop {
        table.set_index((generator_word | sub) as usize, true);
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
}

/// Decompose a monotone function into regular slices over the middle window,
/// pruning levels whose still-uncovered 1-inputs are sparser than eps/2 of
/// the layer.
pub fn level_decompose(f: &TruthTable, epsilon: f64) -> Result<Decomposition> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            expected: "(0, 1)",
        });
    }
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    let n = f.n();
    let nf = n as f64;
    let l = (nf * (4.0 / epsilon).ln() / 2.0).sqrt();
    let k_lo = ((nf / 2.0 - l).ceil().max(0.0)) as u32;
    let k_hi = ((nf / 2.0 + l).floor()).min(nf) as u32;

    let mut covered = TruthTable::zeros(n)?;
    let mut slices = Vec::new();
    let mut pruned = Vec::new();
    let mut stats = Vec::new();

    for k in k_lo..=k_hi {
        let layer = binomial(n, k);
        let mut ones = 0u64;
        let mut new_words: Vec<u32> = Vec::new();
        for idx in weight_k_indices(n, k) {
            if f.get_index(idx as usize) {
                ones += 1;
                if !covered.get_index(idx as usize) {
                    new_words.push(idx as u32);
                }
            }
        }
        let survived = new_words.len() as f64 >= epsilon / 2.0 * layer as f64;
        stats.push(LevelStat {
            k,
            ones,
            layer,
            new_ones: new_words.len() as u64,
            survived,
        });
        if survived {
            let mut terms = Vec::with_capacity(new_words.len());
            for &w in &new_words {
                terms.push(upset_term(&BitString::from_index(n, w as usize)?));
                stamp_upset(&mut covered, w, n);
            }
            slices.push(LevelSlice { k, terms });
        } else {
            pruned.push(k);
        }
    }

    Ok(Decomposition {
        source: table_fingerprint(f),
        n,
        epsilon,
        window: (k_lo, k_hi),
        slices,
        pruned_levels: pruned,
        level_stats: stats,
    })
}

/// Knobs for [`sample_regular_slice`]. The per-draw success probability is at
/// least 1/3 in the regime the construction targets, so 50 retries fail
/// with probability at most (2/3)^50.
#[derive(Clone, Copy, Debug)]
pub struct SliceSampleParams {
    pub retry_cap: u32,
    pub seed: u64,
}

impl Default for SliceSampleParams {
    fn default() -> Self {
        SliceSampleParams {
            retry_cap: 50,
            seed: 0,
        }
    }
}

/// Sampling record for one level offset l.
#[derive(Clone, Debug, Serialize)]
pub struct GlRecord {
    pub l: u32,
    /// Weight of the layer terms are drawn from: k + floor(l/2).
    pub draw_weight: u32,
    /// Weight of the layer condition (iii) checks: k + l.
    pub check_weight: u32,
    /// Per-term inclusion probability 2^(-l/2), exact half-integer exponent.
    pub p: f64,
    /// Candidate generators |S_{floor(l/2)}|.
    pub candidates: u64,
    /// Size of the checked layer |S_l|.
    pub check_set: u64,
    pub attempts: u32,
    /// Candidates times attempts; with `included_all_attempts` this gives an
    /// unbiased estimate of p (rejected draws included).
    pub candidates_all_attempts: u64,
    pub included_all_attempts: u64,
    /// Terms in the accepted draw, when one was accepted.
    pub accepted_size: Option<u64>,
    pub success: bool,
    pub failed_condition: Option<String>,
    pub note: Option<String>,
}

/// Everything one slice-level sampling run produced.
#[derive(Clone, Debug, Serialize)]
pub struct SliceSampleReport {
    pub k: u32,
    pub epsilon: f64,
    pub levels: Vec<GlRecord>,
}

impl SliceSampleReport {
    pub fn failures(&self) -> impl Iterator<Item = &GlRecord> {
        self.levels.iter().filter(|r| !r.success)
    }
}

/// Sample a lower approximator for one k-regular slice. Returns the OR of
/// the accepted per-offset draws plus the full sampling record; errs with a
/// structured failure if any offset exhausts its retry cap.
pub fn sample_regular_slice(
    n: u32,
    slice: &LevelSlice,
    epsilon: f64,
    params: &SliceSampleParams,
) -> Result<(Dnf, SliceSampleReport)> {
    let (dnf, report) = sample_regular_slice_full(n, slice, epsilon, params)?;
    if let Some(rec) = report.failures().next() {
        return Err(Error::SampleRetriesExhausted {
            l: rec.l,
            condition: if rec.failed_condition.as_deref() == Some("size") {
                SampleCondition::Size
            } else {
                SampleCondition::Coverage
            },
        });
    }
    Ok((dnf, report))
}

/// Like [`sample_regular_slice`] but never errs on retry exhaustion: failures stay
/// flagged in the report and the partial result is returned. This is what
/// the stage composition uses.
pub fn sample_regular_slice_full(
    n: u32,
    slice: &LevelSlice,
    epsilon: f64,
    params: &SliceSampleParams,
) -> Result<(Dnf, SliceSampleReport)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            expected: "(0, 1)",
        });
    }
    let k = slice.k;
    if k > n {
        return Err(Error::LevelOutOfRange { k, n });
    }
    let f_prime = slice.to_dnf(n)?.to_table()?;
    let nf = n as f64;

    // Working interval: k + l in [k + eps*sqrt(n)/6, n/2 + sqrt(n ln(3/eps)/2)].
    let l_min = ((epsilon * nf.sqrt() / 6.0).ceil() as u32).max(1);
    let top = (nf / 2.0 + (nf * (3.0 / epsilon).ln() / 2.0).sqrt()).floor();
    let l_max_raw = if top < k as f64 { -1.0 } else { top - k as f64 };
    let l_max = (l_max_raw.min((n - k) as f64)) as i64;

    let mut rng = SplitMix64::new(params.seed);
    let mut out = Dnf::new(n)?;
    let mut levels = Vec::new();

    let mut l = l_min;
    while (l as i64) <= l_max {
        let j = l / 2;
        let draw_weight = k + j;
        let check_weight = k + l;
        let p = (-(l as f64) / 2.0).exp2();
        let candidates: Vec<u32> = weight_k_indices(n, draw_weight)
            .filter(|&idx| f_prime.get_index(idx as usize))
            .map(|idx| idx as u32)
            .collect();
        let check_set: Vec<u32> = weight_k_indices(n, check_weight)
            .filter(|&idx| f_prime.get_index(idx as usize))
            .map(|idx| idx as u32)
            .collect();
        let size_budget = 3u64 << (n - j);

        let mut rec = GlRecord {
            l,
            draw_weight,
            check_weight,
            p,
            candidates: candidates.len() as u64,
            check_set: check_set.len() as u64,
            attempts: 0,
            candidates_all_attempts: 0,
            included_all_attempts: 0,
            accepted_size: None,
            success: false,
            failed_condition: None,
            note: None,
        };

        if candidates.is_empty() && !check_set.is_empty() {
            // Every draw is empty and condition (iii) can never hold.
            rec.failed_condition = Some("coverage".into());
            rec.note = Some(format!(
                "degenerate: no weight-{draw_weight} 1-inputs to draw from but {} inputs to cover",
                check_set.len()
            ));
            levels.push(rec);
            l += 1;
            continue;
        }

        let mut last_failed = SampleCondition::Coverage;
        while rec.attempts < params.retry_cap {
            rec.attempts += 1;
            rec.candidates_all_attempts += candidates.len() as u64;
            let drawn: Vec<u32> = candidates
                .iter()
                .copied()
                .filter(|_| rng.bernoulli(p))
                .collect();
            rec.included_all_attempts += drawn.len() as u64;

            // Condition (ii): size within budget.
            if drawn.len() as u64 > size_budget {
                last_failed = SampleCondition::Size;
                continue;
            }
            // Condition (iii): miss at most eps/3 of the checked layer
            // (vacuous when the layer is empty).
            let ok = if check_set.is_empty() {
                true
            } else {
                let mut g_l = TruthTable::zeros(n)?;
                for &w in &drawn {
                    stamp_upset(&mut g_l, w, n);
                }
                let missed = check_set
                    .iter()
                    .filter(|&&w| !g_l.get_index(w as usize))
                    .count();
                missed as f64 <= epsilon / 3.0 * check_set.len() as f64
            };
            if !ok {
                last_failed = SampleCondition::Coverage;
                continue;
            }
            rec.accepted_size = Some(drawn.len() as u64);
            rec.success = true;
            for &w in &drawn {
                out.push(upset_term(&BitString::from_index(n, w as usize)?))?;
            }
            break;
        }
        if !rec.success && rec.failed_condition.is_none() {
            rec.failed_condition = Some(last_failed.to_string());
        }
        levels.push(rec);
        l += 1;
    }

    Ok((
        out,
        SliceSampleReport {
            k,
            epsilon,
            levels,
        },
    ))
}

/// Full composition report, JSON-ready.
#[derive(Clone, Debug, Serialize)]
pub struct MonotoneReport {
    pub decomposition: DecompositionSummary,
    pub per_slice: Vec<SliceSampleReport>,
    /// (k, l, condition) triples for slice-levels that exhausted retries.
    pub failures: Vec<(u32, u32, String)>,
    pub stage1_error: f64,
    pub error: f64,
}

/// Compose the two stages: decompose at eps/2, sample each slice as a lower
/// eps/(2t)-approximator, OR everything. The result is always pointwise
/// below f; retry failures are flagged per slice, never silent, and the
/// partial approximator is still returned.
pub fn monotone_approx(
    f: &TruthTable,
    epsilon: f64,
    seed: u64,
) -> Result<(ApproxReport, Dnf, MonotoneReport)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon,
            expected: "(0, 1)",
        });
    }
    let n = f.n();
    let decomposition = level_decompose(f, epsilon / 2.0)?;
    let t = decomposition.t();
    let stage1_error = closeness(&decomposition.to_dnf()?.to_table()?, f)?;

    let mut h = Dnf::new(n)?;
    let mut per_slice = Vec::new();
    let mut failures = Vec::new();
    if t > 0 {
        let slice_eps = epsilon / (2.0 * t as f64);
        for (i, slice) in decomposition.slices.iter().enumerate() {
            let params = SliceSampleParams {
                retry_cap: 50,
                seed: trial_seed(seed, i as u64),
            };
            let (h_i, report) = sample_regular_slice_full(n, slice, slice_eps, &params)?;
            for rec in report.failures() {
                failures.push((
                    slice.k,
                    rec.l,
                    rec.failed_condition.clone().unwrap_or_default(),
                ));
            }
            for term in h_i.terms() {
                h.push(*term)?;
            }
            per_slice.push(report);
        }
    }

    let table = h.to_table()?;
    let error = closeness(&table, f)?;
    let len = f.len() as f64;
    let zero_side = table.and_not_count(f)? as f64 / len;
    let one_side = f.and_not_count(&table)? as f64 / len;
    let mut notes: Vec<String> = failures
        .iter()
        .map(|(k, l, cond)| format!("slice k={k}: retries exhausted at l={l} ({cond})"))
        .collect();
    for report in &per_slice {
        for rec in &report.levels {
            if let Some(note) = &rec.note {
                notes.push(format!("slice k={}: {note}", report.k));
            }
        }
    }

    let report = ApproxReport {
        construction: "monotone".into(),
        n,
        epsilon,
        error,
        error_zero_side: zero_side,
        error_one_side: one_side,
        size: h.size(),
        width: h.width(),
        params: ParamRecord {
            t: Some(t as u64),
            ..ParamRecord::default()
        },
        master_seed: seed,
        trial_seed: seed,
        trial: 0,
        error_method: "exhaustive".into(),
        error_half_width: 0.0,
        notes,
    };
    let full = MonotoneReport {
        decomposition: decomposition.summary(),
        per_slice,
        failures,
        stage1_error,
        error,
    };
    Ok((report, h, full))
}
