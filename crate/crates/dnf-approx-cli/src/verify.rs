//! Verification entry points: the oracle cross-check suite and single-row
//! replay of report files.

use std::path::Path;

use dnf_approx::boolfn::{parity_table, random_table};
use dnf_approx::dnf::{closeness, minterm_expansion};
use dnf_approx::oracle::{exact_error, exact_min_dnf, mc_error, random_dnf, slow_eval};
use dnf_approx::rng::SplitMix64;
use dnf_approx::BitString;

use crate::config::ExperimentConfig;
use crate::rows::Row;
use crate::runner::{replay_row, report_path, summary_path};

pub struct CheckLine {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The `verify --suite oracles` corpus: fast paths against the slow oracle,
/// minimum-DNF goldens, Monte Carlo coverage, and metric laws.
pub fn oracle_suite(n: u32, seed: u64, dnf_count: u64, mc_reps: u64) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let mut rng = SplitMix64::new(seed);

    // Fast evaluation routes against the per-point oracle.
    {
        let mut checks = 0u64;
        let mut failures = 0u64;
        for _ in 0..dnf_count {
            let d = random_dnf(n, 15, &mut rng);
            let table = d.to_table().expect("n validated");
            for idx in 0..1usize << n {
                let x = BitString::from_index(n, idx).expect("in range");
                let slow = slow_eval(&d, &x).expect("arity ok");
                checks += 1;
                if slow != table.get_index(idx) || slow != d.eval_index(idx) {
                    failures += 1;
                }
            }
        }
        lines.push(CheckLine {
            name: format!("slow_eval vs dnf_to_table vs dnf_eval ({dnf_count} random DNFs, n={n})"),
            checks,
            failures,
        });
    }

    // exact_error equals the table-route closeness.
    {
        let mut checks = 0u64;
        let mut failures = 0u64;
        for _ in 0..20 {
            let d = random_dnf(n.min(10), 12, &mut rng);
            let t = random_table(n.min(10), 0.5, rng.next_u64()).expect("n validated");
            let a = exact_error(&d, &t).expect("within cap").estimate;
            let b = closeness(&d.to_table().expect("ok"), &t).expect("ok");
            checks += 1;
            failures += u64::from(a != b);
        }
        lines.push(CheckLine {
            name: "exact_error vs closeness dual route".into(),
            checks,
            failures,
        });
    }

    // Exact minimum covers on tiny tables.
    {
        let mut checks = 0u64;
        let mut failures = 0u64;
        let p2 = parity_table(2).expect("n=2");
        let min = exact_min_dnf(&p2).expect("n<=4");
        checks += 1;
        failures += u64::from(min.size() != 2);
        for _ in 0..40 {
            let t = random_table(4, 0.5, rng.next_u64()).expect("n=4");
            let d = exact_min_dnf(&t).expect("n<=4");
            checks += 2;
            failures += u64::from(d.to_table().expect("ok") != t);
            failures += u64::from(d.size() > minterm_expansion(&t).size());
        }
        lines.push(CheckLine {
            name: "exact_min_dnf exactness and baseline size".into(),
            checks,
            failures,
        });
    }

    // Monte Carlo coverage: estimate within its stated half-width of the
    // exhaustive value.
    {
        let n_mc = n.min(12);
        let d = random_dnf(n_mc, 12, &mut rng);
        let t = dnf_approx::boolfn::majority_table(n_mc).expect("n ok");
        let exact = exact_error(&d, &t).expect("within cap").estimate;
        let mut hits = 0u64;
        for rep in 0..mc_reps {
            let e = mc_error(
                &d,
                |x| t.get(x).expect("arity ok"),
                dnf_approx::oracle::DEFAULT_MC_SAMPLES,
                seed ^ (rep + 1),
            )
            .expect("samples ok");
            hits += u64::from((e.estimate - exact).abs() <= e.half_width);
        }
        // The stated half-width is the nominal 95% interval, so the
        // expected hit rate IS 0.95; gate three binomial sigmas below it so
        // a calibrated estimator passes for any seed while a broken one
        // still fails.
        let slack = 3.0 * (0.95 * 0.05 / mc_reps as f64).sqrt();
        let needed = ((0.95 - slack) * mc_reps as f64).ceil() as u64;
        lines.push(CheckLine {
            name: format!(
                "mc_error within half-width of exact_error ({hits}/{mc_reps}, need {needed})"
            ),
            checks: mc_reps,
            failures: u64::from(hits < needed),
        });
    }

    // Closeness metric laws on random triples.
    {
        let mut checks = 0u64;
        let mut failures = 0u64;
        for _ in 0..200 {
            let a = random_table(8, 0.5, rng.next_u64()).expect("ok");
            let b = random_table(8, 0.3, rng.next_u64()).expect("ok");
            let c = random_table(8, 0.7, rng.next_u64()).expect("ok");
            let ab = closeness(&a, &b).expect("ok");
            let ba = closeness(&b, &a).expect("ok");
            let ac = closeness(&a, &c).expect("ok");
            let cb = closeness(&c, &b).expect("ok");
            checks += 3;
            failures += u64::from(ab != ba);
            failures += u64::from(closeness(&a, &a).expect("ok") != 0.0);
            failures += u64::from(ab > ac + cb + 1e-15);
        }
        lines.push(CheckLine {
            name: "closeness metric laws on random triples".into(),
            checks,
            failures,
        });
    }

    lines
}

/// Load the config echoed into a run's summary.json.
pub fn load_run_config(dir: &Path) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(summary_path(dir))
        .map_err(|e| format!("reading {}: {e}", summary_path(dir).display()))?;
    #[derive(serde::Deserialize)]
    struct SummaryConfigOnly {
        config: ExperimentConfig,
    }
    let summary: SummaryConfigOnly =
        serde_json::from_str(&text).map_err(|e| format!("parsing summary.json: {e}"))?;
    Ok(summary.config)
}

/// Replay data row `index` (1-based, header excluded) of a run directory
/// and compare byte-for-byte.
pub fn verify_row(dir: &Path, index: usize) -> Result<(Row, bool), String> {
    let cfg = load_run_config(dir)?;
    let text = std::fs::read_to_string(report_path(dir))
        .map_err(|e| format!("reading {}: {e}", report_path(dir).display()))?;
    let line = text
        .lines()
        .skip(1)
        .nth(index.checked_sub(1).ok_or("row indices start at 1")?)
        .ok_or_else(|| format!("report has no data row {index}"))?;
    let row = Row::from_csv_line(line)?;
    let replayed = replay_row(&cfg, &row)?;
    let ok = replayed.to_csv_line() == line;
    Ok((replayed, ok))
}

/// Convenience wrapper used by tests: verify every row of a run directory.
pub fn verify_all_rows(dir: &Path) -> Result<usize, String> {
    let text = std::fs::read_to_string(report_path(dir))
        .map_err(|e| format!("reading {}: {e}", report_path(dir).display()))?;
    let rows = text.lines().skip(1).count();
    for index in 1..=rows {
        let (_, ok) = verify_row(dir, index)?;
        if !ok {
            return Err(format!("row {index} did not reproduce"));
        }
    }
    Ok(rows)
}

/// Exercised by `verify --suite oracles`; kept separate from main for
/// integration tests.
pub fn run_oracle_suite(n: u32, seed: u64) -> (Vec<CheckLine>, bool) {
    let lines = oracle_suite(n, seed, 100, 200);
    let ok = lines.iter().all(CheckLine::passed);
    (lines, ok)
}
