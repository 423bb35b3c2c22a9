//! The experiment driver: expand a config into groups and trials, execute
//! them (trial-parallel), and emit report.csv / summary.json / DNF files.
//!
//! Everything is computed in memory first and written only afterwards, so an
//! invalid config or a hard failure leaves no partial files. Trials are pure
//! functions of (parameters, master seed, trial index); rows are collected
//! in enumeration order, so outputs are byte-identical across runs and
//! worker counts.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use dnf_approx::boolfn::{
    majority_table, parity_table, random_balanced_table, random_monotone_table, random_table,
    TruthTable,
};
use dnf_approx::dnf::ApproxReport;
use dnf_approx::monotone::monotone_approx;
use dnf_approx::parity::{block_error, blocks_for_epsilon, parity_approx};
use dnf_approx::rng::{mix64, trial_seed};
use dnf_approx::universal::{choose_d, universal_trial, DMode};
use dnf_approx::Dnf;

use crate::config::{Construction, DModeKey, ExperimentConfig, FnSource};
use crate::rows::{bound_universal, Row, CSV_HEADER};

/// Salt mixed into the master seed for target-function generation, so the
/// function draw never collides with a trial seed.
const FN_SEED_SALT: u64 = 0x7461_626c_6573_6565; // "tablesee"

pub fn function_seed(master_seed: u64) -> u64 {
    mix64(master_seed ^ FN_SEED_SALT)
}

/// Build the target function for a (source, n) pair.
pub fn build_function(
    source: &FnSource,
    n: u32,
    density: f64,
    master_seed: u64,
) -> Result<TruthTable, String> {
    let seed = function_seed(master_seed);
    let t = match source {
        FnSource::Parity => parity_table(n),
        FnSource::Majority => majority_table(n),
        FnSource::And => TruthTable::from_fn(n, |x| x.weight() == n),
        FnSource::Or => TruthTable::from_fn(n, |x| x.weight() > 0),
        FnSource::Const0 => TruthTable::zeros(n),
        FnSource::Const1 => TruthTable::ones(n),
        FnSource::Random => random_table(n, density, seed),
        FnSource::RandomBalanced => random_balanced_table(n, seed),
        FnSource::RandomMonotone => random_monotone_table(n, density, seed),
        FnSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            let t = TruthTable::from_file_str(&text).map_err(|e| e.to_string())?;
            if t.n() != n {
                return Err(format!(
                    "table file {} has n={}, run asked for n={n}",
                    path.display(),
                    t.n()
                ));
            }
            Ok(t)
        }
    };
    t.map_err(|e| e.to_string())
}

/// One (construction, n, parameter) combination; expands into `trials` jobs.
#[derive(Clone, Debug)]
pub struct Group {
    pub construction: Construction,
    pub n: u32,
    /// Epsilon recorded in rows (the requested target, or the construction's
    /// own achieved value where no target was given).
    pub epsilon: f64,
    pub d: Option<u32>,
    pub b: Option<u32>,
    pub w: Option<u32>,
    pub trials: u64,
    pub bound_specific: f64,
    /// Target function for universal/monotone; parity/majority targets are
    /// intrinsic.
    pub function: Option<TruthTable>,
}

fn group_tag(g: &Group) -> String {
    let mut tag = format!("{}_n{}_eps{}", g.construction, g.n, g.epsilon);
    if let Some(d) = g.d {
        tag.push_str(&format!("_d{d}"));
    }
    if let Some(b) = g.b {
        tag.push_str(&format!("_b{b}"));
    }
    if let Some(w) = g.w {
        tag.push_str(&format!("_w{w}"));
    }
    tag
}

/// Expand a validated config into concrete groups. Per-construction
/// derivation problems (say, a closed-form d that degenerates) become recorded
/// failures, not hard errors, unless the construction was the only thing
/// requested.
pub fn plan(cfg: &ExperimentConfig) -> Result<(Vec<Group>, Vec<String>), String> {
    let mut groups = Vec::new();
    let mut failures = Vec::new();
    let single = cfg.construction != Construction::All;

    for construction in cfg.construction.expand() {
        match construction {
            Construction::Universal => {
                for &n in &cfg.n {
                    let f = build_function(&cfg.function, n, cfg.density, cfg.seed)?;
                    for &eps in &cfg.eps {
                        if eps > 1.0 {
                            let msg = format!("universal needs eps in (0, 1], got {eps}");
                            if single {
                                return Err(msg);
                            }
                            failures.push(msg);
                            continue;
                        }
                        let ds: Vec<u32> = if cfg.d.is_empty() {
                            let mode = match cfg.d_mode {
                                DModeKey::ClosedForm => DMode::ClosedForm,
                                DModeKey::SimpleLoglog => DMode::SimpleLogLog,
                            };
                            match choose_d(n, eps, mode) {
                                Ok(d) => vec![d],
                                Err(e) => {
                                    let msg =
                                        format!("universal n={n} eps={eps}: {e}");
                                    if single {
                                        return Err(msg);
                                    }
                                    failures.push(msg);
                                    continue;
                                }
                            }
                        } else {
                            cfg.d.iter().map(|&d| d.clamp(1, n)).collect()
                        };
                        for d in ds {
                            groups.push(Group {
                                construction,
                                n,
                                epsilon: eps,
                                d: Some(d),
                                b: None,
                                w: None,
                                trials: cfg.trials,
                                bound_specific: 4.0
                                    * (4.0 / eps).ln()
                                    * ((n - d) as f64).exp2(),
                                function: Some(f.clone()),
                            });
                        }
                    }
                }
            }
            Construction::Parity => {
                for &n in &cfg.n {
                    let combos: Vec<(u32, f64)> = if cfg.b.is_empty() {
                        let mut out = Vec::new();
                        for &eps in &cfg.eps {
                            match blocks_for_epsilon(eps) {
                                Ok(b) => out.push((b, eps)),
                                Err(e) => {
                                    let msg = format!("parity eps={eps}: {e}");
                                    if single {
                                        return Err(msg);
                                    }
                                    failures.push(msg);
                                }
                            }
                        }
                        out
                    } else {
                        cfg.b
                            .iter()
                            .map(|&b| (b, block_error(b).unwrap_or(f64::NAN)))
                            .collect()
                    };
                    for (b, eps) in combos {
                        if b > n {
                            let msg = format!("parity n={n}: b={b} exceeds n");
                            if single {
                                return Err(msg);
                            }
                            failures.push(msg);
                            continue;
                        }
                        groups.push(Group {
                            construction,
                            n,
                            epsilon: eps,
                            d: None,
                            b: Some(b),
                            w: None,
                            // Deterministic: one row regardless of trials.
                            trials: 1,
                            // Size bound 2^((1-2 eps_b) n) with eps_b the
                            // block family's own error, i.e. 2^(n 2^(1-b)).
                            bound_specific: (n as f64 * (1.0 - b as f64).exp2()).exp2(),
                            function: None,
                        });
                    }
                }
            }
            Construction::Majority => {
                for &n in &cfg.n {
                    let combos: Vec<(u32, f64)> = if cfg.w.is_empty() {
                        cfg.eps
                            .iter()
                            .map(|&eps| {
                                let w = (((n as f64).sqrt() / eps).ceil() as u32).max(1);
                                (w, eps)
                            })
                            .collect()
                    } else {
                        cfg.w
                            .iter()
                            .map(|&w| (w, (n as f64).sqrt() / w as f64))
                            .collect()
                    };
                    for (w, eps) in combos {
                        groups.push(Group {
                            construction,
                            n,
                            epsilon: eps,
                            d: None,
                            b: None,
                            w: Some(w),
                            trials: cfg.trials,
                            bound_specific: std::f64::consts::LN_2 * (w as f64).exp2(),
                            function: None,
                        });
                    }
                }
            }
            Construction::Monotone => {
                for &n in &cfg.n {
                    let f = build_function(&cfg.function, n, cfg.density, cfg.seed)?;
                    if !f.is_monotone() {
                        let msg = format!(
                            "monotone n={n}: target function (fn={}) is not monotone",
                            cfg.function
                        );
                        if single {
                            return Err(msg);
                        }
                        failures.push(msg);
                        continue;
                    }
                    let baseline = f.count_ones() as f64;
                    for &eps in &cfg.eps {
                        if eps >= 1.0 {
                            let msg = format!("monotone needs eps in (0, 1), got {eps}");
                            if single {
                                return Err(msg);
                            }
                            failures.push(msg);
                            continue;
                        }
                        groups.push(Group {
                            construction,
                            n,
                            epsilon: eps,
                            d: None,
                            b: None,
                            w: None,
                            trials: cfg.trials,
                            // Exact-cover baseline: one term per 1-input.
                            bound_specific: baseline,
                            function: Some(f.clone()),
                        });
                    }
                }
            }
            Construction::All => unreachable!(),
        }
    }
    Ok((groups, failures))
}

/// Run one trial of a group. Pure in (group parameters, master seed, trial).
pub fn run_group_trial(
    group: &Group,
    master_seed: u64,
    cap: u32,
    trial: u64,
) -> Result<(ApproxReport, Dnf, Option<String>), String> {
    match group.construction {
        Construction::Parity => {
            let (report, dnf) = parity_approx(group.n, group.b.unwrap())
                .map_err(|e| e.to_string())?;
            Ok((report, dnf, None))
        }
        Construction::Majority => {
            let params = dnf_approx::majority::TalagrandParams::from_width(
                group.n,
                group.w.unwrap(),
                master_seed,
            )
            .map_err(|e| e.to_string())?;
            let (mut report, dnf) =
                dnf_approx::majority::majority_trial_with_cap(&params, trial, cap)
                    .map_err(|e| e.to_string())?;
            // Rows carry the group's epsilon (the requested target when one
            // was given).
            report.epsilon = group.epsilon;
            Ok((report, dnf, None))
        }
        Construction::Universal => {
            let f = group.function.as_ref().expect("planned with function");
            let (report, dnf) =
                universal_trial(f, group.epsilon, group.d.unwrap(), master_seed, trial)
                    .map_err(|e| e.to_string())?;
            Ok((report, dnf, None))
        }
        Construction::Monotone => {
            let f = group.function.as_ref().expect("planned with function");
            let seed = trial_seed(master_seed, trial);
            let (mut report, dnf, full) =
                monotone_approx(f, group.epsilon, seed).map_err(|e| e.to_string())?;
            report.trial = trial;
            report.master_seed = master_seed;
            let json = serde_json::to_string_pretty(&full).map_err(|e| e.to_string())?;
            Ok((report, dnf, Some(json)))
        }
        Construction::All => unreachable!(),
    }
}

fn row_from_report(group: &Group, report: &ApproxReport) -> Row {
    Row {
        construction: report.construction.clone(),
        n: group.n,
        epsilon: group.epsilon,
        d: group.d,
        b: group.b,
        w: group.w,
        t: report.params.t,
        size: report.size as u64,
        width: report.width,
        error: report.error,
        error_0side: report.error_zero_side,
        error_1side: report.error_one_side,
        bound_universal: bound_universal(group.n),
        bound_specific: group.bound_specific,
        seed: report.trial_seed,
        trial: report.trial,
        error_method: report.error_method.clone(),
        mc_half_width: report.error_half_width,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub construction: String,
    pub n: u32,
    pub epsilon: f64,
    pub d: Option<u32>,
    pub b: Option<u32>,
    pub w: Option<u32>,
    pub trials: u64,
    pub best_trial: u64,
    pub best_seed: u64,
    pub best_error: f64,
    pub best_size: u64,
    pub best_width: u32,
    pub mean_error: f64,
    pub error_method: String,
    pub notes: Vec<String>,
    pub dnf_file: Option<String>,
    pub decomposition_file: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub row_count: usize,
    pub groups: Vec<GroupSummary>,
    /// Construction-level structured failures; the run still completes.
    pub failures: Vec<String>,
}

pub struct RunOutput {
    pub rows: Vec<Row>,
    pub summary: Summary,
    /// (file name, contents) for best-trial DNFs.
    pub dnf_files: Vec<(String, String)>,
    /// (file name, contents) for monotone decomposition reports.
    pub decomposition_files: Vec<(String, String)>,
}

/// Execute a validated config fully in memory. `threads` is a runtime
/// knob (0 = rayon default); outputs never depend on it.
pub fn execute(cfg: &ExperimentConfig, threads: usize) -> Result<RunOutput, String> {
    let (groups, mut failures) = plan(cfg)?;
    let jobs: Vec<(usize, u64)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| (0..g.trials).map(move |t| (gi, t)))
        .collect();

    let run_all = || -> Result<Vec<Row>, String> {
        jobs.par_iter()
            .map(|&(gi, trial)| {
                run_group_trial(&groups[gi], cfg.seed, cfg.exhaustive_cap, trial)
                    .map(|(report, _, _)| row_from_report(&groups[gi], &report))
            })
            .collect()
    };
    let rows: Vec<Row> = if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?
            .install(run_all)?
    } else {
        run_all()?
    };

    // Regenerate only each group's best trial for artifact emission.
    let mut group_summaries = Vec::with_capacity(groups.len());
    let mut dnf_files = Vec::new();
    let mut decomposition_files = Vec::new();
    let mut offset = 0usize;
    for group in &groups {
        let slice = &rows[offset..offset + group.trials as usize];
        offset += group.trials as usize;
        let best = slice
            .iter()
            .min_by(|a, b| {
                (a.error, a.size, a.trial)
                    .partial_cmp(&(b.error, b.size, b.trial))
                    .expect("errors are finite")
            })
            .expect("at least one trial per group");
        let (best_report, best_dnf, decomposition) =
            run_group_trial(group, cfg.seed, cfg.exhaustive_cap, best.trial)?;

        let tag = group_tag(group);
        let dnf_file = if cfg.emit_dnf {
            let name = format!("{tag}.dnf");
            dnf_files.push((name.clone(), best_dnf.to_file_string()));
            Some(name)
        } else {
            None
        };
        let decomposition_file = decomposition.map(|json| {
            let name = format!("{tag}_decomposition.json");
            decomposition_files.push((name.clone(), json));
            name
        });

        let mut notes: BTreeSet<String> = BTreeSet::new();
        notes.extend(best_report.notes.iter().cloned());
        group_summaries.push(GroupSummary {
            construction: group.construction.to_string(),
            n: group.n,
            epsilon: group.epsilon,
            d: group.d,
            b: group.b,
            w: group.w,
            trials: group.trials,
            best_trial: best.trial,
            best_seed: best.seed,
            best_error: best.error,
            best_size: best.size,
            best_width: best.width,
            mean_error: slice.iter().map(|r| r.error).sum::<f64>() / slice.len() as f64,
            error_method: best.error_method.clone(),
            notes: notes.into_iter().collect(),
            dnf_file,
            decomposition_file,
        });
    }
    failures.sort();

    Ok(RunOutput {
        summary: Summary {
            config: cfg.clone(),
            row_count: rows.len(),
            groups: group_summaries,
            failures,
        },
        rows,
        dnf_files,
        decomposition_files,
    })
}

pub fn report_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Write report.csv, summary.json, and any DNF/decomposition files into the
/// config's output directory. Returns the written paths.
pub fn write_outputs(cfg: &ExperimentConfig, output: &RunOutput) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out)?;
    let mut written = Vec::new();

    let write = |name: &str, contents: &str| -> std::io::Result<PathBuf> {
        let path = cfg.out.join(name);
        let mut file = std::fs::File::create(&path)?;
        file.write_all(contents.as_bytes())?;
        Ok(path)
    };

    written.push(write("report.csv", &report_csv(&output.rows))?);
    let mut summary_json =
        serde_json::to_string_pretty(&output.summary).expect("summary serializes");
    summary_json.push('\n');
    written.push(write("summary.json", &summary_json)?);
    for (name, contents) in output
        .dnf_files
        .iter()
        .chain(output.decomposition_files.iter())
    {
        written.push(write(name, contents)?);
    }
    Ok(written)
}

/// Validate, execute, write. The `sweep` entry point additionally requires
/// some parameter to be list-valued.
pub fn run_to_dir(
    cfg: &ExperimentConfig,
    require_sweep: bool,
    threads: usize,
) -> Result<Vec<PathBuf>, String> {
    cfg.validate()?;
    if require_sweep {
        let lists = [
            cfg.n.len(),
            cfg.eps.len(),
            cfg.d.len(),
            cfg.b.len(),
            cfg.w.len(),
        ];
        if lists.iter().all(|&l| l <= 1) {
            return Err("sweep needs a list-valued parameter (n, eps, d, b, or w)".into());
        }
    }
    let output = execute(cfg, threads)?;
    write_outputs(cfg, &output).map_err(|e| format!("writing outputs: {e}"))
}

/// Re-run the trial a report row records and return the freshly computed
/// row. Byte-identical CSV lines mean the row reproduced exactly.
pub fn replay_row(cfg: &ExperimentConfig, row: &Row) -> Result<Row, String> {
    let construction: Construction = row.construction.parse()?;
    let function = match construction {
        Construction::Universal | Construction::Monotone => Some(build_function(
            &cfg.function,
            row.n,
            cfg.density,
            cfg.seed,
        )?),
        _ => None,
    };
    let group = Group {
        construction,
        n: row.n,
        epsilon: row.epsilon,
        d: row.d,
        b: row.b,
        w: row.w,
        trials: 1,
        bound_specific: row.bound_specific,
        function,
    };
    let (report, _, _) = run_group_trial(&group, cfg.seed, cfg.exhaustive_cap, row.trial)?;
    let replayed = row_from_report(&group, &report);
    if replayed.seed != row.seed {
        return Err(format!(
            "seed mismatch: recorded {} but derivation gives {}; was the report produced by this config?",
            row.seed, replayed.seed
        ));
    }
    Ok(replayed)
}

/// Path helper shared by main and verify.
pub fn report_path(dir: &Path) -> PathBuf {
    dir.join("report.csv")
}

pub fn summary_path(dir: &Path) -> PathBuf {
    dir.join("summary.json")
}
