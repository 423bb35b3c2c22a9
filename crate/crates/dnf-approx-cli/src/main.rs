use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dnf_approx_cli::config::{Construction, ExperimentConfig, FnSource};
use dnf_approx_cli::runner::{build_function, run_to_dir};
use dnf_approx_cli::verify::{run_oracle_suite, verify_row};

#[derive(Parser)]
#[command(
    name = "dnf-approx",
    about = "Construct DNF approximators for Boolean functions and measure them",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one construction and write report files.
    Approx {
        /// universal | parity | majority | monotone | all
        construction: Construction,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Run a parameter sweep (some of n, eps, d, b, w list-valued).
    Sweep {
        #[arg(long)]
        construction: Construction,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Re-check oracle cross-checks or reproduce a report row.
    Verify {
        /// Named suite to run (currently: oracles).
        #[arg(long)]
        suite: Option<String>,
        /// Arity for the suite corpus.
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Seed for the suite corpus.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run directory holding report.csv + summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// 1-based data row of report.csv to replay.
        #[arg(long)]
        row: Option<usize>,
    },
    /// Write a builtin or random truth table to a file.
    Gen {
        /// Function source (parity, majority, and, or, const0, const1,
        /// random, random-balanced, random-monotone, file:PATH).
        #[arg(long = "fn", value_name = "SRC")]
        function: FnSource,
        #[arg(long)]
        n: u32,
        /// Density for the random sources.
        #[arg(long, default_value_t = 0.05)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Flags mirror the config keys one for one; --config loads a key=value
/// file first and explicit flags override it.
#[derive(Args, Default)]
struct ConfigFlags {
    /// key=value config file to start from.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated arities, e.g. 8,12,16.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated target error fractions.
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated explicit sub-cube dimensions (universal).
    #[arg(long)]
    d: Option<String>,
    /// closed-form | simple-loglog (universal, when --d is absent).
    #[arg(long = "d-mode")]
    d_mode: Option<String>,
    /// Comma-separated block counts (parity).
    #[arg(long = "blocks", alias = "b")]
    blocks: Option<String>,
    /// Comma-separated term widths (majority).
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Target function source for universal/monotone.
    #[arg(long = "fn")]
    function: Option<FnSource>,
    /// Density for the random function sources.
    #[arg(long)]
    density: Option<f64>,
    /// Output directory (default: $DNF_APPROX_OUT or ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exhaustive-measurement arity cap; larger n use Monte Carlo.
    #[arg(long = "exhaustive-cap")]
    exhaustive_cap: Option<u32>,
    /// Write the best trial's DNF per parameter group.
    #[arg(long = "emit-dnf")]
    emit_dnf: Option<bool>,
    /// Worker threads (0 = library default). Outputs do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<u32>()
                .map_err(|e| anyhow!("bad integer {v:?}: {e}"))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad float {v:?}: {e}"))
        })
        .collect()
}

fn build_config(construction: Construction, flags: &ConfigFlags) -> Result<ExperimentConfig> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let mut cfg = ExperimentConfig::parse_kv(&text).map_err(|e| anyhow!(e))?;
            cfg.construction = construction;
            cfg
        }
        None => ExperimentConfig::new(construction),
    };
    if let Some(v) = &flags.n {
        cfg.n = parse_u32_list(v)?;
    }
    if let Some(v) = &flags.eps {
        cfg.eps = parse_f64_list(v)?;
    }
    if let Some(v) = &flags.d {
        cfg.d = parse_u32_list(v)?;
    }
    if let Some(v) = &flags.d_mode {
        cfg.d_mode = v.parse().map_err(|e: String| anyhow!(e))?;
    }
    if let Some(v) = &flags.blocks {
        cfg.b = parse_u32_list(v)?;
    }
    if let Some(v) = &flags.w {
        cfg.w = parse_u32_list(v)?;
    }
    if let Some(v) = flags.trials {
        cfg.trials = v;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    if let Some(v) = &flags.function {
        cfg.function = v.clone();
    }
    if let Some(v) = flags.density {
        cfg.density = v;
    }
    if let Some(v) = &flags.out {
        cfg.out = v.clone();
    }
    if let Some(v) = flags.exhaustive_cap {
        cfg.exhaustive_cap = v;
    }
    if let Some(v) = flags.emit_dnf {
        cfg.emit_dnf = v;
    }
    Ok(cfg)
}

fn run(construction: Construction, flags: &ConfigFlags, require_sweep: bool) -> Result<()> {
    let cfg = build_config(construction, flags)?;
    let written = run_to_dir(&cfg, require_sweep, flags.threads.unwrap_or(0))
        .map_err(|e| anyhow!(e))?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn verify_command(
    suite: Option<&str>,
    n: u32,
    seed: u64,
    out: Option<&std::path::Path>,
    row: Option<usize>,
) -> Result<()> {
    match (suite, out, row) {
        (Some("oracles"), _, _) => {
            let (lines, ok) = run_oracle_suite(n, seed);
            for line in &lines {
                println!(
                    "{}: {} checks, {} failures [{}]",
                    line.name,
                    line.checks,
                    line.failures,
                    if line.passed() { "PASS" } else { "FAIL" }
                );
            }
            let total: u64 = lines.iter().map(|l| l.checks).sum();
            println!(
                "suite oracles: {total} checks across {} groups [{}]",
                lines.len(),
                if ok { "PASS" } else { "FAIL" }
            );
            if ok {
                Ok(())
            } else {
                bail!("oracle suite failed")
            }
        }
        (Some(other), _, _) => bail!("unknown suite {other:?} (available: oracles)"),
        (None, Some(dir), Some(index)) => {
            let (replayed, ok) = verify_row(dir, index).map_err(|e| anyhow!(e))?;
            println!(
                "row {index}: construction={} n={} seed={} error={:e} [{}]",
                replayed.construction,
                replayed.n,
                replayed.seed,
                replayed.error,
                if ok { "PASS" } else { "FAIL" }
            );
            if ok {
                Ok(())
            } else {
                bail!("row {index} did not reproduce byte-identically")
            }
        }
        _ => bail!("verify needs either --suite oracles or --out DIR --row K"),
    }
}

fn gen_command(
    function: &FnSource,
    n: u32,
    density: f64,
    seed: u64,
    out: &std::path::Path,
) -> Result<()> {
    // gen writes exactly the table the runner would build for this source,
    // so generated files feed back through fn=file: reproducibly.
    let table = build_function(function, n, density, seed).map_err(|e| anyhow!(e))?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(out, table.to_file_string())
        .with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Approx {
            construction,
            flags,
        } => run(*construction, flags, false),
        Command::Sweep {
            construction,
            flags,
        } => run(*construction, flags, true),
        Command::Verify {
            suite,
            n,
            seed,
            out,
            row,
        } => verify_command(suite.as_deref(), *n, *seed, out.as_deref(), *row),
        Command::Gen {
            function,
            n,
            density,
            seed,
            out,
        } => gen_command(function, *n, *density, *seed, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
