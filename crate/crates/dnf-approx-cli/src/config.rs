//! Experiment configuration: the flat key=value file form, the mirrored CLI
//! flags, and validation. Every field is checked before any trial runs, and
//! a config round-trips through its file form bit-exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which construction(s) to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Universal,
    Parity,
    Majority,
    Monotone,
    All,
}

impl Construction {
    pub fn expand(self) -> Vec<Construction> {
        match self {
            Construction::All => vec![
                Construction::Universal,
                Construction::Parity,
                Construction::Majority,
                Construction::Monotone,
            ],
            other => vec![other],
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Construction::Universal => "universal",
            Construction::Parity => "parity",
            Construction::Majority => "majority",
            Construction::Monotone => "monotone",
            Construction::All => "all",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Construction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "universal" => Ok(Construction::Universal),
            "parity" => Ok(Construction::Parity),
            "majority" => Ok(Construction::Majority),
            "monotone" => Ok(Construction::Monotone),
            "all" => Ok(Construction::All),
            other => Err(format!("unknown construction {other:?}")),
        }
    }
}

/// How universal's sub-cube dimension is picked when no explicit d is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DModeKey {
    ClosedForm,
    SimpleLoglog,
}

impl fmt::Display for DModeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DModeKey::ClosedForm => write!(f, "closed-form"),
            DModeKey::SimpleLoglog => write!(f, "simple-loglog"),
        }
    }
}

impl FromStr for DModeKey {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed-form" => Ok(DModeKey::ClosedForm),
            "simple-loglog" => Ok(DModeKey::SimpleLoglog),
            other => Err(format!("unknown d_mode {other:?}")),
        }
    }
}

/// Target-function source for universal and monotone runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnSource {
    Parity,
    Majority,
    And,
    Or,
    Const0,
    Const1,
    /// Bernoulli(density) per input.
    Random,
    /// Exactly half the inputs set to 1.
    RandomBalanced,
    /// Seed set of density q, then upward closure.
    RandomMonotone,
    /// Truth-table file in the repo format.
    File(PathBuf),
}

impl fmt::Display for FnSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSource::Parity => write!(f, "parity"),
            FnSource::Majority => write!(f, "majority"),
            FnSource::And => write!(f, "and"),
            FnSource::Or => write!(f, "or"),
            FnSource::Const0 => write!(f, "const0"),
            FnSource::Const1 => write!(f, "const1"),
            FnSource::Random => write!(f, "random"),
            FnSource::RandomBalanced => write!(f, "random-balanced"),
            FnSource::RandomMonotone => write!(f, "random-monotone"),
            FnSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for FnSource {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("empty path in fn=file:".into());
            }
            return Ok(FnSource::File(PathBuf::from(path)));
        }
        match s {
            "parity" => Ok(FnSource::Parity),
            "majority" => Ok(FnSource::Majority),
            "and" => Ok(FnSource::And),
            "or" => Ok(FnSource::Or),
            "const0" => Ok(FnSource::Const0),
            "const1" => Ok(FnSource::Const1),
            "random" => Ok(FnSource::Random),
            "random-balanced" => Ok(FnSource::RandomBalanced),
            "random-monotone" => Ok(FnSource::RandomMonotone),
            other => Err(format!("unknown fn source {other:?}")),
        }
    }
}

/// The full experiment description. List-valued n/eps/d/b/w turn one config
/// into a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub construction: Construction,
    pub n: Vec<u32>,
    pub eps: Vec<f64>,
    /// Explicit sub-cube dimensions for universal; empty means use d_mode.
    pub d: Vec<u32>,
    pub d_mode: DModeKey,
    /// Block counts for parity; empty means derive from eps.
    pub b: Vec<u32>,
    /// Term widths for majority; empty means derive from eps.
    pub w: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub function: FnSource,
    pub density: f64,
    pub out: PathBuf,
    pub exhaustive_cap: u32,
    pub emit_dnf: bool,
}

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "DNF_APPROX_OUT";

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

impl ExperimentConfig {
    pub fn new(construction: Construction) -> Self {
        ExperimentConfig {
            construction,
            n: Vec::new(),
            eps: Vec::new(),
            d: Vec::new(),
            d_mode: DModeKey::SimpleLoglog,
            b: Vec::new(),
            w: Vec::new(),
            trials: 1,
            seed: 0,
            function: match construction {
                // `all` includes monotone, so its default target must be
                // monotone too.
                Construction::Monotone | Construction::All => FnSource::RandomMonotone,
                _ => FnSource::RandomBalanced,
            },
            density: 0.05,
            out: default_out_dir(),
            exhaustive_cap: dnf_approx::oracle::DEFAULT_EXHAUSTIVE_CAP,
            emit_dnf: true,
        }
    }

    /// Serialize to the flat key=value file form, keys in fixed order.
    /// Floats use Rust's shortest round-trip printing, so parse() of the
    /// result reproduces this config bit-exactly.
    pub fn to_kv_string(&self) -> String {
        let join_u32 = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let join_f64 = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        s.push_str(&format!("construction={}\n", self.construction));
        s.push_str(&format!("n={}\n", join_u32(&self.n)));
        s.push_str(&format!("eps={}\n", join_f64(&self.eps)));
        s.push_str(&format!("d={}\n", join_u32(&self.d)));
        s.push_str(&format!("d_mode={}\n", self.d_mode));
        s.push_str(&format!("b={}\n", join_u32(&self.b)));
        s.push_str(&format!("w={}\n", join_u32(&self.w)));
        s.push_str(&format!("trials={}\n", self.trials));
        s.push_str(&format!("seed={}\n", self.seed));
        s.push_str(&format!("fn={}\n", self.function));
        s.push_str(&format!("density={}\n", self.density));
        s.push_str(&format!("out={}\n", self.out.display()));
        s.push_str(&format!("exhaustive_cap={}\n", self.exhaustive_cap));
        s.push_str(&format!("emit_dnf={}\n", self.emit_dnf));
        s
    }

    /// Parse the key=value form. Unknown or repeated keys are errors; '#'
    /// starts a comment line.
    pub fn parse_kv(text: &str) -> Result<Self, String> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
            if map.insert(key.trim(), value.trim()).is_some() {
                return Err(format!("line {}: repeated key {key:?}", lineno + 1));
            }
        }
        let construction: Construction = map
            .remove("construction")
            .ok_or("missing key construction")?
            .parse()?;
        let mut cfg = ExperimentConfig::new(construction);

        fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|v| v.trim().parse().map_err(|e| format!("bad integer {v:?}: {e}")))
                .collect()
        }
        fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|v| v.trim().parse().map_err(|e| format!("bad float {v:?}: {e}")))
                .collect()
        }

        if let Some(v) = map.remove("n") {
            cfg.n = parse_u32_list(v)?;
        }
        if let Some(v) = map.remove("eps") {
            cfg.eps = parse_f64_list(v)?;
        }
        if let Some(v) = map.remove("d") {
            cfg.d = parse_u32_list(v)?;
        }
        if let Some(v) = map.remove("d_mode") {
            cfg.d_mode = v.parse()?;
        }
        if let Some(v) = map.remove("b") {
            cfg.b = parse_u32_list(v)?;
        }
        if let Some(v) = map.remove("w") {
            cfg.w = parse_u32_list(v)?;
        }
        if let Some(v) = map.remove("trials") {
            cfg.trials = v.parse().map_err(|e| format!("bad trials: {e}"))?;
        }
        if let Some(v) = map.remove("seed") {
            cfg.seed = v.parse().map_err(|e| format!("bad seed: {e}"))?;
        }
        if let Some(v) = map.remove("fn") {
            cfg.function = v.parse()?;
        }
        if let Some(v) = map.remove("density") {
            cfg.density = v.parse().map_err(|e| format!("bad density: {e}"))?;
        }
        if let Some(v) = map.remove("out") {
            cfg.out = PathBuf::from(v);
        }
        if let Some(v) = map.remove("exhaustive_cap") {
            cfg.exhaustive_cap = v.parse().map_err(|e| format!("bad exhaustive_cap: {e}"))?;
        }
        if let Some(v) = map.remove("emit_dnf") {
            cfg.emit_dnf = v.parse().map_err(|e| format!("bad emit_dnf: {e}"))?;
        }
        if let Some((key, _)) = map.into_iter().next() {
            return Err(format!("unknown key {key:?}"));
        }
        Ok(cfg)
    }

    /// Check every field; nothing runs and no file is written unless this
    /// passes.
    pub fn validate(&self) -> Result<(), String> {
        if self.n.is_empty() {
            return Err("no n values given".into());
        }
        for &n in &self.n {
            if n == 0 || n > dnf_approx::boolfn::MAX_N {
                return Err(format!("n={n} outside [1, {}]", dnf_approx::boolfn::MAX_N));
            }
        }
        // Upper bounds are construction-specific (majority has none,
        // universal takes (0,1], monotone and the parity derivation are
        // tighter) and enforced when groups are planned.
        for &eps in &self.eps {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(format!("eps={eps} must be positive and finite"));
            }
        }
        if self.trials == 0 {
            return Err("trials must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(format!("density={} outside [0, 1]", self.density));
        }
        for &b in &self.b {
            if b == 0 {
                return Err("b must be >= 1".into());
            }
        }
        for &w in &self.w {
            if w == 0 {
                return Err("w must be >= 1".into());
            }
        }
        for &d in &self.d {
            if d == 0 {
                return Err("d must be >= 1".into());
            }
        }
        let needs = |what: &str| -> Result<(), String> {
            if self.eps.is_empty() {
                Err(format!("{what} needs eps"))
            } else {
                Ok(())
            }
        };
        for c in self.construction.expand() {
            match c {
                Construction::Universal | Construction::Monotone => needs(&c.to_string())?,
                Construction::Parity => {
                    if self.b.is_empty() {
                        needs("parity (without b)")?;
                        for &eps in &self.eps {
                            if eps >= 0.5 && self.construction == Construction::Parity {
                                return Err(format!(
                                    "parity block derivation needs eps in (0, 1/2), got {eps}"
                                ));
                            }
                        }
                    }
                }
                Construction::Majority => {
                    if self.w.is_empty() {
                        needs("majority (without w)")?;
                    }
                }
                Construction::All => unreachable!(),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(Construction::Universal);
        cfg.n = vec![12];
        cfg.eps = vec![0.2, 0.5];
        cfg.d = vec![1, 2];
        cfg.trials = 50;
        cfg.seed = 7;
        cfg.out = PathBuf::from("/tmp/reports");
        cfg
    }

    #[test]
    fn kv_round_trip_bit_exact() {
        let cfg = sample();
        let text = cfg.to_kv_string();
        let parsed = ExperimentConfig::parse_kv(&text).unwrap();
        assert_eq!(parsed, cfg);
        assert_eq!(parsed.to_kv_string(), text);
    }

    #[test]
    fn kv_round_trip_odd_floats() {
        let mut cfg = sample();
        cfg.eps = vec![0.1, 1.0 / 3.0, 0.123_456_789_123_456_78];
        cfg.density = 1.0 / 7.0;
        let parsed = ExperimentConfig::parse_kv(&cfg.to_kv_string()).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        assert!(ExperimentConfig::parse_kv("construction=parity\nbogus=3\n").is_err());
        assert!(ExperimentConfig::parse_kv("construction=parity\nn=4\nn=5\n").is_err());
        assert!(ExperimentConfig::parse_kv("n=4\n").is_err());
    }

    #[test]
    fn validation_catches_bad_fields() {
        let mut cfg = sample();
        cfg.n = vec![];
        assert!(cfg.validate().is_err());

        let mut cfg = sample();
        cfg.n = vec![31];
        assert!(cfg.validate().is_err());

        let mut cfg = sample();
        cfg.eps = vec![-0.2];
        assert!(cfg.validate().is_err());
        cfg.eps = vec![f64::NAN];
        assert!(cfg.validate().is_err());
        // Construction-specific upper bounds are enforced at planning time,
        // so a bare positive value passes field validation.
        cfg.eps = vec![1.5];
        assert!(cfg.validate().is_ok());

        let mut cfg = sample();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::new(Construction::Parity);
        cfg.n = vec![8];
        cfg.eps = vec![0.6];
        assert!(cfg.validate().is_err());
        cfg.b = vec![2];
        assert!(cfg.validate().is_ok());

        assert!(sample().validate().is_ok());
    }

    #[test]
    fn out_dir_env_default() {
        // Only the default output directory comes from the environment.
        std::env::set_var(OUT_DIR_ENV, "/tmp/env-default-check");
        assert_eq!(default_out_dir(), PathBuf::from("/tmp/env-default-check"));
        std::env::remove_var(OUT_DIR_ENV);
        assert_eq!(default_out_dir(), PathBuf::from("out"));
    }

    #[test]
    fn fn_source_round_trip() {
        for s in [
            "parity",
            "majority",
            "and",
            "or",
            "const0",
            "const1",
            "random",
            "random-balanced",
            "random-monotone",
            "file:tables/f.tt",
        ] {
            let src: FnSource = s.parse().unwrap();
            assert_eq!(src.to_string(), s);
        }
        assert!("file:".parse::<FnSource>().is_err());
        assert!("nope".parse::<FnSource>().is_err());
    }
}
