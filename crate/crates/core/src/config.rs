//! Run configuration: base-graph specs, the flat `key = value` file format
//! and the configuration hash stamped into outputs.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coherence::{LcDivisor, TraceMode, DEFAULT_K, DEFAULT_SUPPORT_THRESHOLD};
use crate::ctqw::DEFAULT_T_MIN;
use crate::graph::{
    make_complete, make_cycle, make_erdos_renyi, make_petersen, make_random_regular, parse_graph, Graph,
    GraphError, DEFAULT_VERTEX_BUDGET,
};
use crate::spectral::{TieBreak, DEFAULT_DENSE_CUTOFF};

pub const DEFAULT_WALK_BUDGET: usize = 10_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("invalid value for {key}: {reason}")]
    Value { key: String, reason: String },
    #[error("invalid base graph {spec:?}: {reason}")]
    Base { spec: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A base graph family with its parameters. Random families without an
/// explicit seed use the run seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum BaseSpec {
    Complete(usize),
    Petersen,
    Cycle(usize),
    RandomRegular { d: usize, n: usize, seed: Option<u64> },
    ErdosRenyi { n: usize, p: f64, seed: Option<u64> },
    File(PathBuf),
}

impl From<BaseSpec> for String {
    fn from(b: BaseSpec) -> String {
        b.to_string()
    }
}

impl fmt::Display for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seed = |s: &Option<u64>| s.map(|s| format!(",{s}")).unwrap_or_default();
        match self {
            BaseSpec::Complete(n) => write!(f, "complete:{n}"),
            BaseSpec::Petersen => f.write_str("petersen"),
            BaseSpec::Cycle(n) => write!(f, "cycle:{n}"),
            BaseSpec::RandomRegular { d, n, seed: s } => write!(f, "rr:{d},{n}{}", seed(s)),
            BaseSpec::ErdosRenyi { n, p, seed: s } => write!(f, "er:{n},{p}{}", seed(s)),
            BaseSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for BaseSpec {
    type Err = ConfigError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ConfigError::Base {
            spec: spec.to_owned(),
            reason: reason.to_owned(),
        };
        let (family, args) = spec.split_once(':').unwrap_or((spec, ""));
        let parts: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(str::trim).collect()
        };
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("{s:?} is not an integer")));
        let seed = |i: usize| -> Result<Option<u64>, ConfigError> {
            parts
                .get(i)
                .map(|s| s.parse::<u64>().map_err(|_| bad(&format!("{s:?} is not a seed"))))
                .transpose()
        };
        match (family, parts.len()) {
            ("complete", 1) => Ok(BaseSpec::Complete(int(parts[0])?)),
            ("petersen", 0) => Ok(BaseSpec::Petersen),
            ("cycle", 1) => Ok(BaseSpec::Cycle(int(parts[0])?)),
            ("rr", 2 | 3) => Ok(BaseSpec::RandomRegular {
                d: int(parts[0])?,
                n: int(parts[1])?,
                seed: seed(2)?,
            }),
            ("er", 2 | 3) => Ok(BaseSpec::ErdosRenyi {
                n: int(parts[0])?,
                p: parts[1]
                    .parse()
                    .map_err(|_| bad(&format!("{:?} is not a probability", parts[1])))?,
                seed: seed(2)?,
            }),
            ("file", _) if !args.is_empty() => Ok(BaseSpec::File(PathBuf::from(args))),
            _ => Err(bad(
                "expected complete:n | petersen | cycle:n | rr:d,n[,seed] | er:n,p[,seed] | file:path",
            )),
        }
    }
}

/// Failure to materialize a base graph.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl BaseSpec {
    pub fn build(&self, run_seed: u64) -> Result<Graph, BuildError> {
        let g = match self {
            BaseSpec::Complete(n) => {
                if *n == 0 {
                    return Err(GraphError::InvalidParams("complete graph needs n >= 1".into()).into());
                }
                make_complete(*n)
            }
            BaseSpec::Petersen => make_petersen(),
            BaseSpec::Cycle(n) => make_cycle(*n)?,
            BaseSpec::RandomRegular { d, n, seed } => make_random_regular(*n, *d, seed.unwrap_or(run_seed))?,
            BaseSpec::ErdosRenyi { n, p, seed } => make_erdos_renyi(*n, *p, seed.unwrap_or(run_seed))?,
            BaseSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_graph(&text)?.with_label(format!("file:{}", path.display()))
            }
        };
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub base: BaseSpec,
    pub levels: usize,
    /// Extra levels reported from the size and spectrum recurrences only.
    pub predict_levels: usize,
    pub seed: u64,
    /// Walk horizon; `None` picks the per-level default.
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub start_vertex: usize,
    pub t_min: f64,
    pub k: usize,
    pub threshold: f64,
    pub tie_break: TieBreak,
    pub trace_mode: TraceMode,
    pub lc_divisor: LcDivisor,
    /// Largest graph built.
    pub budget: usize,
    /// Largest graph walked without sampling.
    pub walk_budget: usize,
    pub dense_cutoff: usize,
    /// BFS sample size for graphs above the walk budget.
    pub sample: Option<usize>,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            base: BaseSpec::Complete(4),
            levels: 3,
            predict_levels: 0,
            seed: 1,
            t_max: None,
            steps: None,
            start_vertex: 0,
            t_min: DEFAULT_T_MIN,
            k: DEFAULT_K,
            threshold: DEFAULT_SUPPORT_THRESHOLD,
            tie_break: TieBreak::Positive,
            trace_mode: TraceMode::Paper,
            lc_divisor: LcDivisor::Used,
            budget: DEFAULT_VERTEX_BUDGET,
            walk_budget: DEFAULT_WALK_BUDGET,
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            sample: None,
            out: PathBuf::from("out"),
        }
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.parse::<T>().map_err(|e| ConfigError::Value {
        key: key.to_owned(),
        reason: format!("{raw:?}: {e}"),
    })
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), ConfigError> {
        let raw = raw.trim();
        let optional = |raw: &str| raw.is_empty() || raw == "none";
        match key {
            "base" => self.base = raw.parse()?,
            "levels" => self.levels = value(key, raw)?,
            "predict_levels" => self.predict_levels = value(key, raw)?,
            "seed" => self.seed = value(key, raw)?,
            "t_max" => self.t_max = if optional(raw) { None } else { Some(value(key, raw)?) },
            "steps" => self.steps = if optional(raw) { None } else { Some(value(key, raw)?) },
            "start" => self.start_vertex = value(key, raw)?,
            "t_min" => self.t_min = value(key, raw)?,
            "k" => self.k = value(key, raw)?,
            "threshold" => self.threshold = value(key, raw)?,
            "tie_break" => self.tie_break = value(key, raw)?,
            "trace_mode" => self.trace_mode = value(key, raw)?,
            "lc_divisor" => self.lc_divisor = value(key, raw)?,
            "budget" => self.budget = value(key, raw)?,
            "walk_budget" => self.walk_budget = value(key, raw)?,
            "dense_cutoff" => self.dense_cutoff = value(key, raw)?,
            "sample" => self.sample = if optional(raw) { None } else { Some(value(key, raw)?) },
            "out" => self.out = PathBuf::from(raw),
            other => return Err(ConfigError::UnknownKey(other.to_owned())),
        }
        Ok(())
    }

    /// Applies a config file: one `key = value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                reason: format!("expected key = value, got {line:?}"),
            })?;
            self.set(key.trim(), raw).map_err(|e| match e {
                ConfigError::Syntax { .. } => e,
                other => ConfigError::Syntax {
                    line: i + 1,
                    reason: other.to_string(),
                },
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key: &str, reason: &str| {
            Err(ConfigError::Value {
                key: key.to_owned(),
                reason: reason.to_owned(),
            })
        };
        if self.k == 0 {
            return fail("k", "must be at least 1");
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return fail("t_max", "must be positive and finite");
            }
        }
        if matches!(self.steps, Some(s) if s < 2) {
            return fail("steps", "must be at least 2");
        }
        if self.sample == Some(0) {
            return fail("sample", "must be at least 1");
        }
        if self.threshold.is_nan() || self.threshold < 0.0 {
            return fail("threshold", "must be non-negative");
        }
        if !self.t_min.is_finite() {
            return fail("t_min", "must be finite");
        }
        Ok(())
    }

    /// Canonical `key = value` form of every setting except the output directory.
    pub fn canonical(&self) -> String {
        let opt = |x: Option<String>| x.unwrap_or_else(|| "none".into());
        [
            format!("base = {}", self.base),
            format!("levels = {}", self.levels),
            format!("predict_levels = {}", self.predict_levels),
            format!("seed = {}", self.seed),
            format!("t_max = {}", opt(self.t_max.map(|t| t.to_string()))),
            format!("steps = {}", opt(self.steps.map(|s| s.to_string()))),
            format!("start = {}", self.start_vertex),
            format!("t_min = {}", self.t_min),
            format!("k = {}", self.k),
            format!("threshold = {}", self.threshold),
            format!("tie_break = {}", self.tie_break),
            format!("trace_mode = {}", self.trace_mode),
            format!("lc_divisor = {}", self.lc_divisor),
            format!("budget = {}", self.budget),
            format!("walk_budget = {}", self.walk_budget),
            format!("dense_cutoff = {}", self.dense_cutoff),
            format!("sample = {}", opt(self.sample.map(|s| s.to_string()))),
        ]
        .join("\n")
            + "\n"
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_specs_round_trip() {
        for s in ["complete:4", "petersen", "cycle:7", "rr:3,20", "rr:3,20,9", "er:20,0.1,4", "file:g.txt"] {
            assert_eq!(s.parse::<BaseSpec>().unwrap().to_string(), s);
        }
        for s in ["complete", "rr:3", "er:20,x", "tree:4", "petersen:1", "file:"] {
            assert!(s.parse::<BaseSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn builds_base_graphs() {
        let g = "rr:3,20".parse::<BaseSpec>().unwrap().build(7).unwrap();
        assert_eq!(g, make_random_regular(20, 3, 7).unwrap());
        let g = "rr:3,20,5".parse::<BaseSpec>().unwrap().build(7).unwrap();
        assert_eq!(g, make_random_regular(20, 3, 5).unwrap());
        assert!("complete:0".parse::<BaseSpec>().unwrap().build(1).is_err());
        assert!("file:/nonexistent/graph".parse::<BaseSpec>().unwrap().build(1).is_err());
    }

    #[test]
    fn config_file_and_hash() {
        let mut a = RunConfig::default();
        a.apply_text("# tower\nbase = petersen\nlevels = 2 # two lifts\nk=4\nout = /tmp/x\n")
            .unwrap();
        assert_eq!(a.base, BaseSpec::Petersen);
        assert_eq!((a.levels, a.k), (2, 4));
        let mut b = a.clone();
        b.out = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.k = 5;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let mut c = RunConfig::default();
        c.apply_text(&a.canonical()).unwrap();
        assert_eq!(c.hash(), a.hash());
    }

    #[test]
    fn config_errors() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_text("levels 3"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(c.apply_text("\ncolour = red"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(c.set("tie_break", "sideways").is_err());
        c.k = 0;
        assert!(c.validate().is_err());
    }
}
