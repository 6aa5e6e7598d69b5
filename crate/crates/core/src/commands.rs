//! The command implementations behind the `liftwalk` binary.
//!
//! Every command writes its data files into the configured output directory.
//! Each CSV starts with a `# liftwalk <version> config=<hash>` comment line and
//! each JSON document carries the same information under `meta`, so outputs
//! depend only on the configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coherence::{
    coherence_report, spectral_coherence, CoherenceError, CoherenceOptions, CoherenceReport, WalkParams,
};
use crate::config::{BuildError, ConfigError, RunConfig};
use crate::ctqw::{return_series, series_stats, KrylovOptions, WalkError, WalkStats};
use crate::format::{g12, g12_opt};
use crate::graph::{
    bfs_sample, hl2_tower, predict_tower_sizes, serialize_graph, DegreeInfo, Graph, GraphError, Tower,
    TowerLevel,
};
use crate::spectral::{
    distinct_eigenvalues, eigenvalues, is_integer_spectrum, multiset_deviation, predict_lift_spectrum_with,
    EigenOptions, LiftSpectrumRule, SpectralError,
};
use crate::structural::{structural_report, StructuralReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Clustering tolerance when reporting distinct eigenvalues.
pub const DISTINCT_TOL: f64 = 1e-6;
/// Largest accepted deviation between predicted and computed lift spectra.
pub const RULE_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Verification(_) => 5,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            GraphError::GenerationFailed { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Graph(g) => g.into(),
            BuildError::Config(c) => c.into(),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::TooLarge { .. } => CliError::Budget(e.to_string()),
            SpectralError::InvalidParams(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::InvalidParams(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<CoherenceError> for CliError {
    fn from(e: CoherenceError) -> Self {
        match e {
            CoherenceError::Spectral(s) => s.into(),
            CoherenceError::Walk(w) => w.into(),
            CoherenceError::InvalidParams(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Writer for one command's output directory.
pub struct Output {
    dir: PathBuf,
    header: String,
    meta: Value,
}

impl Output {
    pub fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let hash = cfg.hash();
        fs::create_dir_all(&cfg.out).map_err(|source| CliError::Io {
            path: cfg.out.clone(),
            source,
        })?;
        Ok(Self {
            dir: cfg.out.clone(),
            header: format!("# liftwalk {VERSION} config={hash}\n"),
            meta: json!({
                "tool": "liftwalk",
                "version": VERSION,
                "config_hash": hash,
                "config": cfg,
            }),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }

    /// Writes the header comment, extra comment lines, then `body`.
    pub fn csv(&self, name: &str, comments: &[String], body: &str) -> Result<PathBuf, CliError> {
        let mut text = self.header.clone();
        for c in comments {
            writeln!(text, "# {c}").unwrap();
        }
        text.push_str(body);
        self.write(name, &text)
    }

    /// Writes `{"meta": .., <fields of value>}`.
    pub fn json(&self, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
        let mut doc = serde_json::Map::new();
        doc.insert("meta".into(), self.meta.clone());
        match serde_json::to_value(value).expect("serializable output") {
            Value::Object(map) => doc.extend(map),
            other => {
                doc.insert("data".into(), other);
            }
        }
        let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable output") + "\n";
        self.write(name, &text)
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        self.write(name, body)
    }
}

fn base_graph(cfg: &RunConfig) -> Result<Graph, CliError> {
    cfg.validate()?;
    Ok(cfg.base.build(cfg.seed)?)
}

fn tower(cfg: &RunConfig) -> Result<Tower, CliError> {
    Ok(hl2_tower(&base_graph(cfg)?, cfg.levels, cfg.budget)?)
}

fn eigen_options(cfg: &RunConfig) -> EigenOptions {
    EigenOptions {
        tie_break: cfg.tie_break,
        dense_cutoff: cfg.dense_cutoff,
        seed: cfg.seed,
        ..EigenOptions::default()
    }
}

fn coherence_options(cfg: &RunConfig) -> CoherenceOptions {
    CoherenceOptions {
        k: cfg.k,
        threshold: cfg.threshold,
        trace_mode: cfg.trace_mode,
        lc_divisor: cfg.lc_divisor,
        eigen: eigen_options(cfg),
    }
}

fn walk_params(cfg: &RunConfig, level: usize, start_vertex: usize) -> WalkParams {
    let defaults = WalkParams::for_level(level);
    WalkParams {
        t_max: cfg.t_max.unwrap_or(defaults.t_max),
        steps: cfg.steps.unwrap_or(defaults.steps),
        start_vertex,
        t_min: cfg.t_min,
        krylov: KrylovOptions::default(),
    }
}

/// The graph a walk runs on: `g` itself, or a BFS sample when `g` exceeds
/// the walk budget.
struct WalkTarget {
    graph: Graph,
    start_vertex: usize,
    sampled: bool,
}

fn walk_target(cfg: &RunConfig, g: &Graph, level: usize) -> Result<WalkTarget, CliError> {
    if g.n() <= cfg.walk_budget {
        if cfg.start_vertex >= g.n() {
            return Err(CliError::Config(format!(
                "start vertex {} out of range at level {level} ({} vertices)",
                cfg.start_vertex,
                g.n()
            )));
        }
        return Ok(WalkTarget {
            graph: g.clone(),
            start_vertex: cfg.start_vertex,
            sampled: false,
        });
    }
    let Some(n_max) = cfg.sample else {
        return Err(CliError::Budget(format!(
            "level {level} has {} vertices, above the walk budget of {}; pass --sample N",
            g.n(),
            cfg.walk_budget
        )));
    };
    let sample = bfs_sample(g, n_max, cfg.seed.wrapping_add(level as u64))?;
    Ok(WalkTarget {
        graph: sample.graph,
        start_vertex: 0,
        sampled: true,
    })
}

fn tower_csv(rows: &[TowerLevel]) -> String {
    let mut s = String::from("level,vertices,edges,degree,min_degree,max_degree,components,predicted,recurrence_ok\n");
    for r in rows {
        let degree = match r.degree {
            DegreeInfo::Regular { degree } => degree.to_string(),
            DegreeInfo::Irregular { .. } => String::new(),
        };
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.level,
            r.vertices,
            r.edges,
            degree,
            r.degree.min(),
            r.degree.max(),
            r.components.map(|c| c.to_string()).unwrap_or_default(),
            r.predicted,
            r.recurrence_ok
        )
        .unwrap();
    }
    s
}

fn print_tower_rows(rows: &[TowerLevel]) {
    for r in rows {
        println!(
            "level {}: V={} E={} d={} components={}{}",
            r.level,
            r.vertices,
            r.edges,
            match r.degree {
                DegreeInfo::Regular { degree } => degree.to_string(),
                DegreeInfo::Irregular { min, max } => format!("{min}..{max}"),
            },
            r.components.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
            if r.predicted { " (predicted)" } else { "" }
        );
    }
}

/// Builds the tower, writes one edge list per level plus `tower.csv` and
/// `tower.json`. Over budget, the buildable prefix is still written along
/// with predicted sizes before the budget error is returned.
pub fn cmd_lift(cfg: &RunConfig) -> Result<Vec<TowerLevel>, CliError> {
    let base = base_graph(cfg)?;
    let out = Output::new(cfg)?;
    let (tower, failure) = match hl2_tower(&base, cfg.levels, cfg.budget) {
        Ok(t) => (t, None),
        Err(e @ GraphError::BudgetExceeded { level, .. }) if level > 0 => {
            (hl2_tower(&base, level - 1, cfg.budget)?, Some(e))
        }
        Err(e) => return Err(e.into()),
    };
    let built = tower.graphs.len();
    let mut rows = tower.summary.rows.clone();
    let wanted = cfg.levels + cfg.predict_levels;
    rows.extend(predict_tower_sizes(&base, wanted).into_iter().skip(built));
    for (r, g) in tower.graphs.iter().enumerate() {
        out.text(
            &format!("level_{r}.edges"),
            &format!("{}{}", out.header, serialize_graph(g)),
        )?;
    }
    let note = "predicted rows: vertices = 2 * previous edges, degree = 2d - 2, edges = vertices * degree / 2";
    out.csv("tower.csv", &[note.to_owned()], &tower_csv(&rows))?;
    out.json("tower.json", &json!({ "rows": rows, "note": note }))?;
    print_tower_rows(&rows);
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(rows),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelWalk {
    pub level: usize,
    pub n: usize,
    pub sampled: bool,
    pub start_vertex: usize,
    pub t_max: f64,
    pub steps: usize,
    #[serde(flatten)]
    pub stats: WalkStats,
}

/// Return-probability series for every tower level (`walk_level_<r>.csv`)
/// and their statistics (`walk_stats.json`).
pub fn cmd_walk(cfg: &RunConfig) -> Result<Vec<LevelWalk>, CliError> {
    let tower = tower(cfg)?;
    let out = Output::new(cfg)?;
    let mut results = Vec::new();
    for (level, g) in tower.graphs.iter().enumerate() {
        let target = walk_target(cfg, g, level)?;
        let params = walk_params(cfg, level, target.start_vertex);
        let series = return_series(&target.graph, params.start_vertex, params.t_max, params.steps, &params.krylov)?;
        let stats = series_stats(&series, params.t_min);
        let mut body = String::from("t,p_return\n");
        for (t, p) in series.times.iter().zip(&series.p_return) {
            writeln!(body, "{},{}", g12(*t), g12(*p)).unwrap();
        }
        let note = format!(
            "level={level} n={} start={} sampled={}",
            target.graph.n(),
            target.start_vertex,
            target.sampled
        );
        out.csv(&format!("walk_level_{level}.csv"), &[note], &body)?;
        println!(
            "level {level}: n={} mean={} peak={} std={} revival_peak={} (t>={})",
            target.graph.n(),
            g12(stats.mean),
            g12(stats.peak),
            g12(stats.std),
            g12_opt(stats.revival_peak),
            g12(stats.t_min)
        );
        results.push(LevelWalk {
            level,
            n: target.graph.n(),
            sampled: target.sampled,
            start_vertex: target.start_vertex,
            t_max: params.t_max,
            steps: params.steps,
            stats,
        });
    }
    out.json("walk_stats.json", &json!({ "levels": results }))?;
    Ok(results)
}

/// One coherence row per level: `coherence.csv` (IPR, purity, relative
/// entropy and walk columns), `log_coherence.csv` and `coherence.json`.
pub fn cmd_coherence(cfg: &RunConfig) -> Result<Vec<CoherenceReport>, CliError> {
    let tower = tower(cfg)?;
    let out = Output::new(cfg)?;
    let opts = coherence_options(cfg);
    let mut rows = Vec::new();
    for (level, g) in tower.graphs.iter().enumerate() {
        let target = walk_target(cfg, g, level)?;
        let walk = walk_params(cfg, level, target.start_vertex);
        let report = if target.sampled {
            // Spectral metrics on the full level, walk statistics on the sample.
            let spec = spectral_coherence(g, &opts)?;
            let stats = series_stats(
                &return_series(&target.graph, walk.start_vertex, walk.t_max, walk.steps, &walk.krylov)?,
                walk.t_min,
            );
            CoherenceReport {
                graph: g.label().unwrap_or("graph").to_owned(),
                n: g.n(),
                level,
                k: opts.k,
                avg_ipr: spec.avg_ipr,
                purity: spec.purity,
                rel_entropy_bits: spec.rel_entropy_bits,
                log_coherence_bits: spec.log_coherence_bits,
                mean_return: stats.mean,
                peak: stats.peak,
                revival_peak: stats.revival_peak,
                std: stats.std,
                basis_sensitive: spec.basis_sensitive,
            }
        } else {
            coherence_report(g, level, &opts, &walk)?
        };
        println!(
            "level {level}: n={} ipr={} purity={} rel_entropy={} lc={} mean_return={}{}",
            report.n,
            g12(report.avg_ipr),
            g12(report.purity),
            g12(report.rel_entropy_bits),
            g12(report.log_coherence_bits),
            g12(report.mean_return),
            if report.basis_sensitive { " [basis-sensitive]" } else { "" }
        );
        rows.push(report);
    }
    let mut table = String::from("Lift,Nodes,IPR,Purity,Rel. Entropy,Mean Return,Peak,Std Dev\n");
    let mut lc = String::from("Lift,Nodes,LC\n");
    for r in &rows {
        writeln!(
            table,
            "{},{},{},{},{},{},{},{}",
            r.level,
            r.n,
            g12(r.avg_ipr),
            g12(r.purity),
            g12(r.rel_entropy_bits),
            g12(r.mean_return),
            g12(r.peak),
            g12(r.std)
        )
        .unwrap();
        writeln!(lc, "{},{},{}", r.level, r.n, g12(r.log_coherence_bits)).unwrap();
    }
    let notes = [format!(
        "k={} trace_mode={} tie_break={} lc_divisor={}",
        cfg.k, cfg.trace_mode, cfg.tie_break, cfg.lc_divisor
    )];
    out.csv("coherence.csv", &notes, &table)?;
    out.csv("log_coherence.csv", &notes, &lc)?;
    out.json("coherence.json", &json!({ "rows": rows }))?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelStructure {
    pub level: usize,
    #[serde(flatten)]
    pub report: StructuralReport,
}

/// Closed 4-walks, clustering and triangles per level (`structural.csv`,
/// `structural.json`).
pub fn cmd_structural(cfg: &RunConfig) -> Result<Vec<LevelStructure>, CliError> {
    let tower = tower(cfg)?;
    let out = Output::new(cfg)?;
    let rows: Vec<LevelStructure> = tower
        .graphs
        .iter()
        .enumerate()
        .map(|(level, g)| LevelStructure {
            level,
            report: structural_report(g),
        })
        .collect();
    let mut body =
        String::from("Lift Level,Vertices,Edges,Tr(A4),Tr(A4)/n,Avg Clust.,Triangles,Triangles/Vertex\n");
    for r in &rows {
        let s = &r.report;
        writeln!(
            body,
            "{},{},{},{},{},{},{},{}",
            r.level,
            s.n,
            s.m,
            s.trace_a4,
            g12(s.trace_a4_per_vertex),
            g12(s.avg_clustering),
            s.triangle_count,
            g12(s.triangles_per_vertex)
        )
        .unwrap();
        println!(
            "level {}: V={} E={} tr(A^4)/n={} clustering={} triangles/vertex={}",
            r.level,
            s.n,
            s.m,
            g12(s.trace_a4_per_vertex),
            g12(s.avg_clustering),
            g12(s.triangles_per_vertex)
        );
    }
    let notes = ["vertices of degree below 2 have clustering 0".to_owned()];
    out.csv("structural.csv", &notes, &body)?;
    out.json(
        "structural.json",
        &json!({ "clustering_low_degree": "zero", "rows": rows }),
    )?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumSource {
    /// Dense eigensolve of the constructed level.
    Dense,
    /// Lift rule applied to the previous level's spectrum.
    Predicted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub level: usize,
    pub source: SpectrumSource,
    pub distinct: Vec<f64>,
    pub min_eig: f64,
    pub max_eig: f64,
    pub integer_spectrum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleCheck {
    pub level: usize,
    pub rule: &'static str,
    pub max_deviation: f64,
    /// Only the `d-2` rule is asserted.
    pub asserted: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumOutcome {
    pub rows: Vec<SpectrumRow>,
    pub checks: Vec<RuleCheck>,
}

fn rule_name(rule: LiftSpectrumRule) -> &'static str {
    match rule {
        LiftSpectrumRule::DegreeMinusTwo => "d-2",
        LiftSpectrumRule::TwiceDegreeMinusTwo => "2d-2",
    }
}

/// Distinct eigenvalues per level (`spectrum.csv`, `spectrum.json`).
///
/// Levels up to the dense cutoff are solved directly; larger levels and the
/// `predict_levels` extra levels come from the lift rule when the previous
/// level is regular. With `verify_rule`, every solved level with a regular
/// predecessor is compared against the rule (`spectrum_verify.csv`); the
/// alternative `2d-2` rule is added for comparison when `verbose`.
pub fn cmd_spectrum(cfg: &RunConfig, verify_rule: bool, verbose: bool) -> Result<SpectrumOutcome, CliError> {
    let base = base_graph(cfg)?;
    let tower = hl2_tower(&base, cfg.levels, cfg.budget)?;
    let out = Output::new(cfg)?;
    let sizes = predict_tower_sizes(&base, cfg.levels + cfg.predict_levels);
    let total = cfg.levels + cfg.predict_levels + 1;

    let mut spectra: Vec<(Vec<f64>, SpectrumSource)> = Vec::new();
    let mut checks = Vec::new();
    for level in 0..total {
        let built = tower.graphs.get(level);
        let prev_degree = level
            .checked_sub(1)
            .and_then(|p| match tower.graphs.get(p) {
                Some(g) => g.regular_degree(),
                None => match sizes.get(p)?.degree {
                    DegreeInfo::Regular { degree } => Some(degree as usize),
                    DegreeInfo::Irregular { .. } => None,
                },
            });
        let predict = |rule| -> Option<Result<Vec<f64>, SpectralError>> {
            let d = prev_degree?;
            let (prev, _) = spectra.get(level - 1)?;
            let n = prev.len();
            Some(predict_lift_spectrum_with(prev, d, n, n * d / 2, rule))
        };
        let (values, source) = match built {
            Some(g) if g.n() <= cfg.dense_cutoff => (eigenvalues(g, cfg.dense_cutoff)?, SpectrumSource::Dense),
            _ => match predict(LiftSpectrumRule::DegreeMinusTwo) {
                Some(p) => (p?, SpectrumSource::Predicted),
                None if built.is_some() => {
                    return Err(SpectralError::TooLarge {
                        n: built.map(Graph::n).unwrap_or(0),
                        cutoff: cfg.dense_cutoff,
                    }
                    .into())
                }
                None => {
                    println!("level {level}: not predictable (irregular predecessor)");
                    break;
                }
            },
        };
        if verify_rule && source == SpectrumSource::Dense && level > 0 {
            let mut rules = vec![LiftSpectrumRule::DegreeMinusTwo];
            if verbose {
                rules.push(LiftSpectrumRule::TwiceDegreeMinusTwo);
            }
            for rule in rules {
                if let Some(pred) = predict(rule) {
                    let dev = multiset_deviation(&pred?, &values).unwrap_or(f64::INFINITY);
                    let asserted = rule == LiftSpectrumRule::DegreeMinusTwo;
                    checks.push(RuleCheck {
                        level,
                        rule: rule_name(rule),
                        max_deviation: dev,
                        asserted,
                        pass: dev <= RULE_TOL,
                    });
                }
            }
        }
        spectra.push((values, source));
    }

    let rows: Vec<SpectrumRow> = spectra
        .iter()
        .enumerate()
        .map(|(level, (values, source))| {
            let distinct = distinct_eigenvalues(values, DISTINCT_TOL);
            SpectrumRow {
                level,
                source: *source,
                integer_spectrum: is_integer_spectrum(&distinct),
                min_eig: values.iter().copied().fold(f64::INFINITY, f64::min),
                max_eig: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                distinct,
            }
        })
        .collect();

    let mut body = String::from("level,distinct_eigenvalues,min_eig,max_eig,integer_spectrum\n");
    for r in &rows {
        let distinct: Vec<String> = r.distinct.iter().map(|x| g12(*x)).collect();
        writeln!(
            body,
            "{},{},{},{},{}",
            r.level,
            distinct.join(";"),
            g12(r.min_eig),
            g12(r.max_eig),
            r.integer_spectrum
        )
        .unwrap();
        println!(
            "level {}: {{{}}} ({})",
            r.level,
            distinct.join(", "),
            match r.source {
                SpectrumSource::Dense => "dense",
                SpectrumSource::Predicted => "predicted",
            }
        );
    }
    let sources: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{}={}",
                r.level,
                match r.source {
                    SpectrumSource::Dense => "dense",
                    SpectrumSource::Predicted => "predicted",
                }
            )
        })
        .collect();
    out.csv("spectrum.csv", &[format!("source: {}", sources.join(" "))], &body)?;

    if verify_rule {
        let mut v = String::from("level,rule,max_deviation,asserted,pass\n");
        for c in &checks {
            writeln!(v, "{},{},{},{},{}", c.level, c.rule, g12(c.max_deviation), c.asserted, c.pass).unwrap();
            println!(
                "verify level {} rule {}: max deviation {}{}",
                c.level,
                c.rule,
                g12(c.max_deviation),
                if c.asserted { "" } else { " (comparison only)" }
            );
        }
        out.csv("spectrum_verify.csv", &[], &v)?;
        if checks.iter().all(|c| !c.asserted) {
            println!("no level has a regular predecessor; nothing to verify");
        }
    }
    let outcome = SpectrumOutcome { rows, checks };
    out.json("spectrum.json", &outcome)?;
    if let Some(bad) = outcome.checks.iter().find(|c| c.asserted && !c.pass) {
        return Err(CliError::Verification(format!(
            "lift spectrum rule misses level {} by {}",
            bad.level,
            g12(bad.max_deviation)
        )));
    }
    Ok(outcome)
}

/// Runs every command into one directory and assembles `report.md`.
pub fn cmd_report(cfg: &RunConfig, verbose: bool) -> Result<PathBuf, CliError> {
    let tower_rows = cmd_lift(cfg)?;
    let spectrum = cmd_spectrum(cfg, true, verbose)?;
    let structural = cmd_structural(cfg)?;
    let coherence = cmd_coherence(cfg)?;
    let walks = cmd_walk(cfg)?;
    let out = Output::new(cfg)?;

    let mut md = String::new();
    writeln!(md, "# liftwalk report\n").unwrap();
    writeln!(md, "- version: {VERSION}").unwrap();
    writeln!(md, "- config: `{}`", cfg.hash()).unwrap();
    writeln!(md, "- base: `{}`, levels: {}, seed: {}\n", cfg.base, cfg.levels, cfg.seed).unwrap();

    writeln!(md, "## Tower\n").unwrap();
    writeln!(md, "| Level | Vertices | Edges | Degree | Components | Predicted |").unwrap();
    writeln!(md, "|---|---|---|---|---|---|").unwrap();
    for r in &tower_rows {
        let d = match r.degree {
            DegreeInfo::Regular { degree } => degree.to_string(),
            DegreeInfo::Irregular { min, max } => format!("{min}..{max}"),
        };
        let c = r.components.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        writeln!(md, "| {} | {} | {} | {d} | {c} | {} |", r.level, r.vertices, r.edges, r.predicted).unwrap();
    }

    writeln!(md, "\n## Distinct eigenvalues\n").unwrap();
    writeln!(md, "| Level | Eigenvalues | Source |").unwrap();
    writeln!(md, "|---|---|---|").unwrap();
    for r in &spectrum.rows {
        let d: Vec<String> = r.distinct.iter().map(|x| g12(*x)).collect();
        writeln!(md, "| {} | {{{}}} | {:?} |", r.level, d.join(", "), r.source).unwrap();
    }
    for c in spectrum.checks.iter().filter(|c| c.asserted) {
        writeln!(md, "\nLift rule at level {}: max deviation {}.", c.level, g12(c.max_deviation)).unwrap();
    }

    writeln!(md, "\n## Structure\n").unwrap();
    writeln!(md, "| Level | Vertices | Edges | Tr(A4) | Tr(A4)/n | Avg Clust. | Triangles | Triangles/Vertex |").unwrap();
    writeln!(md, "|---|---|---|---|---|---|---|---|").unwrap();
    for r in &structural {
        let s = &r.report;
        writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            r.level,
            s.n,
            s.m,
            s.trace_a4,
            g12(s.trace_a4_per_vertex),
            g12(s.avg_clustering),
            s.triangle_count,
            g12(s.triangles_per_vertex)
        )
        .unwrap();
    }

    writeln!(md, "\n## Coherence (k = {})\n", cfg.k).unwrap();
    writeln!(md, "| Level | Nodes | IPR | Purity | Rel. Entropy | LC | Mean Return | Peak | Std Dev | Basis-sensitive |").unwrap();
    writeln!(md, "|---|---|---|---|---|---|---|---|---|---|").unwrap();
    for r in &coherence {
        writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.level,
            r.n,
            g12(r.avg_ipr),
            g12(r.purity),
            g12(r.rel_entropy_bits),
            g12(r.log_coherence_bits),
            g12(r.mean_return),
            g12(r.peak),
            g12(r.std),
            r.basis_sensitive
        )
        .unwrap();
    }

    writeln!(md, "\n## Walks\n").unwrap();
    writeln!(md, "| Level | n | T | Steps | Mean | Std | Revival peak | Revival time |").unwrap();
    writeln!(md, "|---|---|---|---|---|---|---|---|").unwrap();
    for w in &walks {
        writeln!(
            md,
            "| {} | {}{} | {} | {} | {} | {} | {} | {} |",
            w.level,
            w.n,
            if w.sampled { " (sample)" } else { "" },
            g12(w.t_max),
            w.steps,
            g12(w.stats.mean),
            g12(w.stats.std),
            g12_opt(w.stats.revival_peak),
            g12_opt(w.stats.revival_time)
        )
        .unwrap();
    }
    out.text("report.md", &md)
}
