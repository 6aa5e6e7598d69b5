use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use liftwalk::coherence::{LcDivisor, TraceMode};
use liftwalk::commands::{cmd_coherence, cmd_lift, cmd_report, cmd_spectrum, cmd_structural, cmd_walk, CliError};
use liftwalk::config::{BaseSpec, RunConfig};
use liftwalk::spectral::TieBreak;

/// Symmetric graph lifts, lift towers and continuous-time quantum walks.
#[derive(Parser)]
#[command(name = "liftwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Subcommand)]
enum Command {
    /// Build the lift tower and write per-level edge lists and sizes.
    Lift,
    /// Return-probability series and statistics for every level.
    Walk,
    /// IPR, purity, relative entropy, log coherence and walk statistics.
    Coherence,
    /// Closed 4-walks, clustering and triangle counts.
    Structural,
    /// Distinct eigenvalues per level.
    Spectrum {
        /// Compare each computed lift spectrum with the prediction rule.
        #[arg(long)]
        verify_rule: bool,
        /// Also report the alternative `2d-2` rule.
        #[arg(long)]
        verbose: bool,
    },
    /// Run everything and write report.md.
    Report {
        #[arg(long)]
        verbose: bool,
    },
}

/// Settings; flags override the config file, which overrides defaults.
#[derive(Args)]
struct Settings {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// complete:n | petersen | cycle:n | rr:d,n[,seed] | er:n,p[,seed] | file:path
    #[arg(long, global = true, value_name = "SPEC")]
    base: Option<BaseSpec>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Extra tower levels reported from recurrences only.
    #[arg(long, global = true)]
    predict_levels: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest graph to construct (vertices).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Largest graph to walk without sampling (vertices).
    #[arg(long, global = true)]
    walk_budget: Option<usize>,
    /// Largest graph handed to the dense eigensolver.
    #[arg(long, global = true)]
    dense_cutoff: Option<usize>,
    /// Walk on a BFS sample of this many vertices when over the walk budget.
    #[arg(long, global = true, value_name = "N")]
    sample: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Support threshold for the log coherence.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[arg(long, global = true, value_name = "positive|negative")]
    tie_break: Option<TieBreak>,
    #[arg(long, global = true, value_name = "paper|unit")]
    trace_mode: Option<TraceMode>,
    #[arg(long, global = true, value_name = "used|requested")]
    lc_divisor: Option<LcDivisor>,
    #[arg(long, global = true, value_name = "T")]
    t_max: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true, value_name = "VERTEX")]
    start: Option<usize>,
    #[arg(long, global = true, value_name = "X")]
    t_min: Option<f64>,
}

impl Settings {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        set!(
            out => out, base => base, levels => levels, predict_levels => predict_levels,
            seed => seed, budget => budget, walk_budget => walk_budget,
            dense_cutoff => dense_cutoff, k => k, threshold => threshold,
            tie_break => tie_break, trace_mode => trace_mode, lc_divisor => lc_divisor,
            start => start_vertex, t_min => t_min,
        );
        if self.sample.is_some() {
            cfg.sample = self.sample;
        }
        if self.t_max.is_some() {
            cfg.t_max = self.t_max;
        }
        if self.steps.is_some() {
            cfg.steps = self.steps;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.settings.resolve()?;
    match cli.command {
        Command::Lift => cmd_lift(&cfg).map(drop),
        Command::Walk => cmd_walk(&cfg).map(drop),
        Command::Coherence => cmd_coherence(&cfg).map(drop),
        Command::Structural => cmd_structural(&cfg).map(drop),
        Command::Spectrum { verify_rule, verbose } => cmd_spectrum(&cfg, verify_rule, verbose).map(drop),
        Command::Report { verbose } => cmd_report(&cfg, verbose).map(|path| println!("wrote {}", path.display())),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("liftwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
