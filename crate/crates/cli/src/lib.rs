//! `randcal`: verification pipelines for averaged Calderón data as one binary.
//!
//! Every run is a [`RunConfig`] (subcommand, typed parameters, seed, output
//! directory) and produces a [`Verdict`] written as versioned JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod suite;
pub mod verdict;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Param, RunConfig};
pub use error::CliError;
pub use suite::{run_suite, Level, Outcome, CRITERIA};
pub use verdict::Verdict;

use output::OutDir;
use verdict::render;

#[derive(Parser, Debug)]
#[command(name = "randcal", version, about = "Exact and numerical checks for random-coefficient Calderon problems")]
pub struct Cli {
    /// JSON run config; flags given on the command line override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory for verdicts and tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parametrix symbols and the triangularity check.
    Symbols {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        cutoff: Option<i64>,
        #[arg(long)]
        triangularity: Option<i64>,
    },
    /// Exact vs shooting DN eigenvalues of the Q_N family.
    Radial {
        /// Comma-separated family indices N.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        lmax: Option<i64>,
        #[arg(long)]
        dim: Option<i64>,
    },
    /// Exact identities.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Moment-matched laws and DN moment products.
    Moments {
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        nodes: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        trials: Option<i64>,
        #[arg(long)]
        dim: Option<i64>,
    },
    /// Grid Green-operator pipelines: jensen, mean-variance, two-atom, finite-model, rigidity, invariant.
    Green {
        task: String,
        /// `n` for 1D, `n,n` for 2D.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        sampler: Option<String>,
        #[arg(long)]
        probes: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// The acceptance battery.
    Suite { level: String },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// The barycentric DN identity for N=5 against N=1, N=7.
    Counterexample {
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        lmax: Option<i64>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        dim: Option<i64>,
    },
}

fn put_int(cfg: &mut RunConfig, key: &str, v: Option<i64>) {
    if let Some(v) = v {
        cfg.set(key, Param::Int(v));
    }
}

fn put_text(cfg: &mut RunConfig, key: &str, v: Option<String>) {
    if let Some(v) = v {
        cfg.set(key, Param::Text(v));
    }
}

impl Cli {
    /// Merges the config file with command-line flags.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let from_file = self.config.as_deref().map(RunConfig::load).transpose()?;
        let (path, flags): (Option<String>, Vec<(String, Param)>) = match self.command {
            None => (None, vec![]),
            Some(cmd) => {
                let mut tmp = RunConfig::new("");
                let path = match cmd {
                    Command::Symbols { kind, cutoff, triangularity } => {
                        put_text(&mut tmp, "kind", kind);
                        put_int(&mut tmp, "cutoff", cutoff);
                        put_int(&mut tmp, "triangularity", triangularity);
                        "symbols".to_string()
                    }
                    Command::Radial { family, lambda, lmax, dim } => {
                        put_text(&mut tmp, "family", family);
                        put_text(&mut tmp, "lambda", lambda);
                        put_int(&mut tmp, "lmax", lmax);
                        put_int(&mut tmp, "dim", dim);
                        "radial".to_string()
                    }
                    Command::Verify { what: VerifyCommand::Counterexample { mode, lmax, lambda, dim } } => {
                        put_text(&mut tmp, "mode", mode);
                        put_int(&mut tmp, "lmax", lmax);
                        put_text(&mut tmp, "lambda", lambda);
                        put_int(&mut tmp, "dim", dim);
                        "verify counterexample".to_string()
                    }
                    Command::Moments { order, nodes, lambda, trials, dim } => {
                        put_int(&mut tmp, "order", order);
                        put_text(&mut tmp, "nodes", nodes);
                        put_text(&mut tmp, "lambda", lambda);
                        put_int(&mut tmp, "trials", trials);
                        put_int(&mut tmp, "dim", dim);
                        "moments".to_string()
                    }
                    Command::Green { task, grid, kind, sampler, probes, tau, kmax } => {
                        put_text(&mut tmp, "grid", grid);
                        put_text(&mut tmp, "kind", kind);
                        put_text(&mut tmp, "sampler", sampler);
                        put_text(&mut tmp, "probes", probes);
                        put_text(&mut tmp, "tau", tau);
                        put_int(&mut tmp, "kmax", kmax);
                        format!("green {task}")
                    }
                    Command::Suite { level } => format!("suite {level}"),
                };
                (Some(path), tmp.params.into_iter().collect())
            }
        };
        let mut cfg = match (from_file, path) {
            (Some(f), Some(p)) if f.subcommand != p => {
                return Err(CliError::Config(format!("config is for {:?}, command line asks for {p:?}", f.subcommand)))
            }
            (Some(f), _) => f,
            (None, Some(p)) => RunConfig::new(p),
            (None, None) => return Err(CliError::Config("no subcommand given (see --help)".into())),
        };
        for (k, v) in flags {
            cfg.set(&k, v);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
        Ok(cfg)
    }
}

/// Result of a run: the verdict, where it was written, and the exit code.
pub struct RunOutcome {
    pub verdict: Verdict,
    pub verdict_path: String,
    pub lines: Vec<String>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.verdict.pass() {
            0
        } else {
            1
        }
    }
}

fn status(v: &Verdict) -> &'static str {
    match (v.skipped, v.pass()) {
        (true, _) => "SKIP",
        (false, true) => "PASS",
        (false, false) => "FAIL",
    }
}

/// Dispatches a config to its pipeline and writes `config.json` and `verdict.json`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let words: Vec<&str> = cfg.subcommand.split_whitespace().collect();
    if let ["suite", rest @ ..] = words.as_slice() {
        let level: Level = rest.first().copied().unwrap_or("").parse()?;
        if rest.len() > 1 {
            return Err(CliError::Config(format!("unexpected arguments {:?}", &rest[1..])));
        }
        cfg.expect_keys(&[])?;
        return run_suite_config(cfg, level);
    }
    let out = OutDir::create(&cfg.out)?;
    let mut verdict = match words.as_slice() {
        ["symbols"] => commands::symbols(cfg, &out)?,
        ["radial"] => commands::radial(cfg, &out)?,
        ["verify", "counterexample"] => commands::verify_counterexample(cfg, &out)?,
        ["moments"] => commands::moments(cfg, &out)?,
        ["green", task] => commands::green(task, cfg, &out)?,
        _ => return Err(CliError::Config(format!("unknown subcommand {:?}", cfg.subcommand))),
    };
    finish(cfg, &out, &mut verdict)
}

fn finish(cfg: &RunConfig, out: &OutDir, verdict: &mut Verdict) -> Result<RunOutcome, CliError> {
    out.write("config.json", render(cfg).as_bytes())?;
    let verdict_path = out.write("verdict.json", render(&verdict.to_json()).as_bytes())?;
    let mut line = format!("{} {}", status(verdict), verdict.name);
    if let Some(f) = verdict.first_failure() {
        line.push_str(&format!(": {f}"));
    }
    Ok(RunOutcome { verdict: verdict.clone(), verdict_path, lines: vec![line] })
}

fn run_suite_config(cfg: &RunConfig, level: Level) -> Result<RunOutcome, CliError> {
    let out = OutDir::create(&cfg.out)?;
    let mut agg = Verdict::new(format!("suite {}", if level == Level::Quick { "quick" } else { "full" }));
    for c in CRITERIA.iter() {
        let o = suite::run_criterion(c, level);
        let mut line = format!("{} {} ({:.2}s)", status(&o.verdict), o.verdict.name, o.elapsed.as_secs_f64());
        if let Some(f) = o.verdict.first_failure() {
            line.push_str(&format!(": {f}"));
        }
        println!("{line}");
        agg.members.push(o.verdict);
        // Partial results survive a later failure or abort.
        out.write("suite.json", render(&agg.to_json()).as_bytes())?;
    }
    finish(cfg, &out, &mut agg)
}

/// Caps the global worker pool from `RANDCAL_THREADS`.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("RANDCAL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("RANDCAL_THREADS={v:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

/// Full entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| cli.into_config()).and_then(|cfg| run(&cfg));
    match result {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            println!("verdict: {}", o.verdict_path);
            o.exit_code()
        }
        Err(e) => {
            eprintln!("randcal: {e}");
            e.exit_code()
        }
    }
}
