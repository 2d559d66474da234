//! Command-line front end: `ddsim run <planfile>`.

pub mod output;
pub mod plan;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::montecarlo::{sweep, SignalCurve, SimulationPlan};
use output::{emit_csv, emit_plot_script, OutputError, PlotStyle};
use plan::{PlanDocument, PlanError};

#[derive(Debug, Parser)]
#[command(
    name = "ddsim",
    version,
    about = "Dephasing under ideal and jittered pulse sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every plan expanded from a plan file and write CSV results.
    Run(RunArgs),
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    pub planfile: PathBuf,
    /// Output directory (overrides `output.path`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `mc.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `mc.realizations`.
    #[arg(long)]
    pub realizations: Option<u64>,
    /// Suppress progress output.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Plan(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Plan(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Output(_) => 1,
        }
    }

    /// Single-line diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        let (tag, msg) = match self {
            CliError::Plan(m) => ("plan", m),
            CliError::Numerical(m) => ("numerical", m),
            CliError::Output(m) => ("io", m),
        };
        format!("error[{tag}]: {}", msg.replace('\n', " "))
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        CliError::Plan(e.to_string())
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        match e {
            OutputError::Numerical(e) => CliError::Numerical(e.to_string()),
            other => CliError::Output(other.to_string()),
        }
    }
}

/// What a successful run wrote.
#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Load a plan file and apply command-line overrides.
pub fn load_plans(args: &RunArgs) -> Result<(Vec<SimulationPlan>, PathBuf), CliError> {
    let text = fs::read_to_string(&args.planfile)
        .map_err(|e| CliError::Plan(format!("cannot read `{}`: {e}", args.planfile.display())))?;
    let mut doc = PlanDocument::parse(&text)?;
    if let Some(seed) = args.seed {
        doc.set("mc.seed", seed.to_string())?;
    }
    if let Some(n) = args.realizations {
        doc.set("mc.realizations", n.to_string())?;
    }
    let set = doc.expand()?;
    let out = args.out.clone().unwrap_or(set.output);
    Ok((set.plans, out))
}

/// Execute `run`. Plans that fail numerically do not stop the others, but
/// the run as a whole then reports a numerical error.
pub fn run_command(args: &RunArgs) -> Result<RunSummary, CliError> {
    let (plans, out_dir) = load_plans(args)?;
    if !args.quiet {
        eprintln!("running {} plan(s) into {}", plans.len(), out_dir.display());
    }
    let results = sweep(&plans).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut done: Vec<(SimulationPlan, SignalCurve)> = Vec::new();
    let mut failures = Vec::new();
    for (i, (plan, res)) in plans.into_iter().zip(results).enumerate() {
        match res {
            Ok(curve) => done.push((plan, curve)),
            Err(e) => failures.push(format!("plan {i}: {e}")),
        }
    }

    let mut files = Vec::new();
    if !done.is_empty() {
        let manifest = emit_csv(&done, &out_dir)?;
        files.extend(manifest.entries.iter().map(|e| out_dir.join(&e.file)));
        files.push(out_dir.join(output::MANIFEST_FILE));
        files.push(emit_plot_script(
            &manifest,
            &out_dir,
            PlotStyle::CoherencePanels,
        )?);
    }
    if !args.quiet {
        for f in &files {
            eprintln!("wrote {}", f.display());
        }
    }
    if !failures.is_empty() {
        return Err(CliError::Numerical(failures.join("; ")));
    }
    Ok(RunSummary { out_dir, files })
}

/// Parse `argv`, run, print diagnostics; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let Command::Run(args) = cli.command;
    match run_command(&args) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            e.exit_code()
        }
    }
}
