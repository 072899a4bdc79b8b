//! `gazekit` command line. Exit codes: 0 success, 2 input error, 3 internal
//! invariant violation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gazekit::UiType;

mod commands;
mod config;
mod render;
mod store;

use config::{parse_horizons, RunConfig};

/// Problem with the user's inputs or flags.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Parser)]
#[command(name = "gazekit", version, about = "Eye-tracking analytics over UI screenshots")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Run-config overrides; each flag wins over the `--config` file.
#[derive(Args)]
struct Overrides {
    /// TOML run-config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Viewing horizons in seconds, comma separated
    #[arg(long, global = true, value_parser = parse_horizons)]
    // spelled out so clap treats the list as one value
    horizons: Option<::std::vec::Vec<f64>>,
    /// Fixation-map Gaussian sigma as a fraction of the image diagonal
    #[arg(long, global = true)]
    sigma_frac: Option<f64>,
    /// Recurrence radius as a fraction of the image diagonal
    #[arg(long, global = true)]
    rec_threshold_frac: Option<f64>,
    #[arg(long, global = true)]
    tde_k: Option<usize>,
    #[arg(long, global = true)]
    det_min_line: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Restrict to one UI type
    #[arg(long, global = true, value_parser = parse_ui_type)]
    ui_type: Option<UiType>,
    /// Fixations per generated scanpath
    #[arg(long, global = true)]
    n_fix: Option<usize>,
}

fn parse_ui_type(s: &str) -> Result<UiType, String> {
    s.parse().map_err(|e: gazekit::Error| e.to_string())
}

impl Overrides {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.horizons {
            cfg.horizons = v.clone();
        }
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { cfg.$f = v; })*};
        }
        set!(sigma_frac, rec_threshold_frac, tde_k, det_min_line, seed, workers, n_fix);
        if self.ui_type.is_some() {
            cfg.ui_type = self.ui_type;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse tracker logs into a canonical dataset store
    Ingest(commands::ingest::IngestArgs),
    /// Fixation maps per image and horizon (16-bit PNG and float grid)
    Salmap(commands::salmap::SalmapArgs),
    /// Score predicted scanpaths against a ground-truth store
    EvalScanpath(commands::eval::EvalScanpathArgs),
    /// Score predicted saliency maps against a ground-truth store
    EvalSalmap(commands::eval::EvalSalmapArgs),
    /// Location, color, saccade and element-visit analyses
    Analyze(commands::analyze::AnalyzeArgs),
    /// Baseline scanpaths from bottom-up saliency with inhibition of return
    Generate(commands::generate::GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Location,
    Color,
    Saccade,
    Visits,
    All,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = cli.overrides.resolve()?;
    let pool = cfg.pool()?;
    pool.install(|| match cli.command {
        Command::Ingest(a) => commands::ingest::run(&a, &cfg),
        Command::Salmap(a) => commands::salmap::run(&a, &cfg),
        Command::EvalScanpath(a) => commands::eval::run_scanpath(&a, &cfg),
        Command::EvalSalmap(a) => commands::eval::run_salmap(&a, &cfg),
        Command::Analyze(a) => commands::analyze::run(&a, &cfg),
        Command::Generate(a) => commands::generate::run(&a, &cfg),
    })
}

fn is_input_error(e: &gazekit::Error) -> bool {
    use gazekit::Error as E;
    !matches!(e, E::InvalidParameter(_) | E::DimensionMismatch(..) | E::NFixZero)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<InputError>() || cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<image::ImageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<gazekit::Error>() {
            return if is_input_error(e) { 2 } else { 3 };
        }
    }
    3
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
