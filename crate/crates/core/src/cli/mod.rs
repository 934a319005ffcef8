//! Batch front end: manifests in, certificate bundles out.

pub mod manifest;
pub mod run;
pub mod tables;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use manifest::{load_manifest, parse_manifest, CheckKind, Job, Manifest};
pub use run::{describe, run_jobs, Bundle, Settings, Status};
pub use tables::{suite_jobs, Suite};

use crate::budget::Caps;
use crate::error::Result;
use crate::nil::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ehpcert", version, about = "Certify nilpotency of algebra-valued forms and vanishing of Hilbert-Palatini forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every check in a manifest.
    Run {
        manifest: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a built-in example suite.
    Table {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Print an algebra's flags and grading.
    Inspect {
        /// Inline JSON (zoo spec or algebra manifest) or a path to one.
        algebra: String,
    },
    /// Write an algebra's structure-constant manifest.
    Export {
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Modular,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Evaluation points for modular mode.
    #[arg(long)]
    pub trials: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_generators: Option<usize>,
    /// Directory for the report bundle.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings (makes bundles non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Concurrent checks; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Common {
    fn settings(&self, manifest_mode: Option<Mode>, mut caps: Caps) -> Settings {
        let base = manifest_mode.unwrap_or_default();
        let (m_trials, m_seed) = match base {
            Mode::Modular { trials, seed } => (trials, seed),
            Mode::Exact => (manifest::DEFAULT_TRIALS, 0),
        };
        let modular = Mode::Modular {
            trials: self.trials.unwrap_or(m_trials),
            seed: self.seed.unwrap_or(m_seed),
        };
        let mode = match self.mode {
            Some(ModeArg::Exact) => Mode::Exact,
            Some(ModeArg::Modular) => modular,
            None if matches!(base, Mode::Modular { .. }) => modular,
            None => Mode::Exact,
        };
        if let Some(g) = self.max_generators {
            caps.max_generators = g;
        }
        Settings {
            mode,
            caps,
            timing: self.timing,
            workers: self.jobs,
        }
    }
}

fn finish(bundle: &Bundle, out: Option<&PathBuf>) -> Result<i32> {
    if let Some(dir) = out {
        bundle.write(dir)?;
    }
    println!("{}", serde_json::to_string_pretty(&bundle.summary())?);
    Ok(bundle.exit_code())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { manifest, common } => {
            let m = load_manifest(&manifest)?;
            let mut caps = Caps::from_env()?;
            m.caps.apply(&mut caps);
            let settings = common.settings(m.mode, caps);
            let bundle = run_jobs(&manifest.display().to_string(), &m.jobs, &settings)?;
            finish(&bundle, common.out.as_ref())
        }
        Command::Table { suite, common } => {
            let jobs = suite_jobs(suite)?;
            let settings = common.settings(None, Caps::from_env()?);
            let mut bundle = run_jobs(suite.name(), &jobs, &settings)?;
            bundle.table = Some(tables::summarize(&bundle));
            finish(&bundle, common.out.as_ref())
        }
        Command::Inspect { algebra } => {
            let a = manifest::resolve_algebra_arg(&algebra)?;
            println!("{}", serde_json::to_string_pretty(&describe(&a))?);
            Ok(EXIT_OK)
        }
        Command::Export { algebra, out } => {
            let a = manifest::resolve_algebra_arg(&algebra)?;
            let v = a.to_manifest();
            match out {
                Some(p) => run::write_json(&p, &v)?,
                None => println!("{}", serde_json::to_string_pretty(&v)?),
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_cap() {
                EXIT_RESOURCE_CAP
            } else {
                EXIT_ERROR
            }
        }
    }
}
