//! `gec-forge` command-line tool.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gec_forge::corpus::Split;
use gec_forge::Lang;

use config::{NormArgs, RunConfig};

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\ncore: gec-forge ",
    env!("CARGO_PKG_VERSION"),
    "\nreport schema: 1\nprompt template: v1\ninvisibles table: v1"
);

#[derive(Debug, Parser)]
#[command(name = "gec-forge", version, long_version = LONG_VERSION, about = "Error-type analysis and GLEU scoring for Hindi and Malayalam GEC")]
pub struct Cli {
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Lexicon file overriding the built-in one (falls back to $GEC_FORGE_LEXICON)
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[command(flatten)]
    norm: NormArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label each sentence pair of a CSV with one error category
    Classify {
        #[arg(long)]
        lang: Option<Lang>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "train")]
        split: Split,
        /// Add a JSON evidence column
        #[arg(long)]
        evidence: bool,
    },
    /// Per-category error distribution of one split
    Analyze {
        #[arg(long)]
        lang: Option<Lang>,
        #[arg(long)]
        split: Split,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Skip pairs where either side is empty or a null sentinel
        #[arg(long)]
        drop_nulls: bool,
        /// Skip exact repeats of a pair
        #[arg(long)]
        dedup: bool,
    },
    /// Corpus GLEU of hypotheses against single references
    Score {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Ignored: single-reference scoring does not sample
        #[arg(long)]
        iterations: Option<u64>,
        /// Ignored: single-reference scoring does not sample
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Normalize text one line at a time
    Normalize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also apply surface cleanup for model outputs
        #[arg(long)]
        postprocess: bool,
        /// Echoed prompt prefix to strip before cleanup
        #[arg(long)]
        prompt_prefix: Option<String>,
        /// Sentence-final mark to enforce during cleanup
        #[arg(long, value_enum, default_value = "infer")]
        terminal: commands::TerminalArg,
    },
    /// Build a correction prompt from a distribution report
    SynthPrompt {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the structured prompt spec as JSON
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Stratify prediction edits, or compare two prediction sets
    Audit {
        #[arg(long)]
        lang: Option<Lang>,
        #[arg(long = "in", required_unless_present = "dual", conflicts_with = "dual")]
        input: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        dual: Option<Vec<PathBuf>>,
    },
}

/// A failed run: input problems exit 1, everything else exits 2.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Failure::Internal(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<gec_forge::Error> for Failure {
    fn from(e: gec_forge::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if cli.lexicon.is_some() {
        cfg.lexicon_path = cli.lexicon.clone();
    }
    cli.norm.apply(&mut cfg.normalization);

    match cli.command {
        Command::Classify {
            lang,
            input,
            out,
            split,
            evidence,
        } => commands::classify(&cfg, cfg.lang(lang)?, &input, &out, split, evidence),
        Command::Analyze {
            lang,
            split,
            input,
            report,
            drop_nulls,
            dedup,
        } => commands::analyze(
            &cfg,
            cfg.lang(lang)?,
            split,
            &input,
            &report,
            drop_nulls,
            dedup,
        ),
        Command::Score {
            src,
            hyp,
            reference,
            max_n,
            report,
            iterations,
            seed,
        } => {
            if iterations.is_some() || seed.or(cfg.seed).is_some() {
                eprintln!("note: --iterations/--seed have no effect with a single reference");
            }
            commands::score(
                &cfg,
                &src,
                &hyp,
                &reference,
                max_n.unwrap_or(cfg.max_n),
                report.as_deref(),
            )
        }
        Command::Normalize {
            input,
            out,
            postprocess,
            prompt_prefix,
            terminal,
        } => {
            let cleanup = postprocess.then_some((prompt_prefix.as_deref(), terminal));
            commands::normalize(&cfg, &input, out.as_deref(), cleanup)
        }
        Command::SynthPrompt { dist, out, spec } => {
            commands::synth_prompt(&cfg, &dist, &out, spec.as_deref())
        }
        Command::Audit {
            lang,
            input,
            cap,
            report,
            dual,
        } => {
            let lang = cfg.lang(lang)?;
            let cap = cap.unwrap_or(cfg.cap);
            match (input, dual) {
                (_, Some(files)) => {
                    commands::audit_dual(&cfg, lang, &files[0], &files[1], cap, &report)
                }
                (Some(input), None) => commands::audit(&cfg, lang, &input, cap, &report),
                (None, None) => Err(Failure::input("audit needs --in or --dual")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
