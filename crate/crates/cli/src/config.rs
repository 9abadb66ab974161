//! Run configuration: built-in defaults, then an optional TOML file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use gec_forge::textnorm::{DandaPolicy, DigitPolicy};
use gec_forge::tokenizer::Lexicon;
use gec_forge::{Lang, LanguageProfile, NormalizationPolicy};
use serde::{Deserialize, Serialize};

use crate::Failure;

pub const LEXICON_ENV: &str = "GEC_FORGE_LEXICON";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lang: Option<Lang>,
    pub normalization: NormalizationPolicy,
    pub lexicon_path: Option<PathBuf>,
    pub max_n: usize,
    pub cap: usize,
    /// Accepted for compatibility with multi-reference GLEU harnesses.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lang: None,
            normalization: NormalizationPolicy::default(),
            lexicon_path: None,
            max_n: gec_forge::gleu::DEFAULT_MAX_N,
            cap: gec_forge::audit::DEFAULT_CAP,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }

    /// Resolves the language from a flag or the config file.
    pub fn lang(&self, flag: Option<Lang>) -> Result<Lang, Failure> {
        flag.or(self.lang).ok_or_else(|| {
            Failure::input("no language given; pass --lang or set `lang` in the config")
        })
    }

    /// The built-in profile, or one built from the configured lexicon file.
    /// A lexicon path from `GEC_FORGE_LEXICON` is used when none is set.
    pub fn profile(&self, lang: Lang) -> Result<LanguageProfile, Failure> {
        let path = self
            .lexicon_path
            .clone()
            .or_else(|| std::env::var_os(LEXICON_ENV).map(PathBuf::from));
        let Some(path) = path else {
            return Ok(LanguageProfile::for_lang(lang));
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let lexicon = Lexicon::parse(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok(LanguageProfile::with_lexicon(lang, lexicon))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DandaArg {
    Keep,
    ToPeriod,
    ToDanda,
}

impl From<DandaArg> for DandaPolicy {
    fn from(d: DandaArg) -> Self {
        match d {
            DandaArg::Keep => DandaPolicy::KeepDanda,
            DandaArg::ToPeriod => DandaPolicy::MapDandaToPeriod,
            DandaArg::ToDanda => DandaPolicy::MapPeriodToDanda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DigitArg {
    Ascii,
    Native,
}

impl From<DigitArg> for DigitPolicy {
    fn from(d: DigitArg) -> Self {
        match d {
            DigitArg::Ascii => DigitPolicy::ToAscii,
            DigitArg::Native => DigitPolicy::KeepNative,
        }
    }
}

/// Normalization overrides shared by every subcommand.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct NormArgs {
    /// Danda handling
    #[arg(long, value_enum, global = true)]
    pub danda: Option<DandaArg>,
    /// Digit handling
    #[arg(long, value_enum, global = true)]
    pub digits: Option<DigitArg>,
    /// Collapse runs of sentence-final marks to the last one
    #[arg(long, global = true)]
    pub unify_terminal: bool,
    /// Keep ZWJ/ZWNJ while stripping other invisibles
    #[arg(long, global = true)]
    pub keep_joiners: bool,
    /// Leave zero-width and other invisible characters in place
    #[arg(long, global = true)]
    pub keep_invisibles: bool,
    /// Leave whitespace runs as they are
    #[arg(long, global = true)]
    pub keep_whitespace: bool,
}

impl NormArgs {
    pub fn apply(&self, policy: &mut NormalizationPolicy) {
        if let Some(d) = self.danda {
            policy.danda_policy = d.into();
        }
        if let Some(d) = self.digits {
            policy.digit_policy = d.into();
        }
        policy.unify_terminal_punct |= self.unify_terminal;
        policy.keep_joiners |= self.keep_joiners;
        if self.keep_invisibles {
            policy.strip_invisibles = false;
        }
        if self.keep_whitespace {
            policy.collapse_whitespace = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_library_pipeline() {
        let c = RunConfig::default();
        assert_eq!(c.max_n, 4);
        assert_eq!(c.cap, 5);
        assert!(c.normalization.strip_invisibles);
    }

    #[test]
    fn partial_toml_keeps_defaults() {
        let c: RunConfig = toml::from_str(
            "lang = \"ml\"\ncap = 3\n[normalization]\ndanda_policy = \"map_danda_to_period\"\n",
        )
        .unwrap();
        assert_eq!(c.lang, Some(Lang::Ml));
        assert_eq!(c.cap, 3);
        assert_eq!(c.max_n, 4);
        assert_eq!(c.normalization.danda_policy, DandaPolicy::MapDandaToPeriod);
        assert!(c.normalization.collapse_whitespace);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("max_ngram = 3").is_err());
    }

    #[test]
    fn flags_override_policy() {
        let mut p = NormalizationPolicy::default();
        NormArgs {
            danda: Some(DandaArg::ToPeriod),
            keep_whitespace: true,
            ..Default::default()
        }
        .apply(&mut p);
        assert_eq!(p.danda_policy, DandaPolicy::MapDandaToPeriod);
        assert!(!p.collapse_whitespace);
    }
}
