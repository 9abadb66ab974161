//! Language profiles and token views.
//!
//! Text is split into script words, digit runs and punctuation/symbol runs.
//! Word runs also break where the script changes, so a Latin word glued to a
//! Devanagari one yields two tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::textnorm::is_alnum_char;

const HI_LEXICON: &str = include_str!("../data/lexicon/hi.txt");
const ML_LEXICON: &str = include_str!("../data/lexicon/ml.txt");

const DEVANAGARI: RangeInclusive<u32> = 0x0900..=0x097F;
const MALAYALAM: RangeInclusive<u32> = 0x0D00..=0x0D7F;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    Hi,
    Ml,
}

impl Lang {
    pub fn code(self) -> &'static str {
        match self {
            Lang::Hi => "hi",
            Lang::Ml => "ml",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Lang::Hi => "Hindi",
            Lang::Ml => "Malayalam",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Lang {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hi" | "hindi" => Ok(Lang::Hi),
            "ml" | "malayalam" => Ok(Lang::Ml),
            other => Err(Error::invalid_input(format!(
                "unknown language {other:?} (expected hi or ml)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Script {
    Devanagari,
    Malayalam,
    Latin,
    Other,
    /// Digits only; compatible with itself.
    Common,
}

/// Per-character class used by the tokenizer and the projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Word(Script),
    Digit,
    /// ZWJ / ZWNJ: part of whatever word they sit in.
    Joiner,
    Space,
    Punct,
}

pub fn is_native_or_ascii_digit(c: char) -> bool {
    c.is_ascii_digit() || matches!(c as u32, 0x0966..=0x096F | 0x0D66..=0x0D6F)
}

pub fn char_class(c: char) -> CharClass {
    let cp = c as u32;
    if c.is_whitespace() {
        return CharClass::Space;
    }
    if is_native_or_ascii_digit(c) {
        return CharClass::Digit;
    }
    match cp {
        0x200C | 0x200D => CharClass::Joiner,
        // danda, double danda, abbreviation sign
        0x0964 | 0x0965 | 0x0970 => CharClass::Punct,
        _ if DEVANAGARI.contains(&cp) || (0xA8E0..=0xA8FF).contains(&cp) => {
            CharClass::Word(Script::Devanagari)
        }
        // sign para, date mark
        0x0D4F | 0x0D79 => CharClass::Punct,
        _ if MALAYALAM.contains(&cp) => CharClass::Word(Script::Malayalam),
        0x0300..=0x036F => CharClass::Word(Script::Latin),
        _ if c.is_alphanumeric() => {
            let latin = cp < 0x0250
                || (0x1E00..=0x1EFF).contains(&cp)
                || (0x2C60..=0x2C7F).contains(&cp)
                || (0xA720..=0xA7FF).contains(&cp);
            CharClass::Word(if latin { Script::Latin } else { Script::Other })
        }
        _ => CharClass::Punct,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    ScriptWord,
    DigitRun,
    PunctSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    /// Character offsets `[start, end)` into the tokenized string.
    pub span: (usize, usize),
}

impl Token {
    /// The script of the token's letters; `None` when letters from more than
    /// one script are mixed. Letterless tokens are [`Script::Common`].
    pub fn script(&self) -> Option<Script> {
        let mut found: Option<Script> = None;
        for c in self.text.chars() {
            if let CharClass::Word(script) = char_class(c) {
                match found {
                    None => found = Some(script),
                    Some(s) if s == script => {}
                    Some(_) => return None,
                }
            }
        }
        Some(found.unwrap_or(Script::Common))
    }
}

/// Lexical resources and script metadata for one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    pub name: Lang,
    pub script_ranges: Vec<RangeInclusive<u32>>,
    pub digit_range: RangeInclusive<u32>,
    pub auxiliaries: BTreeSet<String>,
    pub postpositions: BTreeSet<String>,
    /// Deduplicated, longest first.
    pub suffixes: Vec<String>,
    pub syntax_label: String,
    /// Keep ZWJ/ZWNJ in the comparison view.
    pub keep_joiners: bool,
}

/// The three sections of a lexicon file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub auxiliaries: BTreeSet<String>,
    pub postpositions: BTreeSet<String>,
    pub suffixes: Vec<String>,
}

impl Lexicon {
    /// Parses the `[auxiliaries] [postpositions] [suffixes]` section format.
    /// Entries are NFKC-normalized; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Clone, Copy)]
        enum Section {
            Aux,
            Post,
            Suffix,
        }
        let mut lex = Lexicon::default();
        let mut section = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim().trim_start_matches('\u{FEFF}');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "auxiliaries" => Section::Aux,
                    "postpositions" => Section::Post,
                    "suffixes" => Section::Suffix,
                    other => {
                        return Err(Error::Lexicon {
                            line: idx + 1,
                            message: format!("unknown section [{other}]"),
                        })
                    }
                });
                continue;
            }
            if line.split_whitespace().nth(1).is_some() {
                return Err(Error::Lexicon {
                    line: idx + 1,
                    message: format!("entry {line:?} contains whitespace"),
                });
            }
            let entry: String = line.nfkc().collect();
            match section {
                Some(Section::Aux) => {
                    lex.auxiliaries.insert(entry);
                }
                Some(Section::Post) => {
                    lex.postpositions.insert(entry);
                }
                Some(Section::Suffix) => lex.suffixes.push(entry),
                None => {
                    return Err(Error::Lexicon {
                        line: idx + 1,
                        message: "entry before any section header".into(),
                    })
                }
            }
        }
        lex.suffixes = sort_suffixes(lex.suffixes);
        Ok(lex)
    }
}

/// Dedups and orders suffixes longest first (ties in codepoint order).
fn sort_suffixes(mut suffixes: Vec<String>) -> Vec<String> {
    suffixes.sort_by(|a, b| {
        b.chars()
            .count()
            .cmp(&a.chars().count())
            .then_with(|| a.cmp(b))
    });
    suffixes.dedup();
    suffixes
}

impl LanguageProfile {
    pub fn hindi() -> Self {
        Self::with_lexicon(
            Lang::Hi,
            Lexicon::parse(HI_LEXICON).expect("bundled hi lexicon"),
        )
    }

    pub fn malayalam() -> Self {
        Self::with_lexicon(
            Lang::Ml,
            Lexicon::parse(ML_LEXICON).expect("bundled ml lexicon"),
        )
    }

    pub fn for_lang(lang: Lang) -> Self {
        match lang {
            Lang::Hi => Self::hindi(),
            Lang::Ml => Self::malayalam(),
        }
    }

    /// Builds a profile from a user lexicon. Malayalam postpositions are
    /// always dropped.
    pub fn with_lexicon(lang: Lang, lexicon: Lexicon) -> Self {
        let (script, digits, label) = match lang {
            Lang::Hi => (DEVANAGARI, 0x0966..=0x096F, "Syntax/Case/Agreement"),
            Lang::Ml => (MALAYALAM, 0x0D66..=0x0D6F, "Syntax/Agreement"),
        };
        let postpositions = match lang {
            Lang::Hi => lexicon.postpositions,
            Lang::Ml => BTreeSet::new(),
        };
        Self {
            name: lang,
            script_ranges: vec![script],
            digit_range: digits,
            auxiliaries: lexicon.auxiliaries,
            postpositions,
            suffixes: sort_suffixes(lexicon.suffixes),
            syntax_label: label.to_owned(),
            keep_joiners: false,
        }
    }

    pub fn in_script(&self, c: char) -> bool {
        let cp = c as u32;
        self.script_ranges.iter().any(|r| r.contains(&cp))
    }

    /// Auxiliary, copula, negation or (Hindi) postposition.
    pub fn is_syntax_marker(&self, word: &str) -> bool {
        self.auxiliaries.contains(word) || self.postpositions.contains(word)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Group {
    Word(Script),
    Digit,
    Punct,
}

/// Splits `s` into maximal runs of script words, digits, and punctuation.
/// Whitespace separates tokens and is never part of one.
pub fn tokenize(s: &str, _profile: &LanguageProfile) -> Vec<Token> {
    let chars: Vec<char> = s.chars().collect();
    let classes: Vec<CharClass> = chars.iter().map(|&c| char_class(c)).collect();

    let word_script_near = |i: usize| -> Option<Script> {
        let before = classes[..i].iter().rev().find(|c| **c != CharClass::Joiner);
        let after = classes[i + 1..].iter().find(|c| **c != CharClass::Joiner);
        [before, after].into_iter().flatten().find_map(|c| match c {
            CharClass::Word(s) => Some(*s),
            _ => None,
        })
    };

    let groups: Vec<Option<Group>> = classes
        .iter()
        .enumerate()
        .map(|(i, class)| match class {
            CharClass::Space => None,
            CharClass::Digit => Some(Group::Digit),
            CharClass::Punct => Some(Group::Punct),
            CharClass::Word(s) => Some(Group::Word(*s)),
            CharClass::Joiner => Some(word_script_near(i).map_or(Group::Punct, Group::Word)),
        })
        .collect();

    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let Some(group) = groups[i] else {
            i += 1;
            continue;
        };
        let start = i;
        while i < chars.len() && groups[i] == Some(group) {
            i += 1;
        }
        let kind = match group {
            Group::Word(_) => TokenKind::ScriptWord,
            Group::Digit => TokenKind::DigitRun,
            Group::Punct => TokenKind::PunctSymbol,
        };
        tokens.push(Token {
            text: chars[start..i].iter().collect(),
            kind,
            span: (start, i),
        });
    }
    tokens
}

/// True iff the token has no letter or digit: nothing that would survive the
/// alphanumeric projection.
pub fn is_punct(token: &Token, profile: &LanguageProfile) -> bool {
    token.text.chars().all(|c| !is_alnum_char(c, profile))
}

/// True iff both tokens' letters come from one and the same script.
pub fn same_script(a: &Token, b: &Token) -> bool {
    match (a.script(), b.script()) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}
