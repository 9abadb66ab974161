//! Script-aware text normalization.
//!
//! Three views live here:
//!
//! * [`normalize_text`], the ingestion normalizer (NFKC, invisible-character
//!   removal, whitespace collapse, digit and danda policy);
//! * [`alnum_projection`], the letters-and-digits view used to certify that an
//!   edit touched only punctuation or spacing;
//! * [`postprocess_hypothesis`], the surface-only cleanup applied to raw model
//!   output lines.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::tokenizer::{char_class, CharClass, LanguageProfile};

pub const DANDA: char = '\u{0964}';

/// Sentence-terminal marks that collapse as one run.
pub const TERMINAL_MARKS: [char; 4] = ['.', DANDA, '?', '!'];

/// Mid-sentence marks that take exactly one following space.
const MID_MARKS: [char; 3] = [',', ';', ':'];

const INVISIBLES_TABLE: &str = include_str!("../data/invisibles.v1.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DandaPolicy {
    #[default]
    KeepDanda,
    MapDandaToPeriod,
    MapPeriodToDanda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DigitPolicy {
    #[default]
    ToAscii,
    KeepNative,
}

/// Which normalization steps run. All steps are idempotent and so is their
/// composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizationPolicy {
    pub strip_invisibles: bool,
    /// Keep ZWJ/ZWNJ even when `strip_invisibles` is on.
    pub keep_joiners: bool,
    pub collapse_whitespace: bool,
    pub unify_terminal_punct: bool,
    pub danda_policy: DandaPolicy,
    pub digit_policy: DigitPolicy,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        Self {
            strip_invisibles: true,
            keep_joiners: false,
            collapse_whitespace: true,
            unify_terminal_punct: false,
            danda_policy: DandaPolicy::KeepDanda,
            digit_policy: DigitPolicy::ToAscii,
        }
    }
}

impl NormalizationPolicy {
    /// The view the classifier compares: NFKC, ASCII digits, single spaces.
    /// Punctuation is left untouched so punctuation edits stay visible.
    pub fn comparison_view(profile: &LanguageProfile) -> Self {
        Self {
            keep_joiners: profile.keep_joiners,
            ..Self::default()
        }
    }

    /// Short human-readable description recorded in reports.
    pub fn describe(&self) -> String {
        format!(
            "nfkc,invisibles={},joiners={},whitespace={},terminal={},danda={:?},digits={:?}",
            if self.strip_invisibles {
                "strip"
            } else {
                "keep"
            },
            if self.keep_joiners { "keep" } else { "strip" },
            if self.collapse_whitespace {
                "collapse"
            } else {
                "keep"
            },
            if self.unify_terminal_punct {
                "unify"
            } else {
                "keep"
            },
            self.danda_policy,
            self.digit_policy,
        )
    }
}

/// One row of the shipped invisible-character table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvisibleChar {
    pub ch: char,
    pub joiner: bool,
    pub name: &'static str,
}

/// The invisible-character table (see `data/invisibles.v1.tsv`).
pub fn invisible_chars() -> &'static [InvisibleChar] {
    static TABLE: OnceLock<Vec<InvisibleChar>> = OnceLock::new();
    TABLE.get_or_init(|| {
        INVISIBLES_TABLE
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| {
                let mut cols = line.split('\t');
                let cp = cols.next().expect("codepoint column");
                let kind = cols.next().expect("kind column");
                let name = cols.next().expect("name column");
                let value =
                    u32::from_str_radix(cp.trim_start_matches("U+"), 16).expect("hex codepoint");
                InvisibleChar {
                    ch: char::from_u32(value).expect("scalar value"),
                    joiner: kind == "joiner",
                    name,
                }
            })
            .collect()
    })
}

fn is_stripped_invisible(c: char, keep_joiners: bool) -> bool {
    invisible_chars()
        .iter()
        .any(|inv| inv.ch == c && !(keep_joiners && inv.joiner))
}

/// Maps a Devanagari or Malayalam digit to its ASCII counterpart.
pub fn native_digit_to_ascii(c: char) -> Option<char> {
    let cp = c as u32;
    let offset = match cp {
        0x0966..=0x096F => cp - 0x0966,
        0x0D66..=0x0D6F => cp - 0x0D66,
        _ => return None,
    };
    char::from_digit(offset, 10)
}

/// Normalizes already-decoded text according to `policy`.
pub fn normalize_text(s: &str, policy: &NormalizationPolicy) -> String {
    let stripped: String = if policy.strip_invisibles {
        s.chars()
            .filter(|&c| !is_stripped_invisible(c, policy.keep_joiners))
            .collect()
    } else {
        s.to_owned()
    };

    let mut text: String = stripped.nfkc().collect();

    if policy.digit_policy == DigitPolicy::ToAscii {
        text = text
            .chars()
            .map(|c| native_digit_to_ascii(c).unwrap_or(c))
            .collect();
    }

    text = apply_danda_policy(&text, policy.danda_policy);

    if policy.unify_terminal_punct {
        text = collapse_terminal_runs(&text);
    }

    if policy.collapse_whitespace {
        text = collapse_whitespace(&text);
    }
    text
}

/// Decodes `bytes` as UTF-8 and normalizes the result.
pub fn normalize_bytes(bytes: &[u8], policy: &NormalizationPolicy) -> Result<String> {
    let s = std::str::from_utf8(bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    Ok(normalize_text(s, policy))
}

/// Runs of whitespace become one ASCII space; ends are trimmed.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

fn apply_danda_policy(s: &str, policy: DandaPolicy) -> String {
    match policy {
        DandaPolicy::KeepDanda => s.to_owned(),
        DandaPolicy::MapDandaToPeriod => s.replace(DANDA, "."),
        DandaPolicy::MapPeriodToDanda => {
            let chars: Vec<char> = s.chars().collect();
            chars
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    // decimal points stay
                    let between_digits = i > 0
                        && chars[i - 1].is_ascii_digit()
                        && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
                    if c == '.' && !between_digits {
                        DANDA
                    } else {
                        c
                    }
                })
                .collect()
        }
    }
}

fn is_terminal(c: char) -> bool {
    TERMINAL_MARKS.contains(&c)
}

/// Collapses every run of terminal marks (whitespace between the marks is part
/// of the run) to the run's final mark.
fn collapse_terminal_runs(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !is_terminal(c) {
            out.push(c);
            i += 1;
            continue;
        }
        let mut last = c;
        let mut j = i + 1;
        loop {
            let mut k = j;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            if k < chars.len() && is_terminal(chars[k]) {
                last = chars[k];
                j = k + 1;
            } else {
                break;
            }
        }
        out.push(last);
        i = j;
    }
    out
}

/// True for characters that survive the alphanumeric projection.
pub fn is_alnum_char(c: char, profile: &LanguageProfile) -> bool {
    if profile.in_script(c) {
        return !matches!(
            char_class(c),
            CharClass::Punct | CharClass::Space | CharClass::Joiner
        );
    }
    matches!(char_class(c), CharClass::Word(_) | CharClass::Digit)
}

/// Letters and digits of `s`, in order. Punctuation, symbols, whitespace and
/// invisible characters are dropped.
pub fn alnum_projection(s: &str, profile: &LanguageProfile) -> String {
    collapse_whitespace(s)
        .chars()
        .filter(|&c| is_alnum_char(c, profile))
        .collect()
}

/// Removes every leading occurrence of `prefix` (after leading whitespace).
pub fn strip_prompt_echo<'a>(s: &'a str, prefix: Option<&str>) -> &'a str {
    let Some(prefix) = prefix.map(str::trim).filter(|p| !p.is_empty()) else {
        return s;
    };
    let mut rest = s;
    while let Some(tail) = rest.trim_start().strip_prefix(prefix) {
        rest = tail;
    }
    rest
}

/// Sentence-final mark convention for surface cleanup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalConvention {
    Danda,
    Period,
    /// Danda when the line is mostly Devanagari, period otherwise.
    Infer,
}

impl TerminalConvention {
    fn resolve(self, s: &str) -> char {
        match self {
            TerminalConvention::Danda => DANDA,
            TerminalConvention::Period => '.',
            TerminalConvention::Infer => {
                let deva = s
                    .chars()
                    .filter(|c| ('\u{0900}'..='\u{097F}').contains(c))
                    .count();
                let letters = s.chars().filter(|c| c.is_alphabetic()).count();
                if deva * 2 > letters {
                    DANDA
                } else {
                    '.'
                }
            }
        }
    }
}

/// Surface-only cleanup of a raw model output line, with the terminal mark
/// inferred from the line's script.
pub fn postprocess_hypothesis(s: &str, prompt_prefix: Option<&str>) -> String {
    postprocess_with(s, prompt_prefix, TerminalConvention::Infer)
}

/// Surface-only cleanup of a raw model output line.
///
/// Never changes letters or digits: the alphanumeric projection of the result
/// equals that of the echo-stripped input.
pub fn postprocess_with(
    s: &str,
    prompt_prefix: Option<&str>,
    convention: TerminalConvention,
) -> String {
    let body = collapse_whitespace(strip_prompt_echo(s, prompt_prefix));
    let chars: Vec<char> = collapse_terminal_runs(&body).chars().collect();

    let mut out: Vec<char> = Vec::with_capacity(chars.len() + 2);
    for (i, &c) in chars.iter().enumerate() {
        if c == ' ' {
            // no space before punctuation that attaches to the left
            if chars
                .get(i + 1)
                .is_some_and(|&n| is_terminal(n) || MID_MARKS.contains(&n))
            {
                continue;
            }
            if out.last() == Some(&' ') {
                continue;
            }
            out.push(c);
            continue;
        }
        out.push(c);
        let spaced_mark = MID_MARKS.contains(&c) || matches!(c, DANDA | '?' | '!');
        if spaced_mark {
            if let Some(&next) = chars.get(i + 1) {
                let prev_digit = i > 0 && chars[i - 1].is_ascii_digit();
                let joins_digits = prev_digit && next.is_ascii_digit();
                if next != ' ' && next.is_alphanumeric() && !joins_digits {
                    out.push(' ');
                }
            }
        }
    }

    // exactly one sentence-final mark
    while out
        .last()
        .is_some_and(|&c| MID_MARKS.contains(&c) || c == ' ')
    {
        out.pop();
    }
    if out.is_empty() {
        return String::new();
    }
    if !out.last().is_some_and(|&c| is_terminal(c)) {
        let body: String = out.iter().collect();
        out.push(convention.resolve(&body));
    }
    out.into_iter().collect()
}
