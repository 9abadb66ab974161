//! Deterministic single-label error-type classifier for (input, output)
//! sentence pairs.
//!
//! Checks run in a fixed order and the first one that fires decides the label:
//!
//! 1. null/empty side
//! 2. bit-identical strings
//! 3. equal alphanumeric projections (punctuation/whitespace edit)
//! 4. equal non-punctuation token multisets in a different order
//! 5. alignment typing: insert/delete beats replace; within either, a syntax
//!    marker beats morphology, which beats spelling, which beats grammar
//! 6. fallback to grammar

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alignment::{
    align_tokens, levenshtein, suffix_tail_change, touches_syntax, OpTag, Opcode,
};
use crate::error::Error;
use crate::textnorm::{alnum_projection, normalize_text, NormalizationPolicy};
use crate::tokenizer::{is_punct, same_script, tokenize, LanguageProfile, Token};

/// Maximum character edit distance for a replaced token pair to count as a
/// spelling slip.
pub const SPELL_THR: usize = 2;

/// Sentinel strings treated as missing values (compared lowercase, trimmed).
pub const NULL_SENTINELS: [&str; 3] = ["nan", "null", "none"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Constants {
    pub spell_thr: usize,
}

pub fn constants() -> Constants {
    Constants {
        spell_thr: SPELL_THR,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    NullEmpty,
    NoError,
    PunctWhitespace,
    WordOrder,
    MissingExtraWord,
    SyntaxAgreement,
    Morphology,
    Spelling,
    GrammarSyntax,
}

impl ErrorCategory {
    /// All nine categories in precedence order.
    pub const ALL: [ErrorCategory; 9] = [
        ErrorCategory::NullEmpty,
        ErrorCategory::NoError,
        ErrorCategory::PunctWhitespace,
        ErrorCategory::WordOrder,
        ErrorCategory::MissingExtraWord,
        ErrorCategory::SyntaxAgreement,
        ErrorCategory::Morphology,
        ErrorCategory::Spelling,
        ErrorCategory::GrammarSyntax,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Stable snake_case identifier used in files.
    pub fn id(self) -> &'static str {
        match self {
            ErrorCategory::NullEmpty => "null_empty",
            ErrorCategory::NoError => "no_error",
            ErrorCategory::PunctWhitespace => "punct_whitespace",
            ErrorCategory::WordOrder => "word_order",
            ErrorCategory::MissingExtraWord => "missing_extra_word",
            ErrorCategory::SyntaxAgreement => "syntax_agreement",
            ErrorCategory::Morphology => "morphology",
            ErrorCategory::Spelling => "spelling",
            ErrorCategory::GrammarSyntax => "grammar_syntax",
        }
    }

    /// Human-readable label; the syntax label depends on the language.
    pub fn label(self, profile: &LanguageProfile) -> String {
        match self {
            ErrorCategory::NullEmpty => "Null/Empty Pair".into(),
            ErrorCategory::NoError => "No Error".into(),
            ErrorCategory::PunctWhitespace => "Punctuation/Whitespace".into(),
            ErrorCategory::WordOrder => "Word Order".into(),
            ErrorCategory::MissingExtraWord => "Missing/Extra Word".into(),
            ErrorCategory::SyntaxAgreement => profile.syntax_label.clone(),
            ErrorCategory::Morphology => "Morphology (Inflection/Affix)".into(),
            ErrorCategory::Spelling => "Spelling/Orthography".into(),
            ErrorCategory::GrammarSyntax => "Grammar/Syntax".into(),
        }
    }

    /// Short column header used in distribution tables.
    pub fn short_name(self) -> &'static str {
        match self {
            ErrorCategory::NullEmpty => "Null",
            ErrorCategory::NoError => "NoErr",
            ErrorCategory::PunctWhitespace => "Punct/WS",
            ErrorCategory::WordOrder => "Order",
            ErrorCategory::MissingExtraWord => "Miss/Extra",
            ErrorCategory::SyntaxAgreement => "Syn/Agree",
            ErrorCategory::Morphology => "Morph",
            ErrorCategory::Spelling => "Spell",
            ErrorCategory::GrammarSyntax => "Grammar",
        }
    }

    /// True for categories that describe an actual edit.
    pub fn is_edit(self) -> bool {
        !matches!(self, ErrorCategory::NullEmpty | ErrorCategory::NoError)
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ErrorCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorCategory::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::invalid_input(format!("unknown category {s:?}")))
    }
}

/// Which precedence check produced the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    NullEmpty,
    Identical,
    Projection,
    WordOrder,
    Alignment,
    Fallback,
}

impl Stage {
    pub fn number(self) -> u8 {
        match self {
            Stage::NullEmpty => 1,
            Stage::Identical => 2,
            Stage::Projection => 3,
            Stage::WordOrder => 4,
            Stage::Alignment => 5,
            Stage::Fallback => 6,
        }
    }
}

/// Trace of how a label was reached. Never influences the label itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub ops: Vec<Opcode>,
    /// Syntax markers found in edited segments.
    pub syntax_hits: Vec<String>,
    /// Replaced token pairs that passed the suffix-tail test.
    pub morphology_pairs: Vec<(String, String)>,
    /// Replaced token pairs within the spelling threshold.
    pub spelling_pairs: Vec<(String, String)>,
    pub saw_insert_delete: bool,
    pub saw_replace: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub category: ErrorCategory,
    pub stage: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl Classification {
    fn early(category: ErrorCategory, stage: Stage) -> Self {
        Self {
            category,
            stage,
            evidence: None,
        }
    }
}

/// Blank, or one of the sentinel strings in any case.
pub fn nullish(s: &str) -> bool {
    let t = s.trim();
    t.is_empty() || NULL_SENTINELS.iter().any(|n| t.eq_ignore_ascii_case(n))
}

fn nonpunct_multiset<'a>(
    tokens: &'a [Token],
    profile: &LanguageProfile,
) -> BTreeMap<&'a str, usize> {
    let mut counts = BTreeMap::new();
    for t in tokens.iter().filter(|t| !is_punct(t, profile)) {
        *counts.entry(t.text.as_str()).or_insert(0) += 1;
    }
    counts
}

fn same_text(a: &[Token], b: &[Token]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.text == y.text)
}

/// Assigns exactly one category to an (input, output) pair.
pub fn classify_pair(inp: &str, out: &str, profile: &LanguageProfile) -> Classification {
    if nullish(inp) || nullish(out) {
        return Classification::early(ErrorCategory::NullEmpty, Stage::NullEmpty);
    }
    if inp == out {
        return Classification::early(ErrorCategory::NoError, Stage::Identical);
    }

    let view = NormalizationPolicy::comparison_view(profile);
    let inp = normalize_text(inp, &view);
    let out = normalize_text(out, &view);

    if alnum_projection(&inp, profile) == alnum_projection(&out, profile) {
        return Classification::early(ErrorCategory::PunctWhitespace, Stage::Projection);
    }

    let a = tokenize(&inp, profile);
    let b = tokenize(&out, profile);
    if nonpunct_multiset(&a, profile) == nonpunct_multiset(&b, profile) && !same_text(&a, &b) {
        return Classification::early(ErrorCategory::WordOrder, Stage::WordOrder);
    }

    let script = align_tokens(&a, &b);
    let mut ev = Evidence::default();
    let mut touched_syntax = false;

    for op in script.edits() {
        let seg_a = &a[op.a_span.0..op.a_span.1];
        let seg_b = &b[op.b_span.0..op.b_span.1];
        let syntax = touches_syntax(seg_a, profile) || touches_syntax(seg_b, profile);
        if syntax {
            ev.syntax_hits.extend(
                seg_a
                    .iter()
                    .chain(seg_b)
                    .filter(|t| profile.is_syntax_marker(&t.text))
                    .map(|t| t.text.clone()),
            );
        }
        match op.tag {
            OpTag::Equal => unreachable!("edits() skips equal spans"),
            OpTag::Insert | OpTag::Delete => {
                touched_syntax |= syntax;
                ev.saw_insert_delete = true;
            }
            OpTag::Replace => {
                ev.saw_replace = true;
                if syntax {
                    touched_syntax = true;
                    continue;
                }
                // pairwise; overhang of the longer side is ignored
                for (ta, tb) in seg_a.iter().zip(seg_b) {
                    if !same_script(ta, tb) {
                        continue;
                    }
                    let pair = (ta.text.clone(), tb.text.clone());
                    if suffix_tail_change(&ta.text, &tb.text, &profile.suffixes) {
                        ev.morphology_pairs.push(pair);
                    } else if levenshtein(&ta.text, &tb.text) <= SPELL_THR {
                        ev.spelling_pairs.push(pair);
                    }
                }
            }
        }
    }
    if !touched_syntax {
        ev.syntax_hits.clear();
    }
    ev.ops = script.ops;

    let (category, stage) = if ev.saw_insert_delete {
        if touched_syntax {
            (ErrorCategory::SyntaxAgreement, Stage::Alignment)
        } else {
            (ErrorCategory::MissingExtraWord, Stage::Alignment)
        }
    } else if ev.saw_replace {
        let category = if touched_syntax {
            ErrorCategory::SyntaxAgreement
        } else if !ev.morphology_pairs.is_empty() {
            ErrorCategory::Morphology
        } else if !ev.spelling_pairs.is_empty() {
            ErrorCategory::Spelling
        } else {
            ErrorCategory::GrammarSyntax
        };
        (category, Stage::Alignment)
    } else {
        (ErrorCategory::GrammarSyntax, Stage::Fallback)
    };

    Classification {
        category,
        stage,
        evidence: Some(ev),
    }
}
