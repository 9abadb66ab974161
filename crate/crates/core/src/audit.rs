//! Auditing of model edits: functional strata, guardrail flags, and
//! reconciliation of two candidate predictions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alignment::{align_tokens, levenshtein_seq, OpTag};
use crate::classifier::{classify_pair, ErrorCategory};
use crate::error::{Error, Result};
use crate::textnorm::{normalize_text, NormalizationPolicy};
use crate::tokenizer::{is_punct, tokenize, LanguageProfile, Token};

pub const AUDIT_SCHEMA_VERSION: u32 = 1;

/// Default token edit-distance cap.
pub const DEFAULT_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    /// Surface-only (punctuation, spacing).
    Redundant,
    /// Substantive but local.
    Rectifying,
    /// Reordering or beyond the distance cap.
    Risky,
    /// No edit.
    None,
}

impl Stratum {
    /// Matrix order used by [`DualReport::strata_cross`].
    pub const ALL: [Stratum; 4] = [
        Stratum::Redundant,
        Stratum::Rectifying,
        Stratum::Risky,
        Stratum::None,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Preference when choosing between candidates; higher wins.
    fn preference(self) -> u8 {
        match self {
            Stratum::Rectifying => 3,
            Stratum::Redundant => 2,
            Stratum::Risky => 1,
            Stratum::None => 0,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stratum::Redundant => "redundant",
            Stratum::Rectifying => "rectifying",
            Stratum::Risky => "risky",
            Stratum::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditAudit {
    pub category: ErrorCategory,
    pub stratum: Stratum,
    /// Token-level Levenshtein distance between input and prediction.
    pub edit_distance: usize,
    pub multiset_preserving_reorder: bool,
    pub distance_cap_exceeded: bool,
    /// Output spans that re-insert tokens removed elsewhere.
    pub reordered_spans: usize,
}

fn view_tokens(s: &str, profile: &LanguageProfile) -> Vec<Token> {
    let view = NormalizationPolicy::comparison_view(profile);
    tokenize(&normalize_text(s, &view), profile)
}

fn count_reordered_spans(a: &[Token], b: &[Token], profile: &LanguageProfile) -> usize {
    let script = align_tokens(a, b);
    let mut removed: BTreeMap<&str, usize> = BTreeMap::new();
    for op in script.edits().filter(|op| op.tag != OpTag::Insert) {
        for t in &a[op.a_span.0..op.a_span.1] {
            if !is_punct(t, profile) {
                *removed.entry(t.text.as_str()).or_insert(0) += 1;
            }
        }
    }
    script
        .edits()
        .filter(|op| op.tag != OpTag::Delete)
        .filter(|op| {
            b[op.b_span.0..op.b_span.1]
                .iter()
                .any(|t| !is_punct(t, profile) && removed.contains_key(t.text.as_str()))
        })
        .count()
}

/// Classifies the edit from `input` to `prediction` and assigns a stratum.
pub fn audit_pair(
    input: &str,
    prediction: &str,
    profile: &LanguageProfile,
    cap: usize,
) -> EditAudit {
    let category = classify_pair(input, prediction, profile).category;
    let a = view_tokens(input, profile);
    let b = view_tokens(prediction, profile);
    let texts = |ts: &[Token]| ts.iter().map(|t| t.text.clone()).collect::<Vec<_>>();
    let edit_distance = levenshtein_seq(&texts(&a), &texts(&b));
    let distance_cap_exceeded = edit_distance > cap;
    let multiset_preserving_reorder = category == ErrorCategory::WordOrder;

    let stratum = match category {
        ErrorCategory::NullEmpty | ErrorCategory::NoError => Stratum::None,
        ErrorCategory::PunctWhitespace => Stratum::Redundant,
        ErrorCategory::WordOrder => Stratum::Risky,
        _ if distance_cap_exceeded => Stratum::Risky,
        _ => Stratum::Rectifying,
    };

    EditAudit {
        category,
        stratum,
        edit_distance,
        multiset_preserving_reorder,
        distance_cap_exceeded,
        reordered_spans: count_reordered_spans(&a, &b, profile),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAudit {
    pub row: usize,
    #[serde(flatten)]
    pub audit: EditAudit,
}

/// Audits of a whole prediction file plus per-stratum and per-category
/// totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub lang: crate::tokenizer::Lang,
    pub cap: usize,
    pub total: usize,
    pub strata: BTreeMap<Stratum, u64>,
    pub categories: BTreeMap<ErrorCategory, u64>,
    pub pairs: Vec<PairAudit>,
}

/// Audits every (input, prediction) pair.
pub fn audit_corpus<S: AsRef<str>>(
    pairs: &[(S, S)],
    profile: &LanguageProfile,
    cap: usize,
) -> AuditReport {
    let mut strata: BTreeMap<Stratum, u64> = Stratum::ALL.iter().map(|&s| (s, 0)).collect();
    let mut categories: BTreeMap<ErrorCategory, u64> =
        ErrorCategory::ALL.iter().map(|&c| (c, 0)).collect();
    let audits: Vec<PairAudit> = pairs
        .iter()
        .enumerate()
        .map(|(row, (input, pred))| {
            let audit = audit_pair(input.as_ref(), pred.as_ref(), profile, cap);
            *strata.entry(audit.stratum).or_insert(0) += 1;
            *categories.entry(audit.category).or_insert(0) += 1;
            PairAudit { row, audit }
        })
        .collect();
    AuditReport {
        schema_version: AUDIT_SCHEMA_VERSION,
        lang: profile.name,
        cap,
        total: audits.len(),
        strata,
        categories,
        pairs: audits,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    A,
    B,
}

/// Why [`reconcile`] picked its candidate; variants are the tie-break steps
/// in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Identical,
    Stratum,
    EditDistance,
    Reordering,
    Positional,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::Identical => "identical",
            Reason::Stratum => "stratum",
            Reason::EditDistance => "edit_distance",
            Reason::Reordering => "reordering",
            Reason::Positional => "positional",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconciliation {
    pub choice: Choice,
    pub chosen: String,
    pub reason: Reason,
}

/// Picks one of two candidate corrections: rectifying over redundant over
/// risky over no edit, then lower edit distance, then fewer reordered spans,
/// then `cand_a`.
pub fn reconcile(
    input: &str,
    cand_a: &str,
    cand_b: &str,
    profile: &LanguageProfile,
    cap: usize,
) -> Reconciliation {
    let pick = |choice: Choice, reason: Reason| Reconciliation {
        choice,
        chosen: match choice {
            Choice::A => cand_a.to_owned(),
            Choice::B => cand_b.to_owned(),
        },
        reason,
    };
    if cand_a == cand_b {
        return pick(Choice::A, Reason::Identical);
    }
    let a = audit_pair(input, cand_a, profile, cap);
    let b = audit_pair(input, cand_b, profile, cap);
    decide(&a, &b).map_or(pick(Choice::A, Reason::Positional), |(c, r)| pick(c, r))
}

fn decide(a: &EditAudit, b: &EditAudit) -> Option<(Choice, Reason)> {
    let steps: [(Reason, std::cmp::Ordering); 3] = [
        (
            Reason::Stratum,
            a.stratum.preference().cmp(&b.stratum.preference()),
        ),
        (Reason::EditDistance, b.edit_distance.cmp(&a.edit_distance)),
        (
            Reason::Reordering,
            b.reordered_spans.cmp(&a.reordered_spans),
        ),
    ];
    steps.into_iter().find_map(|(reason, ord)| match ord {
        std::cmp::Ordering::Greater => Some((Choice::A, reason)),
        std::cmp::Ordering::Less => Some((Choice::B, reason)),
        std::cmp::Ordering::Equal => None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub index: usize,
    pub choice: Choice,
    pub reason: Reason,
}

/// Comparison of two prediction sets over the same inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualReport {
    pub schema_version: u32,
    pub pairs: usize,
    /// `agreement[i][j]`: candidate A in category `i`, B in category `j`
    /// (indices follow [`ErrorCategory::ALL`]).
    pub agreement: [[u64; 9]; 9],
    /// Rows and columns follow [`Stratum::ALL`].
    pub strata_cross: [[u64; 4]; 4],
    /// Either candidate edits the input.
    pub union_count: u64,
    /// Both edit and land in the same category.
    pub intersection_count: u64,
    /// Both edit and land in different categories.
    pub conflict_count: u64,
    pub resolutions: Vec<Resolution>,
}

/// One row of a dual comparison: the input and two candidate predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub input: String,
    pub cand_a: String,
    pub cand_b: String,
}

pub fn dual_report(
    triples: &[Triple],
    profile: &LanguageProfile,
    cap: usize,
) -> Result<DualReport> {
    if triples.is_empty() {
        return Err(Error::invalid_input("no triples to compare"));
    }
    let mut report = DualReport {
        schema_version: AUDIT_SCHEMA_VERSION,
        pairs: triples.len(),
        agreement: [[0; 9]; 9],
        strata_cross: [[0; 4]; 4],
        union_count: 0,
        intersection_count: 0,
        conflict_count: 0,
        resolutions: Vec::with_capacity(triples.len()),
    };
    for (index, t) in triples.iter().enumerate() {
        let a = audit_pair(&t.input, &t.cand_a, profile, cap);
        let b = audit_pair(&t.input, &t.cand_b, profile, cap);
        report.agreement[a.category.index()][b.category.index()] += 1;
        report.strata_cross[a.stratum.index()][b.stratum.index()] += 1;

        let (edit_a, edit_b) = (a.category.is_edit(), b.category.is_edit());
        if edit_a || edit_b {
            report.union_count += 1;
        }
        if edit_a && edit_b {
            if a.category == b.category {
                report.intersection_count += 1;
            } else {
                report.conflict_count += 1;
            }
        }

        let r = reconcile(&t.input, &t.cand_a, &t.cand_b, profile, cap);
        report.resolutions.push(Resolution {
            index,
            choice: r.choice,
            reason: r.reason,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi() -> LanguageProfile {
        LanguageProfile::hindi()
    }

    #[test]
    fn punctuation_fix_is_redundant() {
        let a = audit_pair("राम घर गया", "राम घर गया।", &hi(), DEFAULT_CAP);
        assert_eq!(a.category, ErrorCategory::PunctWhitespace);
        assert_eq!(a.stratum, Stratum::Redundant);
    }

    #[test]
    fn identical_prediction_has_no_stratum() {
        let a = audit_pair("राम घर गया।", "राम घर गया।", &hi(), DEFAULT_CAP);
        assert_eq!(a.stratum, Stratum::None);
        assert_eq!(a.edit_distance, 0);
    }

    #[test]
    fn permutation_is_risky() {
        let a = audit_pair(
            "एक दो तीन चार पांच छह",
            "छह पांच चार तीन दो एक",
            &hi(),
            DEFAULT_CAP,
        );
        assert_eq!(a.category, ErrorCategory::WordOrder);
        assert_eq!(a.stratum, Stratum::Risky);
        assert!(a.multiset_preserving_reorder);
    }

    #[test]
    fn cap_turns_large_rewrites_risky() {
        let input = "क ख ग घ ङ च छ ज";
        let pred = "क ख ग घ ङ च छ ज झ ञ ट";
        let small = audit_pair(input, pred, &hi(), 2);
        assert_eq!(small.category, ErrorCategory::MissingExtraWord);
        assert_eq!(small.stratum, Stratum::Risky);
        assert!(small.distance_cap_exceeded);
        let large = audit_pair(input, pred, &hi(), 3);
        assert_eq!(large.stratum, Stratum::Rectifying);
    }

    #[test]
    fn reconcile_prefers_rectifying() {
        let input = "वह घर गया";
        let rect = "वह घर गया है";
        let redundant = "वह घर गया।";
        let r = reconcile(input, rect, redundant, &hi(), DEFAULT_CAP);
        assert_eq!((r.choice, r.reason), (Choice::A, Reason::Stratum));
        let r = reconcile(input, redundant, rect, &hi(), DEFAULT_CAP);
        assert_eq!((r.choice, r.reason), (Choice::B, Reason::Stratum));
        assert_eq!(r.chosen, rect);
    }

    #[test]
    fn reconcile_identical() {
        let r = reconcile("क", "ख", "ख", &hi(), DEFAULT_CAP);
        assert_eq!((r.choice, r.reason), (Choice::A, Reason::Identical));
    }

    #[test]
    fn empty_dual_is_an_error() {
        assert!(dual_report(&[], &hi(), DEFAULT_CAP).is_err());
    }
}
