//! CSV ingestion, error-type distributions, and prompt synthesis from those
//! distributions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{classify_pair, nullish, ErrorCategory};
use crate::error::{Error, Result};
use crate::textnorm::{normalize_text, NormalizationPolicy, DANDA};
use crate::tokenizer::{Lang, LanguageProfile};

pub const INPUT_HEADER: &str = "Input sentence";
pub const OUTPUT_HEADER: &str = "Output sentence";
pub const DIST_SCHEMA_VERSION: u32 = 1;
pub const PROMPT_TEMPLATE_VERSION: u32 = 1;

const PROMPT_TEMPLATE: &str = include_str!("../data/prompt_template.v1.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" | "valid" | "validation" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid_input(format!("unknown split {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub input: String,
    pub output: String,
    /// 0-based CSV data-row index.
    pub row: usize,
    pub split: Split,
    pub lang: Lang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadOptions {
    pub policy: NormalizationPolicy,
    /// Drop pairs where either side is null-like.
    pub drop_nulls: bool,
    /// Drop exact repeats of an (input, output) pair, keeping the first.
    pub dedup: bool,
}

impl LoadOptions {
    /// Ingestion settings for training data: nulls and duplicates removed.
    pub fn training(policy: NormalizationPolicy) -> Self {
        Self {
            policy,
            drop_nulls: true,
            dedup: true,
        }
    }
}

fn header_matches(found: &str, expected: &str) -> bool {
    found
        .trim()
        .trim_start_matches('\u{FEFF}')
        .eq_ignore_ascii_case(expected)
}

/// Reads pairs from a two-column CSV file whose header names
/// `Input sentence` and `Output sentence`, in that order.
pub fn load_pairs(
    path: &Path,
    lang: Lang,
    split: Split,
    options: &LoadOptions,
) -> Result<Vec<SentencePair>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_pairs(file, path, lang, split, options)
}

/// [`load_pairs`] over any reader; `path` is only used in error messages.
pub fn read_pairs<R: std::io::Read>(
    reader: R,
    path: &Path,
    lang: Lang,
    split: Split,
    options: &LoadOptions,
) -> Result<Vec<SentencePair>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        Error::Csv {
            path: path.to_owned(),
            line,
            message: e.to_string(),
        }
    };
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let ok = headers.len() >= 2
        && header_matches(&headers[0], INPUT_HEADER)
        && header_matches(&headers[1], OUTPUT_HEADER);
    if !ok {
        return Err(Error::Schema {
            path: path.to_owned(),
            expected: vec![INPUT_HEADER.into(), OUTPUT_HEADER.into()],
            found: headers.iter().map(str::to_owned).collect(),
        });
    }

    let mut pairs = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let input = normalize_text(record.get(0).unwrap_or(""), &options.policy);
        let output = normalize_text(record.get(1).unwrap_or(""), &options.policy);
        if options.drop_nulls && (nullish(&input) || nullish(&output)) {
            continue;
        }
        if options.dedup && !seen.insert((input.clone(), output.clone())) {
            continue;
        }
        pairs.push(SentencePair {
            input,
            output,
            row,
            split,
            lang,
        });
    }
    Ok(pairs)
}

/// Per-category counts for one language and split, Null/Empty included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub schema_version: u32,
    pub lang: Lang,
    pub split: Option<Split>,
    pub total: u64,
    /// Every category is present, zero counts included.
    pub counts: BTreeMap<ErrorCategory, u64>,
    pub precedence_order: Vec<ErrorCategory>,
    /// Policy applied at ingestion, before classification.
    #[serde(default)]
    pub normalization: Option<NormalizationPolicy>,
    /// Whether dandas were rewritten before the pairs were classified.
    #[serde(default)]
    pub danda_normalized: bool,
}

impl DistributionReport {
    pub fn count(&self, category: ErrorCategory) -> u64 {
        self.counts.get(&category).copied().unwrap_or(0)
    }

    pub fn with_normalization(mut self, policy: NormalizationPolicy) -> Self {
        self.danda_normalized = policy.danda_policy != crate::textnorm::DandaPolicy::KeepDanda;
        self.normalization = Some(policy);
        self
    }

    /// One-row table in the `Split (n) | Null | Punct/WS | ...` layout.
    pub fn table_row(&self) -> String {
        let split = self.split.map_or_else(|| "-".to_owned(), |s| s.to_string());
        let mut out = format!("{split} ({})", self.total);
        for c in TABLE_COLUMNS {
            out.push_str(&format!(" | {}", self.count(c)));
        }
        out
    }
}

/// Column order of the distribution tables.
pub const TABLE_COLUMNS: [ErrorCategory; 9] = [
    ErrorCategory::NullEmpty,
    ErrorCategory::PunctWhitespace,
    ErrorCategory::WordOrder,
    ErrorCategory::MissingExtraWord,
    ErrorCategory::SyntaxAgreement,
    ErrorCategory::Morphology,
    ErrorCategory::Spelling,
    ErrorCategory::GrammarSyntax,
    ErrorCategory::NoError,
];

/// Classifies every pair and tallies the labels.
pub fn analyze(pairs: &[SentencePair], profile: &LanguageProfile) -> Result<DistributionReport> {
    if let Some(p) = pairs.iter().find(|p| p.lang != profile.name) {
        return Err(Error::invalid_input(format!(
            "row {} is {} but the profile is {}",
            p.row, p.lang, profile.name
        )));
    }
    let split = pairs.first().map(|p| p.split);
    if let Some(p) = pairs.iter().find(|p| Some(p.split) != split) {
        return Err(Error::invalid_input(format!(
            "row {} belongs to split {}, expected {}",
            p.row,
            p.split,
            split.expect("non-empty")
        )));
    }

    let mut counts: BTreeMap<ErrorCategory, u64> =
        ErrorCategory::ALL.iter().map(|&c| (c, 0)).collect();
    for pair in pairs {
        let label = classify_pair(&pair.input, &pair.output, profile).category;
        *counts.get_mut(&label).expect("all categories present") += 1;
    }
    Ok(DistributionReport {
        schema_version: DIST_SCHEMA_VERSION,
        lang: profile.name,
        split,
        total: pairs.len() as u64,
        counts,
        precedence_order: ErrorCategory::ALL.to_vec(),
        normalization: None,
        danda_normalized: false,
    })
}

/// Categories pulled to the front of the focus list whenever they occur.
pub const PROMOTED: [ErrorCategory; 2] =
    [ErrorCategory::PunctWhitespace, ErrorCategory::Morphology];

/// Categories the prompt always tells the model to avoid.
pub const DEPRIORITIZED: [ErrorCategory; 2] =
    [ErrorCategory::WordOrder, ErrorCategory::MissingExtraWord];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub lang: Lang,
    pub template_version: u32,
    pub prioritized: Vec<ErrorCategory>,
    pub deprioritized: Vec<ErrorCategory>,
    pub constraints: Vec<String>,
    pub rendered: String,
}

impl PromptSpec {
    /// Instantiates the shipped template from the structured fields.
    pub fn render(
        lang: Lang,
        prioritized: &[ErrorCategory],
        deprioritized: &[ErrorCategory],
        constraints: &[String],
    ) -> String {
        let profile = LanguageProfile::for_lang(lang);
        let focus = if prioritized.is_empty() {
            String::new()
        } else {
            let mut s = String::from("Check for these error types first, in this order:");
            for (i, c) in prioritized.iter().enumerate() {
                s.push_str(&format!("\n{}. {}", i + 1, c.label(&profile)));
            }
            s
        };
        let rules = constraints
            .iter()
            .map(|c| format!("- {c}"))
            .collect::<Vec<_>>()
            .join("\n");
        let avoid = if deprioritized.is_empty() {
            String::new()
        } else {
            let names: Vec<String> = deprioritized.iter().map(|c| c.label(&profile)).collect();
            format!(
                "Avoid these edits unless the sentence is ungrammatical without them: {}.",
                names.join(", ")
            )
        };

        let mut out = String::new();
        for line in PROMPT_TEMPLATE.lines() {
            let filled = line
                .replace("{{language}}", lang.display_name())
                .replace("{{focus}}", &focus)
                .replace("{{constraints}}", &rules)
                .replace("{{avoid}}", &avoid);
            // placeholder lines that expand to nothing disappear
            if filled.is_empty() && !line.is_empty() {
                continue;
            }
            out.push_str(&filled);
            out.push('\n');
        }
        out
    }

    pub fn rerender(&self) -> String {
        Self::render(
            self.lang,
            &self.prioritized,
            &self.deprioritized,
            &self.constraints,
        )
    }

    /// SHA-256 of the rendered prompt, hex encoded.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.rendered.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Minimal-edit constraint clauses, always present.
pub fn constraint_clauses(lang: Lang) -> Vec<String> {
    let mark = match lang {
        Lang::Hi => DANDA.to_string(),
        Lang::Ml => ".".to_string(),
    };
    vec![
        "Make the fewest possible changes.".into(),
        "Do not paraphrase, translate, or transliterate.".into(),
        "Preserve numerals and named entities exactly as written.".into(),
        format!(
            "End the sentence with exactly one correct sentence-final mark (usually \"{mark}\")."
        ),
    ]
}

/// Derives a correction prompt from an error distribution.
pub fn synthesize_prompt(
    report: &DistributionReport,
    profile: &LanguageProfile,
) -> Result<PromptSpec> {
    if report.total == 0 {
        return Err(Error::invalid_input("distribution report is empty"));
    }
    if report.lang != profile.name {
        return Err(Error::invalid_input(format!(
            "report is for {} but the profile is {}",
            report.lang, profile.name
        )));
    }

    let mut ranked: Vec<ErrorCategory> = ErrorCategory::ALL
        .into_iter()
        .filter(|c| c.is_edit() && report.count(*c) > 0)
        .collect();
    // stable: equal counts keep precedence order
    ranked.sort_by_key(|c| std::cmp::Reverse(report.count(*c)));
    let mut prioritized: Vec<ErrorCategory> = PROMOTED
        .into_iter()
        .filter(|c| ranked.contains(c))
        .collect();
    prioritized.extend(ranked.into_iter().filter(|c| !PROMOTED.contains(c)));

    let deprioritized = DEPRIORITIZED.to_vec();
    let constraints = constraint_clauses(profile.name);
    let rendered = PromptSpec::render(profile.name, &prioritized, &deprioritized, &constraints);
    Ok(PromptSpec {
        lang: profile.name,
        template_version: PROMPT_TEMPLATE_VERSION,
        prioritized,
        deprioritized,
        constraints,
        rendered,
    })
}
