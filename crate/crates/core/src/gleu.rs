//! Corpus-level GLEU ("without tuning") with one reference per sentence.
//!
//! For every order `n`, a sentence contributes
//!
//! ```text
//! matches_n = max(0, |hyp ∩ ref|_n - |hyp ∩ (src \ ref)|_n)
//! total_n   = number of hypothesis n-grams
//! ```
//!
//! where `∩` is clipped multiset intersection and `src \ ref` keeps the source
//! n-grams that never occur in the reference. Tallies are pooled over the
//! corpus and combined as
//! `BP * exp(mean_n ln(matches_n / total_n))`, `BP = min(1, exp(1 - r/c))`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{normalize_text, NormalizationPolicy};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramTally {
    pub order: usize,
    pub matches: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GleuReport {
    pub schema_version: u32,
    /// In `[0, 1]`.
    pub corpus_score: f64,
    /// `corpus_score * 100`, the leaderboard rendering.
    pub corpus_score_x100: f64,
    pub max_n: usize,
    /// Orders with at least one hypothesis n-gram in the corpus.
    pub effective_order: usize,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub ngram_stats: Vec<NgramTally>,
    /// Sentence-level scores; zero match counts are smoothed to one.
    pub per_sentence: Vec<f64>,
}

/// Integer tallies for one sentence (or a pooled corpus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GleuStats {
    pub hyp_len: u64,
    pub ref_len: u64,
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
}

impl GleuStats {
    fn zero(max_n: usize) -> Self {
        Self {
            hyp_len: 0,
            ref_len: 0,
            matches: vec![0; max_n],
            totals: vec![0; max_n],
        }
    }

    fn add(&mut self, other: &GleuStats) {
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        for (m, o) in self.matches.iter_mut().zip(&other.matches) {
            *m += o;
        }
        for (t, o) in self.totals.iter_mut().zip(&other.totals) {
            *t += o;
        }
    }

    fn effective_order(&self) -> usize {
        self.totals.iter().take_while(|&&t| t > 0).count()
    }

    /// Combines the tallies into a score. Orders without any hypothesis
    /// n-gram are left out of the mean. With `smooth`, zero match counts
    /// become one.
    pub fn score(&self, smooth: bool) -> f64 {
        if self.hyp_len == 0 {
            return if self.ref_len == 0 { 1.0 } else { 0.0 };
        }
        let orders = self.effective_order();
        let mut log_prec = 0.0;
        for n in 0..orders {
            let mut m = self.matches[n];
            if m == 0 {
                if !smooth {
                    return 0.0;
                }
                m = 1;
            }
            log_prec += (m as f64 / self.totals[n] as f64).ln();
        }
        log_prec /= orders as f64;
        let brevity = (1.0 - self.ref_len as f64 / self.hyp_len as f64).min(0.0);
        (brevity + log_prec).exp()
    }
}

type Counts<'a> = HashMap<&'a [String], u64>;

fn ngram_counts(tokens: &[String], n: usize) -> Counts<'_> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Tallies one (source, hypothesis, reference) triple of token sequences.
pub fn sentence_stats(
    src: &[String],
    hyp: &[String],
    reference: &[String],
    max_n: usize,
) -> GleuStats {
    let mut stats = GleuStats::zero(max_n);
    stats.hyp_len = hyp.len() as u64;
    stats.ref_len = reference.len() as u64;
    for n in 1..=max_n {
        let h = ngram_counts(hyp, n);
        let s = ngram_counts(src, n);
        let r = ngram_counts(reference, n);
        let rewarded: u64 = h
            .iter()
            .map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0)))
            .sum();
        let penalized: u64 = h
            .iter()
            .filter(|(g, _)| !r.contains_key(*g))
            .map(|(g, &c)| c.min(s.get(g).copied().unwrap_or(0)))
            .sum();
        stats.matches[n - 1] = rewarded.saturating_sub(penalized);
        stats.totals[n - 1] = (hyp.len() + 1).saturating_sub(n) as u64;
    }
    stats
}

/// Scores pre-tokenized sequences.
pub fn gleu_tokens(
    sources: &[Vec<String>],
    hypotheses: &[Vec<String>],
    references: &[Vec<String>],
    max_n: usize,
) -> Result<GleuReport> {
    if sources.len() != hypotheses.len() || sources.len() != references.len() {
        return Err(Error::invalid_input(format!(
            "length mismatch: {} sources, {} hypotheses, {} references",
            sources.len(),
            hypotheses.len(),
            references.len()
        )));
    }
    if sources.is_empty() {
        return Err(Error::invalid_input("empty corpus"));
    }
    if max_n == 0 {
        return Err(Error::invalid_input("max_n must be at least 1"));
    }

    let mut pooled = GleuStats::zero(max_n);
    let mut per_sentence = Vec::with_capacity(sources.len());
    for ((src, hyp), reference) in sources.iter().zip(hypotheses).zip(references) {
        let stats = sentence_stats(src, hyp, reference, max_n);
        per_sentence.push(stats.score(true));
        pooled.add(&stats);
    }

    let corpus_score = pooled.score(false);
    Ok(GleuReport {
        schema_version: REPORT_SCHEMA_VERSION,
        corpus_score,
        corpus_score_x100: corpus_score * 100.0,
        max_n,
        effective_order: pooled.effective_order(),
        hyp_len: pooled.hyp_len,
        ref_len: pooled.ref_len,
        ngram_stats: (0..max_n)
            .map(|n| NgramTally {
                order: n + 1,
                matches: pooled.matches[n],
                total: pooled.totals[n],
            })
            .collect(),
        per_sentence,
    })
}

/// Whitespace tokens of `s` after normalization.
pub fn gleu_tokenize(s: &str, policy: &NormalizationPolicy) -> Vec<String> {
    normalize_text(s, policy)
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

/// Scores raw text: each line is normalized with `policy` and split on
/// whitespace.
pub fn gleu_corpus_with<S: AsRef<str>>(
    sources: &[S],
    hypotheses: &[S],
    references: &[S],
    max_n: usize,
    policy: &NormalizationPolicy,
) -> Result<GleuReport> {
    let tok = |xs: &[S]| -> Vec<Vec<String>> {
        xs.iter()
            .map(|s| gleu_tokenize(s.as_ref(), policy))
            .collect()
    };
    gleu_tokens(&tok(sources), &tok(hypotheses), &tok(references), max_n)
}

/// Scores raw text with the default normalization policy.
pub fn gleu_corpus<S: AsRef<str>>(
    sources: &[S],
    hypotheses: &[S],
    references: &[S],
    max_n: usize,
) -> Result<GleuReport> {
    gleu_corpus_with(
        sources,
        hypotheses,
        references,
        max_n,
        &NormalizationPolicy::default(),
    )
}
