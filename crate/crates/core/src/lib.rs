//! Deterministic analysis tools for Hindi and Malayalam grammatical error
//! correction: text normalization, a priority-ordered error-type classifier,
//! single-reference GLEU, corpus error distributions, prompt synthesis, and
//! auditing of model edits.

pub mod alignment;
pub mod audit;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod gleu;
pub mod textnorm;
pub mod tokenizer;

pub use alignment::{
    align, align_tokens, levenshtein, levenshtein_seq, suffix_tail_change, touches_syntax,
    EditScript, OpTag, Opcode,
};
pub use audit::{
    audit_corpus, audit_pair, dual_report, reconcile, AuditReport, DualReport, EditAudit, Stratum,
    Triple,
};
pub use classifier::{classify_pair, constants, Classification, ErrorCategory, SPELL_THR};
pub use corpus::{
    analyze, load_pairs, synthesize_prompt, DistributionReport, LoadOptions, PromptSpec,
    SentencePair, Split,
};
pub use error::{Error, Result};
pub use gleu::{gleu_corpus, gleu_corpus_with, GleuReport};
pub use textnorm::{alnum_projection, normalize_text, postprocess_hypothesis, NormalizationPolicy};
pub use tokenizer::{tokenize, Lang, LanguageProfile, Token, TokenKind};
