//! Browser bindings: classify a pair, score a small corpus, clean up a line.
//!
//! Every export returns JSON text so the page needs no generated type glue.

use gec_forge::textnorm::{postprocess_with, TerminalConvention};
use gec_forge::{
    classify_pair, gleu_corpus, normalize_text, Lang, LanguageProfile, NormalizationPolicy,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn lang(code: &str) -> Result<Lang, String> {
    code.parse().map_err(|e: gec_forge::Error| e.to_string())
}

pub fn classify_json(input: &str, output: &str, lang_code: &str) -> Result<String, String> {
    let profile = LanguageProfile::for_lang(lang(lang_code)?);
    let c = classify_pair(input, output, &profile);
    let value = json!({
        "category": c.category,
        "label": c.category.label(&profile),
        "stage": c.stage.number(),
        "evidence": c.evidence,
    });
    Ok(value.to_string())
}

/// Sources, hypotheses and references are newline-separated, one sentence
/// per line.
pub fn score_json(src: &str, hyp: &str, reference: &str, max_n: usize) -> Result<String, String> {
    let split = |s: &str| s.lines().map(str::to_owned).collect::<Vec<_>>();
    let report = gleu_corpus(&split(src), &split(hyp), &split(reference), max_n)
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Default normalization followed by surface cleanup, line by line.
pub fn cleanup_text(text: &str, lang_code: &str) -> Result<String, String> {
    let convention = match lang(lang_code)? {
        Lang::Hi => TerminalConvention::Danda,
        Lang::Ml => TerminalConvention::Period,
    };
    let policy = NormalizationPolicy::default();
    let lines: Vec<String> = text
        .lines()
        .map(|l| postprocess_with(&normalize_text(l, &policy), None, convention))
        .collect();
    Ok(lines.join("\n"))
}

#[wasm_bindgen]
pub fn classify(input: &str, output: &str, lang: &str) -> Result<String, JsError> {
    classify_json(input, output, lang).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn score(src: &str, hyp: &str, reference: &str, max_n: usize) -> Result<String, JsError> {
    score_json(src, hyp, reference, max_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cleanup(text: &str, lang: &str) -> Result<String, JsError> {
    cleanup_text(text, lang).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_owned()
}
