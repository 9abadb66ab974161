use std::collections::BTreeMap;
use std::path::Path;

use gec_forge::corpus::{DistributionReport, Split};
use gec_forge::textnorm::{postprocess_with, TerminalConvention};
use gec_forge::{
    analyze as analyze_pairs, audit_corpus, classify_pair, dual_report, gleu_corpus_with,
    load_pairs, normalize_text, synthesize_prompt, Lang, LoadOptions, SentencePair, Triple,
};

use crate::config::RunConfig;
use crate::output::{to_json, write_atomic, write_json};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TerminalArg {
    Danda,
    Period,
    Infer,
}

impl From<TerminalArg> for TerminalConvention {
    fn from(t: TerminalArg) -> Self {
        match t {
            TerminalArg::Danda => TerminalConvention::Danda,
            TerminalArg::Period => TerminalConvention::Period,
            TerminalArg::Infer => TerminalConvention::Infer,
        }
    }
}

fn load(
    cfg: &RunConfig,
    path: &Path,
    lang: Lang,
    split: Split,
) -> Result<Vec<SentencePair>, Failure> {
    let options = LoadOptions {
        policy: cfg.normalization,
        ..LoadOptions::default()
    };
    Ok(load_pairs(path, lang, split, &options)?)
}

fn read_utf8(path: &Path) -> Result<String, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    String::from_utf8(bytes).map_err(|e| {
        let err = gec_forge::Error::Decode {
            offset: e.utf8_error().valid_up_to(),
        };
        Failure::input(format!("{}: {err}", path.display()))
    })
}

pub fn classify(
    cfg: &RunConfig,
    lang: Lang,
    input: &Path,
    out: &Path,
    split: Split,
    evidence: bool,
) -> Result<(), Failure> {
    let profile = cfg.profile(lang)?;
    let pairs = load(cfg, input, lang, split)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["row", "category", "label", "stage"];
    if evidence {
        header.push("evidence");
    }
    let internal = |e: csv::Error| Failure::internal(e.to_string());
    w.write_record(&header).map_err(internal)?;
    let mut tally: BTreeMap<_, u64> = BTreeMap::new();
    for p in &pairs {
        let c = classify_pair(&p.input, &p.output, &profile);
        *tally.entry(c.category).or_default() += 1;
        let mut rec = vec![
            p.row.to_string(),
            c.category.id().to_owned(),
            c.category.label(&profile),
            c.stage.number().to_string(),
        ];
        if evidence {
            let ev = c
                .evidence
                .as_ref()
                .map_or(Ok("{}".to_owned()), serde_json::to_string);
            rec.push(ev.map_err(|e| Failure::internal(e.to_string()))?);
        }
        w.write_record(&rec).map_err(internal)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::internal(e.to_string()))?;
    write_atomic(out, &bytes)?;
    let summary: Vec<String> = tally
        .iter()
        .map(|(c, n)| format!("{}={n}", c.id()))
        .collect();
    println!("{} pairs: {}", pairs.len(), summary.join(" "));
    Ok(())
}

pub fn analyze(
    cfg: &RunConfig,
    lang: Lang,
    split: Split,
    input: &Path,
    report: &Path,
    drop_nulls: bool,
    dedup: bool,
) -> Result<(), Failure> {
    let profile = cfg.profile(lang)?;
    let options = LoadOptions {
        policy: cfg.normalization,
        drop_nulls,
        dedup,
    };
    let pairs = load_pairs(input, lang, split, &options)?;
    let dist = analyze_pairs(&pairs, &profile)?.with_normalization(cfg.normalization);
    write_json(report, &dist)?;
    println!("{}", dist.table_row());
    Ok(())
}

fn lines(path: &Path) -> Result<Vec<String>, Failure> {
    Ok(read_utf8(path)?.lines().map(str::to_owned).collect())
}

pub fn score(
    cfg: &RunConfig,
    src: &Path,
    hyp: &Path,
    reference: &Path,
    max_n: usize,
    report: Option<&Path>,
) -> Result<(), Failure> {
    let (s, h, r) = (lines(src)?, lines(hyp)?, lines(reference)?);
    let result = gleu_corpus_with(&s, &h, &r, max_n, &cfg.normalization)?;
    if let Some(path) = report {
        write_json(path, &result)?;
    }
    println!(
        "GLEU {:.6} ({:.2})",
        result.corpus_score, result.corpus_score_x100
    );
    Ok(())
}

pub fn normalize(
    cfg: &RunConfig,
    input: &Path,
    out: Option<&Path>,
    cleanup: Option<(Option<&str>, TerminalArg)>,
) -> Result<(), Failure> {
    let text = read_utf8(input)?;
    let mut result = String::with_capacity(text.len());
    for line in text.lines() {
        let mut s = normalize_text(line, &cfg.normalization);
        if let Some((prefix, terminal)) = cleanup {
            s = postprocess_with(&s, prefix, terminal.into());
        }
        result.push_str(&s);
        result.push('\n');
    }
    match out {
        Some(path) => write_atomic(path, result.as_bytes()),
        None => {
            print!("{result}");
            Ok(())
        }
    }
}

pub fn synth_prompt(
    cfg: &RunConfig,
    dist: &Path,
    out: &Path,
    spec: Option<&Path>,
) -> Result<(), Failure> {
    let text = read_utf8(dist)?;
    let report: DistributionReport = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", dist.display())))?;
    let profile = cfg.profile(report.lang)?;
    let prompt = synthesize_prompt(&report, &profile)?;
    let hash = prompt.content_hash();
    write_atomic(out, prompt.rendered.as_bytes())?;
    let name = out
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".sha256");
    write_atomic(Path::new(&sidecar), format!("{hash}  {name}\n").as_bytes())?;
    if let Some(path) = spec {
        write_json(path, &prompt)?;
    }
    println!("{hash}");
    Ok(())
}

pub fn audit(
    cfg: &RunConfig,
    lang: Lang,
    input: &Path,
    cap: usize,
    report: &Path,
) -> Result<(), Failure> {
    let profile = cfg.profile(lang)?;
    let pairs = load(cfg, input, lang, Split::Test)?;
    let io: Vec<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.input.as_str(), p.output.as_str()))
        .collect();
    let result = audit_corpus(&io, &profile, cap);
    write_json(report, &result)?;
    let strata: Vec<String> = result
        .strata
        .iter()
        .map(|(s, n)| format!("{s}={n}"))
        .collect();
    println!("{} pairs: {}", result.total, strata.join(" "));
    Ok(())
}

pub fn audit_dual(
    cfg: &RunConfig,
    lang: Lang,
    a: &Path,
    b: &Path,
    cap: usize,
    report: &Path,
) -> Result<(), Failure> {
    let profile = cfg.profile(lang)?;
    let left = load(cfg, a, lang, Split::Test)?;
    let right = load(cfg, b, lang, Split::Test)?;
    if left.len() != right.len() {
        return Err(Failure::input(format!(
            "{} has {} rows but {} has {}",
            a.display(),
            left.len(),
            b.display(),
            right.len()
        )));
    }
    let mut triples = Vec::with_capacity(left.len());
    for (x, y) in left.into_iter().zip(right) {
        if x.input != y.input {
            return Err(Failure::input(format!(
                "row {}: inputs differ between the two files",
                x.row
            )));
        }
        triples.push(Triple {
            input: x.input,
            cand_a: x.output,
            cand_b: y.output,
        });
    }
    let result = dual_report(&triples, &profile, cap)?;
    write_atomic(report, &to_json(&result)?)?;
    println!(
        "{} pairs: union={} intersection={} conflict={}",
        result.pairs, result.union_count, result.intersection_count, result.conflict_count
    );
    Ok(())
}
