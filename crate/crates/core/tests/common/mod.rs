//! Test-only oracles and generators. Nothing here calls into the library's
//! alignment, tokenizer, or classifier code.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use unicode_normalization::UnicodeNormalization;

// ---------------------------------------------------------------------------
// Straight-line transcription of the reference classifier
// ---------------------------------------------------------------------------

pub struct OracleProfile {
    pub hindi: bool,
    pub auxiliaries: Vec<String>,
    pub postpositions: Vec<String>,
    pub suffixes: Vec<String>,
}

impl OracleProfile {
    /// Reads a lexicon file with a deliberately simple parser.
    pub fn from_lexicon(hindi: bool, text: &str) -> Self {
        let mut p = OracleProfile {
            hindi,
            auxiliaries: vec![],
            postpositions: vec![],
            suffixes: vec![],
        };
        let mut section = "";
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with('[') {
                section = if line == "[auxiliaries]" {
                    "aux"
                } else if line == "[postpositions]" {
                    "post"
                } else {
                    "suf"
                };
                continue;
            }
            let entry: String = line.nfkc().collect();
            match section {
                "aux" => p.auxiliaries.push(entry),
                "post" if hindi => p.postpositions.push(entry),
                "suf" => p.suffixes.push(entry),
                _ => {}
            }
        }
        p
    }

    pub fn hindi() -> Self {
        Self::from_lexicon(true, include_str!("../../data/lexicon/hi.txt"))
    }

    pub fn malayalam() -> Self {
        Self::from_lexicon(false, include_str!("../../data/lexicon/ml.txt"))
    }
}

pub fn oracle_nullish(x: &str) -> bool {
    let s = x.trim().to_lowercase();
    s.is_empty() || s == "nan" || s == "null" || s == "none"
}

fn oracle_view(s: &str) -> String {
    let invisible = [
        '\u{200B}', '\u{200C}', '\u{200D}', '\u{FEFF}', '\u{00AD}', '\u{200E}', '\u{200F}',
    ];
    let kept: String = s.chars().filter(|c| !invisible.contains(c)).collect();
    let nfkc: String = kept.nfkc().collect();
    let mut digits = String::new();
    for c in nfkc.chars() {
        let v = c as u32;
        if (0x0966..=0x096F).contains(&v) {
            digits.push((b'0' + (v - 0x0966) as u8) as char);
        } else if (0x0D66..=0x0D6F).contains(&v) {
            digits.push((b'0' + (v - 0x0D66) as u8) as char);
        } else {
            digits.push(c);
        }
    }
    digits.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// 'L' letter of a script, 'D' digit, 'P' punctuation/symbol, ' ' space.
fn oracle_class(c: char) -> (char, u8) {
    let v = c as u32;
    if c.is_whitespace() {
        return (' ', 0);
    }
    if c.is_ascii_digit() || (0x0966..=0x096F).contains(&v) || (0x0D66..=0x0D6F).contains(&v) {
        return ('D', 0);
    }
    if v == 0x0964 || v == 0x0965 || v == 0x0970 || v == 0x0D4F || v == 0x0D79 {
        return ('P', 0);
    }
    if (0x0900..=0x097F).contains(&v) {
        return ('L', 1);
    }
    if (0x0D00..=0x0D7F).contains(&v) {
        return ('L', 2);
    }
    if (0xA8E0..=0xA8FF).contains(&v) {
        return ('L', 1);
    }
    // combining diacritics stay with the letter they modify
    if c.is_ascii_alphabetic() || (0x0300..=0x036F).contains(&v) {
        return ('L', 3);
    }
    if c.is_alphanumeric() {
        return ('L', if v < 0x250 { 3 } else { 4 });
    }
    ('P', 0)
}

pub fn oracle_projection(s: &str) -> String {
    s.chars()
        .filter(|&c| matches!(oracle_class(c).0, 'L' | 'D'))
        .collect()
}

pub fn oracle_tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut cur_key = (' ', 0u8);
    for c in s.chars() {
        let key = oracle_class(c);
        if key != cur_key && !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
        if key.0 != ' ' {
            cur.push(c);
        }
        cur_key = key;
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn oracle_is_punct(tok: &str) -> bool {
    tok.chars().all(|c| oracle_class(c).0 == 'P')
}

fn oracle_script(tok: &str) -> Option<u8> {
    let mut scripts: Vec<u8> = tok
        .chars()
        .map(oracle_class)
        .filter(|k| k.0 == 'L')
        .map(|k| k.1)
        .collect();
    scripts.sort();
    scripts.dedup();
    match scripts.len() {
        0 => Some(0),
        1 => Some(scripts[0]),
        _ => None,
    }
}

fn oracle_same_script(a: &str, b: &str) -> bool {
    match (oracle_script(a), oracle_script(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

fn multiset_nonpunct(tokens: &[String]) -> Vec<String> {
    let mut v: Vec<String> = tokens
        .iter()
        .filter(|t| !oracle_is_punct(t))
        .cloned()
        .collect();
    v.sort();
    v
}

/// Full-matrix Levenshtein distance.
pub fn oracle_levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            d[i][j] = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + sub);
        }
    }
    d[n][m]
}

fn oracle_suffix_tail(a: &str, b: &str, suffixes: &[String]) -> bool {
    let ac: Vec<char> = a.chars().collect();
    let bc: Vec<char> = b.chars().collect();
    let mut k = 0;
    while k < ac.len() && k < bc.len() && ac[k] == bc[k] {
        k += 1;
    }
    let ta: String = ac[k..].iter().collect();
    let tb: String = bc[k..].iter().collect();
    if ta == tb {
        return false;
    }
    suffixes
        .iter()
        .any(|s| ta.ends_with(s.as_str()) || tb.ends_with(s.as_str()))
}

fn oracle_touches_syntax(seg: &[String], p: &OracleProfile) -> bool {
    seg.iter()
        .any(|t| p.auxiliaries.contains(t) || p.postpositions.contains(t))
}

/// Brute-force longest matching block: earliest `i`, then earliest `j`.
fn brute_longest<T: PartialEq>(
    a: &[T],
    b: &[T],
    alo: usize,
    ahi: usize,
    blo: usize,
    bhi: usize,
) -> (usize, usize, usize) {
    let mut best = (alo, blo, 0);
    for i in alo..ahi {
        for j in blo..bhi {
            let mut k = 0;
            while i + k < ahi && j + k < bhi && a[i + k] == b[j + k] {
                k += 1;
            }
            if k > best.2 {
                best = (i, j, k);
            }
        }
    }
    best
}

fn brute_blocks<T: PartialEq>(
    a: &[T],
    b: &[T],
    alo: usize,
    ahi: usize,
    blo: usize,
    bhi: usize,
    out: &mut Vec<(usize, usize, usize)>,
) {
    let (i, j, k) = brute_longest(a, b, alo, ahi, blo, bhi);
    if k == 0 {
        return;
    }
    if alo < i && blo < j {
        brute_blocks(a, b, alo, i, blo, j, out);
    }
    out.push((i, j, k));
    if i + k < ahi && j + k < bhi {
        brute_blocks(a, b, i + k, ahi, j + k, bhi, out);
    }
}

/// Sequence-matcher opcodes as (tag, i1, i2, j1, j2).
pub fn oracle_opcodes<T: PartialEq>(
    a: &[T],
    b: &[T],
) -> Vec<(&'static str, usize, usize, usize, usize)> {
    let mut blocks = Vec::new();
    brute_blocks(a, b, 0, a.len(), 0, b.len(), &mut blocks);
    let mut merged: Vec<(usize, usize, usize)> = Vec::new();
    for blk in blocks {
        if let Some(last) = merged.last_mut() {
            if last.0 + last.2 == blk.0 && last.1 + last.2 == blk.1 {
                last.2 += blk.2;
                continue;
            }
        }
        merged.push(blk);
    }
    merged.push((a.len(), b.len(), 0));
    let mut ops = Vec::new();
    let (mut i, mut j) = (0, 0);
    for (ai, bj, size) in merged {
        let tag = if i < ai && j < bj {
            "replace"
        } else if i < ai {
            "delete"
        } else if j < bj {
            "insert"
        } else {
            ""
        };
        if !tag.is_empty() {
            ops.push((tag, i, ai, j, bj));
        }
        i = ai + size;
        j = bj + size;
        if size > 0 {
            ops.push(("equal", ai, i, bj, j));
        }
    }
    ops
}

/// Returns the category id (`ErrorCategory::id`) the reference procedure
/// assigns.
pub fn oracle_classify(inp: &str, out: &str, p: &OracleProfile) -> &'static str {
    if oracle_nullish(inp) || oracle_nullish(out) {
        return "null_empty";
    }
    if inp == out {
        return "no_error";
    }
    let inp = oracle_view(inp);
    let out = oracle_view(out);
    if oracle_projection(&inp) == oracle_projection(&out) {
        return "punct_whitespace";
    }
    let a = oracle_tokenize(&inp);
    let b = oracle_tokenize(&out);
    if multiset_nonpunct(&a) == multiset_nonpunct(&b) && a != b {
        return "word_order";
    }

    let spell_thr = 2;
    let mut touched_syn = false;
    let mut saw_insdel = false;
    let mut saw_repl = false;
    let mut saw_morph = false;
    let mut saw_spell = false;
    for (tag, i1, i2, j1, j2) in oracle_opcodes(&a, &b) {
        let seg_a = &a[i1..i2];
        let seg_b = &b[j1..j2];
        if tag == "insert" || tag == "delete" {
            if oracle_touches_syntax(seg_a, p) || oracle_touches_syntax(seg_b, p) {
                touched_syn = true;
            }
            saw_insdel = true;
        } else if tag == "replace" {
            saw_repl = true;
            if oracle_touches_syntax(seg_a, p) || oracle_touches_syntax(seg_b, p) {
                touched_syn = true;
            } else {
                for (ta, tb) in seg_a.iter().zip(seg_b.iter()) {
                    if !oracle_same_script(ta, tb) {
                        continue;
                    }
                    if oracle_suffix_tail(ta, tb, &p.suffixes) {
                        saw_morph = true;
                    } else {
                        let ca: Vec<char> = ta.chars().collect();
                        let cb: Vec<char> = tb.chars().collect();
                        if oracle_levenshtein(&ca, &cb) <= spell_thr {
                            saw_spell = true;
                        }
                    }
                }
            }
        }
    }
    if saw_insdel {
        return if touched_syn {
            "syntax_agreement"
        } else {
            "missing_extra_word"
        };
    }
    if saw_repl {
        if touched_syn {
            return "syntax_agreement";
        }
        if saw_morph {
            return "morphology";
        }
        if saw_spell {
            return "spelling";
        }
        return "grammar_syntax";
    }
    "grammar_syntax"
}

// ---------------------------------------------------------------------------
// Random pair generation
// ---------------------------------------------------------------------------

pub const HI_VOCAB: &[&str] = &[
    "राम",
    "श्याम",
    "घर",
    "लड़का",
    "लड़के",
    "लड़की",
    "खेलता",
    "खेलती",
    "खेलते",
    "कमल",
    "कमर",
    "किताब",
    "किताबें",
    "पढ़ता",
    "पढ़ना",
    "है",
    "हैं",
    "था",
    "थी",
    "थे",
    "ने",
    "को",
    "से",
    "में",
    "पर",
    "गया",
    "गई",
    "बहुत",
    "अच्छा",
    "अच्छे",
    "सड़क",
    "सडक",
    "१२",
    "12",
    "abc",
    "।",
    ",",
    "?",
    "!",
];

pub const ML_VOCAB: &[&str] = &[
    "ഞാൻ",
    "അവൻ",
    "വീട്",
    "വീട്ടിൽ",
    "വീടിന്റെ",
    "പൂച്ച",
    "പുച്ച",
    "നായ",
    "പോയി",
    "പോകുന്നു",
    "ആണ്",
    "ഇല്ല",
    "ഉണ്ട്",
    "ആയിരുന്നു",
    "കുട്ടി",
    "കുട്ടിക്ക്",
    "കുട്ടികൾ",
    "പുസ്തകം",
    "പുസ്തകവും",
    "നല്ല",
    "ഇന്നലെ",
    "൧൦",
    "10",
    "xyz",
    ".",
    ",",
    "?",
];

pub fn random_sentence<R: Rng>(rng: &mut R, vocab: &[&str], max_len: usize) -> Vec<String> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| vocab.choose(rng).unwrap().to_string())
        .collect()
}

/// Applies one to three random token edits (insert, delete, replace, swap,
/// punctuation/space jitter).
pub fn mutate<R: Rng>(rng: &mut R, tokens: &[String], vocab: &[&str]) -> Vec<String> {
    let mut out = tokens.to_vec();
    let edits = rng.gen_range(0..=3);
    for _ in 0..edits {
        match rng.gen_range(0..5) {
            0 => {
                let at = rng.gen_range(0..=out.len());
                out.insert(at, vocab.choose(rng).unwrap().to_string());
            }
            1 if !out.is_empty() => {
                let at = rng.gen_range(0..out.len());
                out.remove(at);
            }
            2 if !out.is_empty() => {
                let at = rng.gen_range(0..out.len());
                out[at] = vocab.choose(rng).unwrap().to_string();
            }
            3 if out.len() >= 2 => {
                let i = rng.gen_range(0..out.len());
                let j = rng.gen_range(0..out.len());
                out.swap(i, j);
            }
            _ => {
                let mark = ["।", ".", ",", "?"].choose(rng).unwrap();
                out.push(mark.to_string());
            }
        }
    }
    out
}

/// Joins tokens with a random mix of single, double, and zero spaces before
/// punctuation.
pub fn render<R: Rng>(rng: &mut R, tokens: &[String]) -> String {
    let mut s = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            let punct = t
                .chars()
                .all(|c| !c.is_alphanumeric() && !(0x0900..=0x0D7F).contains(&(c as u32)));
            match rng.gen_range(0..6) {
                0 if punct => {}
                1 => s.push_str("  "),
                _ => s.push(' '),
            }
        }
        s.push_str(t);
    }
    s
}

/// A random (input, output) pair, sometimes null-like or identical.
pub fn random_pair<R: Rng>(rng: &mut R, vocab: &[&str]) -> (String, String) {
    let base = random_sentence(rng, vocab, 7);
    let input = render(rng, &base);
    match rng.gen_range(0..20) {
        0 => {
            return (
                ["", "nan", "None", " "].choose(rng).unwrap().to_string(),
                input,
            )
        }
        1 => return (input.clone(), input),
        _ => {}
    }
    let edited = mutate(rng, &base, vocab);
    (input, render(rng, &edited))
}

// ---------------------------------------------------------------------------
// GLEU brute force
// ---------------------------------------------------------------------------

fn all_ngrams<'a>(t: &'a [&'a str], n: usize) -> Vec<&'a [&'a str]> {
    if t.len() < n {
        return vec![];
    }
    (0..=t.len() - n).map(|i| &t[i..i + n]).collect()
}

fn count_in(g: &[&str], list: &[&[&str]]) -> usize {
    list.iter().filter(|x| **x == g).count()
}

/// Distinct elements, first-occurrence order.
fn distinct<'a>(list: &[&'a [&'a str]]) -> Vec<&'a [&'a str]> {
    let mut out: Vec<&[&str]> = Vec::new();
    for g in list {
        if !out.contains(g) {
            out.push(g);
        }
    }
    out
}

/// Pooled (matches, totals, hyp_len, ref_len) by linear-scan counting.
pub fn brute_gleu_stats(
    src: &[&str],
    hyp: &[&str],
    refs: &[&str],
    max_n: usize,
) -> (Vec<i64>, Vec<i64>, i64, i64) {
    let mut matches = vec![0i64; max_n];
    let mut totals = vec![0i64; max_n];
    let (mut c, mut r) = (0i64, 0i64);
    for ((s, h), rf) in src.iter().zip(hyp).zip(refs) {
        let s: Vec<&str> = s.split_whitespace().collect();
        let h: Vec<&str> = h.split_whitespace().collect();
        let rf: Vec<&str> = rf.split_whitespace().collect();
        c += h.len() as i64;
        r += rf.len() as i64;
        for n in 1..=max_n {
            let hg = all_ngrams(&h, n);
            let sg = all_ngrams(&s, n);
            let rg = all_ngrams(&rf, n);
            let mut reward = 0i64;
            let mut penalty = 0i64;
            for g in distinct(&hg) {
                let ch = count_in(g, &hg) as i64;
                let cr = count_in(g, &rg) as i64;
                let cs = count_in(g, &sg) as i64;
                reward += ch.min(cr);
                if cr == 0 {
                    penalty += ch.min(cs);
                }
            }
            matches[n - 1] += (reward - penalty).max(0);
            totals[n - 1] += (h.len() as i64 + 1 - n as i64).max(0);
        }
    }
    (matches, totals, c, r)
}

pub fn brute_gleu(src: &[&str], hyp: &[&str], refs: &[&str], max_n: usize) -> f64 {
    let (m, t, c, r) = brute_gleu_stats(src, hyp, refs, max_n);
    if m.contains(&0) || t.contains(&0) || c == 0 {
        return 0.0;
    }
    let lp: f64 = m
        .iter()
        .zip(&t)
        .map(|(&x, &y)| (x as f64 / y as f64).ln())
        .sum::<f64>()
        / max_n as f64;
    let bp = (1.0 - r as f64 / c as f64).min(0.0);
    (bp + lp).exp()
}

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

/// Memoized recursive edit distance.
pub fn memo_levenshtein(a: &[char], b: &[char]) -> usize {
    fn go(
        a: &[char],
        b: &[char],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), usize>,
    ) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

/// All strings of length 0..=max_len over `alphabet`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<char>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Random string over a mix of Devanagari, Malayalam, Latin, digits,
/// punctuation, whitespace, and invisible characters.
pub fn random_mixed_string<R: Rng>(rng: &mut R, len: usize) -> String {
    const POOL: &[char] = &[
        'क', 'ख', 'ि', 'ा', '्', 'ं', 'ड', '़', 'ॐ', '।', '॥', '१', '९', 'അ', 'ക', 'ി', '്', 'ൽ', '൦',
        '൯', 'a', 'Z', 'é', '0', '7', '.', ',', '?', '!', ';', ':', '-', '"', '(', ')', ' ', ' ',
        '\t', '\n', '\u{00A0}', '\u{200B}', '\u{200C}', '\u{200D}', '\u{FEFF}', '\u{00AD}',
        '\u{200E}', 'ﬁ', '①', '²', '\u{0301}', '$', '@',
    ];
    (0..len).map(|_| *POOL.choose(rng).unwrap()).collect()
}
