//! Token alignment and the intra-token comparators used by the classifier.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::tokenizer::{LanguageProfile, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpTag {
    Equal,
    Insert,
    Delete,
    Replace,
}

/// One aligned span: `a[a_span.0..a_span.1]` corresponds to
/// `b[b_span.0..b_span.1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Opcode {
    pub tag: OpTag,
    pub a_span: (usize, usize),
    pub b_span: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditScript {
    pub ops: Vec<Opcode>,
}

impl EditScript {
    /// Rebuilds the target sequence from `a`, taking inserted and replacing
    /// material from `b`.
    pub fn apply<T: Clone>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(b.len());
        for op in &self.ops {
            match op.tag {
                OpTag::Equal => out.extend_from_slice(&a[op.a_span.0..op.a_span.1]),
                OpTag::Delete => {}
                OpTag::Insert | OpTag::Replace => {
                    out.extend_from_slice(&b[op.b_span.0..op.b_span.1])
                }
            }
        }
        out
    }

    pub fn has(&self, tag: OpTag) -> bool {
        self.ops.iter().any(|op| op.tag == tag)
    }

    pub fn edits(&self) -> impl Iterator<Item = &Opcode> {
        self.ops.iter().filter(|op| op.tag != OpTag::Equal)
    }
}

struct Matcher<'a, T> {
    a: &'a [T],
    b: &'a [T],
    b2j: HashMap<&'a T, Vec<usize>>,
}

impl<'a, T: Eq + Hash> Matcher<'a, T> {
    fn new(a: &'a [T], b: &'a [T]) -> Self {
        let mut b2j: HashMap<&T, Vec<usize>> = HashMap::new();
        for (j, item) in b.iter().enumerate() {
            b2j.entry(item).or_default().push(j);
        }
        Self { a, b, b2j }
    }

    /// Longest block `a[i..i+k] == b[j..j+k]` inside the window; ties go to the
    /// smallest `i`, then the smallest `j`.
    fn longest_match(
        &self,
        alo: usize,
        ahi: usize,
        blo: usize,
        bhi: usize,
    ) -> (usize, usize, usize) {
        let (mut best_i, mut best_j, mut best_k) = (alo, blo, 0);
        // run length of the match ending at (i-1, j)
        let mut j2len: HashMap<usize, usize> = HashMap::new();
        for i in alo..ahi {
            let mut next: HashMap<usize, usize> = HashMap::new();
            if let Some(positions) = self.b2j.get(&self.a[i]) {
                for &j in positions {
                    if j < blo {
                        continue;
                    }
                    if j >= bhi {
                        break;
                    }
                    let k = j
                        .checked_sub(1)
                        .and_then(|p| j2len.get(&p))
                        .copied()
                        .unwrap_or(0)
                        + 1;
                    next.insert(j, k);
                    if k > best_k {
                        best_i = i + 1 - k;
                        best_j = j + 1 - k;
                        best_k = k;
                    }
                }
            }
            j2len = next;
        }
        (best_i, best_j, best_k)
    }

    fn matching_blocks(&self) -> Vec<(usize, usize, usize)> {
        let mut stack = vec![(0, self.a.len(), 0, self.b.len())];
        let mut blocks = Vec::new();
        while let Some((alo, ahi, blo, bhi)) = stack.pop() {
            let (i, j, k) = self.longest_match(alo, ahi, blo, bhi);
            if k == 0 {
                continue;
            }
            blocks.push((i, j, k));
            if alo < i && blo < j {
                stack.push((alo, i, blo, j));
            }
            if i + k < ahi && j + k < bhi {
                stack.push((i + k, ahi, j + k, bhi));
            }
        }
        blocks.sort_unstable();

        // merge blocks that touch
        let mut merged: Vec<(usize, usize, usize)> = Vec::with_capacity(blocks.len() + 1);
        for (i, j, k) in blocks {
            match merged.last_mut() {
                Some(last) if last.0 + last.2 == i && last.1 + last.2 == j => last.2 += k,
                _ => merged.push((i, j, k)),
            }
        }
        merged.push((self.a.len(), self.b.len(), 0));
        merged
    }
}

/// Aligns two sequences by recursive longest-common-block anchoring.
pub fn align<T: Eq + Hash>(a: &[T], b: &[T]) -> EditScript {
    let matcher = Matcher::new(a, b);
    let mut ops = Vec::new();
    let (mut i, mut j) = (0, 0);
    for (ai, bj, size) in matcher.matching_blocks() {
        let tag = match (i < ai, j < bj) {
            (true, true) => Some(OpTag::Replace),
            (true, false) => Some(OpTag::Delete),
            (false, true) => Some(OpTag::Insert),
            (false, false) => None,
        };
        if let Some(tag) = tag {
            ops.push(Opcode {
                tag,
                a_span: (i, ai),
                b_span: (j, bj),
            });
        }
        i = ai + size;
        j = bj + size;
        if size > 0 {
            ops.push(Opcode {
                tag: OpTag::Equal,
                a_span: (ai, i),
                b_span: (bj, j),
            });
        }
    }
    EditScript { ops }
}

/// Aligns two token sequences on their text.
pub fn align_tokens(a: &[Token], b: &[Token]) -> EditScript {
    let a: Vec<&str> = a.iter().map(|t| t.text.as_str()).collect();
    let b: Vec<&str> = b.iter().map(|t| t.text.as_str()).collect();
    align(&a, &b)
}

/// Unit-cost edit distance between two sequences.
pub fn levenshtein_seq<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let cost = usize::from(x != y);
            let next = (row[j + 1] + 1).min(row[j] + 1).min(diag + cost);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

/// Character-level (codepoint) edit distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_seq(&a, &b)
}

/// Long-common-prefix test: strip the shared codepoint prefix and report
/// whether the remaining tails differ and either ends with a listed suffix.
pub fn suffix_tail_change(a: &str, b: &str, suffixes: &[String]) -> bool {
    let prefix_bytes: usize = a
        .chars()
        .zip(b.chars())
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x.len_utf8())
        .sum();
    let (ta, tb) = (&a[prefix_bytes..], &b[prefix_bytes..]);
    if ta == tb {
        return false;
    }
    suffixes
        .iter()
        .any(|s| ta.ends_with(s.as_str()) || tb.ends_with(s.as_str()))
}

/// True iff any token is an auxiliary or postposition of the profile.
pub fn touches_syntax(segment: &[Token], profile: &LanguageProfile) -> bool {
    segment.iter().any(|t| profile.is_syntax_marker(&t.text))
}
