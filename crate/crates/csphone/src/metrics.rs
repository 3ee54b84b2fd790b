//! Edit-distance scoring: word error rate and phoneme error rate with
//! alignment output.
//!
//! Corpus-level rates pool edit counts over pooled reference lengths rather
//! than averaging per-sentence rates.

use std::collections::BTreeMap;

use unicode_normalization::UnicodeNormalization;

use crate::phoneme::PhoneSequence;

/// Shared normalization applied before tokenizing text for scoring and for
/// grapheme-to-phoneme conversion: NFC, lowercase, punctuation stripped.
pub fn normalize_text(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    let mut out = String::with_capacity(nfc.len());
    let mut last_space = true;
    for c in nfc.chars() {
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
            last_space = false;
        } else if !last_space {
            out.push(' ');
            last_space = true;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Match,
    Sub,
    Ins,
    Del,
}

/// One alignment step. `Del` consumes only reference, `Ins` only hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignOp {
    pub kind: OpKind,
    pub ref_index: Option<usize>,
    pub hyp_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    pub distance: usize,
    pub ops: Vec<AlignOp>,
    /// distance / max(1, reference length); may exceed 1.
    pub rate: f64,
    pub ref_len: usize,
    pub hyp_len: usize,
}

impl AlignmentReport {
    pub fn count(&self, kind: OpKind) -> usize {
        self.ops.iter().filter(|o| o.kind == kind).count()
    }
}

/// Minimal unit-cost alignment with a deterministic backtrace that prefers
/// Match over Sub over Del over Ins on ties.
pub fn edit_distance<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> AlignmentReport {
    let m = reference.len();
    let n = hypothesis.len();
    let width = n + 1;
    let mut dist = vec![0usize; (m + 1) * width];
    for (j, cell) in dist.iter_mut().enumerate().take(width) {
        *cell = j;
    }
    for i in 1..=m {
        dist[i * width] = i;
        for j in 1..=n {
            let same = reference[i - 1] == hypothesis[j - 1];
            let diag = dist[(i - 1) * width + j - 1] + usize::from(!same);
            let del = dist[(i - 1) * width + j] + 1;
            let ins = dist[i * width + j - 1] + 1;
            dist[i * width + j] = diag.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        let here = dist[i * width + j];
        if i > 0 && j > 0 {
            let same = reference[i - 1] == hypothesis[j - 1];
            let diag = dist[(i - 1) * width + j - 1];
            if same && here == diag {
                ops.push(AlignOp {
                    kind: OpKind::Match,
                    ref_index: Some(i - 1),
                    hyp_index: Some(j - 1),
                });
                i -= 1;
                j -= 1;
                continue;
            }
            if !same && here == diag + 1 {
                ops.push(AlignOp {
                    kind: OpKind::Sub,
                    ref_index: Some(i - 1),
                    hyp_index: Some(j - 1),
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == dist[(i - 1) * width + j] + 1 {
            ops.push(AlignOp {
                kind: OpKind::Del,
                ref_index: Some(i - 1),
                hyp_index: None,
            });
            i -= 1;
            continue;
        }
        ops.push(AlignOp {
            kind: OpKind::Ins,
            ref_index: None,
            hyp_index: Some(j - 1),
        });
        j -= 1;
    }
    ops.reverse();

    let distance = dist[m * width + n];
    AlignmentReport {
        distance,
        rate: distance as f64 / m.max(1) as f64,
        ops,
        ref_len: m,
        hyp_len: n,
    }
}

fn tokens_of(text: &str) -> Vec<String> {
    normalize_text(text)
        .split_whitespace()
        .map(|s| s.to_string())
        .collect()
}

/// Word error rate over normalized text.
pub fn wer(reference: &str, hypothesis: &str) -> f64 {
    wer_report(reference, hypothesis).rate
}

pub fn wer_report(reference: &str, hypothesis: &str) -> AlignmentReport {
    edit_distance(&tokens_of(reference), &tokens_of(hypothesis))
}

/// Phoneme error rate; every phone token including the tone counts as one
/// unit.
pub fn per(reference: &PhoneSequence, hypothesis: &PhoneSequence) -> f64 {
    per_report(reference, hypothesis).rate
}

pub fn per_report(reference: &PhoneSequence, hypothesis: &PhoneSequence) -> AlignmentReport {
    edit_distance(&reference.phone_tokens(), &hypothesis.phone_tokens())
}

/// One scored pair; phone sequences are optional.
#[derive(Debug, Clone, Default)]
pub struct EvalPair {
    pub reference: String,
    pub hypothesis: String,
    pub ref_phones: Option<PhoneSequence>,
    pub hyp_phones: Option<PhoneSequence>,
}

/// Streaming corpus totals. Addition order does not change any total.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusReport {
    pub pairs: usize,
    pub word_edits: usize,
    pub word_subs: usize,
    pub word_ins: usize,
    pub word_dels: usize,
    pub ref_words: usize,
    pub phone_pairs: usize,
    pub phone_edits: usize,
    pub ref_phones: usize,
    /// (reference token, hypothesis token) -> substitution count, at the word
    /// level; phone-level substitutions are tracked separately.
    pub word_confusions: BTreeMap<(String, String), u64>,
    pub phone_confusions: BTreeMap<(String, String), u64>,
}

impl CorpusReport {
    pub fn add(&mut self, pair: &EvalPair) {
        let ref_tokens = tokens_of(&pair.reference);
        let hyp_tokens = tokens_of(&pair.hypothesis);
        let report = edit_distance(&ref_tokens, &hyp_tokens);
        self.pairs += 1;
        self.word_edits += report.distance;
        self.ref_words += report.ref_len;
        for op in &report.ops {
            match op.kind {
                OpKind::Sub => {
                    self.word_subs += 1;
                    let key = (
                        ref_tokens[op.ref_index.unwrap()].clone(),
                        hyp_tokens[op.hyp_index.unwrap()].clone(),
                    );
                    *self.word_confusions.entry(key).or_insert(0) += 1;
                }
                OpKind::Ins => self.word_ins += 1,
                OpKind::Del => self.word_dels += 1,
                OpKind::Match => {}
            }
        }
        if let (Some(rp), Some(hp)) = (&pair.ref_phones, &pair.hyp_phones) {
            let ref_tok = rp.phone_tokens();
            let hyp_tok = hp.phone_tokens();
            let report = edit_distance(&ref_tok, &hyp_tok);
            self.phone_pairs += 1;
            self.phone_edits += report.distance;
            self.ref_phones += report.ref_len;
            for op in &report.ops {
                if op.kind == OpKind::Sub {
                    let key = (
                        ref_tok[op.ref_index.unwrap()].clone(),
                        hyp_tok[op.hyp_index.unwrap()].clone(),
                    );
                    *self.phone_confusions.entry(key).or_insert(0) += 1;
                }
            }
        }
    }

    pub fn wer(&self) -> f64 {
        self.word_edits as f64 / self.ref_words.max(1) as f64
    }

    pub fn per(&self) -> f64 {
        self.phone_edits as f64 / self.ref_phones.max(1) as f64
    }

    /// Substitution pairs sorted by descending count, then key.
    pub fn top_word_confusions(&self, limit: usize) -> Vec<(&(String, String), u64)> {
        let mut v: Vec<_> = self.word_confusions.iter().map(|(k, &c)| (k, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v.truncate(limit);
        v
    }
}

/// Scores a stream of pairs.
pub fn corpus_report<'a, I>(pairs: I) -> CorpusReport
where
    I: IntoIterator<Item = &'a EvalPair>,
{
    let mut report = CorpusReport::default();
    for p in pairs {
        report.add(p);
    }
    report
}
