//! Phone-to-text decoding: lexicon-constrained beam search over syllable
//! spans with an n-gram language model choosing among homophones and
//! Vietnamese-versus-English candidates.
//!
//! Word candidates cover 1..=4 consecutive syllables. When no lexicon entry
//! is reachable from a position, the syllable is rendered back to graphemes
//! through the inverse conversion maps, so decoding never fails outright.

use crate::g2p::{word_key, G2pTable, Lexicon};
use crate::metrics::edit_distance;
use crate::ngram::NGramModel;
use crate::phoneme::{parse_phone_sequence, Inventory, PhoneSequence, SyllablePhones};
use crate::pipeline::{par_map_ordered, CsRecord};

#[derive(Debug, Clone)]
pub struct DecodeConfig {
    pub beam_width: usize,
    /// Maximum phone-token edit distance per syllable for fuzzy lookup.
    pub fuzzy_k: usize,
    pub lm_weight: f64,
    pub fuzzy_penalty: f64,
}

impl Default for DecodeConfig {
    fn default() -> DecodeConfig {
        DecodeConfig {
            beam_width: 8,
            fuzzy_k: 1,
            lm_weight: 1.0,
            fuzzy_penalty: 2.0,
        }
    }
}

/// Partial decode state: syllables consumed, words emitted, log-domain score.
#[derive(Debug, Clone)]
pub struct DecodeHypothesis {
    pub consumed: usize,
    pub words: Vec<String>,
    pub score: f64,
    pub edits: usize,
}

impl DecodeHypothesis {
    fn text(&self) -> String {
        self.words.join(" ")
    }
}

/// Candidate extension at one position.
#[derive(Debug, Clone, PartialEq)]
struct Ext {
    len: usize,
    word: String,
    edits: usize,
}

fn span_extensions(
    syllables: &[SyllablePhones],
    at: usize,
    lex: &Lexicon,
    fuzzy_k: usize,
) -> Vec<Ext> {
    let mut out: Vec<Ext> = Vec::new();
    let n = syllables.len();
    for len in 1..=4.min(n - at) {
        let span = &syllables[at..at + len];
        let key = word_key(span);
        if let Some(entries) = lex.lookup(&key) {
            for e in entries {
                out.push(Ext {
                    len,
                    word: e.word.clone(),
                    edits: 0,
                });
            }
        }
        if fuzzy_k > 0 {
            for (_, entry_syls, entries) in lex.keys() {
                if entry_syls.len() != len {
                    continue;
                }
                let mut total = 0usize;
                let mut ok = true;
                for (a, b) in span.iter().zip(entry_syls.iter()) {
                    let d = edit_distance(&a.tokens(), &b.tokens()).distance;
                    if d > fuzzy_k {
                        ok = false;
                        break;
                    }
                    total += d;
                }
                if !ok || total == 0 {
                    continue;
                }
                for e in entries {
                    out.push(Ext {
                        len,
                        word: e.word.clone(),
                        edits: total,
                    });
                }
            }
        }
    }
    // One candidate per (span length, surface), cheapest match first.
    out.sort_by(|a, b| {
        a.len
            .cmp(&b.len)
            .then(a.word.cmp(&b.word))
            .then(a.edits.cmp(&b.edits))
    });
    out.dedup_by(|b, a| a.len == b.len && a.word == b.word);
    out
}

fn better(a: &DecodeHypothesis, b: &DecodeHypothesis) -> std::cmp::Ordering {
    // Higher score first; ties break toward fewer edits, then text.
    b.score
        .partial_cmp(&a.score)
        .expect("scores are finite")
        .then(a.edits.cmp(&b.edits))
        .then(a.text().cmp(&b.text()))
}

/// Beam decode. Returns up to `beam_width` full hypotheses as
/// `(text, score)`, best first. Empty input decodes to `("", 0)`.
pub fn decode(
    phones: &PhoneSequence,
    lex: &Lexicon,
    lm: &NGramModel,
    cfg: &DecodeConfig,
) -> Vec<(String, f64)> {
    let n = phones.syllable_count();
    if n == 0 {
        return vec![(String::new(), 0.0)];
    }
    let g2p = G2pTable::shipped();
    let width = cfg.beam_width.max(1);

    let mut beams: Vec<Vec<DecodeHypothesis>> = vec![Vec::new(); n + 1];
    beams[0].push(DecodeHypothesis {
        consumed: 0,
        words: Vec::new(),
        score: 0.0,
        edits: 0,
    });

    for at in 0..n {
        beams[at].sort_by(better);
        beams[at].truncate(width);
        if beams[at].is_empty() {
            continue;
        }
        let mut exts = span_extensions(&phones.syllables, at, lex, cfg.fuzzy_k);
        if exts.is_empty() {
            // No lexical candidate reaches this position: render the syllable
            // and move on one step.
            exts.push(Ext {
                len: 1,
                word: g2p.render_syllable(&phones.syllables[at]),
                edits: 0,
            });
        }
        let sources = std::mem::take(&mut beams[at]);
        for hyp in &sources {
            let context: Vec<&str> = hyp.words.iter().map(String::as_str).collect();
            for ext in &exts {
                let word_score = cfg.lm_weight * lm.log_prob(&context, &ext.word)
                    - cfg.fuzzy_penalty * ext.edits as f64;
                let mut words = hyp.words.clone();
                words.push(ext.word.clone());
                beams[at + ext.len].push(DecodeHypothesis {
                    consumed: at + ext.len,
                    words,
                    score: hyp.score + word_score,
                    edits: hyp.edits + ext.edits,
                });
            }
        }
        beams[at] = sources;
    }

    let mut finals = std::mem::take(&mut beams[n]);
    finals.sort_by(better);
    let mut seen = std::collections::BTreeSet::new();
    finals.retain(|h| seen.insert(h.text()));
    finals.truncate(width);
    finals.into_iter().map(|h| (h.text(), h.score)).collect()
}

/// Decodes a record stream; emits `(id, best hypothesis)` in input order.
/// Records whose phones fail to parse decode to an empty hypothesis.
pub fn decode_corpus(
    records: &[CsRecord],
    lex: &Lexicon,
    lm: &NGramModel,
    cfg: &DecodeConfig,
    inv: &Inventory,
    jobs: usize,
) -> Vec<(String, String)> {
    par_map_ordered(records.to_vec(), jobs, |_, record| {
        let text = match parse_phone_sequence(&record.phones, inv) {
            Ok(seq) => decode(&seq, lex, lm, cfg)
                .into_iter()
                .next()
                .map(|(t, _)| t)
                .unwrap_or_default(),
            Err(_) => String::new(),
        };
        (record.id.clone(), text)
    })
}
