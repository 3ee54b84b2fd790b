//! Word n-gram language model with absolute-discounting backoff.
//!
//! Discounted mass from each context backs off to the next-lower order; the
//! unigram level reserves part of its mass for the unknown-word symbol, so
//! probabilities over vocabulary-plus-unknown sum to one per context.

use std::collections::HashMap;

use thiserror::Error;

use crate::metrics::normalize_text;
use crate::tables;

pub const DISCOUNT: f64 = 0.75;
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NGramError {
    #[error("the training corpus has no tokens")]
    EmptyCorpus,
    #[error("bad model file: {0}")]
    BadModel(String),
}

#[derive(Debug, Clone)]
pub struct NGramModel {
    order: usize,
    vocab: HashMap<String, u32>,
    words: Vec<String>,
    /// counts[k-1]: k-gram counts. Grams never end in BOS.
    counts: Vec<HashMap<Vec<u32>, u64>>,
    /// (total, distinct continuations) per context, per context length.
    ctx: Vec<HashMap<Vec<u32>, (u64, u64)>>,
}

impl NGramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab_len(&self) -> usize {
        self.words.len()
    }

    fn id_of(&self, token: &str) -> u32 {
        self.vocab
            .get(token)
            .or_else(|| self.vocab.get(UNK))
            .copied()
            .expect("unk is always in the vocabulary")
    }

    /// Event types the model sums to one over: vocabulary minus BOS, which is
    /// context-only.
    #[cfg(test)]
    fn event_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.words.len() as u32).filter(|&id| self.words[id as usize] != BOS)
    }

    /// p(word | context). Unknown words and contexts fall back through the
    /// unknown symbol and lower orders.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let w = self.id_of(word);
        let start = context.len().saturating_sub(self.order - 1);
        let ctx_ids: Vec<u32> = context[start..].iter().map(|t| self.id_of(t)).collect();
        self.prob_ids(&ctx_ids, w)
    }

    fn prob_ids(&self, context: &[u32], w: u32) -> f64 {
        if context.is_empty() {
            let (total, distinct) = self.ctx[0][&Vec::new()];
            let c = self.counts[0].get(&vec![w]).copied().unwrap_or(0) as f64;
            // Uniform floor over event types plus the unknown word.
            let p0 = 1.0 / (distinct as f64 + 1.0);
            let t = total as f64;
            return (c - DISCOUNT).max(0.0) / t + DISCOUNT * distinct as f64 / t * p0;
        }
        let k = context.len();
        match self.ctx.get(k).and_then(|m| m.get(context)) {
            None => self.prob_ids(&context[1..], w),
            Some(&(total, distinct)) => {
                let mut gram = context.to_vec();
                gram.push(w);
                let c = self.counts[k].get(&gram).copied().unwrap_or(0) as f64;
                let t = total as f64;
                (c - DISCOUNT).max(0.0) / t
                    + DISCOUNT * distinct as f64 / t * self.prob_ids(&context[1..], w)
            }
        }
    }

    /// Log probability with the documented floor.
    pub fn log_prob(&self, context: &[&str], word: &str) -> f64 {
        self.prob(context, word).max(1e-10).ln()
    }

    /// Line-oriented count format: a header, then `k<TAB>gram<TAB>count`.
    pub fn to_text(&self) -> String {
        let mut out = format!("ngram-order\t{}\n", self.order);
        for (k, table) in self.counts.iter().enumerate() {
            let mut rows: Vec<(String, u64)> = table
                .iter()
                .map(|(gram, &c)| {
                    let text = gram
                        .iter()
                        .map(|&id| self.words[id as usize].as_str())
                        .collect::<Vec<_>>()
                        .join(" ");
                    (text, c)
                })
                .collect();
            rows.sort();
            for (gram, c) in rows {
                out.push_str(&format!("{}\t{}\t{}\n", k + 1, gram, c));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<NGramModel, NGramError> {
        let mut order = None;
        let mut raw: Vec<(usize, Vec<String>, u64)> = Vec::new();
        for (line, fields) in tables::tsv_rows(text) {
            if fields[0] == "ngram-order" {
                order = fields.get(1).and_then(|s| s.parse().ok());
                continue;
            }
            if fields.len() != 3 {
                return Err(NGramError::BadModel(format!("line {line}: expected 3 fields")));
            }
            let k: usize = fields[0]
                .parse()
                .map_err(|_| NGramError::BadModel(format!("line {line}: bad order")))?;
            let count: u64 = fields[2]
                .parse()
                .map_err(|_| NGramError::BadModel(format!("line {line}: bad count")))?;
            let gram: Vec<String> = fields[1].split_whitespace().map(String::from).collect();
            if gram.len() != k {
                return Err(NGramError::BadModel(format!("line {line}: gram/order mismatch")));
            }
            raw.push((k, gram, count));
        }
        let order = order.ok_or_else(|| NGramError::BadModel("missing header".into()))?;
        if !(1..=4).contains(&order) {
            return Err(NGramError::BadModel(format!("order {order} out of range")));
        }
        let mut model = NGramModel::empty(order);
        for (k, gram, count) in raw {
            if k > order {
                return Err(NGramError::BadModel(format!("{k}-gram above order {order}")));
            }
            let ids: Vec<u32> = gram.iter().map(|t| model.intern(t)).collect();
            *model.counts[k - 1].entry(ids).or_insert(0) += count;
        }
        model.rebuild_contexts();
        if model.ctx[0].get(&Vec::new()).is_none_or(|&(t, _)| t == 0) {
            return Err(NGramError::BadModel("model has no unigram events".into()));
        }
        Ok(model)
    }

    fn empty(order: usize) -> NGramModel {
        let mut model = NGramModel {
            order,
            vocab: HashMap::new(),
            words: Vec::new(),
            counts: vec![HashMap::new(); order],
            ctx: vec![HashMap::new(); order],
        };
        model.intern(UNK);
        model.intern(BOS);
        model.intern(EOS);
        model
    }

    fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.vocab.get(token) {
            return id;
        }
        let id = self.words.len() as u32;
        self.vocab.insert(token.to_string(), id);
        self.words.push(token.to_string());
        id
    }

    fn rebuild_contexts(&mut self) {
        for m in &mut self.ctx {
            m.clear();
        }
        let unigram_total: u64 = self.counts[0].values().sum();
        let unigram_types = self.counts[0].len() as u64;
        self.ctx[0].insert(Vec::new(), (unigram_total, unigram_types));
        for k in 2..=self.order {
            let mut acc: HashMap<Vec<u32>, (u64, u64)> = HashMap::new();
            for (gram, &c) in &self.counts[k - 1] {
                let entry = acc.entry(gram[..k - 1].to_vec()).or_insert((0, 0));
                entry.0 += c;
                entry.1 += 1;
            }
            self.ctx[k - 1] = acc;
        }
    }
}

/// Trains a model from lines of text; each line is one sentence. Tokens are
/// the normalized whitespace tokens the decoder also emits.
pub fn train_ngram<I, S>(lines: I, order: usize) -> Result<NGramModel, NGramError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    assert!((1..=4).contains(&order), "supported orders are 1..=4");
    let mut model = NGramModel::empty(order);
    let bos = model.intern(BOS);
    let eos = model.intern(EOS);
    let mut any = false;
    for line in lines {
        let tokens: Vec<u32> = normalize_text(line.as_ref())
            .split_whitespace()
            .map(|t| model.intern(t))
            .collect();
        if tokens.is_empty() {
            continue;
        }
        any = true;
        let mut stream = vec![bos; order - 1];
        stream.extend(&tokens);
        stream.push(eos);
        let lead = order - 1;
        for k in 1..=order {
            for end in lead + 1..=stream.len() {
                if end < k {
                    continue;
                }
                let gram = &stream[end - k..end];
                *model.counts[k - 1].entry(gram.to_vec()).or_insert(0) += 1;
            }
        }
    }
    if !any {
        return Err(NGramError::EmptyCorpus);
    }
    model.rebuild_contexts();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_is_an_error() {
        let lines: Vec<String> = vec![];
        assert_eq!(train_ngram(lines, 2).unwrap_err(), NGramError::EmptyCorpus);
        assert_eq!(
            train_ngram(["", "  "], 2).unwrap_err(),
            NGramError::EmptyCorpus
        );
    }

    /// Hand-computed on the corpus "a b a b" (events a,b,a,b,</s>):
    /// T=5; types a,b,</s> so V=3 and the uniform floor is 1/4.
    ///   p1(b) = (2-.75)/5 + (.75*3/5)(1/4)          = 0.3625
    ///   p(b|a) = (2-.75)/2 + (.75*1/2)(0.3625)      = 0.7609375
    ///   p(a|a) = 0         + (.75*1/2)(0.3625)      = 0.1359375
    #[test]
    fn bigram_discounting_hand_example() {
        let m = train_ngram(["a b a b"], 2).unwrap();
        assert!((m.prob(&[], "b") - 0.3625).abs() < 1e-12);
        assert!((m.prob(&["a"], "b") - 0.7609375).abs() < 1e-12);
        assert!((m.prob(&["a"], "a") - 0.1359375).abs() < 1e-12);
        assert!(m.prob(&["a"], "b") > m.prob(&["a"], "a"));
    }

    /// Hand-computed for the one-token corpus "x" (events x, </s>):
    /// T=2, V=2, floor 1/3; the direct mass is (1-.75)/2 and x takes its
    /// share of the reserved backoff mass, the rest staying with unk.
    #[test]
    fn unigram_reserves_unk_mass() {
        let m = train_ngram(["x"], 1).unwrap();
        let px = m.prob(&[], "x");
        assert!((px - 0.375).abs() < 1e-12);
        let punk = m.prob(&[], UNK);
        assert!((punk - 0.25).abs() < 1e-12);
        assert!((px + m.prob(&[], EOS) + punk - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_normalize_per_context() {
        let m = train_ngram(
            ["xem cái video này", "cái list này dài", "mua hai lít nước"],
            3,
        )
        .unwrap();
        for context in [
            vec![],
            vec!["cái"],
            vec!["xem", "cái"],
            vec!["unseen"],
            vec!["mua", "hai"],
            vec![BOS],
            vec![BOS, BOS],
        ] {
            let mut total = 0.0;
            for id in m.event_ids() {
                let word = m.words[id as usize].clone();
                total += m.prob(&context, &word);
            }
            assert!(
                (total - 1.0).abs() < 1e-9,
                "context {context:?} sums to {total}"
            );
        }
    }

    #[test]
    fn unseen_context_backs_off() {
        let m = train_ngram(["a b", "b c"], 3).unwrap();
        // Context never seen at order 3 or 2: falls back to unigram.
        let p = m.prob(&["zz", "qq"], "b");
        assert!((p - m.prob(&[], "b")).abs() < 1e-12);
        assert!(p > 0.0);
    }

    #[test]
    fn text_round_trip_preserves_probabilities() {
        let m = train_ngram(["một hai ba", "hai ba bốn", "ba bốn năm"], 2).unwrap();
        let text = m.to_text();
        let re = NGramModel::from_text(&text).unwrap();
        for (ctx, w) in [
            (vec![], "ba"),
            (vec!["hai"], "ba"),
            (vec!["ba"], "bốn"),
            (vec!["một"], "năm"),
        ] {
            assert!((m.prob(&ctx, w) - re.prob(&ctx, w)).abs() < 1e-12, "{ctx:?} {w}");
        }
        assert_eq!(re.to_text(), text);
    }

    #[test]
    fn rejects_malformed_model_text() {
        assert!(NGramModel::from_text("1\ta\t2\n").is_err()); // no header
        assert!(NGramModel::from_text("ngram-order\t9\n1\ta\t1\n").is_err());
        assert!(NGramModel::from_text("ngram-order\t2\n2\ta\t1\n").is_err());
    }
}
