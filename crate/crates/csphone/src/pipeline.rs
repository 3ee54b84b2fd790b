//! Builds the phone-to-text dataset: English words in code-switched sentences
//! are replaced by Vietnamese syllable variants, the localized text is
//! converted to phones, and records pair those phones with the original
//! reference text (English orthography restored) as the training target.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapt::{AdaptError, EnAdapter};
use crate::g2p::{text_to_phones, G2pError, G2pTable, Lexicon};
use crate::phoneme::serialize_phone_sequence;
use crate::syllable::{classify_tokens, token_core, LangClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Adapt(#[from] AdaptError),
    #[error(transparent)]
    G2p(#[from] G2pError),
}

/// One dataset record. `reference` is the original code-switched text (the
/// decoding target), `localized` replaces each English word with one of its
/// Vietnamese variants, and `phones` is the serialized conversion of the
/// localized text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsRecord {
    pub id: String,
    pub reference: String,
    pub localized: String,
    pub variant_choices: BTreeMap<usize, u32>,
    pub phones: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantMode {
    Rank0,
    Exhaustive,
    Sampled,
}

impl VariantMode {
    pub fn parse(s: &str) -> Option<VariantMode> {
        match s {
            "rank0" => Some(VariantMode::Rank0),
            "exhaustive" => Some(VariantMode::Exhaustive),
            "sampled" => Some(VariantMode::Sampled),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VariantPolicy {
    pub mode: VariantMode,
    pub max_variants_per_sentence: usize,
    pub seed: u64,
}

impl Default for VariantPolicy {
    fn default() -> VariantPolicy {
        VariantPolicy {
            mode: VariantMode::Rank0,
            max_variants_per_sentence: 1,
            seed: 0,
        }
    }
}

/// Tables the pipeline needs.
#[derive(Clone, Copy)]
pub struct PipelineCtx<'a> {
    pub adapter: &'a EnAdapter,
    pub g2p: &'a G2pTable,
}

impl Default for PipelineCtx<'static> {
    fn default() -> Self {
        PipelineCtx {
            adapter: EnAdapter::shipped(),
            g2p: G2pTable::shipped(),
        }
    }
}

/// Replaces the core of a token, keeping surrounding punctuation.
fn splice_token(token: &str, replacement: &str) -> String {
    let core = token_core(token);
    match token.find(core) {
        Some(at) if !core.is_empty() => {
            format!("{}{}{}", &token[..at], replacement, &token[at + core.len()..])
        }
        _ => replacement.to_string(),
    }
}

/// Variant index tuples in lexicographic order (last position fastest).
fn exhaustive_tuples(sizes: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut tuple = vec![0usize; sizes.len()];
    loop {
        out.push(tuple.clone());
        if out.len() >= cap {
            break;
        }
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < sizes[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
    out
}

/// Seeded draws without replacement from the tuple space.
fn sampled_tuples(sizes: &[usize], cap: usize, seed: u64) -> Vec<Vec<usize>> {
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    let want = (cap as u128).min(total) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(want);
    while out.len() < want {
        let tuple: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
        if seen.insert(tuple.clone()) {
            out.push(tuple);
        }
    }
    out
}

/// Localizes one sentence under a policy. `record_seed` drives sampled mode;
/// ids are `prefix-NNN` in emission order.
pub fn localize_sentence(
    sentence: &str,
    policy: &VariantPolicy,
    ctx: &PipelineCtx,
    record_seed: u64,
    id_prefix: &str,
) -> Result<Vec<CsRecord>, PipelineError> {
    let tokens: Vec<String> = sentence.split_whitespace().map(String::from).collect();
    let classes = classify_tokens(sentence, ctx.g2p.syllable_table());
    debug_assert_eq!(tokens.len(), classes.len());

    let mut en_positions: Vec<usize> = Vec::new();
    let mut variants_per_position: Vec<Vec<String>> = Vec::new();
    for (i, tc) in classes.iter().enumerate() {
        if tc.cls == LangClass::English {
            let variants = ctx.adapter.adapt(token_core(&tc.token))?;
            en_positions.push(i);
            variants_per_position.push(variants.iter().map(|v| v.text()).collect());
        }
    }

    let sizes: Vec<usize> = variants_per_position.iter().map(Vec::len).collect();
    let cap = policy.max_variants_per_sentence.max(1);
    let tuples: Vec<Vec<usize>> = match policy.mode {
        VariantMode::Rank0 => vec![vec![0; sizes.len()]],
        VariantMode::Exhaustive => exhaustive_tuples(&sizes, cap),
        VariantMode::Sampled => sampled_tuples(&sizes, cap, record_seed),
    };

    let empty_lexicon = Lexicon::new();
    let mut records = Vec::with_capacity(tuples.len());
    for (k, tuple) in tuples.iter().enumerate() {
        let mut localized_tokens = tokens.clone();
        let mut choices = BTreeMap::new();
        for (slot, &pos) in en_positions.iter().enumerate() {
            let rank = tuple[slot];
            localized_tokens[pos] =
                splice_token(&tokens[pos], &variants_per_position[slot][rank]);
            choices.insert(pos, rank as u32);
        }
        let localized = localized_tokens.join(" ");
        let phones = text_to_phones(&localized, &empty_lexicon, ctx.g2p)?;
        records.push(CsRecord {
            id: format!("{id_prefix}-{k:03}"),
            reference: sentence.to_string(),
            localized,
            variant_choices: choices,
            phones: serialize_phone_sequence(&phones),
        });
    }
    Ok(records)
}

/// A line the corpus builder could not process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub line_no: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusBuild {
    pub records: Vec<CsRecord>,
    pub rejects: Vec<Reject>,
}

/// Order-preserving parallel map; `jobs <= 1` stays sequential.
pub fn par_map_ordered<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(usize, T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.into_iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let n = items.len();
    let chunk = n.div_ceil(jobs);
    let mut indexed: Vec<(usize, T)> = items.into_iter().enumerate().collect();
    let mut chunks: Vec<Vec<(usize, T)>> = Vec::new();
    while !indexed.is_empty() {
        let rest = indexed.split_off(indexed.len().min(chunk));
        chunks.push(std::mem::replace(&mut indexed, rest));
    }
    let f = &f;
    let mut out: Vec<(usize, R)> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|(i, t)| (i, f(i, t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

/// Builds records for a line-oriented corpus. Output order follows input
/// order regardless of `jobs`; failing lines land in `rejects` with 1-based
/// line numbers and never abort the stream. The per-line seed is
/// `policy.seed XOR line-index`.
pub fn build_p2t_corpus<I, S>(
    lines: I,
    policy: &VariantPolicy,
    ctx: &PipelineCtx,
    jobs: usize,
) -> CorpusBuild
where
    I: IntoIterator<Item = S>,
    S: AsRef<str> + Send,
{
    let lines: Vec<S> = lines.into_iter().collect();
    let results = par_map_ordered(lines, jobs, |idx, line| {
        let line = line.as_ref().trim();
        if line.is_empty() {
            return Ok(Vec::new());
        }
        let record_seed = policy.seed ^ idx as u64;
        localize_sentence(line, policy, ctx, record_seed, &format!("{:06}", idx + 1))
    });

    let mut build = CorpusBuild::default();
    for (idx, result) in results.into_iter().enumerate() {
        match result {
            Ok(records) => build.records.extend(records),
            Err(e) => build.rejects.push(Reject {
                line_no: idx + 1,
                reason: e.to_string(),
            }),
        }
    }
    build
}

/// Builds a lexicon covering a corpus: every Vietnamese token directly, every
/// dictionary English word through its adapted variants plus the cluster-kept
/// phone form. English words outside the dictionary are returned separately.
pub fn lexicon_from_corpus<S: AsRef<str>>(lines: &[S], ctx: &PipelineCtx) -> (Lexicon, Vec<String>) {
    let mut lex = Lexicon::new();
    let mut oov: Vec<String> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for line in lines {
        for tc in classify_tokens(line.as_ref(), ctx.g2p.syllable_table()) {
            let core = token_core(&tc.token).to_lowercase();
            if core.is_empty() || !seen.insert(core.clone()) {
                continue;
            }
            match tc.cls {
                LangClass::Vietnamese => {
                    if let Ok(syl) = ctx.g2p.word_to_phones(&core) {
                        lex.insert(&core, crate::g2p::Lang::Vi, 0, &[syl]);
                    }
                }
                LangClass::English => match ctx.adapter.adapt(&core) {
                    Ok(variants) => {
                        let mut next = 0u32;
                        for v in &variants {
                            if let Ok(phones) = v.phones(ctx.g2p) {
                                lex.insert(&core, crate::g2p::Lang::En, next, &phones);
                                next += 1;
                            }
                        }
                        if let Some(ipa) = ctx.adapter.lookup(&core) {
                            if let Ok(join) = ctx.adapter.rank0_phone_join(ipa, ctx.g2p) {
                                lex.insert(&core, crate::g2p::Lang::En, next, &join);
                            }
                        }
                    }
                    Err(_) => oov.push(core),
                },
                LangClass::Other => {}
            }
        }
    }
    (lex, oov)
}

/// Serializes records as JSON lines.
pub fn records_to_jsonl(records: &[CsRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<CsRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
