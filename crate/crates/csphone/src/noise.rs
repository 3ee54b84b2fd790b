//! Seeded noisy channel over phone sequences, standing in for an acoustic
//! phone recognizer: class-aware substitutions, insertions and deletions
//! that keep the output grammatically valid.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::phoneme::{Inventory, PhoneSequence, SyllablePhones, Tone};
use crate::tables;

/// Substitution/insertion/deletion rates plus a partition of all tokens
/// (tone indices included) into confusable classes.
#[derive(Debug, Clone)]
pub struct ConfusionModel {
    pub sub_rate: f64,
    pub ins_rate: f64,
    pub del_rate: f64,
    pub within_class_bias: f64,
    classes: Vec<Vec<String>>,
    class_of: HashMap<String, usize>,
}

impl ConfusionModel {
    pub fn from_tsv(text: &str) -> Result<ConfusionModel, String> {
        let mut sub_rate = None;
        let mut ins_rate = None;
        let mut del_rate = None;
        let mut bias = None;
        let mut classes: Vec<Vec<String>> = Vec::new();
        for (line, fields) in tables::tsv_rows(text) {
            match fields[0] {
                "sub_rate" | "ins_rate" | "del_rate" | "within_class_bias" => {
                    let v: f64 = fields
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| format!("noise model line {line}: bad number"))?;
                    match fields[0] {
                        "sub_rate" => sub_rate = Some(v),
                        "ins_rate" => ins_rate = Some(v),
                        "del_rate" => del_rate = Some(v),
                        _ => bias = Some(v),
                    }
                }
                "class" => {
                    if fields.len() < 3 {
                        return Err(format!("noise model line {line}: class needs tokens"));
                    }
                    classes.push(fields[2].split_whitespace().map(String::from).collect());
                }
                other => return Err(format!("noise model line {line}: unknown key `{other}`")),
            }
        }
        let mut class_of = HashMap::new();
        for (i, class) in classes.iter().enumerate() {
            for token in class {
                if class_of.insert(token.clone(), i).is_some() {
                    return Err(format!("token `{token}` appears in two classes"));
                }
            }
        }
        let model = ConfusionModel {
            sub_rate: sub_rate.ok_or("missing sub_rate")?,
            ins_rate: ins_rate.ok_or("missing ins_rate")?,
            del_rate: del_rate.ok_or("missing del_rate")?,
            within_class_bias: bias.ok_or("missing within_class_bias")?,
            classes,
            class_of,
        };
        model.validate(Inventory::shipped())?;
        Ok(model)
    }

    pub fn validate(&self, inv: &Inventory) -> Result<(), String> {
        for r in [self.sub_rate, self.ins_rate, self.del_rate] {
            if !(0.0..=1.0).contains(&r) {
                return Err(format!("rate {r} outside [0,1]"));
            }
        }
        if self.sub_rate + self.ins_rate + self.del_rate > 1.0 {
            return Err("rates sum past 1".to_string());
        }
        if self.within_class_bias < 1.0 {
            return Err("within_class_bias must be >= 1".to_string());
        }
        let mut expected: Vec<String> = inv
            .onsets()
            .iter()
            .chain(inv.nuclei().iter())
            .chain(inv.codas().iter())
            .cloned()
            .collect();
        expected.extend((0..6).map(|t| t.to_string()));
        for token in &expected {
            if !self.class_of.contains_key(token) {
                return Err(format!("token `{token}` not covered by any class"));
            }
        }
        let covered: usize = self.classes.iter().map(Vec::len).sum();
        if covered != expected.len() {
            return Err(format!(
                "classes list {covered} tokens, inventory has {}",
                expected.len()
            ));
        }
        Ok(())
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn class_of(&self, token: &str) -> Option<usize> {
        self.class_of.get(token).copied()
    }

    /// Zero-noise copy of this model, useful as a pipeline baseline.
    pub fn with_rates(&self, sub: f64, ins: f64, del: f64) -> ConfusionModel {
        ConfusionModel {
            sub_rate: sub,
            ins_rate: ins,
            del_rate: del,
            ..self.clone()
        }
    }
}

/// The shipped default model (rates 0.08/0.01/0.02, bias 4).
pub fn default_confusion_model() -> &'static ConfusionModel {
    static SHIPPED: OnceLock<ConfusionModel> = OnceLock::new();
    SHIPPED.get_or_init(|| {
        ConfusionModel::from_tsv(tables::NOISE_DEFAULT_TSV)
            .expect("shipped noise model is well-formed")
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Event {
    Keep,
    Sub,
    Del,
}

fn draw_event(rng: &mut ChaCha8Rng, m: &ConfusionModel) -> Event {
    let u: f64 = rng.gen();
    if u < m.sub_rate {
        Event::Sub
    } else if u < m.sub_rate + m.del_rate {
        Event::Del
    } else {
        Event::Keep
    }
}

/// Class-biased draw of a same-kind replacement, never the original.
fn substitute(rng: &mut ChaCha8Rng, m: &ConfusionModel, candidates: &[String], current: &str) -> String {
    let pool: Vec<&String> = candidates.iter().filter(|c| c.as_str() != current).collect();
    debug_assert!(!pool.is_empty());
    let current_class = m.class_of(current);
    let weights: Vec<f64> = pool
        .iter()
        .map(|c| {
            if m.class_of(c).is_some() && m.class_of(c) == current_class {
                m.within_class_bias
            } else {
                1.0
            }
        })
        .collect();
    let dist = WeightedIndex::new(&weights).expect("non-empty candidate pool");
    pool[dist.sample(rng)].clone()
}

fn uniform_pick(rng: &mut ChaCha8Rng, candidates: &[String]) -> String {
    candidates[rng.gen_range(0..candidates.len())].clone()
}

/// Applies the channel. Substitutions respect token kind (a coda is replaced
/// only by a coda, a tone only by another tone), deleting a nucleus deletes
/// its whole syllable, and insertions pick a token valid at the insertion
/// point, so the output always re-parses. Deterministic given the seed.
pub fn corrupt(
    seq: &PhoneSequence,
    m: &ConfusionModel,
    seed: u64,
    inv: &Inventory,
) -> PhoneSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tones: Vec<String> = (0..6).map(|t| t.to_string()).collect();
    let mut words_out: Vec<Vec<SyllablePhones>> = Vec::new();

    for word in seq.words() {
        let mut word_out: Vec<SyllablePhones> = Vec::new();
        for syl in word {
            let mut onsets: Vec<String> = Vec::new();
            for onset in &syl.onsets {
                match draw_event(&mut rng, m) {
                    Event::Keep => onsets.push(onset.clone()),
                    Event::Sub => onsets.push(substitute(&mut rng, m, inv.onsets(), onset)),
                    Event::Del => {}
                }
            }
            if onsets.len() < 2 && rng.gen::<f64>() < m.ins_rate {
                onsets.push(uniform_pick(&mut rng, inv.onsets()));
            }

            let nucleus = match draw_event(&mut rng, m) {
                Event::Keep => syl.nucleus.clone(),
                Event::Sub => substitute(&mut rng, m, inv.nuclei(), &syl.nucleus),
                // A syllable cannot survive without its nucleus.
                Event::Del => continue,
            };

            let tone_token = syl.tone.index().to_string();
            let tone = match draw_event(&mut rng, m) {
                Event::Sub => {
                    let t = substitute(&mut rng, m, &tones, &tone_token);
                    Tone::from_index(t.parse().expect("tone digit")).expect("tone in range")
                }
                // Tone marks are substitutable but not removable.
                Event::Keep | Event::Del => syl.tone,
            };

            let coda = match &syl.coda {
                Some(c) => match draw_event(&mut rng, m) {
                    Event::Keep => Some(c.clone()),
                    Event::Sub => Some(substitute(&mut rng, m, inv.codas(), c)),
                    Event::Del => None,
                },
                None => {
                    if rng.gen::<f64>() < m.ins_rate {
                        Some(uniform_pick(&mut rng, inv.codas()))
                    } else {
                        None
                    }
                }
            };

            word_out.push(SyllablePhones::new(onsets, nucleus, tone, coda));
        }
        words_out.push(word_out);
    }
    PhoneSequence::from_words(words_out)
}

/// Uniformly random grammatical sequence, for channel calibration and tests.
pub fn random_phone_sequence(
    inv: &Inventory,
    rng: &mut ChaCha8Rng,
    syllables_per_word: usize,
    words: usize,
) -> PhoneSequence {
    let mut out: Vec<Vec<SyllablePhones>> = Vec::new();
    for _ in 0..words {
        let mut word = Vec::new();
        for _ in 0..syllables_per_word.max(1) {
            let n_onsets = rng.gen_range(0..=2);
            let onsets = (0..n_onsets)
                .map(|_| uniform_pick(rng, inv.onsets()))
                .collect();
            let nucleus = uniform_pick(rng, inv.nuclei());
            let tone = Tone::from_index(rng.gen_range(0..6)).expect("tone in range");
            let coda = if rng.gen::<bool>() {
                Some(uniform_pick(rng, inv.codas()))
            } else {
                None
            };
            word.push(SyllablePhones::new(onsets, nucleus, tone, coda));
        }
        out.push(word);
    }
    PhoneSequence::from_words(out)
}
