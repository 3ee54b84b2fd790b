//! Phoneme-centric toolkit for Vietnamese-English code-switched text.
//!
//! The crate covers the desk-scale pipeline end to end: Vietnamese syllable
//! analysis ([`syllable`]), an extended phone representation ([`phoneme`]),
//! English-to-Vietnamese pronunciation adaptation ([`adapt`]), dataset
//! construction ([`pipeline`]), a seeded noisy channel standing in for an
//! acoustic phone recognizer ([`noise`]), lexicon + n-gram beam decoding from
//! phones back to text ([`decoder`], [`ngram`]), and WER/PER scoring
//! ([`metrics`]).

pub mod adapt;
pub mod decoder;
pub mod g2p;
pub mod metrics;
pub mod ngram;
pub mod noise;
pub mod phoneme;
pub mod pipeline;
pub mod syllable;
pub mod tables;

pub use g2p::{build_lexicon, text_to_phones, G2pTable, Lang, Lexicon, WordSpec};
pub use phoneme::{
    classify_token, parse_phone_sequence, serialize_phone_sequence, Inventory, PhoneSequence,
    SyllablePhones, Tone,
};
pub use syllable::{classify_tokens, compose, decompose, strip_tone, OrthoSyllable, SyllableTable};
