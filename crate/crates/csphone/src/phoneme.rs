//! Extended Vietnamese phone inventory, token grammar, and the bidirectional
//! parser/serializer for phone sequences.
//!
//! A syllable serializes as `onset* nucleus "-" tone [coda]` with single
//! spaces between tokens, e.g. `ə - 0 iz`. Syllables of one word are joined
//! with a `.` token, words with a `|` token. Coda symbols end in the literal
//! marker `z` and are at least two characters long, which keeps them distinct
//! from every onset and nucleus symbol (the onset `z` itself is one char).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::tables;

/// The six lexical tones, in traditional dictionary order.
///
/// Index 0 is the unmarked level tone and index 4 the rising tone; the
/// remaining indices follow the dictionary order ngang, huyền, hỏi, ngã,
/// sắc, nặng.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tone {
    Ngang = 0,
    Huyen = 1,
    Hoi = 2,
    Nga = 3,
    Sac = 4,
    Nang = 5,
}

impl Tone {
    pub const ALL: [Tone; 6] = [
        Tone::Ngang,
        Tone::Huyen,
        Tone::Hoi,
        Tone::Nga,
        Tone::Sac,
        Tone::Nang,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(index: u8) -> Option<Tone> {
        Tone::ALL.get(index as usize).copied()
    }

    /// Vietnamese tone name.
    pub fn name(self) -> &'static str {
        match self {
            Tone::Ngang => "ngang",
            Tone::Huyen => "huyền",
            Tone::Hoi => "hỏi",
            Tone::Nga => "ngã",
            Tone::Sac => "sắc",
            Tone::Nang => "nặng",
        }
    }
}

impl fmt::Display for Tone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// What role a stream token plays. The tone marker `-` and the tone digits
/// both classify as `ToneMark`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Onset,
    Nucleus,
    ToneMark,
    Coda,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonemeError {
    #[error("unknown phone token `{symbol}` at position {position}")]
    UnknownToken { symbol: String, position: usize },
    #[error("malformed syllable at token position {position}: {reason}")]
    MalformedSyllable { position: usize, reason: String },
}

fn malformed(position: usize, reason: impl Into<String>) -> PhonemeError {
    PhonemeError::MalformedSyllable {
        position,
        reason: reason.into(),
    }
}

/// The phone inventory: the onset, nucleus and coda symbol sets.
///
/// Loaded from a `kind<TAB>symbol<TAB>notes` table; `Inventory::shipped()`
/// returns the embedded default.
#[derive(Debug, Clone)]
pub struct Inventory {
    onsets: Vec<String>,
    nuclei: Vec<String>,
    codas: Vec<String>,
    onset_set: BTreeSet<String>,
    nucleus_set: BTreeSet<String>,
    coda_set: BTreeSet<String>,
}

impl Inventory {
    pub fn from_tsv(text: &str) -> Result<Inventory, String> {
        let mut onsets = Vec::new();
        let mut nuclei = Vec::new();
        let mut codas = Vec::new();
        for (line, fields) in tables::tsv_rows(text) {
            if fields.len() < 2 {
                return Err(format!("inventory line {line}: expected kind<TAB>symbol"));
            }
            let symbol = fields[1].to_string();
            match fields[0] {
                "onset" => onsets.push(symbol),
                "nucleus" => nuclei.push(symbol),
                "coda" => codas.push(symbol),
                other => return Err(format!("inventory line {line}: unknown kind `{other}`")),
            }
        }
        let inv = Inventory {
            onset_set: onsets.iter().cloned().collect(),
            nucleus_set: nuclei.iter().cloned().collect(),
            coda_set: codas.iter().cloned().collect(),
            onsets,
            nuclei,
            codas,
        };
        inv.check_marker_rule()?;
        Ok(inv)
    }

    /// The inventory embedded in the binary.
    pub fn shipped() -> &'static Inventory {
        static SHIPPED: OnceLock<Inventory> = OnceLock::new();
        SHIPPED.get_or_init(|| {
            Inventory::from_tsv(tables::INVENTORY_TSV).expect("shipped inventory is well-formed")
        })
    }

    /// Codas must be `len >= 2` and end in `z`; nothing else may look like one.
    fn check_marker_rule(&self) -> Result<(), String> {
        for c in &self.codas {
            if c.chars().count() < 2 || !c.ends_with('z') {
                return Err(format!("coda `{c}` violates the z-marker rule"));
            }
        }
        for s in self.onsets.iter().chain(self.nuclei.iter()) {
            if s.chars().count() >= 2 && s.ends_with('z') {
                return Err(format!("non-coda `{s}` looks like a coda"));
            }
        }
        Ok(())
    }

    pub fn onsets(&self) -> &[String] {
        &self.onsets
    }

    pub fn nuclei(&self) -> &[String] {
        &self.nuclei
    }

    pub fn codas(&self) -> &[String] {
        &self.codas
    }

    pub fn kind_of(&self, symbol: &str) -> Option<TokenKind> {
        if symbol == "-" || matches!(symbol, "0" | "1" | "2" | "3" | "4" | "5") {
            Some(TokenKind::ToneMark)
        } else if self.onset_set.contains(symbol) {
            Some(TokenKind::Onset)
        } else if self.nucleus_set.contains(symbol) {
            Some(TokenKind::Nucleus)
        } else if self.coda_set.contains(symbol) {
            Some(TokenKind::Coda)
        } else {
            None
        }
    }
}

/// Classifies one stream token, or reports it as unknown.
pub fn classify_token(symbol: &str, inv: &Inventory) -> Result<TokenKind, PhonemeError> {
    inv.kind_of(symbol).ok_or_else(|| PhonemeError::UnknownToken {
        symbol: symbol.to_string(),
        position: 0,
    })
}

/// One syllable in the extended phone set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyllablePhones {
    /// Zero, one or two onset tokens (a medial glide or an adapted English
    /// cluster occupies the second slot).
    pub onsets: Vec<String>,
    pub nucleus: String,
    pub tone: Tone,
    pub coda: Option<String>,
}

impl SyllablePhones {
    pub fn new(
        onsets: Vec<String>,
        nucleus: String,
        tone: Tone,
        coda: Option<String>,
    ) -> SyllablePhones {
        SyllablePhones {
            onsets,
            nucleus,
            tone,
            coda,
        }
    }

    /// All tokens of the syllable in stream order, tone as its digit.
    /// The `-` marker is serialization syntax, not a token.
    pub fn tokens(&self) -> Vec<String> {
        let mut out: Vec<String> = self.onsets.clone();
        out.push(self.nucleus.clone());
        out.push(self.tone.index().to_string());
        if let Some(c) = &self.coda {
            out.push(c.clone());
        }
        out
    }

    fn write_to(&self, out: &mut String) {
        for o in &self.onsets {
            out.push_str(o);
            out.push(' ');
        }
        out.push_str(&self.nucleus);
        out.push_str(" - ");
        out.push_str(&self.tone.index().to_string());
        if let Some(c) = &self.coda {
            out.push(' ');
            out.push_str(c);
        }
    }

    pub fn validate(&self, inv: &Inventory) -> Result<(), PhonemeError> {
        if self.onsets.len() > 2 {
            return Err(malformed(0, "more than two onsets"));
        }
        for o in &self.onsets {
            if inv.kind_of(o) != Some(TokenKind::Onset) {
                return Err(PhonemeError::UnknownToken {
                    symbol: o.clone(),
                    position: 0,
                });
            }
        }
        if inv.kind_of(&self.nucleus) != Some(TokenKind::Nucleus) {
            return Err(PhonemeError::UnknownToken {
                symbol: self.nucleus.clone(),
                position: 0,
            });
        }
        if let Some(c) = &self.coda {
            if inv.kind_of(c) != Some(TokenKind::Coda) {
                return Err(PhonemeError::UnknownToken {
                    symbol: c.clone(),
                    position: 0,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for SyllablePhones {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_to(&mut s);
        write!(f, "{s}")
    }
}

/// An ordered run of syllables with word-start indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhoneSequence {
    pub syllables: Vec<SyllablePhones>,
    /// Strictly increasing; first element 0 whenever syllables is non-empty.
    pub word_boundaries: Vec<usize>,
}

impl PhoneSequence {
    pub fn empty() -> PhoneSequence {
        PhoneSequence::default()
    }

    /// Builds a sequence from per-word syllable groups. Empty words are
    /// skipped.
    pub fn from_words<I>(words: I) -> PhoneSequence
    where
        I: IntoIterator<Item = Vec<SyllablePhones>>,
    {
        let mut seq = PhoneSequence::empty();
        for word in words {
            seq.push_word(word);
        }
        seq
    }

    pub fn push_word(&mut self, word: Vec<SyllablePhones>) {
        if word.is_empty() {
            return;
        }
        self.word_boundaries.push(self.syllables.len());
        self.syllables.extend(word);
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Word slices in order.
    pub fn words(&self) -> Vec<&[SyllablePhones]> {
        let mut out = Vec::with_capacity(self.word_boundaries.len());
        for (i, &start) in self.word_boundaries.iter().enumerate() {
            let end = self
                .word_boundaries
                .get(i + 1)
                .copied()
                .unwrap_or(self.syllables.len());
            out.push(&self.syllables[start..end]);
        }
        out
    }

    /// Every phone token in order (tones included, separators excluded);
    /// this is the unit the phoneme error rate counts.
    pub fn phone_tokens(&self) -> Vec<String> {
        self.syllables.iter().flat_map(|s| s.tokens()).collect()
    }

    pub fn validate(&self, inv: &Inventory) -> Result<(), PhonemeError> {
        for s in &self.syllables {
            s.validate(inv)?;
        }
        let n = self.syllables.len();
        if n == 0 {
            if !self.word_boundaries.is_empty() {
                return Err(malformed(0, "word boundaries in empty sequence"));
            }
            return Ok(());
        }
        if self.word_boundaries.first() != Some(&0) {
            return Err(malformed(0, "first word boundary must be 0"));
        }
        for w in self.word_boundaries.windows(2) {
            if w[1] <= w[0] {
                return Err(malformed(0, "word boundaries must strictly increase"));
            }
        }
        if self.word_boundaries.last().copied().unwrap_or(0) >= n {
            return Err(malformed(0, "word boundary past the last syllable"));
        }
        Ok(())
    }
}

/// Parses the space-separated token form.
pub fn parse_phone_sequence(text: &str, inv: &Inventory) -> Result<PhoneSequence, PhonemeError> {
    #[derive(Default)]
    struct Partial {
        onsets: Vec<String>,
        nucleus: Option<String>,
        dash: bool,
        tone: Option<Tone>,
        coda: Option<String>,
        started: bool,
    }

    impl Partial {
        fn finish(&mut self, pos: usize) -> Result<SyllablePhones, PhonemeError> {
            let nucleus = self
                .nucleus
                .take()
                .ok_or_else(|| malformed(pos, "syllable has no nucleus"))?;
            let tone = self
                .tone
                .take()
                .ok_or_else(|| malformed(pos, "syllable has no tone"))?;
            let syl = SyllablePhones::new(std::mem::take(&mut self.onsets), nucleus, tone, self.coda.take());
            self.dash = false;
            self.started = false;
            Ok(syl)
        }
    }

    let mut seq = PhoneSequence::empty();
    let mut cur = Partial::default();
    let mut word_start = true;

    let push_syllable =
        |seq: &mut PhoneSequence, cur: &mut Partial, word_start: &mut bool, pos: usize| {
            let syl = cur.finish(pos)?;
            if *word_start {
                seq.word_boundaries.push(seq.syllables.len());
                *word_start = false;
            }
            seq.syllables.push(syl);
            Ok::<(), PhonemeError>(())
        };

    for (pos, token) in text.split_whitespace().enumerate() {
        match token {
            "." | "|" => {
                if !cur.started {
                    return Err(malformed(pos, "separator without a preceding syllable"));
                }
                push_syllable(&mut seq, &mut cur, &mut word_start, pos)?;
                if token == "|" {
                    word_start = true;
                }
            }
            "-" => {
                if cur.nucleus.is_none() {
                    return Err(malformed(pos, "tone marker before nucleus"));
                }
                if cur.dash || cur.tone.is_some() {
                    return Err(malformed(pos, "duplicate tone marker"));
                }
                cur.dash = true;
            }
            _ => {
                let kind = inv.kind_of(token).ok_or_else(|| PhonemeError::UnknownToken {
                    symbol: token.to_string(),
                    position: pos,
                })?;
                match kind {
                    TokenKind::ToneMark => {
                        // Tone digits; the bare "-" case is handled above.
                        if !cur.dash {
                            return Err(malformed(pos, "tone digit without `-` marker"));
                        }
                        if cur.tone.is_some() {
                            return Err(malformed(pos, "duplicate tone digit"));
                        }
                        let idx: u8 = token.parse().expect("tone digit");
                        cur.tone = Some(Tone::from_index(idx).expect("digit in 0..=5"));
                        cur.started = true;
                    }
                    TokenKind::Onset => {
                        if cur.tone.is_some() || cur.dash {
                            return Err(malformed(pos, "missing syllable separator before onset"));
                        }
                        if cur.nucleus.is_some() {
                            return Err(malformed(pos, "onset after nucleus"));
                        }
                        if cur.onsets.len() == 2 {
                            return Err(malformed(pos, "more than two onsets"));
                        }
                        cur.onsets.push(token.to_string());
                        cur.started = true;
                    }
                    TokenKind::Nucleus => {
                        if cur.nucleus.is_some() || cur.tone.is_some() {
                            return Err(malformed(pos, "missing syllable separator before nucleus"));
                        }
                        cur.nucleus = Some(token.to_string());
                        cur.started = true;
                    }
                    TokenKind::Coda => {
                        if cur.nucleus.is_none() {
                            return Err(malformed(pos, "coda before nucleus"));
                        }
                        if cur.tone.is_none() {
                            return Err(malformed(pos, "coda before tone"));
                        }
                        if cur.coda.is_some() {
                            return Err(malformed(pos, "duplicate coda"));
                        }
                        cur.coda = Some(token.to_string());
                        cur.started = true;
                    }
                }
            }
        }
    }

    if cur.started {
        let pos = text.split_whitespace().count();
        push_syllable(&mut seq, &mut cur, &mut word_start, pos)?;
    } else if seq.syllables.is_empty() {
        return Err(malformed(0, "empty phone sequence"));
    } else {
        return Err(malformed(0, "trailing separator"));
    }

    Ok(seq)
}

/// Canonical single-space serialization; inverse of [`parse_phone_sequence`].
pub fn serialize_phone_sequence(seq: &PhoneSequence) -> String {
    let mut out = String::new();
    for (w, word) in seq.words().iter().enumerate() {
        if w > 0 {
            out.push_str(" | ");
        }
        for (s, syl) in word.iter().enumerate() {
            if s > 0 {
                out.push_str(" . ");
            }
            syl.write_to(&mut out);
        }
    }
    out
}
