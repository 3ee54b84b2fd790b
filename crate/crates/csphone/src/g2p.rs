//! Grapheme-to-phoneme conversion for Vietnamese text and the invertible
//! pronunciation lexicon used by the phone-to-text decoder.
//!
//! Onset values follow the Hanoi variety; `Dialect::NorthStrict` additionally
//! merges r into z. Mappings not pinned by the shipped conversion table are
//! tagged `extension` in the data files.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::metrics::normalize_text;
use crate::phoneme::{
    parse_phone_sequence, serialize_phone_sequence, Inventory, PhoneSequence, SyllablePhones,
};
use crate::syllable::{
    classify_tokens, decompose, harmonize_onset, strip_tone, LangClass, OrthoSyllable,
    SyllableError, SyllableTable,
};
use crate::tables;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum G2pError {
    #[error("no phone mapping for grapheme `{0}`")]
    UnmappedGrapheme(String),
    #[error("English word without a lexicon entry: `{0}`")]
    OovEnglishWord(String),
    #[error("in `{word}`: {source}")]
    Word {
        word: String,
        #[source]
        source: SyllableError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    #[default]
    Northern,
    NorthStrict,
}

/// Onset grapheme map plus the rime table (which carries its phone columns).
#[derive(Debug, Clone)]
pub struct G2pTable {
    table: SyllableTable,
    onset_map: BTreeMap<String, Vec<String>>,
    /// onset phone -> preferred grapheme (first table row wins).
    rev_onset: BTreeMap<String, String>,
    dialect: Dialect,
}

impl G2pTable {
    pub fn new(dialect: Dialect) -> G2pTable {
        G2pTable::from_tsv(tables::ONSETS_TSV, tables::RIMES_TSV, dialect)
            .expect("shipped g2p tables are well-formed")
    }

    pub fn from_tsv(
        onsets_tsv: &str,
        rimes_tsv: &str,
        dialect: Dialect,
    ) -> Result<G2pTable, String> {
        let table = SyllableTable::from_tsv(onsets_tsv, rimes_tsv)?;
        let mut onset_map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut overrides: Vec<(String, Vec<String>)> = Vec::new();
        let mut rev_onset: BTreeMap<String, String> = BTreeMap::new();
        for (line, fields) in tables::tsv_rows(onsets_tsv) {
            if fields.len() < 3 {
                return Err(format!("onset table line {line}: expected 3 fields"));
            }
            let grapheme = fields[0].to_string();
            let phones: Vec<String> = fields[1].split_whitespace().map(String::from).collect();
            match fields[2] {
                "north-strict" => overrides.push((grapheme, phones)),
                _ => {
                    if phones.len() == 1 {
                        rev_onset.entry(phones[0].clone()).or_insert_with(|| grapheme.clone());
                    }
                    onset_map.entry(grapheme).or_insert(phones);
                }
            }
        }
        if dialect == Dialect::NorthStrict {
            for (grapheme, phones) in overrides {
                onset_map.insert(grapheme, phones);
            }
        }
        Ok(G2pTable {
            table,
            onset_map,
            rev_onset,
            dialect,
        })
    }

    /// The default northern-dialect table.
    pub fn shipped() -> &'static G2pTable {
        static SHIPPED: OnceLock<G2pTable> = OnceLock::new();
        SHIPPED.get_or_init(|| G2pTable::new(Dialect::Northern))
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn syllable_table(&self) -> &SyllableTable {
        &self.table
    }

    pub fn onset_phones(&self, grapheme: &str) -> Option<&[String]> {
        self.onset_map.get(grapheme).map(|v| v.as_slice())
    }

    /// Converts one parsed syllable. The tone is copied verbatim.
    pub fn syllable_to_phones(&self, s: &OrthoSyllable) -> Result<SyllablePhones, G2pError> {
        let mut onsets: Vec<String> = Vec::new();
        if !s.onset.is_empty() {
            onsets.extend(
                self.onset_map
                    .get(&s.onset)
                    .ok_or_else(|| G2pError::UnmappedGrapheme(s.onset.clone()))?
                    .iter()
                    .cloned(),
            );
        }
        if s.medial.is_some() {
            onsets.push("w".to_string());
        }
        let row = self
            .table
            .rime_by_parts(s.medial.as_deref(), &s.nucleus, s.coda.as_deref())
            .ok_or_else(|| G2pError::UnmappedGrapheme(s.rime_spelling()))?;
        Ok(SyllablePhones::new(
            onsets,
            row.nucleus_phone.clone(),
            s.tone,
            row.coda_phone.clone(),
        ))
    }

    /// Converts an (onset graphemes, rime-with-tone) pair without requiring a
    /// single well-formed orthographic syllable. Adapted English material can
    /// keep a two-onset cluster here ("p","l" + "ây").
    pub fn fragments_to_phones(
        &self,
        onset_graphemes: &[&str],
        rime: &str,
    ) -> Result<SyllablePhones, G2pError> {
        let (base, tone) = strip_tone(rime).map_err(|e| G2pError::Word {
            word: rime.to_string(),
            source: e,
        })?;
        let row = self
            .table
            .rime_by_spelling(&base)
            .ok_or_else(|| G2pError::UnmappedGrapheme(base.clone()))?;
        let mut onsets = Vec::new();
        for g in onset_graphemes {
            onsets.extend(
                self.onset_map
                    .get(*g)
                    .ok_or_else(|| G2pError::UnmappedGrapheme(g.to_string()))?
                    .iter()
                    .cloned(),
            );
        }
        if row.medial.is_some() {
            onsets.push("w".to_string());
        }
        Ok(SyllablePhones::new(
            onsets,
            row.nucleus_phone.clone(),
            tone,
            row.coda_phone.clone(),
        ))
    }

    /// Converts one orthographic token (a Vietnamese syllable).
    pub fn word_to_phones(&self, token: &str) -> Result<SyllablePhones, G2pError> {
        let s = decompose(token, &self.table).map_err(|e| G2pError::Word {
            word: token.to_string(),
            source: e,
        })?;
        self.syllable_to_phones(&s)
    }

    /// Deterministic orthographic rendering of one phone syllable; inverse of
    /// the grapheme maps, total over every grammatical syllable. Used as the
    /// decoder fallback, so it must produce a plausible spelling even for
    /// phone combinations no real rime covers (the nearest rime wins; a tone
    /// that contradicts a checked rime is raised to sắc).
    pub fn render_syllable(&self, syl: &SyllablePhones) -> String {
        let (main_onsets, has_glide) = match syl.onsets.as_slice() {
            [rest @ .., last] if last == "w" => (rest, true),
            other => (other, false),
        };

        // Candidate rimes, best first: exact phones with the medial the glide
        // asks for, then exact phones without it, then coda dropped, then the
        // long-vowel equivalent for nuclei that lack an open rime.
        let mut rows: Vec<&crate::syllable::RimeRow> = Vec::new();
        let mut push_matching = |nucleus: &str, coda: Option<&str>, want_medial: Option<bool>| {
            for row in self.table.rimes() {
                let medial_ok = match want_medial {
                    Some(w) => row.medial.is_some() == w,
                    None => true,
                };
                if row.nucleus_phone == nucleus
                    && row.coda_phone.as_deref() == coda
                    && medial_ok
                {
                    rows.push(row);
                }
            }
        };
        let coda = syl.coda.as_deref();
        if has_glide && main_onsets.first().map(String::as_str) != Some("k") {
            push_matching(&syl.nucleus, coda, Some(true));
        }
        push_matching(&syl.nucleus, coda, Some(false));
        push_matching(&syl.nucleus, coda, None);
        push_matching(&syl.nucleus, None, None);
        let equivalent = match syl.nucleus.as_str() {
            "ə" => Some("əː"),
            "a" => Some("aː"),
            _ => None,
        };
        if let Some(eq) = equivalent {
            push_matching(eq, coda, None);
            push_matching(eq, None, None);
        }

        for row in rows {
            let tone = if row.has_stop_coda()
                && !matches!(syl.tone, crate::phoneme::Tone::Sac | crate::phoneme::Tone::Nang)
            {
                crate::phoneme::Tone::Sac
            } else {
                syl.tone
            };
            let first = row.spelling.chars().next().unwrap_or('a');
            let onset = match main_onsets {
                [] => String::new(),
                [one] => {
                    let g = self.rev_onset.get(one).cloned().unwrap_or_default();
                    if has_glide && one == "k" && row.medial.is_none() {
                        "qu".to_string()
                    } else {
                        harmonize_onset(&g, first)
                    }
                }
                _ => {
                    // Two non-glide onsets: render the leading ones as reduced
                    // syllables, mirroring how cluster loans are written out.
                    let mut out = String::new();
                    for o in &main_onsets[..main_onsets.len() - 1] {
                        let g = self.rev_onset.get(o.as_str()).cloned().unwrap_or_default();
                        out.push_str(&g);
                        out.push_str("ơ ");
                    }
                    let last = &main_onsets[main_onsets.len() - 1];
                    let g = self.rev_onset.get(last.as_str()).cloned().unwrap_or_default();
                    out.push_str(&harmonize_onset(&g, first));
                    out
                }
            };
            let parts = OrthoSyllable::from_parts(
                onset.rsplit(' ').next().unwrap_or(&onset),
                row.medial.as_deref(),
                &row.nucleus,
                row.coda.as_deref(),
                tone,
                &self.table,
            );
            if let Ok(s) = parts {
                if let Some(prefix) = onset.rfind(' ') {
                    return format!("{}{}", &onset[..prefix + 1], s.raw);
                }
                return s.raw;
            }
        }
        // No rime row fits at all; emit the bare nucleus spelling.
        syl.nucleus.clone()
    }
}

/// Word language tag carried by lexicon entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lang {
    Vi,
    En,
}

impl Lang {
    pub fn as_str(self) -> &'static str {
        match self {
            Lang::Vi => "vi",
            Lang::En => "en",
        }
    }

    pub fn parse(s: &str) -> Option<Lang> {
        match s {
            "vi" => Some(Lang::Vi),
            "en" => Some(Lang::En),
            _ => None,
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexEntry {
    pub word: String,
    pub lang: Lang,
    pub variant: u32,
}

/// Serialized phone key of one word (syllables joined by the `.` separator).
pub fn word_key(syllables: &[SyllablePhones]) -> String {
    let seq = PhoneSequence::from_words([syllables.to_vec()]);
    serialize_phone_sequence(&seq)
}

/// Invertible pronunciation index: phone key -> surface words and
/// word -> phone keys in variant order.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    by_key: BTreeMap<String, Vec<LexEntry>>,
    by_word: BTreeMap<String, Vec<String>>,
    key_syllables: BTreeMap<String, Vec<SyllablePhones>>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn insert(&mut self, word: &str, lang: Lang, variant: u32, syllables: &[SyllablePhones]) {
        let key = word_key(syllables);
        let entry = LexEntry {
            word: word.to_string(),
            lang,
            variant,
        };
        let entries = self.by_key.entry(key.clone()).or_default();
        if !entries.contains(&entry) {
            entries.push(entry);
            entries.sort();
        }
        let keys = self.by_word.entry(word.to_string()).or_default();
        if !keys.contains(&key) {
            keys.push(key.clone());
        }
        self.key_syllables
            .entry(key)
            .or_insert_with(|| syllables.to_vec());
    }

    pub fn lookup(&self, key: &str) -> Option<&[LexEntry]> {
        self.by_key.get(key).map(|v| v.as_slice())
    }

    /// Phone keys of a word, first variant first.
    pub fn word_keys(&self, word: &str) -> Option<&[String]> {
        self.by_word.get(word).map(|v| v.as_slice())
    }

    pub fn syllables_of_key(&self, key: &str) -> Option<&[SyllablePhones]> {
        self.key_syllables.get(key).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.by_key.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_key.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = (&String, &Vec<SyllablePhones>, &Vec<LexEntry>)> {
        self.by_key
            .iter()
            .map(|(k, e)| (k, &self.key_syllables[k], e))
    }

    /// TSV form: `word<TAB>lang<TAB>variant_index<TAB>phone-string`.
    pub fn to_tsv(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for (key, entries) in &self.by_key {
            for e in entries {
                lines.push(format!("{}\t{}\t{}\t{}", e.word, e.lang, e.variant, key));
            }
        }
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    pub fn from_tsv(text: &str, inv: &Inventory) -> Result<Lexicon, String> {
        let mut lex = Lexicon::new();
        for (line, fields) in tables::tsv_rows(text) {
            if fields.len() < 4 {
                return Err(format!("lexicon line {line}: expected 4 fields"));
            }
            let lang = Lang::parse(fields[1])
                .ok_or_else(|| format!("lexicon line {line}: unknown language `{}`", fields[1]))?;
            let variant: u32 = fields[2]
                .parse()
                .map_err(|_| format!("lexicon line {line}: bad variant index"))?;
            let seq = parse_phone_sequence(fields[3], inv)
                .map_err(|e| format!("lexicon line {line}: {e}"))?;
            lex.insert(fields[0], lang, variant, &seq.syllables);
        }
        Ok(lex)
    }
}

/// One word to index: Vietnamese words are converted directly, English words
/// carry at least one adapted variant (space-separated Vietnamese syllables).
#[derive(Debug, Clone)]
pub struct WordSpec {
    pub word: String,
    pub lang: Lang,
    pub variants: Vec<String>,
}

impl WordSpec {
    pub fn vi(word: &str) -> WordSpec {
        WordSpec {
            word: word.to_string(),
            lang: Lang::Vi,
            variants: Vec::new(),
        }
    }

    pub fn en(word: &str, variants: &[&str]) -> WordSpec {
        WordSpec {
            word: word.to_string(),
            lang: Lang::En,
            variants: variants.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Builds the lexicon; homophones end up grouped under one key.
pub fn build_lexicon(words: &[WordSpec], g2p: &G2pTable) -> Result<Lexicon, G2pError> {
    let mut lex = Lexicon::new();
    for spec in words {
        match spec.lang {
            Lang::Vi => {
                let word = normalize_text(&spec.word);
                let mut syllables = Vec::new();
                for token in word.split_whitespace() {
                    syllables.push(g2p.word_to_phones(token)?);
                }
                if syllables.is_empty() {
                    continue;
                }
                lex.insert(&word, Lang::Vi, 0, &syllables);
            }
            Lang::En => {
                if spec.variants.is_empty() {
                    return Err(G2pError::OovEnglishWord(spec.word.clone()));
                }
                let word = spec.word.to_lowercase();
                for (i, variant) in spec.variants.iter().enumerate() {
                    let mut syllables = Vec::new();
                    for token in variant.split_whitespace() {
                        syllables.push(g2p.word_to_phones(token)?);
                    }
                    lex.insert(&word, Lang::En, i as u32, &syllables);
                }
            }
        }
    }
    Ok(lex)
}

/// Converts a sentence to phones. Vietnamese tokens go through the syllable
/// grammar; English tokens take their first lexicon variant; tokens that are
/// neither (numbers, stray punctuation) are skipped.
pub fn text_to_phones(sentence: &str, lex: &Lexicon, g2p: &G2pTable) -> Result<PhoneSequence, G2pError> {
    let normalized = normalize_text(sentence);
    let mut seq = PhoneSequence::empty();
    for tc in classify_tokens(&normalized, g2p.syllable_table()) {
        match tc.cls {
            LangClass::Vietnamese => {
                let phones = g2p.word_to_phones(&tc.token)?;
                seq.push_word(vec![phones]);
            }
            LangClass::English => {
                let keys = lex
                    .word_keys(&tc.token)
                    .ok_or_else(|| G2pError::OovEnglishWord(tc.token.clone()))?;
                let syllables = lex
                    .syllables_of_key(&keys[0])
                    .expect("lexicon keys are indexed")
                    .to_vec();
                seq.push_word(syllables);
            }
            LangClass::Other => {}
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phoneme::Tone;

    fn g2p() -> &'static G2pTable {
        G2pTable::shipped()
    }

    fn phones_of(token: &str) -> String {
        let syl = g2p().word_to_phones(token).unwrap();
        word_key(&[syl])
    }

    #[test]
    fn attested_anchor_syllables() {
        assert_eq!(phones_of("ây"), "ə - 0 iz");
        assert_eq!(phones_of("út"), "u - 4 tz");
        assert_eq!(phones_of("am"), "aː - 0 mz");
        assert_eq!(phones_of("đi"), "d i - 0");
    }

    #[test]
    fn tone_is_preserved() {
        for (word, tone) in [
            ("ma", Tone::Ngang),
            ("mà", Tone::Huyen),
            ("mả", Tone::Hoi),
            ("mã", Tone::Nga),
            ("má", Tone::Sac),
            ("mạ", Tone::Nang),
        ] {
            let syl = g2p().word_to_phones(word).unwrap();
            assert_eq!(syl.tone, tone, "{word}");
        }
    }

    #[test]
    fn medial_and_qu_produce_glide() {
        let syl = g2p().word_to_phones("hoa").unwrap();
        assert_eq!(syl.onsets, vec!["h", "w"]);
        let syl = g2p().word_to_phones("quê").unwrap();
        assert_eq!(syl.onsets, vec!["k", "w"]);
        assert_eq!(syl.nucleus, "e");
    }

    #[test]
    fn dialect_switch_changes_r() {
        let northern = G2pTable::new(Dialect::Northern);
        let strict = G2pTable::new(Dialect::NorthStrict);
        assert_eq!(northern.word_to_phones("ra").unwrap().onsets, vec!["ʐ"]);
        assert_eq!(strict.word_to_phones("ra").unwrap().onsets, vec!["z"]);
        // The attested d and gi values stay intact either way.
        assert_eq!(northern.word_to_phones("da").unwrap().onsets, vec!["z"]);
        assert_eq!(strict.word_to_phones("da").unwrap().onsets, vec!["z"]);
    }

    #[test]
    fn fragments_allow_two_onset_clusters() {
        let syl = g2p().fragments_to_phones(&["p", "l"], "ây").unwrap();
        assert_eq!(syl.onsets, vec!["p", "l"]);
        assert_eq!(word_key(&[syl]), "p l ə - 0 iz");
    }

    /// Inventory closure: every phone symbol in the shipped onset and rime
    /// tables classifies without UnknownToken.
    #[test]
    fn shipped_table_phones_are_all_classifiable() {
        use crate::phoneme::classify_token;
        let g = g2p();
        let inv = Inventory::shipped();
        for grapheme in g.syllable_table().onset_graphemes() {
            for phone in g.onset_phones(grapheme).unwrap() {
                classify_token(phone, inv).unwrap_or_else(|e| panic!("{grapheme}: {e}"));
            }
        }
        for row in g.syllable_table().rimes() {
            classify_token(&row.nucleus_phone, inv)
                .unwrap_or_else(|e| panic!("{}: {e}", row.spelling));
            if let Some(c) = &row.coda_phone {
                classify_token(c, inv).unwrap_or_else(|e| panic!("{}: {e}", row.spelling));
            }
        }
    }

    #[test]
    fn table_is_total_over_legality_grid() {
        let table = g2p();
        for (onset, row, tone) in table.syllable_table().legal_combinations() {
            let s = OrthoSyllable::from_parts(
                &onset,
                row.medial.as_deref(),
                &row.nucleus,
                row.coda.as_deref(),
                tone,
                table.syllable_table(),
            )
            .unwrap();
            let phones = table.syllable_to_phones(&s).unwrap();
            phones.validate(Inventory::shipped()).unwrap();
        }
    }

    #[test]
    fn text_to_phones_sentences() {
        let lex = Lexicon::new();
        let seq = text_to_phones("đi", &lex, g2p()).unwrap();
        assert_eq!(serialize_phone_sequence(&seq), "d i - 0");

        let seq = text_to_phones("", &lex, g2p()).unwrap();
        assert!(seq.is_empty());

        let err = text_to_phones("dự concert", &lex, g2p()).unwrap_err();
        assert_eq!(err, G2pError::OovEnglishWord("concert".to_string()));

        let mut lex = Lexicon::new();
        let con = g2p().word_to_phones("con").unwrap();
        let sot = g2p().word_to_phones("sớt").unwrap();
        lex.insert("concert", Lang::En, 0, &[con, sot]);
        let seq = text_to_phones("dự concert", &lex, g2p()).unwrap();
        assert_eq!(
            serialize_phone_sequence(&seq),
            "z ɨ - 5 | k ɔ - 0 nz . s əː - 4 tz"
        );
    }

    #[test]
    fn lexicon_groups_homophones() {
        let g = g2p();
        let words = vec![WordSpec::vi("lít"), WordSpec::en("list", &["lít"])];
        let lex = build_lexicon(&words, g).unwrap();
        let key = word_key(&[g.word_to_phones("lít").unwrap()]);
        let entries = lex.lookup(&key).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].word, "list");
        assert_eq!(entries[1].word, "lít");
    }

    #[test]
    fn empty_lexicon_is_empty() {
        let lex = build_lexicon(&[], g2p()).unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn vietnamese_entries_round_trip_through_g2p() {
        let g = g2p();
        // A deterministic sample of the legal grid standing in for a random
        // 200-word list: for every entry, converting the orthography again
        // must reproduce the key.
        let combos = g.syllable_table().legal_combinations();
        let words: Vec<WordSpec> = combos
            .iter()
            .step_by(combos.len() / 200)
            .map(|(onset, row, tone)| {
                let s = OrthoSyllable::from_parts(
                    onset,
                    row.medial.as_deref(),
                    &row.nucleus,
                    row.coda.as_deref(),
                    *tone,
                    g.syllable_table(),
                )
                .unwrap();
                WordSpec::vi(&s.raw)
            })
            .collect();
        let lex = build_lexicon(&words, g).unwrap();
        for (key, _, entries) in lex.keys() {
            for e in entries {
                let again = word_key(
                    &e.word
                        .split_whitespace()
                        .map(|t| g.word_to_phones(t).unwrap())
                        .collect::<Vec<_>>(),
                );
                assert_eq!(&again, key, "word {}", e.word);
            }
        }
    }

    #[test]
    fn lexicon_tsv_round_trips() {
        let g = g2p();
        let words = vec![
            WordSpec::vi("lít"),
            WordSpec::vi("nước"),
            WordSpec::en("list", &["lít"]),
            WordSpec::en("video", &["vi deo", "vi đêu"]),
        ];
        let lex = build_lexicon(&words, g).unwrap();
        let tsv = lex.to_tsv();
        let reloaded = Lexicon::from_tsv(&tsv, Inventory::shipped()).unwrap();
        assert_eq!(reloaded.to_tsv(), tsv);
        assert_eq!(reloaded.word_keys("video").unwrap().len(), 2);
    }

    #[test]
    fn render_inverts_simple_syllables() {
        let g = g2p();
        for word in ["đi", "hoa", "quê", "nghiêng", "được", "ét", "mỹ"] {
            let syl = g.word_to_phones(word).unwrap();
            let rendered = g.render_syllable(&syl);
            // The rendering is a homophone of the input: same phones.
            let again = g.word_to_phones(&rendered).unwrap();
            assert_eq!(again, syl, "{word} -> {rendered}");
        }
    }

    #[test]
    fn render_is_total_for_odd_combinations() {
        use crate::phoneme::Tone;
        // Open short â has no rime spelling; the long equivalent steps in.
        let odd = SyllablePhones::new(vec![], "ə".to_string(), Tone::Ngang, None);
        assert_eq!(g2p().render_syllable(&odd), "ơ");
        // A checked rime with a level tone gets raised to sắc.
        let odd = SyllablePhones::new(vec!["t".to_string()], "i".to_string(), Tone::Ngang, Some("tz".to_string()));
        assert_eq!(g2p().render_syllable(&odd), "tít");
        // Two-onset cluster renders with a reduced leading syllable.
        let cluster = SyllablePhones::new(
            vec!["p".to_string(), "l".to_string()],
            "ə".to_string(),
            Tone::Ngang,
            Some("iz".to_string()),
        );
        assert_eq!(g2p().render_syllable(&cluster), "pơ lây");
    }
}
