//! Vietnamese orthographic syllables: tone stripping, decomposition into
//! onset/medial/nucleus/coda, the inverse composition, and classification of
//! code-switched tokens.
//!
//! All input is NFC-normalized on entry; tone diacritics are recognized in
//! both precomposed and combining forms (NFC collapses the latter).
//! Composition places the tone mark new-style: on the quality-marked vowel
//! when there is one, on the first vowel of the open diphthongs ia/ua/ưa/ya,
//! otherwise on the penultimate vowel letter of the rime (medial excluded).
//! Old-style input such as "hòa" still decomposes; it re-composes as "hoà".

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::phoneme::Tone;
use crate::tables;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyllableError {
    #[error("more than one tone mark in `{0}`")]
    MultipleToneMarks(String),
    #[error("not a Vietnamese syllable: `{0}`")]
    NotAVietnameseSyllable(String),
    #[error("illegal combination: {0}")]
    IllegalCombination(String),
}

/// (toned letter, bare letter, tone). Quality diacritics are part of the
/// bare letter; only the five tone marks are stripped.
const TONED_LETTERS: &[(char, char, Tone)] = &[
    ('à', 'a', Tone::Huyen), ('á', 'a', Tone::Sac), ('ả', 'a', Tone::Hoi),
    ('ã', 'a', Tone::Nga), ('ạ', 'a', Tone::Nang),
    ('ằ', 'ă', Tone::Huyen), ('ắ', 'ă', Tone::Sac), ('ẳ', 'ă', Tone::Hoi),
    ('ẵ', 'ă', Tone::Nga), ('ặ', 'ă', Tone::Nang),
    ('ầ', 'â', Tone::Huyen), ('ấ', 'â', Tone::Sac), ('ẩ', 'â', Tone::Hoi),
    ('ẫ', 'â', Tone::Nga), ('ậ', 'â', Tone::Nang),
    ('è', 'e', Tone::Huyen), ('é', 'e', Tone::Sac), ('ẻ', 'e', Tone::Hoi),
    ('ẽ', 'e', Tone::Nga), ('ẹ', 'e', Tone::Nang),
    ('ề', 'ê', Tone::Huyen), ('ế', 'ê', Tone::Sac), ('ể', 'ê', Tone::Hoi),
    ('ễ', 'ê', Tone::Nga), ('ệ', 'ê', Tone::Nang),
    ('ì', 'i', Tone::Huyen), ('í', 'i', Tone::Sac), ('ỉ', 'i', Tone::Hoi),
    ('ĩ', 'i', Tone::Nga), ('ị', 'i', Tone::Nang),
    ('ò', 'o', Tone::Huyen), ('ó', 'o', Tone::Sac), ('ỏ', 'o', Tone::Hoi),
    ('õ', 'o', Tone::Nga), ('ọ', 'o', Tone::Nang),
    ('ồ', 'ô', Tone::Huyen), ('ố', 'ô', Tone::Sac), ('ổ', 'ô', Tone::Hoi),
    ('ỗ', 'ô', Tone::Nga), ('ộ', 'ô', Tone::Nang),
    ('ờ', 'ơ', Tone::Huyen), ('ớ', 'ơ', Tone::Sac), ('ở', 'ơ', Tone::Hoi),
    ('ỡ', 'ơ', Tone::Nga), ('ợ', 'ơ', Tone::Nang),
    ('ù', 'u', Tone::Huyen), ('ú', 'u', Tone::Sac), ('ủ', 'u', Tone::Hoi),
    ('ũ', 'u', Tone::Nga), ('ụ', 'u', Tone::Nang),
    ('ừ', 'ư', Tone::Huyen), ('ứ', 'ư', Tone::Sac), ('ử', 'ư', Tone::Hoi),
    ('ữ', 'ư', Tone::Nga), ('ự', 'ư', Tone::Nang),
    ('ỳ', 'y', Tone::Huyen), ('ý', 'y', Tone::Sac), ('ỷ', 'y', Tone::Hoi),
    ('ỹ', 'y', Tone::Nga), ('ỵ', 'y', Tone::Nang),
    ('À', 'A', Tone::Huyen), ('Á', 'A', Tone::Sac), ('Ả', 'A', Tone::Hoi),
    ('Ã', 'A', Tone::Nga), ('Ạ', 'A', Tone::Nang),
    ('Ằ', 'Ă', Tone::Huyen), ('Ắ', 'Ă', Tone::Sac), ('Ẳ', 'Ă', Tone::Hoi),
    ('Ẵ', 'Ă', Tone::Nga), ('Ặ', 'Ă', Tone::Nang),
    ('Ầ', 'Â', Tone::Huyen), ('Ấ', 'Â', Tone::Sac), ('Ẩ', 'Â', Tone::Hoi),
    ('Ẫ', 'Â', Tone::Nga), ('Ậ', 'Â', Tone::Nang),
    ('È', 'E', Tone::Huyen), ('É', 'E', Tone::Sac), ('Ẻ', 'E', Tone::Hoi),
    ('Ẽ', 'E', Tone::Nga), ('Ẹ', 'E', Tone::Nang),
    ('Ề', 'Ê', Tone::Huyen), ('Ế', 'Ê', Tone::Sac), ('Ể', 'Ê', Tone::Hoi),
    ('Ễ', 'Ê', Tone::Nga), ('Ệ', 'Ê', Tone::Nang),
    ('Ì', 'I', Tone::Huyen), ('Í', 'I', Tone::Sac), ('Ỉ', 'I', Tone::Hoi),
    ('Ĩ', 'I', Tone::Nga), ('Ị', 'I', Tone::Nang),
    ('Ò', 'O', Tone::Huyen), ('Ó', 'O', Tone::Sac), ('Ỏ', 'O', Tone::Hoi),
    ('Õ', 'O', Tone::Nga), ('Ọ', 'O', Tone::Nang),
    ('Ồ', 'Ô', Tone::Huyen), ('Ố', 'Ô', Tone::Sac), ('Ổ', 'Ô', Tone::Hoi),
    ('Ỗ', 'Ô', Tone::Nga), ('Ộ', 'Ô', Tone::Nang),
    ('Ờ', 'Ơ', Tone::Huyen), ('Ớ', 'Ơ', Tone::Sac), ('Ở', 'Ơ', Tone::Hoi),
    ('Ỡ', 'Ơ', Tone::Nga), ('Ợ', 'Ơ', Tone::Nang),
    ('Ù', 'U', Tone::Huyen), ('Ú', 'U', Tone::Sac), ('Ủ', 'U', Tone::Hoi),
    ('Ũ', 'U', Tone::Nga), ('Ụ', 'U', Tone::Nang),
    ('Ừ', 'Ư', Tone::Huyen), ('Ứ', 'Ư', Tone::Sac), ('Ử', 'Ư', Tone::Hoi),
    ('Ữ', 'Ư', Tone::Nga), ('Ự', 'Ư', Tone::Nang),
    ('Ỳ', 'Y', Tone::Huyen), ('Ý', 'Y', Tone::Sac), ('Ỷ', 'Y', Tone::Hoi),
    ('Ỹ', 'Y', Tone::Nga), ('Ỵ', 'Y', Tone::Nang),
];

fn toned_lookup() -> &'static HashMap<char, (char, Tone)> {
    static MAP: OnceLock<HashMap<char, (char, Tone)>> = OnceLock::new();
    MAP.get_or_init(|| {
        TONED_LETTERS
            .iter()
            .map(|&(t, b, tone)| (t, (b, tone)))
            .collect()
    })
}

fn apply_tone_lookup() -> &'static HashMap<(char, Tone), char> {
    static MAP: OnceLock<HashMap<(char, Tone), char>> = OnceLock::new();
    MAP.get_or_init(|| {
        TONED_LETTERS
            .iter()
            .map(|&(t, b, tone)| ((b, tone), t))
            .collect()
    })
}

fn is_quality_vowel(c: char) -> bool {
    matches!(c, 'ă' | 'â' | 'ê' | 'ô' | 'ơ' | 'ư')
}

fn is_viet_letter(c: char) -> bool {
    c.is_ascii_alphabetic() || c == 'đ' || is_quality_vowel(c)
}

pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Removes the tone diacritic, keeping vowel-quality marks intact.
pub fn strip_tone(syllable: &str) -> Result<(String, Tone), SyllableError> {
    let normalized = nfc(syllable);
    let map = toned_lookup();
    let mut tone = Tone::Ngang;
    let mut seen = false;
    let mut base = String::with_capacity(normalized.len());
    for c in normalized.chars() {
        if let Some(&(bare, t)) = map.get(&c) {
            if seen {
                return Err(SyllableError::MultipleToneMarks(syllable.to_string()));
            }
            seen = true;
            tone = t;
            base.push(bare);
        } else {
            base.push(c);
        }
    }
    Ok((base, tone))
}

/// Puts `tone` on `letter`, or returns the letter unchanged for ngang.
fn apply_tone(letter: char, tone: Tone) -> char {
    if tone == Tone::Ngang {
        letter
    } else {
        *apply_tone_lookup()
            .get(&(letter, tone))
            .unwrap_or(&letter)
    }
}

/// Which onsets a rime row accepts. `Any` is still subject to the global
/// spelling rules (c/k, g/gh, ng/ngh, qu, gi).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OnsetConstraint {
    Any,
    List(BTreeSet<String>),
}

impl OnsetConstraint {
    fn allows(&self, onset: &str) -> bool {
        match self {
            OnsetConstraint::Any => true,
            OnsetConstraint::List(set) => set.contains(onset),
        }
    }
}

/// One row of the rime table: spelling fields plus phone values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RimeRow {
    pub medial: Option<String>,
    pub nucleus: String,
    pub coda: Option<String>,
    pub nucleus_phone: String,
    pub coda_phone: Option<String>,
    pub onsets: OnsetConstraint,
    pub tag: String,
    pub spelling: String,
}

impl RimeRow {
    pub fn has_stop_coda(&self) -> bool {
        matches!(self.coda.as_deref(), Some("p" | "t" | "c" | "ch"))
    }
}

/// Onset graphemes and the rime legality grid, loaded from the shipped
/// tables.
#[derive(Debug, Clone)]
pub struct SyllableTable {
    onset_graphemes: Vec<String>,
    munch_order: Vec<String>,
    rimes: Vec<RimeRow>,
    by_spelling: HashMap<String, usize>,
    by_parts: HashMap<(Option<String>, String, Option<String>), usize>,
}

impl SyllableTable {
    pub fn from_tsv(onsets_tsv: &str, rimes_tsv: &str) -> Result<SyllableTable, String> {
        let mut onset_graphemes: Vec<String> = Vec::new();
        for (line, fields) in tables::tsv_rows(onsets_tsv) {
            if fields.len() < 3 {
                return Err(format!("onset table line {line}: expected 3 fields"));
            }
            let g = fields[0].to_string();
            if !onset_graphemes.contains(&g) {
                onset_graphemes.push(g);
            }
        }
        let mut rimes = Vec::new();
        let mut by_spelling = HashMap::new();
        let mut by_parts = HashMap::new();
        for (line, fields) in tables::tsv_rows(rimes_tsv) {
            if fields.len() < 7 {
                return Err(format!("rime table line {line}: expected 7 fields"));
            }
            let medial = tables::opt_field(fields[0]);
            let nucleus = fields[1].to_string();
            let coda = tables::opt_field(fields[2]);
            let onsets = match fields[5] {
                "*" => OnsetConstraint::Any,
                list => OnsetConstraint::List(
                    list.split(',')
                        .map(|o| if o == "0" { String::new() } else { o.to_string() })
                        .collect(),
                ),
            };
            let spelling = format!(
                "{}{}{}",
                medial.as_deref().unwrap_or(""),
                nucleus,
                coda.as_deref().unwrap_or("")
            );
            let row = RimeRow {
                medial: medial.clone(),
                nucleus: nucleus.clone(),
                coda: coda.clone(),
                nucleus_phone: fields[3].to_string(),
                coda_phone: tables::opt_field(fields[4]),
                onsets,
                tag: fields[6].to_string(),
                spelling: spelling.clone(),
            };
            let idx = rimes.len();
            if by_spelling.insert(spelling.clone(), idx).is_some() {
                return Err(format!("rime table line {line}: duplicate spelling `{spelling}`"));
            }
            by_parts.insert((medial, nucleus, coda), idx);
            rimes.push(row);
        }
        let mut munch_order = onset_graphemes.clone();
        munch_order.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        Ok(SyllableTable {
            onset_graphemes,
            munch_order,
            rimes,
            by_spelling,
            by_parts,
        })
    }

    pub fn shipped() -> &'static SyllableTable {
        static SHIPPED: OnceLock<SyllableTable> = OnceLock::new();
        SHIPPED.get_or_init(|| {
            SyllableTable::from_tsv(tables::ONSETS_TSV, tables::RIMES_TSV)
                .expect("shipped syllable tables are well-formed")
        })
    }

    pub fn onset_graphemes(&self) -> &[String] {
        &self.onset_graphemes
    }

    pub fn rimes(&self) -> &[RimeRow] {
        &self.rimes
    }

    pub fn rime_by_spelling(&self, spelling: &str) -> Option<&RimeRow> {
        self.by_spelling.get(spelling).map(|&i| &self.rimes[i])
    }

    pub fn rime_by_parts(
        &self,
        medial: Option<&str>,
        nucleus: &str,
        coda: Option<&str>,
    ) -> Option<&RimeRow> {
        self.by_parts
            .get(&(
                medial.map(|s| s.to_string()),
                nucleus.to_string(),
                coda.map(|s| s.to_string()),
            ))
            .map(|&i| &self.rimes[i])
    }

    /// Longest onset grapheme matching the head of `base`.
    fn munch_onset<'a>(&self, base: &'a str) -> (&str, &'a str) {
        for g in &self.munch_order {
            if let Some(rest) = base.strip_prefix(g.as_str()) {
                return (g, rest);
            }
        }
        ("", base)
    }

    /// All legal (onset, rime, tone) combinations.
    pub fn legal_combinations(&self) -> Vec<(String, &RimeRow, Tone)> {
        let mut onsets: Vec<String> = vec![String::new()];
        onsets.extend(self.onset_graphemes.iter().cloned());
        let mut out = Vec::new();
        for onset in &onsets {
            for row in &self.rimes {
                for tone in Tone::ALL {
                    if check_combo(onset, row, tone, self).is_ok() {
                        out.push((onset.clone(), row, tone));
                    }
                }
            }
        }
        out
    }
}

/// A parsed orthographic syllable. `raw` is the NFC-lowercased surface form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoSyllable {
    pub raw: String,
    pub onset: String,
    pub medial: Option<String>,
    pub nucleus: String,
    pub coda: Option<String>,
    pub tone: Tone,
}

impl OrthoSyllable {
    /// Builds and validates a syllable from its parts, rendering `raw`.
    pub fn from_parts(
        onset: &str,
        medial: Option<&str>,
        nucleus: &str,
        coda: Option<&str>,
        tone: Tone,
        table: &SyllableTable,
    ) -> Result<OrthoSyllable, SyllableError> {
        let mut syl = OrthoSyllable {
            raw: String::new(),
            onset: onset.to_string(),
            medial: medial.map(|s| s.to_string()),
            nucleus: nucleus.to_string(),
            coda: coda.map(|s| s.to_string()),
            tone,
        };
        syl.raw = compose(&syl, table)?;
        Ok(syl)
    }

    pub fn rime_spelling(&self) -> String {
        format!(
            "{}{}{}",
            self.medial.as_deref().unwrap_or(""),
            self.nucleus,
            self.coda.as_deref().unwrap_or("")
        )
    }
}

fn first_rime_letter(row: &RimeRow) -> char {
    row.spelling.chars().next().expect("non-empty rime")
}

fn is_front_letter(c: char) -> bool {
    matches!(c, 'i' | 'y' | 'e' | 'ê')
}

/// Global spelling rules shared by decompose, compose and the legality grid.
fn check_combo(
    onset: &str,
    row: &RimeRow,
    tone: Tone,
    table: &SyllableTable,
) -> Result<(), SyllableError> {
    let fail = |why: &str| {
        Err(SyllableError::IllegalCombination(format!(
            "{} + {} ({why})",
            if onset.is_empty() { "∅" } else { onset },
            row.spelling
        )))
    };
    if !row.onsets.allows(onset) {
        return fail("rime rejects this onset");
    }
    let first = first_rime_letter(row);
    let front = is_front_letter(first);
    match onset {
        "k" | "gh" | "ngh" if !front => return fail("spelled before front vowels only"),
        "c" | "g" | "ng" if front => return fail("front vowels take k/gh/ngh"),
        "qu" if matches!(first, 'o' | 'u' | 'ư') => return fail("qu absorbs the medial"),
        "gi" if matches!(first, 'i' | 'y') => {
            // The i of the onset and of the rime share one letter ("gì",
            // "gìn", "giếng"); that spelling only survives a round trip for
            // plain i rimes without a vocalic coda and for iê rimes.
            let collapsible = row.medial.is_none()
                && (row.nucleus == "iê"
                    || (row.nucleus == "i"
                        && !matches!(row.coda.as_deref(), Some("u" | "o" | "i" | "y"))));
            if !collapsible {
                return fail("gi before an i-initial rime does not round-trip");
            }
        }
        // After gi a written ê-rime reads as the iê diphthong whenever that
        // rime exists ("giết"), so the plain ê-rime is unreachable.
        "gi" if first == 'ê'
            && table.rime_by_spelling(&format!("i{}", row.spelling)).is_some() =>
        {
            return fail("gi + ê-rime is shadowed by its iê rime");
        }
        _ => {}
    }
    if row.has_stop_coda() && !matches!(tone, Tone::Sac | Tone::Nang) {
        return fail("checked syllables take sắc or nặng");
    }
    Ok(())
}

/// Rewrites an onset to the variant the following rime requires
/// (c/k, g/gh, ng/ngh). Used when building syllables from adapted material.
pub fn harmonize_onset(onset: &str, rime_first: char) -> String {
    let front = is_front_letter(rime_first);
    match (onset, front) {
        ("c", true) => "k".to_string(),
        ("k", false) => "c".to_string(),
        ("g", true) => "gh".to_string(),
        ("gh", false) => "g".to_string(),
        ("ng", true) => "ngh".to_string(),
        ("ngh", false) => "ng".to_string(),
        _ => onset.to_string(),
    }
}

/// Splits a candidate syllable into onset, medial, nucleus, coda and tone.
pub fn decompose(syllable: &str, table: &SyllableTable) -> Result<OrthoSyllable, SyllableError> {
    let raw = nfc(syllable).to_lowercase();
    if raw.is_empty() {
        return Err(SyllableError::NotAVietnameseSyllable(syllable.to_string()));
    }
    let (base, tone) = strip_tone(&raw)
        .map_err(|_| SyllableError::NotAVietnameseSyllable(syllable.to_string()))?;
    if !base.chars().all(is_viet_letter) {
        return Err(SyllableError::NotAVietnameseSyllable(syllable.to_string()));
    }
    let (onset, rest) = table.munch_onset(&base);
    // "gì", "gìn", "giếng": the onset shares its written i with the rime.
    let gi_collapsed = onset == "gi"
        && (rest.is_empty()
            || rest.chars().next().is_some_and(is_viet_consonant)
            || (rest.starts_with('ê')
                && table.rime_by_spelling(&format!("i{rest}")).is_some()));
    let rime_spelling = if gi_collapsed {
        format!("i{rest}")
    } else {
        rest.to_string()
    };
    let row = table
        .rime_by_spelling(&rime_spelling)
        .ok_or_else(|| SyllableError::NotAVietnameseSyllable(syllable.to_string()))?;
    check_combo(onset, row, tone, table)
        .map_err(|_| SyllableError::NotAVietnameseSyllable(syllable.to_string()))?;
    Ok(OrthoSyllable {
        raw,
        onset: onset.to_string(),
        medial: row.medial.clone(),
        nucleus: row.nucleus.clone(),
        coda: row.coda.clone(),
        tone,
    })
}

fn is_viet_consonant(c: char) -> bool {
    is_viet_letter(c) && !matches!(c, 'a' | 'ă' | 'â' | 'e' | 'ê' | 'i' | 'o' | 'ô' | 'ơ' | 'u' | 'ư' | 'y')
}

/// Renders a syllable, placing the tone mark new-style.
pub fn compose(s: &OrthoSyllable, table: &SyllableTable) -> Result<String, SyllableError> {
    let row = table
        .rime_by_parts(s.medial.as_deref(), &s.nucleus, s.coda.as_deref())
        .ok_or_else(|| {
            SyllableError::IllegalCombination(format!(
                "no rime {}{}{}",
                s.medial.as_deref().unwrap_or(""),
                s.nucleus,
                s.coda.as_deref().unwrap_or("")
            ))
        })?;
    check_combo(&s.onset, row, s.tone, table)?;

    let nucleus_letters: Vec<char> = s.nucleus.chars().collect();
    let coda_glide = matches!(s.coda.as_deref(), Some("i" | "y" | "u" | "o"));
    let candidate_count = nucleus_letters.len() + usize::from(coda_glide);

    // Index of the marked letter within the nucleus.
    let mark_at = if let Some(pos) = nucleus_letters.iter().rposition(|&c| is_quality_vowel(c)) {
        pos
    } else if s.coda.is_none() && nucleus_letters.len() == 2 {
        0 // ia, ua, ya
    } else if candidate_count > 1 {
        candidate_count - 2
    } else {
        0
    };
    debug_assert!(mark_at < nucleus_letters.len());

    let mut out = String::new();
    if s.onset == "gi" && s.nucleus.starts_with('i') && s.medial.is_none() {
        out.push('g');
    } else {
        out.push_str(&s.onset);
        if let Some(m) = &s.medial {
            out.push_str(m);
        }
    }
    for (i, &c) in nucleus_letters.iter().enumerate() {
        out.push(if i == mark_at { apply_tone(c, s.tone) } else { c });
    }
    if let Some(c) = &s.coda {
        out.push_str(c);
    }
    Ok(out)
}

/// Language class of one whitespace token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LangClass {
    Vietnamese,
    English,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenClass {
    pub token: String,
    pub cls: LangClass,
}

/// Strips leading/trailing punctuation from a token; classification and
/// phoneme conversion both work on this core.
pub fn token_core(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Labels each whitespace token of a sentence as Vietnamese (it parses as a
/// syllable), English (alphabetic but not a syllable), or Other.
pub fn classify_tokens(sentence: &str, table: &SyllableTable) -> Vec<TokenClass> {
    sentence
        .split_whitespace()
        .map(|token| {
            let core = token_core(token);
            let cls = if core.is_empty() {
                LangClass::Other
            } else if decompose(core, table).is_ok() {
                LangClass::Vietnamese
            } else if core.chars().all(|c| c.is_alphabetic()) {
                LangClass::English
            } else {
                LangClass::Other
            };
            TokenClass {
                token: token.to_string(),
                cls,
            }
        })
        .collect()
}
