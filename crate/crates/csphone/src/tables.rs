//! Embedded data tables and the line-oriented TSV reader they share.
//!
//! Every table ships as data so the phoneme set and the spelling grammar can
//! be extended without touching code. Comment lines start with `#`.

pub const INVENTORY_TSV: &str = include_str!("data/inventory.tsv");
pub const ONSETS_TSV: &str = include_str!("data/onsets.tsv");
pub const RIMES_TSV: &str = include_str!("data/rimes.tsv");
pub const ADAPT_RULES_TSV: &str = include_str!("data/adapt_rules.tsv");
pub const EN_IPA_TSV: &str = include_str!("data/en_ipa.tsv");
pub const NOISE_DEFAULT_TSV: &str = include_str!("data/noise_default.tsv");

/// Iterates data rows of a TSV document as `(line_number, fields)`,
/// skipping blank lines and `#` comments. Line numbers are 1-based.
pub fn tsv_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

/// Reads an optional TSV field where `-` stands for "empty".
pub fn opt_field(field: &str) -> Option<String> {
    if field == "-" {
        None
    } else {
        Some(field.to_string())
    }
}
