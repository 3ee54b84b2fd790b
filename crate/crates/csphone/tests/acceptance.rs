//! Acceptance suite. Each test prints one PASS line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::BTreeSet;
use std::time::Instant;

use csphone::adapt::EnAdapter;
use csphone::decoder::{decode, DecodeConfig};
use csphone::g2p::{build_lexicon, text_to_phones, word_key, G2pTable, WordSpec};
use csphone::metrics::{self, edit_distance};
use csphone::ngram::train_ngram;
use csphone::noise::{corrupt, default_confusion_model, random_phone_sequence};
use csphone::phoneme::{parse_phone_sequence, serialize_phone_sequence, Inventory, PhoneSequence};
use csphone::pipeline::{localize_sentence, PipelineCtx, VariantMode, VariantPolicy};
use csphone::syllable::{compose, decompose, OrthoSyllable};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(criterion: &str, detail: String) {
    println!("PASS: {criterion} — {detail}");
}

/// The sixteen attested conversion rows:
/// (word, prefix segments, prefix graphemes, postfix segments, rime, phones).
const TABLE_ROWS: &[(&str, &str, &str, &str, &str, &str)] = &[
    ("zoo", "z", "d", "uː", "u", "z u - 0"),
    ("play", "p l", "p,l", "eɪ", "ây", "p l ə - 0 iz"),
    ("go", "g", "g", "əʊ", "âu", "ɣ ə - 0 uz"),
    ("come", "k", "c", "ʌ m", "âm", "k ə - 0 mz"),
    ("young", "j", "gi", "ʌ ŋ", "ăng", "z a - 0 ŋz"),
    ("sing", "s", "s", "ɪ ŋ", "ing", "s i - 0 ŋz"),
    ("bee", "b", "b", "iː", "i", "b i - 0"),
    ("pet", "p", "p", "e t", "ét", "p ɛ - 4 tz"),
    ("core", "k", "c", "ɔː", "o", "k ɔ - 0"),
    ("foot", "f", "ph", "ʊ t", "út", "f u - 4 tz"),
    ("tea", "t", "t", "iː", "i", "t i - 0"),
    ("think", "θ", "th", "ɪ ŋ k", "in", "tʰ i - 0 nz"),
    ("view", "v", "v", "j uː", "iu", "v i - 0 uz"),
    ("ship", "ʃ", "s", "ɪ p", "íp", "s i - 4 pz"),
    ("lamp", "l", "l", "æ m p", "am", "l aː - 0 mz"),
    ("tour", "t", "t", "ʊə r", "ua", "t uə - 0"),
];

fn segs(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

#[test]
fn criterion_1_conversion_table_golden_suite() {
    let started = Instant::now();
    let adapter = EnAdapter::shipped();
    let g2p = G2pTable::shipped();
    for &(word, prefix_ipa, prefix_vi, postfix_ipa, rime_vi, phones) in TABLE_ROWS {
        let ipa = adapter.lookup(word).unwrap_or_else(|| panic!("{word} in dictionary"));
        let syllables = csphone::adapt::split_ipa(ipa).unwrap();
        assert_eq!(syllables.len(), 1, "{word} is one syllable");
        assert_eq!(syllables[0].prefix, segs(prefix_ipa), "{word} prefix split");
        assert_eq!(syllables[0].postfix, segs(postfix_ipa), "{word} postfix split");

        let onsets = adapter.map_prefix(&syllables[0].prefix).unwrap();
        let expected_onsets: Vec<String> = prefix_vi.split(',').map(String::from).collect();
        assert_eq!(onsets[0], expected_onsets, "{word} rank-0 onsets");

        let rimes = adapter.map_rime(&syllables[0].postfix).unwrap();
        assert_eq!(rimes[0].0, vec![rime_vi.to_string()], "{word} rank-0 rime");

        let onset_refs: Vec<&str> = onsets[0].iter().map(String::as_str).collect();
        let joined = g2p.fragments_to_phones(&onset_refs, rime_vi).unwrap();
        assert_eq!(word_key(&[joined]), phones, "{word} phones");

        // The syllable column also converts as plain orthography whenever the
        // prefix is a single grapheme.
        if !prefix_vi.contains(',') {
            let spelled = format!("{prefix_vi}{rime_vi}");
            let via_text = g2p.word_to_phones(&spelled).unwrap();
            assert_eq!(word_key(&[via_text]), phones, "{word} as `{spelled}`");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        "criterion 1",
        format!("all 16 conversion rows reproduce byte-exact in {elapsed:?}"),
    );
}

#[test]
fn criterion_2_ay_anchor() {
    let variants = EnAdapter::shipped().adapt("a").unwrap();
    assert_eq!(variants[0].rank, 0);
    assert_eq!(variants[0].text(), "ây");
    let phones = G2pTable::shipped().word_to_phones("ây").unwrap();
    assert_eq!(word_key(&[phones]), "ə - 0 iz");
    pass("criterion 2", "adapt(a) rank-0 = ây; g2p(ây) = ə - 0 iz".to_string());
}

#[test]
fn criterion_3_video_variants() {
    let variants = EnAdapter::shipped().adapt("video").unwrap();
    let texts: BTreeSet<String> = variants.iter().map(|v| v.text()).collect();
    for wanted in ["vi deo", "vi đêu", "vi đê ô"] {
        assert!(texts.contains(wanted), "missing variant {wanted}");
    }

    let policy = VariantPolicy {
        mode: VariantMode::Exhaustive,
        max_variants_per_sentence: 3,
        seed: 0,
    };
    let records = localize_sentence(
        "xem cái video này",
        &policy,
        &PipelineCtx::default(),
        0,
        "c3",
    )
    .unwrap();
    let localized: BTreeSet<&str> = records.iter().map(|r| r.localized.as_str()).collect();
    assert_eq!(
        localized,
        BTreeSet::from([
            "xem cái vi deo này",
            "xem cái vi đêu này",
            "xem cái vi đê ô này",
        ])
    );
    pass(
        "criterion 3",
        "adapt(video) covers {vi deo, vi đêu, vi đê ô}; exhaustive localize emits all three".to_string(),
    );
}

/// First `limit` grid words whose phone keys are pairwise distinct.
fn homophone_free_words(limit: usize) -> Vec<String> {
    let g2p = G2pTable::shipped();
    let table = g2p.syllable_table();
    let mut seen_keys = BTreeSet::new();
    let mut words = Vec::new();
    for (onset, row, tone) in table.legal_combinations() {
        if words.len() == limit {
            break;
        }
        let s = OrthoSyllable::from_parts(
            &onset,
            row.medial.as_deref(),
            &row.nucleus,
            row.coda.as_deref(),
            tone,
            table,
        )
        .unwrap();
        let key = word_key(&[g2p.syllable_to_phones(&s).unwrap()]);
        if seen_keys.insert(key) {
            words.push(s.raw);
        }
    }
    words
}

#[test]
fn criterion_4_round_trip_properties() {
    let started = Instant::now();
    let g2p = G2pTable::shipped();
    let table = g2p.syllable_table();
    let inv = Inventory::shipped();

    // Exhaustive orthographic and phonemic round trip over the legal grid.
    let combos = table.legal_combinations();
    assert!(combos.len() >= 10_000, "grid only has {} combos", combos.len());
    for (onset, row, tone) in &combos {
        let s = OrthoSyllable::from_parts(
            onset,
            row.medial.as_deref(),
            &row.nucleus,
            row.coda.as_deref(),
            *tone,
            table,
        )
        .unwrap();
        let d = decompose(&s.raw, table).unwrap();
        assert_eq!(d, s, "decompose(compose) broke on {}", s.raw);
        assert_eq!(compose(&d, table).unwrap(), s.raw);

        let phones = g2p.syllable_to_phones(&s).unwrap();
        let seq = PhoneSequence::from_words([vec![phones]]);
        let text = serialize_phone_sequence(&seq);
        assert_eq!(parse_phone_sequence(&text, inv).unwrap(), seq, "phones of {}", s.raw);
    }

    // Clean end-to-end pipeline over a homophone-free 500-word lexicon.
    let words = homophone_free_words(500);
    assert_eq!(words.len(), 500);
    let specs: Vec<WordSpec> = words.iter().map(|w| WordSpec::vi(w)).collect();
    let lex = build_lexicon(&specs, g2p).unwrap();
    let sentences: Vec<String> = words.chunks(5).map(|c| c.join(" ")).collect();
    let lm = train_ngram(sentences.iter(), 2).unwrap();
    let cfg = DecodeConfig::default();
    let mut edits = 0usize;
    let mut total = 0usize;
    for sentence in &sentences {
        let phones = text_to_phones(sentence, &lex, g2p).unwrap();
        let out = decode(&phones, &lex, &lm, &cfg);
        let report = metrics::wer_report(sentence, &out[0].0);
        edits += report.distance;
        total += report.ref_len;
    }
    assert_eq!(edits, 0, "clean-pipeline WER must be 0 over {total} words");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        "criterion 4",
        format!(
            "{} grid syllables round-trip; clean WER 0/{total} in {elapsed:?}",
            combos.len()
        ),
    );
}

/// The recursive definition, memoized; independent of the DP implementation.
fn oracle_distance(a: &[u8], b: &[u8], memo: &mut Vec<Option<usize>>, width: usize) -> usize {
    let idx = a.len() * width + b.len();
    if let Some(v) = memo[idx] {
        return v;
    }
    let v = if a.is_empty() {
        b.len()
    } else if b.is_empty() {
        a.len()
    } else {
        let cost = usize::from(a[a.len() - 1] != b[b.len() - 1]);
        let sub = oracle_distance(&a[..a.len() - 1], &b[..b.len() - 1], memo, width) + cost;
        let del = oracle_distance(&a[..a.len() - 1], b, memo, width) + 1;
        let ins = oracle_distance(a, &b[..b.len() - 1], memo, width) + 1;
        sub.min(del).min(ins)
    };
    memo[idx] = Some(v);
    v
}

#[test]
fn criterion_5_edit_distance_oracle() {
    let alphabet = [0u8, 1, 2];
    let mut strings: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in &alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        strings.extend(next.iter().cloned());
        frontier = next;
    }
    assert_eq!(strings.len(), 1093); // sum of 3^l for l in 0..=6

    let width = 7;
    let mut checked = 0u64;
    for a in &strings {
        for b in &strings {
            let mut memo = vec![None; width * width];
            let want = oracle_distance(a, b, &mut memo, width);
            let got = edit_distance(a, b);
            assert_eq!(got.distance, want, "{a:?} vs {b:?}");
            checked += 1;
        }
    }
    pass(
        "criterion 5",
        format!("edit distance matches the recursive oracle on {checked} pairs"),
    );
}

#[test]
fn criterion_6_noise_calibration() {
    let inv = Inventory::shipped();
    let model = default_confusion_model().with_rates(0.1, 0.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total_tokens = 0usize;
    let mut total_edits = 0usize;
    let mut seed = 0u64;
    while total_tokens < 10_000 {
        let seq = random_phone_sequence(inv, &mut rng, 4, 8);
        let noisy = corrupt(&seq, &model, seed, inv);
        seed += 1;
        total_tokens += seq.phone_tokens().len();
        total_edits += metrics::per_report(&seq, &noisy).distance;
    }
    let per = total_edits as f64 / total_tokens as f64;
    assert!(
        (per - 0.10).abs() <= 0.01,
        "per {per:.4} outside 0.10 ± 0.01 over {total_tokens} phones"
    );
    pass(
        "criterion 6",
        format!("substitution-only PER {per:.4} within 0.10 ± 0.01 over {total_tokens} phones"),
    );
}

#[test]
fn criterion_7_robustness_ordering() {
    let started = Instant::now();
    let g2p = G2pTable::shipped();
    let inv = Inventory::shipped();
    let words = homophone_free_words(180);
    let specs: Vec<WordSpec> = words.iter().map(|w| WordSpec::vi(w)).collect();
    let lex = build_lexicon(&specs, g2p).unwrap();
    let sentences: Vec<String> = words.chunks(6).map(|c| c.join(" ")).collect();
    let lm = train_ngram(sentences.iter(), 2).unwrap();
    let phones: Vec<PhoneSequence> = sentences
        .iter()
        .map(|s| text_to_phones(s, &lex, g2p).unwrap())
        .collect();

    let rates = [0.0, 0.05, 0.1, 0.2, 0.3];
    let seeds: Vec<u64> = (0..30).collect();
    let mean_wer = |rate: f64, fuzzy_k: usize| -> f64 {
        let model = default_confusion_model().with_rates(rate, 0.0, 0.0);
        let cfg = DecodeConfig {
            fuzzy_k,
            ..DecodeConfig::default()
        };
        let mut edits = 0usize;
        let mut total = 0usize;
        for &seed in &seeds {
            for (i, (sentence, clean)) in sentences.iter().zip(&phones).enumerate() {
                let noisy = corrupt(clean, &model, seed.wrapping_mul(1001) ^ i as u64, inv);
                let hyp = decode(&noisy, &lex, &lm, &cfg)
                    .into_iter()
                    .next()
                    .map(|(t, _)| t)
                    .unwrap_or_default();
                let report = metrics::wer_report(sentence, &hyp);
                edits += report.distance;
                total += report.ref_len;
            }
        }
        edits as f64 / total as f64
    };

    let curve: Vec<f64> = rates.iter().map(|&r| mean_wer(r, 1)).collect();
    for pair in curve.windows(2) {
        assert!(
            pair[1] >= pair[0] - 1e-12,
            "WER not monotone over rates: {curve:?}"
        );
    }
    assert_eq!(curve[0], 0.0, "clean decode must be exact");

    let fuzzy0 = mean_wer(0.1, 0);
    let fuzzy1 = curve[2];
    assert!(
        fuzzy1 <= fuzzy0,
        "fuzzy_k=1 ({fuzzy1:.4}) must not lose to fuzzy_k=0 ({fuzzy0:.4})"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    pass(
        "criterion 7",
        format!(
            "mean WER {:?} non-decreasing; fuzzy1 {fuzzy1:.4} <= fuzzy0 {fuzzy0:.4} in {elapsed:?}",
            curve.iter().map(|w| (w * 1e4).round() / 1e4).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_8_homophone_disambiguation() {
    let g2p = G2pTable::shipped();
    let training = [
        "gửi cho tôi cái list",
        "cái list này dài quá",
        "xem cái list bài hát",
        "cái list khách mời",
        "thêm vào cái list",
        "mua một lít xăng",
        "một lít nước lọc",
        "hai lít sữa tươi",
        "ba lít rượu nếp",
        "uống hai lít nước",
    ];
    let held_out = [
        ("cho tôi cái list mới", "list"),
        ("cái list kia đâu rồi", "list"),
        ("xem cái list đó đi", "list"),
        ("cái list dài quá trời", "list"),
        ("gửi cái list qua đây", "list"),
        ("mua ba lít dầu ăn", "lít"),
        ("một lít mật ong", "lít"),
        ("đổ hai lít xăng", "lít"),
        ("bán một lít rượu", "lít"),
        ("uống một lít sữa", "lít"),
    ];

    // Lexicon: every Vietnamese word in play, plus the adapted English word
    // sharing the lít key.
    let mut vocab: BTreeSet<String> = BTreeSet::new();
    for line in training.iter().copied().chain(held_out.iter().map(|(s, _)| *s)) {
        for token in line.split_whitespace() {
            if token != "list" {
                vocab.insert(token.to_string());
            }
        }
    }
    let mut specs: Vec<WordSpec> = vocab.iter().map(|w| WordSpec::vi(w)).collect();
    specs.push(WordSpec::en("list", &["lít"]));
    let lex = build_lexicon(&specs, g2p).unwrap();
    let homophone_key = word_key(&[g2p.word_to_phones("lít").unwrap()]);
    assert_eq!(lex.lookup(&homophone_key).unwrap().len(), 2);

    let lm = train_ngram(training.iter(), 2).unwrap();
    let cfg = DecodeConfig::default();
    let mut correct = 0;
    for (sentence, expected) in &held_out {
        // The surface string always carries the Vietnamese form; both words
        // share the same phones by construction.
        let spoken = sentence.replace("list", "lít");
        let phones = text_to_phones(&spoken, &lex, g2p).unwrap();
        let hyp = decode(&phones, &lex, &lm, &cfg)
            .into_iter()
            .next()
            .map(|(t, _)| t)
            .unwrap_or_default();
        let wanted = sentence
            .split_whitespace()
            .map(|w| if w == "list" || w == "lít" { *expected } else { w })
            .collect::<Vec<_>>()
            .join(" ");
        if hyp == wanted {
            correct += 1;
        } else {
            eprintln!("context `{sentence}`: decoded `{hyp}`");
        }
    }
    assert!(correct >= 9, "only {correct}/10 contexts resolved");
    pass(
        "criterion 8",
        format!("homophone resolved in {correct}/10 held-out contexts"),
    );
}

/// Error rates reported for neural systems need trained acoustic and translation
/// models plus licensed speech corpora; they are out of scope at desk scale.
/// Criteria 4 through 8 stand in for them. This test pins that statement and
/// checks that the stand-in machinery exists and runs.
#[test]
fn criterion_9_neural_error_rates_out_of_scope() {
    let lex = build_lexicon(&[WordSpec::vi("đi")], G2pTable::shipped()).unwrap();
    let lm = train_ngram(["đi"], 1).unwrap();
    let phones = text_to_phones("đi", &lex, G2pTable::shipped()).unwrap();
    let out = decode(&phones, &lex, &lm, &DecodeConfig::default());
    assert_eq!(out[0].0, "đi");
    assert_eq!(lex.lookup(&word_key(&[G2pTable::shipped().word_to_phones("đi").unwrap()])).map(|e| e.len()), Some(1));
    pass(
        "criterion 9",
        "neural-model error rates are not reproduction targets; property suites 4–8 substitute"
            .to_string(),
    );
}
