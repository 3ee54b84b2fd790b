//! Command-line entry point. Every subcommand is a thin shell over the
//! library; all randomness flows from one `--seed` flag, with per-record
//! seeds derived as `seed XOR record-index`.

use std::error::Error;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use csphone::adapt::EnAdapter;
use csphone::decoder::{decode_corpus, DecodeConfig};
use csphone::g2p::{build_lexicon, text_to_phones, Dialect, G2pTable, Lang, Lexicon, WordSpec};
use csphone::metrics::{CorpusReport, EvalPair};
use csphone::ngram::{train_ngram, NGramModel};
use csphone::noise::{corrupt, default_confusion_model, ConfusionModel};
use csphone::phoneme::{parse_phone_sequence, serialize_phone_sequence, Inventory};
use csphone::pipeline::{
    build_p2t_corpus, lexicon_from_corpus, records_from_jsonl, records_to_jsonl, CsRecord,
    PipelineCtx, VariantMode, VariantPolicy,
};

type CliResult = Result<(), Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "csphone",
    version,
    about = "Vietnamese-English code-switching phoneme pipeline"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PolicyArgs {
    /// Variant selection: rank0, exhaustive or sampled
    #[arg(long, default_value = "rank0")]
    mode: String,
    /// Cap on records per sentence
    #[arg(long, default_value_t = 8)]
    max_variants: usize,
    /// Master seed; sub-seeds mix in the record index
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PolicyArgs {
    fn policy(&self) -> Result<VariantPolicy, Box<dyn Error>> {
        let mode = VariantMode::parse(&self.mode)
            .ok_or_else(|| format!("unknown mode `{}`", self.mode))?;
        Ok(VariantPolicy {
            mode,
            max_variants_per_sentence: self.max_variants,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long, default_value_t = 8)]
    beam_width: usize,
    /// Per-syllable phone-edit tolerance for lexicon lookup (0..=2)
    #[arg(long, default_value_t = 1)]
    fuzzy_k: usize,
    #[arg(long, default_value_t = 1.0)]
    lm_weight: f64,
    #[arg(long, default_value_t = 2.0)]
    fuzzy_penalty: f64,
}

impl DecodeArgs {
    fn config(&self) -> DecodeConfig {
        DecodeConfig {
            beam_width: self.beam_width,
            fuzzy_k: self.fuzzy_k,
            lm_weight: self.lm_weight,
            fuzzy_penalty: self.fuzzy_penalty,
        }
    }
}

#[derive(Args)]
struct NoiseArgs {
    /// Confusion model file; the built-in default otherwise
    #[arg(long)]
    noise_profile: Option<PathBuf>,
    #[arg(long)]
    sub_rate: Option<f64>,
    #[arg(long)]
    ins_rate: Option<f64>,
    #[arg(long)]
    del_rate: Option<f64>,
}

impl NoiseArgs {
    fn model(&self) -> Result<ConfusionModel, Box<dyn Error>> {
        let base = match &self.noise_profile {
            Some(path) => ConfusionModel::from_tsv(&fs::read_to_string(path)?)?,
            None => default_confusion_model().clone(),
        };
        let model = base.with_rates(
            self.sub_rate.unwrap_or(base.sub_rate),
            self.ins_rate.unwrap_or(base.ins_rate),
            self.del_rate.unwrap_or(base.del_rate),
        );
        model.validate(Inventory::shipped())?;
        Ok(model)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a phone string and print its canonical serialization
    Parse {
        /// Phone string; stdin when omitted
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Print the parsed structure as JSON
        #[arg(long)]
        json: bool,
    },
    /// Convert Vietnamese (optionally code-switched) text to phones
    G2p {
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Lexicon file resolving English words
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// northern (default) or north-strict
        #[arg(long, default_value = "northern")]
        dialect: String,
    },
    /// Print ranked Vietnamese adaptations of an English word
    Adapt {
        word: String,
        /// Space-separated IPA segments overriding the dictionary
        #[arg(long)]
        ipa: Option<String>,
        #[arg(long)]
        max: Option<usize>,
        /// Also print each variant's phone string
        #[arg(long)]
        phones: bool,
    },
    /// Replace English words with Vietnamese syllable variants
    Localize {
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Build phone-to-text records from a line-oriented corpus
    BuildDataset {
        #[arg(long)]
        input: PathBuf,
        /// Records file (JSON lines); stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        /// Rejected-line file (JSON lines)
        #[arg(long)]
        rejects: Option<PathBuf>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Pass record phones through the noisy channel
    Corrupt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decode record phones back to text (`id<TAB>hypothesis` lines)
    Decode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        lm: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        decode: DecodeArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Score hypotheses against references
    Eval {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
    },
    /// End to end: build dataset, corrupt, decode, score
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        decode: DecodeArgs,
        /// Lexicon file; built from the corpus when omitted
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Language model file; trained on the references when omitted
        #[arg(long)]
        lm: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        lm_order: usize,
        /// Write intermediate records/hypotheses next to the report
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Train a backoff n-gram language model
    TrainLm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a pronunciation lexicon from a word list or a corpus
    BuildLexicon {
        /// TSV word list: `word<TAB>vi|en`
        #[arg(long)]
        words: Option<PathBuf>,
        /// Collect words from a corpus instead
        #[arg(long)]
        from_corpus: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if let Err(e) = apply_config_file(&mut args) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

/// Expands `--config <file>` into flags. Each non-comment line is
/// `key value...` (a bare key becomes a boolean flag); the expansion lands
/// right after the subcommand, so flags given on the command line override
/// the file.
fn apply_config_file(args: &mut Vec<String>) -> Result<(), Box<dyn Error>> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(());
    };
    if pos + 1 >= args.len() {
        return Err("--config needs a file argument".into());
    }
    let path = args[pos + 1].clone();
    args.drain(pos..=pos + 1);
    let insert_at = args
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| !a.starts_with('-'))
        .map(|(i, _)| i + 1)
        .ok_or("--config requires a subcommand")?;
    let mut injected = Vec::new();
    for line in fs::read_to_string(&path)?.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().expect("non-empty line");
        let flag = format!("--{}", key.trim_start_matches("--"));
        if args.contains(&flag) {
            continue; // explicit flags win
        }
        injected.push(flag);
        let value: Vec<&str> = parts.filter(|p| *p != "=").collect();
        if !value.is_empty() {
            injected.push(value.join(" "));
        }
    }
    args.splice(insert_at..insert_at, injected);
    Ok(())
}

fn read_input(text: Option<String>, input: Option<&Path>) -> Result<String, Box<dyn Error>> {
    match (text, input) {
        (Some(t), None) => Ok(t),
        (None, Some(path)) => Ok(fs::read_to_string(path)?),
        (None, None) => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
        (Some(_), Some(_)) => Err("pass either TEXT or --input, not both".into()),
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Box<dyn Error>> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn load_lexicon(path: &Path) -> Result<Lexicon, Box<dyn Error>> {
    Ok(Lexicon::from_tsv(&fs::read_to_string(path)?, Inventory::shipped())?)
}

fn load_records(path: &Path) -> Result<Vec<CsRecord>, Box<dyn Error>> {
    Ok(records_from_jsonl(&fs::read_to_string(path)?)?)
}

fn non_empty_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

fn dialect_table(name: &str) -> Result<G2pTable, Box<dyn Error>> {
    match name {
        "northern" => Ok(G2pTable::new(Dialect::Northern)),
        "north-strict" => Ok(G2pTable::new(Dialect::NorthStrict)),
        other => Err(format!("unknown dialect `{other}`").into()),
    }
}

fn report_text(report: &CorpusReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("sentences: {}\n", report.pairs));
    out.push_str(&format!("reference_words: {}\n", report.ref_words));
    out.push_str(&format!("word_edits: {}\n", report.word_edits));
    out.push_str(&format!(
        "substitutions: {}\ninsertions: {}\ndeletions: {}\n",
        report.word_subs, report.word_ins, report.word_dels
    ));
    out.push_str(&format!("wer: {:.4}\n", report.wer()));
    if report.phone_pairs > 0 {
        out.push_str(&format!("reference_phones: {}\n", report.ref_phones));
        out.push_str(&format!("phone_edits: {}\n", report.phone_edits));
        out.push_str(&format!("per: {:.4}\n", report.per()));
    }
    for (pair, count) in report.top_word_confusions(5) {
        out.push_str(&format!("confusion: {} -> {} ({count})\n", pair.0, pair.1));
    }
    out.push_str(&format!(
        "RESULT\twer={:.6}\tper={:.6}\tsents={}\tref_tokens={}\tsubs={}\tins={}\tdels={}\n",
        report.wer(),
        report.per(),
        report.pairs,
        report.ref_words,
        report.word_subs,
        report.word_ins,
        report.word_dels
    ));
    out
}

fn run(cmd: Cmd) -> CliResult {
    match cmd {
        Cmd::Parse { text, input, json } => {
            let text = read_input(text, input.as_deref())?;
            let seq = parse_phone_sequence(text.trim(), Inventory::shipped())?;
            if json {
                let words: Vec<Vec<serde_json::Value>> = seq
                    .words()
                    .iter()
                    .map(|word| {
                        word.iter()
                            .map(|s| {
                                serde_json::json!({
                                    "onsets": s.onsets,
                                    "nucleus": s.nucleus,
                                    "tone": s.tone.index(),
                                    "coda": s.coda,
                                })
                            })
                            .collect()
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "words": words }))?);
            } else {
                println!("{}", serialize_phone_sequence(&seq));
            }
            Ok(())
        }
        Cmd::G2p {
            text,
            input,
            lexicon,
            dialect,
        } => {
            let table = dialect_table(&dialect)?;
            let lex = match lexicon {
                Some(path) => load_lexicon(&path)?,
                None => Lexicon::new(),
            };
            let text = read_input(text, input.as_deref())?;
            for line in non_empty_lines(&text) {
                let seq = text_to_phones(&line, &lex, &table)?;
                println!("{}", serialize_phone_sequence(&seq));
            }
            Ok(())
        }
        Cmd::Adapt {
            word,
            ipa,
            max,
            phones,
        } => {
            let adapter = EnAdapter::shipped();
            let variants = match ipa {
                Some(segments) => {
                    let w = csphone::adapt::IpaWord::new(&word, &segments)?;
                    adapter.adapt_word(&w)?
                }
                None => adapter.adapt(&word)?,
            };
            let limit = max.unwrap_or(variants.len());
            for v in variants.iter().take(limit) {
                if phones {
                    let syls = v.phones(G2pTable::shipped())?;
                    println!("{}\t{}\t{}", v.rank, v.text(), csphone::g2p::word_key(&syls));
                } else {
                    println!("{}\t{}", v.rank, v.text());
                }
            }
            Ok(())
        }
        Cmd::Localize {
            text,
            input,
            policy,
        } => {
            let policy = policy.policy()?;
            let ctx = PipelineCtx::default();
            let text = read_input(text, input.as_deref())?;
            let build = build_p2t_corpus(non_empty_lines(&text), &policy, &ctx, 1);
            print!("{}", records_to_jsonl(&build.records));
            for r in &build.rejects {
                eprintln!("reject line {}: {}", r.line_no, r.reason);
            }
            Ok(())
        }
        Cmd::BuildDataset {
            input,
            output,
            rejects,
            policy,
            jobs,
        } => {
            let policy = policy.policy()?;
            let ctx = PipelineCtx::default();
            let lines = non_empty_lines(&fs::read_to_string(&input)?);
            let build = build_p2t_corpus(lines, &policy, &ctx, jobs);
            write_output(output.as_deref(), &records_to_jsonl(&build.records))?;
            let rejects_text: String = build
                .rejects
                .iter()
                .map(|r| format!("{}\n", serde_json::to_string(r).expect("reject serializes")))
                .collect();
            match rejects {
                Some(path) => fs::write(path, rejects_text)?,
                None => eprint!("{rejects_text}"),
            }
            eprintln!(
                "built {} records, {} rejects",
                build.records.len(),
                build.rejects.len()
            );
            Ok(())
        }
        Cmd::Corrupt {
            input,
            output,
            noise,
            seed,
            jobs,
        } => {
            let model = noise.model()?;
            let records = load_records(&input)?;
            let inv = Inventory::shipped();
            let corrupted = csphone::pipeline::par_map_ordered(records, jobs, |idx, mut r| {
                if let Ok(seq) = parse_phone_sequence(&r.phones, inv) {
                    let noisy = corrupt(&seq, &model, seed ^ idx as u64, inv);
                    r.phones = serialize_phone_sequence(&noisy);
                }
                r
            });
            write_output(output.as_deref(), &records_to_jsonl(&corrupted))
        }
        Cmd::Decode {
            input,
            lexicon,
            lm,
            output,
            decode,
            jobs,
        } => {
            let records = load_records(&input)?;
            let lex = load_lexicon(&lexicon)?;
            let model = NGramModel::from_text(&fs::read_to_string(&lm)?)?;
            let cfg = decode.config();
            let out = decode_corpus(&records, &lex, &model, &cfg, Inventory::shipped(), jobs);
            let text: String = out
                .iter()
                .map(|(id, hyp)| format!("{id}\t{hyp}\n"))
                .collect();
            write_output(output.as_deref(), &text)
        }
        Cmd::Eval { reference, hyp } => {
            let refs = non_empty_lines(&fs::read_to_string(&reference)?);
            let hyps: Vec<String> = non_empty_lines(&fs::read_to_string(&hyp)?)
                .into_iter()
                .map(|line| match line.split_once('\t') {
                    Some((_, text)) => text.to_string(),
                    None => line,
                })
                .collect();
            if refs.len() != hyps.len() {
                return Err(format!(
                    "reference has {} lines, hypothesis has {}",
                    refs.len(),
                    hyps.len()
                )
                .into());
            }
            let pairs: Vec<EvalPair> = refs
                .into_iter()
                .zip(hyps)
                .map(|(reference, hypothesis)| EvalPair {
                    reference,
                    hypothesis,
                    ..Default::default()
                })
                .collect();
            let report = csphone::metrics::corpus_report(&pairs);
            print!("{}", report_text(&report));
            Ok(())
        }
        Cmd::Pipeline {
            input,
            policy,
            noise,
            decode: decode_args,
            lexicon,
            lm,
            lm_order,
            output_dir,
            jobs,
        } => {
            let policy = policy.policy()?;
            let ctx = PipelineCtx::default();
            let inv = Inventory::shipped();
            let lines = non_empty_lines(&fs::read_to_string(&input)?);

            let lex = match &lexicon {
                Some(path) => load_lexicon(path)?,
                None => {
                    let (lex, oov) = lexicon_from_corpus(&lines, &ctx);
                    for word in &oov {
                        eprintln!("note: `{word}` is not in the pronouncing dictionary");
                    }
                    lex
                }
            };
            let model = match &lm {
                Some(path) => NGramModel::from_text(&fs::read_to_string(path)?)?,
                None => train_ngram(lines.iter(), lm_order)?,
            };

            let build = build_p2t_corpus(lines.clone(), &policy, &ctx, jobs);
            let noise_model = noise.model()?;
            let corrupted = csphone::pipeline::par_map_ordered(
                build.records.clone(),
                jobs,
                |idx, mut r| {
                    if let Ok(seq) = parse_phone_sequence(&r.phones, inv) {
                        let noisy = corrupt(&seq, &noise_model, policy.seed ^ idx as u64, inv);
                        r.phones = serialize_phone_sequence(&noisy);
                    }
                    r
                },
            );
            let cfg = decode_args.config();
            let hyps = decode_corpus(&corrupted, &lex, &model, &cfg, inv, jobs);

            let pairs: Vec<EvalPair> = build
                .records
                .iter()
                .zip(corrupted.iter())
                .zip(hyps.iter())
                .map(|((clean, noisy), (_, hyp))| EvalPair {
                    reference: clean.reference.clone(),
                    hypothesis: hyp.clone(),
                    ref_phones: parse_phone_sequence(&clean.phones, inv).ok(),
                    hyp_phones: parse_phone_sequence(&noisy.phones, inv).ok(),
                })
                .collect();
            let report = csphone::metrics::corpus_report(&pairs);

            if let Some(dir) = &output_dir {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("records.jsonl"), records_to_jsonl(&build.records))?;
                fs::write(dir.join("corrupted.jsonl"), records_to_jsonl(&corrupted))?;
                let hyp_text: String = hyps
                    .iter()
                    .map(|(id, h)| format!("{id}\t{h}\n"))
                    .collect();
                fs::write(dir.join("hypotheses.tsv"), hyp_text)?;
                fs::write(dir.join("lexicon.tsv"), lex.to_tsv())?;
                fs::write(dir.join("lm.txt"), model.to_text())?;
            }

            println!("records: {}", build.records.len());
            println!("rejects: {}", build.rejects.len());
            println!(
                "noise: sub={} ins={} del={}",
                noise_model.sub_rate, noise_model.ins_rate, noise_model.del_rate
            );
            print!("{}", report_text(&report));
            Ok(())
        }
        Cmd::TrainLm {
            input,
            order,
            output,
        } => {
            if !(1..=4).contains(&order) {
                return Err("supported orders are 1..=4".into());
            }
            let lines = non_empty_lines(&fs::read_to_string(&input)?);
            let model = train_ngram(lines.iter(), order)?;
            write_output(output.as_deref(), &model.to_text())
        }
        Cmd::BuildLexicon {
            words,
            from_corpus,
            output,
        } => {
            let adapter = EnAdapter::shipped();
            let g2p = G2pTable::shipped();
            let lex = match (words, from_corpus) {
                (Some(path), None) => {
                    let mut specs = Vec::new();
                    for (line_no, fields) in
                        csphone::tables::tsv_rows(&fs::read_to_string(&path)?)
                    {
                        if fields.len() < 2 {
                            return Err(format!("word list line {line_no}: expected word<TAB>lang").into());
                        }
                        let word = fields[0];
                        match Lang::parse(fields[1]) {
                            Some(Lang::Vi) => specs.push(WordSpec::vi(word)),
                            Some(Lang::En) => {
                                let variants = adapter.adapt(word)?;
                                let texts: Vec<String> =
                                    variants.iter().map(|v| v.text()).collect();
                                let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
                                specs.push(WordSpec::en(word, &refs));
                            }
                            None => {
                                return Err(format!(
                                    "word list line {line_no}: unknown language `{}`",
                                    fields[1]
                                )
                                .into())
                            }
                        }
                    }
                    build_lexicon(&specs, g2p)?
                }
                (None, Some(path)) => {
                    let lines = non_empty_lines(&fs::read_to_string(&path)?);
                    let (lex, oov) = lexicon_from_corpus(&lines, &PipelineCtx::default());
                    for word in &oov {
                        eprintln!("note: `{word}` is not in the pronouncing dictionary");
                    }
                    lex
                }
                _ => return Err("pass exactly one of --words or --from-corpus".into()),
            };
            write_output(output.as_deref(), &lex.to_tsv())
        }
    }
}
