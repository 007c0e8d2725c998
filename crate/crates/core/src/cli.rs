//! `langmix` command-line interface.
//!
//! Exit codes: 0 on success, 1 for operational errors (unreadable or invalid
//! input), 2 for usage errors. Machine output is JSON/JSONL; `--format table`
//! selects aligned text where a command has a human-readable form.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{self, Document, Format, LoadOptions, SampleSpec, Stratum};
use crate::detector::{detect_batch, DetectConfig, DetectionResult, DEFAULT_CHUNKS};
use crate::error::{Error, Result};
use crate::eval::{self, chi_square_gof, ChiSquareResult, EvaluationDocument};
use crate::langid::{LanguageProfile, NgramConfig, Prediction, ProfileSet, DEFAULT_MIN_CHARS};
use crate::synthgen::{self, MixSpec};
use crate::tag::{ClassScheme, LanguageTag};

/// Seed used by `sample` and `synth` when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(name = "langmix", version, about = "Language identification and code-switching detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TagSource {
    Gold,
    Pred,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// Input corpus path, or `-` for standard input
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value = "jsonl")]
    input_format: InputFormat,
    #[arg(long, default_value = "text")]
    text_field: String,
    #[arg(long, default_value = "id")]
    id_field: String,
    /// Field holding manual (gold) tags
    #[arg(long, default_value = "tags")]
    tag_field: String,
    /// Field holding detector (predicted) tags
    #[arg(long, default_value = "pred")]
    pred_field: String,
}

impl CorpusArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            format: match self.input_format {
                InputFormat::Jsonl => Format::Jsonl,
                InputFormat::Csv => Format::Csv,
            },
            text_field: self.text_field.clone(),
            id_field: Some(self.id_field.clone()),
            tag_field: Some(self.tag_field.clone()),
            pred_field: Some(self.pred_field.clone()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a character n-gram profile from a text file (one sentence per line)
    Train {
        #[arg(long)]
        lang: String,
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        out: String,
        #[arg(long, default_value_t = 1)]
        nmin: usize,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Rank languages for single texts
    Identify {
        /// Directory of `*.profile` files
        #[arg(long)]
        profiles: PathBuf,
        /// Text to identify; without it, every line of --input is identified
        #[arg(long)]
        text: Option<String>,
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, default_value_t = DEFAULT_MIN_CHARS)]
        min_chars: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Chunk, identify and tag every document of a corpus
    Detect {
        #[arg(long)]
        profiles: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, default_value_t = DEFAULT_CHUNKS)]
        chunks: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_CHARS)]
        min_chars: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Drop documents whose normalized text was already seen
    Dedupe {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Seeded uniform sample without replacement, optionally within a stratum
    Sample {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// `all`, `code-switched` (en/zu/xh pairs), or a predicted tag such as `en` or `en,zu`
        #[arg(long, default_value = "all")]
        stratum: String,
    },
    /// Proportion of each composite class
    Distribution {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long = "use", value_enum, default_value = "gold")]
        source: TagSource,
        /// Class to keep (repeatable); everything else becomes `other`
        #[arg(long = "class")]
        classes: Vec<String>,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Confusion matrix and weighted metrics of predicted against gold tags
    Evaluate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long = "class")]
        classes: Vec<String>,
        /// Expected proportions for a goodness-of-fit test of the gold
        /// distribution, one per --class followed by `other`
        #[arg(long, value_delimiter = ',')]
        expected: Vec<f64>,
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Accuracy of always predicting the most frequent gold class
    Baseline {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Chi-square goodness-of-fit test
    Chisq {
        #[arg(long, value_delimiter = ',', required = true)]
        observed: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        expected: Vec<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Generate a gold-tagged synthetic corpus from two word pools
    Synth {
        #[arg(long)]
        lang_a: String,
        #[arg(long)]
        lang_b: String,
        /// Whitespace-separated words for the first language
        #[arg(long)]
        pool_a: PathBuf,
        #[arg(long)]
        pool_b: PathBuf,
        #[arg(long)]
        n_docs: usize,
        #[arg(long, default_value_t = 0.5)]
        mix_rate: f64,
        #[arg(long, default_value_t = 12)]
        tokens_per_doc: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_all(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            Ok(std::fs::read_to_string(path)?)
        }
    }

    fn reader(&mut self, path: &str) -> Result<Box<dyn BufRead + '_>> {
        if path == "-" {
            Ok(Box::new(BufReader::new(&mut *self.stdin)))
        } else {
            Ok(Box::new(BufReader::new(File::open(path)?)))
        }
    }

    fn writer(&mut self, path: &str) -> Result<Box<dyn Write + '_>> {
        if path == "-" {
            Ok(Box::new(&mut *self.stdout))
        } else {
            Ok(Box::new(BufWriter::new(File::create(path)?)))
        }
    }

    fn load(&mut self, args: &CorpusArgs) -> Result<Vec<Document>> {
        let opts = args.options();
        corpus::load_reader(self.reader(&args.input)?, &opts)
    }
}

fn json_line<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value).map_err(io::Error::from)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn json_doc<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::from)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn tags_of(docs: &[Document], source: TagSource) -> Result<Vec<LanguageTag>> {
    docs.iter()
        .enumerate()
        .map(|(i, d)| {
            let (tag, field) = match source {
                TagSource::Gold => (&d.gold_tag, "tags"),
                TagSource::Pred => (&d.pred_tag, "pred"),
            };
            tag.clone().ok_or_else(|| Error::MissingField { line: i + 1, field: field.into() })
        })
        .collect()
}

fn scheme(classes: &[String]) -> Result<ClassScheme> {
    if classes.is_empty() {
        Ok(ClassScheme::Exact)
    } else {
        ClassScheme::bucketed(classes)
    }
}

#[derive(Serialize)]
struct ChunkRecord<'a> {
    index: usize,
    text: &'a str,
    lang: &'a str,
    confidence: f64,
    avg_log_likelihood: f64,
    reliable: bool,
}

#[derive(Serialize)]
struct DetectRecord<'a> {
    id: &'a str,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tags: Option<&'a LanguageTag>,
    pred: &'a LanguageTag,
    code_switched: bool,
    chunks: Vec<ChunkRecord<'a>>,
}

fn detect_record<'a>(doc: &'a Document, r: &'a DetectionResult) -> DetectRecord<'a> {
    DetectRecord {
        id: &doc.id,
        text: &doc.text,
        tags: doc.gold_tag.as_ref(),
        pred: &r.tag,
        code_switched: r.code_switched,
        chunks: r
            .chunks
            .iter()
            .map(|c| ChunkRecord {
                index: c.index,
                text: &c.text,
                lang: &c.prediction.lang,
                confidence: c.prediction.confidence,
                avg_log_likelihood: c.prediction.avg_log_likelihood,
                reliable: c.reliable,
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct IdentifyRecord<'a> {
    text: &'a str,
    predictions: Vec<Prediction>,
}

#[derive(Serialize)]
struct ChiSquareOutput {
    #[serde(flatten)]
    result: ChiSquareResult,
    p_display: String,
}

fn parse_stratum(s: &str) -> Result<Stratum> {
    match s {
        "all" => Ok(Stratum::All),
        "code-switched" => Ok(Stratum::code_switched()),
        tag => Ok(Stratum::Pred(tag.parse()?)),
    }
}

fn read_pool(path: &Path) -> Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?.split_whitespace().map(str::to_string).collect())
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<()> {
    match command {
        Command::Train { lang, input, out, nmin, nmax, alpha } => {
            let text = io.read_all(&input)?;
            let profile = LanguageProfile::train(text.lines(), &lang, NgramConfig { n_min: nmin, n_max: nmax, alpha })?;
            io.writer(&out)?.write_all(profile.to_text().as_bytes())?;
        }
        Command::Identify { profiles, text, input, out, min_chars, format } => {
            let set = ProfileSet::load_dir(&profiles)?;
            let texts: Vec<String> = match text {
                Some(t) => vec![t],
                None => io.read_all(&input)?.lines().map(str::to_string).collect(),
            };
            let mut w = io.writer(&out)?;
            for t in &texts {
                let predictions = set.identify(t, min_chars);
                match format {
                    OutputFormat::Json => json_line(&mut *w, &IdentifyRecord { text: t, predictions })?,
                    OutputFormat::Table => {
                        let top = &predictions[0];
                        writeln!(w, "{:<6} {:.4}  {}", top.lang, top.confidence, t)?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Detect { profiles, corpus, out, chunks, min_chars, format } => {
            if chunks == 0 {
                return Err(Error::InvalidConfig("--chunks must be at least 1".into()));
            }
            let set = ProfileSet::load_dir(&profiles)?;
            let docs = io.load(&corpus)?;
            let results = detect_batch(&docs, &set, DetectConfig { chunks, min_chars })?;
            let mut w = io.writer(&out)?;
            for (doc, r) in docs.iter().zip(&results) {
                match format {
                    OutputFormat::Json => json_line(&mut *w, &detect_record(doc, r))?,
                    OutputFormat::Table => {
                        let chunk_langs: Vec<&str> = r.chunks.iter().map(|c| c.prediction.lang.as_str()).collect();
                        writeln!(w, "{:<12} {:<10} {:<5} {}", doc.id, r.tag, r.code_switched, chunk_langs.join(" "))?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Dedupe { corpus, out } => {
            let docs = io.load(&corpus)?;
            let mut w = io.writer(&out)?;
            corpus::write_jsonl(&mut w, &corpus::dedupe(&docs))?;
            w.flush()?;
        }
        Command::Sample { corpus, out, n, seed, stratum } => {
            let stratum = parse_stratum(&stratum)?;
            let docs = io.load(&corpus)?;
            let picked = corpus::sample(&docs, &SampleSpec { n, seed, stratum })?;
            let mut w = io.writer(&out)?;
            corpus::write_jsonl(&mut w, &picked)?;
            w.flush()?;
        }
        Command::Distribution { corpus, source, classes, out, format } => {
            let scheme = scheme(&classes)?;
            let docs = io.load(&corpus)?;
            let dist = corpus::label_distribution(&tags_of(&docs, source)?, &scheme)?;
            let mut w = io.writer(&out)?;
            match format {
                OutputFormat::Json => json_doc(&mut *w, &dist)?,
                OutputFormat::Table => {
                    let width = dist.classes.iter().map(|c| c.class.len()).max().unwrap_or(5).max(5);
                    writeln!(w, "{:<width$}  {:>7}  {:>8}", "class", "count", "percent")?;
                    for c in &dist.classes {
                        writeln!(w, "{:<width$}  {:>7}  {:>8.2}", c.class, c.count, 100.0 * c.proportion)?;
                    }
                    writeln!(w, "{:<width$}  {:>7}", "total", dist.total)?;
                }
            }
            w.flush()?;
        }
        Command::Evaluate { corpus, classes, expected, out, format } => {
            let scheme = scheme(&classes)?;
            let docs = io.load(&corpus)?;
            let gold = tags_of(&docs, TagSource::Gold)?;
            let pred = tags_of(&docs, TagSource::Pred)?;
            let confusion = eval::confusion(&gold, &pred, &scheme)?;
            let chi_square = if expected.is_empty() {
                None
            } else {
                if matches!(scheme, ClassScheme::Exact) {
                    return Err(Error::InvalidConfig("--expected needs --class to fix the categories".into()));
                }
                let dist = corpus::label_distribution(&gold, &scheme)?;
                Some(chi_square_gof(&dist.counts(), &expected)?)
            };
            let doc = EvaluationDocument {
                metrics: eval::metrics(&confusion)?,
                confusion,
                majority_baseline: eval::majority_baseline(&gold)?,
                chi_square,
            };
            let mut w = io.writer(&out)?;
            match format {
                OutputFormat::Json => json_doc(&mut *w, &doc)?,
                OutputFormat::Table => w.write_all(doc.render_table().as_bytes())?,
            }
            w.flush()?;
        }
        Command::Baseline { corpus, format } => {
            let docs = io.load(&corpus)?;
            let baseline = eval::majority_baseline(&tags_of(&docs, TagSource::Gold)?)?;
            match format {
                OutputFormat::Json => json_line(io.stdout, &serde_json::json!({ "majority_baseline": baseline }))?,
                OutputFormat::Table => writeln!(io.stdout, "majority baseline  {baseline}")?,
            }
        }
        Command::Chisq { observed, expected, format } => {
            let result = chi_square_gof(&observed, &expected)?;
            match format {
                OutputFormat::Json => {
                    json_line(io.stdout, &ChiSquareOutput { result, p_display: result.p_display() })?;
                }
                OutputFormat::Table => writeln!(
                    io.stdout,
                    "chi-square = {:.3}, df = {}, p {}",
                    result.statistic,
                    result.df,
                    result.p_display()
                )?,
            }
        }
        Command::Synth { lang_a, lang_b, pool_a, pool_b, n_docs, mix_rate, tokens_per_doc, seed, out } => {
            let spec = MixSpec {
                lang_a,
                lang_b,
                source_a: read_pool(&pool_a)?,
                source_b: read_pool(&pool_b)?,
                n_docs,
                mix_rate,
                tokens_per_doc,
                seed,
            };
            let docs = synthgen::generate(&spec)?;
            let mut w = io.writer(&out)?;
            corpus::write_jsonl(&mut w, &docs)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return ExitStatus::Success;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("usage error");
            let _ = writeln!(stderr, "{line}");
            return ExitStatus::Usage;
        }
    };
    let mut io = Io { stdin, stdout };
    match execute(cli.command, &mut io) {
        Ok(()) => ExitStatus::Success,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitStatus::Failure
        }
    }
}

pub fn run<I, T>(argv: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = run_with(argv, &mut stdin.lock(), &mut out, &mut io::stderr());
    let _ = out.flush();
    status
}
