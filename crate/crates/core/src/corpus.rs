//! Corpus ingestion, deduplication and reproducible sampling.
//!
//! Sampling uses a ChaCha8 stream seeded with `ChaCha8Rng::seed_from_u64(seed)`
//! and a partial Fisher-Yates shuffle over the stratum's positions; the
//! selected documents are returned in original corpus order. The generator
//! output is platform-independent, so a seed names the same sample everywhere.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::tag::{ClassScheme, LanguageTag};
use crate::textnorm::normalize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(rename = "tags", skip_serializing_if = "Option::is_none")]
    pub gold_tag: Option<LanguageTag>,
    #[serde(rename = "pred", skip_serializing_if = "Option::is_none")]
    pub pred_tag: Option<LanguageTag>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into(), gold_tag: None, pred_tag: None }
    }

    pub fn with_gold(mut self, tag: LanguageTag) -> Self {
        self.gold_tag = Some(tag);
        self
    }

    pub fn with_pred(mut self, tag: LanguageTag) -> Self {
        self.pred_tag = Some(tag);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::InvalidConfig(format!("unknown corpus format {s:?}"))),
        }
    }
}

/// Field names to read from each record. Absent `id` values fall back to the
/// 0-based record index; absent tag values leave the tag unset.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub format: Format,
    pub text_field: String,
    pub id_field: Option<String>,
    pub tag_field: Option<String>,
    pub pred_field: Option<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            format: Format::Jsonl,
            text_field: "text".into(),
            id_field: Some("id".into()),
            tag_field: Some("tags".into()),
            pred_field: Some("pred".into()),
        }
    }
}

fn parse_tag(raw: Option<&str>, line: usize) -> Result<Option<LanguageTag>> {
    match raw.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|e| Error::Parse { line, message: format!("{e}") }),
    }
}

fn json_field<'a>(obj: &'a Map<String, Value>, field: &str, line: usize) -> Result<Option<String>> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(other) => Err(Error::Parse { line, message: format!("field {field:?} must be a string, got {other}") }),
    }
}

fn build(
    index: usize,
    line: usize,
    text: Option<String>,
    id: Option<String>,
    gold: Option<String>,
    pred: Option<String>,
    opts: &LoadOptions,
) -> Result<Document> {
    let text = text.ok_or_else(|| Error::MissingField { line, field: opts.text_field.clone() })?;
    Ok(Document {
        id: id.unwrap_or_else(|| index.to_string()),
        text,
        gold_tag: parse_tag(gold.as_deref(), line)?,
        pred_tag: parse_tag(pred.as_deref(), line)?,
    })
}

fn load_jsonl(reader: impl BufRead, opts: &LoadOptions) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let Value::Object(obj) = value else {
            return Err(Error::Parse { line: line_no, message: "expected a JSON object".into() });
        };
        let get = |f: &Option<String>| -> Result<Option<String>> {
            match f {
                Some(f) => json_field(&obj, f, line_no),
                None => Ok(None),
            }
        };
        let doc = build(
            docs.len(),
            line_no,
            json_field(&obj, &opts.text_field, line_no)?,
            get(&opts.id_field)?,
            get(&opts.tag_field)?,
            get(&opts.pred_field)?,
            opts,
        )?;
        docs.push(doc);
    }
    Ok(docs)
}

fn load_csv(reader: impl BufRead, opts: &LoadOptions) -> Result<Vec<Document>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(Error::Parse { line: 1, message: e.to_string() }),
    };
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    let column = |f: &Option<String>| f.as_ref().and_then(|f| headers.iter().position(|h| h == f));
    let Some(text_col) = headers.iter().position(|h| h == opts.text_field) else {
        return Err(Error::MissingField { line: 1, field: opts.text_field.clone() });
    };
    let (id_col, tag_col, pred_col) = (column(&opts.id_field), column(&opts.tag_field), column(&opts.pred_field));
    let mut docs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cell = |c: Option<usize>| c.and_then(|c| record.get(c)).map(str::to_string);
        let doc = build(
            docs.len(),
            line,
            cell(Some(text_col)),
            cell(id_col).filter(|s| !s.is_empty()),
            cell(tag_col),
            cell(pred_col),
            opts,
        )?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn load_reader(reader: impl BufRead, opts: &LoadOptions) -> Result<Vec<Document>> {
    match opts.format {
        Format::Jsonl => load_jsonl(reader, opts),
        Format::Csv => load_csv(reader, opts),
    }
}

pub fn load(path: impl AsRef<std::path::Path>, opts: &LoadOptions) -> Result<Vec<Document>> {
    let file = std::fs::File::open(path)?;
    load_reader(std::io::BufReader::new(file), opts)
}

/// Writes one JSON object per document (`id`, `text`, and `tags`/`pred` when set).
pub fn write_jsonl(mut w: impl Write, docs: &[Document]) -> Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut w, doc).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Keeps the first document of each normalized-text class, in order.
pub fn dedupe(docs: &[Document]) -> Vec<Document> {
    let mut seen = HashSet::new();
    docs.iter().filter(|d| seen.insert(normalize(&d.text))).cloned().collect()
}

/// Which documents are eligible for a sample, judged by their predicted tag.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Stratum {
    #[default]
    All,
    /// Predicted tag set-equal to this tag.
    Pred(LanguageTag),
    /// Predicted tag set-equal to any of these.
    PredAnyOf(Vec<LanguageTag>),
}

impl Stratum {
    /// Pairwise mixes of English, isiZulu and isiXhosa.
    pub fn code_switched() -> Self {
        let pairs = ["en,zu", "en,xh", "zu,xh"].map(|p| p.parse().expect("valid tag"));
        Self::PredAnyOf(pairs.to_vec())
    }

    pub fn matches(&self, doc: &Document) -> bool {
        match (self, &doc.pred_tag) {
            (Self::All, _) => true,
            (Self::Pred(t), Some(p)) => t == p,
            (Self::PredAnyOf(ts), Some(p)) => ts.contains(p),
            (_, None) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub n: usize,
    pub seed: u64,
    pub stratum: Stratum,
}

/// Uniform sample of `spec.n` distinct documents from the stratum.
pub fn sample(docs: &[Document], spec: &SampleSpec) -> Result<Vec<Document>> {
    if spec.n == 0 {
        return Err(Error::InvalidConfig("sample size must be positive".into()));
    }
    let mut population: Vec<usize> = (0..docs.len()).filter(|&i| spec.stratum.matches(&docs[i])).collect();
    if population.len() < spec.n {
        return Err(Error::InsufficientPopulation { requested: spec.n, available: population.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for i in 0..spec.n {
        let j = rng.random_range(i..population.len());
        population.swap(i, j);
    }
    let mut chosen = population[..spec.n].to_vec();
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|i| docs[i].clone()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassShare {
    pub class: String,
    pub count: usize,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub total: usize,
    pub classes: Vec<ClassShare>,
}

impl Distribution {
    pub fn proportion(&self, class: &str) -> Option<f64> {
        self.classes.iter().find(|c| c.class == class).map(|c| c.proportion)
    }

    pub fn counts(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.count as u64).collect()
    }
}

/// Share of each composite class among `tags`.
pub fn label_distribution(tags: &[LanguageTag], scheme: &ClassScheme) -> Result<Distribution> {
    if tags.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for t in tags {
        *counts.entry(scheme.classify(t)).or_default() += 1;
    }
    let total = tags.len();
    let classes = scheme
        .ordered_classes(counts.keys().map(String::as_str))
        .into_iter()
        .map(|class| {
            let count = counts.get(&class).copied().unwrap_or(0);
            ClassShare { class, count, proportion: count as f64 / total as f64 }
        })
        .collect();
    Ok(Distribution { total, classes })
}
