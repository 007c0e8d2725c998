//! Chunk-based code-switching detection.
//!
//! A question is normalized, split on spaces into at most `k` balanced chunks,
//! each chunk is identified on its own, and the distinct reliable chunk
//! languages form the document tag.

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::langid::{Prediction, ProfileSet, DEFAULT_MIN_CHARS};
use crate::tag::{LanguageTag, UNDETERMINED};
use crate::textnorm::{normalize, tokens};

pub const DEFAULT_CHUNKS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectConfig {
    pub chunks: usize,
    pub min_chars: usize,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self { chunks: DEFAULT_CHUNKS, min_chars: DEFAULT_MIN_CHARS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChunkResult {
    pub index: usize,
    pub text: String,
    pub prediction: Prediction,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub doc_id: String,
    pub chunks: Vec<ChunkResult>,
    pub tag: LanguageTag,
    pub code_switched: bool,
}

/// Splits `tokens` into `min(k, len)` contiguous chunks whose sizes differ by at
/// most one, larger chunks first.
pub fn split_chunks<T>(tokens: &[T], k: usize) -> Result<Vec<&[T]>> {
    if tokens.is_empty() {
        return Err(Error::EmptyTokens);
    }
    if k == 0 {
        return Err(Error::InvalidConfig("chunk count must be at least 1".into()));
    }
    let m = k.min(tokens.len());
    let base = tokens.len() / m;
    let extra = tokens.len() % m;
    let mut chunks = Vec::with_capacity(m);
    let mut start = 0;
    for i in 0..m {
        let size = base + usize::from(i < extra);
        chunks.push(&tokens[start..start + size]);
        start += size;
    }
    Ok(chunks)
}

/// Distinct non-`und` languages in first-occurrence order, or `und` if none.
pub fn aggregate<S: AsRef<str>>(chunk_langs: &[S]) -> LanguageTag {
    let reliable: Vec<&str> = chunk_langs.iter().map(AsRef::as_ref).filter(|l| *l != UNDETERMINED).collect();
    if reliable.is_empty() {
        LanguageTag::undetermined()
    } else {
        // profile languages are validated codes, so this cannot fail
        LanguageTag::new(reliable).expect("chunk languages are valid codes")
    }
}

/// Runs the full pipeline on one text.
pub fn detect_text(doc_id: &str, text: &str, profiles: &ProfileSet, config: DetectConfig) -> Result<DetectionResult> {
    let norm = normalize(text);
    let toks = tokens(&norm);
    if toks.is_empty() {
        return Ok(DetectionResult {
            doc_id: doc_id.to_string(),
            chunks: Vec::new(),
            tag: LanguageTag::undetermined(),
            code_switched: false,
        });
    }
    let chunks: Vec<ChunkResult> = split_chunks(&toks, config.chunks)?
        .into_iter()
        .enumerate()
        .map(|(index, chunk)| {
            let text = chunk.join(" ");
            let prediction = profiles.identify(&text, config.min_chars).swap_remove(0);
            let reliable = !prediction.is_undetermined();
            ChunkResult { index, text, prediction, reliable }
        })
        .collect();
    let langs: Vec<&str> = chunks.iter().map(|c| c.prediction.lang.as_str()).collect();
    let tag = aggregate(&langs);
    Ok(DetectionResult { doc_id: doc_id.to_string(), code_switched: tag.len() >= 2, chunks, tag })
}

pub fn detect(doc: &Document, profiles: &ProfileSet, config: DetectConfig) -> Result<DetectionResult> {
    detect_text(&doc.id, &doc.text, profiles, config)
}

/// Detects a batch in parallel; results come back in input order.
pub fn detect_batch(docs: &[Document], profiles: &ProfileSet, config: DetectConfig) -> Result<Vec<DetectionResult>> {
    docs.par_iter().map(|d| detect(d, profiles, config)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langid::{LanguageProfile, NgramConfig};

    fn sizes(n: usize, k: usize) -> Vec<usize> {
        let toks: Vec<usize> = (0..n).collect();
        split_chunks(&toks, k).unwrap().iter().map(|c| c.len()).collect()
    }

    #[test]
    fn balanced_split() {
        assert_eq!(sizes(10, 4), [3, 3, 2, 2]);
        assert_eq!(sizes(3, 4), [1, 1, 1]);
        assert_eq!(sizes(8, 4), [2, 2, 2, 2]);
        assert_eq!(sizes(5, 1), [5]);
    }

    #[test]
    fn split_errors() {
        let empty: [&str; 0] = [];
        assert!(matches!(split_chunks(&empty, 4), Err(Error::EmptyTokens)));
        assert!(matches!(split_chunks(&["a"], 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn code_mixed_question_chunks() {
        let norm = normalize("kuyenzeka yini kuthi umakuqhume condom kuvele kuthi khulelwe after day");
        let toks = tokens(&norm);
        let chunks: Vec<String> = split_chunks(&toks, 4).unwrap().iter().map(|c| c.join(" ")).collect();
        assert_eq!(chunks, ["kuyenzeka yini kuthi", "umakuqhume condom kuvele", "kuthi khulelwe", "after day"]);
    }

    #[test]
    fn aggregate_rules() {
        assert_eq!(aggregate(&["en", "en", "zu", "en"]).to_string(), "en,zu");
        assert!(aggregate(&["und", "und", "und", "und"]).is_undetermined());
        let t = aggregate(&["zu", "en", "zu", "en"]);
        assert_eq!(t.to_string(), "zu,en");
        assert_eq!(t, "en,zu".parse().unwrap());
        assert_eq!(aggregate(&["und", "xh"]).to_string(), "xh");
    }

    fn profiles() -> ProfileSet {
        let cfg = NgramConfig::default();
        ProfileSet::new([
            LanguageProfile::train(["abab cabba bacca abc cab", "acab baba cc"], "xa", cfg).unwrap(),
            LanguageProfile::train(["xyxy zyx yzzy zxy", "yyx zzx xyz"], "xb", cfg).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn digits_only_document_is_undetermined() {
        let r = detect_text("d", "12345 !!!", &profiles(), DetectConfig::default()).unwrap();
        assert!(r.tag.is_undetermined());
        assert!(r.chunks.is_empty());
        assert!(!r.code_switched);
    }

    #[test]
    fn two_halves_are_code_switched() {
        let r = detect_text("d", "abba cab baca xyz zyx yzy", &profiles(), DetectConfig::default()).unwrap();
        assert_eq!(r.tag.to_string(), "xa,xb");
        assert!(r.code_switched);
        assert_eq!(r.chunks.len(), 4);
        let r = detect_text("d", "abba cab baca", &profiles(), DetectConfig::default()).unwrap();
        assert_eq!(r.tag.to_string(), "xa");
        assert!(!r.code_switched);
    }

    #[test]
    fn short_chunks_are_unreliable() {
        let r = detect_text("d", "ab c xyzzy", &profiles(), DetectConfig { chunks: 3, min_chars: 3 }).unwrap();
        assert_eq!(r.chunks.iter().map(|c| c.reliable).collect::<Vec<_>>(), [false, false, true]);
        assert_eq!(r.tag.to_string(), "xb");
    }
}
