use std::sync::OnceLock;

use langmix::eval::chi_square_gof;
use langmix::{detector, textnorm, DetectConfig, LanguageProfile, NgramConfig, ProfileSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const TRAINING: [(&str, &str); 3] = [
    ("en", include_str!("../../core/fixtures/train/en.txt")),
    ("zu", include_str!("../../core/fixtures/train/zu.txt")),
    ("xh", include_str!("../../core/fixtures/train/xh.txt")),
];

fn profiles() -> &'static ProfileSet {
    static PROFILES: OnceLock<ProfileSet> = OnceLock::new();
    PROFILES.get_or_init(|| {
        let trained = TRAINING.iter().map(|(lang, text)| {
            LanguageProfile::train(text.lines(), lang, NgramConfig::default()).expect("bundled training text is non-empty")
        });
        ProfileSet::new(trained).expect("bundled profiles are consistent")
    })
}

fn error(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, String> {
    raw.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|part| !part.is_empty())
        .map(|part| part.parse().map_err(|_| format!("invalid {what} value '{part}'")))
        .collect()
}

/// Normalized form of `text` as a JSON object with the token list.
pub fn normalize_json(text: &str) -> String {
    let normalized = textnorm::normalize(text);
    json!({ "normalized": normalized, "tokens": textnorm::tokens(&normalized) }).to_string()
}

/// Chunked detection of `text` with the bundled en/zu/xh profiles.
pub fn detect_json(text: &str, chunks: usize, min_chars: usize) -> String {
    let config = DetectConfig { chunks, min_chars };
    match detector::detect_text("input", text, profiles(), config) {
        Ok(result) => {
            let chunks: Vec<Value> = result
                .chunks
                .iter()
                .map(|c| {
                    json!({
                        "index": c.index,
                        "text": c.text,
                        "lang": c.prediction.lang,
                        "confidence": c.prediction.confidence,
                        "reliable": c.reliable,
                    })
                })
                .collect();
            json!({
                "tag": result.tag.to_string(),
                "code_switched": result.code_switched,
                "chunks": chunks,
                "ranking": profiles().identify(text, min_chars),
            })
            .to_string()
        }
        Err(e) => error(e),
    }
}

/// Chi-square goodness of fit of comma- or space-separated counts against proportions.
pub fn chi_square_json(observed: &str, expected: &str) -> String {
    let run = || -> Result<String, String> {
        let observed: Vec<u64> = parse_list(observed, "count")?;
        let expected: Vec<f64> = parse_list(expected, "proportion")?;
        let result = chi_square_gof(&observed, &expected).map_err(|e| e.to_string())?;
        Ok(json!({
            "statistic": result.statistic,
            "df": result.df,
            "p_value": result.p_value,
            "p_display": result.p_display(),
        })
        .to_string())
    };
    run().unwrap_or_else(error)
}

#[wasm_bindgen]
pub fn normalize(text: &str) -> String {
    normalize_json(text)
}

#[wasm_bindgen]
pub fn detect(text: &str, chunks: usize, min_chars: usize) -> String {
    detect_json(text, chunks, min_chars)
}

#[wasm_bindgen]
pub fn chi_square(observed: &str, expected: &str) -> String {
    chi_square_json(observed, expected)
}
