use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tag::{validate_lang_code, UNDETERMINED};
use crate::textnorm::normalize;

pub const PROFILE_FORMAT: &str = "langmix-profile";
pub const PROFILE_VERSION: u32 = 1;
pub const MAX_ORDER: usize = 6;

/// N-gram orders and smoothing constant shared by every profile in a set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgramConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub alpha: f64,
}

impl Default for NgramConfig {
    fn default() -> Self {
        Self { n_min: 1, n_max: 4, alpha: 0.5 }
    }
}

impl NgramConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min < 1 || self.n_min > self.n_max || self.n_max > MAX_ORDER {
            return Err(Error::InvalidConfig(format!(
                "n-gram orders must satisfy 1 <= n_min <= n_max <= {MAX_ORDER}, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidConfig(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Calls `f` with every contiguous codepoint n-gram of `text` for orders
/// `n_min..=n_max`, lowest order first. Grams are borrowed slices of `text`.
pub fn for_each_gram<'a>(text: &'a str, n_min: usize, n_max: usize, mut f: impl FnMut(&'a str)) {
    let mut bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    bounds.push(text.len());
    let chars = bounds.len() - 1;
    for n in n_min..=n_max {
        if n > chars {
            break;
        }
        for start in 0..=chars - n {
            f(&text[bounds[start]..bounds[start + n]]);
        }
    }
}

/// Character n-gram counts for one language.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    lang: String,
    config: NgramConfig,
    counts: BTreeMap<String, u64>,
    total_per_order: BTreeMap<usize, u64>,
    /// distinct grams per order, plus one slot for unseen grams
    vocab_per_order: BTreeMap<usize, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    format: String,
    version: u32,
    lang: String,
    n_min: usize,
    n_max: usize,
    alpha: f64,
    total_per_order: BTreeMap<usize, u64>,
    counts: BTreeMap<String, u64>,
}

fn check_lang(lang: &str) -> Result<()> {
    validate_lang_code(lang).map_err(|_| Error::InvalidConfig(format!("invalid language code {lang:?}")))?;
    if lang == UNDETERMINED {
        return Err(Error::InvalidConfig(format!("{UNDETERMINED:?} is reserved")));
    }
    Ok(())
}

impl LanguageProfile {
    /// Counts n-grams of every normalized line. Grams never span lines.
    pub fn train<I, S>(lines: I, lang: &str, config: NgramConfig) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        config.validate()?;
        check_lang(lang)?;
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut seen_text = false;
        for line in lines {
            let norm = normalize(line.as_ref());
            if norm.is_empty() {
                continue;
            }
            seen_text = true;
            for_each_gram(&norm, config.n_min, config.n_max, |g| {
                if let Some(c) = counts.get_mut(g) {
                    *c += 1;
                } else {
                    counts.insert(g.to_string(), 1);
                }
            });
        }
        if !seen_text {
            return Err(Error::EmptyCorpus);
        }
        Self::from_counts(lang, config, counts)
    }

    /// Builds a profile from an explicit count table, checking every invariant.
    pub fn from_counts(lang: &str, config: NgramConfig, counts: BTreeMap<String, u64>) -> Result<Self> {
        config.validate()?;
        check_lang(lang)?;
        let mut total_per_order: BTreeMap<usize, u64> = (config.n_min..=config.n_max).map(|n| (n, 0)).collect();
        let mut vocab_per_order: BTreeMap<usize, u64> = (config.n_min..=config.n_max).map(|n| (n, 1)).collect();
        for (gram, &count) in &counts {
            let n = gram.chars().count();
            let Some(total) = total_per_order.get_mut(&n) else {
                return Err(Error::MalformedProfile(format!(
                    "gram {gram:?} has order {n}, outside {}..={}",
                    config.n_min, config.n_max
                )));
            };
            *total += count;
            *vocab_per_order.get_mut(&n).expect("same keys as totals") += 1;
        }
        Ok(Self { lang: lang.to_string(), config, counts, total_per_order, vocab_per_order })
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn config(&self) -> NgramConfig {
        self.config
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, gram: &str) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn total(&self, order: usize) -> u64 {
        self.total_per_order.get(&order).copied().unwrap_or(0)
    }

    pub fn total_per_order(&self) -> &BTreeMap<usize, u64> {
        &self.total_per_order
    }

    /// Distinct grams of `order` plus one unseen slot.
    pub fn vocab(&self, order: usize) -> u64 {
        self.vocab_per_order.get(&order).copied().unwrap_or(1)
    }

    /// Smoothed log probability of a single gram.
    pub fn log_prob(&self, gram: &str) -> f64 {
        let order = gram.chars().count();
        let alpha = self.config.alpha;
        let numer = self.count(gram) as f64 + alpha;
        let denom = self.total(order) as f64 + alpha * self.vocab(order) as f64;
        (numer / denom).ln()
    }

    /// Mean log probability over all grams of `text` (all orders pooled).
    pub fn score(&self, text: &str) -> Result<f64> {
        let mut sum = 0.0;
        let mut n = 0usize;
        for_each_gram(text, self.config.n_min, self.config.n_max, |g| {
            sum += self.log_prob(g);
            n += 1;
        });
        if n == 0 {
            return Err(Error::EmptyText);
        }
        Ok(sum / n as f64)
    }

    pub fn to_text(&self) -> String {
        let file = ProfileFile {
            format: PROFILE_FORMAT.to_string(),
            version: PROFILE_VERSION,
            lang: self.lang.clone(),
            n_min: self.config.n_min,
            n_max: self.config.n_max,
            alpha: self.config.alpha,
            total_per_order: self.total_per_order.clone(),
            counts: self.counts.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("profile serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedProfile(e.to_string()))?;
        match value.get("format").and_then(|v| v.as_str()) {
            Some(PROFILE_FORMAT) => {}
            other => return Err(Error::MalformedProfile(format!("unexpected format tag {other:?}"))),
        }
        let version = value
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::MalformedProfile("missing version".into()))?;
        if version != u64::from(PROFILE_VERSION) {
            return Err(Error::UnsupportedVersion {
                found: u32::try_from(version).unwrap_or(u32::MAX),
                expected: PROFILE_VERSION,
            });
        }
        let file: ProfileFile = serde_json::from_value(value).map_err(|e| Error::MalformedProfile(e.to_string()))?;
        let config = NgramConfig { n_min: file.n_min, n_max: file.n_max, alpha: file.alpha };
        let profile = Self::from_counts(&file.lang, config, file.counts)?;
        if profile.total_per_order != file.total_per_order {
            return Err(Error::MalformedProfile("total_per_order disagrees with counts".into()));
        }
        Ok(profile)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }
}
