//! Character n-gram language identification.
//!
//! Each language is a multinomial over pooled character n-grams with additive
//! smoothing. A text is scored by its mean per-gram log probability under every
//! profile, and the scores are turned into confidences with a softmax (uniform
//! prior over languages).

mod profile;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

pub use profile::{for_each_gram, LanguageProfile, NgramConfig, MAX_ORDER, PROFILE_FORMAT, PROFILE_VERSION};

use crate::error::{Error, Result};
use crate::tag::UNDETERMINED;
use crate::textnorm::normalize;

pub const DEFAULT_MIN_CHARS: usize = 3;
pub const PROFILE_EXTENSION: &str = "profile";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub lang: String,
    pub avg_log_likelihood: f64,
    pub confidence: f64,
}

impl Prediction {
    pub fn undetermined() -> Self {
        Self { lang: UNDETERMINED.to_string(), avg_log_likelihood: 0.0, confidence: 1.0 }
    }

    pub fn is_undetermined(&self) -> bool {
        self.lang == UNDETERMINED
    }
}

/// Non-empty set of profiles keyed by language, all with the same n-gram orders.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    profiles: BTreeMap<String, LanguageProfile>,
}

impl ProfileSet {
    pub fn new(profiles: impl IntoIterator<Item = LanguageProfile>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut orders: Option<(usize, usize)> = None;
        for p in profiles {
            let cfg = p.config();
            match orders {
                None => orders = Some((cfg.n_min, cfg.n_max)),
                Some((lo, hi)) if (lo, hi) != (cfg.n_min, cfg.n_max) => {
                    return Err(Error::MismatchedOrders(format!(
                        "{} uses {}..={}, others use {lo}..={hi}",
                        p.lang(),
                        cfg.n_min,
                        cfg.n_max
                    )));
                }
                Some(_) => {}
            }
            if map.contains_key(p.lang()) {
                return Err(Error::InvalidConfig(format!("duplicate profile for {:?}", p.lang())));
            }
            map.insert(p.lang().to_string(), p);
        }
        if map.is_empty() {
            return Err(Error::EmptyProfileSet);
        }
        Ok(Self { profiles: map })
    }

    /// Loads every `*.profile` file in `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == PROFILE_EXTENSION))
            .collect();
        paths.sort();
        Self::new(paths.iter().map(LanguageProfile::load).collect::<Result<Vec<_>>>()?)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn get(&self, lang: &str) -> Option<&LanguageProfile> {
        self.profiles.get(lang)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LanguageProfile> {
        self.profiles.values()
    }

    pub fn langs(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(String::as_str)
    }

    /// Ranks every language for `text`, best first.
    ///
    /// Text with fewer than `min_chars` non-space characters after normalization
    /// (or too short to yield any gram) gets the single prediction `und`.
    pub fn identify(&self, text: &str, min_chars: usize) -> Vec<Prediction> {
        let norm = normalize(text);
        if norm.chars().filter(|&c| c != ' ').count() < min_chars {
            return vec![Prediction::undetermined()];
        }
        let mut scored: Vec<(&str, f64)> = Vec::with_capacity(self.profiles.len());
        for (lang, profile) in &self.profiles {
            match profile.score(&norm) {
                Ok(s) => scored.push((lang, s)),
                Err(_) => return vec![Prediction::undetermined()],
            }
        }
        // BTreeMap iteration is ascending by code; a stable sort keeps that for ties.
        scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        let best = scored[0].1;
        let weights: Vec<f64> = scored.iter().map(|(_, s)| (s - best).exp()).collect();
        let z: f64 = weights.iter().sum();
        scored
            .iter()
            .zip(&weights)
            .map(|(&(lang, s), w)| Prediction { lang: lang.to_string(), avg_log_likelihood: s, confidence: w / z })
            .collect()
    }
}
