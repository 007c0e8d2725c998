//! Seeded synthetic corpora with exact gold tags.
//!
//! Every document is either monolingual (pool chosen by a fair coin) or, with
//! probability `mix_rate`, a non-empty run of `lang_a` tokens followed by a
//! non-empty run of `lang_b` tokens. Randomness comes from
//! `ChaCha8Rng::seed_from_u64(seed)`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::tag::{validate_lang_code, LanguageTag, UNDETERMINED};

pub const MIN_TOKENS_PER_DOC: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct MixSpec {
    pub lang_a: String,
    pub lang_b: String,
    pub source_a: Vec<String>,
    pub source_b: Vec<String>,
    pub n_docs: usize,
    pub mix_rate: f64,
    pub tokens_per_doc: usize,
    pub seed: u64,
}

impl MixSpec {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        for lang in [&self.lang_a, &self.lang_b] {
            if validate_lang_code(lang).is_err() || lang == UNDETERMINED {
                return invalid(format!("invalid language code {lang:?}"));
            }
        }
        if self.lang_a == self.lang_b {
            return invalid("the two languages must differ".into());
        }
        if self.source_a.is_empty() || self.source_b.is_empty() {
            return invalid("token pools must be non-empty".into());
        }
        if let Some(bad) = self.source_a.iter().chain(&self.source_b).find(|t| t.is_empty() || t.contains(char::is_whitespace)) {
            return invalid(format!("pool token {bad:?} is empty or contains whitespace"));
        }
        let a: HashSet<&str> = self.source_a.iter().map(String::as_str).collect();
        if let Some(shared) = self.source_b.iter().find(|t| a.contains(t.as_str())) {
            return invalid(format!("token {shared:?} appears in both pools"));
        }
        if self.n_docs == 0 {
            return invalid("n_docs must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.mix_rate) {
            return invalid(format!("mix_rate must lie in [0, 1], got {}", self.mix_rate));
        }
        if self.tokens_per_doc < MIN_TOKENS_PER_DOC {
            return invalid(format!("tokens_per_doc must be at least {MIN_TOKENS_PER_DOC}"));
        }
        Ok(())
    }
}

fn draw<'a>(rng: &mut ChaCha8Rng, pool: &'a [String]) -> &'a str {
    &pool[rng.random_range(0..pool.len())]
}

pub fn generate(spec: &MixSpec) -> Result<Vec<Document>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let t = spec.tokens_per_doc;
    let mut docs = Vec::with_capacity(spec.n_docs);
    for i in 0..spec.n_docs {
        let mut words: Vec<&str> = Vec::with_capacity(t);
        let langs: Vec<&str> = if rng.random_bool(spec.mix_rate) {
            let split = rng.random_range(1..t);
            words.extend((0..split).map(|_| draw(&mut rng, &spec.source_a)));
            words.extend((split..t).map(|_| draw(&mut rng, &spec.source_b)));
            vec![&spec.lang_a, &spec.lang_b]
        } else if rng.random_bool(0.5) {
            words.extend((0..t).map(|_| draw(&mut rng, &spec.source_a)));
            vec![&spec.lang_a]
        } else {
            words.extend((0..t).map(|_| draw(&mut rng, &spec.source_b)));
            vec![&spec.lang_b]
        };
        let gold = LanguageTag::new(langs)?;
        docs.push(Document::new(format!("s{i}"), words.join(" ")).with_gold(gold));
    }
    Ok(docs)
}

/// `n_words` distinct random words over `alphabet`, lengths 2 to 8.
pub fn random_lexicon(alphabet: &[char], n_words: usize, seed: u64) -> Result<Vec<String>> {
    let distinct: HashSet<char> = alphabet.iter().copied().collect();
    if distinct.len() < 2 || distinct.iter().any(|c| c.is_whitespace()) {
        return Err(Error::InvalidSpec("alphabet needs at least two non-space symbols".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut words = Vec::with_capacity(n_words);
    while words.len() < n_words {
        let len = rng.random_range(2..=8);
        let w: String = (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect();
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mix_rate: f64) -> MixSpec {
        MixSpec {
            lang_a: "xa".into(),
            lang_b: "xb".into(),
            source_a: ["ab", "ba", "aab"].map(String::from).to_vec(),
            source_b: ["yz", "zy", "zzy"].map(String::from).to_vec(),
            n_docs: 300,
            mix_rate,
            tokens_per_doc: 6,
            seed: 9,
        }
    }

    fn pool_of(token: &str) -> &'static str {
        if token.contains('a') { "xa" } else { "xb" }
    }

    #[test]
    fn no_mixing() {
        for d in generate(&spec(0.0)).unwrap() {
            assert_eq!(d.gold_tag.unwrap().len(), 1);
        }
    }

    #[test]
    fn always_mixing() {
        for d in generate(&spec(1.0)).unwrap() {
            let gold = d.gold_tag.unwrap();
            assert_eq!(gold.to_string(), "xa,xb");
            let pools: Vec<&str> = d.text.split(' ').map(pool_of).collect();
            assert_eq!(pools.len(), 6);
            assert_eq!(pools[0], "xa");
            assert_eq!(pools[5], "xb");
            assert!(pools.windows(2).all(|w| !(w[0] == "xb" && w[1] == "xa")));
        }
    }

    #[test]
    fn tokens_agree_with_gold() {
        for d in generate(&spec(0.4)).unwrap() {
            let mut seen: Vec<&str> = Vec::new();
            for p in d.text.split(' ').map(pool_of) {
                if !seen.contains(&p) {
                    seen.push(p);
                }
            }
            assert_eq!(LanguageTag::new(seen).unwrap(), d.gold_tag.unwrap());
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate(&spec(0.5)).unwrap(), generate(&spec(0.5)).unwrap());
        assert_ne!(generate(&spec(0.5)).unwrap(), generate(&MixSpec { seed: 10, ..spec(0.5) }).unwrap());
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec(0.5);
        s.source_b.push("ab".into());
        assert!(matches!(generate(&s), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate(&MixSpec { tokens_per_doc: 3, ..spec(0.5) }), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate(&MixSpec { mix_rate: 1.5, ..spec(0.5) }), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate(&MixSpec { source_a: vec![], ..spec(0.5) }), Err(Error::InvalidSpec(_))));
        assert!(matches!(generate(&MixSpec { lang_b: "xa".into(), ..spec(0.5) }), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn lexicon_words_are_distinct_and_in_alphabet() {
        let words = random_lexicon(&['p', 'q', 'r'], 50, 3).unwrap();
        assert_eq!(words.len(), 50);
        assert_eq!(words.iter().collect::<HashSet<_>>().len(), 50);
        assert!(words.iter().all(|w| (2..=8).contains(&w.len()) && w.chars().all(|c| "pqr".contains(c))));
        assert!(random_lexicon(&['p'], 3, 0).is_err());
    }
}
