//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use langmix::synthgen::random_lexicon;
use langmix::LanguageProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean smoothed log probability, recomputed from the raw count table by
/// enumerating grams with a char vector and recounting the vocabulary.
pub fn score_oracle(profile: &LanguageProfile, text: &str) -> Option<f64> {
    let cfg = profile.config();
    let chars: Vec<char> = text.chars().collect();
    let mut totals: HashMap<usize, f64> = HashMap::new();
    let mut vocab: HashMap<usize, f64> = HashMap::new();
    for (gram, &c) in profile.counts() {
        let n = gram.chars().count();
        *totals.entry(n).or_default() += c as f64;
        *vocab.entry(n).or_default() += 1.0;
    }
    let mut sum = 0.0;
    let mut grams = 0usize;
    for n in cfg.n_min..=cfg.n_max {
        if chars.len() < n {
            continue;
        }
        for i in 0..=chars.len() - n {
            let g: String = chars[i..i + n].iter().collect();
            let c = profile.counts().get(&g).copied().unwrap_or(0) as f64;
            let t = totals.get(&n).copied().unwrap_or(0.0);
            let v = vocab.get(&n).copied().unwrap_or(0.0) + 1.0;
            sum += ((c + cfg.alpha) / (t + cfg.alpha * v)).ln();
            grams += 1;
        }
    }
    (grams > 0).then(|| sum / grams as f64)
}

pub struct OracleMetrics {
    pub accuracy: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
}

/// Metrics straight from per-document (gold, pred) class labels, tallied in
/// one pass over the documents; no matrix involved.
pub fn metrics_oracle(gold: &[String], pred: &[String]) -> OracleMetrics {
    let n = gold.len() as f64;
    let mut correct = 0.0;
    // class -> (support, predicted, true positives)
    let mut tally: HashMap<&str, (f64, f64, f64)> = HashMap::new();
    for (g, p) in gold.iter().zip(pred) {
        tally.entry(g).or_default().0 += 1.0;
        tally.entry(p).or_default().1 += 1.0;
        if g == p {
            correct += 1.0;
            tally.entry(g).or_default().2 += 1.0;
        }
    }
    let mut classes: Vec<_> = tally.into_iter().collect();
    classes.sort_by(|a, b| a.0.cmp(b.0));
    let (mut wp, mut wr) = (0.0, 0.0);
    for (_, (support, predicted, tp)) in classes {
        if support == 0.0 {
            continue;
        }
        let precision = if predicted == 0.0 { 0.0 } else { tp / predicted };
        wp += support / n * precision;
        wr += support / n * (tp / support);
    }
    OracleMetrics { accuracy: correct / n, weighted_precision: wp, weighted_recall: wr }
}

/// ln Γ(k/2) by the integer and half-integer factorial recurrences.
pub fn ln_gamma_half(k: u32) -> f64 {
    let (mut x, mut acc) = if k % 2 == 0 { (1.0, 0.0) } else { (0.5, 0.5 * PI.ln()) };
    while 2.0 * x < k as f64 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

fn chi2_pdf(t: f64, k: u32) -> f64 {
    let h = k as f64 / 2.0;
    ((h - 1.0) * t.ln() - t / 2.0 - h * 2f64.ln() - ln_gamma_half(k)).exp()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    let tol = (tol / 2.0).max(1e-18);
    adaptive(f, a, m, left, tol, depth - 1) + adaptive(f, m, b, right, tol, depth - 1)
}

/// Upper tail of the chi-square density by adaptive Simpson quadrature on
/// [x, x + span], with the span wide enough that the remainder is negligible.
pub fn chi2_sf_quadrature(x: f64, k: u32) -> f64 {
    assert!(x > 0.0);
    let span = 60.0 + 20.0 * (k as f64).sqrt() + 2.0 * k as f64;
    let f = |t: f64| chi2_pdf(t, k);
    let pieces = 64;
    let step = span / pieces as f64;
    (0..pieces)
        .map(|i| {
            let a = x + i as f64 * step;
            let b = a + step;
            adaptive(&f, a, b, simpson(&f, a, b), 1e-15, 24)
        })
        .sum()
}

/// Two disjoint synthetic alphabets with word lists and training sentences.
pub struct SyntheticPair {
    pub lexicon_a: Vec<String>,
    pub lexicon_b: Vec<String>,
    pub train_a: Vec<String>,
    pub train_b: Vec<String>,
}

pub fn synthetic_pair(seed: u64, words: usize, sentences: usize, per_sentence: usize) -> SyntheticPair {
    let alpha_a: Vec<char> = ('a'..='m').collect();
    let alpha_b: Vec<char> = ('n'..='z').collect();
    let lexicon_a = random_lexicon(&alpha_a, words, seed).unwrap();
    let lexicon_b = random_lexicon(&alpha_b, words, seed + 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 2);
    let mut sentences_from = |lex: &[String]| -> Vec<String> {
        (0..sentences)
            .map(|_| (0..per_sentence).map(|_| lex[rng.random_range(0..lex.len())].as_str()).collect::<Vec<_>>().join(" "))
            .collect()
    };
    let train_a = sentences_from(&lexicon_a);
    let train_b = sentences_from(&lexicon_b);
    SyntheticPair { lexicon_a, lexicon_b, train_a, train_b }
}

/// Random count table for profile round-trip checks.
pub fn random_counts(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize) -> BTreeMap<String, u64> {
    let alphabet: Vec<char> = "abcdefghijklmnopqrstuvwxyz éñßçøžłŋ".chars().collect();
    let mut counts = BTreeMap::new();
    let entries = rng.random_range(1..200);
    for _ in 0..entries {
        let n = rng.random_range(n_min..=n_max);
        let g: String = (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect();
        counts.insert(g, rng.random_range(1..10_000));
    }
    counts
}
