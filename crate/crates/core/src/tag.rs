use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reserved code for text whose language could not be determined.
pub const UNDETERMINED: &str = "und";

/// Checks that `code` can name a language: lowercase ASCII letters, digits,
/// `-` or `_`, at most 16 bytes, and starting with a letter.
pub fn validate_lang_code(code: &str) -> Result<()> {
    let ok = !code.is_empty()
        && code.len() <= 16
        && code.as_bytes()[0].is_ascii_lowercase()
        && code.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidTag(code.to_string()))
    }
}

/// The set of languages detected in (or assigned to) one document.
///
/// Languages keep their first-occurrence order for display, but equality and
/// hashing are set-based: `"zu,en"` equals `"en,zu"`.
#[derive(Debug, Clone)]
pub struct LanguageTag {
    langs: Vec<String>,
}

impl LanguageTag {
    pub fn new<I, S>(langs: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for lang in langs {
            let lang = lang.into();
            validate_lang_code(&lang)?;
            if !out.contains(&lang) {
                out.push(lang);
            }
        }
        if out.is_empty() || (out.len() > 1 && out.iter().any(|l| l == UNDETERMINED)) {
            return Err(Error::InvalidTag(out.join(",")));
        }
        Ok(Self { langs: out })
    }

    pub fn single(lang: &str) -> Result<Self> {
        Self::new([lang])
    }

    pub fn undetermined() -> Self {
        Self { langs: vec![UNDETERMINED.to_string()] }
    }

    pub fn langs(&self) -> &[String] {
        &self.langs
    }

    pub fn len(&self) -> usize {
        self.langs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.langs.is_empty()
    }

    pub fn is_undetermined(&self) -> bool {
        self.langs.len() == 1 && self.langs[0] == UNDETERMINED
    }

    pub fn contains(&self, lang: &str) -> bool {
        self.langs.iter().any(|l| l == lang)
    }

    /// Sorted language set; the identity used for equality and class names.
    pub fn as_set(&self) -> BTreeSet<&str> {
        self.langs.iter().map(String::as_str).collect()
    }

    fn sorted(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.langs.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }

    /// Comma-joined sorted rendering, stable across occurrence orders.
    pub fn canonical(&self) -> String {
        match self.langs.as_slice() {
            [only] => only.clone(),
            _ => self.sorted().join(","),
        }
    }
}

impl PartialEq for LanguageTag {
    fn eq(&self, other: &Self) -> bool {
        match (self.langs.as_slice(), other.langs.as_slice()) {
            ([a], [b]) => a == b,
            (a, b) if a.len() != b.len() => false,
            _ => self.sorted() == other.sorted(),
        }
    }
}

impl Eq for LanguageTag {}

impl Hash for LanguageTag {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for lang in self.sorted() {
            lang.hash(state);
        }
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.langs.join(","))
    }
}

impl FromStr for LanguageTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidTag(s.to_string()));
        }
        Self::new(parts)
    }
}

impl Serialize for LanguageTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguageTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Label used for tags outside a bucketed class list.
pub const OTHER_CLASS: &str = "other";

/// How composite tags map onto evaluation classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ClassScheme {
    /// Every distinct language set is its own class.
    #[default]
    Exact,
    /// Listed tags are classes; everything else falls into `other`.
    Bucketed(Vec<LanguageTag>),
}

impl ClassScheme {
    pub fn bucketed<I, S>(classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut list: Vec<LanguageTag> = Vec::new();
        for c in classes {
            let tag: LanguageTag = c.as_ref().parse()?;
            if !list.contains(&tag) {
                list.push(tag);
            }
        }
        Ok(Self::Bucketed(list))
    }

    /// Class label for `tag`: its canonical rendering or `other`.
    pub fn classify(&self, tag: &LanguageTag) -> String {
        match self {
            Self::Exact => tag.canonical(),
            Self::Bucketed(list) if list.contains(tag) => tag.canonical(),
            Self::Bucketed(_) => OTHER_CLASS.to_string(),
        }
    }

    /// Classes that exist regardless of the data, in declaration order.
    pub fn declared(&self) -> Vec<String> {
        match self {
            Self::Exact => Vec::new(),
            Self::Bucketed(list) => list
                .iter()
                .map(LanguageTag::canonical)
                .chain(std::iter::once(OTHER_CLASS.to_string()))
                .collect(),
        }
    }

    /// Orders the classes seen in data: declared ones first, the rest sorted.
    pub fn ordered_classes<'a>(&self, observed: impl IntoIterator<Item = &'a str>) -> Vec<String> {
        let mut classes = self.declared();
        let mut extra: Vec<String> = observed
            .into_iter()
            .filter(|c| !classes.iter().any(|d| d == c))
            .map(str::to_string)
            .collect();
        extra.sort();
        extra.dedup();
        classes.extend(extra);
        classes
    }
}
