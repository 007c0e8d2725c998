//! Text cleaning applied before any n-gram extraction.
//!
//! Punctuation (`P*`), symbols (`S*`, which covers most emoji), numbers (`N*`),
//! other/control/unassigned codepoints (`C*`) and anything carrying the
//! `Extended_Pictographic` property are deleted. Letters are lowercased, combining
//! marks are kept, and every run of whitespace becomes a single ASCII space.

use icu_properties::props::{ExtendedPictographic, GeneralCategory, GeneralCategoryGroup};
use icu_properties::{CodePointMapData, CodePointSetData};

/// Returns true if `c` survives normalization as a letter or mark.
pub fn is_kept(c: char) -> bool {
    let gc = CodePointMapData::<GeneralCategory>::new().get(c);
    let letter_or_mark = GeneralCategoryGroup::Letter.contains(gc) || GeneralCategoryGroup::Mark.contains(gc);
    letter_or_mark && !CodePointSetData::new::<ExtendedPictographic>().contains(c)
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || GeneralCategoryGroup::Separator.contains(CodePointMapData::<GeneralCategory>::new().get(c))
}

/// One-to-one lowercase mapping. The only unconditional multi-codepoint
/// lowercase mapping (U+0130 to `i` + U+0307) starts with its simple mapping.
fn simple_lowercase(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Cleans raw message text. Already-clean lowercase text is a fixed point.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars() {
        if is_separator(c) {
            pending_space = !out.is_empty();
        } else if is_kept(c) {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(simple_lowercase(c));
        }
    }
    out
}

/// Whitespace tokens of already-normalized text.
pub fn tokens(normalized: &str) -> Vec<&str> {
    normalized.split(' ').filter(|t| !t.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_input_is_fixed_point() {
        let s = "why ningaphenduli if umuntu ebuza something";
        assert_eq!(normalize(s), s);
    }

    #[test]
    fn strips_digits_punctuation_emoji() {
        assert_eq!(normalize("Baby due 2019-07-01!! 😊"), "baby due");
    }

    #[test]
    fn empty() {
        assert_eq!(normalize(""), "");
        assert_eq!(normalize("  \t\n "), "");
        assert_eq!(normalize("12345 !!!"), "");
    }

    #[test]
    fn removal_does_not_split_words() {
        assert_eq!(normalize("don't"), "dont");
        assert_eq!(normalize("a , b"), "a b");
    }

    #[test]
    fn unicode_whitespace_collapses() {
        assert_eq!(normalize("Mng\u{00A0}\u{2003}kade\r\nngagcina"), "mng kade ngagcina");
    }

    #[test]
    fn non_ascii_numbers_removed() {
        // Roman numeral (Nl), superscript two (No), Arabic-Indic digit (Nd)
        assert_eq!(normalize("x\u{2162}\u{00B2}\u{0663}y"), "xy");
    }

    #[test]
    fn combining_marks_survive() {
        assert_eq!(normalize("Cafe\u{0301}"), "cafe\u{0301}");
    }

    #[test]
    fn lowercasing_never_adds_codepoints() {
        assert_eq!(normalize("\u{0130}STANBUL"), "istanbul");
        assert_eq!(normalize("ǅemal ΣΟΦΊΑ"), "ǆemal σοφία");
    }

    #[test]
    fn pictographic_letter_removed() {
        // U+2139 INFORMATION SOURCE is Ll but Extended_Pictographic
        assert_eq!(normalize("a\u{2139}b"), "ab");
    }

    #[test]
    fn zero_width_joiner_sequences_removed() {
        assert_eq!(normalize("ok 👩\u{200D}👩\u{200D}👧 ok"), "ok ok");
    }
}
