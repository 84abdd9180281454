//! Liang pattern hyphenation over the US English TeX patterns.
//!
//! A word's syllable count under [`SyllableRule::Hyphenation`] is the number
//! of admissible hyphenation points plus one. Points closer than two
//! characters to either end of the word are not admissible.
//!
//! [`SyllableRule::Hyphenation`]: crate::segmenter::SyllableRule::Hyphenation

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

include!(concat!(env!("OUT_DIR"), "/hyph_en_us.rs"));

const LEFT_MIN: usize = 2;
const RIGHT_MIN: usize = 2;

enum Lookup {
    Hit(usize, &'static [u8]),
    /// Some longer pattern starts with the key.
    Prefix,
    /// No pattern starts with the key.
    Dead,
}

fn lookup(key: &str) -> Lookup {
    match PATTERNS.binary_search_by(|(k, _, _)| (*k).cmp(key)) {
        Ok(idx) => Lookup::Hit(PATTERNS[idx].1 as usize, PATTERNS[idx].2),
        Err(idx) if PATTERNS.get(idx).is_some_and(|(k, _, _)| k.starts_with(key)) => Lookup::Prefix,
        Err(_) => Lookup::Dead,
    }
}

/// Admissible hyphenation points of a lowercased word, as char offsets.
pub fn hyphenation_points(word: &[char]) -> Vec<usize> {
    let mut pointed = Vec::with_capacity(word.len() + 2);
    pointed.push('.');
    pointed.extend_from_slice(word);
    pointed.push('.');

    let mut weights = vec![0u8; pointed.len() + 1];
    let mut key = String::new();
    for start in 0..pointed.len() - 1 {
        key.clear();
        let stop = (start + MAX_PATTERN_CHARS).min(pointed.len());
        for &c in &pointed[start..stop] {
            key.push(c);
            match lookup(&key) {
                Lookup::Hit(offset, values) => {
                    let at = start + offset;
                    for (slot, &v) in weights[at..at + values.len()].iter_mut().zip(values) {
                        *slot = (*slot).max(v);
                    }
                }
                Lookup::Prefix => {}
                Lookup::Dead => break,
            }
        }
    }

    // weights[i] sits before pointed[i], i.e. before word[i - 1]
    let last = word.len().saturating_sub(RIGHT_MIN);
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| *w % 2 == 1)
        .filter_map(|(i, _)| i.checked_sub(1))
        .filter(|&p| p >= LEFT_MIN && p <= last)
        .collect()
}

/// Syllables of a word token: hyphenation points of its alphanumeric content
/// plus one. Tokens without letters count as one syllable.
pub fn count_syllables(token: &str) -> usize {
    let cleaned: Vec<char> = token
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_alphanumeric())
        .collect();
    if !cleaned.iter().any(|c| c.is_alphabetic()) {
        return 1;
    }
    hyphenation_points(&cleaned).len() + 1
}
