//! Sentence segmentation, word tokenization and the raw counts the
//! readability formulas consume.
//!
//! Sentences end at `.`, `!` or `?` (optionally followed by closing quotes or
//! brackets) when the terminator is followed by whitespace or the end of the
//! text. A short abbreviation list suppresses splits, as does a bare
//! paragraph enumerator such as `1.` at the start of a sentence. Decimal
//! points never split because they are never followed by whitespace.

use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

use crate::hyphenation;

/// Abbreviations that never end a sentence. Matched case-insensitively
/// after stripping opening quotes and brackets.
pub const ABBREVIATIONS: &[&str] = &[
    "art.", "no.", "e.g.", "i.e.", "cf.", "p.", "mr.", "mrs.", "dr.",
];

const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{201D}', '\u{2019}', '\u{BB}'];
const OPENERS: &[char] = &['"', '\'', '(', '[', '{', '\u{201C}', '\u{2018}', '\u{AB}'];
const HYPHENS: &[char] = &['-', '\u{2010}', '\u{2011}'];

/// Raw surface counts of one text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TextMetrics {
    pub sentence_count: usize,
    pub word_count: usize,
    pub syllable_count: usize,
    /// Words with three or more syllables.
    pub polysyllable_count: usize,
    /// Alphanumeric characters inside word tokens.
    pub character_count: usize,
    /// Alphabetic characters inside word tokens.
    pub letter_count: usize,
    /// Words with at most two syllables.
    pub easy_word_count: usize,
    /// Words with three or more syllables.
    pub hard_word_count: usize,
}

impl TextMetrics {
    /// Multiplies every count by `k`.
    pub fn scaled(&self, k: usize) -> Self {
        Self {
            sentence_count: self.sentence_count * k,
            word_count: self.word_count * k,
            syllable_count: self.syllable_count * k,
            polysyllable_count: self.polysyllable_count * k,
            character_count: self.character_count * k,
            letter_count: self.letter_count * k,
            easy_word_count: self.easy_word_count * k,
            hard_word_count: self.hard_word_count * k,
        }
    }
}

impl core::ops::Add for TextMetrics {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            sentence_count: self.sentence_count + rhs.sentence_count,
            word_count: self.word_count + rhs.word_count,
            syllable_count: self.syllable_count + rhs.syllable_count,
            polysyllable_count: self.polysyllable_count + rhs.polysyllable_count,
            character_count: self.character_count + rhs.character_count,
            letter_count: self.letter_count + rhs.letter_count,
            easy_word_count: self.easy_word_count + rhs.easy_word_count,
            hard_word_count: self.hard_word_count + rhs.hard_word_count,
        }
    }
}

/// How syllables are counted per word token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SyllableRule {
    /// Liang hyphenation points plus one, the way the common Python
    /// readability package counts.
    #[default]
    Hyphenation,
    /// Runs of `a e i o u y` with a silent final `e` correction; hyphen
    /// parts are counted separately and summed.
    VowelGroup,
}

impl SyllableRule {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hyphenation => "hyphenation",
            Self::VowelGroup => "vowel-group",
        }
    }

    pub fn count(self, word: &str) -> usize {
        match self {
            Self::Hyphenation => hyphenation::count_syllables(word),
            Self::VowelGroup => vowel_group_syllables(word),
        }
    }
}

fn is_word_token(chunk: &str) -> bool {
    chunk.chars().any(char::is_alphanumeric)
}

fn is_enumerator(bare: &str) -> bool {
    let body = bare.trim_end_matches('.');
    !body.is_empty() && body.chars().all(|c| c.is_ascii_digit() || c == '.')
}

/// Whether a whitespace-delimited chunk closes the sentence it belongs to.
fn ends_sentence(chunk: &str, opens_sentence: bool) -> bool {
    let core = chunk.trim_end_matches(CLOSERS);
    match core.chars().last() {
        Some('!' | '?') => true,
        Some('.') => {
            let bare = core.trim_start_matches(OPENERS);
            if ABBREVIATIONS.iter().any(|a| a.eq_ignore_ascii_case(bare)) {
                return false;
            }
            !(opens_sentence && is_enumerator(bare))
        }
        _ => false,
    }
}

fn offset_in(text: &str, part: &str) -> usize {
    part.as_ptr() as usize - text.as_ptr() as usize
}

/// Splits text into sentences. Every sentence contains at least one word
/// token; punctuation-only chunks attach to a neighbouring sentence.
pub fn segment_sentences(text: &str) -> Vec<&str> {
    let mut sentences: Vec<&str> = Vec::new();
    let mut start: Option<usize> = None;
    let mut has_word = false;
    let mut end = 0;

    for chunk in text.split_whitespace() {
        let at = offset_in(text, chunk);
        let opens_sentence = !has_word;
        start.get_or_insert(at);
        end = at + chunk.len();
        has_word |= is_word_token(chunk);
        if has_word && ends_sentence(chunk, opens_sentence) {
            sentences.push(&text[start.take().unwrap()..end]);
            has_word = false;
        }
    }

    if let Some(s) = start {
        if has_word {
            sentences.push(&text[s..end]);
        } else if let Some(last) = sentences.last_mut() {
            // trailing punctuation after the final terminator
            let first = offset_in(text, last);
            *last = &text[first..end];
        }
    }
    sentences
}

/// Whitespace-delimited runs that contain at least one alphanumeric
/// character.
pub fn tokenize_words(text: &str) -> Vec<&str> {
    text.split_whitespace().filter(|c| is_word_token(c)).collect()
}

/// Syllables of one word token under the default rule.
pub fn count_syllables(word: &str) -> usize {
    SyllableRule::default().count(word)
}

fn vowel_group_part(part: &str) -> usize {
    let letters: String = part
        .nfd()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return 0;
    }
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut previous = false;
    for c in letters.chars() {
        let vowel = is_vowel(c);
        if vowel && !previous {
            groups += 1;
        }
        previous = vowel;
    }
    let chars: Vec<char> = letters.chars().collect();
    let n = chars.len();
    let consonant_le = n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]);
    if chars[n - 1] == 'e' && !consonant_le && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}

fn vowel_group_syllables(word: &str) -> usize {
    word.split(HYPHENS).map(vowel_group_part).sum::<usize>().max(1)
}

/// Per-word data kept for the sample-based formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordProfile {
    pub syllables: usize,
    /// Index of the sentence containing the word.
    pub sentence: usize,
    pub characters: usize,
    pub letters: usize,
}

/// A text segmented once: every word with its syllables and sentence index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TextProfile {
    words: Vec<WordProfile>,
    sentence_count: usize,
}

impl TextProfile {
    /// Normalizes to NFC, then segments and counts.
    pub fn new(text: &str, rule: SyllableRule) -> Self {
        let normalized: String = text.nfc().collect();
        let mut words = Vec::new();
        let sentences = segment_sentences(&normalized);
        for (index, sentence) in sentences.iter().enumerate() {
            for token in tokenize_words(sentence) {
                words.push(WordProfile {
                    syllables: rule.count(token),
                    sentence: index,
                    characters: token.chars().filter(|c| c.is_alphanumeric()).count(),
                    letters: token.chars().filter(|c| c.is_alphabetic()).count(),
                });
            }
        }
        Self {
            words,
            sentence_count: sentences.len(),
        }
    }

    pub fn words(&self) -> &[WordProfile] {
        &self.words
    }

    pub fn sentence_count(&self) -> usize {
        self.sentence_count
    }

    pub fn metrics(&self) -> TextMetrics {
        let mut m = TextMetrics {
            sentence_count: self.sentence_count,
            word_count: self.words.len(),
            ..TextMetrics::default()
        };
        for w in &self.words {
            m.syllable_count += w.syllables;
            m.character_count += w.characters;
            m.letter_count += w.letters;
            if w.syllables >= 3 {
                m.hard_word_count += 1;
            } else {
                m.easy_word_count += 1;
            }
        }
        m.polysyllable_count = m.hard_word_count;
        m
    }
}

/// Counts for one text under the default syllable rule.
pub fn compute_metrics(text: &str) -> TextMetrics {
    TextProfile::new(text, SyllableRule::default()).metrics()
}

pub fn compute_metrics_with(text: &str, rule: SyllableRule) -> TextMetrics {
    TextProfile::new(text, rule).metrics()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_sentence() {
        assert_eq!(segment_sentences("The cat sat."), vec!["The cat sat."]);
        assert!(segment_sentences("").is_empty());
        assert!(segment_sentences("  \n\t ").is_empty());
    }

    #[test]
    fn abbreviation_does_not_split() {
        assert_eq!(
            segment_sentences("See Art. 5. It applies."),
            vec!["See Art. 5.", "It applies."]
        );
        assert_eq!(segment_sentences("see ART. 5 here."), vec!["see ART. 5 here."]);
        assert_eq!(
            segment_sentences("Use tools, e.g. hammers. Done."),
            vec!["Use tools, e.g. hammers.", "Done."]
        );
    }

    #[test]
    fn decimals_and_enumerators() {
        assert_eq!(
            segment_sentences("The band is 1.5 GHz wide. Next."),
            vec!["The band is 1.5 GHz wide.", "Next."]
        );
        assert_eq!(
            segment_sentences("1. Member States shall act. 2. They may not."),
            vec!["1. Member States shall act.", "2. They may not."]
        );
    }

    #[test]
    fn closers_and_other_terminators() {
        assert_eq!(
            segment_sentences("He said \"stop.\" Then (he left.) Why? Now!"),
            vec!["He said \"stop.\"", "Then (he left.)", "Why?", "Now!"]
        );
        assert_eq!(segment_sentences("end.Next word"), vec!["end.Next word"]);
    }

    #[test]
    fn no_terminator_is_one_sentence() {
        assert_eq!(segment_sentences("no terminator here"), vec!["no terminator here"]);
    }

    #[test]
    fn punctuation_chunks_attach() {
        assert_eq!(segment_sentences("— Hello . …"), vec!["— Hello . …"]);
        assert_eq!(segment_sentences("A b. ."), vec!["A b. ."]);
        assert!(segment_sentences("— ... ?").is_empty());
    }

    #[test]
    fn tokenization() {
        assert_eq!(
            tokenize_words("data-driven law (EU) 2016/679"),
            vec!["data-driven", "law", "(EU)", "2016/679"]
        );
        assert!(tokenize_words("—").is_empty());
        assert_eq!(tokenize_words("The cat sat."), vec!["The", "cat", "sat."]);
    }

    #[test]
    fn vowel_group_examples() {
        let r = SyllableRule::VowelGroup;
        assert_eq!(r.count("cat"), 1);
        assert_eq!(r.count("gobbledygook"), 4);
        assert_eq!(r.count("table"), 2);
        assert_eq!(r.count("make"), 1);
        assert_eq!(r.count("whole"), 1);
        assert_eq!(r.count("the"), 1);
        assert_eq!(r.count("e-mail"), 2);
        assert_eq!(r.count("x-ray"), 2);
        assert_eq!(r.count("2016/679"), 1);
        assert_eq!(r.count("le"), 1);
    }

    #[test]
    fn default_rule_examples() {
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("gobbledygook"), 3);
        assert_eq!(count_syllables("2016/679"), 1);
    }

    #[test]
    fn metrics_of_simple_text() {
        let m = compute_metrics("The cat sat.");
        assert_eq!(
            m,
            TextMetrics {
                sentence_count: 1,
                word_count: 3,
                syllable_count: 3,
                polysyllable_count: 0,
                character_count: 9,
                letter_count: 9,
                easy_word_count: 3,
                hard_word_count: 0,
            }
        );
        assert_eq!(compute_metrics(""), TextMetrics::default());
        assert_eq!(compute_metrics("— … !"), TextMetrics::default());
    }

    #[test]
    fn decomposed_input_counts_like_composed() {
        let composed = compute_metrics("Caf\u{e9} d\u{e9}j\u{e0} vu.");
        let decomposed = compute_metrics("Cafe\u{301} de\u{301}ja\u{300} vu.");
        assert_eq!(composed, decomposed);
        assert_eq!(composed.letter_count, 10);
    }
}
