//! The five grade-level readability indices.
//!
//! Every index is evaluated in `f64` and then rounded up to an integer
//! grade. Raw values within [`BOUNDARY_EPS`] of an integer snap to that
//! integer so that products such as `0.39 * 20.0` do not gain a spurious
//! grade from representation error.

use alloc::vec::Vec;
use core::fmt;

use crate::segmenter::{SyllableRule, TextMetrics, TextProfile};

pub const BOUNDARY_EPS: f64 = 1e-9;

/// Words per Linsear Write sample.
pub const LINSEAR_SAMPLE_WORDS: usize = 100;

/// Why a text cannot be graded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DegenerateText {
    #[error("text contains no sentences")]
    NoSentences,
    #[error("text contains no words")]
    NoWords,
}

/// The five indices, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum IndexKind {
    FleschKincaid,
    Smog,
    Ari,
    ColemanLiau,
    LinsearWrite,
}

impl IndexKind {
    pub const ALL: [IndexKind; 5] = [
        IndexKind::FleschKincaid,
        IndexKind::Smog,
        IndexKind::Ari,
        IndexKind::ColemanLiau,
        IndexKind::LinsearWrite,
    ];

    /// Column name used in result files.
    pub fn column(self) -> &'static str {
        match self {
            Self::FleschKincaid => "g1_flesch_kincaid",
            Self::Smog => "g2_smog",
            Self::Ari => "g3_ari",
            Self::ColemanLiau => "g4_coleman_liau",
            Self::LinsearWrite => "g5_linsear",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::FleschKincaid => "Flesch-Kincaid",
            Self::Smog => "SMOG",
            Self::Ari => "ARI",
            Self::ColemanLiau => "Coleman-Liau",
            Self::LinsearWrite => "Linsear Write",
        }
    }

    pub fn from_column(column: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.column() == column)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Linsear Write sampling strategy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LinsearMode {
    /// Average over consecutive 100-word samples.
    #[default]
    Windowed,
    /// Only the first 100 words, as the common Python package does.
    FirstSampleCompat,
}

impl LinsearMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Windowed => "windowed",
            Self::FirstSampleCompat => "compat",
        }
    }
}

impl fmt::Display for LinsearMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mean of the Flesch-Kincaid, SMOG and ARI grades, held exactly as a
/// number of thirds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SumVariable {
    thirds: i64,
}

impl SumVariable {
    pub fn from_grades(g1: i32, g2: i32, g3: i32) -> Self {
        Self {
            thirds: i64::from(g1) + i64::from(g2) + i64::from(g3),
        }
    }

    /// Numerator over a fixed denominator of 3.
    pub fn thirds(self) -> i64 {
        self.thirds
    }

    pub fn value(self) -> f64 {
        self.thirds as f64 / 3.0
    }
}

impl fmt::Display for SumVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.thirds % 3 == 0 {
            write!(f, "{}", self.thirds / 3)
        } else {
            write!(f, "{:.4}", self.value())
        }
    }
}

/// One document's five grades.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradeVector {
    pub flesch_kincaid: i32,
    pub smog: i32,
    pub ari: i32,
    pub coleman_liau: i32,
    pub linsear_write: i32,
}

impl GradeVector {
    pub fn get(&self, kind: IndexKind) -> i32 {
        match kind {
            IndexKind::FleschKincaid => self.flesch_kincaid,
            IndexKind::Smog => self.smog,
            IndexKind::Ari => self.ari,
            IndexKind::ColemanLiau => self.coleman_liau,
            IndexKind::LinsearWrite => self.linsear_write,
        }
    }

    pub fn sum_variable(&self) -> SumVariable {
        SumVariable::from_grades(self.flesch_kincaid, self.smog, self.ari)
    }
}

/// Rounds a raw index value up to an integer grade.
pub fn ceil_grade(raw: f64) -> i32 {
    let nearest = libm::round(raw);
    if libm::fabs(raw - nearest) < BOUNDARY_EPS {
        nearest as i32
    } else {
        libm::ceil(raw) as i32
    }
}

fn require_sentences(m: &TextMetrics) -> Result<f64, DegenerateText> {
    match m.sentence_count {
        0 => Err(DegenerateText::NoSentences),
        n => Ok(n as f64),
    }
}

fn require_words(m: &TextMetrics) -> Result<f64, DegenerateText> {
    match m.word_count {
        0 => Err(DegenerateText::NoWords),
        n => Ok(n as f64),
    }
}

/// Index values before rounding.
pub mod raw {
    use super::*;

    pub fn flesch_kincaid(m: &TextMetrics) -> Result<f64, DegenerateText> {
        let sentences = require_sentences(m)?;
        let words = require_words(m)?;
        Ok(0.39 * (words / sentences) + 11.8 * (m.syllable_count as f64 / words) - 15.59)
    }

    pub fn smog(m: &TextMetrics) -> Result<f64, DegenerateText> {
        let sentences = require_sentences(m)?;
        Ok(1.0430 * libm::sqrt(30.0 * (m.polysyllable_count as f64 / sentences)) + 3.1291)
    }

    pub fn ari(m: &TextMetrics) -> Result<f64, DegenerateText> {
        let sentences = require_sentences(m)?;
        let words = require_words(m)?;
        Ok(4.71 * (m.character_count as f64 / words) + 0.5 * (words / sentences) - 21.43)
    }

    pub fn coleman_liau(m: &TextMetrics) -> Result<f64, DegenerateText> {
        let words = require_words(m)?;
        let letters_per_100 = (100 * m.letter_count) as f64 / words;
        let sentences_per_100 = (100 * m.sentence_count) as f64 / words;
        Ok(0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8)
    }

    /// Mean scaled Linsear Write score over the samples `mode` selects.
    pub fn linsear_write(profile: &TextProfile, mode: LinsearMode) -> Result<f64, DegenerateText> {
        let samples = linsear_samples(profile, mode);
        if samples.is_empty() {
            return Err(DegenerateText::NoWords);
        }
        let total: f64 = samples.iter().map(LinsearSample::scaled_score).sum();
        Ok(total / samples.len() as f64)
    }
}

pub fn flesch_kincaid(m: &TextMetrics) -> Result<i32, DegenerateText> {
    raw::flesch_kincaid(m).map(ceil_grade)
}

pub fn smog(m: &TextMetrics) -> Result<i32, DegenerateText> {
    raw::smog(m).map(ceil_grade)
}

pub fn ari(m: &TextMetrics) -> Result<i32, DegenerateText> {
    raw::ari(m).map(ceil_grade)
}

pub fn coleman_liau(m: &TextMetrics) -> Result<i32, DegenerateText> {
    raw::coleman_liau(m).map(ceil_grade)
}

/// Word counts of one Linsear Write sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinsearSample {
    /// Words of at most two syllables.
    pub easy_words: usize,
    /// Words of three or more syllables.
    pub hard_words: usize,
    /// Sentences overlapping the sample; zero is treated as one.
    pub sentences: usize,
}

impl LinsearSample {
    pub fn scaled_score(&self) -> f64 {
        let points = (self.easy_words + 3 * self.hard_words) as f64;
        let r = points / self.sentences.max(1) as f64;
        if r > 20.0 {
            r / 2.0
        } else {
            (r - 2.0) / 2.0
        }
    }
}

fn word_windows(len: usize, mode: LinsearMode) -> Vec<(usize, usize)> {
    if len == 0 {
        return Vec::new();
    }
    if mode == LinsearMode::FirstSampleCompat || len < LINSEAR_SAMPLE_WORDS {
        return alloc::vec![(0, len.min(LINSEAR_SAMPLE_WORDS))];
    }
    let full = len / LINSEAR_SAMPLE_WORDS;
    let rest = len % LINSEAR_SAMPLE_WORDS;
    let mut windows: Vec<(usize, usize)> = (0..full)
        .map(|i| (i * LINSEAR_SAMPLE_WORDS, (i + 1) * LINSEAR_SAMPLE_WORDS))
        .collect();
    if rest >= LINSEAR_SAMPLE_WORDS / 2 {
        windows.push((len - rest, len));
    } else if let Some(last) = windows.last_mut() {
        last.1 = len;
    }
    windows
}

/// The samples Linsear Write averages over.
pub fn linsear_samples(profile: &TextProfile, mode: LinsearMode) -> Vec<LinsearSample> {
    let words = profile.words();
    word_windows(words.len(), mode)
        .into_iter()
        .map(|(start, end)| {
            let sample = &words[start..end];
            let hard_words = sample.iter().filter(|w| w.syllables >= 3).count();
            LinsearSample {
                easy_words: sample.len() - hard_words,
                hard_words,
                sentences: sample[sample.len() - 1].sentence - sample[0].sentence + 1,
            }
        })
        .collect()
}

pub fn linsear_write_profile(profile: &TextProfile, mode: LinsearMode) -> Result<i32, DegenerateText> {
    raw::linsear_write(profile, mode).map(ceil_grade)
}

/// Linsear Write grade of a text under the default syllable rule.
pub fn linsear_write(text: &str, mode: LinsearMode) -> Result<i32, DegenerateText> {
    linsear_write_profile(&TextProfile::new(text, SyllableRule::default()), mode)
}

/// All five grades of an already segmented text.
pub fn grade_profile(profile: &TextProfile, mode: LinsearMode) -> Result<GradeVector, DegenerateText> {
    let m = profile.metrics();
    Ok(GradeVector {
        flesch_kincaid: flesch_kincaid(&m)?,
        smog: smog(&m)?,
        ari: ari(&m)?,
        coleman_liau: coleman_liau(&m)?,
        linsear_write: linsear_write_profile(profile, mode)?,
    })
}

/// All five grades of a text under the default syllable rule.
pub fn grade_all(text: &str, mode: LinsearMode) -> Result<GradeVector, DegenerateText> {
    grade_profile(&TextProfile::new(text, SyllableRule::default()), mode)
}
