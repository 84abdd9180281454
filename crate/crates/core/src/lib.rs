//! Readability grading for English prose.
//!
//! Text is segmented into sentences and word tokens ([`segmenter`]), scored
//! with five grade-level indices that are rounded up to whole grades
//! ([`indices`]), and summarized across a corpus ([`stats`]).
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use lexgrade_core::{grade_all, LinsearMode};
//!
//! let grades = grade_all("The cat sat.", LinsearMode::Windowed).unwrap();
//! assert_eq!(grades.flesch_kincaid, -2);
//! assert_eq!(grades.sum_variable().value(), -1.0);
//! ```
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod hyphenation;
pub mod indices;
pub mod segmenter;
pub mod stats;

pub use indices::{
    ari, coleman_liau, flesch_kincaid, grade_all, grade_profile, linsear_write, smog,
    DegenerateText, GradeVector, IndexKind, LinsearMode, LinsearSample, SumVariable,
};
pub use segmenter::{
    compute_metrics, compute_metrics_with, count_syllables, segment_sentences, tokenize_words,
    SyllableRule, TextMetrics, TextProfile,
};
pub use stats::{
    correlation_matrix, cronbach_alpha, describe, pearson, per_year_aggregate, sum_variable,
    CorrelationMatrix, StatsError, SummaryStats, YearAggregate,
};
