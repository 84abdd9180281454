//! Corpus statistics over grade columns: summaries, Pearson correlations,
//! Cronbach's alpha and per-year aggregation.
//!
//! Variances use the sample (n - 1) denominator throughout. Quantiles use
//! linear interpolation between order statistics ([`QUANTILE_CONVENTION`]).
//! Summaries are computed over sorted copies so that any permutation of the
//! input gives bit-identical results.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::indices::{GradeVector, IndexKind, SumVariable};

pub const QUANTILE_CONVENTION: &str = "linear interpolation between order statistics (type 7)";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("length mismatch: {left} vs {right} observations")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {required} observations, got {actual}")]
    TooFewObservations { required: usize, actual: usize },
    #[error("need at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("constant input: correlation undefined")]
    ConstantInput,
    #[error("{0} grades are constant: correlation undefined")]
    ConstantColumn(IndexKind),
    #[error("variance of the total score is zero")]
    DegenerateVariance,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("empty input")]
    Empty,
    #[error("invalid year {0}: expected four digits")]
    InvalidYear(i32),
}

fn sorted(values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut out = values.to_vec();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance; zero for fewer than two values.
fn variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Quantile of sorted data by linear interpolation, `p` in `[0, 1]`.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewObservations { required: 2, actual: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    if is_constant(x) || is_constant(y) {
        return Err(StatsError::ConstantInput);
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Symmetric matrix of Pearson coefficients between the five grade columns.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationMatrix {
    pub labels: [IndexKind; 5],
    pub values: [[f64; 5]; 5],
}

impl CorrelationMatrix {
    pub fn get(&self, a: IndexKind, b: IndexKind) -> f64 {
        let pos = |k| self.labels.iter().position(|&l| l == k).unwrap();
        self.values[pos(a)][pos(b)]
    }
}

/// The grade column of one index as floats.
pub fn grade_column(grades: &[GradeVector], kind: IndexKind) -> Vec<f64> {
    grades.iter().map(|g| f64::from(g.get(kind))).collect()
}

pub fn correlation_matrix(grades: &[GradeVector]) -> Result<CorrelationMatrix, StatsError> {
    if grades.len() < 2 {
        return Err(StatsError::TooFewObservations { required: 2, actual: grades.len() });
    }
    let columns: Vec<Vec<f64>> = IndexKind::ALL.iter().map(|&k| grade_column(grades, k)).collect();
    if let Some(k) = IndexKind::ALL.iter().zip(&columns).find(|(_, c)| is_constant(c)) {
        return Err(StatsError::ConstantColumn(*k.0));
    }
    let mut values = [[1.0; 5]; 5];
    for i in 0..5 {
        for j in i + 1..5 {
            let r = pearson(&columns[i], &columns[j])?;
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix { labels: IndexKind::ALL, values })
}

/// Cronbach's alpha over `k >= 2` equally long columns (items).
pub fn cronbach_alpha<C: AsRef<[f64]>>(columns: &[C]) -> Result<f64, StatsError> {
    let k = columns.len();
    if k < 2 {
        return Err(StatsError::TooFewColumns(k));
    }
    let n = columns[0].as_ref().len();
    for c in columns {
        let len = c.as_ref().len();
        if len != n {
            return Err(StatsError::LengthMismatch { left: n, right: len });
        }
        if c.as_ref().iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
    }
    if n < 2 {
        return Err(StatsError::TooFewObservations { required: 2, actual: n });
    }
    let totals: Vec<f64> = (0..n)
        .map(|row| columns.iter().map(|c| c.as_ref()[row]).sum())
        .collect();
    if is_constant(&totals) {
        return Err(StatsError::DegenerateVariance);
    }
    let item_variance: f64 = columns.iter().map(|c| variance(c.as_ref())).sum();
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (1.0 - item_variance / variance(&totals)))
}

/// Rowwise mean of the Flesch-Kincaid, SMOG and ARI grades.
pub fn sum_variable(g: &GradeVector) -> SumVariable {
    g.sum_variable()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; zero when `n == 1`.
    pub standard_deviation: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(values: &[f64]) -> Result<SummaryStats, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let s = sorted(values)?;
    Ok(SummaryStats {
        n: s.len(),
        mean: mean(&s),
        standard_deviation: libm::sqrt(variance(&s)),
        median: quantile_sorted(&s, 0.5),
        q1: quantile_sorted(&s, 0.25),
        q3: quantile_sorted(&s, 0.75),
        min: s[0],
        max: s[s.len() - 1],
    })
}

/// One year of the longitudinal view.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearAggregate {
    pub year: i32,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
}

/// Groups `(year, value)` pairs by year, ascending.
pub fn per_year_aggregate(records: &[(i32, f64)]) -> Result<Vec<YearAggregate>, StatsError> {
    let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
    for &(year, value) in records {
        if !(1000..=9999).contains(&year) {
            return Err(StatsError::InvalidYear(year));
        }
        by_year.entry(year).or_default().push(value);
    }
    by_year
        .into_iter()
        .map(|(year, values)| {
            let s = sorted(&values)?;
            Ok(YearAggregate {
                year,
                count: s.len(),
                mean: mean(&s),
                median: quantile_sorted(&s, 0.5),
            })
        })
        .collect()
}
