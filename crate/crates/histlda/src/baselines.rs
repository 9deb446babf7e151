//! Single-unit regular-histogram baselines: Bayesian bin-count selection
//! with a Jeffreys prior, and penalized maximum likelihood.

use crate::error::{Error, Result};
use crate::gibbs::bin_count_log_scores;
use crate::histogram::{Histogram, Range};

/// Which selector produced a score table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinSelector {
    Knuth,
    BirgeRozenholc,
}

/// Log score of every candidate bin count, for inspection and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct BinScoreTable {
    pub selector: BinSelector,
    /// `scores[w - 1]` is the log score of `w` bins.
    pub scores: Vec<f64>,
}

impl BinScoreTable {
    /// Index of the best bin count, ties broken toward fewer bins.
    pub fn best(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.scores.iter().enumerate() {
            if s > self.scores[best] {
                best = i;
            }
        }
        best + 1
    }
}

fn validate(data: &[f64], range: Range, w_max: usize) -> Result<()> {
    if data.is_empty() {
        return Err(Error::argument("bin selection needs at least one value"));
    }
    if w_max == 0 {
        return Err(Error::argument("w_max must be >= 1"));
    }
    if let Some(t) = data.iter().find(|t| !range.contains(**t)) {
        return Err(Error::domain(format!(
            "value {t} outside half-open range [{}, {})",
            range.lower(),
            range.upper()
        )));
    }
    Ok(())
}

/// Score table of the Bayesian selector: the marginal likelihood of a
/// single regular histogram under a Jeffreys (1/2) prior on the masses,
/// which is the single-basis specialization of the sampler's bin-count
/// conditional. Sharing that scorer keeps the two testably consistent.
pub fn knuth_scores(data: &[f64], range: Range, w_max: usize) -> Result<BinScoreTable> {
    validate(data, range, w_max)?;
    Ok(BinScoreTable {
        selector: BinSelector::Knuth,
        scores: bin_count_log_scores(data, range, 0.5, w_max),
    })
}

/// Bin count maximizing the Jeffreys-prior marginal likelihood.
pub fn knuth_bin_number(data: &[f64], range: Range, w_max: usize) -> Result<usize> {
    Ok(knuth_scores(data, range, w_max)?.best())
}

/// Histogram with the Bayesian bin count and posterior-mean masses
/// `(n_l + 1/2) / (N + W/2)`.
pub fn knuth_histogram(data: &[f64], range: Range, w_max: usize) -> Result<Histogram> {
    let w = knuth_bin_number(data, range, w_max)?;
    Histogram::new(range, knuth_masses(&bin_counts(data, range, w), 0.5))
}

pub(crate) fn knuth_masses(counts: &[usize], prior: f64) -> Vec<f64> {
    let n: usize = counts.iter().sum();
    let denom = n as f64 + prior * counts.len() as f64;
    counts.iter().map(|&c| (c as f64 + prior) / denom).collect()
}

/// Score table of the penalized-maximum-likelihood selector:
/// `sum_{l: n_l > 0} n_l ln(n_l W / (N width)) - pen(W)` with
/// `pen(W) = W - 1 + ln(W)^2.5`.
pub fn br_scores(data: &[f64], range: Range, w_max: usize) -> Result<BinScoreTable> {
    validate(data, range, w_max)?;
    let n = data.len() as f64;
    let width = range.width();
    let scores = (1..=w_max)
        .map(|w| {
            let counts = bin_counts(data, range, w);
            let log_lik: f64 = counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| c as f64 * (c as f64 * w as f64 / (n * width)).ln())
                .sum();
            log_lik - br_penalty(w)
        })
        .collect();
    Ok(BinScoreTable {
        selector: BinSelector::BirgeRozenholc,
        scores,
    })
}

pub(crate) fn br_penalty(w: usize) -> f64 {
    w as f64 - 1.0 + (w as f64).ln().powf(2.5)
}

/// Bin count maximizing the penalized log-likelihood.
pub fn br_bin_number(data: &[f64], range: Range, w_max: usize) -> Result<usize> {
    Ok(br_scores(data, range, w_max)?.best())
}

/// Histogram with the penalized-ML bin count and empirical masses `n_l / N`.
pub fn br_histogram(data: &[f64], range: Range, w_max: usize) -> Result<Histogram> {
    let w = br_bin_number(data, range, w_max)?;
    let n = data.len() as f64;
    let masses = bin_counts(data, range, w)
        .into_iter()
        .map(|c| c as f64 / n)
        .collect();
    Histogram::new(range, masses)
}

fn bin_counts(data: &[f64], range: Range, w: usize) -> Vec<usize> {
    let mut counts = vec![0usize; w];
    for &t in data {
        counts[range.bin_offset_unchecked(t, w)] += 1;
    }
    counts
}
