//! Reference segmenters and representations: random and uniform
//! boundary placement, and sparse token-count vectors whose gap scores
//! feed the same selection machinery as the hypervector pipeline.
//!
//! Unlike the main pipeline, the random and uniform baselines take the
//! boundary count k as an explicit parameter — evaluation harnesses
//! hand them the gold segment count, never the other way around.

use std::collections::BTreeMap;

use crate::corpus::Transcript;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::segment::{BoundaryScores, Segmentation, StddevMode};
use crate::tokenize::{tokenize, TokenizerConfig};

fn check_k(u: usize, k: usize) -> Result<usize> {
    let gaps = u.saturating_sub(1);
    if k > gaps {
        return Err(Error::InvalidArgument(format!(
            "cannot place {k} boundaries in {u} utterances ({gaps} gaps)"
        )));
    }
    Ok(gaps)
}

/// k distinct gap indices drawn uniformly without replacement;
/// deterministic per seed.
pub fn random_segmentation(u: usize, k: usize, seed: u64) -> Result<Segmentation> {
    let gaps = check_k(u, k)?;
    let mut rng = SplitMix64::new(seed);
    let mut indices: Vec<usize> = (0..gaps).collect();
    // Partial Fisher-Yates: after i swaps the prefix is a uniform
    // k-subset in random order.
    for i in 0..k {
        let j = i + rng.next_below(gaps - i);
        indices.swap(i, j);
    }
    indices.truncate(k);
    Ok(Segmentation::from_boundaries(indices))
}

/// k boundaries splitting the document into k+1 segments whose lengths
/// differ by at most one: gap `floor(u*t/(k+1)) - 1` for t = 1..=k.
pub fn uniform_segmentation(u: usize, k: usize) -> Result<Segmentation> {
    check_k(u, k)?;
    let mut boundaries: Vec<usize> = (1..=k)
        .map(|t| (u * t / (k + 1)).saturating_sub(1).min(u.saturating_sub(2)))
        .collect();
    boundaries.dedup();
    Ok(Segmentation::from_boundaries(boundaries))
}

/// Sparse token-count vector for one utterance. Ordered keys keep
/// floating-point accumulation deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountVector(BTreeMap<String, u64>);

impl CountVector {
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Self {
        let mut counts = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.as_ref().to_owned()).or_insert(0) += 1;
        }
        Self(counts)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, token: &str) -> u64 {
        self.0.get(token).copied().unwrap_or(0)
    }

    /// Cosine between sparse count vectors. Conventions for degenerate
    /// gaps: both empty -> 1.0 (indistinguishable utterances must not
    /// look like a topic shift), exactly one empty -> 0.0.
    pub fn cosine(&self, other: &CountVector) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return 1.0,
            (true, false) | (false, true) => return 0.0,
            _ => {}
        }
        // Counts are integers, so dot and squared norms are exact;
        // taking one square root of their product keeps identical
        // vectors at exactly 1.0.
        let dot: u64 = self
            .0
            .iter()
            .filter_map(|(tok, &a)| other.0.get(tok).map(|&b| a * b))
            .sum();
        let sq_norm = |v: &CountVector| v.0.values().map(|&c| c * c).sum::<u64>();
        dot as f64 / ((sq_norm(self) * sq_norm(other)) as f64).sqrt()
    }
}

/// Gap scores from count-vector cosines, through the same statistics
/// as the hypervector scores.
pub fn count_boundary_scores(
    transcript: &Transcript,
    cfg: &TokenizerConfig,
    stddev_mode: StddevMode,
) -> BoundaryScores {
    let vectors: Vec<CountVector> = transcript
        .utterances
        .iter()
        .map(|u| CountVector::from_tokens(&tokenize(u, cfg)))
        .collect();
    let scores = vectors
        .windows(2)
        .map(|pair| pair[0].cosine(&pair[1]))
        .collect();
    BoundaryScores::from_scores(scores, stddev_mode)
}
