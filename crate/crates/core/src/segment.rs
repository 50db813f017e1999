//! Boundary scoring and selection.
//!
//! The score series is the cosine between each pair of neighboring
//! utterance embeddings. A gap becomes a topic boundary when its score
//! is a strict local minimum and falls below the adaptive threshold
//! `T = mean - stddev`. Damp mode additionally caps the boundary count
//! at `floor(log^2 m)` where m counts all sub-threshold gaps.

use serde::{Deserialize, Serialize};

use crate::corpus::Transcript;
use crate::encode::{encode_transcript, UtteranceEmbedding};
use crate::hv::SeedContext;
use crate::tokenize::TokenizerConfig;

/// Boundary selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SegmentMode {
    #[default]
    Auto,
    Damp,
}

/// Logarithm used by the damp-mode cap. Natural log is the default;
/// it caps segment counts more conservatively than base 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

/// Standard deviation convention for the threshold. The score series
/// is treated as the full population of gaps by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StddevMode {
    #[default]
    Population,
    Sample,
}

/// Resolved segmenter knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SegmenterConfig {
    pub mode: SegmentMode,
    pub log_base: LogBase,
    pub stddev: StddevMode,
}

/// Neumaier-compensated summation. The threshold sits one stddev
/// under the mean, so gaps routinely compare against it within a few
/// ulps; compensation keeps degenerate series (e.g. all-equal scores,
/// where sigma must be exactly 0) honest.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for v in values {
        let t = sum + v;
        compensation += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + compensation
}

/// Per-gap cosine series with its derived statistics. `threshold` is
/// always exactly `mean - stddev`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryScores {
    scores: Vec<f64>,
    mean: f64,
    stddev: f64,
    threshold: f64,
}

impl BoundaryScores {
    /// Wrap a raw score series. With fewer than one score (or, for the
    /// sample convention, fewer than two) the statistics are zero.
    pub fn from_scores(scores: Vec<f64>, stddev_mode: StddevMode) -> Self {
        let n = scores.len();
        if n == 0 {
            return Self {
                scores,
                mean: 0.0,
                stddev: 0.0,
                threshold: 0.0,
            };
        }
        let mean = compensated_sum(scores.iter().copied()) / n as f64;
        let sq_dev = compensated_sum(scores.iter().map(|s| (s - mean) * (s - mean)));
        let denom = match stddev_mode {
            StddevMode::Population => n as f64,
            StddevMode::Sample if n > 1 => (n - 1) as f64,
            StddevMode::Sample => f64::INFINITY, // single score: stddev 0
        };
        let stddev = (sq_dev / denom).sqrt();
        Self {
            threshold: mean - stddev,
            scores,
            mean,
            stddev,
        }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn stddev(&self) -> f64 {
        self.stddev
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Cosine between each pair of consecutive embeddings, population
/// stddev convention.
pub fn boundary_scores(embeddings: &[UtteranceEmbedding]) -> BoundaryScores {
    boundary_scores_with(embeddings, StddevMode::Population)
}

/// Same as [`boundary_scores`] with an explicit stddev convention.
pub fn boundary_scores_with(
    embeddings: &[UtteranceEmbedding],
    stddev_mode: StddevMode,
) -> BoundaryScores {
    let scores = embeddings
        .windows(2)
        .map(|pair| {
            pair[0]
                .vector()
                .cosine(pair[1].vector())
                .expect("embeddings in one transcript share a dimension")
        })
        .collect();
    BoundaryScores::from_scores(scores, stddev_mode)
}

/// Set of selected gap indices; boundary `j` splits utterance `j` from
/// `j + 1`. Indices are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    boundaries: Vec<usize>,
    mode: SegmentMode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    damp_cap: Option<usize>,
}

impl Segmentation {
    /// Wrap an explicit boundary list (sorted and deduplicated here).
    pub fn from_boundaries(mut boundaries: Vec<usize>) -> Self {
        boundaries.sort_unstable();
        boundaries.dedup();
        Self {
            boundaries,
            mode: SegmentMode::Auto,
            damp_cap: None,
        }
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn mode(&self) -> SegmentMode {
        self.mode
    }

    pub fn damp_cap(&self) -> Option<usize> {
        self.damp_cap
    }

    /// Implied segment count: boundaries + 1.
    pub fn segment_count(&self) -> usize {
        self.boundaries.len() + 1
    }
}

fn is_strict_local_minimum(scores: &[f64], j: usize) -> bool {
    // Missing neighbors at the series endpoints count as +infinity.
    let left = if j == 0 { f64::INFINITY } else { scores[j - 1] };
    let right = if j + 1 == scores.len() {
        f64::INFINITY
    } else {
        scores[j + 1]
    };
    scores[j] < left && scores[j] < right
}

/// Auto mode: every gap that is a strict local minimum with a score
/// strictly below the threshold. On a plateau of equal minima no index
/// is strictly below both neighbors, so none qualifies.
pub fn select_boundaries(bs: &BoundaryScores) -> Segmentation {
    let s = bs.scores();
    let t = bs.threshold();
    let boundaries = (0..s.len())
        .filter(|&j| s[j] < t && is_strict_local_minimum(s, j))
        .collect();
    Segmentation {
        boundaries,
        mode: SegmentMode::Auto,
        damp_cap: None,
    }
}

/// Damp-mode cap: floor(log^2 m) for m sub-threshold gaps; 0 when
/// there are none (note m = 1 also caps to 0, literally).
fn damp_cap(m: usize, log_base: LogBase) -> usize {
    if m == 0 {
        return 0;
    }
    let lg = match log_base {
        LogBase::Natural => (m as f64).ln(),
        LogBase::Base2 => (m as f64).log2(),
    };
    (lg * lg).floor() as usize
}

/// Damp mode: the auto-mode candidates, keeping only the N with the
/// smallest scores (ties broken toward the lower gap index), where N
/// is the logarithm cap computed over all sub-threshold gaps.
pub fn select_boundaries_damped(bs: &BoundaryScores, log_base: LogBase) -> Segmentation {
    let auto = select_boundaries(bs);
    let s = bs.scores();
    let m = s.iter().filter(|&&x| x < bs.threshold()).count();
    let cap = damp_cap(m, log_base);

    let mut ranked: Vec<usize> = auto.boundaries;
    ranked.sort_by(|&a, &b| s[a].total_cmp(&s[b]).then(a.cmp(&b)));
    ranked.truncate(cap);
    ranked.sort_unstable();
    Segmentation {
        boundaries: ranked,
        mode: SegmentMode::Damp,
        damp_cap: Some(cap),
    }
}

/// Full pipeline: tokenize, encode, score, select.
pub fn segment_transcript(
    transcript: &Transcript,
    tokenizer: &TokenizerConfig,
    ctx: &SeedContext,
    cfg: &SegmenterConfig,
) -> Segmentation {
    let embeddings = encode_transcript(transcript, tokenizer, ctx);
    let scores = boundary_scores_with(&embeddings, cfg.stddev);
    match cfg.mode {
        SegmentMode::Auto => select_boundaries(&scores),
        SegmentMode::Damp => select_boundaries_damped(&scores, cfg.log_base),
    }
}
