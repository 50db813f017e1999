//! Fast, deterministic, unsupervised topic segmentation for dialogue
//! transcripts.
//!
//! The pipeline encodes every utterance as a high-dimensional bipolar
//! hypervector — each token gets a seeded random vector, rotated by its
//! position from the end of the utterance, and the rotated vectors are
//! majority-bundled — then scores each gap between neighboring
//! utterances by cosine similarity and places topic boundaries at
//! strict local minima below the adaptive threshold `mean - stddev`.
//! No training, no hyperparameter search: the only knobs are the
//! vector dimension and the random seed, and every run is bit
//! reproducible.
//!
//! ```
//! use hypertile::*;
//!
//! // Two disjoint-vocabulary topic blocks of ten utterances each,
//! // with the gold boundary at the block joint (gap 9).
//! let corpus = synth_corpus(&SynthConfig::default())?;
//! let ctx = SeedContext::new(42, 10_000)?;
//! let seg = segment_transcript(
//!     &corpus[0],
//!     &TokenizerConfig::word(),
//!     &ctx,
//!     &SegmenterConfig::default(),
//! );
//! assert_eq!(seg.boundaries(), &[9]);
//! # Ok::<(), hypertile::Error>(())
//! ```
//!
//! Modules:
//! - [`hv`]: bipolar hypervector algebra (packed bit representation);
//! - [`mod@tokenize`]: word / character-n-gram tokenization with a frozen
//!   stopword list;
//! - [`encode`]: utterance and transcript encoding;
//! - [`segment`]: boundary scoring, adaptive threshold, auto and damp
//!   selection;
//! - [`baselines`]: random / uniform segmenters and count-vector gap
//!   scores for comparison;
//! - [`metrics`]: boundary F1, Boundary Similarity, Pk/WindowDiff and
//!   corpus aggregation;
//! - [`corpus`]: JSONL transcripts, segmentation and trace output, and
//!   the synthetic corpus generator.

pub mod baselines;
pub mod corpus;
mod error;
pub mod encode;
pub mod hv;
pub mod metrics;
mod rng;
pub mod segment;
pub mod tokenize;

pub use baselines::{count_boundary_scores, random_segmentation, uniform_segmentation, CountVector};
pub use corpus::{
    read_boundary_file, read_corpus, synth_corpus, write_corpus, write_segmentation, write_trace,
    SegmentationRecord, SynthConfig, Transcript,
};
pub use encode::{encode_transcript, encode_utterance, UtteranceEmbedding};
pub use error::{Error, Result};
pub use hv::{BundleAccumulator, Hypervector, SeedContext, EMPTY_UTTERANCE_KEY};
pub use metrics::{
    aggregate_corpus, boundary_f1, boundary_similarity, evaluate_document, AggregateMode,
    BoundaryEdit, CorpusScores, DocumentEval, EvalReport,
};
pub use segment::{
    boundary_scores, boundary_scores_with, segment_transcript, select_boundaries,
    select_boundaries_damped, BoundaryScores, LogBase, SegmentMode, SegmenterConfig, Segmentation,
    StddevMode,
};
pub use tokenize::{default_stopwords, tokenize, Granularity, TokenizerConfig};
