//! Utterance text -> token stream.
//!
//! Two granularities: whitespace-delimited words (with stopword
//! filtering) and overlapping character n-grams over the normalized
//! text. Normalization is deliberately minimal — lowercase plus
//! stripping leading/trailing ASCII punctuation per chunk, keeping
//! interior apostrophes — since the vector layer, not the lexical
//! layer, does the heavy lifting.

use std::collections::HashSet;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// Token granularity. `CharNgram` covers the 3-gram alternative used
/// for noisy transcripts; stopword filtering applies only at word
/// granularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Word,
    CharNgram(NonZeroUsize),
}

impl Granularity {
    /// Character trigrams, the usual n-gram setting.
    pub fn char_trigram() -> Self {
        Granularity::CharNgram(NonZeroUsize::new(3).unwrap())
    }
}

/// Frozen English stopword list shipped with the crate, one token per
/// line. Embedded so results are bit-reproducible across environments.
pub fn default_stopwords() -> &'static HashSet<String> {
    static LIST: OnceLock<HashSet<String>> = OnceLock::new();
    LIST.get_or_init(|| {
        include_str!("../resources/stopwords_en.txt")
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect()
    })
}

#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    pub granularity: Granularity,
    pub lowercase: bool,
    pub strip_punctuation: bool,
    pub stopwords: HashSet<String>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            granularity: Granularity::Word,
            lowercase: true,
            strip_punctuation: true,
            stopwords: default_stopwords().clone(),
        }
    }
}

impl TokenizerConfig {
    /// Word granularity with the embedded stopword list.
    pub fn word() -> Self {
        Self::default()
    }

    /// Character n-grams of length `n`; no stopword filtering.
    pub fn char_ngram(n: NonZeroUsize) -> Self {
        Self {
            granularity: Granularity::CharNgram(n),
            ..Self::default()
        }
    }
}

/// Normalize one whitespace-delimited chunk. Returns `None` when the
/// chunk normalizes to nothing (e.g. punctuation-only).
fn normalize_chunk(chunk: &str, cfg: &TokenizerConfig) -> Option<String> {
    let stripped = if cfg.strip_punctuation {
        chunk.trim_matches(|c: char| c.is_ascii_punctuation())
    } else {
        chunk
    };
    if stripped.is_empty() {
        return None;
    }
    Some(if cfg.lowercase {
        stripped.to_lowercase()
    } else {
        stripped.to_owned()
    })
}

/// Turn raw utterance text into tokens. Pure function of
/// `(text, cfg)`; an empty result is legal (blank or all-stopword
/// input).
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    match cfg.granularity {
        Granularity::Word => text
            .split_whitespace()
            .filter_map(|chunk| normalize_chunk(chunk, cfg))
            .filter(|tok| !cfg.stopwords.contains(tok))
            .collect(),
        Granularity::CharNgram(n) => {
            let normalized = text
                .split_whitespace()
                .filter_map(|chunk| normalize_chunk(chunk, cfg))
                .collect::<Vec<_>>()
                .join(" ");
            let chars: Vec<char> = normalized.chars().collect();
            let n = n.get();
            if chars.len() < n {
                return Vec::new();
            }
            chars
                .windows(n)
                .map(|w| w.iter().collect::<String>())
                .collect()
        }
    }
}
