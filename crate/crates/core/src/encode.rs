//! Token stream -> utterance hypervector.
//!
//! Each token's vector is rotated by its distance from the end of the
//! utterance (`l - i - 1` for the i-th of l tokens, so the last token
//! gets shift 0) and the rotated vectors are majority-bundled. Encoding
//! is pure: the same tokens under the same seed context always yield a
//! bit-identical embedding, independent of threading.

use crate::corpus::Transcript;
use crate::hv::{BundleAccumulator, Hypervector, SeedContext, EMPTY_UTTERANCE_KEY};
use crate::tokenize::{tokenize, TokenizerConfig};

/// One utterance's hypervector plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceEmbedding {
    vector: Hypervector,
    token_count: usize,
    utterance_index: usize,
}

impl UtteranceEmbedding {
    pub fn vector(&self) -> &Hypervector {
        &self.vector
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn utterance_index(&self) -> usize {
        self.utterance_index
    }
}

fn encode_at<S: AsRef<str>>(
    tokens: &[S],
    ctx: &SeedContext,
    utterance_index: usize,
) -> UtteranceEmbedding {
    let l = tokens.len();
    if l == 0 {
        // All empty utterances share one vector, so runs of blank or
        // fully stopworded turns score cosine 1.0 against each other
        // and never fabricate a boundary.
        return UtteranceEmbedding {
            vector: Hypervector::random(ctx, EMPTY_UTTERANCE_KEY),
            token_count: 0,
            utterance_index,
        };
    }
    let mut acc = BundleAccumulator::new(ctx.dim());
    for (i, tok) in tokens.iter().enumerate() {
        let rotated = Hypervector::random(ctx, tok.as_ref()).permute(l - i - 1);
        acc.add(&rotated).expect("accumulator dim matches context");
    }
    UtteranceEmbedding {
        vector: acc.finish().expect("bundle is non-empty"),
        token_count: l,
        utterance_index,
    }
}

/// Encode one token sequence. Duplicate tokens are kept — every
/// occurrence is rotated by its own position — and an empty sequence
/// maps to the shared empty-utterance vector.
pub fn encode_utterance<S: AsRef<str>>(tokens: &[S], ctx: &SeedContext) -> UtteranceEmbedding {
    encode_at(tokens, ctx, 0)
}

/// Tokenize and encode every utterance of a transcript, in order.
pub fn encode_transcript(
    transcript: &Transcript,
    cfg: &TokenizerConfig,
    ctx: &SeedContext,
) -> Vec<UtteranceEmbedding> {
    transcript
        .utterances
        .iter()
        .enumerate()
        .map(|(idx, text)| encode_at(&tokenize(text, cfg), ctx, idx))
        .collect()
}
