use std::path::PathBuf;

use clap::Args;

use hypertile::{synth_corpus, write_corpus, Result, SynthConfig};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output corpus path (JSONL)
    #[arg(long)]
    pub output: PathBuf,

    /// Number of documents
    #[arg(long, default_value_t = 1)]
    pub docs: usize,

    /// Topics per document (lower bound when --topics-max is given)
    #[arg(long, default_value_t = 2)]
    pub topics: usize,

    /// Upper bound on topics per document (defaults to --topics)
    #[arg(long)]
    pub topics_max: Option<usize>,

    #[arg(long, default_value_t = 10)]
    pub utterances_per_topic: usize,

    /// Distinct tokens per topic block
    #[arg(long, default_value_t = 50)]
    pub vocab_size: usize,

    #[arg(long, default_value_t = 8)]
    pub tokens_per_utterance: usize,

    /// Fraction of each utterance repeating the block anchor draw
    #[arg(long, default_value_t = 0.875)]
    pub anchor: f64,

    /// Generator seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

pub fn run(args: SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        docs: args.docs,
        topics_min: args.topics,
        topics_max: args.topics_max.unwrap_or(args.topics),
        utterances_per_topic: args.utterances_per_topic,
        vocab_size_per_topic: args.vocab_size,
        tokens_per_utterance: args.tokens_per_utterance,
        anchor_fraction: args.anchor,
        seed: args.seed,
    };
    let corpus = synth_corpus(&cfg)?;
    write_corpus(&args.output, &corpus)?;
    let utterances: usize = corpus.iter().map(|t| t.utterance_count()).sum();
    println!(
        "wrote {} synthetic documents ({} utterances) -> {}",
        corpus.len(),
        utterances,
        args.output.display()
    );
    Ok(())
}
