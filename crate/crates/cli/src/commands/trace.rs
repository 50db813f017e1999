use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use hypertile::{
    boundary_scores_with, count_boundary_scores, encode_transcript, read_corpus,
    select_boundaries, select_boundaries_damped, write_trace, Result, SegmentMode,
};

use crate::config::RunArgs;

/// Which gap-score series to trace: the hypervector pipeline or the
/// one-hot token-count baseline it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    #[default]
    Hdc,
    Count,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Input corpus (JSONL)
    #[arg(long)]
    pub input: PathBuf,

    /// Output directory: one `<id>.csv` per document plus `run.json`
    #[arg(long)]
    pub outdir: PathBuf,

    /// Score representation to trace
    #[arg(long, value_enum, default_value_t)]
    pub repr: Repr,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Serialize)]
struct RunMeta {
    repr: Repr,
    documents: usize,
    config: serde_json::Value,
}

/// Document ids become file names; anything outside [A-Za-z0-9._-]
/// maps to '_'.
fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn run(args: TraceArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    let ctx = args.run.seed_context()?;
    let tokenizer = args.run.tokenizer();
    let segmenter = args.run.segmenter();

    std::fs::create_dir_all(&args.outdir)
        .map_err(|e| hypertile::Error::Io { path: args.outdir.clone(), source: e })?;

    for doc in &corpus {
        let scores = match args.repr {
            Repr::Hdc => {
                let embeddings = encode_transcript(doc, &tokenizer, &ctx);
                boundary_scores_with(&embeddings, segmenter.stddev)
            }
            Repr::Count => count_boundary_scores(doc, &tokenizer, segmenter.stddev),
        };
        let selection = match segmenter.mode {
            SegmentMode::Auto => select_boundaries(&scores),
            SegmentMode::Damp => select_boundaries_damped(&scores, segmenter.log_base),
        };
        let path = args.outdir.join(format!("{}.csv", sanitize(&doc.id)));
        write_trace(&path, &scores, &selection)?;
    }

    let meta = RunMeta {
        repr: args.repr,
        documents: corpus.len(),
        config: args.run.echo_value(),
    };
    let meta_path = args.outdir.join("run.json");
    std::fs::write(
        &meta_path,
        serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n",
    )
    .map_err(|e| hypertile::Error::Io { path: meta_path, source: e })?;

    println!(
        "traced {} documents ({:?} scores) -> {}",
        corpus.len(),
        args.repr,
        args.outdir.display()
    );
    Ok(())
}
