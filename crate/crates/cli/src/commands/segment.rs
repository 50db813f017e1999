use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;

use hypertile::{read_corpus, segment_transcript, write_segmentation, Result, SegmentationRecord};

use crate::config::RunArgs;

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input corpus (JSONL, one transcript per line)
    #[arg(long)]
    pub input: PathBuf,

    /// Output segmentation file (JSONL)
    #[arg(long)]
    pub output: PathBuf,

    #[command(flatten)]
    pub run: RunArgs,
}

pub fn run(args: SegmentArgs) -> Result<()> {
    let corpus = read_corpus(&args.input)?;
    let ctx = args.run.seed_context()?;
    let tokenizer = args.run.tokenizer();
    let segmenter = args.run.segmenter();
    let echo = args.run.echo_value();
    let pool = args
        .run
        .thread_pool()
        .map_err(|e| hypertile::Error::InvalidConfig(e.to_string()))?;

    let started = Instant::now();
    let records: Vec<SegmentationRecord> = pool.install(|| {
        corpus
            .par_iter()
            .map(|doc| {
                let seg = segment_transcript(doc, &tokenizer, &ctx, &segmenter);
                SegmentationRecord {
                    id: doc.id.clone(),
                    boundaries: seg.boundaries().to_vec(),
                    mode: seg.mode(),
                    seed: args.run.seed,
                    config: Some(echo.clone()),
                }
            })
            .collect()
    });
    let elapsed = started.elapsed();

    write_segmentation(&args.output, &records)?;

    let utterances: usize = corpus.iter().map(|d| d.utterance_count()).sum();
    let mean_segments = if records.is_empty() {
        0.0
    } else {
        records
            .iter()
            .map(|r| r.boundaries.len() as f64 + 1.0)
            .sum::<f64>()
            / records.len() as f64
    };
    println!(
        "segmented {} documents ({} utterances) in {:.1} ms; mean {:.2} segments/document -> {}",
        records.len(),
        utterances,
        elapsed.as_secs_f64() * 1e3,
        mean_segments,
        args.output.display()
    );
    Ok(())
}
