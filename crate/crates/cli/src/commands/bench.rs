use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;

use hypertile::{read_corpus, segment_transcript, Result, Transcript};

use crate::config::RunArgs;

/// Mean per-utterance latency originally reported for this pipeline
/// (measured on an AMD EPYC 7742), printed for context next to the
/// local numbers.
const REFERENCE_MS_PER_UTTERANCE: f64 = 1.09;

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Input corpus (JSONL); file I/O is excluded from timing
    #[arg(long)]
    pub input: PathBuf,

    /// Timed repetitions (after one warmup pass)
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,

    #[command(flatten)]
    pub run: RunArgs,
}

fn mean_stddev(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run(args: BenchArgs) -> Result<()> {
    if args.repeats == 0 {
        return Err(hypertile::Error::InvalidArgument(
            "bench needs at least one repeat".into(),
        ));
    }
    let corpus = read_corpus(&args.input)?;
    let utterances: usize = corpus.iter().map(Transcript::utterance_count).sum();
    if utterances == 0 {
        return Err(hypertile::Error::InvalidArgument(
            "bench corpus has no utterances".into(),
        ));
    }
    let ctx = args.run.seed_context()?;
    let tokenizer = args.run.tokenizer();
    let segmenter = args.run.segmenter();
    let pool = args
        .run
        .thread_pool()
        .map_err(|e| hypertile::Error::InvalidConfig(e.to_string()))?;

    let sequential = || {
        for doc in &corpus {
            std::hint::black_box(segment_transcript(doc, &tokenizer, &ctx, &segmenter));
        }
    };
    let parallel = || {
        pool.install(|| {
            corpus.par_iter().for_each(|doc| {
                std::hint::black_box(segment_transcript(doc, &tokenizer, &ctx, &segmenter));
            });
        })
    };

    // Warmup primes allocator and caches.
    sequential();

    let time_ms_per_utt = |f: &dyn Fn()| -> Vec<f64> {
        (0..args.repeats)
            .map(|_| {
                let t0 = Instant::now();
                f();
                t0.elapsed().as_secs_f64() * 1e3 / utterances as f64
            })
            .collect()
    };
    let single = time_ms_per_utt(&sequential);
    let multi = time_ms_per_utt(&parallel);

    let threads = pool.current_num_threads();
    println!(
        "corpus: {} documents, {} utterances | dim {} seed {} mode {:?}",
        corpus.len(),
        utterances,
        args.run.dim,
        args.run.seed,
        args.run.mode,
    );
    for (label, samples) in [("single-thread", &single), ("multi-thread", &multi)] {
        let (mean, sd) = mean_stddev(samples);
        let detail = if label == "multi-thread" {
            format!(" ({threads} threads)")
        } else {
            String::new()
        };
        println!(
            "{label}{detail}: {mean:.4} ms/utterance (stddev {sd:.4}, {:.0} utterances/s, {} repeats)",
            1e3 / mean,
            args.repeats,
        );
    }
    println!(
        "reference: {REFERENCE_MS_PER_UTTERANCE:.2} ms/utterance (originally reported single-CPU mean)"
    );
    Ok(())
}
