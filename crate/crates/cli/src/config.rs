//! Shared run configuration: flags, their resolution into engine
//! types, and the config echo embedded in every output artifact.

use clap::{Args, ValueEnum};
use serde::Serialize;

use hypertile::{
    Granularity, LogBase, SeedContext, SegmentMode, SegmenterConfig, StddevMode, TokenizerConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[default]
    Auto,
    Damp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GranularityArg {
    #[default]
    Word,
    /// Character trigrams.
    Char3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBaseArg {
    #[default]
    Natural,
    Base2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StddevArg {
    #[default]
    Population,
    Sample,
}

fn parse_dim(s: &str) -> Result<usize, String> {
    let dim: usize = s.parse().map_err(|e| format!("{e}"))?;
    if dim < 64 {
        return Err(format!("dimension must be at least 64, got {dim}"));
    }
    Ok(dim)
}

/// Flags shared by every pipeline-running subcommand. Defaults
/// reproduce the reference configuration (10,000 dimensions, word
/// granularity, auto mode); anything else takes an explicit flag.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Hypervector dimension (minimum 64)
    #[arg(long, default_value = "10000", value_parser = parse_dim)]
    pub dim: usize,

    /// Global random seed
    #[arg(long, env = "HYPERTILE_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Boundary selection mode
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,

    /// Token granularity
    #[arg(long, value_enum, default_value_t)]
    pub granularity: GranularityArg,

    /// Logarithm base for the damp-mode cap
    #[arg(long, value_enum, default_value_t)]
    pub log_base: LogBaseArg,

    /// Standard deviation convention for the threshold
    #[arg(long, value_enum, default_value_t)]
    pub stddev: StddevArg,

    /// Worker threads for corpus-level parallelism (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

/// Resolved run configuration, echoed into output metadata. Thread
/// count and paths are deliberately excluded: they must never affect
/// output bytes.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub seed: u64,
    pub mode: ModeArg,
    pub granularity: GranularityArg,
    pub log_base: LogBaseArg,
    pub stddev: StddevArg,
}

impl RunArgs {
    pub fn seed_context(&self) -> Result<SeedContext, hypertile::Error> {
        SeedContext::new(self.seed, self.dim)
    }

    pub fn tokenizer(&self) -> TokenizerConfig {
        match self.granularity {
            GranularityArg::Word => TokenizerConfig::word(),
            GranularityArg::Char3 => {
                TokenizerConfig {
                    granularity: Granularity::char_trigram(),
                    ..TokenizerConfig::word()
                }
            }
        }
    }

    pub fn segmenter(&self) -> SegmenterConfig {
        SegmenterConfig {
            mode: match self.mode {
                ModeArg::Auto => SegmentMode::Auto,
                ModeArg::Damp => SegmentMode::Damp,
            },
            log_base: match self.log_base {
                LogBaseArg::Natural => LogBase::Natural,
                LogBaseArg::Base2 => LogBase::Base2,
            },
            stddev: match self.stddev {
                StddevArg::Population => StddevMode::Population,
                StddevArg::Sample => StddevMode::Sample,
            },
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            dim: self.dim,
            seed: self.seed,
            mode: self.mode,
            granularity: self.granularity,
            log_base: self.log_base,
            stddev: self.stddev,
        }
    }

    /// Thread pool honoring `--threads`; `--threads 1` forces fully
    /// sequential execution.
    pub fn thread_pool(&self) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
    }

    pub fn echo_value(&self) -> serde_json::Value {
        serde_json::to_value(self.echo()).expect("config serializes")
    }
}
