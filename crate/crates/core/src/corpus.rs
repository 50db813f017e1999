//! Transcript corpus I/O and the synthetic-corpus generator.
//!
//! The canonical on-disk format is JSONL: one transcript object per
//! line with fields `id` (string), `utterances` (array of strings),
//! optional `boundaries` (array of gap indices) and optional `meta`
//! (string-to-string object). UTF-8, LF line endings. Boundary index
//! `j` means "boundary after utterance j" everywhere in this crate.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::segment::{BoundaryScores, SegmentMode, Segmentation};

/// One dialogue transcript: ordered utterances plus an optional gold
/// (reference) segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub id: String,
    pub utterances: Vec<String>,
    #[serde(
        rename = "boundaries",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub gold_boundaries: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meta: Option<BTreeMap<String, String>>,
}

impl Transcript {
    pub fn new(id: impl Into<String>, utterances: Vec<String>) -> Self {
        Self {
            id: id.into(),
            utterances,
            gold_boundaries: None,
            meta: None,
        }
    }

    pub fn utterance_count(&self) -> usize {
        self.utterances.len()
    }

    /// Check the gold-boundary invariants: strictly increasing gap
    /// indices in `[0, U-2]`.
    pub fn validate(&self) -> Result<()> {
        let Some(bounds) = &self.gold_boundaries else {
            return Ok(());
        };
        let u = self.utterances.len();
        let mut prev: Option<usize> = None;
        for &b in bounds {
            if u < 2 || b > u - 2 {
                return Err(Error::Validation {
                    id: self.id.clone(),
                    message: format!(
                        "boundary {b} out of range for {u} utterances (valid gaps: 0..={})",
                        u.saturating_sub(2)
                    ),
                });
            }
            if let Some(p) = prev {
                if b <= p {
                    return Err(Error::Validation {
                        id: self.id.clone(),
                        message: format!("boundaries must be strictly increasing ({p} then {b})"),
                    });
                }
            }
            prev = Some(b);
        }
        Ok(())
    }
}

/// Read a JSONL corpus. Malformed lines error with their line number;
/// invalid boundaries error with the offending document id. An empty
/// file is an empty corpus.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Transcript>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let transcript: Transcript = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        transcript.validate()?;
        out.push(transcript);
    }
    Ok(out)
}

/// Write a corpus as JSONL.
pub fn write_corpus(path: impl AsRef<Path>, transcripts: &[Transcript]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for t in transcripts {
        serde_json::to_writer(&mut w, t).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: 0,
            message: e.to_string(),
        })?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// One line of a segmentation output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentationRecord {
    pub id: String,
    pub boundaries: Vec<usize>,
    pub mode: SegmentMode,
    pub seed: u64,
    /// Resolved run configuration, echoed into every record so output
    /// files are self-describing.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<serde_json::Value>,
}

/// Write segmentation results as JSONL.
pub fn write_segmentation(
    path: impl AsRef<Path>,
    records: &[SegmentationRecord],
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: 0,
            message: e.to_string(),
        })?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Lenient reader for files carrying `id` + `boundaries` per line:
/// accepts both segmentation output and gold corpora, ignoring any
/// other fields.
pub fn read_boundary_file(path: impl AsRef<Path>) -> Result<Vec<(String, Vec<usize>)>> {
    #[derive(Deserialize)]
    struct Record {
        id: String,
        boundaries: Option<Vec<usize>>,
    }
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        let bounds = rec.boundaries.ok_or_else(|| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message: format!("record '{}' has no boundaries field", rec.id),
        })?;
        out.push((rec.id, bounds));
    }
    Ok(out)
}

/// Write a per-document score trace as CSV with columns `gap_index,
/// score, score_normalized, threshold, is_boundary`. Normalized scores
/// are min-max scaled (a constant series normalizes to all zeros);
/// `threshold` repeats the document's adaptive threshold on every row.
pub fn write_trace(
    path: impl AsRef<Path>,
    scores: &BoundaryScores,
    segmentation: &Segmentation,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);
    writeln!(w, "gap_index,score,score_normalized,threshold,is_boundary").map_err(io_err)?;

    let s = scores.scores();
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    for (j, &score) in s.iter().enumerate() {
        let normalized = if span > 0.0 { (score - min) / span } else { 0.0 };
        writeln!(
            w,
            "{j},{score},{normalized},{},{}",
            scores.threshold(),
            segmentation.boundaries().contains(&j)
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Parameters for the synthetic corpus generator.
///
/// Every document concatenates `topics` blocks of
/// `utterances_per_topic` utterances. Blocks have pairwise-disjoint
/// vocabularies of `vocab_size_per_topic` tokens. Within a block, the
/// leading `round(anchor_fraction * tokens_per_utterance)` positions
/// of every utterance repeat a block-level anchor draw (giving the
/// block its recoverable lexical identity) and the remaining positions
/// are drawn uniformly from the block vocabulary per utterance. Gold
/// boundaries sit at the block joints.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub docs: usize,
    pub topics_min: usize,
    pub topics_max: usize,
    pub utterances_per_topic: usize,
    pub vocab_size_per_topic: usize,
    pub tokens_per_utterance: usize,
    pub anchor_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            docs: 1,
            topics_min: 2,
            topics_max: 2,
            utterances_per_topic: 10,
            vocab_size_per_topic: 50,
            tokens_per_utterance: 8,
            anchor_fraction: 0.875,
            seed: 42,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.docs == 0
            || self.topics_min == 0
            || self.utterances_per_topic == 0
            || self.vocab_size_per_topic == 0
            || self.tokens_per_utterance == 0
        {
            return Err(Error::InvalidArgument(
                "synthetic corpus counts must all be at least 1".into(),
            ));
        }
        if self.topics_max < self.topics_min {
            return Err(Error::InvalidArgument(format!(
                "topics_max {} below topics_min {}",
                self.topics_max, self.topics_min
            )));
        }
        if !(0.0..=1.0).contains(&self.anchor_fraction) {
            return Err(Error::InvalidArgument(format!(
                "anchor_fraction {} outside [0, 1]",
                self.anchor_fraction
            )));
        }
        Ok(())
    }
}

/// Generate a deterministic synthetic corpus. Per-document topic
/// counts are drawn uniformly from `topics_min..=topics_max`.
pub fn synth_corpus(cfg: &SynthConfig) -> Result<Vec<Transcript>> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.seed);
    let tpu = cfg.tokens_per_utterance;
    let anchored = ((cfg.anchor_fraction * tpu as f64).round() as usize).min(tpu);
    let mut out = Vec::with_capacity(cfg.docs);
    for d in 0..cfg.docs {
        let topics = cfg.topics_min + rng.next_below(cfg.topics_max - cfg.topics_min + 1);
        let mut utterances = Vec::with_capacity(topics * cfg.utterances_per_topic);
        let mut gold = Vec::new();
        // Zero-padded word indices keep every token the same width, so
        // utterances of equal token count also have equal character
        // count and character-n-gram positions stay aligned.
        let width = cfg.vocab_size_per_topic.saturating_sub(1).to_string().len();
        for b in 0..topics {
            let vocab: Vec<String> = (0..cfg.vocab_size_per_topic)
                .map(|k| format!("t{b}w{k:0width$}"))
                .collect();
            let anchor: Vec<&String> = (0..anchored)
                .map(|_| &vocab[rng.next_below(vocab.len())])
                .collect();
            for _ in 0..cfg.utterances_per_topic {
                let mut toks: Vec<&str> = anchor.iter().map(|s| s.as_str()).collect();
                for _ in anchored..tpu {
                    toks.push(&vocab[rng.next_below(vocab.len())]);
                }
                utterances.push(toks.join(" "));
            }
            if b + 1 < topics {
                gold.push((b + 1) * cfg.utterances_per_topic - 1);
            }
        }
        let mut meta = BTreeMap::new();
        meta.insert("generator".to_owned(), "synth".to_owned());
        meta.insert("topics".to_owned(), topics.to_string());
        out.push(Transcript {
            id: format!("synth-{d:04}"),
            utterances,
            gold_boundaries: Some(gold),
            meta: Some(meta),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::StddevMode;
    use std::collections::HashSet;

    fn tmp(name: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        (dir, path)
    }

    #[test]
    fn parse_minimal_record() {
        let line = r#"{"id":"d1","utterances":["a","b"],"boundaries":[0]}"#;
        let t: Transcript = serde_json::from_str(line).unwrap();
        assert_eq!(t.utterance_count(), 2);
        assert_eq!(t.gold_boundaries, Some(vec![0]));
        t.validate().unwrap();
    }

    #[test]
    fn out_of_range_boundary_is_rejected() {
        let t = Transcript {
            id: "bad".into(),
            utterances: vec!["a".into(), "b".into(), "c".into()],
            gold_boundaries: Some(vec![5]),
            meta: None,
        };
        let err = t.validate().unwrap_err();
        assert!(matches!(err, Error::Validation { ref id, .. } if id == "bad"));
    }

    #[test]
    fn non_increasing_boundaries_are_rejected() {
        let t = Transcript {
            id: "dup".into(),
            utterances: (0..5).map(|i| i.to_string()).collect(),
            gold_boundaries: Some(vec![2, 2]),
            meta: None,
        };
        assert!(t.validate().is_err());
    }

    #[test]
    fn empty_file_is_an_empty_corpus() {
        let (_dir, path) = tmp("empty.jsonl");
        std::fs::write(&path, "").unwrap();
        assert!(read_corpus(&path).unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let (_dir, path) = tmp("broken.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"ok\",\"utterances\":[\"x\"]}\nnot json\n",
        )
        .unwrap();
        match read_corpus(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = read_corpus("/nonexistent/corpus.jsonl").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/corpus.jsonl"));
    }

    #[test]
    fn corpus_round_trip() {
        let corpus = synth_corpus(&SynthConfig {
            docs: 3,
            topics_min: 2,
            topics_max: 4,
            ..SynthConfig::default()
        })
        .unwrap();
        let (_dir, path) = tmp("corpus.jsonl");
        write_corpus(&path, &corpus).unwrap();
        assert_eq!(read_corpus(&path).unwrap(), corpus);
    }

    #[test]
    fn segmentation_round_trip_preserves_boundaries() {
        let records = vec![
            SegmentationRecord {
                id: "d1".into(),
                boundaries: vec![3, 9],
                mode: SegmentMode::Auto,
                seed: 42,
                config: None,
            },
            SegmentationRecord {
                id: "d2".into(),
                boundaries: vec![],
                mode: SegmentMode::Damp,
                seed: 42,
                config: None,
            },
        ];
        let (_dir, path) = tmp("seg.jsonl");
        write_segmentation(&path, &records).unwrap();
        let raw = std::fs::read_to_string(&path).unwrap();
        assert!(raw.contains("\"boundaries\":[]"), "{raw}");
        let read = read_boundary_file(&path).unwrap();
        assert_eq!(read[0], ("d1".into(), vec![3, 9]));
        assert_eq!(read[1], ("d2".into(), vec![]));
    }

    #[test]
    fn trace_marks_the_selected_row() {
        use crate::segment::select_boundaries;
        let bs = BoundaryScores::from_scores(
            vec![0.9, 0.9, 0.9, 0.1, 0.9],
            StddevMode::Population,
        );
        let seg = select_boundaries(&bs);
        let (_dir, path) = tmp("trace.csv");
        write_trace(&path, &bs, &seg).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "gap_index,score,score_normalized,threshold,is_boundary");
        assert_eq!(lines.len(), 6);
        for (j, line) in lines[1..].iter().enumerate() {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[0], j.to_string());
            let threshold: f64 = cols[3].parse().unwrap();
            assert!((threshold - 0.42).abs() < 1e-12);
            assert_eq!(cols[4], if j == 3 { "true" } else { "false" });
        }
        // row 3 is the minimum -> normalizes to 0; the rest to 1
        let norm3: f64 = lines[4].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(norm3, 0.0);
    }

    #[test]
    fn synth_shape_and_gold_boundaries() {
        let corpus = synth_corpus(&SynthConfig::default()).unwrap();
        assert_eq!(corpus.len(), 1);
        let t = &corpus[0];
        assert_eq!(t.utterance_count(), 20);
        assert_eq!(t.gold_boundaries, Some(vec![9]));
        t.validate().unwrap();

        let single = synth_corpus(&SynthConfig {
            topics_min: 1,
            topics_max: 1,
            ..SynthConfig::default()
        })
        .unwrap();
        assert_eq!(single[0].gold_boundaries, Some(vec![]));
    }

    #[test]
    fn synth_vocabularies_are_pairwise_disjoint() {
        let corpus = synth_corpus(&SynthConfig {
            topics_min: 4,
            topics_max: 4,
            ..SynthConfig::default()
        })
        .unwrap();
        let t = &corpus[0];
        let upt = 10;
        let block_vocab = |b: usize| -> HashSet<&str> {
            t.utterances[b * upt..(b + 1) * upt]
                .iter()
                .flat_map(|u| u.split(' '))
                .collect()
        };
        for a in 0..4 {
            for b in (a + 1)..4 {
                assert!(
                    block_vocab(a).is_disjoint(&block_vocab(b)),
                    "blocks {a} and {b} share tokens"
                );
            }
        }
    }

    #[test]
    fn synth_is_deterministic_per_seed() {
        let cfg = SynthConfig {
            docs: 5,
            topics_min: 3,
            topics_max: 6,
            ..SynthConfig::default()
        };
        assert_eq!(synth_corpus(&cfg).unwrap(), synth_corpus(&cfg).unwrap());
        let other = synth_corpus(&SynthConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(synth_corpus(&cfg).unwrap(), other);
    }

    #[test]
    fn round_trip_survives_awkward_content() {
        use proptest::prelude::*;
        let strategy = proptest::collection::vec(
            (
                "[a-zA-Z0-9 _.\\-]{1,12}",
                proptest::collection::vec(any::<String>(), 0..6),
                proptest::option::of(proptest::collection::vec(any::<(String, String)>(), 0..3)),
            ),
            0..8,
        );
        let mut runner = proptest::test_runner::TestRunner::default();
        runner
            .run(&strategy, |docs| {
                let corpus: Vec<Transcript> = docs
                    .into_iter()
                    .enumerate()
                    .map(|(i, (id, utterances, meta))| {
                        let u = utterances.len();
                        Transcript {
                            // unique ids; boundaries only where legal
                            id: format!("{id}-{i}"),
                            gold_boundaries: if u >= 2 { Some(vec![0]) } else { None },
                            utterances,
                            meta: meta.map(|kv| kv.into_iter().collect()),
                        }
                    })
                    .collect();
                let dir = tempfile::tempdir().unwrap();
                let path = dir.path().join("c.jsonl");
                write_corpus(&path, &corpus).unwrap();
                prop_assert_eq!(read_corpus(&path).unwrap(), corpus);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn synth_rejects_bad_counts() {
        assert!(synth_corpus(&SynthConfig {
            topics_min: 0,
            ..SynthConfig::default()
        })
        .is_err());
        assert!(synth_corpus(&SynthConfig {
            topics_min: 3,
            topics_max: 2,
            ..SynthConfig::default()
        })
        .is_err());
        assert!(synth_corpus(&SynthConfig {
            anchor_fraction: 1.5,
            ..SynthConfig::default()
        })
        .is_err());
    }
}
