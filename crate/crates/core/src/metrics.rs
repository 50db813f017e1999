//! Segmentation evaluation.
//!
//! Two headline metrics: boundary-classification F1 (exact-position
//! matching, positive class = boundary) and Boundary Similarity, which
//! scores the boundary edit distance between hypothesis and reference
//! — unmatched boundaries within `n_t` of each other pair up as
//! transpositions with partial credit, the rest count as full
//! additions/deletions. Pk and WindowDiff are included as secondary
//! metrics for ecosystem compatibility.

use serde::Serialize;

use crate::error::{Error, Result};

/// One operation of the boundary edit distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryEdit {
    /// Boundary present in both segmentations at the same gap.
    Match { position: usize },
    /// Boundary present in exactly one segmentation, beyond near-miss
    /// range of any unmatched counterpart.
    AdditionDeletion { position: usize },
    /// Near-miss pair: hypothesis boundary at `hyp`, reference at
    /// `reference`, with 0 < |hyp - reference| < n_t.
    Transposition { hyp: usize, reference: usize },
}

impl BoundaryEdit {
    /// Transposition offset; zero for other edit kinds.
    pub fn offset(&self) -> usize {
        match self {
            BoundaryEdit::Transposition { hyp, reference } => hyp.abs_diff(*reference),
            _ => 0,
        }
    }
}

fn validate_boundaries(name: &str, b: &[usize], u: usize) -> Result<()> {
    for w in b.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument(format!(
                "{name} boundaries must be strictly increasing"
            )));
        }
    }
    if let Some(&max) = b.last() {
        if u < 2 || max > u - 2 {
            return Err(Error::InvalidArgument(format!(
                "{name} boundary {max} out of range for {u} utterances"
            )));
        }
    }
    Ok(())
}

/// Precision, recall and F1 of exact boundary matching. Both sets
/// empty scores 1.0 across the board; exactly one empty scores 0.0.
pub fn boundary_f1(hyp: &[usize], reference: &[usize], u: usize) -> Result<(f64, f64, f64)> {
    validate_boundaries("hypothesis", hyp, u)?;
    validate_boundaries("reference", reference, u)?;
    let counts = F1Counts::from_sets(hyp, reference);
    Ok((counts.precision(), counts.recall(), counts.f1()))
}

/// Raw confusion counts for boundary classification.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct F1Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl F1Counts {
    fn from_sets(hyp: &[usize], reference: &[usize]) -> Self {
        let tp = hyp.iter().filter(|b| reference.contains(b)).count();
        Self {
            tp,
            fp: hyp.len() - tp,
            fn_: reference.len() - tp,
        }
    }

    fn merge(&mut self, other: &F1Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    pub fn precision(&self) -> f64 {
        if self.tp + self.fp + self.fn_ == 0 {
            return 1.0;
        }
        if self.tp + self.fp == 0 {
            return 0.0;
        }
        self.tp as f64 / (self.tp + self.fp) as f64
    }

    pub fn recall(&self) -> f64 {
        if self.tp + self.fp + self.fn_ == 0 {
            return 1.0;
        }
        if self.tp + self.fn_ == 0 {
            return 0.0;
        }
        self.tp as f64 / (self.tp + self.fn_) as f64
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

/// Boundary edit distance between two boundary sets: exact matches
/// first, then a minimal-operation pairing of the leftovers within
/// `|offset| < n_t` as transpositions, remainder additions/deletions.
///
/// The pairing maximizes the transposition count and, among such
/// matchings, minimizes the summed offsets. For sorted inputs an
/// optimal matching is always non-crossing (an exchange argument on
/// any crossing pair), so a two-sequence alignment DP finds it
/// exactly. A left-to-right greedy would do for the default window of
/// 2, where every transposition has offset 1, but starves later
/// boundaries once wider windows allow offset choices. Among equally
/// cheap pairings, ties resolve toward the lower reference gap.
///
/// Both inputs must be strictly increasing, as produced by the
/// segmenter and enforced by the public metric entry points.
pub fn boundary_edits(hyp: &[usize], reference: &[usize], n_t: usize) -> Vec<BoundaryEdit> {
    let mut edits = Vec::new();
    let mut a: Vec<usize> = Vec::new();
    for &h in hyp {
        if reference.binary_search(&h).is_ok() {
            edits.push(BoundaryEdit::Match { position: h });
        } else {
            a.push(h);
        }
    }
    let b: Vec<usize> = reference
        .iter()
        .copied()
        .filter(|r| hyp.binary_search(r).is_err())
        .collect();

    // dp[i][j]: best (pairs, -summed_offset) aligning a[..i] with b[..j].
    let (n, m) = (a.len(), b.len());
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut dp = vec![(0usize, 0isize); (n + 1) * (m + 1)];
    for i in 1..=n {
        for j in 1..=m {
            let mut best = dp[idx(i - 1, j)].max(dp[idx(i, j - 1)]);
            let off = a[i - 1].abs_diff(b[j - 1]);
            if off < n_t {
                let prev = dp[idx(i - 1, j - 1)];
                best = best.max((prev.0 + 1, prev.1 - off as isize));
            }
            dp[idx(i, j)] = best;
        }
    }

    let mut pairs = Vec::new();
    let mut adds = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        let cur = dp[idx(i, j)];
        if dp[idx(i, j - 1)] == cur {
            adds.push(b[j - 1]);
            j -= 1;
            continue;
        }
        let off = a[i - 1].abs_diff(b[j - 1]);
        let prev = dp[idx(i - 1, j - 1)];
        if off < n_t && (prev.0 + 1, prev.1 - off as isize) == cur {
            pairs.push((a[i - 1], b[j - 1]));
            i -= 1;
            j -= 1;
        } else {
            adds.push(a[i - 1]);
            i -= 1;
        }
    }
    adds.extend_from_slice(&a[..i]);
    adds.extend_from_slice(&b[..j]);

    edits.extend(
        pairs
            .into_iter()
            .rev()
            .map(|(h, r)| BoundaryEdit::Transposition { hyp: h, reference: r }),
    );
    adds.sort_unstable();
    edits.extend(
        adds.into_iter()
            .map(|p| BoundaryEdit::AdditionDeletion { position: p }),
    );
    edits
}

/// Aggregated edit counts, the inputs to the Boundary Similarity ratio.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct EditCounts {
    pub matches: usize,
    pub additions: usize,
    pub transpositions: usize,
    /// Sum of per-transposition penalties `offset / n_t`.
    pub transposition_penalty: f64,
}

impl EditCounts {
    pub fn from_edits(edits: &[BoundaryEdit], n_t: usize) -> Self {
        let mut c = EditCounts::default();
        for e in edits {
            match e {
                BoundaryEdit::Match { .. } => c.matches += 1,
                BoundaryEdit::AdditionDeletion { .. } => c.additions += 1,
                BoundaryEdit::Transposition { .. } => {
                    c.transpositions += 1;
                    c.transposition_penalty += e.offset() as f64 / n_t as f64;
                }
            }
        }
        c
    }

    fn merge(&mut self, other: &EditCounts) {
        self.matches += other.matches;
        self.additions += other.additions;
        self.transpositions += other.transpositions;
        self.transposition_penalty += other.transposition_penalty;
    }

    /// 1 - (additions + transposition penalty) / (additions +
    /// transpositions + matches); 1.0 when there is nothing to compare.
    pub fn boundary_similarity(&self) -> f64 {
        let denom = (self.additions + self.transpositions + self.matches) as f64;
        if denom == 0.0 {
            return 1.0;
        }
        1.0 - (self.additions as f64 + self.transposition_penalty) / denom
    }
}

/// Boundary Similarity in [0, 1]; `n_t` is the near-miss window
/// (default convention: 2, i.e. only adjacent-gap transpositions).
pub fn boundary_similarity(
    hyp: &[usize],
    reference: &[usize],
    u: usize,
    n_t: usize,
) -> Result<f64> {
    if n_t < 2 {
        return Err(Error::InvalidArgument(format!(
            "near-miss window n_t must be at least 2, got {n_t}"
        )));
    }
    validate_boundaries("hypothesis", hyp, u)?;
    validate_boundaries("reference", reference, u)?;
    let edits = boundary_edits(hyp, reference, n_t);
    Ok(EditCounts::from_edits(&edits, n_t).boundary_similarity())
}

/// Windowed error counts shared by Pk and WindowDiff.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct WindowCounts {
    pub pk_errors: usize,
    pub wd_errors: usize,
    pub windows: usize,
}

impl WindowCounts {
    fn merge(&mut self, other: &WindowCounts) {
        self.pk_errors += other.pk_errors;
        self.wd_errors += other.wd_errors;
        self.windows += other.windows;
    }

    pub fn pk(&self) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            self.pk_errors as f64 / self.windows as f64
        }
    }

    pub fn window_diff(&self) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            self.wd_errors as f64 / self.windows as f64
        }
    }
}

/// Pk / WindowDiff with the conventional window: half the mean
/// reference segment length.
pub fn window_counts(hyp: &[usize], reference: &[usize], u: usize) -> WindowCounts {
    if u < 2 {
        return WindowCounts::default();
    }
    let segments = reference.len() + 1;
    let k = ((u as f64 / (2.0 * segments as f64)).round() as usize).max(1);
    if k >= u {
        return WindowCounts::default();
    }
    let in_window = |b: &[usize], lo: usize, hi: usize| {
        // boundaries in gaps [lo, hi): gap g separates utterance g and g+1
        b.iter().filter(|&&g| g >= lo && g < hi).count()
    };
    let mut c = WindowCounts::default();
    for i in 0..(u - k) {
        let h = in_window(hyp, i, i + k);
        let r = in_window(reference, i, i + k);
        if (h == 0) != (r == 0) {
            c.pk_errors += 1;
        }
        if h != r {
            c.wd_errors += 1;
        }
        c.windows += 1;
    }
    c
}

/// Evaluation of one document.
#[derive(Debug, Clone, Serialize)]
pub struct DocumentEval {
    pub id: String,
    pub utterances: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub boundary_similarity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_diff: Option<f64>,
    #[serde(skip)]
    pub f1_counts: F1Counts,
    #[serde(skip)]
    pub edit_counts: EditCounts,
    #[serde(skip)]
    pub window_counts: Option<WindowCounts>,
}

/// Score one hypothesis/reference pair. `with_window_metrics` adds the
/// flagged Pk/WindowDiff columns.
pub fn evaluate_document(
    id: impl Into<String>,
    hyp: &[usize],
    reference: &[usize],
    u: usize,
    n_t: usize,
    with_window_metrics: bool,
) -> Result<DocumentEval> {
    if n_t < 2 {
        return Err(Error::InvalidArgument(format!(
            "near-miss window n_t must be at least 2, got {n_t}"
        )));
    }
    validate_boundaries("hypothesis", hyp, u)?;
    validate_boundaries("reference", reference, u)?;
    let f1_counts = F1Counts::from_sets(hyp, reference);
    let edit_counts = EditCounts::from_edits(&boundary_edits(hyp, reference, n_t), n_t);
    let window = with_window_metrics.then(|| window_counts(hyp, reference, u));
    Ok(DocumentEval {
        id: id.into(),
        utterances: u,
        precision: f1_counts.precision(),
        recall: f1_counts.recall(),
        f1: f1_counts.f1(),
        boundary_similarity: edit_counts.boundary_similarity(),
        pk: window.map(|w| w.pk()),
        window_diff: window.map(|w| w.window_diff()),
        f1_counts,
        edit_counts,
        window_counts: window,
    })
}

/// Corpus-level aggregation flavor: micro pools raw counts across
/// documents, macro averages per-document scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AggregateMode {
    Micro,
    #[default]
    Macro,
}

/// Corpus-level scores under one aggregation flavor.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorpusScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub boundary_similarity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_diff: Option<f64>,
}

/// Full evaluation report; both aggregation flavors are always
/// computed, `aggregate` names the one used for headline comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub aggregate: AggregateMode,
    pub micro: CorpusScores,
    pub macro_: CorpusScores,
    pub per_document: Vec<DocumentEval>,
}

impl EvalReport {
    /// The headline scores under the selected aggregation.
    pub fn headline(&self) -> &CorpusScores {
        match self.aggregate {
            AggregateMode::Micro => &self.micro,
            AggregateMode::Macro => &self.macro_,
        }
    }
}

/// Pool per-document results. Errors on an empty input.
pub fn aggregate_corpus(per_document: Vec<DocumentEval>, mode: AggregateMode) -> Result<EvalReport> {
    if per_document.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot aggregate an empty evaluation".into(),
        ));
    }
    let mut f1_pool = F1Counts::default();
    let mut edit_pool = EditCounts::default();
    let mut window_pool = WindowCounts::default();
    let mut have_window = true;
    for d in &per_document {
        f1_pool.merge(&d.f1_counts);
        edit_pool.merge(&d.edit_counts);
        match &d.window_counts {
            Some(w) => window_pool.merge(w),
            None => have_window = false,
        }
    }
    let micro = CorpusScores {
        precision: f1_pool.precision(),
        recall: f1_pool.recall(),
        f1: f1_pool.f1(),
        boundary_similarity: edit_pool.boundary_similarity(),
        pk: have_window.then(|| window_pool.pk()),
        window_diff: have_window.then(|| window_pool.window_diff()),
    };
    let n = per_document.len() as f64;
    let mean = |f: &dyn Fn(&DocumentEval) -> f64| per_document.iter().map(f).sum::<f64>() / n;
    let mean_opt = |f: &dyn Fn(&DocumentEval) -> Option<f64>| {
        per_document
            .iter()
            .map(f)
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.iter().sum::<f64>() / n)
    };
    let macro_ = CorpusScores {
        precision: mean(&|d| d.precision),
        recall: mean(&|d| d.recall),
        f1: mean(&|d| d.f1),
        boundary_similarity: mean(&|d| d.boundary_similarity),
        pk: mean_opt(&|d| d.pk),
        window_diff: mean_opt(&|d| d.window_diff),
    };
    Ok(EvalReport {
        aggregate: mode,
        micro,
        macro_,
        per_document,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_hand_example() {
        let (p, r, f) = boundary_f1(&[2, 5], &[2, 7], 9).unwrap();
        assert_eq!((p, r, f), (0.5, 0.5, 0.5));
    }

    #[test]
    fn f1_identical_nonempty_sets() {
        let (_, _, f) = boundary_f1(&[1, 4], &[1, 4], 8).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn f1_empty_conventions() {
        let (p, r, f) = boundary_f1(&[], &[], 5).unwrap();
        assert_eq!((p, r, f), (1.0, 1.0, 1.0));
        let (_, _, f) = boundary_f1(&[], &[3], 5).unwrap();
        assert_eq!(f, 0.0);
        let (_, _, f) = boundary_f1(&[3], &[], 5).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn f1_rejects_out_of_range() {
        assert!(boundary_f1(&[4], &[], 5).is_err());
        assert!(boundary_f1(&[], &[0], 1).is_err());
        assert!(boundary_f1(&[2, 2], &[], 9).is_err());
    }

    #[test]
    fn bs_identical_sets() {
        assert_eq!(boundary_similarity(&[3], &[3], 6, 2).unwrap(), 1.0);
        assert_eq!(boundary_similarity(&[], &[], 6, 2).unwrap(), 1.0);
    }

    #[test]
    fn bs_single_addition() {
        assert_eq!(boundary_similarity(&[], &[3], 6, 2).unwrap(), 0.0);
    }

    #[test]
    fn bs_near_miss_transposition() {
        // one transposition of offset 1: 1 - (1/2)/1 = 0.5
        let bs = boundary_similarity(&[4], &[3], 8, 2).unwrap();
        assert!((bs - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bs_offset_beyond_window_degrades_to_additions() {
        // |5 - 3| = 2 is not < n_t = 2: two additions, zero credit.
        assert_eq!(boundary_similarity(&[5], &[3], 9, 2).unwrap(), 0.0);
        // a wider window turns it back into a transposition: 1 - (2/3)/1
        let wide = boundary_similarity(&[5], &[3], 9, 3).unwrap();
        assert!((wide - (1.0 - 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn bs_monotone_near_miss_credit() {
        let exact = boundary_similarity(&[3], &[3], 12, 2).unwrap();
        let near = boundary_similarity(&[4], &[3], 12, 2).unwrap();
        let far = boundary_similarity(&[6], &[3], 12, 2).unwrap();
        assert!(exact > near && near > far);
    }

    #[test]
    fn bs_is_symmetric() {
        let cases: &[(&[usize], &[usize])] = &[
            (&[1, 4, 7], &[2, 4]),
            (&[0, 2], &[1, 3, 5]),
            (&[], &[2, 6]),
        ];
        for (a, b) in cases {
            assert_eq!(
                boundary_similarity(a, b, 10, 2).unwrap(),
                boundary_similarity(b, a, 10, 2).unwrap(),
                "asymmetric for {a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn bs_rejects_bad_window() {
        assert!(boundary_similarity(&[1], &[1], 4, 1).is_err());
        assert!(boundary_similarity(&[1], &[1], 4, 0).is_err());
    }

    #[test]
    fn edits_pair_nearest_and_keep_leftovers() {
        // hyp {2, 6}, ref {3, 9}: 2<->3 transposes, 6 and 9 are adds.
        let edits = boundary_edits(&[2, 6], &[3, 9], 2);
        let counts = EditCounts::from_edits(&edits, 2);
        assert_eq!(counts.matches, 0);
        assert_eq!(counts.transpositions, 1);
        assert_eq!(counts.additions, 2);
    }

    #[test]
    fn edits_tie_prefers_lower_reference_gap() {
        // hyp 5 is equidistant from refs 4 and 6; pairing must take 4,
        // leaving 6 for a later hypothesis boundary if any.
        let edits = boundary_edits(&[5], &[4, 6], 2);
        assert!(edits.contains(&BoundaryEdit::Transposition { hyp: 5, reference: 4 }));
    }

    #[test]
    fn transposition_offset_in_window() {
        for e in boundary_edits(&[2, 5, 9], &[3, 4, 8], 3) {
            if let BoundaryEdit::Transposition { .. } = e {
                assert!((1..3).contains(&e.offset()));
            }
        }
    }

    #[test]
    fn pk_and_window_diff_basics() {
        let w = window_counts(&[4], &[4], 10);
        assert_eq!(w.pk(), 0.0);
        assert_eq!(w.window_diff(), 0.0);
        let wrong = window_counts(&[], &[4], 10);
        assert!(wrong.pk() > 0.0);
        assert!(wrong.window_diff() > 0.0);
        // degenerate: too few utterances for any window
        assert_eq!(window_counts(&[], &[], 1).pk(), 0.0);
    }

    #[test]
    fn aggregate_single_document_is_identity() {
        let d = evaluate_document("only", &[2], &[2, 5], 9, 2, true).unwrap();
        let report = aggregate_corpus(vec![d.clone()], AggregateMode::Macro).unwrap();
        assert_eq!(report.micro.f1, d.f1);
        assert_eq!(report.macro_.f1, d.f1);
        assert_eq!(report.micro.boundary_similarity, d.boundary_similarity);
        assert_eq!(report.macro_.pk, d.pk);
    }

    #[test]
    fn macro_is_mean_of_documents() {
        let perfect = evaluate_document("a", &[3], &[3], 8, 2, false).unwrap();
        let zero = evaluate_document("b", &[4], &[2], 8, 2, false).unwrap();
        assert_eq!(zero.f1, 0.0);
        let report = aggregate_corpus(vec![perfect, zero], AggregateMode::Macro).unwrap();
        assert_eq!(report.macro_.f1, 0.5);
        assert_eq!(report.headline().f1, 0.5);
    }

    #[test]
    fn micro_pools_counts() {
        // doc a: tp=1 fp=0 fn=0; doc b: tp=0 fp=1 fn=1
        let a = evaluate_document("a", &[3], &[3], 8, 2, false).unwrap();
        let b = evaluate_document("b", &[6], &[2], 10, 2, false).unwrap();
        let report = aggregate_corpus(vec![a, b], AggregateMode::Micro).unwrap();
        // pooled: tp 1, fp 1, fn 1 -> P = R = 0.5 -> F1 = 0.5
        assert_eq!(report.micro.f1, 0.5);
        // macro differs: (1.0 + 0.0) / 2
        assert_eq!(report.macro_.f1, 0.5);
        // pooled BS: doc a: M=1; doc b: AD=2 -> 1 - 2/3
        assert!((report.micro.boundary_similarity - (1.0 - 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn aggregate_rejects_empty_input() {
        assert!(aggregate_corpus(Vec::new(), AggregateMode::Macro).is_err());
    }

    #[test]
    fn f1_order_invariance_across_documents() {
        let a = evaluate_document("a", &[1], &[1, 3], 7, 2, false).unwrap();
        let b = evaluate_document("b", &[2, 4], &[2], 8, 2, false).unwrap();
        let r1 = aggregate_corpus(vec![a.clone(), b.clone()], AggregateMode::Macro).unwrap();
        let r2 = aggregate_corpus(vec![b, a], AggregateMode::Macro).unwrap();
        assert_eq!(r1.micro.f1, r2.micro.f1);
        assert_eq!(r1.macro_.f1, r2.macro_.f1);
    }
}
