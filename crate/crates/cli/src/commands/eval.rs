use std::collections::HashMap;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use hypertile::{
    aggregate_corpus, evaluate_document, read_boundary_file, read_corpus, AggregateMode,
    DocumentEval, Error, EvalReport, Result,
};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Hypothesis boundaries (segmentation JSONL; any JSONL with id +
    /// boundaries fields works)
    #[arg(long)]
    pub hyp: PathBuf,

    /// Reference corpus with gold boundaries (JSONL)
    #[arg(long = "ref")]
    pub reference: PathBuf,

    /// Near-miss window for Boundary Similarity
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(usize))]
    pub n_t: usize,

    /// Also report Pk and WindowDiff
    #[arg(long)]
    pub window_metrics: bool,

    /// Emit the full report as JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    n_t: usize,
    report: &'a EvalReport,
}

pub fn run(args: EvalArgs) -> Result<()> {
    let reference = read_corpus(&args.reference)?;
    let hyp = read_boundary_file(&args.hyp)?;

    let mut hyp_by_id: HashMap<&str, &[usize]> = HashMap::new();
    for (id, bounds) in &hyp {
        if hyp_by_id.insert(id, bounds).is_some() {
            return Err(Error::Validation {
                id: id.clone(),
                message: "duplicate id in hypothesis file".into(),
            });
        }
    }

    let mut per_document: Vec<DocumentEval> = Vec::with_capacity(reference.len());
    for doc in &reference {
        let gold = doc.gold_boundaries.as_deref().ok_or_else(|| Error::Validation {
            id: doc.id.clone(),
            message: "reference document has no gold boundaries".into(),
        })?;
        let hyp_bounds = hyp_by_id.remove(doc.id.as_str()).ok_or_else(|| Error::Validation {
            id: doc.id.clone(),
            message: "document missing from hypothesis file".into(),
        })?;
        per_document.push(evaluate_document(
            &doc.id,
            hyp_bounds,
            gold,
            doc.utterance_count(),
            args.n_t,
            args.window_metrics,
        )?);
    }
    if let Some(extra) = hyp_by_id.keys().next() {
        return Err(Error::Validation {
            id: (*extra).to_owned(),
            message: "hypothesis document not present in reference corpus".into(),
        });
    }

    let report = aggregate_corpus(per_document, AggregateMode::Macro)?;

    if args.json {
        let wrapped = JsonReport {
            n_t: args.n_t,
            report: &report,
        };
        println!("{}", serde_json::to_string_pretty(&wrapped).expect("report serializes"));
        return Ok(());
    }

    // Scores are printed x100 with two decimals, the usual reporting
    // scale for segmentation benchmarks.
    let id_width = report
        .per_document
        .iter()
        .map(|d| d.id.len())
        .chain(["document".len(), "micro".len()])
        .max()
        .unwrap_or(8)
        .max(8);
    let header_extra = if args.window_metrics {
        format!(" {:>9} {:>9}", "Pk", "WinDiff")
    } else {
        String::new()
    };
    println!("{:<id_width$} {:>8} {:>8}{header_extra}", "document", "F1", "BS");
    let fmt_opt = |v: Option<f64>| match v {
        Some(x) => format!(" {:>9.4}", x),
        None => String::new(),
    };
    let print_row = |name: &str, f1: f64, bs: f64, pk: Option<f64>, wd: Option<f64>| {
        let extra = if args.window_metrics {
            format!("{}{}", fmt_opt(pk), fmt_opt(wd))
        } else {
            String::new()
        };
        println!("{name:<id_width$} {:>8.2} {:>8.2}{extra}", f1 * 100.0, bs * 100.0);
    };
    for d in &report.per_document {
        print_row(&d.id, d.f1, d.boundary_similarity, d.pk, d.window_diff);
    }
    for (name, s) in [("micro", &report.micro), ("macro", &report.macro_)] {
        print_row(name, s.f1, s.boundary_similarity, s.pk, s.window_diff);
    }
    Ok(())
}
