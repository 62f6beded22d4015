//! Exact-match scoring of delta predictions.
//!
//! Prediction files are tab-separated text, one record per line:
//!
//! ```text
//! <task_id>\t<example_index>\t<space-separated tokens>[\t<space-separated log-probs>]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. A decoder that could
//! not produce a sequence may write any non-token text (e.g. `<malformed>`);
//! it scores as incorrect. Reading never fails: unreadable lines are counted
//! and skipped.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use log::debug;
use thiserror::Error;

use crate::delta::{apply, delta_from_text, diff, tokenize, to_text, DeltaScript};
use crate::gen::TaskRecord;
use crate::world::World;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub task_id: String,
    pub example_index: usize,
    pub tokens: String,
    pub logprobs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionFile {
    pub records: BTreeMap<(String, usize), PredictionRecord>,
    /// 1-based numbers of lines that could not be read as records.
    pub malformed_lines: Vec<usize>,
    /// 1-based numbers of lines repeating an earlier key; the first wins.
    pub duplicate_lines: Vec<usize>,
}

fn parse_record(line: &str) -> Option<PredictionRecord> {
    let mut fields = line.split('\t');
    let task_id = fields.next()?.to_string();
    let example_index = fields.next()?.parse().ok()?;
    let tokens = fields.next()?.to_string();
    let logprobs = match fields.next() {
        None => None,
        Some(lp) => Some(
            lp.split_whitespace()
                .map(|v| v.parse::<f64>().ok())
                .collect::<Option<Vec<_>>>()?,
        ),
    };
    if task_id.is_empty() || fields.next().is_some() {
        return None;
    }
    Some(PredictionRecord {
        task_id,
        example_index,
        tokens,
        logprobs,
    })
}

pub fn parse_predictions(text: &str) -> PredictionFile {
    let mut file = PredictionFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        match parse_record(raw) {
            Some(rec) => {
                match file.records.entry((rec.task_id.clone(), rec.example_index)) {
                    Entry::Occupied(_) => file.duplicate_lines.push(line),
                    Entry::Vacant(slot) => {
                        slot.insert(rec);
                    }
                }
            }
            None => {
                debug!("prediction line {line} is unreadable");
                file.malformed_lines.push(line);
            }
        }
    }
    file
}

pub fn write_predictions(records: &[PredictionRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let _ = write!(s, "{}\t{}\t{}", r.task_id, r.example_index, r.tokens);
        if let Some(lp) = &r.logprobs {
            let joined: Vec<String> = lp.iter().map(f64::to_string).collect();
            let _ = write!(s, "\t{}", joined.join(" "));
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    Incorrect,
    /// The text is not a well-formed token sequence.
    Malformed,
    /// Well-formed, but the delta cannot be applied to the input.
    Inapplicable,
}

pub fn judge(predicted_tokens: &str, input: &World, reference: &World) -> Verdict {
    let delta = match delta_from_text(predicted_tokens) {
        Ok(d) => d,
        Err(e) => {
            debug!("malformed prediction {predicted_tokens:?}: {e}");
            return Verdict::Malformed;
        }
    };
    match apply(input, &delta) {
        Ok(out) if out == *reference => Verdict::Correct,
        Ok(_) => Verdict::Incorrect,
        Err(e) => {
            debug!("inapplicable prediction {predicted_tokens:?}: {e}");
            Verdict::Inapplicable
        }
    }
}

/// True iff the predicted delta, applied to `input`, reproduces `reference`.
/// Every failure mode scores `false`.
pub fn exact_match(predicted_tokens: &str, input: &World, reference: &World) -> bool {
    judge(predicted_tokens, input, reference) == Verdict::Correct
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskAccuracy {
    pub task_id: String,
    pub correct: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub examples: usize,
    pub correct: usize,
    pub malformed: usize,
    pub inapplicable: usize,
    pub per_task: Vec<TaskAccuracy>,
    /// Predictions whose key matches no reference example.
    pub unmatched: usize,
    pub malformed_lines: usize,
    pub duplicate_lines: usize,
    /// Mean of `-sum(log-probs)` over scored predictions carrying finite log-probs.
    pub mean_neg_logprob: Option<f64>,
}

fn percent(correct: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * correct as f64 / total as f64
    }
}

impl TaskAccuracy {
    pub fn percent(&self) -> f64 {
        percent(self.correct, self.total)
    }
}

impl AccuracyReport {
    /// Example-level exact-match percentage.
    pub fn accuracy_percent(&self) -> f64 {
        percent(self.correct, self.examples)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("task_id,correct,total,accuracy_percent\n");
        for t in &self.per_task {
            let _ = writeln!(s, "{},{},{},{:.4}", t.task_id, t.correct, t.total, t.percent());
        }
        let _ = writeln!(s, "ALL,{},{},{:.4}", self.correct, self.examples, self.accuracy_percent());
        s
    }

    pub fn to_table(&self) -> String {
        let width = self.per_task.iter().map(|t| t.task_id.len()).max().unwrap_or(4).max(7);
        let mut s = format!("{:<width$}  {:>7}  {:>7}  {:>9}\n", "task", "correct", "total", "accuracy");
        for t in &self.per_task {
            let _ = writeln!(s, "{:<width$}  {:>7}  {:>7}  {:>8.2}%", t.task_id, t.correct, t.total, t.percent());
        }
        let _ = writeln!(
            s,
            "{:<width$}  {:>7}  {:>7}  {:>8.2}%",
            "overall",
            self.correct,
            self.examples,
            self.accuracy_percent()
        );
        let _ = writeln!(
            s,
            "malformed predictions: {}  inapplicable: {}  unmatched: {}  unreadable lines: {}  duplicate lines: {}",
            self.malformed, self.inapplicable, self.unmatched, self.malformed_lines, self.duplicate_lines
        );
        if let Some(nll) = self.mean_neg_logprob {
            let _ = writeln!(s, "mean negative log-probability: {nll:.4}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{} reference examples have no prediction (first: {:?})", .0.len(), .0.first())]
    MissingPrediction(Vec<(String, usize)>),
}

/// Scores every example of `refs` against `preds`.
pub fn score_dataset(preds: &PredictionFile, refs: &[TaskRecord]) -> Result<AccuracyReport, EvalError> {
    let mut missing = Vec::new();
    let mut report = AccuracyReport {
        examples: 0,
        correct: 0,
        malformed: 0,
        inapplicable: 0,
        per_task: Vec::with_capacity(refs.len()),
        unmatched: 0,
        malformed_lines: preds.malformed_lines.len(),
        duplicate_lines: preds.duplicate_lines.len(),
        mean_neg_logprob: None,
    };
    let mut nll_sum = 0.0;
    let mut nll_count = 0usize;
    let mut matched = 0usize;
    for task in refs {
        let mut acc = TaskAccuracy {
            task_id: task.task_id.clone(),
            correct: 0,
            total: task.examples.len(),
        };
        for (i, ex) in task.examples.iter().enumerate() {
            let Some(rec) = preds.records.get(&(task.task_id.clone(), i)) else {
                missing.push((task.task_id.clone(), i));
                continue;
            };
            matched += 1;
            match judge(&rec.tokens, &ex.input, &ex.output) {
                Verdict::Correct => acc.correct += 1,
                Verdict::Incorrect => {}
                Verdict::Malformed => report.malformed += 1,
                Verdict::Inapplicable => report.inapplicable += 1,
            }
            if let Some(lp) = &rec.logprobs {
                let total: f64 = lp.iter().sum();
                if total.is_finite() {
                    nll_sum -= total;
                    nll_count += 1;
                }
            }
        }
        report.examples += acc.total;
        report.correct += acc.correct;
        report.per_task.push(acc);
    }
    if !missing.is_empty() {
        return Err(EvalError::MissingPrediction(missing));
    }
    report.unmatched = preds.records.len() - matched;
    report.mean_neg_logprob = (nll_count > 0).then(|| nll_sum / nll_count as f64);
    Ok(report)
}

fn predictions_with(tasks: &[TaskRecord], delta: impl Fn(&World, &World) -> DeltaScript) -> Vec<PredictionRecord> {
    tasks
        .iter()
        .flat_map(|t| {
            t.examples.iter().enumerate().map(|(i, ex)| PredictionRecord {
                task_id: t.task_id.clone(),
                example_index: i,
                tokens: to_text(&tokenize(&delta(&ex.input, &ex.output))),
                logprobs: None,
            })
        })
        .collect()
}

/// The reference delta for every example.
pub fn oracle_predictions(tasks: &[TaskRecord]) -> Vec<PredictionRecord> {
    predictions_with(tasks, |i, o| diff(i, o).expect("dataset examples share a frame"))
}

/// "Nothing changes" for every example.
pub fn identity_predictions(tasks: &[TaskRecord]) -> Vec<PredictionRecord> {
    predictions_with(tasks, |i, _| DeltaScript::identity(i.dir()))
}
