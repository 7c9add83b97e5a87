//! Edit-level precision, recall and F-β against reference annotations.

use serde::Serialize;

use crate::edit::EditSet;
use crate::error::{Error, Result};

/// True/false positive and false negative edit counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Counts {
    pub fn between(hyp: &EditSet, reference: &EditSet) -> Self {
        let tp = hyp.overlap(reference);
        Counts {
            tp,
            fp: hyp.len() - tp,
            fn_: reference.len() - tp,
        }
    }

    /// `tp / (tp + fp)`, or 1 when nothing was proposed.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`, or 1 when nothing was expected.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f_beta(&self, beta: f64) -> f64 {
        f_beta(self.precision(), self.recall(), beta)
    }
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, rhs: Counts) -> Counts {
        Counts {
            tp: self.tp + rhs.tp,
            fp: self.fp + rhs.fp,
            fn_: self.fn_ + rhs.fn_,
        }
    }
}

impl std::iter::Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), |a, b| a + b)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// `(1+β²)PR / (β²P + R)`, zero when both are zero.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceScore {
    /// Index of the reference annotation the counts were taken against.
    pub annotator: usize,
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub beta: f64,
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub per_sentence: Option<Vec<SentenceScore>>,
}

impl ScoreReport {
    fn from_counts(counts: Counts, beta: f64) -> Self {
        ScoreReport {
            beta,
            counts,
            precision: counts.precision(),
            recall: counts.recall(),
            f: counts.f_beta(beta),
            per_sentence: None,
        }
    }

    /// `P 0.6667 R 0.6667 F0.5 0.6667`
    pub fn summary_line(&self) -> String {
        format!(
            "P {:.4} R {:.4} F{} {:.4}",
            self.precision, self.recall, self.beta, self.f
        )
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("beta must be positive, got {beta}")))
    }
}

/// Scores one hypothesis against the best-matching reference annotator.
///
/// The annotator with the highest sentence F-β wins; ties go to more true
/// positives, then to the earlier annotator.
pub fn score_sentence(hyp: &EditSet, refs: &[EditSet], beta: f64) -> Result<SentenceScore> {
    check_beta(beta)?;
    let mut best: Option<SentenceScore> = None;
    for (annotator, reference) in refs.iter().enumerate() {
        if reference.source_len() != hyp.source_len() {
            return Err(Error::SourceMismatch {
                expected: hyp.source_len(),
                found: reference.source_len(),
            });
        }
        let counts = Counts::between(hyp, reference);
        let f = counts.f_beta(beta);
        let better = match &best {
            None => true,
            Some(b) => f > b.f || (f == b.f && counts.tp > b.counts.tp),
        };
        if better {
            best = Some(SentenceScore {
                annotator,
                counts,
                precision: counts.precision(),
                recall: counts.recall(),
                f,
            });
        }
    }
    best.ok_or(Error::Empty("reference annotation list"))
}

/// Micro-averaged scores: counts are summed over sentences before P/R/F.
pub fn score_corpus(hyps: &[EditSet], refs: &[Vec<EditSet>], beta: f64) -> Result<ScoreReport> {
    check_beta(beta)?;
    if hyps.len() != refs.len() {
        return Err(Error::CountMismatch {
            what: "reference sentences",
            expected: hyps.len(),
            found: refs.len(),
        });
    }
    let per_sentence = hyps
        .iter()
        .zip(refs)
        .enumerate()
        .map(|(index, (h, r))| {
            score_sentence(h, r, beta).map_err(|e| Error::Sentence {
                index,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = per_sentence.iter().map(|s| s.counts).sum();
    let mut report = ScoreReport::from_counts(total, beta);
    report.per_sentence = Some(per_sentence);
    Ok(report)
}
