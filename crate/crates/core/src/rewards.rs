//! Edit-set rewards `R(reference, hypothesis)` and their mean over a
//! reward set of equiprobable references.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::edit::EditSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RewardKind {
    Recall,
    Precision,
    /// Standard F-β: `(1+β²)·|∩| / (β²·|ref| + |hyp|)`.
    FBeta { beta: f64 },
    /// F-k with `k` (not `k²`) weighting the reference size:
    /// `(1+k²)·|∩| / (k·|ref| + |hyp|)`. Identical sets score
    /// `(1+k²)/(1+k)`, which exceeds 1 for `k > 1`; values are clamped to 1.
    FPaper { k: f64 },
    Jaccard,
}

impl RewardKind {
    /// Parses the CLI name (`recall`, `precision`, `f`, `f-paper`, `jaccard`)
    /// with `beta` used as β or k where relevant.
    pub fn from_name(name: &str, beta: f64) -> Result<Self> {
        let kind = match name {
            "recall" => RewardKind::Recall,
            "precision" => RewardKind::Precision,
            "f" => RewardKind::FBeta { beta },
            "f-paper" => RewardKind::FPaper { k: beta },
            "jaccard" => RewardKind::Jaccard,
            other => return Err(Error::Config(format!("unknown reward {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RewardKind::Recall => "recall",
            RewardKind::Precision => "precision",
            RewardKind::FBeta { .. } => "f",
            RewardKind::FPaper { .. } => "f-paper",
            RewardKind::Jaccard => "jaccard",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            RewardKind::FBeta { beta: w } | RewardKind::FPaper { k: w } if !(w > 0.0 && w.is_finite()) => {
                Err(Error::Config(format!("{} weight must be positive, got {w}", self.name())))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RewardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewardKind::FBeta { beta } => write!(f, "f(beta={beta})"),
            RewardKind::FPaper { k } => write!(f, "f-paper(k={k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for RewardKind {
    type Err = Error;

    /// Bare names; F variants get a weight of 0.5.
    fn from_str(s: &str) -> Result<Self> {
        RewardKind::from_name(s, 0.5)
    }
}

/// A reward kind plus the values used where a ratio has a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RewardConfig {
    pub kind: RewardKind,
    /// Reward when both sets are empty.
    pub empty_empty_value: f64,
    /// Recall against an empty reference, or precision of an empty
    /// hypothesis, when the other side is non-empty.
    pub empty_denominator_value: f64,
}

impl RewardConfig {
    pub fn new(kind: RewardKind) -> Result<Self> {
        Self::with_conventions(kind, 1.0, 1.0)
    }

    pub fn with_conventions(kind: RewardKind, empty_empty_value: f64, empty_denominator_value: f64) -> Result<Self> {
        kind.validate()?;
        for (name, v) in [
            ("empty_empty_value", empty_empty_value),
            ("empty_denominator_value", empty_denominator_value),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(RewardConfig {
            kind,
            empty_empty_value,
            empty_denominator_value,
        })
    }
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            kind: RewardKind::FBeta { beta: 0.5 },
            empty_empty_value: 1.0,
            empty_denominator_value: 1.0,
        }
    }
}

/// Reward of `hyp` judged against `reference`, in `[0, 1]`.
pub fn reward(reference: &EditSet, hyp: &EditSet, config: &RewardConfig) -> f64 {
    reward_from_counts(reference.overlap(hyp), reference.len(), hyp.len(), config)
}

/// Same as [`reward`], from `|ref ∩ hyp|`, `|ref|` and `|hyp|`.
pub fn reward_from_counts(common: usize, n_ref: usize, n_hyp: usize, config: &RewardConfig) -> f64 {
    if n_ref == 0 && n_hyp == 0 {
        return config.empty_empty_value;
    }
    let (c, r, h) = (common as f64, n_ref as f64, n_hyp as f64);
    match config.kind {
        RewardKind::Recall if n_ref == 0 => config.empty_denominator_value,
        RewardKind::Recall => c / r,
        RewardKind::Precision if n_hyp == 0 => config.empty_denominator_value,
        RewardKind::Precision => c / h,
        RewardKind::FBeta { .. } if common == 0 => 0.0,
        // via P and R so that identical sets give exactly 1
        RewardKind::FBeta { beta } => crate::score::f_beta(c / h, c / r, beta),
        RewardKind::FPaper { k } => ((1.0 + k * k) * c / (k * r + h)).min(1.0),
        RewardKind::Jaccard => c / (r + h - c),
    }
}

/// Mean reward of `hyp` over `reward_set`, each member weighted equally.
pub fn expected_reward<H, C>(hyp: &H, reward_set: &[C], config: &RewardConfig) -> Result<f64>
where
    H: AsRef<EditSet> + ?Sized,
    C: AsRef<EditSet>,
{
    if reward_set.is_empty() {
        return Err(Error::Empty("reward set"));
    }
    let hyp = hyp.as_ref();
    let total: f64 = reward_set
        .iter()
        .map(|r| reward(r.as_ref(), hyp, config))
        .sum();
    Ok(total / reward_set.len() as f64)
}
