//! System combination by MBR selection over edit sets.
//!
//! Three strategies share one selection rule (pick the candidate with the
//! highest mean reward against the reward set) and differ in what they
//! offer for selection:
//!
//! * `Mbr` chooses among the system outputs.
//! * `MbrVote` adds the `N` vote sets `e^(1)..e^(N)`.
//! * `Greedy` also adds one set grown from the intersection by repeatedly
//!   inserting the pool edit that most improves the expected reward.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::edit::{vote_set, Candidate, Edit, EditSet};
use crate::error::{Error, Result};
use crate::rewards::{expected_reward, RewardConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Mbr,
    MbrVote,
    Greedy,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Mbr => "mbr",
            Strategy::MbrVote => "mbr-vote",
            Strategy::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mbr" => Ok(Strategy::Mbr),
            "mbr-vote" => Ok(Strategy::MbrVote),
            "greedy" => Ok(Strategy::Greedy),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

/// Which candidates the expected reward is averaged over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum RewardSetSpec {
    #[default]
    #[serde(rename = "base")]
    Base,
    #[serde(rename = "base+votes")]
    BaseAndVotes,
}

impl RewardSetSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RewardSetSpec::Base => "base",
            RewardSetSpec::BaseAndVotes => "base+votes",
        }
    }
}

impl FromStr for RewardSetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(RewardSetSpec::Base),
            "base+votes" => Ok(RewardSetSpec::BaseAndVotes),
            other => Err(Error::Config(format!("unknown reward set {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombineConfig {
    pub strategy: Strategy,
    pub reward: RewardConfig,
    pub reward_set: RewardSetSpec,
    /// Minimum votes for an edit to enter the greedy pool. Capped at the
    /// number of systems.
    pub pool_votes: usize,
    /// System indices from most to least trusted, used to break vote ties
    /// between conflicting edits. Empty means input order.
    pub priority: Vec<usize>,
}

impl Default for CombineConfig {
    fn default() -> Self {
        CombineConfig {
            strategy: Strategy::Mbr,
            reward: RewardConfig::default(),
            reward_set: RewardSetSpec::Base,
            pool_votes: 2,
            priority: Vec::new(),
        }
    }
}

impl CombineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pool_votes == 0 {
            return Err(Error::Config("pool vote threshold must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    pub label: String,
    pub expected_reward: f64,
}

/// One committed greedy insertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyStep {
    pub edit: Edit,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombineResult {
    pub chosen: Candidate,
    /// Position of `chosen` in `scores`.
    pub chosen_index: usize,
    /// Expected reward of every selection-set member, in tie-break order.
    pub scores: Vec<CandidateScore>,
    pub trace: Vec<GreedyStep>,
}

/// Picks the member of `selection` with the highest mean reward over
/// `reward_set`. Ties go to the earliest candidate.
pub fn mbr_select(selection: &[Candidate], reward_set: &[Candidate], reward: &RewardConfig) -> Result<CombineResult> {
    if reward_set.is_empty() {
        return Err(Error::Empty("reward set"));
    }
    mbr_select_with(selection, |cand| expected_reward(cand, reward_set, reward))
}

/// [`mbr_select`] with an arbitrary objective in place of the expected
/// reward.
pub fn mbr_select_with<F>(selection: &[Candidate], mut objective: F) -> Result<CombineResult>
where
    F: FnMut(&EditSet) -> Result<f64>,
{
    if selection.is_empty() {
        return Err(Error::Empty("selection set"));
    }
    let mut scores = Vec::with_capacity(selection.len());
    let (mut best, mut best_value) = (0, f64::NEG_INFINITY);
    for (i, cand) in selection.iter().enumerate() {
        let value = objective(cand.edit_set())?;
        if value > best_value {
            best = i;
            best_value = value;
        }
        scores.push(CandidateScore {
            label: cand.label().to_owned(),
            expected_reward: value,
        });
    }
    Ok(CombineResult {
        chosen: selection[best].clone(),
        chosen_index: best,
        scores,
        trace: Vec::new(),
    })
}

/// The vote sets `e^(1)..e^(N)` as candidates labelled `vote-m`.
pub fn vote_candidates(systems: &[Candidate], priority: &[usize]) -> Result<Vec<Candidate>> {
    (1..=systems.len())
        .map(|m| Candidate::new(format!("vote-{m}"), vote_set(systems, m, priority)?))
        .collect()
}

/// Grows the intersection of `systems` one edit at a time.
///
/// The pool is the conflict-resolved `e^(pool_votes)` minus the
/// intersection. Each round every admissible pool edit is tried and the
/// best one is kept if it strictly raises the expected reward over
/// `reward_set`; the search stops when no insertion helps.
pub fn greedy_search(
    systems: &[Candidate],
    reward_set: &[Candidate],
    pool_votes: usize,
    priority: &[usize],
    reward: &RewardConfig,
) -> Result<(EditSet, Vec<GreedyStep>)> {
    if systems.is_empty() {
        return Err(Error::Empty("system list"));
    }
    if pool_votes == 0 {
        return Err(Error::Config("pool vote threshold must be at least 1".into()));
    }
    let n = systems.len();
    let mut working = vote_set(systems, n, priority)?;
    let mut pool: Vec<Edit> = vote_set(systems, pool_votes.min(n), priority)?
        .iter()
        .filter(|e| !working.contains(e))
        .cloned()
        .collect();

    let mut current = expected_reward(&working, reward_set, reward)?;
    let mut trace = Vec::new();
    loop {
        let mut best: Option<(usize, EditSet, f64)> = None;
        for (i, e) in pool.iter().enumerate() {
            let Some(grown) = working.with(e.clone()) else {
                continue;
            };
            let value = expected_reward(&grown, reward_set, reward)?;
            if best.as_ref().is_none_or(|(_, _, b)| value > *b) {
                best = Some((i, grown, value));
            }
        }
        match best {
            Some((i, grown, value)) if value > current => {
                let edit = pool.remove(i);
                trace.push(GreedyStep {
                    edit,
                    before: current,
                    after: value,
                });
                working = grown;
                current = value;
            }
            _ => break,
        }
    }
    Ok((working, trace))
}

/// Greedy strategy: selection over systems, vote sets and the greedy set.
pub fn greedy_combine(systems: &[Candidate], config: &CombineConfig) -> Result<CombineResult> {
    config.validate()?;
    let votes = vote_candidates(systems, &config.priority)?;
    let reward_set = reward_set(systems, &votes, config.reward_set);
    let (grown, trace) = greedy_search(systems, &reward_set, config.pool_votes, &config.priority, &config.reward)?;

    let mut selection: Vec<Candidate> = systems.iter().chain(&votes).cloned().collect();
    selection.push(Candidate::new("greedy", grown)?);
    let mut result = mbr_select(&selection, &reward_set, &config.reward)?;
    result.trace = trace;
    Ok(result)
}

fn reward_set(systems: &[Candidate], votes: &[Candidate], spec: RewardSetSpec) -> Vec<Candidate> {
    match spec {
        RewardSetSpec::Base => systems.to_vec(),
        RewardSetSpec::BaseAndVotes => systems.iter().chain(votes).cloned().collect(),
    }
}

/// Combines the system outputs for one sentence with the configured strategy.
pub fn combine_sentence(systems: &[Candidate], config: &CombineConfig) -> Result<CombineResult> {
    config.validate()?;
    if systems.is_empty() {
        return Err(Error::Empty("system list"));
    }
    match config.strategy {
        Strategy::Greedy => greedy_combine(systems, config),
        Strategy::Mbr | Strategy::MbrVote => {
            let needs_votes = config.strategy == Strategy::MbrVote || config.reward_set == RewardSetSpec::BaseAndVotes;
            let votes = if needs_votes {
                vote_candidates(systems, &config.priority)?
            } else {
                Vec::new()
            };
            let reward_set = reward_set(systems, &votes, config.reward_set);
            let selection: Vec<Candidate> = match config.strategy {
                Strategy::MbrVote => systems.iter().chain(&votes).cloned().collect(),
                _ => systems.to_vec(),
            };
            mbr_select(&selection, &reward_set, &config.reward)
        }
    }
}

/// Combines every sentence of `corpus`. `threads == 0` uses all cores.
/// Results are in corpus order whatever the thread count.
pub fn combine_corpus(corpus: &Corpus, config: &CombineConfig, threads: usize) -> Result<Vec<CombineResult>> {
    config.validate()?;
    if let Some(first) = corpus.entries().first() {
        let n = first.systems.len();
        for (index, entry) in corpus.entries().iter().enumerate() {
            if entry.systems.len() != n {
                return Err(Error::Sentence {
                    index,
                    message: format!("has {} hypotheses, expected {n}", entry.systems.len()),
                });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        corpus
            .entries()
            .par_iter()
            .enumerate()
            .map(|(index, entry)| {
                combine_sentence(&entry.systems, config).map_err(|e| Error::Sentence {
                    index,
                    message: e.to_string(),
                })
            })
            .collect()
    })
}
