use std::collections::BTreeMap;

use super::{Edit, EditSet};
use crate::error::{Error, Result};

/// Number of sets containing `edit`.
pub fn count_votes<S: AsRef<EditSet>>(edit: &Edit, sets: &[S]) -> usize {
    sets.iter().filter(|s| s.as_ref().contains(edit)).count()
}

/// Every distinct edit across `sets` with its vote count and the best
/// (lowest) priority rank among the systems proposing it, in edit order.
pub fn tally<S: AsRef<EditSet>>(sets: &[S], priority: &[usize]) -> Result<Vec<(Edit, usize, usize)>> {
    let rank = priority_ranks(sets.len(), priority)?;
    let mut seen: BTreeMap<&Edit, (usize, usize)> = BTreeMap::new();
    for (system, set) in sets.iter().enumerate() {
        for e in set.as_ref() {
            let entry = seen.entry(e).or_insert((0, usize::MAX));
            entry.0 += 1;
            entry.1 = entry.1.min(rank[system]);
        }
    }
    Ok(seen
        .into_iter()
        .map(|(e, (votes, rank))| (e.clone(), votes, rank))
        .collect())
}

/// Edits proposed by at least `min_votes` of the sets, with conflicts
/// resolved in favour of more votes, then the higher-priority system.
///
/// `priority` lists system indices from most to least trusted; an empty
/// slice means input order.
pub fn vote_set<S: AsRef<EditSet>>(sets: &[S], min_votes: usize, priority: &[usize]) -> Result<EditSet> {
    let source_len = shared_source_len(sets)?;
    let mut pool: Vec<(Edit, usize, usize)> = tally(sets, priority)?
        .into_iter()
        .filter(|(_, votes, _)| *votes >= min_votes)
        .collect();
    // stable: equal (votes, rank) keep edit order
    pool.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));

    let mut kept: Vec<Edit> = Vec::new();
    for (e, _, _) in pool {
        if kept.iter().all(|k| !k.conflicts_with(&e)) {
            kept.push(e);
        }
    }
    Ok(EditSet::from_valid(source_len, kept))
}

/// Edits present in every set.
pub fn intersect<S: AsRef<EditSet>>(sets: &[S]) -> Result<EditSet> {
    vote_set(sets, sets.len(), &[])
}

/// All proposed edits, conflict-resolved.
pub fn union_resolved<S: AsRef<EditSet>>(sets: &[S], priority: &[usize]) -> Result<EditSet> {
    vote_set(sets, 1, priority)
}

fn shared_source_len<S: AsRef<EditSet>>(sets: &[S]) -> Result<usize> {
    let first = sets.first().ok_or(Error::Empty("edit set list"))?.as_ref().source_len();
    for s in sets {
        let found = s.as_ref().source_len();
        if found != first {
            return Err(Error::SourceMismatch {
                expected: first,
                found,
            });
        }
    }
    Ok(first)
}

fn priority_ranks(n: usize, priority: &[usize]) -> Result<Vec<usize>> {
    if priority.is_empty() {
        return Ok((0..n).collect());
    }
    let mut rank = vec![usize::MAX; n];
    if priority.len() != n {
        return Err(Error::Config(format!(
            "priority lists {} systems, expected {n}",
            priority.len()
        )));
    }
    for (r, &system) in priority.iter().enumerate() {
        if system >= n || rank[system] != usize::MAX {
            return Err(Error::Config(format!(
                "priority {priority:?} is not a permutation of 0..{n}"
            )));
        }
        rank[system] = r;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit::Sentence;

    fn src() -> Sentence {
        Sentence::tokenize("a b c")
    }

    fn set(edits: Vec<Edit>) -> EditSet {
        EditSet::new(&src(), edits).unwrap()
    }

    fn b() -> Edit {
        Edit::new(1, 2, ["B"])
    }

    fn d() -> Edit {
        Edit::new(3, 3, ["d"])
    }

    fn x() -> Edit {
        Edit::new(1, 2, ["X"])
    }

    fn fixture() -> Vec<EditSet> {
        vec![set(vec![b()]), set(vec![b(), d()]), set(vec![])]
    }

    #[test]
    fn vote_counts() {
        let sets = fixture();
        assert_eq!(count_votes(&b(), &sets), 2);
        assert_eq!(count_votes(&d(), &sets), 1);
        assert_eq!(count_votes::<EditSet>(&b(), &[]), 0);
    }

    #[test]
    fn intersect_and_union() {
        let sets = fixture();
        assert!(intersect(&sets).unwrap().is_empty());
        assert_eq!(union_resolved(&sets, &[]).unwrap(), set(vec![b(), d()]));

        let same = vec![set(vec![b()]), set(vec![b()])];
        assert_eq!(intersect(&same).unwrap(), set(vec![b()]));
        assert_eq!(union_resolved(&same, &[]).unwrap(), set(vec![b()]));
    }

    #[test]
    fn majority_wins_conflicts() {
        let sets = vec![set(vec![b()]), set(vec![x()]), set(vec![b()])];
        assert_eq!(union_resolved(&sets, &[]).unwrap(), set(vec![b()]));
    }

    #[test]
    fn priority_breaks_vote_ties() {
        let sets = vec![set(vec![b()]), set(vec![x()])];
        assert_eq!(union_resolved(&sets, &[]).unwrap(), set(vec![b()]));
        assert_eq!(union_resolved(&sets, &[1, 0]).unwrap(), set(vec![x()]));
    }

    #[test]
    fn bad_inputs() {
        assert!(intersect::<EditSet>(&[]).is_err());
        assert!(union_resolved(&fixture(), &[0, 0, 1]).is_err());
        assert!(union_resolved(&fixture(), &[0, 1]).is_err());
        let mixed = vec![EditSet::empty(3), EditSet::empty(4)];
        assert!(matches!(intersect(&mixed), Err(Error::SourceMismatch { .. })));
    }
}
