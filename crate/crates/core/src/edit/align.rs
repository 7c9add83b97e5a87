use super::{Edit, EditSet, Sentence};

/// How alignment operations are grouped into edits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MergeMode {
    /// Every maximal run of adjacent non-match operations becomes one edit.
    #[default]
    All,
    /// One edit per substitution or deletion. Consecutive insertions at the
    /// same position still form a single edit, since separate insertions
    /// there would conflict.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Match,
    Substitute,
    Delete,
    Insert,
}

/// Token-level Levenshtein alignment with unit costs, merging adjacent
/// non-match operations into single edits.
pub fn extract_edits(source: &Sentence, hypothesis: &Sentence) -> EditSet {
    extract_edits_with(source, hypothesis, MergeMode::All)
}

pub fn extract_edits_with(source: &Sentence, hypothesis: &Sentence, mode: MergeMode) -> EditSet {
    let src = source.tokens();
    let hyp = hypothesis.tokens();
    let ops = align(src, hyp);

    let mut edits = Vec::new();
    let (mut i, mut j) = (0, 0);
    // open edit: (source start, hypothesis start)
    let mut open: Option<(usize, usize)> = None;
    let mut flush = |open: &mut Option<(usize, usize)>, i: usize, j: usize| {
        if let Some((si, sj)) = open.take() {
            edits.push(Edit {
                start: si,
                end: i,
                replacement: hyp[sj..j].to_vec(),
            });
        }
    };

    for op in ops {
        match op {
            Op::Match => flush(&mut open, i, j),
            _ => {
                let continues = match mode {
                    MergeMode::All => open.is_some(),
                    MergeMode::None => {
                        op == Op::Insert && matches!(open, Some((si, _)) if si == i)
                    }
                };
                if !continues {
                    flush(&mut open, i, j);
                    open = Some((i, j));
                }
            }
        }
        match op {
            Op::Match | Op::Substitute => {
                i += 1;
                j += 1;
            }
            Op::Delete => i += 1,
            Op::Insert => j += 1,
        }
    }
    flush(&mut open, i, j);

    EditSet::from_valid(src.len(), edits)
}

/// Minimal-cost alignment, returned in left-to-right order.
///
/// Backtrace preference at each cell: match, substitute, delete, insert.
fn align(src: &[String], hyp: &[String]) -> Vec<Op> {
    let (n, m) = (src.len(), hyp.len());
    let width = m + 1;
    let mut dist = vec![0usize; (n + 1) * width];
    for (j, d) in dist[..width].iter_mut().enumerate() {
        *d = j;
    }
    for i in 1..=n {
        dist[i * width] = i;
        for j in 1..=m {
            let diag = dist[(i - 1) * width + j - 1] + usize::from(src[i - 1] != hyp[j - 1]);
            let up = dist[(i - 1) * width + j] + 1;
            let left = dist[i * width + j - 1] + 1;
            dist[i * width + j] = diag.min(up).min(left);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dist[i * width + j];
        let op = if i > 0 && j > 0 && src[i - 1] == hyp[j - 1] && here == dist[(i - 1) * width + j - 1]
        {
            Op::Match
        } else if i > 0 && j > 0 && here == dist[(i - 1) * width + j - 1] + 1 {
            Op::Substitute
        } else if i > 0 && here == dist[(i - 1) * width + j] + 1 {
            Op::Delete
        } else {
            Op::Insert
        };
        match op {
            Op::Match | Op::Substitute => {
                i -= 1;
                j -= 1;
            }
            Op::Delete => i -= 1,
            Op::Insert => j -= 1,
        }
        ops.push(op);
    }
    ops.reverse();
    ops
}

/// Token-level Levenshtein distance.
#[cfg(test)]
pub(crate) fn distance(src: &[String], hyp: &[String]) -> usize {
    align(src, hyp).iter().filter(|op| **op != Op::Match).count()
}
