//! Sentences, edits and edit sets.
//!
//! An [`EditSet`] is the edit-space view of one system output: the span
//! replacements that turn the shared source sentence into the hypothesis.
//! Sets are kept canonical (sorted, duplicate-free, conflict-free) so that
//! sets produced by different systems can be compared edit by edit.

mod align;
mod vote;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use align::{extract_edits, extract_edits_with, MergeMode};
pub use vote::{count_votes, intersect, tally, union_resolved, vote_set};

/// A whitespace-tokenized sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Splits on runs of whitespace. Never fails.
    pub fn tokenize(text: &str) -> Self {
        Sentence {
            tokens: text.split_whitespace().map(str::to_owned).collect(),
        }
    }

    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        for t in &tokens {
            if !is_valid_token(t) {
                return Err(Error::InvalidToken(t.clone()));
            }
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

pub(crate) fn is_valid_token(t: &str) -> bool {
    !t.is_empty() && !t.chars().any(char::is_whitespace)
}

/// Replace source tokens `start..end` with `replacement`.
///
/// `start == end` is an insertion before token `start`; an empty replacement
/// over a non-empty span is a deletion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: Vec<String>,
}

impl Edit {
    pub fn new<I, S>(start: usize, end: usize, replacement: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Edit {
            start,
            end,
            replacement: replacement.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_insertion(&self) -> bool {
        self.start == self.end
    }

    pub fn is_deletion(&self) -> bool {
        self.start < self.end && self.replacement.is_empty()
    }

    /// Same span and same replacement.
    pub fn same_as(&self, other: &Edit) -> bool {
        self == other
    }

    /// Whether the two edits cannot both be applied to one source.
    ///
    /// Overlapping spans conflict, as do two insertions at one position and
    /// an insertion strictly inside another edit's span. Touching spans do
    /// not conflict, and an edit never conflicts with itself.
    pub fn conflicts_with(&self, other: &Edit) -> bool {
        if self == other {
            return false;
        }
        match (self.is_insertion(), other.is_insertion()) {
            (true, true) => self.start == other.start,
            (true, false) => other.start < self.start && self.start < other.end,
            (false, true) => self.start < other.start && other.start < self.end,
            (false, false) => self.start.max(other.start) < self.end.min(other.end),
        }
    }

    fn check_against(&self, source: &Sentence) -> Result<()> {
        if self.start > self.end || self.end > source.len() {
            return Err(Error::OutOfRange {
                edit: self.clone(),
                len: source.len(),
            });
        }
        if self.replacement.iter().any(|t| !is_valid_token(t)) {
            let bad = self
                .replacement
                .iter()
                .find(|t| !is_valid_token(t))
                .cloned()
                .unwrap_or_default();
            return Err(Error::InvalidToken(bad));
        }
        if self.replacement.as_slice() == &source.tokens()[self.start..self.end] {
            return Err(Error::IdentityEdit(self.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})->[{}]", self.start, self.end, self.replacement.join(" "))
    }
}

/// Free-function form of [`Edit::same_as`].
pub fn edit_equal(a: &Edit, b: &Edit) -> bool {
    a.same_as(b)
}

/// Free-function form of [`Edit::conflicts_with`].
pub fn conflicts(a: &Edit, b: &Edit) -> bool {
    a.conflicts_with(b)
}

/// A canonical, conflict-free collection of edits against one source.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EditSet {
    source_len: usize,
    edits: Vec<Edit>,
}

impl EditSet {
    pub fn empty(source_len: usize) -> Self {
        EditSet {
            source_len,
            edits: Vec::new(),
        }
    }

    /// Validates `edits` against `source` and sorts them.
    ///
    /// Rejects out-of-range spans, identity edits, duplicates and
    /// conflicting pairs; errors name the offending edit(s).
    pub fn new(source: &Sentence, mut edits: Vec<Edit>) -> Result<Self> {
        for e in &edits {
            e.check_against(source)?;
        }
        edits.sort();
        check_canonical(&edits)?;
        Ok(EditSet {
            source_len: source.len(),
            edits,
        })
    }

    /// Builds a set from edits already known to be valid for a source of
    /// `source_len` tokens. Only the ordering is normalized.
    pub(crate) fn from_valid(source_len: usize, mut edits: Vec<Edit>) -> Self {
        edits.sort();
        debug_assert!(check_canonical(&edits).is_ok());
        debug_assert!(edits.iter().all(|e| e.end <= source_len));
        EditSet { source_len, edits }
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn edits(&self) -> &[Edit] {
        &self.edits
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    pub fn contains(&self, edit: &Edit) -> bool {
        self.edits.binary_search(edit).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edit> {
        self.edits.iter()
    }

    /// Whether `edit` could be added without breaking the set invariants.
    pub fn admits(&self, edit: &Edit) -> bool {
        edit.end <= self.source_len && self.edits.iter().all(|e| !e.conflicts_with(edit))
    }

    /// Returns a copy with `edit` added; `None` if it conflicts or is
    /// already present.
    pub fn with(&self, edit: Edit) -> Option<EditSet> {
        if self.contains(&edit) || !self.admits(&edit) {
            return None;
        }
        let pos = self.edits.binary_search(&edit).unwrap_err();
        let mut edits = self.edits.clone();
        edits.insert(pos, edit);
        Some(EditSet {
            source_len: self.source_len,
            edits,
        })
    }

    /// Number of edits present in both sets.
    pub fn overlap(&self, other: &EditSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.edits.len() && j < other.edits.len() {
            match self.edits[i].cmp(&other.edits[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn is_subset_of(&self, other: &EditSet) -> bool {
        self.edits.iter().all(|e| other.contains(e))
    }

    /// Applies the edits to `source`, left to right.
    pub fn apply(&self, source: &Sentence) -> Result<Sentence> {
        if source.len() != self.source_len {
            return Err(Error::SourceMismatch {
                expected: self.source_len,
                found: source.len(),
            });
        }
        let src = source.tokens();
        let mut out = Vec::with_capacity(src.len());
        let mut cursor = 0;
        for e in &self.edits {
            out.extend_from_slice(&src[cursor..e.start]);
            out.extend(e.replacement.iter().cloned());
            cursor = e.end;
        }
        out.extend_from_slice(&src[cursor..]);
        Ok(Sentence { tokens: out })
    }
}

impl<'a> IntoIterator for &'a EditSet {
    type Item = &'a Edit;
    type IntoIter = std::slice::Iter<'a, Edit>;

    fn into_iter(self) -> Self::IntoIter {
        self.edits.iter()
    }
}

impl AsRef<EditSet> for EditSet {
    fn as_ref(&self) -> &EditSet {
        self
    }
}

impl fmt::Display for EditSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.edits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

// Sorted input: any conflict is between edits whose spans start no later
// than the other's end, so a forward scan with early exit suffices.
fn check_canonical(sorted: &[Edit]) -> Result<()> {
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if b.start > a.end {
                break;
            }
            if a == b {
                return Err(Error::DuplicateEdit(a.clone()));
            }
            if a.conflicts_with(b) {
                return Err(Error::Conflict {
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Applies `edits` to `source`.
pub fn apply_edits(source: &Sentence, edits: &EditSet) -> Result<Sentence> {
    edits.apply(source)
}

/// An entry in a selection or reward set: an edit set plus where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    label: String,
    edit_set: EditSet,
}

impl Candidate {
    pub fn new(label: impl Into<String>, edit_set: EditSet) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::Empty("candidate label"));
        }
        Ok(Candidate { label, edit_set })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn edit_set(&self) -> &EditSet {
        &self.edit_set
    }

    pub fn into_edit_set(self) -> EditSet {
        self.edit_set
    }
}

impl AsRef<EditSet> for Candidate {
    fn as_ref(&self) -> &EditSet {
        &self.edit_set
    }
}
