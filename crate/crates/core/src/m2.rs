//! Reading and writing the M2 annotation format.
//!
//! ```text
//! S a b c
//! A 1 2|||R:VERB|||B|||REQUIRED|||-NONE-|||0
//! A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||1
//!
//! ```
//!
//! `S` opens an entry, each `A` line adds one edit for one annotator, and a
//! blank line closes the entry. A `-1 -1` span marks an annotator who made
//! no edits.

use std::fmt::Write as _;
use std::path::Path;

use crate::edit::{Edit, EditSet, Sentence};
use crate::error::{Error, Result};

pub const DEFAULT_TYPE: &str = "UNK";
const NOOP_TYPE: &str = "noop";
const NONE: &str = "-NONE-";
const REQUIRED: &str = "REQUIRED";

/// The edits one annotator made to a sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub annotator: u32,
    pub edits: EditSet,
    /// Error type of each edit, parallel to `edits.edits()`.
    pub types: Vec<String>,
}

impl Annotation {
    /// An annotation whose edits all carry the default type.
    pub fn untyped(annotator: u32, edits: EditSet) -> Self {
        let types = vec![DEFAULT_TYPE.to_owned(); edits.len()];
        Annotation {
            annotator,
            edits,
            types,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Entry {
    pub source: Sentence,
    pub annotations: Vec<Annotation>,
}

impl M2Entry {
    /// A single-annotator entry (annotator 0, untyped edits).
    pub fn single(source: Sentence, edits: EditSet) -> Self {
        M2Entry {
            source,
            annotations: vec![Annotation::untyped(0, edits)],
        }
    }

    pub fn annotator(&self, id: u32) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.annotator == id)
    }

    /// Annotator 0's edits, or the empty set if annotator 0 is absent.
    pub fn primary_edits(&self) -> EditSet {
        self.annotator(0)
            .map(|a| a.edits.clone())
            .unwrap_or_else(|| EditSet::empty(self.source.len()))
    }

    /// Every annotator's edit set, in file order.
    pub fn reference_sets(&self) -> Vec<EditSet> {
        self.annotations.iter().map(|a| a.edits.clone()).collect()
    }
}

struct Pending {
    line: usize,
    source: Sentence,
    // annotator -> (edit, type), in first-appearance order
    groups: Vec<(u32, Vec<(Edit, String)>)>,
}

impl Pending {
    fn group(&mut self, annotator: u32) -> &mut Vec<(Edit, String)> {
        let pos = match self.groups.iter().position(|(id, _)| *id == annotator) {
            Some(pos) => pos,
            None => {
                self.groups.push((annotator, Vec::new()));
                self.groups.len() - 1
            }
        };
        &mut self.groups[pos].1
    }

    fn finish(self) -> Result<M2Entry> {
        let Pending { line, source, groups } = self;
        let mut annotations = Vec::with_capacity(groups.len());
        for (annotator, mut pairs) in groups {
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
            let (edits, types): (Vec<Edit>, Vec<String>) = pairs.into_iter().unzip();
            let edits = EditSet::new(&source, edits).map_err(|e| Error::Validation {
                line,
                source: Box::new(e),
            })?;
            annotations.push(Annotation {
                annotator,
                edits,
                types,
            });
        }
        Ok(M2Entry { source, annotations })
    }
}

/// Parses M2 text. Tolerates CRLF line endings and a missing final blank line.
pub fn parse_m2(text: &str) -> Result<Vec<M2Entry>> {
    let mut entries = Vec::new();
    let mut pending: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if let Some(p) = pending.take() {
                entries.push(p.finish()?);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('S').filter(|r| r.is_empty() || r.starts_with(' ')) {
            if let Some(p) = pending.take() {
                entries.push(p.finish()?);
            }
            pending = Some(Pending {
                line: line_no,
                source: Sentence::tokenize(rest),
                groups: Vec::new(),
            });
        } else if let Some(rest) = line.strip_prefix("A ") {
            let p = pending.as_mut().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "annotation before any S line".into(),
            })?;
            parse_annotation(rest, line_no, p)?;
        } else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected an S or A line, found {line:?}"),
            });
        }
    }
    if let Some(p) = pending.take() {
        entries.push(p.finish()?);
    }
    Ok(entries)
}

fn parse_annotation(rest: &str, line: usize, pending: &mut Pending) -> Result<()> {
    let parse_err = |message: String| Error::Parse { line, message };
    let fields: Vec<&str> = rest.split("|||").collect();
    if fields.len() != 6 {
        return Err(parse_err(format!("expected 6 |||-separated fields, found {}", fields.len())));
    }
    let mut span = fields[0].split_whitespace();
    let (start, end) = match (span.next(), span.next(), span.next()) {
        (Some(s), Some(e), None) => (
            s.parse::<i64>().map_err(|_| parse_err(format!("bad span start {s:?}")))?,
            e.parse::<i64>().map_err(|_| parse_err(format!("bad span end {e:?}")))?,
        ),
        _ => return Err(parse_err(format!("bad span {:?}", fields[0]))),
    };
    let annotator = fields[5]
        .trim()
        .parse::<u32>()
        .map_err(|_| parse_err(format!("bad annotator id {:?}", fields[5])))?;

    if start == -1 && end == -1 {
        pending.group(annotator);
        return Ok(());
    }
    if start < 0 || end < 0 {
        return Err(parse_err(format!("negative span {start} {end}")));
    }
    let replacement: Vec<String> = if fields[2].trim() == NONE {
        Vec::new()
    } else {
        fields[2].split_whitespace().map(str::to_owned).collect()
    };
    let edit = Edit {
        start: start as usize,
        end: end as usize,
        replacement,
    };
    // per-edit checks here so the error points at this line
    EditSet::new(&pending.source, vec![edit.clone()]).map_err(|e| Error::Validation {
        line,
        source: Box::new(e),
    })?;
    pending.group(annotator).push((edit, fields[1].to_owned()));
    Ok(())
}

/// Serializes entries. A deletion is written with an empty replacement
/// field and an annotator without edits gets a `noop` line.
pub fn emit_m2(entries: &[M2Entry]) -> String {
    let mut out = String::new();
    for entry in entries {
        if entry.source.is_empty() {
            out.push_str("S\n");
        } else {
            let _ = writeln!(out, "S {}", entry.source);
        }
        for ann in &entry.annotations {
            if ann.edits.is_empty() {
                let _ = writeln!(
                    out,
                    "A -1 -1|||{NOOP_TYPE}|||{NONE}|||{REQUIRED}|||{NONE}|||{}",
                    ann.annotator
                );
                continue;
            }
            for (i, e) in ann.edits.iter().enumerate() {
                let ty = ann.types.get(i).map(String::as_str).unwrap_or(DEFAULT_TYPE);
                let _ = writeln!(
                    out,
                    "A {} {}|||{ty}|||{}|||{REQUIRED}|||{NONE}|||{}",
                    e.start,
                    e.end,
                    e.replacement.join(" "),
                    ann.annotator
                );
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_m2(path: &Path) -> Result<Vec<M2Entry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_m2(&text).map_err(|e| Error::in_file(path, e))
}
