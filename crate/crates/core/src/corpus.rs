//! Parallel corpora: one source file plus one hypothesis file per system.

use std::path::{Path, PathBuf};

use crate::edit::{extract_edits, Candidate, EditSet, Sentence};
use crate::error::{Error, Result};
use crate::m2::read_m2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub source: Sentence,
    /// One candidate per system, in system order.
    pub systems: Vec<Candidate>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn from_entries(entries: Vec<CorpusEntry>) -> Self {
        Corpus { entries }
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads a UTF-8 file as lines. `\r\n` endings are accepted.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(str::to_owned).collect())
}

pub fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(read_lines(path)?.iter().map(|l| Sentence::tokenize(l)).collect())
}

/// Whether a hypothesis file is M2 rather than plain text, by extension.
pub fn is_m2_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("m2"))
}

/// Edit sets for one hypothesis file against `sources`.
///
/// Plain text is aligned line by line; M2 files contribute annotator 0 and
/// must carry the same source sentences.
pub fn load_hypothesis(sources: &[Sentence], source_path: &Path, path: &Path) -> Result<Vec<EditSet>> {
    if is_m2_path(path) {
        let entries = read_m2(path)?;
        check_len(source_path, sources.len(), path, entries.len())?;
        entries
            .into_iter()
            .zip(sources)
            .enumerate()
            .map(|(index, (entry, src))| {
                if &entry.source != src {
                    return Err(Error::in_file(
                        path,
                        Error::Sentence {
                            index,
                            message: "M2 source differs from the source file".into(),
                        },
                    ));
                }
                Ok(entry.primary_edits())
            })
            .collect()
    } else {
        let hyps = read_sentences(path)?;
        check_len(source_path, sources.len(), path, hyps.len())?;
        Ok(sources.iter().zip(&hyps).map(|(s, h)| extract_edits(s, h)).collect())
    }
}

fn check_len(expected_path: &Path, expected: usize, path: &Path, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch {
            expected_path: expected_path.to_owned(),
            expected,
            path: path.to_owned(),
            found,
        });
    }
    Ok(())
}

/// Loads a source file and N hypothesis files into a corpus with N
/// candidates per sentence, labelled by file name.
pub fn load_parallel<P: AsRef<Path>>(source_path: &Path, hyp_paths: &[P]) -> Result<Corpus> {
    if hyp_paths.is_empty() {
        return Err(Error::Empty("hypothesis file list"));
    }
    let sources = read_sentences(source_path)?;
    let labels = system_labels(hyp_paths.iter().map(AsRef::as_ref));
    let mut columns = Vec::with_capacity(hyp_paths.len());
    for p in hyp_paths {
        columns.push(load_hypothesis(&sources, source_path, p.as_ref())?);
    }

    let mut entries = Vec::with_capacity(sources.len());
    for (i, source) in sources.into_iter().enumerate() {
        let systems = columns
            .iter()
            .zip(&labels)
            .map(|(col, label)| Candidate::new(label.clone(), col[i].clone()))
            .collect::<Result<Vec<_>>>()?;
        entries.push(CorpusEntry { source, systems });
    }
    Ok(Corpus { entries })
}

// File names, falling back to the full path when names repeat.
fn system_labels<'a>(paths: impl Iterator<Item = &'a Path>) -> Vec<String> {
    let paths: Vec<PathBuf> = paths.map(Path::to_owned).collect();
    let names: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    names
        .iter()
        .zip(&paths)
        .enumerate()
        .map(|(i, (name, path))| {
            let repeated = names.iter().filter(|n| *n == name).count() > 1;
            match (repeated, name.is_empty()) {
                (false, false) => name.clone(),
                _ => format!("{}#{i}", path.display()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit::Edit;
    use std::fs;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn loads_aligned_files() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "a b c\nx y\nq\n");
        let h1 = write(dir.path(), "h1.txt", "a B c\nx y\nq\n");
        let h2 = write(dir.path(), "h2.txt", "a b c\r\nx\r\nq r\r\n");
        let corpus = load_parallel(&src, &[&h1, &h2]).unwrap();
        assert_eq!(corpus.len(), 3);
        for e in corpus.entries() {
            assert_eq!(e.systems.len(), 2);
        }
        let first = &corpus.entries()[0];
        assert_eq!(first.systems[0].edit_set().edits(), [Edit::new(1, 2, ["B"])]);
        assert_eq!(first.systems[0].label(), "h1.txt");
        assert!(first.systems[1].edit_set().is_empty());
    }

    #[test]
    fn length_mismatch_names_files() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "a\nb\nc\n");
        let hyp = write(dir.path(), "short.txt", "a\nb\n");
        let err = load_parallel(&src, &[&hyp]).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::LengthMismatch { expected: 3, found: 2, .. }));
        assert!(msg.contains("src.txt") && msg.contains("short.txt"), "{msg}");
    }

    #[test]
    fn missing_file_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "a\n");
        let err = load_parallel(&src, &[dir.path().join("nope.txt")]).unwrap_err();
        assert!(err.to_string().contains("nope.txt"));
    }

    #[test]
    fn m2_hypotheses() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "a b c\n");
        let m2 = write(dir.path(), "sys.m2", "S a b c\nA 1 2|||UNK|||B|||REQUIRED|||-NONE-|||0\n\n");
        let corpus = load_parallel(&src, &[&m2]).unwrap();
        assert_eq!(corpus.entries()[0].systems[0].edit_set().edits(), [Edit::new(1, 2, ["B"])]);

        let other = write(dir.path(), "other.m2", "S a b d\nA -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n\n");
        assert!(load_parallel(&src, &[&other]).is_err());
    }

    #[test]
    fn duplicate_names_get_paths() {
        let labels = system_labels([Path::new("x/out.txt"), Path::new("y/out.txt"), Path::new("z.txt")].into_iter());
        assert_eq!(labels, ["x/out.txt#0", "y/out.txt#1", "z.txt"]);
    }
}
