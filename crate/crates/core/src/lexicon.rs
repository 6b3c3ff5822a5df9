//! Token-per-row training files, grouped training sets and frequency
//! lexicons.
//!
//! A token-per-row file holds one `form<TAB>tag` pair per line with a blank
//! line after every sentence. A lexicon file holds `form<TAB>tag<TAB>count`
//! lines sorted by form, then by descending count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::conllu::{self, Corpus, EMPTY};
use crate::io::write_atomic;

/// Tags seen with at least this many distinct forms are open-class.
pub const DEFAULT_OPEN_CLASS_MIN_FORMS: usize = 10;

/// Training-set sizes (number of files) used by the scaling experiment.
pub const DEFAULT_SIZES: [usize; 6] = [10, 30, 100, 200, 300, 500];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{doc_id}/{sent_id} token {token_id} ({form:?}) has no XPOS tag")]
    MissingTag {
        doc_id: String,
        sent_id: String,
        token_id: usize,
        form: String,
    },

    #[error("line {line}: {message}")]
    MalformedRow { line: usize, message: String },

    #[error("training data is empty")]
    EmptyTraining,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LexiconError + '_ {
    move |source| LexiconError::Io { path: path.to_owned(), source }
}

/// Rows of (form, tag) with sentence boundaries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrainingFile {
    pub rows: Vec<(String, String)>,
    /// Exclusive end index of each sentence in `rows`, ascending.
    pub sentence_breaks: Vec<usize>,
}

impl TrainingFile {
    pub fn from_sentences<I, S>(sentences: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = (String, String)>,
    {
        let mut tf = TrainingFile::default();
        for s in sentences {
            tf.push_sentence(s);
        }
        tf
    }

    pub fn push_sentence<S: IntoIterator<Item = (String, String)>>(&mut self, rows: S) {
        let before = self.rows.len();
        self.rows.extend(rows);
        if self.rows.len() > before {
            self.sentence_breaks.push(self.rows.len());
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &[(String, String)]> {
        let mut start = 0;
        self.sentence_breaks.iter().map(move |&end| {
            let s = &self.rows[start..end];
            start = end;
            s
        })
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|(f, _)| f.as_str())
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|(_, t)| t.as_str())
    }

    /// Parses token-per-row text. Every non-blank line must be
    /// `form<TAB>tag` with both fields non-empty.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut tf = TrainingFile::default();
        let mut current = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() {
                tf.push_sentence(current.drain(..));
                continue;
            }
            let mut cols = line.split('\t');
            let (form, tag) = match (cols.next(), cols.next(), cols.next()) {
                (Some(f), Some(t), None) if !f.is_empty() && !t.is_empty() => (f, t),
                _ => {
                    return Err(LexiconError::MalformedRow {
                        line: idx + 1,
                        message: "expected form<TAB>tag".to_owned(),
                    })
                }
            };
            current.push((form.to_owned(), tag.to_owned()));
        }
        tf.push_sentence(current);
        Ok(tf)
    }

    pub fn read(path: &Path) -> Result<Self, LexiconError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text).map_err(|e| match e {
            LexiconError::MalformedRow { line, message } => LexiconError::MalformedRow {
                line,
                message: format!("{}: {}", path.display(), message),
            },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in self.sentences() {
            for (form, tag) in s {
                let _ = writeln!(out, "{}\t{}", form, tag);
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), LexiconError> {
        write_atomic(path, self.to_text().as_bytes()).map_err(io_err(path))
    }
}

/// Reads pre-tokenized input: one token per line (only the first
/// tab-separated column is used), blank line between sentences.
pub fn read_token_sentences(text: &str) -> Vec<Vec<String>> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for raw in text.lines() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        let form = line.split('\t').next().unwrap_or(line);
        current.push(form.to_owned());
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// Converts one document of a reannotated corpus into training rows.
pub fn document_rows(doc: &conllu::Document) -> Result<TrainingFile, LexiconError> {
    let mut tf = TrainingFile::default();
    for s in &doc.sentences {
        let mut rows = Vec::with_capacity(s.len());
        for t in &s.tokens {
            if t.xpos.is_empty() || t.xpos == EMPTY {
                return Err(LexiconError::MissingTag {
                    doc_id: doc.doc_id.clone(),
                    sent_id: s.sent_id.clone(),
                    token_id: t.id,
                    form: t.form.clone(),
                });
            }
            rows.push((t.form.clone(), t.xpos.clone()));
        }
        tf.push_sentence(rows);
    }
    Ok(tf)
}

/// Writes one `<doc_id>.txt` token-per-row file per document. Returns the
/// number of files written.
pub fn export_token_per_row(corpus: &Corpus, out_dir: &Path) -> Result<usize, LexiconError> {
    // Validate everything before touching the output directory.
    let files = corpus
        .documents
        .iter()
        .map(|d| document_rows(d).map(|tf| (d.doc_id.as_str(), tf)))
        .collect::<Result<Vec<_>, _>>()?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    for (doc_id, tf) in &files {
        tf.write(&out_dir.join(format!("{}.txt", doc_id)))?;
    }
    Ok(files.len())
}

/// Path of the grouped training file for `n` documents.
pub fn grouped_training_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("{}.txt", n))
}

/// Path of the lexicon built from the grouped training file for `n`.
pub fn grouped_lexicon_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("lexicon_{}.txt", n))
}

/// Concatenates the first `n` token-per-row files of `token_dir` (in
/// lexicographic file name order) into `out_path`. Returns the number of
/// token rows written.
pub fn concat_first_n(token_dir: &Path, n: usize, out_path: &Path) -> Result<usize, LexiconError> {
    if n == 0 {
        return Err(LexiconError::InvalidArgument("n must be at least 1".to_owned()));
    }
    let files = conllu::list_files(token_dir, "*.txt").map_err(|e| match e {
        conllu::ConlluError::Io { path, source } => LexiconError::Io { path, source },
        other => LexiconError::InvalidArgument(other.to_string()),
    })?;
    let mut out = String::new();
    let mut rows = 0;
    for path in files.iter().take(n) {
        let content = fs::read_to_string(path).map_err(io_err(path))?;
        rows += content.lines().filter(|l| !l.trim_end_matches('\r').is_empty()).count();
        out.push_str(&content);
        // keep a sentence boundary between files
        if !content.is_empty() && !content.ends_with("\n\n") {
            out.push_str(if content.ends_with('\n') { "\n" } else { "\n\n" });
        }
    }
    write_atomic(out_path, out.as_bytes()).map_err(io_err(out_path))?;
    Ok(rows)
}

/// How open-class tags are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenClass {
    /// Tags seen with at least `min_forms` distinct forms.
    Infer { min_forms: usize },
    Explicit(Vec<String>),
}

impl Default for OpenClass {
    fn default() -> Self {
        OpenClass::Infer { min_forms: DEFAULT_OPEN_CLASS_MIN_FORMS }
    }
}

impl OpenClass {
    /// Reads an open-class file: one tag per line, blank lines ignored.
    pub fn read(path: &Path) -> Result<Self, LexiconError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(OpenClass::Explicit(
            text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_owned).collect(),
        ))
    }
}

/// Form → tag frequency table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    /// Per form, (tag, count) sorted by descending count then tag.
    pub entries: BTreeMap<String, Vec<(String, usize)>>,
    pub open_class_tags: Vec<String>,
}

impl Lexicon {
    fn from_counts(counts: BTreeMap<String, BTreeMap<String, usize>>, open_class: &OpenClass) -> Self {
        let entries: BTreeMap<String, Vec<(String, usize)>> = counts
            .into_iter()
            .map(|(form, tags)| {
                let mut tags: Vec<(String, usize)> = tags.into_iter().collect();
                tags.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                (form, tags)
            })
            .collect();
        let open_class_tags = match open_class {
            OpenClass::Explicit(tags) => {
                let set: BTreeSet<&String> = tags.iter().collect();
                set.into_iter().cloned().collect()
            }
            OpenClass::Infer { min_forms } => {
                let mut forms_per_tag: BTreeMap<&str, usize> = BTreeMap::new();
                for tags in entries.values() {
                    for (tag, _) in tags {
                        *forms_per_tag.entry(tag).or_insert(0) += 1;
                    }
                }
                forms_per_tag
                    .into_iter()
                    .filter(|(_, n)| n >= min_forms)
                    .map(|(t, _)| t.to_owned())
                    .collect()
            }
        };
        Lexicon { entries, open_class_tags }
    }

    pub fn tags_of(&self, form: &str) -> Option<&[(String, usize)]> {
        self.entries.get(form).map(Vec::as_slice)
    }

    /// Sum of all counts; equals the number of training rows it was built
    /// from.
    pub fn total_count(&self) -> usize {
        self.entries.values().flatten().map(|(_, c)| c).sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (form, tags) in &self.entries {
            for (tag, count) in tags {
                let _ = writeln!(out, "{}\t{}\t{}", form, tag, count);
            }
        }
        out
    }

    pub fn parse(text: &str, open_class: &OpenClass) -> Result<Self, LexiconError> {
        let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let malformed = |message: &str| LexiconError::MalformedRow { line: idx + 1, message: message.to_owned() };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(malformed("expected form<TAB>tag<TAB>count"));
            }
            let count: usize = cols[2].parse().map_err(|_| malformed("count is not a positive integer"))?;
            if count == 0 {
                return Err(malformed("count is not a positive integer"));
            }
            let slot = counts.entry(cols[0].to_owned()).or_default();
            if slot.insert(cols[1].to_owned(), count).is_some() {
                return Err(malformed("duplicate form/tag pair"));
            }
        }
        Ok(Self::from_counts(counts, open_class))
    }

    pub fn read(path: &Path, open_class: &OpenClass) -> Result<Self, LexiconError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text, open_class)
    }

    pub fn write(&self, path: &Path) -> Result<(), LexiconError> {
        write_atomic(path, self.to_text().as_bytes()).map_err(io_err(path))
    }
}

/// Builds a lexicon with inferred open-class tags.
pub fn build_lexicon(training: &TrainingFile) -> Result<Lexicon, LexiconError> {
    build_lexicon_with(training, &OpenClass::default())
}

pub fn build_lexicon_with(training: &TrainingFile, open_class: &OpenClass) -> Result<Lexicon, LexiconError> {
    if training.is_empty() {
        return Err(LexiconError::EmptyTraining);
    }
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for (form, tag) in &training.rows {
        *counts.entry(form.clone()).or_default().entry(tag.clone()).or_insert(0) += 1;
    }
    Ok(Lexicon::from_counts(counts, open_class))
}
