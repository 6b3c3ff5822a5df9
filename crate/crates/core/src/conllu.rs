//! CoNLL-U reading and writing.
//!
//! Only the basic dependency layer is modelled. Multiword-token ranges
//! (`3-4`) and empty nodes (`3.1`) are dropped while parsing and reported
//! through [`ParseOutput::warnings`]. The `DEPS` and `MISC` columns are kept
//! as opaque strings.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Placeholder used by CoNLL-U for an empty column.
pub const EMPTY: &str = "_";

#[derive(Debug, Error)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    MalformedRow { line: usize, message: String },

    #[error("sentence ending at line {line}: {message}")]
    InvalidSentence { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<ConlluError>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A basic-layer CoNLL-U token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: BTreeMap<String, String>,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// Creates a token with every optional column set to `_`.
    pub fn new(id: usize, form: impl Into<String>) -> Self {
        Token {
            id,
            form: form.into(),
            lemma: EMPTY.to_owned(),
            upos: EMPTY.to_owned(),
            xpos: EMPTY.to_owned(),
            feats: BTreeMap::new(),
            head: 0,
            deprel: EMPTY.to_owned(),
            deps: EMPTY.to_owned(),
            misc: EMPTY.to_owned(),
        }
    }

    /// Case-insensitive comparison of the surface form.
    pub fn form_is(&self, lowercase: &str) -> bool {
        self.form.to_lowercase() == lowercase
    }

    /// Renders the FEATS column (`Key=Value|Key=Value`, or `_`).
    pub fn feats_column(&self) -> String {
        encode_feats(&self.feats)
    }

    fn write_row(&self, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.form,
            self.lemma,
            self.upos,
            self.xpos,
            self.feats_column(),
            self.head,
            self.deprel,
            self.deps,
            self.misc
        );
    }
}

pub fn encode_feats(feats: &BTreeMap<String, String>) -> String {
    if feats.is_empty() {
        return EMPTY.to_owned();
    }
    feats
        .iter()
        .map(|(k, v)| format!("{}={}", k, v))
        .collect::<Vec<_>>()
        .join("|")
}

/// Parses a FEATS column. Returns `None` when a feature has no `=`.
pub fn decode_feats(column: &str) -> Option<BTreeMap<String, String>> {
    let mut feats = BTreeMap::new();
    if column == EMPTY {
        return Some(feats);
    }
    for pair in column.split('|') {
        let (k, v) = pair.split_once('=')?;
        if k.is_empty() {
            return None;
        }
        feats.insert(k.to_owned(), v.to_owned());
    }
    Some(feats)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub sent_id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    /// Raw comment lines, including the leading `#`.
    pub comments: Vec<String>,
}

impl Sentence {
    /// Builds a sentence from tokens, synthesizing `# sent_id` and `# text`
    /// comments.
    pub fn from_tokens(sent_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        let sent_id = sent_id.into();
        let text = join_forms(&tokens);
        Sentence {
            comments: vec![
                format!("# sent_id = {}", sent_id),
                format!("# text = {}", text),
            ],
            sent_id,
            text,
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Looks up a token by its 1-based id.
    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// The head token of `token`, or `None` for the root or a dangling head.
    pub fn head_of(&self, token: &Token) -> Option<&Token> {
        if token.head == 0 {
            None
        } else {
            self.token(token.head)
        }
    }

    pub fn dependents(&self, id: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == id)
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    /// Checks the structural invariants. Hard violations are returned as an
    /// error, root-count problems as warnings.
    pub fn validate(&self) -> Result<Vec<String>, String> {
        let n = self.tokens.len();
        for (i, t) in self.tokens.iter().enumerate() {
            if t.id != i + 1 {
                return Err(format!("token ids must be 1..{}, found {} at position {}", n, t.id, i + 1));
            }
            if t.form.is_empty() {
                return Err(format!("token {} has an empty form", t.id));
            }
            if t.head == t.id {
                return Err(format!("token {} is its own head", t.id));
            }
            if t.head > n {
                return Err(format!("token {} has head {} beyond sentence length {}", t.id, t.head, n));
            }
        }
        let roots = self.tokens.iter().filter(|t| t.head == 0).count();
        let mut warnings = Vec::new();
        if roots != 1 && n > 0 {
            warnings.push(format!("sentence {} has {} roots", self.sent_id, roots));
        }
        Ok(warnings)
    }

    fn write(&self, out: &mut String) {
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        for t in &self.tokens {
            t.write_row(out);
        }
        out.push('\n');
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

fn join_forms(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" ")
}

/// Sentences plus the non-fatal problems found while reading them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseOutput {
    pub sentences: Vec<Sentence>,
    pub warnings: Vec<String>,
}

/// Parses CoNLL-U text. `doc_id` is used to synthesize sentence ids for
/// sentences without a `# sent_id` comment (`doc_id:index`, 1-based).
pub fn parse_conllu(text: &str, doc_id: &str) -> Result<ParseOutput, ConlluError> {
    let mut out = ParseOutput::default();
    let mut comments: Vec<String> = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        last_line = line_no;

        if line.trim().is_empty() {
            if !tokens.is_empty() || !comments.is_empty() {
                finish_sentence(&mut out, doc_id, &mut comments, &mut tokens, line_no)?;
            }
            continue;
        }
        if line.starts_with('#') {
            if !tokens.is_empty() {
                return Err(ConlluError::MalformedRow {
                    line: line_no,
                    message: "comment inside a sentence".to_owned(),
                });
            }
            comments.push(line.to_owned());
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::MalformedRow {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            out.warnings.push(format!("line {}: skipped multiword/empty node {}", line_no, cols[0]));
            continue;
        }
        let malformed = |message: String| ConlluError::MalformedRow { line: line_no, message };
        let id: usize = cols[0]
            .parse()
            .map_err(|_| malformed(format!("non-numeric id {:?}", cols[0])))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| malformed(format!("non-numeric head {:?}", cols[6])))?;
        let feats = decode_feats(cols[5]).ok_or_else(|| malformed(format!("bad FEATS column {:?}", cols[5])))?;
        if cols[1].is_empty() {
            return Err(malformed("empty form".to_owned()));
        }
        tokens.push(Token {
            id,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            feats,
            head,
            deprel: cols[7].to_owned(),
            deps: cols[8].to_owned(),
            misc: cols[9].to_owned(),
        });
    }
    if !tokens.is_empty() || !comments.is_empty() {
        finish_sentence(&mut out, doc_id, &mut comments, &mut tokens, last_line)?;
    }
    Ok(out)
}

fn finish_sentence(
    out: &mut ParseOutput,
    doc_id: &str,
    comments: &mut Vec<String>,
    tokens: &mut Vec<Token>,
    line: usize,
) -> Result<(), ConlluError> {
    let comments = std::mem::take(comments);
    let tokens = std::mem::take(tokens);
    if tokens.is_empty() {
        // Comment block without tokens, e.g. `# newdoc` headers. Nothing to
        // attach it to in this model.
        out.warnings.push(format!("line {}: comment block without tokens dropped", line));
        return Ok(());
    }
    let sent_id = comment_value(&comments, "sent_id")
        .unwrap_or_else(|| format!("{}:{}", doc_id, out.sentences.len() + 1));
    let text = comment_value(&comments, "text").unwrap_or_else(|| join_forms(&tokens));
    let sentence = Sentence { sent_id, text, tokens, comments };
    let warnings = sentence
        .validate()
        .map_err(|message| ConlluError::InvalidSentence { line, message })?;
    out.warnings.extend(warnings);
    out.sentences.push(sentence);
    Ok(())
}

fn comment_value(comments: &[String], key: &str) -> Option<String> {
    comments.iter().find_map(|c| {
        let rest = c.strip_prefix('#')?.trim_start();
        let rest = rest.strip_prefix(key)?.trim_start();
        let value = rest.strip_prefix('=')?;
        Some(value.trim().to_owned())
    })
}

/// Serializes sentences: comments, token rows, then one blank line per
/// sentence. Output always uses LF line endings.
pub fn serialize_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        s.write(&mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
}

/// An ordered collection of documents. Document order is the ingestion
/// order and drives "first n files" selection downstream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Corpus { documents }
    }

    pub fn source_order(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.doc_id.as_str()).collect()
    }

    pub fn sentences(&self) -> impl Iterator<Item = (&str, &Sentence)> {
        self.documents
            .iter()
            .flat_map(|d| d.sentences.iter().map(move |s| (d.doc_id.as_str(), s)))
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(|(_, s)| s.len()).sum()
    }
}

/// Lists regular files in `dir` whose names match `pattern`, sorted
/// lexicographically by file name.
///
/// `pattern` supports a single `*` wildcard (`*.conllu`, `doc*`, `*`).
pub fn list_files(dir: &Path, pattern: &str) -> Result<Vec<PathBuf>, ConlluError> {
    let io_err = |source| ConlluError::Io { path: dir.to_owned(), source };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        if wildcard_match(pattern, &name) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub(crate) fn wildcard_match(pattern: &str, name: &str) -> bool {
    match pattern.split_once('*') {
        None => pattern == name,
        Some((prefix, suffix)) => {
            name.len() >= prefix.len() + suffix.len() && name.starts_with(prefix) && name.ends_with(suffix)
        }
    }
}

/// File name without its final extension.
pub fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Loads every file in `dir` matching `pattern`, in lexicographic file name
/// order. A file that fails to parse aborts the load.
pub fn load_corpus(dir: &Path, pattern: &str) -> Result<Corpus, ConlluError> {
    let mut documents = Vec::new();
    for path in list_files(dir, pattern)? {
        let text = fs::read_to_string(&path).map_err(|source| ConlluError::Io { path: path.clone(), source })?;
        let doc_id = file_stem(&path);
        let parsed = parse_conllu(&text, &doc_id).map_err(|e| ConlluError::File {
            path: path.clone(),
            source: Box::new(e),
        })?;
        for w in &parsed.warnings {
            log::warn!("{}: {}", path.display(), w);
        }
        documents.push(Document { doc_id, sentences: parsed.sentences });
    }
    Ok(Corpus { documents })
}

/// Writes each document as `<doc_id>.conllu` in `dir`.
pub fn write_corpus(corpus: &Corpus, dir: &Path) -> Result<(), ConlluError> {
    fs::create_dir_all(dir).map_err(|source| ConlluError::Io { path: dir.to_owned(), source })?;
    for doc in &corpus.documents {
        let path = dir.join(format!("{}.conllu", doc.doc_id));
        crate::io::write_atomic(&path, serialize_conllu(&doc.sentences).as_bytes())
            .map_err(|source| ConlluError::Io { path, source })?;
    }
    Ok(())
}
