//! Decision-tree trigram part-of-speech tagger.
//!
//! The model factors p(t_1..t_n | w_1..w_n) into lexical terms p(w_i | t_i)
//! and context terms p(t_i | t_{i-2}, t_{i-1}). Context probabilities come
//! from a binary decision tree over the two preceding tags
//! ([`tree::ContextTree`]). Lexical probabilities come from per-form tag
//! frequencies, inverted with Bayes' rule against the training tag priors;
//! forms missing from the lexicon fall back to their lowercase variant and
//! then to a suffix trie restricted to open-class tags
//! ([`suffix::SuffixModel`]). Decoding is exact second-order Viterbi in log
//! space ([`decode`]).

pub mod decode;
pub mod format;
pub mod suffix;
pub mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::io::write_atomic;
use crate::lexicon::{read_token_sentences, Lexicon, TrainingFile};

pub use decode::{tag_sentence, DecodeOptions, Tagger};
pub use format::{load_model, save_model, FORMAT_VERSION, HEADER};
pub use suffix::SuffixModel;
pub use tree::{ContextTree, Position, Test};

/// Dense tag index. Id 0 is always the boundary tag.
pub type TagId = usize;

/// Synthetic tag padding the history at sentence start.
pub const BOUNDARY: &str = "⊥";
pub const BOUNDARY_ID: TagId = 0;

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("training data is empty")]
    EmptyTraining,

    #[error("model format version mismatch: expected {expected:?}, found {found:?}")]
    VersionMismatch { expected: String, found: String },

    #[error("corrupt model at byte {offset}: {message}")]
    CorruptModel { offset: usize, message: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagsetInfo {
    tags: Vec<String>,
    index: BTreeMap<String, TagId>,
}

impl TagsetInfo {
    /// Builds a tagset from real tags; they are sorted and placed after the
    /// boundary tag.
    pub fn new<I, S>(tags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let real: BTreeSet<String> = tags.into_iter().map(Into::into).filter(|t| t != BOUNDARY).collect();
        Self::from_ordered(std::iter::once(BOUNDARY.to_owned()).chain(real).collect())
    }

    /// Builds a tagset from a complete ordered list whose first entry is the
    /// boundary tag.
    pub(crate) fn from_ordered(tags: Vec<String>) -> Self {
        let index = tags.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        TagsetInfo { tags, index }
    }

    /// Number of tags including the boundary tag.
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.len() <= 1
    }

    pub fn id(&self, tag: &str) -> Option<TagId> {
        self.index.get(tag).copied()
    }

    pub fn name(&self, id: TagId) -> &str {
        &self.tags[id]
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// Ids of the real tags (everything but the boundary).
    pub fn real_ids(&self) -> std::ops::Range<TagId> {
        1..self.tags.len()
    }
}

/// Training hyper-parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainParams {
    /// Nodes with fewer samples are not split.
    pub min_samples: usize,
    /// Minimum information gain (bits) for a split.
    pub min_gain: f64,
    /// Additive smoothing constant for context leaves and lexical entries.
    pub add_lambda: f64,
    /// Longest suffix stored in the unknown-word trie.
    pub suffix_length: usize,
    /// Forms seen at most this often feed the suffix trie.
    pub rare_threshold: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams { min_samples: 2, min_gain: 1e-4, add_lambda: 0.1, suffix_length: 5, rare_threshold: 2 }
    }
}

/// A trained tagger. Distributions are indexed by [`TagId`].
#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    pub tagset: TagsetInfo,
    /// Training tag distribution, used for Bayes inversion and as the
    /// smoothing target of context leaves.
    pub priors: Vec<f64>,
    /// p(tag | form) for every lexicon form, sorted by tag id.
    pub lexical: BTreeMap<String, Vec<(TagId, f64)>>,
    pub context: ContextTree,
    pub suffix: SuffixModel,
    /// Tags admissible for unknown words. Empty means every tag.
    pub open_class: Vec<TagId>,
    pub format_version: String,
}

/// Where an emission distribution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexicalSource {
    Lexicon,
    Lowercase,
    Suffix,
}

impl TaggerModel {
    /// p(t_i = tag | t_{i-2} = prev2, t_{i-1} = prev).
    pub fn context_prob(&self, prev2: TagId, prev: TagId, tag: TagId) -> f64 {
        self.context.lookup(prev2, prev)[tag]
    }

    pub fn open_class_ids(&self) -> Vec<TagId> {
        if self.open_class.is_empty() {
            self.tagset.real_ids().collect()
        } else {
            self.open_class.clone()
        }
    }

    /// p(tag | form) for the candidate tags of `form`, with its source.
    pub fn lexical_distribution(&self, form: &str) -> (Vec<(TagId, f64)>, LexicalSource) {
        if let Some(d) = self.lexical.get(form) {
            return (d.clone(), LexicalSource::Lexicon);
        }
        let lower = form.to_lowercase();
        if let Some(d) = self.lexical.get(&lower) {
            return (d.clone(), LexicalSource::Lowercase);
        }
        let guess = self.suffix.lookup(form);
        let open = self.open_class_ids();
        let mass: f64 = open.iter().map(|&t| guess[t]).sum();
        let dist = if mass > 0.0 {
            open.iter().filter(|&&t| guess[t] > 0.0).map(|&t| (t, guess[t] / mass)).collect()
        } else {
            let u = 1.0 / open.len() as f64;
            open.iter().map(|&t| (t, u)).collect()
        };
        (dist, LexicalSource::Suffix)
    }

    /// log p(form | tag) up to a per-form constant: log p(tag|form) − log p(tag).
    pub fn emission_scores(&self, form: &str) -> Vec<(TagId, f64)> {
        let (dist, _) = self.lexical_distribution(form);
        dist.into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(t, p)| (t, p.ln() - self.priors[t].ln()))
            .collect()
    }

    /// Sum of every stored distribution, labelled by kind, for checking
    /// normalization.
    pub fn distribution_sums(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        out.push(("priors".to_owned(), self.priors.iter().sum()));
        for (form, d) in &self.lexical {
            out.push((format!("lexical {}", form), d.iter().map(|(_, p)| p).sum()));
        }
        for (i, leaf) in self.context.leaves().into_iter().enumerate() {
            out.push((format!("leaf {}", i), leaf.iter().sum()));
        }
        self.suffix.for_each_node(|s, n| out.push((format!("suffix {:?}", s), n.dist.iter().sum())));
        out
    }

    /// First distribution whose sum is off by more than `tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<(), String> {
        match self.distribution_sums().into_iter().find(|(_, s)| (s - 1.0).abs() > tol) {
            Some((name, s)) => Err(format!("{} sums to {}", name, s)),
            None => Ok(()),
        }
    }
}

/// Trains a model from tagged sentences and a lexicon built from them (or
/// from a superset).
pub fn train(training: &TrainingFile, lexicon: &Lexicon, params: &TrainParams) -> Result<TaggerModel, TaggerError> {
    if training.is_empty() {
        return Err(TaggerError::EmptyTraining);
    }
    let tagset = TagsetInfo::new(training.tags());
    let k = tagset.len();
    let lambda = params.add_lambda;

    let mut tag_counts = vec![0usize; k];
    for tag in training.tags() {
        tag_counts[tagset.id(tag).expect("training tag in tagset")] += 1;
    }
    let n = training.len() as f64;
    let priors: Vec<f64> = tag_counts.iter().map(|&c| c as f64 / n).collect();

    let mut samples = Vec::with_capacity(training.len());
    for sentence in training.sentences() {
        let (mut prev2, mut prev) = (BOUNDARY_ID, BOUNDARY_ID);
        for (_, tag) in sentence {
            let t = tagset.id(tag).expect("training tag in tagset");
            samples.push(tree::Trigram { prev2, prev, tag: t });
            prev2 = prev;
            prev = t;
        }
    }
    let context = ContextTree::grow(
        &samples,
        &priors,
        tree::GrowParams { min_samples: params.min_samples, min_gain: params.min_gain, add_lambda: lambda },
    );

    // Tags never seen in training have no context statistics; lexicon
    // entries for them are dropped.
    let mut lexical = BTreeMap::new();
    for (form, tags) in &lexicon.entries {
        let known: Vec<(TagId, usize)> = tags.iter().filter_map(|(tag, c)| tagset.id(tag).map(|t| (t, *c))).collect();
        if known.len() < tags.len() {
            log::warn!("lexicon entry {:?} has tags absent from training", form);
        }
        if known.is_empty() {
            continue;
        }
        let total: usize = known.iter().map(|(_, c)| c).sum();
        let denom = total as f64 + lambda * known.len() as f64;
        let mut dist: Vec<(TagId, f64)> = known.iter().map(|&(t, c)| (t, (c as f64 + lambda) / denom)).collect();
        dist.sort_by_key(|&(t, _)| t);
        lexical.insert(form.clone(), dist);
    }

    let mut form_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for form in training.forms() {
        *form_counts.entry(form).or_insert(0) += 1;
    }
    let rare = training
        .rows
        .iter()
        .filter(|(form, _)| form_counts[form.as_str()] <= params.rare_threshold)
        .map(|(form, tag)| (form.as_str(), tagset.id(tag).expect("training tag in tagset")));
    let theta = suffix::theta_from_prior(&priors);
    let suffix = SuffixModel::build(rare, &priors, params.suffix_length, theta);

    let open_class = lexicon.open_class_tags.iter().filter_map(|t| tagset.id(t)).collect();

    Ok(TaggerModel {
        tagset,
        priors,
        lexical,
        context,
        suffix,
        open_class,
        format_version: FORMAT_VERSION.to_owned(),
    })
}

/// Tags pre-tokenized text (one token per line, blank line between
/// sentences; extra columns are ignored) and renders `form<TAB>tag` rows.
pub fn tag_text(tagger: &Tagger<'_>, input: &str) -> String {
    let mut out = String::new();
    for sentence in read_token_sentences(input) {
        for (form, tag) in sentence.iter().zip(tagger.tag(&sentence)) {
            out.push_str(form);
            out.push('\t');
            out.push_str(&tag);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Tags the token file `input` into `output`.
pub fn tag_file(tagger: &Tagger<'_>, input: &Path, output: &Path) -> Result<usize, TaggerError> {
    let text = fs::read_to_string(input).map_err(|source| TaggerError::Io { path: input.to_owned(), source })?;
    let tagged = tag_text(tagger, &text);
    let rows = tagged.lines().filter(|l| !l.is_empty()).count();
    write_atomic(output, tagged.as_bytes()).map_err(|source| TaggerError::Io { path: output.to_owned(), source })?;
    Ok(rows)
}
