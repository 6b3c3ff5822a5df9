//! Relabelling of "that" as relative pronoun (`WPR`) or complementizer
//! (`CST`) from its dependency context, plus corpus statistics over the
//! result.
//!
//! The label is written into the XPOS column. Two rules decide it:
//!
//! * **WPR**: "that" is a clause-internal argument (`nsubj`, `nsubj:pass`,
//!   `obj`, `obl`) of a head attached as `acl:relcl`.
//! * **CST**: "that" is attached as `mark` to a head attached as `acl` or
//!   `ccomp`.
//!
//! The rules look at disjoint `deprel` sets for the "that" token itself, so
//! no token can satisfy both. Every other "that" (determiner, demonstrative
//! pronoun, adverb) is left alone.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use serde::Serialize;

use crate::conllu::{Corpus, Document, Sentence};

pub const TARGET_FORM: &str = "that";

/// The two labels this module assigns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ThatTag {
    #[serde(rename = "WPR")]
    Wpr,
    #[serde(rename = "CST")]
    Cst,
}

impl ThatTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ThatTag::Wpr => "WPR",
            ThatTag::Cst => "CST",
        }
    }

    pub fn rule_name(self) -> &'static str {
        match self {
            ThatTag::Wpr => "WPR-rule",
            ThatTag::Cst => "CST-rule",
        }
    }
}

impl fmt::Display for ThatTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A dependency-context rule for one label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReannotationRule {
    pub tag: ThatTag,
    /// Admissible relations of the "that" token to its head.
    pub that_deprels: &'static [&'static str],
    /// Admissible relations of that head to its own head.
    pub head_deprels: &'static [&'static str],
}

pub const WPR_RULE: ReannotationRule = ReannotationRule {
    tag: ThatTag::Wpr,
    that_deprels: &["nsubj", "nsubj:pass", "obj", "obl"],
    head_deprels: &["acl:relcl"],
};

pub const CST_RULE: ReannotationRule = ReannotationRule {
    tag: ThatTag::Cst,
    that_deprels: &["mark"],
    head_deprels: &["acl", "ccomp"],
};

/// Rules in application order.
pub const RULES: [ReannotationRule; 2] = [WPR_RULE, CST_RULE];

impl ReannotationRule {
    pub fn name(&self) -> &'static str {
        self.tag.rule_name()
    }

    /// Whether the rule matches the relation pair, ignoring the form.
    pub fn matches_relations(&self, that_deprel: &str, head_deprel: &str) -> bool {
        self.that_deprels.contains(&that_deprel) && self.head_deprels.contains(&head_deprel)
    }
}

/// Classifies token `id` (1-based) of `sentence`.
///
/// Returns `Err` with a message when the token's head index dangles.
pub fn classify(sentence: &Sentence, id: usize) -> Result<Option<ThatTag>, String> {
    let token = match sentence.token(id) {
        Some(t) => t,
        None => return Ok(None),
    };
    if !token.form_is(TARGET_FORM) || token.head == 0 {
        return Ok(None);
    }
    let head = sentence
        .token(token.head)
        .ok_or_else(|| format!("{}: token {} has dangling head {}", sentence.sent_id, token.id, token.head))?;
    Ok(RULES
        .iter()
        .find(|r| r.matches_relations(&token.deprel, &head.deprel))
        .map(|r| r.tag))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edit {
    pub token_id: usize,
    pub old_xpos: String,
    pub new_tag: ThatTag,
}

impl Edit {
    pub fn rule(&self) -> &'static str {
        self.new_tag.rule_name()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReannotationOutcome {
    pub doc_id: String,
    /// The sentence after editing.
    pub sentence: Sentence,
    pub edits: Vec<Edit>,
    pub warnings: Vec<String>,
}

impl ReannotationOutcome {
    pub fn has_tag(&self, tag: ThatTag) -> bool {
        self.edits.iter().any(|e| e.new_tag == tag)
    }
}

/// Applies both rules to every "that" in `sentence`.
pub fn reannotate_that(sentence: &Sentence) -> ReannotationOutcome {
    let mut edited = sentence.clone();
    let mut edits = Vec::new();
    let mut warnings = Vec::new();
    for id in 1..=sentence.len() {
        match classify(sentence, id) {
            Ok(Some(tag)) => {
                let token = &mut edited.tokens[id - 1];
                edits.push(Edit { token_id: id, old_xpos: token.xpos.clone(), new_tag: tag });
                token.xpos = tag.as_str().to_owned();
            }
            Ok(None) => {}
            Err(w) => {
                log::warn!("{}", w);
                warnings.push(w);
            }
        }
    }
    ReannotationOutcome { doc_id: String::new(), sentence: edited, edits, warnings }
}

/// The edited corpus and one outcome per sentence that received an edit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reannotation {
    pub corpus: Corpus,
    pub outcomes: Vec<ReannotationOutcome>,
}

impl Reannotation {
    /// Sentences with at least one WPR edit, in corpus order.
    pub fn wpr(&self) -> Vec<&ReannotationOutcome> {
        self.partition(ThatTag::Wpr)
    }

    /// Sentences with at least one CST edit, in corpus order.
    pub fn cst(&self) -> Vec<&ReannotationOutcome> {
        self.partition(ThatTag::Cst)
    }

    fn partition(&self, tag: ThatTag) -> Vec<&ReannotationOutcome> {
        self.outcomes.iter().filter(|o| o.has_tag(tag)).collect()
    }

    pub fn edit_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.edits.len()).sum()
    }
}

/// Reannotates a whole corpus, preserving document and sentence order.
pub fn reannotate_corpus(corpus: &Corpus) -> Reannotation {
    let mut documents = Vec::with_capacity(corpus.documents.len());
    let mut outcomes = Vec::new();
    for doc in &corpus.documents {
        let mut sentences = Vec::with_capacity(doc.sentences.len());
        for sentence in &doc.sentences {
            let mut outcome = reannotate_that(sentence);
            sentences.push(outcome.sentence.clone());
            if !outcome.edits.is_empty() {
                outcome.doc_id = doc.doc_id.clone();
                outcomes.push(outcome);
            }
        }
        documents.push(Document { doc_id: doc.doc_id.clone(), sentences });
    }
    Reannotation { corpus: Corpus::new(documents), outcomes }
}

/// Renders the edits as TSV with a header row.
pub fn edits_tsv(outcomes: &[ReannotationOutcome]) -> String {
    let mut out = String::from("doc_id\tsent_id\ttoken_id\told_xpos\tnew_tag\trule\n");
    for o in outcomes {
        for e in &o.edits {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                o.doc_id,
                o.sentence.sent_id,
                e.token_id,
                e.old_xpos,
                e.new_tag,
                e.rule()
            );
        }
    }
    out
}

fn pretty_sentence(o: &ReannotationOutcome, tag: ThatTag) -> String {
    o.sentence
        .tokens
        .iter()
        .map(|t| {
            if o.edits.iter().any(|e| e.token_id == t.id && e.new_tag == tag) {
                format!("[{}/{}]", t.form, tag)
            } else {
                t.form.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Numbered listing of reannotated sentences, WPR block first, then CST.
/// Each block is numbered from 0 and holds at most `limit` sentences; the
/// edited token is bracketed with its new tag.
pub fn display_outcomes(outcomes: &[ReannotationOutcome], limit: usize) -> String {
    let mut out = String::new();
    for tag in [ThatTag::Wpr, ThatTag::Cst] {
        let _ = writeln!(out, "{} {}", tag, "-".repeat(100));
        for (n, o) in outcomes.iter().filter(|o| o.has_tag(tag)).take(limit).enumerate() {
            let _ = writeln!(out, "{} {}  ({})", n, pretty_sentence(o, tag), o.sentence.sent_id);
            out.push('\n');
        }
    }
    out
}

/// Corpus-level counts over "that" and over `acl`/`acl:relcl` relations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub total_that: usize,
    pub reannotated_total: usize,
    pub cst_count: usize,
    pub wpr_count: usize,
    /// `acl:relcl` verbs with no "that" among their dependents.
    pub acl_relcl_verbs_without_that: usize,
    pub acl_relations: usize,
    /// Fraction of acl relations whose head precedes the dependent.
    pub acl_left_to_right_fraction: Option<f64>,
    pub acl_mean_parent_child_distance: Option<f64>,
    /// Keyed `HEADUPOS-CHILDUPOS`.
    pub acl_pos_pair_fractions: BTreeMap<String, f64>,
}

/// Mergeable partial counts behind [`CorpusStats`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsAccumulator {
    pub total_that: usize,
    pub cst_count: usize,
    pub wpr_count: usize,
    pub acl_relcl_verbs_without_that: usize,
    pub acl_relations: usize,
    pub acl_left_to_right: usize,
    pub acl_distance_sum: usize,
    pub acl_pos_pairs: BTreeMap<(String, String), usize>,
}

fn is_acl(deprel: &str) -> bool {
    deprel == "acl" || deprel == "acl:relcl"
}

impl StatsAccumulator {
    pub fn add_sentence(&mut self, sentence: &Sentence) {
        for t in &sentence.tokens {
            if t.form_is(TARGET_FORM) {
                self.total_that += 1;
            }
            if t.deprel == "acl:relcl" && t.upos == "VERB" && !sentence.dependents(t.id).any(|d| d.form_is(TARGET_FORM)) {
                self.acl_relcl_verbs_without_that += 1;
            }
            if is_acl(&t.deprel) {
                if let Some(head) = sentence.head_of(t) {
                    self.acl_relations += 1;
                    if head.id < t.id {
                        self.acl_left_to_right += 1;
                    }
                    self.acl_distance_sum += head.id.abs_diff(t.id);
                    *self.acl_pos_pairs.entry((head.upos.clone(), t.upos.clone())).or_insert(0) += 1;
                }
            }
        }
    }

    pub fn add_outcome(&mut self, outcome: &ReannotationOutcome) {
        for e in &outcome.edits {
            match e.new_tag {
                ThatTag::Wpr => self.wpr_count += 1,
                ThatTag::Cst => self.cst_count += 1,
            }
        }
    }

    pub fn merge(&mut self, other: StatsAccumulator) {
        self.total_that += other.total_that;
        self.cst_count += other.cst_count;
        self.wpr_count += other.wpr_count;
        self.acl_relcl_verbs_without_that += other.acl_relcl_verbs_without_that;
        self.acl_relations += other.acl_relations;
        self.acl_left_to_right += other.acl_left_to_right;
        self.acl_distance_sum += other.acl_distance_sum;
        for (k, v) in other.acl_pos_pairs {
            *self.acl_pos_pairs.entry(k).or_insert(0) += v;
        }
    }

    pub fn finish(&self) -> CorpusStats {
        let n = self.acl_relations;
        let ratio = |x: usize| if n == 0 { None } else { Some(x as f64 / n as f64) };
        CorpusStats {
            total_that: self.total_that,
            reannotated_total: self.cst_count + self.wpr_count,
            cst_count: self.cst_count,
            wpr_count: self.wpr_count,
            acl_relcl_verbs_without_that: self.acl_relcl_verbs_without_that,
            acl_relations: n,
            acl_left_to_right_fraction: ratio(self.acl_left_to_right),
            acl_mean_parent_child_distance: ratio(self.acl_distance_sum),
            acl_pos_pair_fractions: self
                .acl_pos_pairs
                .iter()
                .map(|((h, c), v)| (format!("{}-{}", h, c), *v as f64 / n as f64))
                .collect(),
        }
    }
}

/// Computes statistics for `corpus` and the outcomes produced from it.
pub fn compute_stats(corpus: &Corpus, outcomes: &[ReannotationOutcome]) -> CorpusStats {
    let mut total = corpus
        .documents
        .iter()
        .map(|doc| {
            let mut acc = StatsAccumulator::default();
            for s in &doc.sentences {
                acc.add_sentence(s);
            }
            acc
        })
        .fold(StatsAccumulator::default(), |mut a, b| {
            a.merge(b);
            a
        });
    for o in outcomes {
        total.add_outcome(o);
    }
    total.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;

    fn sentence(rows: &[(&str, &str, &str, usize, &str)]) -> Sentence {
        let text: String = rows
            .iter()
            .enumerate()
            .map(|(i, (form, upos, xpos, head, deprel))| {
                format!("{}\t{}\t_\t{}\t{}\t_\t{}\t{}\t_\t_\n", i + 1, form, upos, xpos, head, deprel)
            })
            .collect();
        parse_conllu(&text, "t").unwrap().sentences.remove(0)
    }

    fn relative() -> Sentence {
        // The book that I read was fascinating .
        sentence(&[
            ("The", "DET", "DT", 2, "det"),
            ("book", "NOUN", "NN", 7, "nsubj"),
            ("that", "PRON", "WDT", 5, "obj"),
            ("I", "PRON", "PRP", 5, "nsubj"),
            ("read", "VERB", "VBD", 2, "acl:relcl"),
            ("was", "AUX", "VBD", 7, "cop"),
            ("fascinating", "ADJ", "JJ", 0, "root"),
            (".", "PUNCT", ".", 7, "punct"),
        ])
    }

    fn complement() -> Sentence {
        // She believes that he is honest .
        sentence(&[
            ("She", "PRON", "PRP", 2, "nsubj"),
            ("believes", "VERB", "VBZ", 0, "root"),
            ("that", "SCONJ", "IN", 6, "mark"),
            ("he", "PRON", "PRP", 6, "nsubj"),
            ("is", "AUX", "VBZ", 6, "cop"),
            ("honest", "ADJ", "JJ", 2, "ccomp"),
            (".", "PUNCT", ".", 2, "punct"),
        ])
    }

    #[test]
    fn relative_that_is_wpr() {
        let o = reannotate_that(&relative());
        assert_eq!(o.edits, vec![Edit { token_id: 3, old_xpos: "WDT".into(), new_tag: ThatTag::Wpr }]);
        assert_eq!(o.sentence.tokens[2].xpos, "WPR");
        assert_eq!(o.edits[0].rule(), "WPR-rule");
    }

    #[test]
    fn complementizer_that_is_cst() {
        let o = reannotate_that(&complement());
        assert_eq!(o.edits.len(), 1);
        assert_eq!(o.edits[0].new_tag, ThatTag::Cst);
        assert_eq!(o.sentence.tokens[2].xpos, "CST");
    }

    #[test]
    fn determiner_that_untouched() {
        let s = sentence(&[
            ("Give", "VERB", "VB", 0, "root"),
            ("me", "PRON", "PRP", 1, "iobj"),
            ("that", "DET", "DT", 4, "det"),
            ("book", "NOUN", "NN", 1, "obj"),
        ]);
        let o = reannotate_that(&s);
        assert!(o.edits.is_empty());
        assert_eq!(o.sentence, s);
    }

    #[test]
    fn capitalized_that_is_eligible() {
        let mut s = relative();
        s.tokens[2].form = "That".into();
        assert_eq!(reannotate_that(&s).edits.len(), 1);
    }

    #[test]
    fn dangling_head_skipped_with_warning() {
        let mut s = relative();
        s.tokens[2].head = 42;
        let o = reannotate_that(&s);
        assert!(o.edits.is_empty());
        assert_eq!(o.warnings.len(), 1);
    }

    #[test]
    fn rules_are_disjoint() {
        for a in WPR_RULE.that_deprels {
            assert!(!CST_RULE.that_deprels.contains(a));
        }
    }

    #[test]
    fn display_numbering() {
        let doc = Document { doc_id: "d".into(), sentences: vec![relative(), complement(), complement()] };
        let r = reannotate_corpus(&Corpus::new(vec![doc]));
        let text = display_outcomes(&r.outcomes, 10);
        assert!(text.starts_with("WPR ---"));
        assert!(text.contains("0 The book [that/WPR] I read"));
        let cst_block = text.split("CST ---").nth(1).unwrap();
        assert!(cst_block.contains("\n0 She believes [that/CST]"));
        assert!(cst_block.contains("\n1 She believes [that/CST]"));
        assert!(!cst_block.contains("\n2 "));

        let headers_only = display_outcomes(&r.outcomes, 0);
        assert_eq!(headers_only.lines().count(), 2);
    }

    #[test]
    fn edits_tsv_columns() {
        let doc = Document { doc_id: "d".into(), sentences: vec![relative()] };
        let r = reannotate_corpus(&Corpus::new(vec![doc]));
        let tsv = edits_tsv(&r.outcomes);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "doc_id\tsent_id\ttoken_id\told_xpos\tnew_tag\trule");
        assert_eq!(lines[1], "d\tt:1\t3\tWDT\tWPR\tWPR-rule");
    }

    #[test]
    fn empty_corpus_stats() {
        let stats = compute_stats(&Corpus::default(), &[]);
        assert_eq!(stats.total_that, 0);
        assert_eq!(stats.reannotated_total, 0);
        assert!(stats.acl_mean_parent_child_distance.is_none());
        assert!(stats.acl_left_to_right_fraction.is_none());
        assert!(stats.acl_pos_pair_fractions.is_empty());
    }

    #[test]
    fn mean_distance_by_hand() {
        // one acl at distance 3 (relative(): book=2, read=5) and one at
        // distance 1 (idea=2, is=3)
        let second = sentence(&[
            ("The", "DET", "DT", 2, "det"),
            ("idea", "NOUN", "NN", 0, "root"),
            ("proposed", "VERB", "VBN", 2, "acl"),
        ]);
        let corpus = Corpus::new(vec![
            Document { doc_id: "a".into(), sentences: vec![relative()] },
            Document { doc_id: "b".into(), sentences: vec![second] },
        ]);
        let stats = compute_stats(&corpus, &reannotate_corpus(&corpus).outcomes);
        assert_eq!(stats.acl_relations, 2);
        assert!((stats.acl_mean_parent_child_distance.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(stats.acl_left_to_right_fraction, Some(1.0));
        assert_eq!(stats.acl_pos_pair_fractions["NOUN-VERB"], 1.0);
        // "read" has "that" as a dependent
        assert_eq!(stats.acl_relcl_verbs_without_that, 0);
        assert_eq!(stats.wpr_count, 1);
    }
}
