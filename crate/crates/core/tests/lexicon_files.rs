mod common;

use std::collections::BTreeMap;
use std::fs;

use proptest::prelude::*;
use thattag::conllu::{load_corpus, Corpus, Document};
use thattag::lexicon::{
    build_lexicon, build_lexicon_with, concat_first_n, export_token_per_row, OpenClass, TrainingFile,
};
use thattag::reannotate::reannotate_corpus;

fn exported_golden() -> TrainingFile {
    let corpus = Corpus::new(vec![Document { doc_id: "golden".into(), sentences: common::golden_sentences() }]);
    let tmp = tempfile::tempdir().unwrap();
    export_token_per_row(&reannotate_corpus(&corpus).corpus, tmp.path()).unwrap();
    TrainingFile::read(&tmp.path().join("golden.txt")).unwrap()
}

#[test]
fn exported_that_rows_carry_new_labels() {
    let tf = exported_golden();
    let that_tags: Vec<&str> = tf.rows.iter().filter(|(f, _)| f == "that").map(|(_, t)| t.as_str()).collect();
    assert_eq!(that_tags.iter().filter(|t| **t == "WPR").count(), 10);
    assert_eq!(that_tags.iter().filter(|t| **t == "CST").count(), 10);
    assert_eq!(tf.sentences().count(), 20);
}

#[test]
fn lexicon_totals_equal_row_count() {
    let tf = exported_golden();
    let lex = build_lexicon(&tf).unwrap();
    assert_eq!(lex.total_count(), tf.rows.len());
    // independent per-pair recount
    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (f, t) in &tf.rows {
        *counts.entry((f, t)).or_default() += 1;
    }
    for ((form, tag), c) in counts {
        let entry = lex.tags_of(form).unwrap();
        assert_eq!(entry.iter().find(|(t, _)| t == tag).unwrap().1, c);
    }
}

#[test]
fn lexicon_file_round_trips() {
    let lex = build_lexicon(&exported_golden()).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("lexicon.txt");
    lex.write(&p).unwrap();
    let back = thattag::lexicon::Lexicon::read(&p, &OpenClass::default()).unwrap();
    assert_eq!(back, lex);
}

#[test]
fn explicit_open_class_overrides_inference() {
    let tf = exported_golden();
    let lex = build_lexicon_with(&tf, &OpenClass::Explicit(vec!["NN".into(), "JJ".into()])).unwrap();
    assert_eq!(lex.open_class_tags, vec!["JJ".to_owned(), "NN".to_owned()]);
}

#[test]
fn grouping_preserves_sentence_boundaries() {
    let corpus = load_corpus(&common::fixture("annotated"), "*.conllu").unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let tokens = tmp.path().join("tokens");
    assert_eq!(export_token_per_row(&corpus, &tokens).unwrap(), 12);
    let rows = concat_first_n(&tokens, 3, &tmp.path().join("3.txt")).unwrap();
    let grouped = TrainingFile::read(&tmp.path().join("3.txt")).unwrap();
    assert_eq!(grouped.rows.len(), rows);
    let expected: usize = corpus.documents[..3].iter().map(|d| d.sentences.len()).sum();
    assert_eq!(grouped.sentences().count(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn smaller_groups_are_prefixes(n in 1usize..12, extra in 1usize..6) {
        let corpus = load_corpus(&common::fixture("annotated"), "*.conllu").unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let tokens = tmp.path().join("tokens");
        export_token_per_row(&corpus, &tokens).unwrap();
        let m = n + extra;
        concat_first_n(&tokens, n, &tmp.path().join("a.txt")).unwrap();
        concat_first_n(&tokens, m, &tmp.path().join("b.txt")).unwrap();
        let a = fs::read_to_string(tmp.path().join("a.txt")).unwrap();
        let b = fs::read_to_string(tmp.path().join("b.txt")).unwrap();
        prop_assert!(b.starts_with(&a));
        if m >= 12 {
            // asking for more files than exist uses all of them
            let all = fs::read_to_string(tmp.path().join("b.txt")).unwrap();
            concat_first_n(&tokens, 12, &tmp.path().join("c.txt")).unwrap();
            prop_assert_eq!(all, fs::read_to_string(tmp.path().join("c.txt")).unwrap());
        }
    }

    #[test]
    fn lexicon_counts_sum_to_rows(rows in prop::collection::vec(("[a-c]{1,2}", "[XYZ]"), 1..60)) {
        let tf = TrainingFile::from_sentences(vec![rows.clone()]);
        let lex = build_lexicon(&tf).unwrap();
        prop_assert_eq!(lex.total_count(), rows.len());
        for entry in lex.entries.values() {
            prop_assert!(entry.windows(2).all(|w| w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0)));
        }
    }
}
