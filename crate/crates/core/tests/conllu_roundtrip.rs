mod common;

use std::fs;

use proptest::prelude::*;
use thattag::conllu::{load_corpus, parse_conllu, serialize_conllu, ConlluError};

#[test]
fn fixture_files_round_trip_byte_for_byte() {
    let files = common::conllu_fixture_files();
    let mut sentences = 0;
    for path in &files {
        let text = fs::read_to_string(path).unwrap();
        let parsed = parse_conllu(&text, "doc").unwrap();
        assert!(parsed.warnings.is_empty(), "{}: {:?}", path.display(), parsed.warnings);
        sentences += parsed.sentences.len();
        assert_eq!(serialize_conllu(&parsed.sentences), text, "{}", path.display());
    }
    assert!(sentences >= 30, "only {} fixture sentences", sentences);
}

#[test]
fn corpus_loads_in_lexicographic_order() {
    let corpus = load_corpus(&common::fixture("annotated"), "*.conllu").unwrap();
    let ids = corpus.source_order();
    assert_eq!(ids.len(), 12);
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn crlf_input_parses_like_lf() {
    let text = fs::read_to_string(common::fixture("golden/that_golden.conllu")).unwrap();
    let crlf = text.replace('\n', "\r\n");
    let a = parse_conllu(&text, "d").unwrap();
    let b = parse_conllu(&crlf, "d").unwrap();
    assert_eq!(a.sentences, b.sentences);
}

#[test]
fn multiword_rows_are_skipped_with_a_warning() {
    let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n1\tdo\tdo\tAUX\tVBP\t_\t0\troot\t_\t_\n2\tn't\tnot\tPART\tRB\t_\t1\tadvmod\t_\t_\n\n";
    let out = parse_conllu(text, "d").unwrap();
    assert_eq!(out.sentences[0].tokens.len(), 2);
    assert_eq!(out.warnings.len(), 1);
}

#[test]
fn malformed_rows_report_their_line() {
    let text = "# sent_id = a\n1\tx\tx\tX\tX\t_\t0\troot\t_\t_\n2\ty\ty\n\n";
    match parse_conllu(text, "d") {
        Err(ConlluError::MalformedRow { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {:?}", other),
    }
}

fn column() -> impl Strategy<Value = String> {
    "[A-Za-z0-9.,:'!?-]{1,8}"
}

fn feats() -> impl Strategy<Value = String> {
    prop::collection::btree_map("[A-Z][a-z]{1,5}", "[A-Z][a-z0-9]{0,4}", 0..4).prop_map(|m| {
        if m.is_empty() {
            "_".to_owned()
        } else {
            m.iter().map(|(k, v)| format!("{}={}", k, v)).collect::<Vec<_>>().join("|")
        }
    })
}

/// Well-formed sentences: ids 1..n, heads within range and never self.
fn sentence_text() -> impl Strategy<Value = String> {
    (1usize..12).prop_flat_map(|n| {
        (
            "[a-z0-9-]{1,10}",
            prop::collection::vec((column(), column(), column(), column(), feats(), 0..=n, column(), column()), n),
        )
            .prop_map(move |(sid, rows)| {
                let mut s = format!("# sent_id = {}\n# text = {}\n", sid, rows.iter().map(|r| r.0.as_str()).collect::<Vec<_>>().join(" "));
                for (i, (form, lemma, upos, xpos, feats, head, deprel, misc)) in rows.into_iter().enumerate() {
                    let id = i + 1;
                    let head = if head == id { 0 } else { head };
                    s += &format!("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t{}\n", id, form, lemma, upos, xpos, feats, head, deprel, misc);
                }
                s.push('\n');
                s
            })
    })
}

proptest! {
    #[test]
    fn well_formed_text_round_trips(sents in prop::collection::vec(sentence_text(), 1..5)) {
        let text = sents.concat();
        let parsed = parse_conllu(&text, "p").unwrap();
        prop_assert_eq!(serialize_conllu(&parsed.sentences), text);
    }

    #[test]
    fn parse_serialize_parse_is_stable(sents in prop::collection::vec(sentence_text(), 1..4)) {
        let once = parse_conllu(&sents.concat(), "p").unwrap().sentences;
        let twice = parse_conllu(&serialize_conllu(&once), "p").unwrap().sentences;
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn arbitrary_input_never_panics(text in "(?s).{0,400}") {
        let _ = parse_conllu(&text, "fuzz");
    }

    #[test]
    fn tab_heavy_input_never_panics(rows in prop::collection::vec("[0-9#\\t._a-z=|-]{0,40}", 0..12)) {
        let _ = parse_conllu(&rows.join("\n"), "fuzz");
    }
}
