//! Score two models on the WPR and CST test sets and print a comparison
//! table with per-category precision, recall and F1.
//!
//!     cargo run --example evaluate

use std::error::Error;
use std::path::Path;

use thattag::conllu::load_corpus;
use thattag::eval::{comparison_table, evaluate, tag_like};
use thattag::lexicon::{build_lexicon, document_rows, TrainingFile};
use thattag::reannotate::reannotate_corpus;
use thattag::tagger::{train, Tagger, TrainParams};

fn main() -> Result<(), Box<dyn Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let corpus = reannotate_corpus(&load_corpus(&fixtures.join("annotated"), "*.conllu")?).corpus;
    let mut gold = TrainingFile::read(&fixtures.join("tests/wpr_test.txt"))?;
    for s in TrainingFile::read(&fixtures.join("tests/cst_test.txt"))?.sentences() {
        gold.push_sentence(s.to_vec());
    }

    let mut reports = Vec::new();
    for docs in [1, 12] {
        let mut training = TrainingFile::default();
        for doc in corpus.documents.iter().take(docs) {
            for s in document_rows(doc)?.sentences() {
                training.push_sentence(s.to_vec());
            }
        }
        let model = train(&training, &build_lexicon(&training)?, &TrainParams::default())?;
        let predicted = tag_like(&Tagger::new(&model), &gold);
        reports.push((format!("{} document(s)", docs), evaluate(&gold, &predicted, "that")?));
    }
    print!("{}", comparison_table(&reports).text);
    Ok(())
}
