//! Train the decision-tree tagger, inspect it, save it, load it back and
//! tag new sentences.
//!
//!     cargo run --example train_and_tag

use std::error::Error;
use std::path::Path;

use thattag::conllu::load_corpus;
use thattag::lexicon::{build_lexicon, document_rows, TrainingFile};
use thattag::reannotate::reannotate_corpus;
use thattag::tagger::{load_model, save_model, train, Tagger, TrainParams};

fn main() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated"), "*.conllu")?;
    let mut training = TrainingFile::default();
    for doc in &reannotate_corpus(&corpus).corpus.documents {
        for s in document_rows(doc)?.sentences() {
            training.push_sentence(s.to_vec());
        }
    }
    let lexicon = build_lexicon(&training)?;
    let model = train(&training, &lexicon, &TrainParams::default())?;
    println!(
        "{} rows, {} tags, {} tree nodes ({} leaves), {} suffix nodes",
        training.len(),
        model.tagset.len() - 1,
        model.context.node_count(),
        model.context.leaves().len(),
        model.suffix.node_count()
    );
    let (wpr, prev) = (model.tagset.id("WPR").unwrap(), model.tagset.id("NN").unwrap());
    println!("p(WPR | DT, NN) = {:.4}", model.context_prob(model.tagset.id("DT").unwrap(), prev, wpr));

    let dir = tempfile::tempdir()?;
    let file = dir.path().join("model.ttm");
    save_model(&model, &file)?;
    let loaded = load_model(&file)?;
    assert_eq!(loaded, model);

    let tagger = Tagger::new(&loaded);
    for sentence in [
        "The letter that vanished quietly was old .",
        "They claimed that the bridge collapsed .",
        "We bought that lamp .",
        "The glimmering dragon vanished quietly .",
    ] {
        let forms: Vec<&str> = sentence.split(' ').collect();
        let tagged: Vec<String> = forms.iter().zip(tagger.tag(&forms)).map(|(f, t)| format!("{}/{}", f, t)).collect();
        println!("{}", tagged.join(" "));
    }
    Ok(())
}
