//! Export token-per-row training files, group the first n documents and
//! build a lexicon from them.
//!
//!     cargo run --example build_lexicon

use std::error::Error;
use std::path::Path;

use thattag::conllu::load_corpus;
use thattag::lexicon::{build_lexicon, concat_first_n, export_token_per_row, grouped_training_path, TrainingFile};
use thattag::reannotate::reannotate_corpus;

fn main() -> Result<(), Box<dyn Error>> {
    let corpus = load_corpus(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated"), "*.conllu")?;
    let reannotated = reannotate_corpus(&corpus).corpus;

    let work = tempfile::tempdir()?;
    let tokens = work.path().join("tokens");
    let files = export_token_per_row(&reannotated, &tokens)?;
    println!("{} token-per-row files", files);

    for n in [2, 5, 10] {
        let path = grouped_training_path(work.path(), n);
        let rows = concat_first_n(&tokens, n, &path)?;
        let lex = build_lexicon(&TrainingFile::read(&path)?)?;
        println!("n={:<3} rows={:<5} forms={:<4} open class {:?}", n, rows, lex.entries.len(), lex.open_class_tags);
        if n == 10 {
            for form in ["that", "the", "was"] {
                println!("  {:<5} {:?}", form, lex.tags_of(form).unwrap_or_default());
            }
        }
    }
    Ok(())
}
