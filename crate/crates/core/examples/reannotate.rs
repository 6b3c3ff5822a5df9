//! Relabel "that" as WPR (relative pronoun) or CST (complementizer) and
//! print corpus statistics.
//!
//!     cargo run --example reannotate

use std::error::Error;
use std::path::Path;

use thattag::conllu::load_corpus;
use thattag::reannotate::{compute_stats, display_outcomes, edits_tsv, reannotate_corpus};

fn main() -> Result<(), Box<dyn Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden");
    let corpus = load_corpus(&dir, "*.conllu")?;
    let result = reannotate_corpus(&corpus);

    print!("{}", display_outcomes(&result.outcomes, 3));
    println!();
    for line in edits_tsv(&result.outcomes).lines().take(6) {
        println!("{}", line);
    }

    let stats = compute_stats(&corpus, &result.outcomes);
    println!("\n{}", serde_json::to_string_pretty(&stats)?);
    Ok(())
}
