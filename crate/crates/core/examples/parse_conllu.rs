//! Parse a CoNLL-U file, walk its dependency trees and write it back.
//!
//!     cargo run --example parse_conllu [path/to/file.conllu]

use std::error::Error;
use std::path::PathBuf;

use thattag::conllu::{parse_conllu, serialize_conllu};

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden/that_golden.conllu"));
    let text = std::fs::read_to_string(&path)?;
    let parsed = parse_conllu(&text, "example")?;
    for w in &parsed.warnings {
        eprintln!("warning: {}", w);
    }

    for sentence in parsed.sentences.iter().take(3) {
        println!("{}  {}", sentence.sent_id, sentence.text);
        for t in &sentence.tokens {
            let head = sentence.head_of(t).map(|h| h.form.as_str()).unwrap_or("ROOT");
            println!("  {:>2} {:<12} {:<6} {:<10} <- {}", t.id, t.form, t.upos, t.deprel, head);
        }
    }

    let same = serialize_conllu(&parsed.sentences) == text;
    println!("\n{} sentences; byte-identical round trip: {}", parsed.sentences.len(), same);
    Ok(())
}
