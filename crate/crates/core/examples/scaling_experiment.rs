//! Train and evaluate at increasing training sizes, then write
//! scaling.csv and the three SVG charts.
//!
//!     cargo run --example scaling_experiment [out_dir]

use std::error::Error;
use std::path::{Path, PathBuf};

use thattag::conllu::load_corpus;
use thattag::eval::{emit_plots, fmt_metric, run_scaling_experiment, ExperimentLayout, ExperimentParams};
use thattag::lexicon::export_token_per_row;
use thattag::reannotate::{reannotate_corpus, ThatTag};

fn main() -> Result<(), Box<dyn Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let out = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("scaling-out"));

    let corpus = reannotate_corpus(&load_corpus(&fixtures.join("annotated"), "*.conllu")?).corpus;
    let tokens = out.join("tokens");
    export_token_per_row(&corpus, &tokens)?;

    let result = run_scaling_experiment(
        &tokens,
        &fixtures.join("tests/wpr_test.txt"),
        &fixtures.join("tests/cst_test.txt"),
        &[1, 2, 5, 10],
        &ExperimentParams::default(),
        &ExperimentLayout::under(&out),
    )?;
    for p in &result.points {
        println!(
            "{:>3} files  {:>5} tokens  WPR recall {}  CST recall {}  correct WPR/CST {}/{}",
            p.n_files,
            p.tokens_trained,
            fmt_metric(p.wpr.recall),
            fmt_metric(p.cst.recall),
            p.correct(ThatTag::Wpr),
            p.correct(ThatTag::Cst)
        );
    }
    for f in emit_plots(&result, &out)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
