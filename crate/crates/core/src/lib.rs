//! Reannotation of "that" in Universal Dependencies treebanks as relative
//! pronoun (`WPR`) or complementizer (`CST`), and a decision-tree trigram
//! tagger trained on the result.
//!
//! The pipeline stages map onto modules:
//!
//! | stage | module |
//! |---|---|
//! | read/write CoNLL-U | [`conllu`] |
//! | annotate raw text with a UDPipe service | [`annotate`] |
//! | relabel "that" and count | [`reannotate`] |
//! | token-per-row files, grouping, lexicons | [`lexicon`] |
//! | train, save, load and apply the tagger | [`tagger`] |
//! | per-tag evaluation and scaling experiment | [`eval`] |
//! | command-line front end | [`cli`] |

pub mod annotate;
pub mod cli;
pub mod conllu;
pub mod eval;
pub mod io;
pub mod lexicon;
pub mod reannotate;
pub mod tagger;

pub use conllu::{load_corpus, parse_conllu, serialize_conllu, Corpus, Document, Sentence, Token};
pub use lexicon::{build_lexicon, Lexicon, TrainingFile};
pub use reannotate::{compute_stats, reannotate_corpus, reannotate_that, ThatTag};
pub use tagger::{load_model, save_model, tag_sentence, train, TaggerModel, TrainParams};
