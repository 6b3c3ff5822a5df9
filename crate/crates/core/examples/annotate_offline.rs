//! Annotate a directory of documents.
//!
//! Without arguments this runs in offline mode over the bundled corpus,
//! which only validates and copies `.conllu` files. Pass a service URL and a
//! directory of `.txt` files to call a UDPipe server instead:
//!
//!     cargo run --example annotate_offline
//!     cargo run --example annotate_offline -- https://lindat.mff.cuni.cz/services/udpipe/api/process raw/

use std::error::Error;
use std::path::PathBuf;

use thattag::annotate::{annotate_directory, AnnotateRequest, Endpoint};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let endpoint = args.next().map(|s| Endpoint::parse(&s)).unwrap_or(Endpoint::Offline);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated"));
    let out = tempfile::tempdir()?;

    let template = AnnotateRequest::default();
    println!("endpoint: {}", endpoint);
    println!("request fields: {:?}", template.with_data("<file contents>").form_fields());

    let summary = annotate_directory(&input, out.path(), &template, &endpoint)?;
    println!("done {}, skipped {}, failed {}", summary.files_done, summary.files_skipped, summary.files_failed.len());

    // A second run skips everything that already exists.
    let again = annotate_directory(&input, out.path(), &template, &endpoint)?;
    println!("rerun: done {}, skipped {}", again.files_done, again.files_skipped);
    Ok(())
}
