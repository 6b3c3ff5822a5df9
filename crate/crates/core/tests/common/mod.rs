#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::Rng;

use thattag::conllu::{parse_conllu, Sentence};
use thattag::tagger::tree::Node;
use thattag::tagger::{ContextTree, Position, SuffixModel, TagId, TaggerModel, Test, FORMAT_VERSION};
use thattag::tagger::TagsetInfo;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

/// Every `.conllu` file under the fixture tree, sorted.
pub fn conllu_fixture_files() -> Vec<PathBuf> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
        let mut entries: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(&p, out);
            } else if p.extension().is_some_and(|e| e == "conllu") {
                out.push(p);
            }
        }
    }
    let mut out = Vec::new();
    walk(&fixtures(), &mut out);
    out
}

pub fn golden_sentences() -> Vec<Sentence> {
    let text = fs::read_to_string(fixture("golden/that_golden.conllu")).unwrap();
    parse_conllu(&text, "golden").unwrap().sentences
}

/// (sent_id, token_id) → label, read from the hand-labeled TSV.
pub fn golden_labels() -> BTreeMap<(String, usize), String> {
    let text = fs::read_to_string(fixture("golden/that_labels.tsv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split('\t').collect();
            ((c[0].to_owned(), c[1].parse().unwrap()), c[3].to_owned())
        })
        .collect()
}

pub fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        if p.is_file() {
            fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
        }
    }
}

/// Relative path → contents for every file below `dir`.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn random_dist(rng: &mut StdRng, k: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..k).map(|t| if t == 0 { 0.0 } else { rng.gen_range(0.01..1.0) }).collect();
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|p| *p /= s);
    d
}

fn random_tree(rng: &mut StdRng, k: usize, depth: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.3) {
        return Node::Leaf { dist: random_dist(rng, k) };
    }
    let position = if rng.gen_bool(0.5) { Position::Previous } else { Position::Previous2 };
    Node::Split {
        test: Test { position, tag: rng.gen_range(0..k) },
        yes: Box::new(random_tree(rng, k, depth - 1)),
        no: Box::new(random_tree(rng, k, depth - 1)),
    }
}

/// A model with random priors, context tree and lexical entries for the
/// forms `w0..w{n_forms}`. Every form has at least one candidate tag.
pub fn random_model(rng: &mut StdRng, real_tags: usize, n_forms: usize) -> TaggerModel {
    let names: Vec<String> = (0..real_tags).map(|i| format!("T{}", i)).collect();
    let tagset = TagsetInfo::new(names);
    let k = tagset.len();
    let priors = random_dist(rng, k);
    let mut lexical = BTreeMap::new();
    for f in 0..n_forms {
        let mut cands: Vec<(TagId, f64)> = Vec::new();
        for t in 1..k {
            if rng.gen_bool(0.6) {
                cands.push((t, rng.gen_range(0.01..1.0)));
            }
        }
        if cands.is_empty() {
            cands.push((rng.gen_range(1..k), 1.0));
        }
        let s: f64 = cands.iter().map(|c| c.1).sum();
        cands.iter_mut().for_each(|c| c.1 /= s);
        lexical.insert(format!("w{}", f), cands);
    }
    let suffix = SuffixModel::build(std::iter::empty::<(&str, TagId)>(), &priors, 0, 0.0);
    TaggerModel {
        tagset,
        priors,
        lexical,
        context: ContextTree { root: random_tree(rng, k, 3) },
        suffix,
        open_class: Vec::new(),
        format_version: FORMAT_VERSION.to_owned(),
    }
}

/// Exhaustive argmax over every tag sequence drawn from each form's
/// candidates. Ties go to the lexicographically smallest id sequence.
pub fn brute_force(model: &TaggerModel, forms: &[String]) -> (Vec<TagId>, f64) {
    let cands: Vec<Vec<(TagId, f64)>> = forms.iter().map(|f| model.emission_scores(f)).collect();
    let mut best: (Vec<TagId>, f64) = (Vec::new(), f64::NEG_INFINITY);
    let mut idx = vec![0usize; forms.len()];
    loop {
        let mut score = 0.0;
        let (mut p2, mut p1) = (0, 0);
        let mut seq = Vec::with_capacity(forms.len());
        for (i, &j) in idx.iter().enumerate() {
            let (t, e) = cands[i][j];
            score = (score + model.context_prob(p2, p1, t).ln()) + e;
            seq.push(t);
            p2 = p1;
            p1 = t;
        }
        if score > best.1 {
            best = (seq, score);
        }
        // odometer increment, last position fastest
        let mut pos = forms.len();
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < cands[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Token-per-row training data from the reannotated golden corpus.
pub fn golden_training() -> thattag::lexicon::TrainingFile {
    use thattag::conllu::{Corpus, Document};
    let corpus = Corpus::new(vec![Document { doc_id: "golden".into(), sentences: golden_sentences() }]);
    let re = thattag::reannotate::reannotate_corpus(&corpus);
    thattag::lexicon::document_rows(&re.corpus.documents[0]).unwrap()
}

pub fn train_golden() -> TaggerModel {
    let tf = golden_training();
    let lex = thattag::lexicon::build_lexicon(&tf).unwrap();
    thattag::tagger::train(&tf, &lex, &Default::default()).unwrap()
}

/// Fraction of rows whose predicted tag equals the gold tag.
pub fn self_accuracy(model: &TaggerModel, tf: &thattag::lexicon::TrainingFile) -> f64 {
    let tagger = thattag::tagger::Tagger::new(model);
    let (mut right, mut total) = (0, 0);
    for sent in tf.sentences() {
        let forms: Vec<&str> = sent.iter().map(|(f, _)| f.as_str()).collect();
        for (pred, (_, gold)) in tagger.tag(&forms).iter().zip(sent) {
            right += (pred == gold) as usize;
            total += 1;
        }
    }
    right as f64 / total as f64
}

/// Naive confusion-matrix recount: tag → (tp, fp, fn) over rows whose form
/// is `target` (case-insensitive).
pub fn naive_counts(
    gold: &[(String, String)],
    pred: &[(String, String)],
    target: &str,
) -> BTreeMap<String, (usize, usize, usize)> {
    let mut matrix: BTreeMap<(String, String), usize> = BTreeMap::new();
    for ((f, g), (_, p)) in gold.iter().zip(pred) {
        if f.to_lowercase() == target {
            *matrix.entry((g.clone(), p.clone())).or_default() += 1;
        }
    }
    let mut tags: Vec<String> = matrix.keys().flat_map(|(g, p)| [g.clone(), p.clone()]).collect();
    tags.sort();
    tags.dedup();
    tags.into_iter()
        .map(|t| {
            let tp = matrix.get(&(t.clone(), t.clone())).copied().unwrap_or(0);
            let fp: usize = matrix.iter().filter(|((g, p), _)| *p == t && *g != t).map(|(_, c)| c).sum();
            let fn_: usize = matrix.iter().filter(|((g, p), _)| *g == t && *p != t).map(|(_, c)| c).sum();
            (t, (tp, fp, fn_))
        })
        .collect()
}

/// A random aligned gold/predicted pair as token-per-row text.
pub fn random_eval_pair(rng: &mut StdRng) -> (String, String) {
    const FORMS: [&str; 4] = ["that", "That", "book", "the"];
    const TAGS: [&str; 4] = ["WPR", "CST", "DT", "NN"];
    let (mut gold, mut pred) = (String::new(), String::new());
    for _ in 0..rng.gen_range(1..6) {
        for _ in 0..rng.gen_range(1..10) {
            let f = FORMS[rng.gen_range(0..FORMS.len())];
            gold += &format!("{}\t{}\n", f, TAGS[rng.gen_range(0..TAGS.len())]);
            pred += &format!("{}\t{}\n", f, TAGS[rng.gen_range(0..TAGS.len())]);
        }
        gold.push('\n');
        pred.push('\n');
    }
    (gold, pred)
}

pub fn run_cli<I, S>(args: I) -> std::process::Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    std::process::Command::new(env!("CARGO_BIN_EXE_thattag")).args(args).output().unwrap()
}

/// Runs the CLI and panics with its stderr unless it exits 0.
pub fn cli_ok<I, S>(args: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = run_cli(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// A pipeline config whose outputs are relative to the config file.
pub fn pipeline_config(sizes: &str) -> String {
    format!(
        "endpoint = \"offline\"\nsizes = [{}]\nraw_dir = {:?}\nannotated_dir = \"annotated\"\n\
         reannotated_dir = \"reannotated\"\ntoken_dir = \"tokens\"\ngrouped_dir = \"grouped\"\n\
         models_dir = \"models\"\nreports_dir = \"reports\"\nwpr_test = {:?}\ncst_test = {:?}\n",
        sizes,
        fixture("annotated").display().to_string(),
        fixture("tests/wpr_test.txt").display().to_string(),
        fixture("tests/cst_test.txt").display().to_string(),
    )
}

/// The stages `pipeline` chains, run one by one inside `root`.
pub fn run_stages(root: &Path, sizes: &str) {
    let p = |s: &str| root.join(s).display().to_string();
    let f = |s: &str| fixture(s).display().to_string();
    cli_ok(["annotate", "--endpoint", "offline", "--in", &f("annotated"), "--out", &p("annotated")]);
    cli_ok(["reannotate", "--in", &p("annotated"), "--out", &p("reannotated"), "--report", &p("reports/edits.tsv")]);
    cli_ok(["stats", "--in", &p("annotated"), "--json", &p("reports/stats.json")]);
    cli_ok(["lexicon", "export", "--in", &p("reannotated"), "--out", &p("tokens")]);
    cli_ok([
        "experiment",
        "--tokens",
        &p("tokens"),
        "--wpr-test",
        &f("tests/wpr_test.txt"),
        "--cst-test",
        &f("tests/cst_test.txt"),
        "--sizes",
        sizes,
        "--out",
        &p("reports"),
        "--grouped",
        &p("grouped"),
        "--models",
        &p("models"),
    ]);
}
