//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a stage fails.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::annotate::{self, AnnotateRequest, Endpoint};
use crate::conllu::{load_corpus, write_corpus};
use crate::eval::{self, ExperimentLayout, ExperimentParams};
use crate::io::write_atomic;
use crate::lexicon::{self, build_lexicon_with, Lexicon, OpenClass, TrainingFile};
use crate::reannotate::{compute_stats, display_outcomes, edits_tsv, reannotate_corpus};
use crate::tagger::{self, DecodeOptions, Tagger, TrainParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

type Result<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Parser, Debug)]
#[command(name = "thattag", version, about = "Reannotate \"that\" as WPR/CST, train and evaluate a decision-tree tagger")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Annotate raw text files with a UDPipe service (or copy pre-annotated files offline)
    Annotate(AnnotateArgs),
    /// Relabel "that" as WPR or CST in a directory of CoNLL-U files
    Reannotate(ReannotateArgs),
    /// Corpus statistics over "that" and acl relations
    Stats(StatsArgs),
    /// Token-per-row export, grouping and lexicon building
    #[command(subcommand)]
    Lexicon(LexiconCommand),
    /// Train a tagger model
    Train(TrainArgs),
    /// Tag a token file with a trained model
    Tag(TagArgs),
    /// Per-tag precision/recall/F1 of predicted against gold tags
    Eval(EvalArgs),
    /// Train and evaluate at increasing training sizes
    Experiment(ExperimentArgs),
    /// Run annotate, reannotate, lexicon export and experiment in sequence
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug)]
pub struct AnnotateArgs {
    #[arg(long = "in", value_name = "DIR")]
    pub input: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value = annotate::DEFAULT_MODEL)]
    pub model: String,
    /// Service URL, or `offline` to copy pre-annotated .conllu files
    /// [default: $THAT_UDPIPE_URL or the public service]
    #[arg(long, value_name = "URL|offline")]
    pub endpoint: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReannotateArgs {
    #[arg(long = "in", value_name = "DIR")]
    pub input: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Write the list of edits as TSV
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Print up to N reannotated sentences per label
    #[arg(long, value_name = "N")]
    pub show: Option<usize>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long = "in", value_name = "DIR")]
    pub input: PathBuf,
    /// Output file, or `-` for standard output
    #[arg(long, value_name = "FILE|-", default_value = "-")]
    pub json: String,
}

#[derive(Subcommand, Debug)]
pub enum LexiconCommand {
    /// Write one token-per-row file per reannotated CoNLL-U document
    Export {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Concatenate the first n token files into <out>/<n>.txt
    Concat {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        /// One or more sizes, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Build a form/tag/count lexicon from a token-per-row file
    Build {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TrainFlags {
    /// Open-class tag file, one tag per line (an empty file allows every tag)
    #[arg(long, value_name = "FILE")]
    pub open_class_file: Option<PathBuf>,
    #[arg(long)]
    pub min_samples: Option<usize>,
    #[arg(long)]
    pub min_gain: Option<f64>,
    #[arg(long)]
    pub add_lambda: Option<f64>,
    #[arg(long)]
    pub suffix_length: Option<usize>,
    #[arg(long)]
    pub rare_threshold: Option<usize>,
}

impl TrainFlags {
    fn apply(&self, mut p: TrainParams) -> TrainParams {
        if let Some(v) = self.min_samples {
            p.min_samples = v;
        }
        if let Some(v) = self.min_gain {
            p.min_gain = v;
        }
        if let Some(v) = self.add_lambda {
            p.add_lambda = v;
        }
        if let Some(v) = self.suffix_length {
            p.suffix_length = v;
        }
        if let Some(v) = self.rare_threshold {
            p.rare_threshold = v;
        }
        p
    }

    fn open_class(&self) -> Result<OpenClass> {
        Ok(match &self.open_class_file {
            Some(path) => OpenClass::read(path)?,
            None => OpenClass::default(),
        })
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long, value_name = "FILE")]
    pub training: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub lexicon: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: TrainFlags,
}

#[derive(Args, Debug)]
pub struct TagArgs {
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Beam width in nats (exact decoding when absent)
    #[arg(long)]
    pub beam: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pub gold: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub pred: PathBuf,
    #[arg(long, default_value = "that")]
    pub target: String,
    #[arg(long, value_name = "FILE")]
    pub tsv: Option<PathBuf>,
    /// Model name used in the table
    #[arg(long, default_value = "model")]
    pub name: String,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, value_name = "DIR")]
    pub tokens: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub wpr_test: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub cst_test: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "10,30,100,200,300,500")]
    pub sizes: Vec<usize>,
    /// Reports directory (scaling.csv and charts)
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Grouped training files [default: <out>/grouped]
    #[arg(long, value_name = "DIR")]
    pub grouped: Option<PathBuf>,
    /// Models and tagged test sets [default: <out>/models]
    #[arg(long, value_name = "DIR")]
    pub models: Option<PathBuf>,
    #[arg(long, default_value = "that")]
    pub target: String,
    #[command(flatten)]
    pub params: TrainFlags,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    /// Flat key = value configuration file; relative paths resolve against its directory
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "URL|offline")]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_name = "DIR")]
    pub raw: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub annotated: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub reannotated: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub tokens: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub grouped: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub models: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub reports: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub wpr_test: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub cst_test: Option<PathBuf>,
}

/// Settings shared by the pipeline stages.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub endpoint: String,
    pub model_name: String,
    pub size_ladder: Vec<usize>,
    pub target_form: String,
    pub raw_dir: PathBuf,
    pub annotated_dir: PathBuf,
    pub reannotated_dir: PathBuf,
    pub token_dir: PathBuf,
    pub grouped_dir: PathBuf,
    pub models_dir: PathBuf,
    pub reports_dir: PathBuf,
    pub wpr_test: PathBuf,
    pub cst_test: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            endpoint: Endpoint::from_env().to_string(),
            model_name: annotate::DEFAULT_MODEL.to_owned(),
            size_ladder: lexicon::DEFAULT_SIZES.to_vec(),
            target_form: crate::reannotate::TARGET_FORM.to_owned(),
            raw_dir: "data/raw".into(),
            annotated_dir: "data/annotated".into(),
            reannotated_dir: "data/reannotated".into(),
            token_dir: "data/token_per_row".into(),
            grouped_dir: "data/grouped".into(),
            models_dir: "data/models".into(),
            reports_dir: "reports".into(),
            wpr_test: "data/tests/wpr_test.txt".into(),
            cst_test: "data/tests/cst_test.txt".into(),
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "endpoint",
    "model",
    "model_name",
    "sizes",
    "size_ladder",
    "target",
    "target_form",
    "raw_dir",
    "annotated_dir",
    "reannotated_dir",
    "token_dir",
    "grouped_dir",
    "models_dir",
    "reports_dir",
    "wpr_test",
    "cst_test",
];

impl PipelineConfig {
    /// Applies a flat `key = value` document on top of `self`. Relative
    /// paths are resolved against `base`.
    pub fn apply_config_text(&mut self, text: &str, base: &Path) -> Result<()> {
        let table: BTreeMap<String, toml::Value> = toml::from_str(text)?;
        for (key, value) in table {
            let string = || -> Result<String> {
                value
                    .as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| format!("config key {} must be a string", key).into())
            };
            let path = || -> Result<PathBuf> { Ok(base.join(string()?)) };
            match key.as_str() {
                "endpoint" => self.endpoint = string()?,
                "model" | "model_name" => self.model_name = string()?,
                "target" | "target_form" => self.target_form = string()?,
                "sizes" | "size_ladder" => {
                    let sizes = match &value {
                        toml::Value::Array(items) => items
                            .iter()
                            .map(|v| v.as_integer().filter(|&i| i >= 0).map(|i| i as usize))
                            .collect::<Option<Vec<_>>>(),
                        toml::Value::String(s) => s.split(',').map(|p| p.trim().parse().ok()).collect(),
                        _ => None,
                    };
                    self.size_ladder = sizes.ok_or("config key sizes must be a list of positive integers")?;
                }
                "raw_dir" => self.raw_dir = path()?,
                "annotated_dir" => self.annotated_dir = path()?,
                "reannotated_dir" => self.reannotated_dir = path()?,
                "token_dir" => self.token_dir = path()?,
                "grouped_dir" => self.grouped_dir = path()?,
                "models_dir" => self.models_dir = path()?,
                "reports_dir" => self.reports_dir = path()?,
                "wpr_test" => self.wpr_test = path()?,
                "cst_test" => self.cst_test = path()?,
                other => {
                    return Err(format!("unknown config key {:?} (expected one of {})", other, CONFIG_KEYS.join(", ")).into())
                }
            }
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, a: &PipelineArgs) {
        macro_rules! set {
            ($field:ident, $flag:ident) => {
                if let Some(v) = &a.$flag {
                    self.$field = v.clone();
                }
            };
        }
        set!(endpoint, endpoint);
        set!(model_name, model);
        set!(size_ladder, sizes);
        set!(target_form, target);
        set!(raw_dir, raw);
        set!(annotated_dir, annotated);
        set!(reannotated_dir, reannotated);
        set!(token_dir, tokens);
        set!(grouped_dir, grouped);
        set!(models_dir, models);
        set!(reports_dir, reports);
        set!(wpr_test, wpr_test);
        set!(cst_test, cst_test);
    }

    /// Checks invariants and lowercases the target form.
    pub fn validate(&mut self) -> Result<()> {
        eval::validate_sizes(&self.size_ladder)?;
        if self.target_form.trim().is_empty() {
            return Err("target form must not be empty".into());
        }
        self.target_form = self.target_form.to_lowercase();
        Ok(())
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_subcommand<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                _ => {
                    let _ = e.print();
                    EXIT_USAGE
                }
            };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e);
            let mut source = e.source();
            while let Some(s) = source {
                eprintln!("  caused by: {}", s);
                source = s.source();
            }
            EXIT_FAILURE
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Annotate(a) => {
            let endpoint = a.endpoint.as_deref().map(Endpoint::parse).unwrap_or_else(Endpoint::from_env);
            annotate_stage(&a.input, &a.out, &a.model, &endpoint)
        }
        Command::Reannotate(a) => reannotate_stage(&a.input, &a.out, a.report.as_deref(), a.show),
        Command::Stats(a) => stats_stage(&a.input, &a.json),
        Command::Lexicon(LexiconCommand::Export { input, out }) => export_stage(&input, &out),
        Command::Lexicon(LexiconCommand::Concat { input, n, out }) => {
            for n in n {
                let rows = lexicon::concat_first_n(&input, n, &lexicon::grouped_training_path(&out, n))?;
                println!("{}.txt: {} rows", n, rows);
            }
            Ok(())
        }
        Command::Lexicon(LexiconCommand::Build { input, out }) => {
            let training = TrainingFile::read(&input)?;
            let lex = build_lexicon_with(&training, &OpenClass::default())?;
            lex.write(&out)?;
            println!("{} forms, {} rows", lex.entries.len(), lex.total_count());
            Ok(())
        }
        Command::Train(a) => {
            let training = TrainingFile::read(&a.training)?;
            let lex = Lexicon::read(&a.lexicon, &a.params.open_class()?)?;
            let model = tagger::train(&training, &lex, &a.params.apply(TrainParams::default()))?;
            tagger::save_model(&model, &a.out)?;
            println!(
                "{} tags, {} lexical entries, {} tree nodes",
                model.tagset.len() - 1,
                model.lexical.len(),
                model.context.node_count()
            );
            Ok(())
        }
        Command::Tag(a) => {
            let model = tagger::load_model(&a.model)?;
            let tagger = Tagger::with_options(&model, DecodeOptions { beam: a.beam });
            let rows = tagger::tag_file(&tagger, &a.input, &a.out)?;
            println!("{} tokens tagged", rows);
            Ok(())
        }
        Command::Eval(a) => {
            let gold = TrainingFile::read(&a.gold)?;
            let pred = TrainingFile::read(&a.pred)?;
            let report = eval::evaluate(&gold, &pred, &a.target)?;
            let table = eval::comparison_table(&[(a.name, report)]);
            print!("{}", table.text);
            if let Some(path) = a.tsv {
                write_atomic(&path, table.tsv.as_bytes())?;
            }
            Ok(())
        }
        Command::Experiment(a) => {
            let layout = ExperimentLayout {
                grouped_dir: a.grouped.clone().unwrap_or_else(|| a.out.join("grouped")),
                models_dir: a.models.clone().unwrap_or_else(|| a.out.join("models")),
            };
            let params = ExperimentParams {
                train: a.params.apply(TrainParams::default()),
                open_class: a.params.open_class()?,
                target_form: a.target.to_lowercase(),
            };
            experiment_stage(&a.tokens, &a.wpr_test, &a.cst_test, &a.sizes, &params, &layout, &a.out)
        }
        Command::Pipeline(a) => {
            let mut config = PipelineConfig::default();
            if let Some(path) = &a.config {
                let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
                let base = path.parent().unwrap_or(Path::new("."));
                config.apply_config_text(&text, base)?;
            }
            config.apply_flags(&a);
            config.validate()?;
            run_pipeline(&config)
        }
    }
}

pub fn annotate_stage(input: &Path, out: &Path, model: &str, endpoint: &Endpoint) -> Result<()> {
    let template = AnnotateRequest { model: model.to_owned(), ..Default::default() };
    let summary = annotate::annotate_directory(input, out, &template, endpoint)?;
    println!(
        "annotated {} files, skipped {}, failed {}",
        summary.files_done,
        summary.files_skipped,
        summary.files_failed.len()
    );
    for (name, err) in &summary.files_failed {
        eprintln!("  {}: {}", name, err);
    }
    if summary.files_failed.is_empty() {
        Ok(())
    } else {
        Err(format!("{} files failed to annotate", summary.files_failed.len()).into())
    }
}

pub fn reannotate_stage(input: &Path, out: &Path, report: Option<&Path>, show: Option<usize>) -> Result<()> {
    let corpus = load_corpus(input, "*.conllu")?;
    let result = reannotate_corpus(&corpus);
    write_corpus(&result.corpus, out)?;
    if let Some(path) = report {
        write_atomic(path, edits_tsv(&result.outcomes).as_bytes())?;
    }
    if let Some(limit) = show {
        print!("{}", display_outcomes(&result.outcomes, limit));
    }
    println!(
        "{} documents, {} edits ({} WPR sentences, {} CST sentences)",
        result.corpus.documents.len(),
        result.edit_count(),
        result.wpr().len(),
        result.cst().len()
    );
    Ok(())
}

pub fn stats_json(input: &Path) -> Result<String> {
    let corpus = load_corpus(input, "*.conllu")?;
    let result = reannotate_corpus(&corpus);
    let stats = compute_stats(&corpus, &result.outcomes);
    let mut json = serde_json::to_string_pretty(&stats)?;
    json.push('\n');
    Ok(json)
}

pub fn stats_stage(input: &Path, json_out: &str) -> Result<()> {
    let json = stats_json(input)?;
    if json_out == "-" {
        std::io::stdout().write_all(json.as_bytes())?;
    } else {
        write_atomic(Path::new(json_out), json.as_bytes())?;
    }
    Ok(())
}

pub fn export_stage(input: &Path, out: &Path) -> Result<()> {
    let corpus = load_corpus(input, "*.conllu")?;
    let n = lexicon::export_token_per_row(&corpus, out)?;
    println!("{} token-per-row files written", n);
    Ok(())
}

pub fn experiment_stage(
    tokens: &Path,
    wpr_test: &Path,
    cst_test: &Path,
    sizes: &[usize],
    params: &ExperimentParams,
    layout: &ExperimentLayout,
    reports: &Path,
) -> Result<()> {
    let result = eval::run_scaling_experiment(tokens, wpr_test, cst_test, sizes, params, layout)?;
    let files = eval::emit_plots(&result, reports)?;
    for p in &result.points {
        println!(
            "n={:<4} tokens={:<7} WPR recall={} tp={}  CST recall={} tp={}",
            p.n_files,
            p.tokens_trained,
            eval::fmt_metric(p.wpr.recall),
            p.wpr.tp,
            eval::fmt_metric(p.cst.recall),
            p.cst.tp
        );
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

/// annotate → reannotate → lexicon export → experiment.
pub fn run_pipeline(config: &PipelineConfig) -> Result<()> {
    annotate_stage(&config.raw_dir, &config.annotated_dir, &config.model_name, &Endpoint::parse(&config.endpoint))?;
    reannotate_stage(
        &config.annotated_dir,
        &config.reannotated_dir,
        Some(&config.reports_dir.join("edits.tsv")),
        None,
    )?;
    stats_stage(&config.annotated_dir, &config.reports_dir.join("stats.json").to_string_lossy())?;
    export_stage(&config.reannotated_dir, &config.token_dir)?;
    let params = ExperimentParams { target_form: config.target_form.clone(), ..Default::default() };
    let layout = ExperimentLayout { grouped_dir: config.grouped_dir.clone(), models_dir: config.models_dir.clone() };
    experiment_stage(
        &config.token_dir,
        &config.wpr_test,
        &config.cst_test,
        &config.size_ladder,
        &params,
        &layout,
        &config.reports_dir,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_precedence() {
        let mut c = PipelineConfig::default();
        c.apply_config_text("sizes = [2, 5]\ntarget = \"THAT\"\nreports_dir = \"out\"\n", Path::new("/base")).unwrap();
        assert_eq!(c.size_ladder, vec![2, 5]);
        assert_eq!(c.reports_dir, PathBuf::from("/base/out"));
        let flags = Cli::try_parse_from(["thattag", "pipeline", "--sizes", "3,4,9"]).unwrap();
        if let Command::Pipeline(a) = flags.command {
            c.apply_flags(&a);
        }
        c.validate().unwrap();
        assert_eq!(c.size_ladder, vec![3, 4, 9]);
        assert_eq!(c.target_form, "that");
    }

    #[test]
    fn config_rejects_bad_values() {
        let mut c = PipelineConfig::default();
        assert!(c.apply_config_text("colour = \"red\"\n", Path::new(".")).is_err());
        assert!(c.apply_config_text("sizes = [3, -1]\n", Path::new(".")).is_err());
        c.size_ladder = vec![5, 2];
        assert!(c.validate().is_err());
        c.size_ladder = vec![2, 5];
        c.target_form = " ".into();
        assert!(c.validate().is_err());
    }

    #[test]
    fn field_names_are_accepted_as_keys() {
        let mut c = PipelineConfig::default();
        c.apply_config_text("size_ladder = [1, 3]\nmodel_name = \"m\"\ntarget_form = \"That\"\n", Path::new(".")).unwrap();
        assert_eq!((c.size_ladder.as_slice(), c.model_name.as_str(), c.target_form.as_str()), (&[1, 3][..], "m", "That"));
    }

    #[test]
    fn sizes_as_string() {
        let mut c = PipelineConfig::default();
        c.apply_config_text("sizes = \"10, 30\"\n", Path::new(".")).unwrap();
        assert_eq!(c.size_ladder, vec![10, 30]);
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run_subcommand(["thattag", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run_subcommand(["thattag"]), EXIT_USAGE);
        assert_eq!(run_subcommand(["thattag", "--help"]), EXIT_OK);
    }

    #[test]
    fn stage_failure_exits_2() {
        assert_eq!(run_subcommand(["thattag", "stats", "--in", "/nonexistent/dir"]), EXIT_FAILURE);
    }
}
