//! Per-tag precision, recall and F1 restricted to one word form, and the
//! training-size scaling experiment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::io::write_atomic;
use crate::lexicon::{self, build_lexicon_with, LexiconError, OpenClass, TrainingFile};
use crate::reannotate::ThatTag;
use crate::tagger::{self, save_model, train, Tagger, TaggerError, TrainParams};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold and predicted files disagree at row {row}: {message}")]
    Alignment { row: usize, message: String },

    #[error("invalid size ladder: {0}")]
    InvalidSizes(String),

    #[error("size {size}: {source}")]
    Stage {
        size: usize,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },

    #[error(transparent)]
    Lexicon(#[from] LexiconError),

    #[error(transparent)]
    Tagger(#[from] TaggerError),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Confusion counts and derived metrics for one tag. Undefined metrics
/// (zero denominators) are `None` and render as `N/A`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TagScores {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl TagScores {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { None } else { Some(num as f64 / den as f64) };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        TagScores { tp, fp, fn_, precision, recall, f1 }
    }

    /// Whether all three metrics are defined.
    pub fn defined(&self) -> bool {
        self.precision.is_some() && self.recall.is_some()
    }
}

pub fn fmt_metric(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{:.4}", v),
        None => "N/A".to_owned(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub target_form: String,
    pub per_tag: BTreeMap<String, TagScores>,
    /// Rows whose form is the target.
    pub token_count: usize,
    /// Accuracy over all rows, regardless of form.
    pub all_token_accuracy: Option<f64>,
}

impl EvalReport {
    /// Scores for `tag`; all-zero when the tag never occurred.
    pub fn scores(&self, tag: &str) -> TagScores {
        self.per_tag.get(tag).copied().unwrap_or_else(|| TagScores::from_counts(0, 0, 0))
    }
}

/// Compares predicted against gold tags at rows whose lowercased form is
/// `target_form`.
pub fn evaluate(gold: &TrainingFile, predicted: &TrainingFile, target_form: &str) -> Result<EvalReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::Alignment {
            row: gold.len().min(predicted.len()),
            message: format!("gold has {} rows, predicted has {}", gold.len(), predicted.len()),
        });
    }
    let target = target_form.to_lowercase();
    let mut counts: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    let mut token_count = 0;
    let mut correct_all = 0;
    for (row, ((gf, gt), (pf, pt))) in gold.rows.iter().zip(&predicted.rows).enumerate() {
        if gf != pf {
            return Err(EvalError::Alignment { row, message: format!("form {:?} vs {:?}", gf, pf) });
        }
        if gt == pt {
            correct_all += 1;
        }
        if gf.to_lowercase() != target {
            continue;
        }
        token_count += 1;
        if gt == pt {
            counts.entry(gt).or_default().0 += 1;
        } else {
            counts.entry(pt).or_default().1 += 1;
            counts.entry(gt).or_default().2 += 1;
        }
    }
    let per_tag = counts
        .into_iter()
        .map(|(tag, (tp, fp, fn_))| (tag.to_owned(), TagScores::from_counts(tp, fp, fn_)))
        .collect();
    Ok(EvalReport {
        target_form: target,
        per_tag,
        token_count,
        all_token_accuracy: if gold.is_empty() { None } else { Some(correct_all as f64 / gold.len() as f64) },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonTable {
    pub text: String,
    pub tsv: String,
}

/// Renders one block per model with Category / Precision / Recall / F1
/// columns.
pub fn comparison_table(reports: &[(String, EvalReport)]) -> ComparisonTable {
    let mut text = String::new();
    let mut tsv = String::from("model\tcategory\tprecision\trecall\tf1\n");
    for (model, report) in reports {
        let _ = writeln!(text, "{} (target {:?}, {} tokens)", model, report.target_form, report.token_count);
        let _ = writeln!(text, "{:<12}{:>10}{:>10}{:>10}", "Category", "Precision", "Recall", "F1");
        for (tag, s) in &report.per_tag {
            let (p, r, f) = (fmt_metric(s.precision), fmt_metric(s.recall), fmt_metric(s.f1));
            let _ = writeln!(text, "{:<12}{:>10}{:>10}{:>10}", tag, p, r, f);
            let _ = writeln!(tsv, "{}\t{}\t{}\t{}\t{}", model, tag, p, r, f);
        }
        text.push('\n');
    }
    ComparisonTable { text, tsv }
}

/// Tags tracked by the scaling experiment, with the test set each one is
/// scored on.
pub const TRACKED_TAGS: [ThatTag; 2] = [ThatTag::Wpr, ThatTag::Cst];

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub n_files: usize,
    pub files_used: usize,
    pub tokens_trained: usize,
    /// WPR scores on the WPR test set.
    pub wpr: TagScores,
    /// CST scores on the CST test set.
    pub cst: TagScores,
}

impl ScalingPoint {
    pub fn scores(&self, tag: ThatTag) -> TagScores {
        match tag {
            ThatTag::Wpr => self.wpr,
            ThatTag::Cst => self.cst,
        }
    }

    /// Correctly tagged instances of `tag` (its true positives).
    pub fn correct(&self, tag: ThatTag) -> usize {
        self.scores(tag).tp
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalingResult {
    pub points: Vec<ScalingPoint>,
}

/// Where the experiment puts its intermediate files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentLayout {
    /// `<n>.txt` training sets and `lexicon_<n>.txt` lexicons.
    pub grouped_dir: PathBuf,
    /// `model_<n>.ttm` models and tagged test sets.
    pub models_dir: PathBuf,
}

impl ExperimentLayout {
    pub fn under(out_dir: &Path) -> Self {
        ExperimentLayout { grouped_dir: out_dir.join("grouped"), models_dir: out_dir.join("models") }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentParams {
    pub train: TrainParams,
    pub open_class: OpenClass,
    pub target_form: String,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            train: TrainParams::default(),
            open_class: OpenClass::default(),
            target_form: crate::reannotate::TARGET_FORM.to_owned(),
        }
    }
}

pub fn validate_sizes(sizes: &[usize]) -> Result<(), EvalError> {
    if sizes.is_empty() {
        return Err(EvalError::InvalidSizes("no sizes given".to_owned()));
    }
    if sizes.contains(&0) {
        return Err(EvalError::InvalidSizes("sizes must be at least 1".to_owned()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::InvalidSizes("sizes must be strictly increasing".to_owned()));
    }
    Ok(())
}

fn stage<E: std::error::Error + Send + Sync + 'static>(size: usize) -> impl FnOnce(E) -> EvalError {
    move |e| EvalError::Stage { size, source: Box::new(e) }
}

/// For each size n: concatenate the first n token files, build a lexicon,
/// train, tag both test sets and score WPR and CST on them.
pub fn run_scaling_experiment(
    token_dir: &Path,
    wpr_test: &Path,
    cst_test: &Path,
    sizes: &[usize],
    params: &ExperimentParams,
    layout: &ExperimentLayout,
) -> Result<ScalingResult, EvalError> {
    validate_sizes(sizes)?;
    let wpr_gold = TrainingFile::read(wpr_test)?;
    let cst_gold = TrainingFile::read(cst_test)?;
    let available = crate::conllu::list_files(token_dir, "*.txt")
        .map_err(|e| EvalError::InvalidSizes(e.to_string()))?
        .len();
    for dir in [&layout.grouped_dir, &layout.models_dir] {
        fs::create_dir_all(dir).map_err(|source| EvalError::Io { path: dir.clone(), source })?;
    }

    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let training_path = lexicon::grouped_training_path(&layout.grouped_dir, n);
        let tokens_trained = lexicon::concat_first_n(token_dir, n, &training_path).map_err(stage(n))?;
        let training = TrainingFile::read(&training_path).map_err(stage(n))?;
        let lex = build_lexicon_with(&training, &params.open_class).map_err(stage(n))?;
        lex.write(&lexicon::grouped_lexicon_path(&layout.grouped_dir, n)).map_err(stage(n))?;
        let model = train(&training, &lex, &params.train).map_err(stage(n))?;
        save_model(&model, &layout.models_dir.join(format!("model_{}.ttm", n))).map_err(stage(n))?;

        let tagger = Tagger::new(&model);
        let score = |gold: &TrainingFile, name: &str, tag: ThatTag| -> Result<TagScores, EvalError> {
            let predicted = tag_like(&tagger, gold);
            predicted
                .write(&layout.models_dir.join(format!("{}_{}.txt", name, n)))
                .map_err(stage(n))?;
            let report = evaluate(gold, &predicted, &params.target_form).map_err(stage(n))?;
            Ok(report.scores(tag.as_str()))
        };
        let wpr = score(&wpr_gold, "pred_wpr", ThatTag::Wpr)?;
        let cst = score(&cst_gold, "pred_cst", ThatTag::Cst)?;
        log::info!("size {}: {} tokens, WPR recall {}, CST tp {}", n, tokens_trained, fmt_metric(wpr.recall), cst.tp);
        points.push(ScalingPoint { n_files: n, files_used: n.min(available), tokens_trained, wpr, cst });
    }
    Ok(ScalingResult { points })
}

/// Tags the forms of `gold`, keeping its sentence boundaries.
pub fn tag_like(tagger: &Tagger<'_>, gold: &TrainingFile) -> TrainingFile {
    TrainingFile::from_sentences(gold.sentences().map(|s| {
        let forms: Vec<&str> = s.iter().map(|(f, _)| f.as_str()).collect();
        let tags = tagger.tag(&forms);
        forms.into_iter().map(str::to_owned).zip(tags).collect::<Vec<_>>()
    }))
}

/// `scaling.csv`: one row per (size, tracked tag).
pub fn scaling_csv(result: &ScalingResult) -> String {
    let mut out = String::from("n_files,tag,tp,fp,fn,precision,recall,f1\n");
    for p in &result.points {
        for tag in TRACKED_TAGS {
            let s = p.scores(tag);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                p.n_files,
                tag,
                s.tp,
                s.fp,
                s.fn_,
                fmt_metric(s.precision),
                fmt_metric(s.recall),
                fmt_metric(s.f1)
            );
        }
    }
    out
}

/// Writes `scaling.csv`, `wpr.svg`, `cst.svg` and `cross.svg` into
/// `out_dir` and returns their paths.
pub fn emit_plots(result: &ScalingResult, out_dir: &Path) -> Result<Vec<PathBuf>, EvalError> {
    if result.points.is_empty() {
        return Err(EvalError::InvalidSizes("no points to plot".to_owned()));
    }
    let recall = |tag: ThatTag| -> Vec<(f64, f64)> {
        result
            .points
            .iter()
            .filter_map(|p| p.scores(tag).recall.map(|r| (p.n_files as f64, r)))
            .collect()
    };
    let correct: Vec<(f64, f64)> = result
        .points
        .iter()
        .map(|p| (p.n_files as f64, p.correct(ThatTag::Cst) as f64))
        .collect();

    let files = [
        ("scaling.csv", scaling_csv(result)),
        (
            "wpr.svg",
            LineChart {
                title: "WPR recall by training size",
                x_label: "n_files",
                y_label: "recall (WPR)",
                y_max: Some(1.0),
                series: vec![Series { name: "WPR", color: "#1f77b4", points: recall(ThatTag::Wpr) }],
            }
            .render(),
        ),
        (
            "cst.svg",
            LineChart {
                title: "CST correct instances by training size",
                x_label: "n_files",
                y_label: "correct instances (CST tp)",
                y_max: None,
                series: vec![Series { name: "CST", color: "#d62728", points: correct }],
            }
            .render(),
        ),
        (
            "cross.svg",
            LineChart {
                title: "WPR vs CST recall by training size",
                x_label: "n_files",
                y_label: "recall",
                y_max: Some(1.0),
                series: vec![
                    Series { name: "WPR", color: "#1f77b4", points: recall(ThatTag::Wpr) },
                    Series { name: "CST", color: "#d62728", points: recall(ThatTag::Cst) },
                ],
            }
            .render(),
        ),
    ];
    let mut paths = Vec::new();
    for (name, contents) in files {
        let path = out_dir.join(name);
        write_atomic(&path, contents.as_bytes()).map_err(|source| EvalError::Io { path: path.clone(), source })?;
        paths.push(path);
    }
    Ok(paths)
}

struct Series<'a> {
    name: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
}

struct LineChart<'a> {
    title: &'a str,
    x_label: &'a str,
    y_label: &'a str,
    /// Fixed upper bound of the y axis; otherwise derived from the data.
    y_max: Option<f64>,
    series: Vec<Series<'a>>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{:.2}", v)
    }
}

impl LineChart<'_> {
    fn render(&self) -> String {
        let xs: BTreeSet<u64> = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0.to_bits())).collect();
        let xs: Vec<f64> = {
            let mut v: Vec<f64> = xs.into_iter().map(f64::from_bits).collect();
            v.sort_by(|a, b| a.total_cmp(b));
            v
        };
        let (x_min, x_max) = match (xs.first(), xs.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 1.0),
        };
        let data_max = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).fold(0.0, f64::max);
        let y_max = self.y_max.unwrap_or(if data_max > 0.0 { (data_max * 1.1).ceil() } else { 1.0 });

        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| {
            if x_max > x_min {
                LEFT + (x - x_min) / (x_max - x_min) * plot_w
            } else {
                LEFT + plot_w / 2.0
            }
        };
        let sy = |y: f64| TOP + plot_h - (y / y_max) * plot_h;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(self.title)
        );
        // axes
        let _ = writeln!(
            out,
            r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/>"#,
            l = LEFT,
            r = LEFT + plot_w,
            t = TOP,
            b = TOP + plot_h
        );
        for &x in &xs {
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}" stroke="black"/><text x="{x:.2}" y="{ty}" text-anchor="middle">{label}</text>"#,
                x = sx(x),
                b = TOP + plot_h,
                b2 = TOP + plot_h + 5.0,
                ty = TOP + plot_h + 18.0,
                label = tick_label(x)
            );
        }
        for i in 0..=5 {
            let v = y_max * i as f64 / 5.0;
            let _ = writeln!(
                out,
                r##"<line x1="{l2}" y1="{y:.2}" x2="{r}" y2="{y:.2}" stroke="#dddddd"/><text x="{tx}" y="{ty:.2}" text-anchor="end">{label}</text>"##,
                l2 = LEFT,
                r = LEFT + plot_w,
                y = sy(v),
                tx = LEFT - 6.0,
                ty = sy(v) + 4.0,
                label = tick_label(v)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">{}</text>"#,
            escape(self.y_label),
            y = TOP + plot_h / 2.0
        );

        for (i, s) in self.series.iter().enumerate() {
            if s.points.len() > 1 {
                let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
                    s.color,
                    path.join(" ")
                );
            }
            for &(x, y) in &s.points {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#, sx(x), sy(y), s.color);
            }
            let ly = TOP + 10.0 + 20.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="12" height="12" fill="{}"/><text x="{}" y="{}">{}</text>"#,
                LEFT + plot_w + 15.0,
                ly - 10.0,
                s.color,
                LEFT + plot_w + 32.0,
                ly,
                escape(s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Tags `input` with the model at `model_path` and scores it against
/// `gold`. Convenience for evaluating one trained model on one test set.
pub fn evaluate_model(model_path: &Path, gold_path: &Path, target_form: &str) -> Result<EvalReport, EvalError> {
    let model = tagger::load_model(model_path)?;
    let gold = TrainingFile::read(gold_path)?;
    let predicted = tag_like(&Tagger::new(&model), &gold);
    evaluate(&gold, &predicted, target_form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(rows: &[(&str, &str)]) -> TrainingFile {
        TrainingFile::from_sentences([rows.iter().map(|(f, t)| (f.to_string(), t.to_string())).collect::<Vec<_>>()])
    }

    #[test]
    fn identity_is_perfect() {
        let gold = tf(&[("that", "WPR"), ("x", "NN"), ("That", "CST"), ("that", "DT")]);
        let r = evaluate(&gold, &gold, "that").unwrap();
        assert_eq!(r.token_count, 3);
        for s in r.per_tag.values() {
            assert_eq!((s.precision, s.recall, s.f1), (Some(1.0), Some(1.0), Some(1.0)));
        }
        assert_eq!(r.all_token_accuracy, Some(1.0));
    }

    #[test]
    fn hand_counted_dt() {
        // gold DT x10; predicted 6 DT + 4 IN: tp=6 fp=0 fn=4
        let gold = tf(&[("that", "DT"); 10]);
        let mut rows = vec![("that", "DT"); 6];
        rows.extend([("that", "IN"); 4]);
        let r = evaluate(&gold, &tf(&rows), "that").unwrap();
        let dt = r.per_tag["DT"];
        assert_eq!((dt.tp, dt.fp, dt.fn_), (6, 0, 4));
        assert_eq!(dt.precision, Some(1.0));
        assert_eq!(dt.recall, Some(0.6));
        assert!((dt.f1.unwrap() - 0.75).abs() < 1e-12);
        // IN was predicted but never gold: precision 0, recall undefined
        let inn = r.per_tag["IN"];
        assert_eq!(inn.precision, Some(0.0));
        assert_eq!(inn.recall, None);
        assert_eq!(inn.f1, None);
    }

    #[test]
    fn unpredicted_tag_has_na_precision() {
        let gold = tf(&[("that", "WPR"), ("that", "WPR")]);
        let pred = tf(&[("that", "CST"), ("that", "CST")]);
        let r = evaluate(&gold, &pred, "that").unwrap();
        let wpr = r.per_tag["WPR"];
        assert_eq!(wpr.precision, None);
        assert_eq!(wpr.recall, Some(0.0));
        let table = comparison_table(&[("m".into(), r)]);
        assert!(table.tsv.contains("m\tWPR\tN/A\t0.0000\tN/A\n"));
        assert!(table.text.contains("N/A"));
    }

    #[test]
    fn misaligned_forms() {
        let gold = tf(&[("a", "X"), ("b", "X")]);
        let pred = tf(&[("a", "X"), ("c", "X")]);
        assert!(matches!(evaluate(&gold, &pred, "that"), Err(EvalError::Alignment { row: 1, .. })));
        assert!(matches!(evaluate(&gold, &tf(&[("a", "X")]), "that"), Err(EvalError::Alignment { .. })));
    }

    #[test]
    fn table_groups_by_model() {
        let gold = tf(&[("that", "DT")]);
        let r = evaluate(&gold, &gold, "that").unwrap();
        let t = comparison_table(&[("penn".into(), r.clone()), ("bnc".into(), r)]);
        let rows: Vec<&str> = t.tsv.lines().skip(1).collect();
        assert_eq!(rows, ["penn\tDT\t1.0000\t1.0000\t1.0000", "bnc\tDT\t1.0000\t1.0000\t1.0000"]);
    }

    #[test]
    fn sizes_must_increase() {
        assert!(validate_sizes(&[10, 30, 100]).is_ok());
        assert!(validate_sizes(&[10, 10]).is_err());
        assert!(validate_sizes(&[0, 1]).is_err());
        assert!(validate_sizes(&[]).is_err());
    }

    #[test]
    fn single_point_chart() {
        let p = ScalingPoint {
            n_files: 10,
            files_used: 10,
            tokens_trained: 100,
            wpr: TagScores::from_counts(1, 0, 3),
            cst: TagScores::from_counts(5, 1, 0),
        };
        let result = ScalingResult { points: vec![p] };
        let dir = tempfile::tempdir().unwrap();
        let files = emit_plots(&result, dir.path()).unwrap();
        assert_eq!(files.len(), 4);
        let svg = fs::read_to_string(dir.path().join("wpr.svg")).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">n_files<"));
        assert!(svg.contains(">recall (WPR)<"));
        let csv = fs::read_to_string(dir.path().join("scaling.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1 + 2);
        assert!(csv.contains("10,WPR,1,0,3,1.0000,0.2500,0.4000\n"));
    }
}
