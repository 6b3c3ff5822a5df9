//! Text serialization of [`TaggerModel`].
//!
//! ```text
//! TTMODEL v1
//! [TAGSET] <n>            one line per tag: name<TAB>prior (boundary first)
//! [OPEN] <n>              one open-class tag per line
//! [LEXICAL] <n>           form<TAB>tag=p<TAB>tag=p...
//! [SUFFIX] <max_len> <theta> <n>
//!                         ^suffix<TAB>p_1<TAB>...  (pre-order, real tags only)
//! [TREE] <n>              pre-order; "S<TAB>prev|prev2<TAB>tag" or "L<TAB>p_1..."
//! [END]
//! ```
//!
//! Probabilities are written with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::suffix::{SuffixModel, SuffixNode};
use super::tree::{ContextTree, Node, Position, Test};
use super::{TagId, TaggerError, TaggerModel, TagsetInfo, BOUNDARY};
use crate::io::write_atomic;

pub const FORMAT_VERSION: &str = "v1";
pub const HEADER: &str = "TTMODEL v1";

fn num(x: f64) -> String {
    format!("{:.16e}", x)
}

fn write_dense(out: &mut String, dist: &[f64]) {
    for p in &dist[1..] {
        out.push('\t');
        out.push_str(&num(*p));
    }
}

pub fn to_text(model: &TaggerModel) -> String {
    let ts = &model.tagset;
    let mut out = String::new();
    let _ = writeln!(out, "TTMODEL {}", model.format_version);

    let _ = writeln!(out, "[TAGSET] {}", ts.len());
    for (id, tag) in ts.tags().iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", tag, num(model.priors[id]));
    }

    let _ = writeln!(out, "[OPEN] {}", model.open_class.len());
    for &t in &model.open_class {
        let _ = writeln!(out, "{}", ts.name(t));
    }

    let _ = writeln!(out, "[LEXICAL] {}", model.lexical.len());
    for (form, dist) in &model.lexical {
        out.push_str(form);
        for (t, p) in dist {
            let _ = write!(out, "\t{}={}", ts.name(*t), num(*p));
        }
        out.push('\n');
    }

    let s = &model.suffix;
    let _ = writeln!(out, "[SUFFIX] {} {} {}", s.max_len, num(s.theta), s.node_count());
    s.for_each_node(|suffix, node| {
        out.push('^');
        out.push_str(suffix);
        write_dense(&mut out, &node.dist);
        out.push('\n');
    });

    let _ = writeln!(out, "[TREE] {}", model.context.node_count());
    fn tree(node: &Node, ts: &TagsetInfo, out: &mut String) {
        match node {
            Node::Split { test, yes, no } => {
                let _ = writeln!(out, "S\t{}\t{}", test.position.as_str(), ts.name(test.tag));
                tree(yes, ts, out);
                tree(no, ts, out);
            }
            Node::Leaf { dist } => {
                out.push('L');
                write_dense(out, dist);
                out.push('\n');
            }
        }
    }
    tree(&model.context.root, ts, &mut out);
    out.push_str("[END]\n");
    out
}

pub fn save_model(model: &TaggerModel, path: &Path) -> Result<(), TaggerError> {
    write_atomic(path, to_text(model).as_bytes()).map_err(|source| TaggerError::Io { path: path.to_owned(), source })
}

pub fn load_model(path: &Path) -> Result<TaggerModel, TaggerError> {
    let text = fs::read_to_string(path).map_err(|source| TaggerError::Io { path: path.to_owned(), source })?;
    from_text(&text)
}

struct Lines<'a> {
    text: &'a str,
    offset: usize,
}

impl<'a> Lines<'a> {
    fn corrupt(&self, offset: usize, message: impl Into<String>) -> TaggerError {
        TaggerError::CorruptModel { offset, message: message.into() }
    }

    /// Next line and the byte offset it starts at. A missing line or a line
    /// without its terminating newline means the file was cut short.
    fn next(&mut self) -> Result<(usize, &'a str), TaggerError> {
        let start = self.offset;
        let rest = &self.text[start..];
        match rest.find('\n') {
            Some(end) => {
                self.offset = start + end + 1;
                Ok((start, &rest[..end]))
            }
            None => Err(self.corrupt(self.text.len(), "unexpected end of file")),
        }
    }

    fn section(&mut self, name: &str) -> Result<(usize, Vec<&'a str>), TaggerError> {
        let (at, line) = self.next()?;
        let mut parts = line.split(' ');
        if parts.next() != Some(name) {
            return Err(self.corrupt(at, format!("expected section {}", name)));
        }
        Ok((at, parts.collect()))
    }
}

fn parse_f64(lines: &Lines, at: usize, s: &str) -> Result<f64, TaggerError> {
    s.parse::<f64>().map_err(|_| lines.corrupt(at, format!("bad number {:?}", s)))
}

fn parse_count(lines: &Lines, at: usize, s: Option<&&str>) -> Result<usize, TaggerError> {
    s.and_then(|s| s.parse().ok()).ok_or_else(|| lines.corrupt(at, "bad section count"))
}

fn parse_dense(lines: &Lines, at: usize, fields: &[&str], k: usize) -> Result<Vec<f64>, TaggerError> {
    if fields.len() != k - 1 {
        return Err(lines.corrupt(at, format!("expected {} probabilities, found {}", k - 1, fields.len())));
    }
    let mut dist = vec![0.0; k];
    for (i, f) in fields.iter().enumerate() {
        dist[i + 1] = parse_f64(lines, at, f)?;
    }
    Ok(dist)
}

pub fn from_text(text: &str) -> Result<TaggerModel, TaggerError> {
    let mut lines = Lines { text, offset: 0 };

    let (_, header) = lines.next()?;
    let version = header
        .strip_prefix("TTMODEL ")
        .ok_or_else(|| lines.corrupt(0, "missing TTMODEL header"))?;
    if version != FORMAT_VERSION {
        return Err(TaggerError::VersionMismatch { expected: FORMAT_VERSION.to_owned(), found: version.to_owned() });
    }

    let (at, args) = lines.section("[TAGSET]")?;
    let k = parse_count(&lines, at, args.first())?;
    if k == 0 {
        return Err(lines.corrupt(at, "empty tagset"));
    }
    let mut tags = Vec::with_capacity(k);
    let mut priors = Vec::with_capacity(k);
    for _ in 0..k {
        let (at, line) = lines.next()?;
        let (tag, prior) = line.split_once('\t').ok_or_else(|| lines.corrupt(at, "expected tag<TAB>prior"))?;
        if tags.is_empty() && tag != BOUNDARY {
            return Err(lines.corrupt(at, "first tag must be the boundary tag"));
        }
        if tags.iter().any(|t| t == tag) {
            return Err(lines.corrupt(at, format!("duplicate tag {:?}", tag)));
        }
        tags.push(tag.to_owned());
        priors.push(parse_f64(&lines, at, prior)?);
    }
    let tagset = TagsetInfo::from_ordered(tags);
    let tag_id = |lines: &Lines, at: usize, name: &str| -> Result<TagId, TaggerError> {
        match tagset.id(name) {
            Some(id) if id != 0 => Ok(id),
            _ => Err(lines.corrupt(at, format!("unknown tag {:?}", name))),
        }
    };

    let (at, args) = lines.section("[OPEN]")?;
    let n = parse_count(&lines, at, args.first())?;
    let mut open_class = Vec::with_capacity(n);
    for _ in 0..n {
        let (at, line) = lines.next()?;
        open_class.push(tag_id(&lines, at, line)?);
    }

    let (at, args) = lines.section("[LEXICAL]")?;
    let n = parse_count(&lines, at, args.first())?;
    let mut lexical = BTreeMap::new();
    for _ in 0..n {
        let (at, line) = lines.next()?;
        let mut fields = line.split('\t');
        let form = fields.next().filter(|f| !f.is_empty()).ok_or_else(|| lines.corrupt(at, "empty form"))?;
        let mut dist = Vec::new();
        for field in fields {
            let (tag, p) = field.rsplit_once('=').ok_or_else(|| lines.corrupt(at, "expected tag=probability"))?;
            dist.push((tag_id(&lines, at, tag)?, parse_f64(&lines, at, p)?));
        }
        if dist.is_empty() {
            return Err(lines.corrupt(at, "lexical entry without tags"));
        }
        lexical.insert(form.to_owned(), dist);
    }

    let (at, args) = lines.section("[SUFFIX]")?;
    if args.len() != 3 {
        return Err(lines.corrupt(at, "expected max_len theta count"));
    }
    let max_len = parse_count(&lines, at, args.first())?;
    let theta = parse_f64(&lines, at, args[1])?;
    let n = parse_count(&lines, at, args.get(2))?;
    let mut suffix = SuffixModel {
        max_len,
        theta,
        root: SuffixNode { dist: vec![0.0; k], children: BTreeMap::new() },
    };
    for i in 0..n {
        let (at, line) = lines.next()?;
        let mut fields: Vec<&str> = line.split('\t').collect();
        let key = fields.remove(0);
        let suffix_str = key.strip_prefix('^').ok_or_else(|| lines.corrupt(at, "suffix entry must start with ^"))?;
        if (i == 0) != suffix_str.is_empty() {
            return Err(lines.corrupt(at, "suffix root must come first"));
        }
        let dist = parse_dense(&lines, at, &fields, k)?;
        suffix.insert(suffix_str, dist).map_err(|m| lines.corrupt(at, m))?;
    }
    if n == 0 {
        return Err(lines.corrupt(lines.offset, "suffix trie without root"));
    }

    let (at, args) = lines.section("[TREE]")?;
    let n = parse_count(&lines, at, args.first())?;
    let mut remaining = n;
    fn read_node(lines: &mut Lines, remaining: &mut usize, k: usize, tagset: &TagsetInfo) -> Result<Node, TaggerError> {
        if *remaining == 0 {
            return Err(lines.corrupt(lines.offset, "tree has fewer nodes than declared"));
        }
        *remaining -= 1;
        let (at, line) = lines.next()?;
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "S" if fields.len() == 3 => {
                let position = Position::parse(fields[1]).ok_or_else(|| lines.corrupt(at, "bad test position"))?;
                let tag = tagset.id(fields[2]).ok_or_else(|| lines.corrupt(at, format!("unknown tag {:?}", fields[2])))?;
                let yes = read_node(lines, remaining, k, tagset)?;
                let no = read_node(lines, remaining, k, tagset)?;
                Ok(Node::Split { test: Test { position, tag }, yes: Box::new(yes), no: Box::new(no) })
            }
            "L" => Ok(Node::Leaf { dist: parse_dense(lines, at, &fields[1..], k)? }),
            _ => Err(lines.corrupt(at, "expected tree node")),
        }
    }
    let root = read_node(&mut lines, &mut remaining, k, &tagset)?;
    if remaining != 0 {
        return Err(lines.corrupt(lines.offset, "tree has more nodes than declared"));
    }

    let (at, end) = lines.next()?;
    if end != "[END]" {
        return Err(lines.corrupt(at, "expected [END]"));
    }

    Ok(TaggerModel {
        tagset,
        priors,
        lexical,
        context: ContextTree { root },
        suffix,
        open_class,
        format_version: version.to_owned(),
    })
}
