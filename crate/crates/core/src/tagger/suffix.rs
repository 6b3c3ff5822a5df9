//! Suffix trie for guessing tags of unknown words.
//!
//! The trie is keyed by the reversed, lowercased word so that each node
//! stands for a suffix. Raw suffix distributions are interpolated with the
//! parent's (shorter suffix) estimate:
//!
//! P(t | s_1..s_i) = (P̂(t | s_1..s_i) + θ · P(t | s_1..s_{i-1})) / (1 + θ)
//!
//! Only rare training forms contribute, as they resemble unknown words more
//! closely than frequent ones.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct SuffixNode {
    /// Interpolated distribution indexed by tag id.
    pub dist: Vec<f64>,
    pub children: BTreeMap<char, SuffixNode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuffixModel {
    pub max_len: usize,
    pub theta: f64,
    pub root: SuffixNode,
}

#[derive(Default)]
struct CountNode {
    counts: BTreeMap<usize, usize>,
    children: BTreeMap<char, CountNode>,
}

/// Standard deviation of the unconditioned tag probabilities (sample
/// variance over the `k` tags with nonzero prior).
pub fn theta_from_prior(prior: &[f64]) -> f64 {
    let probs: Vec<f64> = prior.iter().copied().filter(|&p| p > 0.0).collect();
    let k = probs.len();
    if k < 2 {
        return 0.0;
    }
    let mean = 1.0 / k as f64;
    let var = probs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    var.sqrt()
}

impl SuffixModel {
    /// Builds the trie from (form, tag id) occurrences of rare forms.
    /// `prior` is used for the root when there are no occurrences.
    pub fn build<'a, I>(occurrences: I, prior: &[f64], max_len: usize, theta: f64) -> Self
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut counts = CountNode::default();
        for (form, tag) in occurrences {
            let lower = form.to_lowercase();
            let mut node = &mut counts;
            *node.counts.entry(tag).or_insert(0) += 1;
            for c in lower.chars().rev().take(max_len) {
                node = node.children.entry(c).or_default();
                *node.counts.entry(tag).or_insert(0) += 1;
            }
        }
        let root_dist = if counts.counts.is_empty() {
            prior.to_vec()
        } else {
            relative(&counts.counts, prior.len())
        };
        let children = counts
            .children
            .iter()
            .map(|(c, child)| (*c, smooth(child, &root_dist, theta)))
            .collect();
        SuffixModel { max_len, theta, root: SuffixNode { dist: root_dist, children } }
    }

    /// Distribution at the longest stored suffix of `form`.
    pub fn lookup(&self, form: &str) -> &[f64] {
        let lower = form.to_lowercase();
        let mut node = &self.root;
        for c in lower.chars().rev().take(self.max_len) {
            match node.children.get(&c) {
                Some(child) => node = child,
                None => break,
            }
        }
        &node.dist
    }

    /// Visits every node in pre-order with its suffix (in reading order).
    pub fn for_each_node(&self, mut f: impl FnMut(&str, &SuffixNode)) {
        fn walk(node: &SuffixNode, rev: &mut Vec<char>, f: &mut dyn FnMut(&str, &SuffixNode)) {
            let suffix: String = rev.iter().rev().collect();
            f(&suffix, node);
            for (c, child) in &node.children {
                rev.push(*c);
                walk(child, rev, f);
                rev.pop();
            }
        }
        walk(&self.root, &mut Vec::new(), &mut f);
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.for_each_node(|_, _| n += 1);
        n
    }

    /// Inserts a node for `suffix` (reading order); parents must exist.
    pub(crate) fn insert(&mut self, suffix: &str, dist: Vec<f64>) -> Result<(), String> {
        let mut chars: Vec<char> = suffix.chars().collect();
        if chars.is_empty() {
            self.root.dist = dist;
            return Ok(());
        }
        let last = chars.remove(0);
        let mut node = &mut self.root;
        for c in chars.iter().rev() {
            node = node.children.get_mut(c).ok_or_else(|| format!("suffix {:?} has no parent node", suffix))?;
        }
        node.children.insert(last, SuffixNode { dist, children: BTreeMap::new() });
        Ok(())
    }
}

fn relative(counts: &BTreeMap<usize, usize>, num_tags: usize) -> Vec<f64> {
    let total: usize = counts.values().sum();
    let mut dist = vec![0.0; num_tags];
    for (&t, &c) in counts {
        dist[t] = c as f64 / total as f64;
    }
    dist
}

fn smooth(node: &CountNode, parent: &[f64], theta: f64) -> SuffixNode {
    let raw = relative(&node.counts, parent.len());
    let dist: Vec<f64> = raw.iter().zip(parent).map(|(r, p)| (r + theta * p) / (1.0 + theta)).collect();
    let children = node.children.iter().map(|(c, child)| (*c, smooth(child, &dist, theta))).collect();
    SuffixNode { dist, children }
}
