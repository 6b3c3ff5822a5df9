//! Binary decision tree estimating p(tag | previous two tags).
//!
//! Internal nodes ask whether the tag at one of the two history positions
//! equals a given tag. Trees are grown top-down by information gain over
//! trigram samples and leaves hold smoothed tag distributions.

use std::collections::BTreeSet;

use super::TagId;

/// History position tested by a node. Ordering is used for tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    /// t_{i-1}
    Previous,
    /// t_{i-2}
    Previous2,
}

impl Position {
    pub fn as_str(self) -> &'static str {
        match self {
            Position::Previous => "prev",
            Position::Previous2 => "prev2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "prev" => Some(Position::Previous),
            "prev2" => Some(Position::Previous2),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Test {
    pub position: Position,
    pub tag: TagId,
}

impl Test {
    pub fn holds(&self, prev2: TagId, prev: TagId) -> bool {
        match self.position {
            Position::Previous => prev == self.tag,
            Position::Previous2 => prev2 == self.tag,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Split { test: Test, yes: Box<Node>, no: Box<Node> },
    /// Distribution indexed by tag id; the boundary entry is always zero.
    Leaf { dist: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContextTree {
    pub root: Node,
}

/// One training event: the tag `tag` observed after history (prev2, prev).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trigram {
    pub prev2: TagId,
    pub prev: TagId,
    pub tag: TagId,
}

#[derive(Clone, Copy, Debug)]
pub struct GrowParams {
    pub min_samples: usize,
    pub min_gain: f64,
    pub add_lambda: f64,
}

impl ContextTree {
    /// Leaf distribution for the history (prev2, prev).
    pub fn lookup(&self, prev2: TagId, prev: TagId) -> &[f64] {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { dist } => return dist,
                Node::Split { test, yes, no } => {
                    node = if test.holds(prev2, prev) { yes } else { no };
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<&[f64]> {
        fn walk<'a>(node: &'a Node, out: &mut Vec<&'a [f64]>) {
            match node {
                Node::Leaf { dist } => out.push(dist),
                Node::Split { yes, no, .. } => {
                    walk(yes, out);
                    walk(no, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        fn count(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 1,
                Node::Split { yes, no, .. } => 1 + count(yes) + count(no),
            }
        }
        count(&self.root)
    }

    /// Every root-to-leaf path as the list of tests it passes through.
    pub fn paths(&self) -> Vec<Vec<Test>> {
        fn walk(node: &Node, path: &mut Vec<Test>, out: &mut Vec<Vec<Test>>) {
            match node {
                Node::Leaf { .. } => out.push(path.clone()),
                Node::Split { test, yes, no } => {
                    path.push(*test);
                    walk(yes, path, out);
                    walk(no, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// Grows a tree over `samples`. `prior` is the global tag distribution
    /// (indexed by tag id) that leaf estimates are smoothed towards.
    pub fn grow(samples: &[Trigram], prior: &[f64], params: GrowParams) -> Self {
        let indices: Vec<usize> = (0..samples.len()).collect();
        let mut used = BTreeSet::new();
        let root = grow_node(samples, &indices, prior, params, &mut used);
        ContextTree { root }
    }
}

fn entropy(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn tag_counts(samples: &[Trigram], indices: &[usize], num_tags: usize) -> Vec<usize> {
    let mut counts = vec![0; num_tags];
    for &i in indices {
        counts[samples[i].tag] += 1;
    }
    counts
}

/// add-λ smoothing against `prior`: (c(t) + λ·K·prior(t)) / (n + λ·K) where
/// K is the number of tags with nonzero prior.
pub(crate) fn smoothed_leaf(counts: &[usize], prior: &[f64], add_lambda: f64) -> Vec<f64> {
    let k = prior.iter().filter(|&&p| p > 0.0).count() as f64;
    let n: usize = counts.iter().sum();
    let mass = add_lambda * k;
    let denom = n as f64 + mass;
    if denom <= 0.0 {
        return prior.to_vec();
    }
    counts.iter().zip(prior).map(|(&c, &p)| (c as f64 + mass * p) / denom).collect()
}

fn grow_node(
    samples: &[Trigram],
    indices: &[usize],
    prior: &[f64],
    params: GrowParams,
    used: &mut BTreeSet<Test>,
) -> Node {
    let num_tags = prior.len();
    let counts = tag_counts(samples, indices, num_tags);
    let leaf = || Node::Leaf { dist: smoothed_leaf(&counts, prior, params.add_lambda) };

    if indices.len() < params.min_samples || indices.len() < 2 || !params.min_gain.is_finite() {
        return leaf();
    }
    let parent_entropy = entropy(&counts, indices.len());
    if parent_entropy == 0.0 {
        return leaf();
    }

    // Candidate tests in ascending (position, tag) order; strict comparison
    // keeps the lowest pair on ties.
    let mut candidates = BTreeSet::new();
    for &i in indices {
        let s = samples[i];
        candidates.insert(Test { position: Position::Previous, tag: s.prev });
        candidates.insert(Test { position: Position::Previous2, tag: s.prev2 });
    }

    let n = indices.len() as f64;
    let mut best: Option<(Test, f64)> = None;
    for test in candidates {
        if used.contains(&test) {
            continue;
        }
        let mut yes = vec![0; num_tags];
        let mut yes_n = 0;
        for &i in indices {
            let s = samples[i];
            if test.holds(s.prev2, s.prev) {
                yes[s.tag] += 1;
                yes_n += 1;
            }
        }
        let no_n = indices.len() - yes_n;
        if yes_n == 0 || no_n == 0 {
            continue;
        }
        let no: Vec<usize> = counts.iter().zip(&yes).map(|(c, y)| c - y).collect();
        let gain = parent_entropy
            - (yes_n as f64 / n) * entropy(&yes, yes_n)
            - (no_n as f64 / n) * entropy(&no, no_n);
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((test, gain));
        }
    }

    let (test, gain) = match best {
        Some(b) => b,
        None => return leaf(),
    };
    if gain < params.min_gain {
        return leaf();
    }

    let (yes_idx, no_idx): (Vec<usize>, Vec<usize>) = indices.iter().partition(|&&i| {
        let s = samples[i];
        test.holds(s.prev2, s.prev)
    });
    used.insert(test);
    let yes = grow_node(samples, &yes_idx, prior, params, used);
    let no = grow_node(samples, &no_idx, prior, params, used);
    used.remove(&test);
    Node::Split { test, yes: Box::new(yes), no: Box::new(no) }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARAMS: GrowParams = GrowParams { min_samples: 2, min_gain: 1e-4, add_lambda: 0.1 };

    fn tri(prev2: TagId, prev: TagId, tag: TagId) -> Trigram {
        Trigram { prev2, prev, tag }
    }

    #[test]
    fn entropy_bits() {
        assert_eq!(entropy(&[4, 0], 4), 0.0);
        assert!((entropy(&[2, 2], 4) - 1.0).abs() < 1e-12);
        assert!((entropy(&[1, 1, 1, 1], 4) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn splits_on_informative_previous_tag() {
        // tags: 0 boundary, 1, 2; tag 2 always follows 1, tag 1 follows 2 or ⊥
        let mut samples = Vec::new();
        for _ in 0..20 {
            samples.push(tri(2, 1, 2));
            samples.push(tri(1, 2, 1));
        }
        let prior = [0.0, 0.5, 0.5];
        let tree = ContextTree::grow(&samples, &prior, PARAMS);
        let after_one = tree.lookup(2, 1);
        assert!(after_one[2] > 0.99);
        let after_two = tree.lookup(1, 2);
        assert!(after_two[1] > 0.99);
        match &tree.root {
            Node::Split { test, .. } => {
                // prev=1 and prev=2 (and prev2=1, prev2=2) are equally
                // informative; the lowest pair wins.
                assert_eq!(*test, Test { position: Position::Previous, tag: 1 });
            }
            Node::Leaf { .. } => panic!("expected a split"),
        }
    }

    #[test]
    fn infinite_min_gain_gives_single_leaf() {
        let samples = vec![tri(0, 0, 1), tri(0, 1, 2), tri(1, 2, 1)];
        let prior = [0.0, 2.0 / 3.0, 1.0 / 3.0];
        let params = GrowParams { min_gain: f64::INFINITY, ..PARAMS };
        let tree = ContextTree::grow(&samples, &prior, params);
        assert_eq!(tree.node_count(), 1);
        let d = tree.lookup(0, 0);
        assert!((d[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn paths_never_repeat_a_test() {
        let mut samples = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                samples.push(tri(a, b, 1 + (a * 3 + b) % 3));
            }
        }
        let prior = [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        let tree = ContextTree::grow(&samples, &prior, GrowParams { min_samples: 1, ..PARAMS });
        for path in tree.paths() {
            let set: BTreeSet<_> = path.iter().collect();
            assert_eq!(set.len(), path.len());
        }
        for leaf in tree.leaves() {
            assert!((leaf.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
