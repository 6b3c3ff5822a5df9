//! Second-order Viterbi decoding.

use super::{TagId, TaggerModel, BOUNDARY_ID};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecodeOptions {
    /// Drop states scoring more than this many nats below the best state at
    /// the same position. `None` decodes exactly.
    pub beam: Option<f64>,
}

/// A model prepared for decoding: context log-probabilities are tabulated
/// once for every (prev2, prev, tag) triple.
pub struct Tagger<'m> {
    model: &'m TaggerModel,
    options: DecodeOptions,
    num_tags: usize,
    log_context: Vec<f64>,
}

impl<'m> Tagger<'m> {
    pub fn new(model: &'m TaggerModel) -> Self {
        Self::with_options(model, DecodeOptions::default())
    }

    pub fn with_options(model: &'m TaggerModel, options: DecodeOptions) -> Self {
        let k = model.tagset.len();
        let mut log_context = vec![f64::NEG_INFINITY; k * k * k];
        for prev2 in 0..k {
            for prev in 0..k {
                let dist = model.context.lookup(prev2, prev);
                for tag in 1..k {
                    log_context[(prev2 * k + prev) * k + tag] = dist[tag].ln();
                }
            }
        }
        Tagger { model, options, num_tags: k, log_context }
    }

    pub fn model(&self) -> &TaggerModel {
        self.model
    }

    fn trans(&self, prev2: TagId, prev: TagId, tag: TagId) -> f64 {
        self.log_context[(prev2 * self.num_tags + prev) * self.num_tags + tag]
    }

    /// Best tag ids for `forms` and the log score of that path.
    pub fn decode<S: AsRef<str>>(&self, forms: &[S]) -> (Vec<TagId>, f64) {
        if forms.is_empty() {
            return (Vec::new(), 0.0);
        }
        let candidates: Vec<Vec<(TagId, f64)>> = forms.iter().map(|f| self.model.emission_scores(f.as_ref())).collect();
        let boundary = [(BOUNDARY_ID, 0.0)];
        let cands = |i: isize| -> &[(TagId, f64)] {
            if i < 0 {
                &boundary
            } else {
                &candidates[i as usize]
            }
        };

        // delta[i][(u, t)] over u in cands(i-1), t in cands(i), flattened as
        // u_index * |cands(i)| + t_index.
        let mut deltas: Vec<Vec<f64>> = Vec::with_capacity(forms.len());
        let mut backs: Vec<Vec<usize>> = Vec::with_capacity(forms.len());

        let c0 = cands(0);
        let mut first = Vec::with_capacity(c0.len());
        for &(t, e) in c0 {
            first.push(self.trans(BOUNDARY_ID, BOUNDARY_ID, t) + e);
        }
        self.prune(&mut first);
        deltas.push(first);
        backs.push(vec![0; c0.len()]);

        for i in 1..forms.len() as isize {
            let (c_w, c_u, c_t) = (cands(i - 2), cands(i - 1), cands(i));
            let prev = &deltas[(i - 1) as usize];
            let mut delta = vec![f64::NEG_INFINITY; c_u.len() * c_t.len()];
            let mut back = vec![0usize; c_u.len() * c_t.len()];
            for (ui, &(u, _)) in c_u.iter().enumerate() {
                for (ti, &(t, e)) in c_t.iter().enumerate() {
                    let mut best = f64::NEG_INFINITY;
                    let mut best_w = 0;
                    for (wi, &(w, _)) in c_w.iter().enumerate() {
                        let p = prev[wi * c_u.len() + ui];
                        if p == f64::NEG_INFINITY {
                            continue;
                        }
                        let s = p + self.trans(w, u, t);
                        if s > best {
                            best = s;
                            best_w = wi;
                        }
                    }
                    delta[ui * c_t.len() + ti] = best + e;
                    back[ui * c_t.len() + ti] = best_w;
                }
            }
            self.prune(&mut delta);
            deltas.push(delta);
            backs.push(back);
        }

        let n = forms.len();
        let last = &deltas[n - 1];
        let width = cands(n as isize - 1).len();
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = 0;
        for (idx, &s) in last.iter().enumerate() {
            if s > best {
                best = s;
                best_idx = idx;
            }
        }

        // Walk back through (u_index, t_index) pairs.
        let mut tags = vec![0; n];
        let (mut ui, mut ti) = (best_idx / width, best_idx % width);
        for i in (0..n).rev() {
            tags[i] = cands(i as isize)[ti].0;
            let w = backs[i][ui * cands(i as isize).len() + ti];
            ti = ui;
            ui = w;
        }
        (tags, best)
    }

    fn prune(&self, delta: &mut [f64]) {
        if let Some(beam) = self.options.beam {
            let best = delta.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for d in delta.iter_mut() {
                if *d < best - beam {
                    *d = f64::NEG_INFINITY;
                }
            }
        }
    }

    /// Tags a sentence, returning tag names.
    pub fn tag<S: AsRef<str>>(&self, forms: &[S]) -> Vec<String> {
        let (ids, _) = self.decode(forms);
        ids.into_iter().map(|t| self.model.tagset.name(t).to_owned()).collect()
    }
}

/// Tags one sentence with exact decoding. Prefer [`Tagger`] when tagging
/// many sentences with the same model.
pub fn tag_sentence<S: AsRef<str>>(model: &TaggerModel, forms: &[S]) -> Vec<String> {
    Tagger::new(model).tag(forms)
}
