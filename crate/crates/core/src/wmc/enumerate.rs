//! World enumeration with counter-based least-model propagation.

use super::{Cone, Net};
use crate::par::{self, Parallelism};

/// log2 of the number of worlds evaluated per work item.
const CHUNK_BITS: u32 = 10;

struct Local {
    probs: Vec<f64>,
    fact_atom: Vec<usize>,
    certain: Vec<usize>,
    watchers: Vec<Vec<usize>>,
    heads: Vec<usize>,
    body_len: Vec<u32>,
    numerator: Vec<(usize, bool)>,
    evidence: Vec<(usize, bool)>,
    n_atoms: usize,
}

impl Local {
    fn new(net: &Net, cone: &Cone, numerator: &[(usize, bool)], evidence: &[(usize, bool)]) -> Self {
        let mut local = vec![usize::MAX; net.certain.len()];
        for (i, &a) in cone.atoms.iter().enumerate() {
            local[a] = i;
        }
        let n_atoms = cone.atoms.len();
        let mut watchers = vec![Vec::new(); n_atoms];
        let mut heads = Vec::with_capacity(cone.rules.len());
        let mut body_len = Vec::with_capacity(cone.rules.len());
        for (r, &rule) in cone.rules.iter().enumerate() {
            let (head, body) = &net.rules[rule];
            heads.push(local[*head]);
            body_len.push(body.len() as u32);
            for &b in body {
                watchers[local[b]].push(r);
            }
        }
        let map = |lits: &[(usize, bool)]| lits.iter().map(|&(a, p)| (local[a], p)).collect();
        Local {
            probs: cone.facts.iter().map(|&f| net.probs[f]).collect(),
            fact_atom: cone.facts.iter().map(|&f| local[net.prob_atom[f]]).collect(),
            certain: cone
                .atoms
                .iter()
                .enumerate()
                .filter(|&(_, &a)| net.certain[a])
                .map(|(i, _)| i)
                .collect(),
            watchers,
            heads,
            body_len,
            numerator: map(numerator),
            evidence: map(evidence),
            n_atoms,
        }
    }

    fn chunk(&self, start: u64, end: u64) -> (f64, f64) {
        let mut truth = vec![false; self.n_atoms];
        let mut remaining = vec![0u32; self.body_len.len()];
        let mut queue = Vec::with_capacity(self.n_atoms);
        let (mut num, mut den) = (0.0, 0.0);
        for world in start..end {
            truth.iter_mut().for_each(|t| *t = false);
            remaining.copy_from_slice(&self.body_len);
            queue.clear();
            let mut weight = 1.0;
            let set = |a: usize, truth: &mut Vec<bool>, queue: &mut Vec<usize>| {
                if !truth[a] {
                    truth[a] = true;
                    queue.push(a);
                }
            };
            for (i, &p) in self.probs.iter().enumerate() {
                if world >> i & 1 == 1 {
                    weight *= p;
                    set(self.fact_atom[i], &mut truth, &mut queue);
                } else {
                    weight *= 1.0 - p;
                }
            }
            for &a in &self.certain {
                set(a, &mut truth, &mut queue);
            }
            for (r, &len) in self.body_len.iter().enumerate() {
                if len == 0 {
                    set(self.heads[r], &mut truth, &mut queue);
                }
            }
            while let Some(a) = queue.pop() {
                for &r in &self.watchers[a] {
                    remaining[r] -= 1;
                    if remaining[r] == 0 {
                        set(self.heads[r], &mut truth, &mut queue);
                    }
                }
            }
            let holds = |lits: &[(usize, bool)]| lits.iter().all(|&(a, p)| truth[a] == p);
            if holds(&self.evidence) {
                den += weight;
                if holds(&self.numerator) {
                    num += weight;
                }
            }
        }
        (num, den)
    }
}

pub(super) fn weigh(
    net: &Net,
    cone: &Cone,
    numerator: &[(usize, bool)],
    evidence: &[(usize, bool)],
    parallelism: Parallelism,
) -> (f64, f64) {
    let local = Local::new(net, cone, numerator, evidence);
    let worlds = 1u64 << local.probs.len();
    let size = 1u64 << CHUNK_BITS;
    let chunks = worlds.div_ceil(size) as usize;
    let partial = par::map_range(chunks, parallelism, |c| {
        let start = c as u64 * size;
        local.chunk(start, (start + size).min(worlds))
    });
    partial
        .into_iter()
        .fold((0.0, 0.0), |(n, d), (pn, pd)| (n + pn, d + pd))
}
