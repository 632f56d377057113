//! Weighted graph automorphisms by colour refinement and individualization.
//!
//! Vertices are coloured by loop weight and refined by the multiset of
//! `(edge weight, neighbour colour)` until the partition is stable. The
//! search individualizes one vertex on each side, refines both colourings
//! with a shared colour dictionary, and prunes as soon as the class sizes
//! differ. The group order is the product of orbit lengths along the point
//! stabilizer chain `G ⊇ G_1 ⊇ G_12 ⊇ ...`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, VertexPair};
use crate::linalg::Field;

/// Search nodes allowed before a search gives up with an unknown verdict.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryVerdict {
    Trivial,
    Nontrivial,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    /// Generators as 1-based image arrays, vertex `i` maps to `g[i-1]`.
    pub generators: Vec<Vec<usize>>,
    /// Group order when the search completed.
    pub order: Option<u128>,
    pub verdict: SymmetryVerdict,
}

impl AutomorphismReport {
    pub fn trivial(&self) -> bool {
        self.verdict == SymmetryVerdict::Trivial
    }
}

/// Three-valued answer of a targeted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "answer", content = "witness")]
pub enum SearchAnswer {
    Found(Vec<usize>),
    NotFound,
    Unknown,
}

/// Own colour, loop weight class, and sorted `(edge weight class, neighbour
/// colour)` pairs.
type Signature = (usize, usize, Vec<(usize, usize)>);

struct Searcher<'a> {
    n: usize,
    /// Weight class ids, `usize::MAX` for zero.
    w: Vec<usize>,
    nodes: &'a AtomicU64,
    budget: u64,
}

impl<'a> Searcher<'a> {
    fn new<T: Field>(g: &Graph<T>, nodes: &'a AtomicU64, budget: u64) -> Self {
        let n = g.n();
        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut w = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                let x = g.weight(i, j);
                if !x.is_exactly_zero() {
                    let next = ids.len();
                    w[i * n + j] = *ids.entry(x.weight_string()).or_insert(next);
                }
            }
        }
        Searcher { n, w, nodes, budget }
    }

    fn weight(&self, i: usize, j: usize) -> usize {
        self.w[i * self.n + j]
    }

    fn signature(&self, colours: &[usize], x: usize) -> Signature {
        let mut nb: Vec<(usize, usize)> = (0..self.n)
            .filter(|&y| y != x && self.weight(x, y) != usize::MAX)
            .map(|y| (self.weight(x, y), colours[y]))
            .collect();
        nb.sort_unstable();
        (colours[x], self.weight(x, x), nb)
    }

    /// Refines two colourings with a shared dictionary; `None` if the
    /// colour histograms ever differ.
    fn refine(&self, mut a: Vec<usize>, mut b: Vec<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
        let classes = |c: &[usize]| {
            let mut s = c.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        loop {
            let before = classes(&a);
            let sa: Vec<_> = (0..self.n).map(|x| self.signature(&a, x)).collect();
            let sb: Vec<_> = (0..self.n).map(|x| self.signature(&b, x)).collect();
            let mut dict: Vec<&Signature> = sa.iter().chain(&sb).collect();
            dict.sort();
            dict.dedup();
            let id = |s: &Signature| dict.binary_search(&s).expect("present");
            a = sa.iter().map(id).collect();
            b = sb.iter().map(id).collect();
            let (mut ha, mut hb) = (a.clone(), b.clone());
            ha.sort_unstable();
            hb.sort_unstable();
            if ha != hb {
                return None;
            }
            if classes(&a) == before {
                return Some((a, b));
            }
        }
    }

    fn is_automorphism(&self, perm: &[usize]) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.weight(i, j) == self.weight(perm[i], perm[j])))
    }

    /// Finds an automorphism compatible with the paired colourings.
    fn extend(&self, a: &[usize], b: &[usize]) -> Option<Option<Vec<usize>>> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return None;
        }
        let mut size = BTreeMap::new();
        for &c in a {
            *size.entry(c).or_insert(0usize) += 1;
        }
        let cell = size.iter().find(|(_, &s)| s > 1).map(|(&c, _)| c);
        let Some(cell) = cell else {
            let mut perm = vec![0; self.n];
            for x in 0..self.n {
                perm[x] = (0..self.n).find(|&y| b[y] == a[x]).expect("histograms match");
            }
            return Some(self.is_automorphism(&perm).then_some(perm));
        };
        let x = (0..self.n).find(|&x| a[x] == cell).expect("cell is nonempty");
        let fresh = a.iter().chain(b).max().copied().unwrap_or(0) + 1;
        for y in (0..self.n).filter(|&y| b[y] == cell) {
            let (mut a2, mut b2) = (a.to_vec(), b.to_vec());
            a2[x] = fresh;
            b2[y] = fresh;
            if let Some((a3, b3)) = self.refine(a2, b2) {
                match self.extend(&a3, &b3)? {
                    Some(p) => return Some(Some(p)),
                    None => continue,
                }
            }
        }
        Some(None)
    }

    /// Automorphism mapping `from[i]` to `to[i]` for all `i`.
    fn search(&self, from: &[usize], to: &[usize]) -> SearchAnswer {
        let mut a = vec![0; self.n];
        let mut b = vec![0; self.n];
        for (k, (&x, &y)) in from.iter().zip(to).enumerate() {
            a[x] = k + 1;
            b[y] = k + 1;
        }
        let Some((a, b)) = self.refine(a, b) else {
            return SearchAnswer::NotFound;
        };
        match self.extend(&a, &b) {
            None => SearchAnswer::Unknown,
            Some(None) => SearchAnswer::NotFound,
            Some(Some(p)) => SearchAnswer::Found(p),
        }
    }
}

fn one_based(p: &[usize]) -> Vec<usize> {
    p.iter().map(|x| x + 1).collect()
}

/// Automorphism group generators and order, with the default node budget.
pub fn find_automorphisms<T: Field>(g: &Graph<T>) -> AutomorphismReport {
    find_automorphisms_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn find_automorphisms_with_budget<T: Field>(g: &Graph<T>, budget: u64) -> AutomorphismReport {
    let nodes = AtomicU64::new(0);
    let s = Searcher::new(g, &nodes, budget);
    let n = g.n();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    let mut unknown = false;
    for level in 0..n {
        let fixed: Vec<usize> = (0..level).collect();
        // Candidates for the image of `level` fixing 0..level-1.
        let mut from = fixed.clone();
        from.push(level);
        let answers: Vec<(usize, SearchAnswer)> = (level + 1..n)
            .into_par_iter()
            .map(|w| {
                let mut to = fixed.clone();
                to.push(w);
                (w, s.search(&from, &to))
            })
            .collect();
        let mut orbit = 1u128;
        for (_, a) in answers {
            match a {
                SearchAnswer::Found(p) => {
                    orbit += 1;
                    generators.push(p);
                }
                SearchAnswer::Unknown => unknown = true,
                SearchAnswer::NotFound => {}
            }
        }
        order = order.saturating_mul(orbit);
    }
    generators.sort();
    generators.dedup();
    let verdict = if !generators.is_empty() {
        SymmetryVerdict::Nontrivial
    } else if unknown {
        SymmetryVerdict::Unknown
    } else {
        SymmetryVerdict::Trivial
    };
    AutomorphismReport {
        generators: generators.iter().map(|p| one_based(p)).collect(),
        order: (!unknown).then_some(order),
        verdict,
    }
}

/// Searches for an automorphism swapping the pair vertices.
pub fn exchange_automorphism<T: Field>(g: &Graph<T>, pair: &VertexPair, budget: u64) -> Result<SearchAnswer> {
    pair.check(g.n())?;
    let nodes = AtomicU64::new(0);
    let s = Searcher::new(g, &nodes, budget);
    Ok(match s.search(&[pair.u(), pair.v()], &[pair.v(), pair.u()]) {
        SearchAnswer::Found(p) => SearchAnswer::Found(one_based(&p)),
        other => other,
    })
}

/// `Some(true)` iff an automorphism swaps the pair; `None` when the search
/// ran out of budget.
pub fn has_exchange_automorphism<T: Field>(g: &Graph<T>, pair: &VertexPair) -> Result<Option<bool>> {
    Ok(match exchange_automorphism(g, pair, DEFAULT_NODE_BUDGET)? {
        SearchAnswer::Found(_) => Some(true),
        SearchAnswer::NotFound => Some(false),
        SearchAnswer::Unknown => None,
    })
}

/// All group elements generated by 1-based permutations, by closure.
pub fn group_closure(generators: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (1..=n).collect();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q: Vec<usize> = (0..n).map(|i| g[p[i] - 1]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}
