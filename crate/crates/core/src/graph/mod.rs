//! Weighted undirected graphs (loops allowed) and structural edits.

mod io;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Mode, Rational, Tolerance};

pub use io::{load_graph, parse_graph, save_graph, AnyGraph, GraphFile, GraphFormat};

/// Unordered pair of distinct vertices, stored 0-based with `u < v`.
///
/// Serialized as a 1-based two-element array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPair {
    u: usize,
    v: usize,
}

impl VertexPair {
    /// Builds a pair from 0-based indices in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "a vertex pair needs two distinct vertices, got {} twice",
                a + 1
            )));
        }
        Ok(VertexPair {
            u: a.min(b),
            v: a.max(b),
        })
    }

    /// Builds a pair from 1-based indices.
    pub fn one_based(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument("vertex indices are 1-based".into()));
        }
        Self::new(a - 1, b - 1)
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn contains(&self, x: usize) -> bool {
        x == self.u || x == self.v
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if self.v >= n {
            return Err(Error::InvalidArgument(format!(
                "pair {self} out of range for {n} vertices"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u + 1, self.v + 1)
    }
}

impl Serialize for VertexPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.u + 1, self.v + 1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        VertexPair::one_based(a, b).map_err(serde::de::Error::custom)
    }
}

/// Weighted indicator vector: weights `gamma` on a sorted support.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedIndicatorVector<T> {
    n: usize,
    support: Vec<usize>,
    gamma: Vec<T>,
}

impl<T: Field> WeightedIndicatorVector<T> {
    /// `support` is 0-based and may be unsorted; weights follow their vertex.
    pub fn new(n: usize, support: Vec<usize>, gamma: Vec<T>) -> Result<Self> {
        if support.len() != gamma.len() {
            return Err(Error::Dimension(format!(
                "{} support vertices but {} weights",
                support.len(),
                gamma.len()
            )));
        }
        let mut pairs: Vec<(usize, T)> = support.into_iter().zip(gamma).collect();
        pairs.sort_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} appears twice in the support",
                    w[0].0 + 1
                )));
            }
        }
        if let Some((m, _)) = pairs.iter().find(|(_, g)| g.is_exactly_zero()) {
            return Err(Error::InvalidArgument(format!(
                "zero weight on support vertex {}",
                m + 1
            )));
        }
        if let Some((m, _)) = pairs.iter().find(|(m, _)| *m >= n) {
            return Err(Error::InvalidArgument(format!(
                "support vertex {} out of range for {n} vertices",
                m + 1
            )));
        }
        let (support, gamma) = pairs.into_iter().unzip();
        Ok(WeightedIndicatorVector { n, support, gamma })
    }

    /// Uniform weight 1 on the support.
    pub fn indicator(n: usize, support: Vec<usize>) -> Result<Self> {
        let gamma = vec![T::one(); support.len()];
        Self::new(n, support, gamma)
    }

    /// Drops zero entries of a dense vector.
    pub fn from_dense(v: &[T]) -> Self {
        let (support, gamma) = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_exactly_zero())
            .map(|(i, x)| (i, x.clone()))
            .unzip();
        WeightedIndicatorVector {
            n: v.len(),
            support,
            gamma,
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut v = vec![T::zero(); self.n];
        for (m, g) in self.support.iter().zip(&self.gamma) {
            v[*m] = g.clone();
        }
        v
    }
}

/// Symmetric weighted adjacency matrix with optional vertex labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph<T> {
    weights: Matrix<T>,
    labels: Option<Vec<String>>,
}

/// Result of a vertex deletion: the smaller graph plus the index map.
#[derive(Clone, Debug, PartialEq)]
pub struct Deletion<T> {
    pub graph: Graph<T>,
    /// `index_map[old] = Some(new)` for kept vertices, `None` for deleted ones.
    pub index_map: Vec<Option<usize>>,
}

impl<T: Field> Graph<T> {
    /// Validates symmetry: exact for rationals, within `tol_sym` for floats.
    pub fn new(weights: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        if !weights.is_square() {
            return Err(Error::Dimension(format!(
                "adjacency matrix must be square, got {}x{}",
                weights.rows(),
                weights.cols()
            )));
        }
        let n = weights.rows();
        for i in 0..n {
            for j in (i + 1)..n {
                if !weights.get(i, j).same(weights.get(j, i), tol.tol_sym) {
                    return Err(Error::NotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Graph {
            weights,
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            weights: Matrix::zeros(n, n),
            labels: None,
        }
    }

    /// Builds a graph from 0-based edges; loops are `(i, i, w)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j, w) in edges {
            if *i >= n || *j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) out of range for {n} vertices",
                    i + 1,
                    j + 1
                )));
            }
            g.set_edge(*i, *j, w.clone());
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.weights.rows()
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    pub fn weights(&self) -> &Matrix<T> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> &T {
        self.weights.get(i, j)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Dimension(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_edge(&mut self, i: usize, j: usize, w: T) {
        self.weights.set(i, j, w.clone());
        self.weights.set(j, i, w);
    }

    /// Nonzero entries with `i <= j`, row by row.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let w = self.weight(i, j);
                if !w.is_exactly_zero() {
                    out.push((i, j, w.clone()));
                }
            }
        }
        out
    }

    /// Principal submatrix on the complement of `s`, original order kept.
    pub fn delete_vertices(&self, s: &[usize]) -> Result<Deletion<T>> {
        let n = self.n();
        if let Some(&bad) = s.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidArgument(format!(
                "vertex {} out of range for {n} vertices",
                bad + 1
            )));
        }
        let keep: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot delete every vertex of the graph".into(),
            ));
        }
        let mut index_map = vec![None; n];
        for (new, &old) in keep.iter().enumerate() {
            index_map[old] = Some(new);
        }
        let graph = Graph {
            weights: self.weights.principal_submatrix(&keep),
            labels: self
                .labels
                .as_ref()
                .map(|l| keep.iter().map(|&i| l[i].clone()).collect()),
        };
        Ok(Deletion { graph, index_map })
    }

    /// Appends a tip vertex joined to the support of `e` with weights `gamma`.
    pub fn cone_over(&self, e: &WeightedIndicatorVector<T>) -> Result<Self> {
        let n = self.n();
        if e.ambient() != n {
            return Err(Error::Dimension(format!(
                "indicator vector has ambient size {}, graph has {n} vertices",
                e.ambient()
            )));
        }
        if e.is_empty() {
            return Err(Error::InvalidArgument("cone over an empty vertex set".into()));
        }
        let mut out = self.grow(1, "c");
        for (m, g) in e.support().iter().zip(e.gamma()) {
            out.set_edge(*m, n, g.clone());
        }
        Ok(out)
    }

    /// Copy with `extra` isolated vertices appended.
    fn grow(&self, extra: usize, label_prefix: &str) -> Self {
        let n = self.n();
        let weights = Matrix::from_fn(n + extra, n + extra, |i, j| {
            if i < n && j < n {
                self.weight(i, j).clone()
            } else {
                T::zero()
            }
        });
        let labels = self.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.extend((0..extra).map(|k| format!("{label_prefix}{}", n + k + 1)));
            l
        });
        Graph { weights, labels }
    }

    /// Block-diagonal union; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph<T>) -> Self {
        let n = self.n();
        let mut out = self.grow(other.n(), "x");
        for i in 0..other.n() {
            for j in 0..other.n() {
                out.weights.set(n + i, n + j, other.weight(i, j).clone());
            }
        }
        if let (Some(l), Some(ol)) = (out.labels.as_mut(), other.labels.as_ref()) {
            l[n..].clone_from_slice(ol);
        }
        out
    }

    /// `H' = P H Pᵀ` where vertex `i` moves to `perm[i]` (0-based).
    pub fn apply_permutation(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        check_permutation(perm, n)?;
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let weights = Matrix::from_fn(n, n, |i, j| self.weight(inv[i], inv[j]).clone());
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..n).map(|i| l[inv[i]].clone()).collect());
        Ok(Graph { weights, labels })
    }

    /// Same graph with float weights.
    pub fn to_float(&self) -> Graph<f64> {
        Graph {
            weights: self.weights.to_f64(),
            labels: self.labels.clone(),
        }
    }
}

impl Graph<f64> {
    /// Exact copy of a float graph (every finite double is a rational).
    pub fn to_rational(&self) -> Graph<Rational> {
        Graph {
            weights: self.weights.map(|&x| {
                Rational::from_float(x).expect("graph weights are finite")
            }),
            labels: self.labels.clone(),
        }
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation has {} entries, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArgument("permutation is not a bijection".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn p3() -> Graph<Rational> {
        Graph::from_edges(3, &[(0, 1, q(1)), (1, 2, q(1))]).unwrap()
    }

    #[test]
    fn pair_is_ordered_and_distinct() {
        let p = VertexPair::new(4, 1).unwrap();
        assert_eq!((p.u(), p.v()), (1, 4));
        assert!(VertexPair::new(2, 2).is_err());
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,5]");
        let back: VertexPair = serde_json::from_str("[5,2]").unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn indicator_vector_validation() {
        let e = WeightedIndicatorVector::new(4, vec![3, 0], vec![q(2), q(-1)]).unwrap();
        assert_eq!(e.support(), &[0, 3]);
        assert_eq!(e.gamma(), &[q(-1), q(2)]);
        assert_eq!(e.to_dense(), vec![q(-1), q(0), q(0), q(2)]);
        assert!(WeightedIndicatorVector::new(4, vec![1, 1], vec![q(1), q(1)]).is_err());
        assert!(WeightedIndicatorVector::new(4, vec![1], vec![q(0)]).is_err());
        assert!(WeightedIndicatorVector::new(4, vec![4], vec![q(1)]).is_err());
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let m = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(2), q(0)]]).unwrap();
        assert!(matches!(
            Graph::new(m, &Tolerance::default()),
            Err(Error::NotSymmetric { i: 1, j: 2 })
        ));
    }

    #[test]
    fn delete_middle_of_path() {
        let d = p3().delete_vertices(&[1]).unwrap();
        assert_eq!(d.graph, Graph::empty(2));
        assert_eq!(d.index_map, vec![Some(0), None, Some(1)]);
        assert_eq!(p3().delete_vertices(&[]).unwrap().graph, p3());
        assert!(p3().delete_vertices(&[0, 1, 2]).is_err());
    }

    #[test]
    fn cone_then_delete_restores() {
        let g = p3();
        let e = WeightedIndicatorVector::new(3, vec![0, 2], vec![q(-1), q(1)]).unwrap();
        let h = g.cone_over(&e).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.weight(3, 0), &q(-1));
        assert_eq!(h.weight(2, 3), &q(1));
        assert_eq!(h.weight(3, 3), &q(0));
        assert_eq!(h.delete_vertices(&[3]).unwrap().graph, g);
        let empty = WeightedIndicatorVector::<Rational>::new(3, vec![], vec![]).unwrap();
        assert!(g.cone_over(&empty).is_err());
    }

    #[test]
    fn pendant_cone() {
        let g: Graph<Rational> = Graph::empty(1);
        let h = g
            .cone_over(&WeightedIndicatorVector::indicator(1, vec![0]).unwrap())
            .unwrap();
        assert_eq!(h.edges(), vec![(0, 1, q(1))]);
    }

    #[test]
    fn permutations() {
        let g = p3();
        assert_eq!(g.apply_permutation(&[0, 1, 2]).unwrap(), g);
        assert_eq!(g.apply_permutation(&[2, 1, 0]).unwrap(), g);
        let moved = g.apply_permutation(&[1, 0, 2]).unwrap();
        assert_eq!(moved.edges(), vec![(0, 1, q(1)), (0, 2, q(1))]);
        assert!(g.apply_permutation(&[0, 0, 1]).is_err());
        assert!(g.apply_permutation(&[0, 1]).is_err());
    }

    #[test]
    fn disjoint_union_blocks() {
        let g = p3().disjoint_union(&p3());
        assert_eq!(g.n(), 6);
        assert_eq!(g.weight(3, 4), &q(1));
        assert_eq!(g.weight(2, 3), &q(0));
    }

    #[test]
    fn float_round_trip() {
        let g = Graph::from_edges(2, &[(0, 1, Rational::new(1.into(), 4.into()))]).unwrap();
        assert_eq!(g.to_float().to_rational(), g);
    }
}
