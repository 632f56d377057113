//! Walk multiplets relative to a vertex pair.
//!
//! A subset `M` with weights `γ` is a walk multiplet of parity `p` when
//! `Σ_m γ_m [H^k]_{u,m} = p Σ_m γ_m [H^k]_{v,m}` for every `k <= N - 1`. For
//! fixed `M` and `p` this is a homogeneous linear system in `γ`, so the set
//! of valid weights is the null space of an `N × |M|` condition matrix.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphFile, VertexPair};
use crate::linalg::{Field, Matrix, Ring, Tolerance};
use crate::walks::WalkTable;

/// Default cap on the number of subsets an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
    /// The same weights satisfy both signs (every walk sum vanishes).
    Both,
}

impl Parity {
    pub fn from_sign(p: i32) -> Result<Self> {
        match p {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            _ => Err(Error::InvalidArgument(format!("parity must be +1 or -1, got {p}"))),
        }
    }

    /// Signs `p` for which the multiplet condition holds.
    pub fn signs(&self) -> &'static [i32] {
        match self {
            Parity::Even => &[1],
            Parity::Odd => &[-1],
            Parity::Both => &[1, -1],
        }
    }

    pub fn has_sign(&self, p: i32) -> bool {
        self.signs().contains(&p)
    }

    /// A sign for which the condition holds (`+1` for `Both`).
    pub fn sign(&self) -> i32 {
        self.signs()[0]
    }

    /// `even`, `odd` or `both`.
    pub fn name(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Both => "both",
        }
    }

    /// Common parity of two multiplets, if any.
    pub fn meet(&self, o: &Parity) -> Option<Parity> {
        match (self, o) {
            (Parity::Both, x) | (x, Parity::Both) => Some(*x),
            (a, b) if a == b => Some(*a),
            _ => None,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "+",
            Parity::Odd => "-",
            Parity::Both => "±",
        })
    }
}

/// Which parities an enumeration reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityFilter {
    Even,
    Odd,
    Any,
}

impl ParityFilter {
    pub fn accepts(&self, p: Parity) -> bool {
        match self {
            ParityFilter::Any => true,
            ParityFilter::Even => p.has_sign(1),
            ParityFilter::Odd => p.has_sign(-1),
        }
    }
}

impl std::str::FromStr for ParityFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+" => Ok(ParityFilter::Even),
            "odd" | "-" => Ok(ParityFilter::Odd),
            "both" | "any" => Ok(ParityFilter::Any),
            _ => Err(Error::InvalidArgument(format!(
                "unknown parity `{s}` (expected even, odd or both)"
            ))),
        }
    }
}

/// Rows `k = 0..N-1`, columns `m ∈ M`: `[H^k]_{u,m} - p [H^k]_{v,m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionMatrix<T> {
    pub pair: VertexPair,
    pub sign: i32,
    pub subset: Vec<usize>,
    pub entries: Matrix<T>,
}

impl<T: Field> ConditionMatrix<T> {
    /// `entries · γ = 0`, exactly or relative to the magnitude of the terms.
    pub fn annihilates(&self, gamma: &[T], tol: &Tolerance) -> bool {
        gamma.len() == self.subset.len()
            && (0..self.entries.rows()).all(|k| {
                let row = self.entries.row(k);
                let sum = row.iter().zip(gamma).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
                let scale: f64 = row.iter().zip(gamma).map(|(a, b)| a.abs_f64() * b.abs_f64()).sum();
                sum.is_zero_tol(tol.tol_zero * scale.max(1.0))
            })
    }
}

fn check_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("multiplet subset is empty".into()));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "multiplet subset must be sorted without duplicates".into(),
        ));
    }
    if let Some(&m) = subset.iter().find(|&&m| m >= n) {
        return Err(Error::InvalidArgument(format!(
            "vertex {} out of range for {n} vertices",
            m + 1
        )));
    }
    Ok(())
}

fn check_sign(p: i32) -> Result<()> {
    Parity::from_sign(p).map(|_| ())
}

/// Condition matrix in original units.
pub fn condition_matrix<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    subset: &[usize],
    p: i32,
) -> Result<ConditionMatrix<T>> {
    pair.check(g.n())?;
    check_subset(subset, g.n())?;
    check_sign(p)?;
    let n = g.n();
    let pows = g.weights().power_sequence(n - 1)?;
    let sign = T::from_i64(p as i64);
    let entries = Matrix::from_fn(n, subset.len(), |k, j| {
        let m = subset[j];
        pows[k].get(pair.u(), m).sub(&sign.mul(pows[k].get(pair.v(), m)))
    });
    Ok(ConditionMatrix {
        pair: *pair,
        sign: p,
        subset: subset.to_vec(),
        entries,
    })
}

/// Condition matrix on the scaled walk table (rows for every tabulated power).
pub(crate) fn kernel_condition<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
    p: i32,
) -> Matrix<T::Kernel> {
    let (u, v) = (pair.u(), pair.v());
    Matrix::from_fn(table.max_power() + 1, subset.len(), |k, j| {
        let m = subset[j];
        let (a, b) = (table.entry(k, u, m), table.entry(k, v, m));
        if p > 0 {
            a.sub(b)
        } else {
            a.add(b)
        }
    })
}

/// Rows of the two signs stacked: common solutions of both parities.
fn kernel_condition_both<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
) -> Matrix<T::Kernel> {
    let (u, v) = (pair.u(), pair.v());
    let rows = table.max_power() + 1;
    Matrix::from_fn(2 * rows, subset.len(), |r, j| {
        let s = if r < rows { u } else { v };
        table.entry(r % rows, s, subset[j]).clone()
    })
}

/// Whether `gamma` (original units) satisfies the condition for sign `p`.
pub fn satisfies_condition<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
    gamma: &[T],
    p: i32,
    tol: &Tolerance,
) -> bool {
    let g = T::kernel_vector(gamma);
    let sums_u = table.weighted_row_sums(pair.u(), subset, &g);
    let sums_v = table.weighted_row_sums(pair.v(), subset, &g);
    sums_u.iter().zip(&sums_v).all(|(a, b)| {
        let b = if p > 0 { b.clone() } else { b.neg() };
        a.same(&b, tol.tol_zero)
    })
}

/// One group of multiplet vertices sharing a coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Sublet<T> {
    pub vertices: Vec<usize>,
    /// Coefficient of each free parameter.
    pub coefficients: Vec<T>,
}

impl<T: Field> Sublet<T> {
    /// Linear form in the parameters `a, b, c, ...`, e.g. `2a+b`.
    pub fn coefficient_string(&self) -> String {
        linear_form(&self.coefficients)
    }
}

/// Name of the `i`-th free parameter.
pub fn parameter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{}", i + 1)
    }
}

fn linear_form<T: Field>(coeffs: &[T]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_exactly_zero() {
            continue;
        }
        let negative = c.total_cmp(&T::zero()).is_lt();
        let mag = if negative { c.neg() } else { c.clone() };
        if negative {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag != T::one() {
            let s = mag.weight_string();
            if s.contains(['/', '.', 'e']) {
                out.push_str(&format!("({s})"));
            } else {
                out.push_str(&s);
            }
        }
        out.push_str(&parameter_name(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A subset with its full space of valid weight tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplet<T> {
    pub pair: VertexPair,
    pub subset: Vec<usize>,
    pub parity: Parity,
    /// Canonical basis (reduced echelon form) of the weight space.
    pub weight_space: Vec<Vec<T>>,
    pub full_support: bool,
    pub sublets: Vec<Sublet<T>>,
    pub uniform: bool,
}

impl<T: Field> Multiplet<T> {
    fn build(pair: VertexPair, subset: Vec<usize>, parity: Parity, basis: Vec<Vec<T>>, tol: &Tolerance) -> Self {
        let full_support = (0..subset.len()).all(|m| basis.iter().any(|b| !b[m].is_zero_tol(tol.tol_zero)));
        let sublets = sublets_of(&basis, &subset, tol);
        let mut m = Multiplet {
            pair,
            subset,
            parity,
            weight_space: basis,
            full_support,
            sublets,
            uniform: false,
        };
        m.uniform = m.contains(&vec![T::one(); m.subset.len()], tol);
        m
    }

    pub fn dimension(&self) -> usize {
        self.weight_space.len()
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    /// Pivot (leading) coordinate of each basis vector.
    fn pivots(&self, tol: &Tolerance) -> Vec<usize> {
        self.weight_space
            .iter()
            .map(|b| b.iter().position(|x| !x.is_zero_tol(tol.tol_zero)).unwrap_or(0))
            .collect()
    }

    /// `Σ_i params[i] · basis[i]`.
    pub fn combination(&self, params: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.subset.len()];
        for (b, c) in self.weight_space.iter().zip(params) {
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.add(&c.mul(x));
            }
        }
        out
    }

    /// Membership in the weight space.
    pub fn contains(&self, gamma: &[T], tol: &Tolerance) -> bool {
        if gamma.len() != self.subset.len() {
            return false;
        }
        let params: Vec<T> = self.pivots(tol).iter().map(|&p| gamma[p].clone()).collect();
        self.combination(&params)
            .iter()
            .zip(gamma)
            .all(|(a, b)| a.same(b, tol.tol_zero))
    }

    /// A member with every coordinate nonzero: primes `2, 3, 5, ...` as
    /// parameters, then further prime choices if a coordinate cancels.
    pub fn generic_weights(&self, tol: &Tolerance) -> Option<Vec<T>> {
        if !self.full_support {
            return None;
        }
        let primes = primes(self.dimension() + 24);
        let d = self.dimension();
        for shift in 0..=(primes.len() - d) {
            let params: Vec<T> = primes[shift..shift + d].iter().map(|&p| T::from_i64(p)).collect();
            let v = self.combination(&params);
            if v.iter().all(|x| !x.is_zero_tol(tol.tol_zero)) {
                return Some(v);
            }
        }
        None
    }

    /// `{(1,5)_a,(4)_{2a}}+` style summary with 1-based vertices.
    pub fn notation(&self) -> String {
        let parts: Vec<String> = self
            .sublets
            .iter()
            .map(|s| {
                let vs: Vec<String> = s.vertices.iter().map(|v| (v + 1).to_string()).collect();
                format!("({})_{}", vs.join(","), s.coefficient_string())
            })
            .collect();
        format!("{{{}}}{}", parts.join(","), self.parity)
    }

    pub fn to_record(&self) -> MultipletRecord {
        MultipletRecord {
            pair: self.pair,
            parity: self.parity,
            subset: self.subset.iter().map(|v| v + 1).collect(),
            basis: self
                .weight_space
                .iter()
                .map(|b| b.iter().map(Field::weight_string).collect())
                .collect(),
            sublets: self
                .sublets
                .iter()
                .map(|s| SubletRecord {
                    vertices: s.vertices.iter().map(|v| v + 1).collect(),
                    coefficient: s.coefficient_string(),
                })
                .collect(),
            uniform: self.uniform,
            full_support: self.full_support,
            notation: self.notation(),
        }
    }
}

fn primes(count: usize) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(count);
    let mut c = 2i64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn sublets_of<T: Field>(basis: &[Vec<T>], subset: &[usize], tol: &Tolerance) -> Vec<Sublet<T>> {
    let mut out: Vec<Sublet<T>> = Vec::new();
    for (j, &m) in subset.iter().enumerate() {
        let row: Vec<T> = basis.iter().map(|b| b[j].clone()).collect();
        let found = out.iter_mut().find(|s| {
            s.coefficients
                .iter()
                .zip(&row)
                .all(|(a, b)| a.same(b, tol.tol_zero))
        });
        match found {
            Some(s) => s.vertices.push(m),
            None => out.push(Sublet {
                vertices: vec![m],
                coefficients: row,
            }),
        }
    }
    out
}

fn basis_for<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
    parity: Parity,
    tol: &Tolerance,
) -> Vec<Vec<T>> {
    let m = match parity {
        Parity::Both => kernel_condition_both(table, pair, subset),
        p => kernel_condition(table, pair, subset, p.sign()),
    };
    T::kernel_null_space(&m, tol)
}

/// Weight space from a precomputed walk table.
pub fn weight_space_with<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
    parity: Parity,
    tol: &Tolerance,
) -> Result<Option<Multiplet<T>>> {
    pair.check(table.n())?;
    check_subset(subset, table.n())?;
    let basis = basis_for(table, pair, subset, parity, tol);
    if basis.is_empty() {
        return Ok(None);
    }
    Ok(Some(Multiplet::build(*pair, subset.to_vec(), parity, basis, tol)))
}

/// All valid weight tuples for `(M, p)`, or `None` if only `γ = 0` works.
pub fn weight_space<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    subset: &[usize],
    parity: Parity,
    tol: &Tolerance,
) -> Result<Option<Multiplet<T>>> {
    weight_space_with(&WalkTable::new(g), pair, subset, parity, tol)
}

/// Multiplets of one subset with full support, in the reporting convention:
/// a single `Both` record when the two parities give the same space.
fn multiplets_of_subset<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    subset: &[usize],
    tol: &Tolerance,
) -> Vec<Multiplet<T>> {
    let plus = basis_for(table, pair, subset, Parity::Even, tol);
    let minus = basis_for(table, pair, subset, Parity::Odd, tol);
    let same_space = !plus.is_empty()
        && plus.len() == minus.len()
        && plus
            .iter()
            .flatten()
            .zip(minus.iter().flatten())
            .all(|(a, b)| a.same(b, tol.tol_zero));
    let candidates = if same_space {
        vec![(Parity::Both, plus)]
    } else {
        vec![(Parity::Even, plus), (Parity::Odd, minus)]
    };
    candidates
        .into_iter()
        .filter(|(_, b)| !b.is_empty())
        .map(|(p, b)| Multiplet::build(*pair, subset.to_vec(), p, b, tol))
        .filter(|m| m.full_support)
        .collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of subsets with `1..=max_cardinality` elements.
pub fn subset_count(n: usize, max_cardinality: usize) -> u128 {
    (1..=max_cardinality.min(n)).map(|k| binomial(n, k)).sum()
}

/// Subsets of `0..n` with `k` elements in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Enumeration from a precomputed walk table.
pub fn enumerate_multiplets_with<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    max_cardinality: usize,
    filter: ParityFilter,
    budget: u128,
    tol: &Tolerance,
) -> Result<Vec<Multiplet<T>>> {
    let n = table.n();
    pair.check(n)?;
    if max_cardinality == 0 {
        return Err(Error::InvalidArgument("maximum cardinality must be at least 1".into()));
    }
    if max_cardinality > n {
        return Err(Error::InvalidArgument(format!(
            "maximum cardinality {max_cardinality} exceeds the vertex count {n}"
        )));
    }
    let requested = subset_count(n, max_cardinality);
    if requested > budget {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    let mut out = Vec::new();
    for k in 1..=max_cardinality {
        let subsets = subsets_of_size(n, k);
        let found: Vec<Vec<Multiplet<T>>> = subsets
            .par_iter()
            .map(|s| {
                multiplets_of_subset(table, pair, s, tol)
                    .into_iter()
                    .filter(|m| filter.accepts(m.parity))
                    .collect()
            })
            .collect();
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}

/// Every full-support multiplet with at most `max_cardinality` vertices,
/// subsets in lexicographic order by size.
pub fn enumerate_multiplets<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    max_cardinality: usize,
    filter: ParityFilter,
    budget: u128,
    tol: &Tolerance,
) -> Result<Vec<Multiplet<T>>> {
    pair.check(g.n())?;
    enumerate_multiplets_with(&WalkTable::new(g), pair, max_cardinality, filter, budget, tol)
}

/// Union of two same-parity multiplets with chosen weights; overlapping
/// coordinates add. Returns the multiplet on the union support (vertices
/// whose weights cancel drop out) and the summed weight tuple.
pub fn union_multiplets<T: Field>(
    g: &Graph<T>,
    a: &Multiplet<T>,
    gamma: &[T],
    b: &Multiplet<T>,
    delta: &[T],
    tol: &Tolerance,
) -> Result<(Multiplet<T>, Vec<T>)> {
    if a.pair != b.pair {
        return Err(Error::InvalidArgument(format!(
            "multiplets refer to different pairs {} and {}",
            a.pair, b.pair
        )));
    }
    let parity = a.parity.meet(&b.parity).ok_or_else(|| Error::Refused {
        rule: "multiplet union rule".into(),
        message: format!(
            "parities {} and {} differ; only same-parity multiplets combine",
            a.parity, b.parity
        ),
    })?;
    for (m, w, name) in [(a, gamma, "first"), (b, delta, "second")] {
        if !m.contains(w, tol) || w.iter().all(|x| x.is_zero_tol(tol.tol_zero)) {
            return Err(Error::InvalidArgument(format!(
                "{name} weight tuple is not a nonzero member of its weight space"
            )));
        }
    }
    let n = g.n();
    let mut dense = vec![T::zero(); n];
    for (m, w) in [(a, gamma), (b, delta)] {
        for (&v, x) in m.subset.iter().zip(w) {
            dense[v] = dense[v].add(x);
        }
    }
    let support: Vec<usize> = (0..n).filter(|&i| !dense[i].is_zero_tol(tol.tol_zero)).collect();
    if support.is_empty() {
        return Err(Error::InvalidArgument(
            "the combined weight tuple is zero".into(),
        ));
    }
    let weights: Vec<T> = support.iter().map(|&i| dense[i].clone()).collect();
    let table = WalkTable::new(g);
    for &p in parity.signs() {
        if !satisfies_condition(&table, &a.pair, &support, &weights, p, tol) {
            return Err(Error::Verification(format!(
                "union on {:?} fails its own condition matrix for sign {p}",
                support.iter().map(|v| v + 1).collect::<Vec<_>>()
            )));
        }
    }
    let m = weight_space_with(&table, &a.pair, &support, parity, tol)?
        .ok_or_else(|| Error::Verification("union has an empty weight space".into()))?;
    Ok((m, weights))
}

/// Whether the all-ones tuple is valid, with that representative.
pub fn is_uniform<T: Field>(m: &Multiplet<T>) -> Option<Vec<T>> {
    m.uniform.then(|| vec![T::one(); m.subset.len()])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubletRecord {
    pub vertices: Vec<usize>,
    pub coefficient: String,
}

/// Serialized multiplet: 1-based vertices, exact weight strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipletRecord {
    pub pair: VertexPair,
    pub parity: Parity,
    pub subset: Vec<usize>,
    pub basis: Vec<Vec<String>>,
    pub sublets: Vec<SubletRecord>,
    pub uniform: bool,
    pub full_support: bool,
    pub notation: String,
}

impl MultipletRecord {
    /// Rebuilds the multiplet and re-certifies it on `g`.
    pub fn certify<T: Field>(&self, g: &Graph<T>, tol: &Tolerance) -> Result<Multiplet<T>> {
        if self.subset.contains(&0) {
            return Err(Error::InvalidArgument("vertex indices are 1-based".into()));
        }
        let subset: Vec<usize> = self.subset.iter().map(|v| v - 1).collect();
        let m = weight_space(g, &self.pair, &subset, self.parity, tol)?.ok_or_else(|| {
            Error::Verification(format!(
                "subset {:?} is not a {} multiplet of this graph",
                self.subset, self.parity
            ))
        })?;
        Ok(m)
    }
}

/// Output of an enumeration run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipletReport {
    pub graph: GraphFile,
    pub pair: VertexPair,
    pub cospectral: bool,
    pub max_size: usize,
    pub parity_filter: ParityFilter,
    pub multiplets: Vec<MultipletRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn p3() -> Graph<Rational> {
        Graph::from_edges(3, &[(0, 1, q(1)), (1, 2, q(1))]).unwrap()
    }

    fn pair(a: usize, b: usize) -> VertexPair {
        VertexPair::one_based(a, b).unwrap()
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(subsets_of_size(4, 2), vec![
            vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]
        ]);
        assert_eq!(subsets_of_size(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subset_count(10, 3), 10 + 45 + 120);
    }

    #[test]
    fn linear_forms() {
        let h = Rational::new(1.into(), 2.into());
        assert_eq!(linear_form(&[q(2), q(1)]), "2a+b");
        assert_eq!(linear_form(&[q(-1)]), "-a");
        assert_eq!(linear_form(&[h]), "(1/2)a");
        assert_eq!(linear_form(&[q(0), q(-3)]), "-3b");
        assert_eq!(linear_form::<Rational>(&[q(0)]), "0");
        assert_eq!(parameter_name(27), "p28");
    }

    #[test]
    fn middle_of_path_is_even_singlet() {
        let tol = Tolerance::default();
        let c = condition_matrix(&p3(), &pair(1, 3), &[1], 1).unwrap();
        assert!(c.entries.data().iter().all(|x| x == &q(0)));
        let m = weight_space(&p3(), &pair(1, 3), &[1], Parity::Even, &tol).unwrap().unwrap();
        assert_eq!(m.weight_space, vec![vec![q(1)]]);
        assert!(m.full_support && m.uniform);
        let all = enumerate_multiplets(&p3(), &pair(1, 3), 1, ParityFilter::Any, DEFAULT_BUDGET, &tol).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].subset, vec![1]);
        assert_eq!(all[0].parity, Parity::Even);
        assert_eq!(all[0].notation(), "{(2)_a}+");
    }

    #[test]
    fn pair_is_even_doublet() {
        let tol = Tolerance::default();
        let m = weight_space(&p3(), &pair(1, 3), &[0, 2], Parity::Even, &tol).unwrap().unwrap();
        assert!(m.contains(&[q(1), q(1)], &tol));
        assert!(is_uniform(&m).is_some());
        assert!(condition_matrix(&p3(), &pair(1, 3), &[], 1).is_err());
        assert!(condition_matrix(&p3(), &pair(1, 3), &[0], 2).is_err());
    }

    #[test]
    fn odd_filter_on_path() {
        let tol = Tolerance::default();
        let odd = enumerate_multiplets(&p3(), &pair(1, 3), 1, ParityFilter::Odd, DEFAULT_BUDGET, &tol).unwrap();
        assert!(odd.is_empty());
        let odd2 = enumerate_multiplets(&p3(), &pair(1, 3), 2, ParityFilter::Odd, DEFAULT_BUDGET, &tol).unwrap();
        assert_eq!(odd2.len(), 1);
        assert_eq!(odd2[0].subset, vec![0, 2]);
        assert_eq!(odd2[0].weight_space, vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn budget_guard() {
        let tol = Tolerance::default();
        let err = enumerate_multiplets(&p3(), &pair(1, 3), 3, ParityFilter::Any, 6, &tol).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { requested: 7, budget: 6 }));
        assert!(enumerate_multiplets(&p3(), &pair(1, 3), 0, ParityFilter::Any, 6, &tol).is_err());
    }

    #[test]
    fn cancelling_union_rejected() {
        let tol = Tolerance::default();
        let g = p3();
        let m = weight_space(&g, &pair(1, 3), &[1], Parity::Even, &tol).unwrap().unwrap();
        assert!(union_multiplets(&g, &m, &[q(2)], &m, &[q(-2)], &tol).is_err());
        let (u, w) = union_multiplets(&g, &m, &[q(2)], &m, &[q(3)], &tol).unwrap();
        assert_eq!(u.subset, vec![1]);
        assert_eq!(w, vec![q(5)]);
    }

    #[test]
    fn isolated_vertex_has_both_parities() {
        let tol = Tolerance::default();
        let g = Graph::from_edges(4, &[(0, 1, q(1)), (1, 2, q(1))]).unwrap();
        let all = enumerate_multiplets(&g, &pair(1, 3), 1, ParityFilter::Odd, DEFAULT_BUDGET, &tol).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].subset, vec![3]);
        assert_eq!(all[0].parity, Parity::Both);
    }

    #[test]
    fn record_round_trip() {
        let tol = Tolerance::default();
        let m = weight_space(&p3(), &pair(1, 3), &[0, 2], Parity::Odd, &tol).unwrap().unwrap();
        let r = m.to_record();
        assert_eq!(r.basis, vec![vec!["1".to_string(), "-1".to_string()]]);
        let json = serde_json::to_string(&r).unwrap();
        let back: MultipletRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.certify(&p3(), &tol).unwrap(), m);
    }
}
