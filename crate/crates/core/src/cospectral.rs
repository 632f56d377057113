//! Cospectral vertex pairs, walk matrices and walk singlets.
//!
//! Vertices `u, v` are cospectral when `[H^k]_{uu} = [H^k]_{vv}` for every
//! `k`; by Cayley–Hamilton it suffices to check `k <= N - 1`. The same
//! property is equivalent to `H \ u` and `H \ v` sharing a characteristic
//! polynomial, and both criteria are evaluated and cross-checked.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPair, WeightedIndicatorVector};
use crate::linalg::{Field, Matrix, Ring, Tolerance};
use crate::walks::WalkTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionMethod {
    DiagonalPowers,
    DeletedCharpoly,
    Both,
}

/// Evidence that a pair is cospectral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CospectralCertificate {
    pub pair: VertexPair,
    pub method: CriterionMethod,
    pub max_k_checked: usize,
    /// Largest scaled diagonal difference; zero in rational mode.
    pub residual: f64,
}

/// Evidence that a pair is not cospectral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotCospectral {
    pub pair: VertexPair,
    pub first_failing_k: usize,
}

impl NotCospectral {
    /// `([H^k]_{uu}, [H^k]_{vv})` at the failing power, in original units.
    pub fn diagonal_values<T: Field>(&self, g: &Graph<T>) -> (T, T) {
        let pows = g
            .weights()
            .power_sequence(self.first_failing_k)
            .expect("graph matrices are square");
        let p = &pows[self.first_failing_k];
        let (u, v) = (self.pair.u(), self.pair.v());
        (p.get(u, u).clone(), p.get(v, v).clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CospectralVerdict {
    Cospectral(CospectralCertificate),
    NotCospectral(NotCospectral),
}

impl CospectralVerdict {
    pub fn is_cospectral(&self) -> bool {
        matches!(self, CospectralVerdict::Cospectral(_))
    }

    pub fn certificate(&self) -> Option<&CospectralCertificate> {
        match self {
            CospectralVerdict::Cospectral(c) => Some(c),
            CospectralVerdict::NotCospectral(_) => None,
        }
    }
}

/// Walk singlet verdict for a vertex relative to a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingletParity {
    Even,
    Odd,
    /// Every walk sum vanishes, so both signs hold.
    Both,
    None,
}

impl SingletParity {
    pub fn is_singlet(&self) -> bool {
        !matches!(self, SingletParity::None)
    }

    /// Whether the singlet has parity `p` (`+1` or `-1`).
    pub fn has_sign(&self, p: i32) -> bool {
        match self {
            SingletParity::Both => true,
            SingletParity::Even => p > 0,
            SingletParity::Odd => p < 0,
            SingletParity::None => false,
        }
    }
}

/// Columns `e, He, ..., H^{N-1} e` for a weighted indicator vector `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkMatrix<T> {
    pub generator: WeightedIndicatorVector<T>,
    pub columns: Matrix<T>,
}

pub fn walk_matrix<T: Field>(g: &Graph<T>, e: &WeightedIndicatorVector<T>) -> Result<WalkMatrix<T>> {
    let n = g.n();
    if e.ambient() != n {
        return Err(Error::Dimension(format!(
            "indicator vector has ambient size {}, graph has {n} vertices",
            e.ambient()
        )));
    }
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(n);
    cols.push(e.to_dense());
    for l in 1..n {
        let next = g.weights().mul_vec(&cols[l - 1]);
        cols.push(next);
    }
    let columns = Matrix::from_fn(n, n, |s, l| cols[l][s].clone());
    Ok(WalkMatrix {
        generator: e.clone(),
        columns,
    })
}

/// First `k` at which the diagonal walk sums differ, and the largest
/// difference seen (float mode).
pub(crate) fn diagonal_mismatch<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    tol: &Tolerance,
) -> (Option<usize>, f64) {
    let (u, v) = (pair.u(), pair.v());
    let mut residual = 0.0f64;
    for k in 0..=table.max_power() {
        let (a, b) = (table.entry(k, u, u), table.entry(k, v, v));
        if !a.same(b, tol.tol_zero) {
            return (Some(k), residual);
        }
        residual = residual.max((a.to_f64() - b.to_f64()).abs());
    }
    (None, residual)
}

/// Characteristic polynomial of the kernel matrix with `c` deleted.
fn deleted_char_poly<T: Field>(kernel: &Matrix<T::Kernel>, c: usize, tol: &Tolerance) -> Vec<T::Kernel> {
    let keep: Vec<usize> = (0..kernel.rows()).filter(|&i| i != c).collect();
    T::kernel_char_poly(&kernel.principal_submatrix(&keep), tol)
}

/// Coefficient comparison. In float mode the kernel has unit norm, so the
/// coefficient of degree `d - k` is bounded by `binom(d, k)`; that bound sets
/// the comparison scale.
fn char_polys_agree<K: Ring>(a: &[K], b: &[K], tol: &Tolerance) -> bool {
    let d = a.len().saturating_sub(1);
    let mut binom = 1.0f64;
    a.iter().zip(b).enumerate().all(|(k, (x, y))| {
        if k > 0 {
            binom = binom * (d + 1 - k) as f64 / k as f64;
        }
        x.same(y, tol.tol_zero * binom.max(1.0))
    })
}

fn combine(
    pair: VertexPair,
    walks: (Option<usize>, f64),
    charpoly_equal: bool,
    max_k: usize,
) -> Result<CospectralVerdict> {
    match (walks.0, charpoly_equal) {
        (None, true) => Ok(CospectralVerdict::Cospectral(CospectralCertificate {
            pair,
            method: CriterionMethod::Both,
            max_k_checked: max_k,
            residual: walks.1,
        })),
        (Some(k), false) => Ok(CospectralVerdict::NotCospectral(NotCospectral {
            pair,
            first_failing_k: k,
        })),
        (None, false) => Err(Error::CriteriaDisagree(format!(
            "pair {pair}: diagonal walk sums agree up to k = {max_k} but the deleted characteristic polynomials differ"
        ))),
        (Some(k), true) => Err(Error::CriteriaDisagree(format!(
            "pair {pair}: deleted characteristic polynomials agree but diagonal walk sums differ at k = {k}"
        ))),
    }
}

/// Runs both criteria using a precomputed walk table.
pub fn check_pair_with<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    tol: &Tolerance,
) -> Result<CospectralVerdict> {
    pair.check(table.n())?;
    if table.max_power() + 1 < table.n() {
        return Err(Error::InvalidArgument(
            "walk table does not reach power N - 1".into(),
        ));
    }
    let walks = diagonal_mismatch(table, pair, tol);
    let cu = deleted_char_poly::<T>(table.kernel(), pair.u(), tol);
    let cv = deleted_char_poly::<T>(table.kernel(), pair.v(), tol);
    combine(*pair, walks, char_polys_agree(&cu, &cv, tol), table.n() - 1)
}

pub fn is_cospectral_pair<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    tol: &Tolerance,
) -> Result<CospectralVerdict> {
    pair.check(g.n())?;
    check_pair_with(&WalkTable::new(g), pair, tol)
}

/// Every cospectral pair, sorted lexicographically.
pub fn all_cospectral_pairs<T: Field>(g: &Graph<T>, tol: &Tolerance) -> Result<Vec<VertexPair>> {
    let n = g.n();
    if n < 2 {
        return Ok(Vec::new());
    }
    let table = WalkTable::new(g);
    let polys: Vec<Vec<T::Kernel>> = (0..n)
        .into_par_iter()
        .map(|c| deleted_char_poly::<T>(table.kernel(), c, tol))
        .collect();
    let pairs: Vec<VertexPair> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| VertexPair::new(u, v).expect("u < v")))
        .collect();
    let verdicts: Vec<Result<Option<VertexPair>>> = pairs
        .par_iter()
        .map(|pair| {
            let walks = diagonal_mismatch(&table, pair, tol);
            let same = char_polys_agree(&polys[pair.u()], &polys[pair.v()], tol);
            Ok(combine(*pair, walks, same, n - 1)?
                .is_cospectral()
                .then_some(*pair))
        })
        .collect();
    let mut out = Vec::new();
    for v in verdicts {
        if let Some(p) = v? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Singlet test from a precomputed walk table.
pub fn singlet_parity_with<T: Field>(
    table: &WalkTable<T>,
    pair: &VertexPair,
    c: usize,
    tol: &Tolerance,
) -> Result<SingletParity> {
    pair.check(table.n())?;
    if c >= table.n() {
        return Err(Error::InvalidArgument(format!(
            "vertex {} out of range for {} vertices",
            c + 1,
            table.n()
        )));
    }
    if pair.contains(c) {
        return Err(Error::InvalidArgument(format!(
            "vertex {} belongs to the pair {pair} and cannot be a singlet",
            c + 1
        )));
    }
    let (u, v) = (pair.u(), pair.v());
    let mut even = true;
    let mut odd = true;
    for k in 0..=table.max_power() {
        let (a, b) = (table.entry(k, u, c), table.entry(k, v, c));
        even &= a.same(b, tol.tol_zero);
        odd &= a.same(&b.neg(), tol.tol_zero);
        if !even && !odd {
            return Ok(SingletParity::None);
        }
    }
    Ok(match (even, odd) {
        (true, true) => SingletParity::Both,
        (true, false) => SingletParity::Even,
        (false, true) => SingletParity::Odd,
        (false, false) => SingletParity::None,
    })
}

pub fn is_walk_singlet<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    c: usize,
    tol: &Tolerance,
) -> Result<SingletParity> {
    pair.check(g.n())?;
    singlet_parity_with(&WalkTable::new(g), pair, c, tol)
}

/// Singlet verdicts for every vertex outside the pair.
pub fn singlets<T: Field>(g: &Graph<T>, pair: &VertexPair, tol: &Tolerance) -> Result<Vec<(usize, SingletParity)>> {
    pair.check(g.n())?;
    let table = WalkTable::new(g);
    (0..g.n())
        .filter(|c| !pair.contains(*c))
        .map(|c| Ok((c, singlet_parity_with(&table, pair, c, tol)?)))
        .filter(|r| !matches!(r, Ok((_, SingletParity::None))))
        .collect()
}
