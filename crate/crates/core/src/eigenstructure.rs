//! Eigenbases with local parity on a cospectral pair and the zero-sum
//! identities that walk multiplets impose on them.
//!
//! Degenerate eigenvalues are handled only through eigenspace projectors:
//! per cluster, `e_u + e_v` and `e_u - e_v` are projected into the
//! eigenspace, normalized into the even and odd representatives, and the
//! rest of the eigenspace is completed orthogonally. Exact-mode graphs use
//! the same float eigensolver; their zero-sum verdicts come from the exact
//! multiplet condition instead of float residuals.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cospectral::{check_pair_with, singlets};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPair};
use crate::linalg::{symmetric_eigen, Field, Matrix, Mode, Ring, Tolerance};
use crate::multiplets::{enumerate_multiplets_with, satisfies_condition, Multiplet, ParityFilter};
use crate::walks::WalkTable;

/// Orthonormality threshold for a parity eigenbasis.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorParity {
    /// `φ_u = φ_v ≠ 0`.
    Even,
    /// `φ_u = -φ_v ≠ 0`.
    Odd,
    /// `φ_u = φ_v = 0`.
    Zero,
    /// Projection norm fell between `tol_zero` and `10 tol_zero`.
    Indeterminate,
}

impl VectorParity {
    /// `+1` for even, `-1` for odd.
    pub fn sign(&self) -> Option<i32> {
        match self {
            VectorParity::Even => Some(1),
            VectorParity::Odd => Some(-1),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityVector {
    pub value: f64,
    pub cluster: usize,
    pub parity: VectorParity,
    pub components: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    /// Indices into [`ParityEigenbasis::vectors`].
    pub vectors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityEigenbasis {
    pub pair: VertexPair,
    pub clusters: Vec<EigenCluster>,
    pub vectors: Vec<ParityVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCounts {
    pub even: usize,
    pub odd: usize,
    pub zero: usize,
    pub indeterminate: usize,
}

impl ParityEigenbasis {
    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn indeterminate(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&k| self.vectors[k].parity == VectorParity::Indeterminate)
            .collect()
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, va) in self.vectors.iter().enumerate() {
            for (b, vb) in self.vectors.iter().enumerate().skip(a) {
                let dot: f64 = va.components.iter().zip(&vb.components).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Largest deviation of `Σ_ν λ_ν^k φ_i^ν φ_j^ν` from `[H^k]_{ij}` over
    /// `k <= N-1`, measured after scaling `H` to unit infinity norm.
    pub fn spectral_reconstruction_error<T: Field>(&self, g: &Graph<T>) -> f64 {
        let h = g.weights().to_f64();
        let s = h.inf_norm();
        let s = if s > 0.0 { s } else { 1.0 };
        let hs = h.scale(&(1.0 / s));
        let n = self.n();
        let mut power = Matrix::<f64>::identity(n);
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let rec: f64 = self
                        .vectors
                        .iter()
                        .map(|v| (v.value / s).powi(k as i32) * v.components[i] * v.components[j])
                        .sum();
                    worst = worst.max((rec - power.get(i, j)).abs());
                }
            }
            power = power.mul_unchecked(&hs);
        }
        worst
    }
}

/// Tally of vector tags; the four counts sum to `N`.
pub fn count_parity_vectors(basis: &ParityEigenbasis) -> ParityCounts {
    let mut c = ParityCounts {
        even: 0,
        odd: 0,
        zero: 0,
        indeterminate: 0,
    };
    for v in &basis.vectors {
        match v.parity {
            VectorParity::Even => c.even += 1,
            VectorParity::Odd => c.odd += 1,
            VectorParity::Zero => c.zero += 1,
            VectorParity::Indeterminate => c.indeterminate += 1,
        }
    }
    c
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Builds the parity eigenbasis of a cospectral pair.
pub fn build_parity_basis<T: Field>(g: &Graph<T>, pair: &VertexPair, tol: &Tolerance) -> Result<ParityEigenbasis> {
    pair.check(g.n())?;
    let verdict = check_pair_with(&WalkTable::new(g), pair, tol)?;
    if !verdict.is_cospectral() {
        return Err(Error::Verification(format!(
            "pair {pair} is not cospectral, so no parity eigenbasis exists"
        )));
    }
    let h = g.weights().to_f64();
    let s = h.inf_norm();
    let s = if s > 0.0 { s } else { 1.0 };
    let eig = symmetric_eigen(&h.scale(&(1.0 / s)), tol)?;
    let n = g.n();
    let (u, v) = (pair.u(), pair.v());
    let mut clusters = Vec::new();
    let mut vectors = Vec::new();
    for (ci, cluster) in eig.clusters(tol).into_iter().enumerate() {
        let d = cluster.len();
        let value = cluster.iter().map(|&k| eig.values[k]).sum::<f64>() / d as f64 * s;
        let cols: Vec<Vec<f64>> = cluster.iter().map(|&k| eig.vector(k)).collect();
        // Coordinates of the projections of e_u ± e_v in the cluster basis.
        let a: Vec<f64> = cols.iter().map(|c| c[u]).collect();
        let b: Vec<f64> = cols.iter().map(|c| c[v]).collect();
        let mut chosen: Vec<(VectorParity, Vec<f64>)> = Vec::new();
        for sign in [1.0, -1.0] {
            let mut c: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + sign * y).collect();
            for (_, prev) in &chosen {
                let dot: f64 = c.iter().zip(prev).map(|(x, y)| x * y).sum();
                c.iter_mut().zip(prev).for_each(|(x, y)| *x -= dot * y);
            }
            let len = norm(&c);
            if len <= tol.tol_zero {
                continue;
            }
            c.iter_mut().for_each(|x| *x /= len);
            let tag = if len <= 10.0 * tol.tol_zero {
                VectorParity::Indeterminate
            } else if sign > 0.0 {
                VectorParity::Even
            } else {
                VectorParity::Odd
            };
            chosen.push((tag, c));
        }
        let k = chosen.len();
        // Orthogonal completion: Householder QR of [chosen | I] keeps the
        // span of the chosen coordinates in its first k columns.
        let m = DMatrix::from_fn(d, k + d, |i, j| if j < k { chosen[j].1[i] } else if i == j - k { 1.0 } else { 0.0 });
        let q = m.qr().q();
        let mut coords: Vec<(VectorParity, Vec<f64>)> = chosen;
        for j in k..d {
            coords.push((VectorParity::Zero, q.column(j).iter().copied().collect()));
        }
        let mut ids = Vec::with_capacity(d);
        for (tag, c) in coords {
            let mut phi = vec![0.0; n];
            for (col, w) in cols.iter().zip(&c) {
                phi.iter_mut().zip(col).for_each(|(p, x)| *p += w * x);
            }
            let len = norm(&phi);
            phi.iter_mut().for_each(|x| *x /= len);
            let lead = if phi[u].abs() > tol.tol_zero { phi[u] } else { phi[v] };
            if lead < 0.0 {
                phi.iter_mut().for_each(|x| *x = -*x);
            }
            check_tag(tag, &phi, u, v, tol)?;
            ids.push(vectors.len());
            vectors.push(ParityVector {
                value,
                cluster: ci,
                parity: tag,
                components: phi,
            });
        }
        clusters.push(EigenCluster {
            value,
            multiplicity: d,
            vectors: ids,
        });
    }
    let basis = ParityEigenbasis {
        pair: *pair,
        clusters,
        vectors,
    };
    let err = basis.orthonormality_error();
    if err > ORTHONORMAL_TOL {
        return Err(Error::Verification(format!(
            "parity eigenbasis is not orthonormal: max |VᵀV - I| = {err:.3e}"
        )));
    }
    Ok(basis)
}

fn check_tag(tag: VectorParity, phi: &[f64], u: usize, v: usize, tol: &Tolerance) -> Result<()> {
    let ok = match tag {
        VectorParity::Even => (phi[u] - phi[v]).abs() <= tol.tol_zero && phi[u].abs() > tol.tol_zero,
        VectorParity::Odd => (phi[u] + phi[v]).abs() <= tol.tol_zero && phi[u].abs() > tol.tol_zero,
        VectorParity::Zero => phi[u].abs() <= tol.tol_zero && phi[v].abs() <= tol.tol_zero,
        VectorParity::Indeterminate => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "{tag:?} eigenvector has components {:.3e} and {:.3e} on the pair",
            phi[u], phi[v]
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSumReport {
    pub eigenvector: usize,
    pub eigenvalue: f64,
    pub multiplet: String,
    /// `|Σ γ_m φ_m|` per basis weight vector.
    pub residuals: Vec<f64>,
    pub passed: bool,
}

/// Parity-`-q` eigenvectors must have vanishing weighted sums over every
/// basis weight vector of a parity-`q` multiplet. In exact mode the verdict
/// is the exact multiplet condition and the residuals are informational.
pub fn verify_zero_sums<T: Field>(
    g: &Graph<T>,
    basis: &ParityEigenbasis,
    m: &Multiplet<T>,
    tol: &Tolerance,
) -> Result<Vec<ZeroSumReport>> {
    if m.pair != basis.pair {
        return Err(Error::InvalidArgument(format!(
            "multiplet refers to {} but the basis to {}",
            m.pair, basis.pair
        )));
    }
    let exact = if T::MODE == Mode::Rational {
        let table = WalkTable::new(g);
        let ok = m.parity.signs().iter().all(|&p| {
            m.weight_space
                .iter()
                .all(|b| satisfies_condition(&table, &m.pair, &m.subset, b, p, tol))
        });
        Some(ok)
    } else {
        None
    };
    let gammas: Vec<Vec<f64>> = m
        .weight_space
        .iter()
        .map(|b| b.iter().map(Ring::to_f64).collect())
        .collect();
    let notation = m.notation();
    let reports = basis
        .vectors
        .par_iter()
        .enumerate()
        .filter(|(_, v)| v.parity.sign().is_some_and(|s| m.parity.has_sign(-s)))
        .map(|(k, v)| {
            let residuals: Vec<f64> = gammas
                .iter()
                .map(|gamma| {
                    m.subset
                        .iter()
                        .zip(gamma)
                        .map(|(&i, w)| w * v.components[i])
                        .sum::<f64>()
                        .abs()
                })
                .collect();
            let passed = exact.unwrap_or_else(|| {
                residuals
                    .iter()
                    .zip(&gammas)
                    .all(|(r, gamma)| *r <= tol.tol_zero * norm(gamma))
            });
            ZeroSumReport {
                eigenvector: k,
                eigenvalue: v.value,
                multiplet: notation.clone(),
                residuals,
                passed,
            }
        })
        .collect();
    Ok(reports)
}

/// Largest `|Σ γ_m φ_m| / ‖γ‖` over eigenvectors of parity `-q`. A value
/// above the zero threshold shows that `(M, γ)` is not a parity-`q`
/// multiplet. Requires distinct eigenvalues within each parity class.
pub fn zero_sum_violation(basis: &ParityEigenbasis, subset: &[usize], gamma: &[f64], q: i32) -> Result<f64> {
    let mut seen: Vec<usize> = Vec::new();
    let mut worst = 0.0f64;
    let scale = norm(gamma);
    if scale == 0.0 || subset.len() != gamma.len() {
        return Err(Error::InvalidArgument("weights must be nonzero and match the subset".into()));
    }
    for v in &basis.vectors {
        if v.parity.sign() != Some(-q) {
            continue;
        }
        if seen.contains(&v.cluster) {
            return Err(Error::Verification(
                "two eigenvectors of one parity share an eigenvalue cluster".into(),
            ));
        }
        seen.push(v.cluster);
        let s: f64 = subset.iter().zip(gamma).map(|(&i, w)| w * v.components[i]).sum();
        worst = worst.max(s.abs() / scale);
    }
    Ok(worst)
}

/// Vertices where one eigenvector vanishes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub eigenvector: usize,
    pub eigenvalue: f64,
    pub parity: VectorParity,
    /// 1-based vertices with `|φ_c| <= tol_zero`.
    pub zero_set: Vec<usize>,
    /// 1-based opposite-parity singlets, all of which must be in `zero_set`.
    pub required: Vec<usize>,
}

/// Zero sets of every eigenvector; fails if an opposite-parity singlet
/// carries a nonzero component.
pub fn compact_support_report<T: Field>(
    g: &Graph<T>,
    basis: &ParityEigenbasis,
    tol: &Tolerance,
) -> Result<Vec<ZeroSet>> {
    let singles = singlets(g, &basis.pair, tol)?;
    let mut out = Vec::with_capacity(basis.n());
    for (k, v) in basis.vectors.iter().enumerate() {
        let zero_set: Vec<usize> = (0..g.n())
            .filter(|&c| v.components[c].abs() <= tol.tol_zero)
            .map(|c| c + 1)
            .collect();
        let required: Vec<usize> = match v.parity.sign() {
            Some(p) => singles
                .iter()
                .filter(|(_, sp)| sp.has_sign(-p))
                .map(|(c, _)| c + 1)
                .collect(),
            None => Vec::new(),
        };
        if let Some(c) = required.iter().find(|c| !zero_set.contains(c)) {
            return Err(Error::Verification(format!(
                "eigenvector {} ({:?}, λ = {:.6}) is nonzero on singlet {c}",
                k + 1,
                v.parity,
                v.value
            )));
        }
        out.push(ZeroSet {
            eigenvector: k,
            eigenvalue: v.value,
            parity: v.parity,
            zero_set,
            required,
        });
    }
    Ok(out)
}

/// Decimal with fixed precision and no negative zero.
pub fn fixed(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportVector {
    pub id: usize,
    pub parity: VectorParity,
    pub components: Vec<String>,
    pub zero_set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportCluster {
    pub value: String,
    pub multiplicity: usize,
    pub vectors: Vec<ReportVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub pair: VertexPair,
    pub counts: ParityCounts,
    pub clusters: Vec<ReportCluster>,
    pub indeterminate: Vec<usize>,
    pub multiplets_checked: usize,
    pub zero_sums: Vec<ZeroSumReport>,
    pub all_zero_sums_hold: bool,
}

/// Parity basis, zero sets and zero sums against every multiplet with at
/// most `max_size` vertices.
pub fn eigen_report<T: Field>(
    g: &Graph<T>,
    pair: &VertexPair,
    max_size: usize,
    budget: u128,
    tol: &Tolerance,
) -> Result<EigenReport> {
    let basis = build_parity_basis(g, pair, tol)?;
    let zero_sets = compact_support_report(g, &basis, tol)?;
    let table = WalkTable::new(g);
    let multiplets = enumerate_multiplets_with(&table, pair, max_size, ParityFilter::Any, budget, tol)?;
    let mut zero_sums = Vec::new();
    for m in &multiplets {
        zero_sums.extend(verify_zero_sums(g, &basis, m, tol)?);
    }
    let clusters = basis
        .clusters
        .iter()
        .map(|c| ReportCluster {
            value: fixed(c.value, 10),
            multiplicity: c.multiplicity,
            vectors: c
                .vectors
                .iter()
                .map(|&k| ReportVector {
                    id: k + 1,
                    parity: basis.vectors[k].parity,
                    components: basis.vectors[k].components.iter().map(|x| fixed(*x, 10)).collect(),
                    zero_set: zero_sets[k].zero_set.clone(),
                })
                .collect(),
        })
        .collect();
    Ok(EigenReport {
        pair: *pair,
        counts: count_parity_vectors(&basis),
        clusters,
        indeterminate: basis.indeterminate().iter().map(|k| k + 1).collect(),
        multiplets_checked: multiplets.len(),
        all_zero_sums_hold: zero_sums.iter().all(|z| z.passed),
        zero_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use crate::multiplets::{weight_space, Parity};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn p3() -> Graph<Rational> {
        Graph::from_edges(3, &[(0, 1, q(1)), (1, 2, q(1))]).unwrap()
    }

    fn c4() -> Graph<Rational> {
        Graph::from_edges(4, &[(0, 1, q(1)), (1, 2, q(1)), (2, 3, q(1)), (3, 0, q(1))]).unwrap()
    }

    #[test]
    fn path_basis() {
        let tol = Tolerance::default();
        let pair = VertexPair::one_based(1, 3).unwrap();
        let b = build_parity_basis(&p3(), &pair, &tol).unwrap();
        let c = count_parity_vectors(&b);
        assert_eq!((c.even, c.odd, c.zero), (2, 1, 0));
        let odd = b.vectors.iter().find(|v| v.parity == VectorParity::Odd).unwrap();
        assert!(odd.value.abs() < 1e-12);
        assert!((odd.components[0] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(odd.components[1].abs() < 1e-12);
        assert!(b.spectral_reconstruction_error(&p3()) < 1e-10);
    }

    #[test]
    fn four_cycle_degenerate_cluster() {
        let tol = Tolerance::default();
        let pair = VertexPair::one_based(1, 3).unwrap();
        let b = build_parity_basis(&c4(), &pair, &tol).unwrap();
        let zero = b.clusters.iter().find(|c| c.value.abs() < 1e-9).unwrap();
        assert_eq!(zero.multiplicity, 2);
        let tags: Vec<VectorParity> = zero.vectors.iter().map(|&k| b.vectors[k].parity).collect();
        assert!(tags.contains(&VectorParity::Odd));
        assert!(tags.contains(&VectorParity::Zero));
        for cl in &b.clusters {
            let count = |t| cl.vectors.iter().filter(|&&k| b.vectors[k].parity == t).count();
            assert!(count(VectorParity::Even) <= 1 && count(VectorParity::Odd) <= 1);
        }
        assert!(b.orthonormality_error() < ORTHONORMAL_TOL);
    }

    #[test]
    fn zero_sums_and_zero_sets() {
        let tol = Tolerance::default();
        let pair = VertexPair::one_based(1, 3).unwrap();
        let g = p3();
        let b = build_parity_basis(&g, &pair, &tol).unwrap();
        let m = weight_space(&g, &pair, &[1], Parity::Even, &tol).unwrap().unwrap();
        let z = verify_zero_sums(&g, &b, &m, &tol).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].passed && z[0].residuals[0] < 1e-12);
        let sets = compact_support_report(&g, &b, &tol).unwrap();
        let odd = sets.iter().find(|s| s.parity == VectorParity::Odd).unwrap();
        assert_eq!(odd.required, vec![2]);
        assert!(zero_sum_violation(&b, &[0], &[1.0], 1).unwrap() > 1e-6);
        let gf = g.to_float();
        let bf = build_parity_basis(&gf, &pair, &tol).unwrap();
        let mf = weight_space(&gf, &pair, &[0, 2], Parity::Even, &tol).unwrap().unwrap();
        assert!(verify_zero_sums(&gf, &bf, &mf, &tol).unwrap().iter().all(|r| r.passed));
    }

    #[test]
    fn rejects_non_cospectral_pair() {
        let pair = VertexPair::one_based(1, 2).unwrap();
        assert!(matches!(
            build_parity_basis(&p3(), &pair, &Tolerance::default()),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn report_formatting() {
        assert_eq!(fixed(-1e-15, 6), "0.000000");
        assert_eq!(fixed(-0.5, 2), "-0.50");
        let r = eigen_report(&p3(), &VertexPair::one_based(1, 3).unwrap(), 2, 1000, &Tolerance::default()).unwrap();
        assert!(r.all_zero_sums_hold);
        assert_eq!(r.counts.even, 2);
    }
}
