//! Symmetric eigendecomposition and eigenspace projectors.

use nalgebra::DMatrix;

use super::matrix::Matrix;
use super::scalar::{Ring, Tolerance};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

impl SymmetricEigen {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Groups ascending eigenvalues whose consecutive gaps are within
    /// `tol_eig_cluster` times the spectral radius (or 1 for the zero matrix).
    pub fn clusters(&self, tol: &Tolerance) -> Vec<Vec<usize>> {
        let width = tol.tol_eig_cluster * cluster_scale(self.spectral_radius());
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(last) if v - self.values[*last.last().unwrap()] <= width => last.push(k),
                _ => out.push(vec![k]),
            }
        }
        out
    }

    /// `Σ φ φᵀ` over the cluster.
    pub fn projector(&self, cluster: &[usize], tol: &Tolerance) -> Result<Matrix<f64>> {
        let n = self.n();
        if cluster.is_empty() || cluster.iter().any(|&k| k >= n) {
            return Err(Error::InvalidArgument("invalid eigenvalue cluster".into()));
        }
        let width = tol.tol_eig_cluster * cluster_scale(self.spectral_radius());
        let mut vals: Vec<f64> = cluster.iter().map(|&k| self.values[k]).collect();
        vals.sort_by(f64::total_cmp);
        if vals.windows(2).any(|w| w[1] - w[0] > width) {
            return Err(Error::InvalidArgument(format!(
                "cluster mixes eigenvalues {:.3e}..{:.3e} beyond the clustering width {width:.3e}",
                vals[0],
                vals[vals.len() - 1]
            )));
        }
        let mut p = Matrix::zeros(n, n);
        for &k in cluster {
            let phi = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    let v = p.get(i, j) + phi[i] * phi[j];
                    p.set(i, j, v);
                }
            }
        }
        Ok(p)
    }
}

fn cluster_scale(radius: f64) -> f64 {
    if radius > 0.0 {
        radius
    } else {
        1.0
    }
}

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

pub(crate) fn symmetric_eigenvalues(m: &Matrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = to_dmatrix(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigendecomposition of a symmetric matrix of any exact or float scalar.
///
/// Each eigenvector is oriented so that its largest-magnitude component
/// (first one on ties) is positive, which makes the output deterministic.
pub fn symmetric_eigen<T: Ring>(m: &Matrix<T>, tol: &Tolerance) -> Result<SymmetricEigen> {
    let mf = m.to_f64();
    if !mf.is_square() {
        return Err(Error::Dimension("eigendecomposition needs a square matrix".into()));
    }
    let n = mf.rows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (mf.get(i, j) - mf.get(j, i)).abs() > tol.tol_sym {
                return Err(Error::NotSymmetric { i: i + 1, j: j + 1 });
            }
        }
    }
    let eig = to_dmatrix(&mf).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let mut lead = 0;
        for i in 0..n {
            if v[i].abs() > v[lead].abs() + 1e-12 {
                lead = i;
            }
        }
        let sign = if v[lead] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors.set(i, col, sign * v[i]);
        }
    }
    Ok(SymmetricEigen { values, vectors })
}
