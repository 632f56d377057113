//! Tables of walk sums on the scaled adjacency matrix.
//!
//! Every walk identity used in this crate is homogeneous: each side of a
//! comparison at power `k` carries the same factor `s^k` when the adjacency
//! matrix is scaled by `s`. Rational graphs are therefore scaled to integers
//! (by the lcm of the denominators) and float graphs to unit infinity norm,
//! and all comparisons run on the scaled powers.

use crate::graph::Graph;
use crate::linalg::{Field, Matrix};

/// Powers `K^0, ..., K^k_max` of the scaled adjacency matrix `K`.
#[derive(Clone, Debug)]
pub struct WalkTable<T: Field> {
    kernel: Matrix<T::Kernel>,
    powers: Vec<Matrix<T::Kernel>>,
}

impl<T: Field> WalkTable<T> {
    /// Powers up to `N - 1`, enough for every walk condition.
    pub fn new(g: &Graph<T>) -> Self {
        Self::with_max_power(g, g.n().saturating_sub(1))
    }

    pub fn with_max_power(g: &Graph<T>, k_max: usize) -> Self {
        Self::from_kernel(T::kernel_matrix(g.weights()), k_max)
    }

    pub(crate) fn from_kernel(kernel: Matrix<T::Kernel>, k_max: usize) -> Self {
        let n = kernel.rows();
        let mut powers = Vec::with_capacity(k_max + 1);
        powers.push(Matrix::identity(n));
        for k in 1..=k_max {
            let next = powers[k - 1].mul_unchecked(&kernel);
            powers.push(next);
        }
        WalkTable { kernel, powers }
    }

    pub fn n(&self) -> usize {
        self.kernel.rows()
    }

    pub fn kernel(&self) -> &Matrix<T::Kernel> {
        &self.kernel
    }

    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn power(&self, k: usize) -> &Matrix<T::Kernel> {
        &self.powers[k]
    }

    /// Scaled `[H^k]_{i,j}`.
    #[inline]
    pub fn entry(&self, k: usize, i: usize, j: usize) -> &T::Kernel {
        self.powers[k].get(i, j)
    }

    /// Scaled weighted walk sums `Σ_m γ_m [H^k]_{s,m}` for every `k` in the
    /// table, where `gamma` is already in kernel units.
    pub fn weighted_row_sums(&self, s: usize, support: &[usize], gamma: &[T::Kernel]) -> Vec<T::Kernel> {
        use crate::linalg::Ring;
        self.powers
            .iter()
            .map(|p| {
                support
                    .iter()
                    .zip(gamma)
                    .fold(T::Kernel::zero(), |acc, (&m, g)| acc.add(&p.get(s, m).mul(g)))
            })
            .collect()
    }
}
