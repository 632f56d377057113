//! Null spaces.
//!
//! Exact route: fraction-free Gauss–Jordan elimination on an integer matrix
//! (rows are divided by their content after every update so entries stay
//! small), followed by canonicalization of the resulting basis. Float route:
//! singular value decomposition with a relative rank cutoff.
//!
//! The canonical basis is the reduced row echelon form of the matrix whose
//! rows are the basis vectors. It is unique for a given subspace: leading
//! entries are 1, leading positions increase, and every other vector is
//! zero at a leading position.

use nalgebra::DMatrix;

use super::int::Int;
use super::matrix::Matrix;
use super::scalar::{Field, Rational, Ring};

/// Gauss–Jordan elimination without fractions. Returns the echelon rows and
/// their pivot columns.
fn integer_gauss_jordan(m: &Matrix<Int>) -> (Vec<Vec<Int>>, Vec<usize>) {
    let cols = m.cols();
    let mut rows: Vec<Vec<Int>> = (0..m.rows())
        .map(|i| m.row(i).to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Smallest nonzero entry keeps growth down.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(r, p);
        normalize_content(&mut rows[r]);
        let pivot_row = rows[r].clone();
        let piv = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                row[j] = row[j].mul(&piv).sub(&f.mul(&pivot_row[j]));
            }
            normalize_content(row);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn normalize_content(row: &mut [Int]) {
    let mut g = Int::ZERO;
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g == Int::ONE {
                return;
            }
        }
    }
    if g.is_zero() || g == Int::ONE {
        return;
    }
    for x in row.iter_mut() {
        *x = x.div_exact(&g);
    }
}

pub(crate) fn int_null_space(m: &Matrix<Int>) -> Vec<Vec<Rational>> {
    let n = m.cols();
    let (rows, pivots) = integer_gauss_jordan(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[pc] = Rational::new(row[f].neg().to_big(), row[pc].to_big());
                }
            }
            v
        })
        .collect();
    canonical_rational(basis)
}

/// Reduced row echelon form of the basis vectors (exact).
pub(crate) fn canonical_rational(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_exactly_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one().div(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_exactly_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..n {
                row[j] = row[j].sub(&f.mul(&pivot_row[j]));
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Reduced row echelon form of float basis vectors with partial pivoting.
pub(crate) fn canonical_float(mut rows: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        let (p, best) = (r..rows.len())
            .map(|i| (i, rows[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            for row in rows.iter_mut().skip(r) {
                row[c] = 0.0;
            }
            continue;
        }
        rows.swap(r, p);
        let piv = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= piv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..n {
                    row[j] -= f * pivot_row[j];
                }
            }
            row[c] = 0.0;
        }
        r += 1;
    }
    rows.truncate(r);
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.abs() <= tol {
                *x = 0.0;
            }
        }
    }
    rows
}

/// Null space by SVD; singular values at or below `tol * sigma_max` count as zero.
pub(crate) fn float_null_space(m: &Matrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let n = m.cols();
    if n == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the decomposition yields a full right basis.
    let rows = m.rows().max(n);
    let dm = DMatrix::from_fn(rows, n, |i, j| if i < m.rows() { *m.get(i, j) } else { 0.0 });
    let svd = dm.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let cutoff = tol * sigma_max;
    let basis: Vec<Vec<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max == 0.0 || s <= cutoff)
        .map(|(k, _)| (0..n).map(|j| vt[(k, j)]).collect())
        .collect();
    canonical_float(basis, tol)
}
