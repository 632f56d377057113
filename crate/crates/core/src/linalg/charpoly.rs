//! Characteristic polynomials.
//!
//! For an integer matrix the Faddeev–LeVerrier recurrence stays inside the
//! integers: every auxiliary matrix is an integer polynomial in `A`, and the
//! division by `k` at each step is exact because the resulting coefficient is
//! itself an integer. Rational matrices are scaled to integers first.

use super::int::Int;
use super::matrix::Matrix;

/// Coefficients of `det(λI - A)`, highest degree first.
pub fn faddeev_leverrier_int(a: &Matrix<Int>) -> Vec<Int> {
    let n = a.rows();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Int::ONE);
    // M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
    let mut am: Matrix<Int> = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut aux = am;
        let c = coeffs[k - 1].clone();
        for i in 0..n {
            let d = aux.get(i, i).add(&c);
            aux.set(i, i, d);
        }
        am = a.mul_unchecked(&aux);
        let next = am.trace().neg().div_exact(&Int::from(k as i64));
        coeffs.push(next);
    }
    coeffs
}

pub fn faddeev_leverrier_float(a: &Matrix<f64>) -> Vec<f64> {
    let n = a.rows();
    let mut coeffs = vec![1.0];
    let mut am: Matrix<f64> = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut aux = am;
        let c = coeffs[k - 1];
        for i in 0..n {
            let d = aux.get(i, i) + c;
            aux.set(i, i, d);
        }
        am = a.mul_unchecked(&aux);
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// Expands `Π (λ - r)`, highest degree first.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for r in roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::{Field, Rational, Ring, Tolerance};

    fn int_matrix(rows: &[&[i64]]) -> Matrix<Int> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_two() {
        let c = faddeev_leverrier_int(&int_matrix(&[&[1, 0], &[0, 1]]));
        assert_eq!(c, vec![Int::from(1), Int::from(-2), Int::from(1)]);
    }

    #[test]
    fn path_three() {
        let c = faddeev_leverrier_int(&int_matrix(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]));
        assert_eq!(c, vec![Int::from(1), Int::from(0), Int::from(-2), Int::from(0)]);
    }

    /// det(λI - A) evaluated at n+1 integer points by Bareiss elimination and
    /// compared against the polynomial: an oracle independent of the recurrence.
    fn det_bareiss(m: &Matrix<Rational>) -> Rational {
        let n = m.rows();
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_exactly_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = det.neg();
            }
            let piv = a[c][c].clone();
            det = det.mul(&piv);
            for r in (c + 1)..n {
                let f = a[r][c].div(&piv);
                let (top, bottom) = a.split_at_mut(r);
                for (x, y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        det
    }

    #[test]
    fn rational_matches_determinant_oracle() {
        let vals = [[3, -1, 2, 0], [-1, 0, 5, 1], [2, 5, -2, 7], [0, 1, 7, 1]];
        let m = Matrix::from_fn(4, 4, |i, j| {
            Rational::new(vals[i][j].into(), ((i + j) % 3 + 1).into())
        });
        let m = Matrix::from_fn(4, 4, |i, j| m.get(i, j).add(m.get(j, i)));
        let coeffs = m.char_poly(&Tolerance::default()).unwrap();
        for x in -2i64..=3 {
            let lam = Rational::from_i64(x);
            let shifted = Matrix::from_fn(4, 4, |i, j| {
                let d = if i == j { lam.clone() } else { Rational::zero() };
                d.sub(m.get(i, j))
            });
            let poly = coeffs
                .iter()
                .fold(Rational::zero(), |acc, c| acc.mul(&lam).add(c));
            assert_eq!(poly, det_bareiss(&shifted), "at λ = {x}");
        }
    }

    #[test]
    fn roots_expand() {
        let c = poly_from_roots(&[1.0, 2.0]);
        assert_eq!(c, vec![1.0, -3.0, 2.0]);
    }
}
