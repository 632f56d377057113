//! Scalar tower: exact rationals and tolerance-governed doubles.
//!
//! Two layers are involved. [`Ring`] is the arithmetic every dense routine
//! needs, implemented for the public scalars and for the exact integer
//! kernel type [`Int`]. [`Field`] adds division, parsing and the
//! mode-specific routines (scaling, null spaces, characteristic
//! polynomials) that differ between exact and floating evaluation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::int::Int;
use super::matrix::Matrix;
use super::{charpoly, eigen, nullspace};
use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Rational => f.write_str("rational"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected rational|float)")),
        }
    }
}

/// Thresholds for float-mode decisions. Ignored by exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Absolute zero threshold, applied after scaling.
    pub tol_zero: f64,
    /// Allowed asymmetry `|a_ij - a_ji|`.
    pub tol_sym: f64,
    /// Eigenvalue grouping width relative to the spectral radius.
    pub tol_eig_cluster: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            tol_zero: 1e-9,
            tol_sym: 1e-12,
            tol_eig_cluster: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(tol_zero: f64, tol_sym: f64, tol_eig_cluster: f64) -> Result<Self> {
        for (name, v) in [
            ("tol_zero", tol_zero),
            ("tol_sym", tol_sym),
            ("tol_eig_cluster", tol_eig_cluster),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Tolerance {
            tol_zero,
            tol_sym,
            tol_eig_cluster,
        })
    }

    pub fn with_zero(mut self, tol_zero: f64) -> Result<Self> {
        self = Tolerance::new(tol_zero, self.tol_sym, self.tol_eig_cluster)?;
        Ok(self)
    }
}

/// Arithmetic shared by every dense routine.
///
/// `same` and `is_zero_tol` are exact comparisons for exact types; the
/// tolerance argument only matters for `f64`.
pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_tol(&self, tol: f64) -> bool;
    fn same(&self, o: &Self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
}

impl Ring for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn one() -> Self {
        Int::ONE
    }
    fn add(&self, o: &Self) -> Self {
        Int::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Int::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Int::mul(self, o)
    }
    fn neg(&self) -> Self {
        Int::neg(self)
    }
    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn same(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }
    fn to_f64(&self) -> f64 {
        Int::to_f64(self)
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_tol(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn same(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn same(&self, o: &Self, tol: f64) -> bool {
        (self - o).abs() <= tol * 1f64.max(self.abs()).max(o.abs())
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Public scalar type of a graph: [`Rational`] (exact) or `f64`.
pub trait Field: Ring + PartialEq + fmt::Display {
    /// Integer-like type used for scaled walk computations.
    type Kernel: Ring;
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_exactly_zero(&self) -> bool;
    fn total_cmp(&self, o: &Self) -> Ordering;
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Parses a weight string: optional sign, integer, `p/q` or decimal.
    fn parse_weight(s: &str) -> std::result::Result<Self, String>;
    /// Canonical string that `parse_weight` maps back to the same value.
    fn weight_string(&self) -> String;

    /// Scaled copy of `m` on which walk conditions are evaluated. Every
    /// walk identity used here is homogeneous in a global scale factor.
    fn kernel_matrix(m: &Matrix<Self>) -> Matrix<Self::Kernel>;
    /// Scaled copy of a weight vector (homogeneous conditions only).
    fn kernel_vector(v: &[Self]) -> Vec<Self::Kernel>;
    /// Canonical null-space basis of a kernel matrix, expressed in `Self`.
    fn kernel_null_space(m: &Matrix<Self::Kernel>, tol: &Tolerance) -> Vec<Vec<Self>>;
    /// Canonical null-space basis of `m`.
    fn null_space(m: &Matrix<Self>, tol: &Tolerance) -> Vec<Vec<Self>>;
    /// Monic characteristic polynomial, highest degree first.
    fn char_poly(m: &Matrix<Self>, tol: &Tolerance) -> Vec<Self>;
    /// Characteristic polynomial of a kernel matrix, in kernel units.
    fn kernel_char_poly(m: &Matrix<Self::Kernel>, tol: &Tolerance) -> Vec<Self::Kernel>;
    /// Matrix brought to a common scale for tolerance comparisons.
    fn comparison_scale(m: &Matrix<Self>) -> Matrix<Self>;
}

pub(crate) fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for r in it {
        let d = r.denom();
        if !d.is_one() {
            l = l.lcm(d);
        }
    }
    l
}

/// Scales a rational matrix to integers by the lcm of its denominators.
pub(crate) fn rational_to_int(m: &Matrix<Rational>) -> (Matrix<Int>, BigInt) {
    let l = lcm_of_denominators(m.data());
    let out = m.map(|r| Int::from_big(r.numer() * (&l / r.denom())));
    (out, l)
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty weight".into());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in `{t}`"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in `{t}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{t}`"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(t)
}

/// Exact value of a decimal literal, including an optional exponent.
fn parse_decimal(t: &str) -> std::result::Result<Rational, String> {
    let err = || format!("invalid weight `{t}`");
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        Ok(Rational::from_integer(num * num_traits::pow(ten, scale as usize)))
    } else {
        Ok(Rational::new(num, num_traits::pow(ten, (-scale) as usize)))
    }
}

pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Field for Rational {
    type Kernel = Int;
    const MODE: Mode = Mode::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_exactly_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn total_cmp(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn abs_f64(&self) -> f64 {
        Ring::to_f64(&self.abs())
    }
    fn parse_weight(s: &str) -> std::result::Result<Self, String> {
        parse_rational(s)
    }
    fn weight_string(&self) -> String {
        rational_string(self)
    }
    fn kernel_matrix(m: &Matrix<Self>) -> Matrix<Int> {
        rational_to_int(m).0
    }
    fn kernel_vector(v: &[Self]) -> Vec<Int> {
        let l = lcm_of_denominators(v);
        v.iter()
            .map(|r| Int::from_big(r.numer() * (&l / r.denom())))
            .collect()
    }
    fn kernel_null_space(m: &Matrix<Int>, _tol: &Tolerance) -> Vec<Vec<Self>> {
        nullspace::int_null_space(m)
    }
    fn null_space(m: &Matrix<Self>, _tol: &Tolerance) -> Vec<Vec<Self>> {
        // Each row may be scaled independently without changing the null space.
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            rows.extend(Self::kernel_vector(m.row(i)));
        }
        nullspace::int_null_space(&Matrix::from_vec(m.rows(), m.cols(), rows))
    }
    fn char_poly(m: &Matrix<Self>, _tol: &Tolerance) -> Vec<Self> {
        let (scaled, l) = rational_to_int(m);
        let coeffs = charpoly::faddeev_leverrier_int(&scaled);
        let l = Rational::from_integer(l);
        let mut factor = <Rational as One>::one();
        coeffs
            .into_iter()
            .map(|c| {
                let v = Rational::from_integer(c.to_big()) / &factor;
                factor = &factor * &l;
                v
            })
            .collect()
    }
    fn kernel_char_poly(m: &Matrix<Int>, _tol: &Tolerance) -> Vec<Int> {
        charpoly::faddeev_leverrier_int(m)
    }
    fn comparison_scale(m: &Matrix<Self>) -> Matrix<Self> {
        m.clone()
    }
}

impl Field for f64 {
    type Kernel = f64;
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        Ring::to_f64(r)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_exactly_zero(&self) -> bool {
        *self == 0.0
    }
    fn total_cmp(&self, o: &Self) -> Ordering {
        f64::total_cmp(self, o)
    }
    fn parse_weight(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| format!("invalid weight `{t}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("invalid weight `{t}`"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{t}`"));
            }
            return Ok(p / q);
        }
        let v: f64 = t.parse().map_err(|_| format!("invalid weight `{t}`"))?;
        if !v.is_finite() {
            return Err(format!("non-finite weight `{t}`"));
        }
        Ok(v)
    }
    fn weight_string(&self) -> String {
        format!("{self}")
    }
    fn kernel_matrix(m: &Matrix<Self>) -> Matrix<f64> {
        let norm = m.inf_norm();
        if norm > 0.0 {
            m.map(|x| x / norm)
        } else {
            m.clone()
        }
    }
    fn kernel_vector(v: &[Self]) -> Vec<f64> {
        let norm = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if norm > 0.0 {
            v.iter().map(|x| x / norm).collect()
        } else {
            v.to_vec()
        }
    }
    fn kernel_null_space(m: &Matrix<f64>, tol: &Tolerance) -> Vec<Vec<Self>> {
        nullspace::float_null_space(m, tol.tol_zero)
    }
    fn null_space(m: &Matrix<Self>, tol: &Tolerance) -> Vec<Vec<Self>> {
        nullspace::float_null_space(m, tol.tol_zero)
    }
    fn char_poly(m: &Matrix<Self>, tol: &Tolerance) -> Vec<Self> {
        if m.is_symmetric_within(tol.tol_sym) {
            let values = eigen::symmetric_eigenvalues(m);
            charpoly::poly_from_roots(&values)
        } else {
            charpoly::faddeev_leverrier_float(m)
        }
    }
    fn kernel_char_poly(m: &Matrix<f64>, tol: &Tolerance) -> Vec<f64> {
        Self::char_poly(m, tol)
    }
    fn comparison_scale(m: &Matrix<Self>) -> Matrix<Self> {
        Self::kernel_matrix(m)
    }
}
