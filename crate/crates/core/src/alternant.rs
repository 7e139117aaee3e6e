//! Closed-form determinants of the symmetric interaction matrices built from a
//! set of decay rates.
//!
//! For rates `k_1 < ... < k_n` the matrix has unit diagonal and off-diagonal
//! entries `2 sqrt(k_i k_j) / (k_i + k_j)`. Its determinant collapses to the
//! pair product
//!
//! ```text
//!   D(k_1..k_n) = prod_{i<j} ((k_j - k_i) / (k_j + k_i))^2
//! ```
//!
//! which is what the expansion in [`crate::tau`] uses for every coefficient.
//! The numeric determinants in this module exist only to check that product
//! and are deliberately capped at small orders.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Mat;
use crate::{Error, Result};

/// Order above which [`alternant_product`] switches to log-domain
/// accumulation to dodge underflow of the raw pair product.
const LOG_DOMAIN_THRESHOLD: usize = 16;

/// Largest order accepted by [`alternant_det_oracle`].
pub const DET_ORACLE_MAX: usize = 12;

/// A strictly ascending set of positive decay rates; may be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaSubset {
    values: Vec<f64>,
}

impl KappaSubset {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &k) in values.iter().enumerate() {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::NonPositiveKappa { index: i, value: k });
            }
        }
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                return Err(Error::NonAscendingSpectrum { index: i });
            }
            if values[i] == values[i - 1] {
                return Err(Error::DegenerateGap {
                    index: i,
                    gap: 0.0,
                    epsilon: 0.0,
                });
            }
        }
        Ok(KappaSubset { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `ln D` via the pair product; always finite for a valid subset, and never
/// positive since each factor lies in (0, 1].
pub fn log_alternant_product(s: &KappaSubset) -> f64 {
    let k = &s.values;
    let mut acc = 0.0;
    for i in 0..k.len() {
        for j in (i + 1)..k.len() {
            acc += 2.0 * ((k[j] - k[i]) / (k[j] + k[i])).ln();
        }
    }
    acc
}

/// The determinant `D` through the closed-form pair product.
///
/// Empty and singleton subsets give 1. Above order 16 the product is
/// accumulated in the log domain.
pub fn alternant_product(s: &KappaSubset) -> f64 {
    if s.len() > LOG_DOMAIN_THRESHOLD {
        return log_alternant_product(s).exp();
    }
    let k = &s.values;
    let mut acc = 1.0;
    for i in 0..k.len() {
        for j in (i + 1)..k.len() {
            let r = (k[j] - k[i]) / (k[j] + k[i]);
            acc *= r * r;
        }
    }
    acc
}

/// The same determinant evaluated by row-pivoted elimination on the explicit
/// matrix, independently of the pair product.
///
/// Clustered rates drive `D` far below the f64 cancellation floor (an 8-set
/// drawn from a decade of rates routinely lands near 1e-30), so the
/// elimination runs in exact rational arithmetic. The square roots factor
/// out first: the matrix is `diag(sqrt(2k)) H diag(sqrt(2k))` with
/// `H_ij = 1/(k_i + k_j)`, hence `det = prod(2k_i) * det(H)`, and `H` has
/// exact rational entries for f64 rates. One rounding at the very end.
pub fn alternant_det_oracle(s: &KappaSubset) -> Result<f64> {
    let n = s.len();
    if n > DET_ORACLE_MAX {
        return Err(Error::SizeLimit {
            what: "alternant determinant oracle",
            limit: DET_ORACLE_MAX,
            got: n,
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let rates: Vec<BigRational> = s
        .values
        .iter()
        .map(|&k| BigRational::from_float(k).expect("rates are finite"))
        .collect();
    let h: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (&rates[i] + &rates[j]).recip())
                .collect()
        })
        .collect();
    let mut det = exact_det(h);
    let two = BigRational::from_integer(BigInt::from(2));
    for r in &rates {
        det *= &two * r;
    }
    Ok(ratio_to_f64(&det))
}

/// Determinant by Gaussian elimination over exact rationals; the pivot is
/// the first nonzero entry in each column, with swap parity tracked.
fn exact_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return BigRational::zero(),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &pivot;
            for j in col..n {
                let sub = &factor * &m[col][j];
                m[row][j] -= sub;
            }
        }
    }
    det
}

/// Rational to f64 without overflowing on huge numerators or denominators:
/// shift both into an 80-bit window, divide, and restore the exponent.
fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let shift_n = (r.numer().bits() as i64 - 80).max(0);
    let shift_d = (r.denom().bits() as i64 - 80).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().expect("<= 80 bits");
    let d = (r.denom() >> shift_d as usize).to_f64().expect("<= 80 bits");
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (n.abs() / d.abs()) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Vandermonde product `prod_{i<j} (k_j - k_i)`; 1 for orders 0 and 1.
pub fn vandermonde(s: &KappaSubset) -> f64 {
    let k = &s.values;
    let mut acc = 1.0;
    for i in 0..k.len() {
        for j in (i + 1)..k.len() {
            acc *= k[j] - k[i];
        }
    }
    acc
}

/// LU determinant of an arbitrary square matrix given as rows.
pub fn generic_det(rows: &[Vec<f64>]) -> Result<f64> {
    let n = rows.len();
    for row in rows {
        if row.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    let mut m = Mat::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m.lu_det())
}
