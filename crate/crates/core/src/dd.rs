//! Double-double arithmetic for the determinant-derivative cross-check.
//!
//! A value is kept as an unevaluated sum `hi + lo` with `|lo|` at most half an
//! ulp of `hi`, giving roughly 31 significant decimal digits. The naive
//! determinant route needs this headroom: near the left tail the assembled
//! matrix approaches a column-scaled copy of the clustered-rate coefficient
//! matrix, whose inverse amplifies plain f64 entry rounding past the
//! tolerances the cross-check runs at. Everything here is the classic
//! error-free-transformation toolkit; `exp` follows the usual
//! reduce/Taylor/re-square scheme.

/// `hi + lo` with the standard non-overlapping normalization.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error-free sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    /// Exact double-double of `a + b`.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact double-double of `a * b`.
    #[inline]
    pub fn from_product(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Square root by one Newton step on the f64 estimate; accurate to the
    /// full double-double width for the positive inputs used here.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let inv = 1.0 / self.hi.sqrt();
        let ax = self.hi * inv;
        let err = (self - Dd::from_product(ax, ax)).hi * (inv * 0.5);
        Dd::from_sum(ax, err)
    }

    /// Exponential: reduce by ln 2, Taylor on `r/512`, square back up, scale
    /// by the power of two. Keeps `e^r - 1` through the squarings so small
    /// results do not lose relative accuracy.
    pub fn exp(self) -> Dd {
        const LN2: Dd = Dd {
            hi: std::f64::consts::LN_2,
            lo: 2.3190468138462996e-17,
        };
        let m = (self.hi / LN2.hi).round();
        let r = (self - LN2 * m) * (1.0 / 512.0);
        // |r| <= ln2/1024, so the r^10 tail sits below the working precision.
        // Divide by k in full width: an f64 1/k would poison term k at its
        // own rounding, which the squarings then amplify 512-fold.
        let mut term = r * r * 0.5;
        let mut s = r + term;
        for k in 3..=9 {
            term = term * r / Dd::new(k as f64);
            s = s + term;
        }
        // s = e^r - 1; (1 + s)^2 - 1 = 2s + s^2, nine times for the 512.
        for _ in 0..9 {
            s = s * 2.0 + s * s;
        }
        let e = s + Dd::ONE;
        let scale = (2.0f64).powi(m as i32);
        Dd {
            hi: e.hi * scale,
            lo: e.lo * scale,
        }
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let (hi, lo) = quick_two_sum(p, e + self.lo * o);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // Long division: three quotient digits are enough at this width.
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Forward-eliminate with partial pivoting and back-substitute every
/// right-hand side in place. Returns `None` on a vanishing pivot.
pub(crate) fn solve_many(a: &mut [Vec<Dd>], bs: &mut [Vec<Dd>]) -> Option<()> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col].hi.abs().total_cmp(&a[j][col].hi.abs())
        })?;
        if a[piv][col].hi == 0.0 {
            return None;
        }
        a.swap(col, piv);
        for b in bs.iter_mut() {
            b.swap(col, piv);
        }
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            a[row][col] = Dd::ZERO;
            for j in col + 1..n {
                let t = a[col][j] * f;
                a[row][j] = a[row][j] - t;
            }
            for b in bs.iter_mut() {
                let t = b[col] * f;
                b[row] = b[row] - t;
            }
        }
    }
    for b in bs.iter_mut() {
        for row in (0..n).rev() {
            let mut acc = b[row];
            for j in row + 1..n {
                acc = acc - a[row][j] * b[j];
            }
            b[row] = acc / a[row][row];
        }
    }
    Some(())
}
