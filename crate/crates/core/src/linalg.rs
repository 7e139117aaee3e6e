//! Small dense matrix helpers: LU with partial pivoting and a permutation-sum
//! determinant. Everything here targets matrices of order <= ~20, so no
//! blocking or allocation tricks are warranted.

#[derive(Debug, Clone)]
pub(crate) struct Mat {
    pub n: usize,
    /// Row-major storage, length n*n.
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            a: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    /// Determinant via LU with partial pivoting. Exact zero on a fully
    /// singular column.
    pub fn lu_det(mut self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            let mut best = self.at(col, col).abs();
            for row in (col + 1)..n {
                let v = self.at(row, col).abs();
                if v > best {
                    best = v;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    self.a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let d = self.at(col, col);
            det *= d;
            for row in (col + 1)..n {
                let factor = self.at(row, col) / d;
                if factor != 0.0 {
                    for j in (col + 1)..n {
                        let v = self.at(row, j) - factor * self.at(col, j);
                        self.set(row, j, v);
                    }
                }
            }
        }
        det
    }

    /// Determinant as the signed sum over all n! permutations (Heap's
    /// algorithm). Exponential; test-only cross-check for `lu_det`.
    #[cfg(test)]
    pub fn perm_det(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let product = |perm: &[usize]| -> f64 {
            let mut p = 1.0;
            for (i, &j) in perm.iter().enumerate() {
                p *= self.at(i, j);
            }
            p
        };
        let mut perm: Vec<usize> = (0..n).collect();
        let mut counters = vec![0usize; n];
        let mut sign = 1.0;
        let mut det = product(&perm);
        let mut i = 0;
        while i < n {
            if counters[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(counters[i], i);
                }
                sign = -sign;
                det += sign * product(&perm);
                counters[i] += 1;
                i = 0;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn from_rows(rows: &[&[f64]]) -> Mat {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn lu_det_known_values() {
        assert_eq!(Mat::zeros(0).lu_det(), 1.0);
        let m = from_rows(&[&[3.0]]);
        assert_eq!(m.lu_det(), 3.0);
        let m = from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_relative_eq!(m.lu_det(), -2.0, max_relative = 1e-14);
        // Singular: second row is twice the first.
        let m = from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(m.lu_det(), 0.0);
    }

    #[test]
    fn lu_det_matches_permutation_sum() {
        // Deterministic pseudo-random entries.
        let n = 5;
        let mut m = Mat::zeros(n);
        let mut state = 12345u64;
        for i in 0..n {
            for j in 0..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5;
                m.set(i, j, v);
            }
        }
        let lu = m.clone().lu_det();
        let perm = m.perm_det();
        assert_relative_eq!(lu, perm, max_relative = 1e-11);
    }

}
