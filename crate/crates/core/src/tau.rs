//! The cosh-term expansion of the reconstruction determinant and its
//! stabilized evaluator.
//!
//! For `N` states the determinant expands into exactly `2^(N-1)` terms, one
//! per subset/complement pair `{T, T^c}` of the state indices:
//!
//! ```text
//!   tau(x) = sum_T  a_T e^{alpha_T(x)} + a_{T^c} e^{-alpha_T(x)}
//!          = sum_T  2 A_T cosh(slope_T * x + offset_T)
//! ```
//!
//! with `a_T = D(kappa_T)` from [`crate::alternant`],
//! `alpha_T = sum_{l not in T} kappa_l (x - x_l) - sum_{l in T} kappa_l (x - x_l)`,
//! `A_T = sqrt(a_T a_{T^c})`, and the potential `V = -2 c_phys (ln tau)''`.
//! Everything is evaluated in the log domain, so the potential stays finite
//! far beyond the range where the determinant itself overflows.

use serde::{Deserialize, Serialize};

use crate::spectral::ValidatedSpectrum;
use crate::{Error, Result};

/// Largest state count for which the expansion is materialized; 2^(N-1)
/// terms get expensive in memory beyond this.
pub const MAX_EXPANSION_ORDER: usize = 22;

/// One subset/complement pair of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct TauTerm {
    /// Sorted 0-based state indices carrying the minus sign in `alpha_T`;
    /// `|subset| <= floor(N/2)`, and at `|subset| = N/2` only the
    /// representative containing state 0 is kept.
    pub subset: Vec<usize>,
    /// `ln A_T = (ln D(kappa_T) + ln D(kappa_T^c)) / 2`.
    pub coeff_log: f64,
    /// `d alpha_T / dx = sum_{l not in T} kappa_l - sum_{l in T} kappa_l`.
    pub slope: f64,
    /// The x-independent part of the cosh argument, including the
    /// `ln(a_T / a_{T^c}) / 2` contribution from unequal pair coefficients.
    pub offset: f64,
}

/// The full expansion for one spectrum; terms sorted by descending slope.
#[derive(Debug, Clone)]
pub struct TauExpansion {
    spectrum: ValidatedSpectrum,
    terms: Vec<TauTerm>,
}

impl TauExpansion {
    pub fn spectrum(&self) -> &ValidatedSpectrum {
        &self.spectrum
    }

    pub fn terms(&self) -> &[TauTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// Value of `ln tau` and its first two x-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauEval {
    pub log_tau: f64,
    pub dlog_tau: f64,
    pub d2log_tau: f64,
}

/// Enumerate the subset/complement pairs and their closed-form coefficients.
pub fn build_expansion(s: &ValidatedSpectrum) -> Result<TauExpansion> {
    let n = s.len();
    if n > MAX_EXPANSION_ORDER {
        return Err(Error::SizeLimit {
            what: "cosh-term expansion",
            limit: MAX_EXPANSION_ORDER,
            got: n,
        });
    }
    let kappas = s.kappas();
    let shifts = s.shifts();

    // Pairwise log-ratio table: pair_log[i][j] = 2 ln((k_j - k_i)/(k_j + k_i)),
    // so ln D over a subset is the sum over its internal pairs.
    let mut pair_log = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 2.0 * ((kappas[j] - kappas[i]) / (kappas[j] + kappas[i])).ln();
            pair_log[i * n + j] = v;
        }
    }
    let log_d_masked = |mask: u32| -> f64 {
        let mut acc = 0.0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut upper = rest;
            while upper != 0 {
                let j = upper.trailing_zeros() as usize;
                upper &= upper - 1;
                acc += pair_log[i * n + j];
            }
        }
        acc
    };

    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut terms = Vec::with_capacity(1usize << (n - 1));
    for mask in 0..=full {
        let size = mask.count_ones() as usize;
        let canonical = 2 * size < n || (2 * size == n && (mask & 1) == 1);
        if !canonical {
            continue;
        }
        let log_d_t = log_d_masked(mask);
        let log_d_tc = log_d_masked(full & !mask);
        let mut slope = 0.0;
        let mut phi = 0.0;
        let mut subset = Vec::with_capacity(size);
        for l in 0..n {
            if mask & (1 << l) != 0 {
                slope -= kappas[l];
                phi += kappas[l] * shifts[l];
                subset.push(l);
            } else {
                slope += kappas[l];
                phi -= kappas[l] * shifts[l];
            }
        }
        terms.push(TauTerm {
            subset,
            coeff_log: 0.5 * (log_d_t + log_d_tc),
            slope,
            offset: phi + 0.5 * (log_d_t - log_d_tc),
        });
    }
    debug_assert_eq!(terms.len(), 1usize << (n - 1));
    terms.sort_by(|a, b| {
        b.slope
            .partial_cmp(&a.slope)
            .unwrap()
            .then_with(|| a.subset.cmp(&b.subset))
    });
    Ok(TauExpansion {
        spectrum: s.clone(),
        terms,
    })
}

/// Evaluate `ln tau`, `(ln tau)'`, `(ln tau)''` at `x`.
///
/// Each term contributes two exponentials with signed slopes; a running-max
/// log-sum keeps every intermediate in range for any finite `x`.
pub fn eval_tau(e: &TauExpansion, x: f64) -> TauEval {
    let mut m = f64::NEG_INFINITY;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut add = |slope: f64, logw: f64| {
        if logw > m {
            let scale = (m - logw).exp();
            s0 *= scale;
            s1 *= scale;
            s2 *= scale;
            m = logw;
        }
        let w = (logw - m).exp();
        s0 += w;
        s1 += slope * w;
        s2 += slope * slope * w;
    };
    for t in e.terms() {
        let arg = t.slope * x + t.offset;
        add(t.slope, t.coeff_log + arg);
        add(-t.slope, t.coeff_log - arg);
    }
    let mean = s1 / s0;
    TauEval {
        log_tau: m + s0.ln(),
        dlog_tau: mean,
        d2log_tau: s2 / s0 - mean * mean,
    }
}

/// The reconstructed potential `V(x) = -2 c_phys (ln tau)''`.
pub fn eval_potential(e: &TauExpansion, x: f64) -> f64 {
    -2.0 * e.spectrum().c_phys() * eval_tau(e, x).d2log_tau
}

/// A sampled potential, the exchange format between reconstruction and the
/// independent solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub xs: Vec<f64>,
    pub vs: Vec<f64>,
    pub c_phys: f64,
}

impl PotentialCurve {
    pub fn new(xs: Vec<f64>, vs: Vec<f64>, c_phys: f64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if xs.len() != vs.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: vs.len(),
            });
        }
        for i in 1..xs.len() {
            if !(xs[i] > xs[i - 1]) {
                return Err(Error::InvalidInput(format!(
                    "grid not strictly ascending at index {i}"
                )));
            }
        }
        if xs.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite curve value".into()));
        }
        Ok(PotentialCurve { xs, vs, c_phys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// CSV with a fixed `x,V` header and 17-significant-digit values.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 48 + 4);
        out.push_str("x,V\n");
        for (x, v) in self.xs.iter().zip(&self.vs) {
            out.push_str(&format!("{x:.16e},{v:.16e}\n"));
        }
        out
    }
}

/// Sample the potential over a grid of x values.
pub fn sample_potential(e: &TauExpansion, grid: &[f64]) -> Result<PotentialCurve> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let vs: Vec<f64> = grid.iter().map(|&x| eval_potential(e, x)).collect();
    PotentialCurve::new(grid.to_vec(), vs, e.spectrum().c_phys())
}

/// Amplitudes grouped by |slope| and normalized by the empty-subset term,
/// the compact way to display a symmetric-mode expansion. Pairs come back
/// sorted by descending |slope|.
pub fn merged_amplitudes(e: &TauExpansion) -> Vec<(f64, f64)> {
    let lead = e
        .terms()
        .iter()
        .find(|t| t.subset.is_empty())
        .expect("expansion always contains the empty subset");
    let tol = 1e-9 * lead.slope.max(1.0);
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for t in e.terms() {
        let key = t.slope.abs();
        let amp = (t.coeff_log - lead.coeff_log).exp();
        match groups.iter_mut().find(|(s, _)| (*s - key).abs() <= tol) {
            Some((_, sum)) => *sum += amp,
            None => groups.push((key, amp)),
        }
    }
    groups.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    groups
}
