//! Bound-state wavefunctions of the reconstructed potential.
//!
//! At each point the N wavefunctions solve one linear system: with
//! `lambda_n(x) = sqrt(2 kappa_n) exp(-kappa_n (x - x_n))` and the kernel
//! matrix `K_mn = delta_mn + lambda_m lambda_n / (kappa_m + kappa_n)`,
//! the n-th normalized wavefunction is `psi_n(x) = (K^{-1} lambda)_n`.
//! The sign convention follows the decaying tail: `psi_n e^{kappa_n x}`
//! tends to the (positive) norming constant as x grows.

use crate::dd::{self, Dd};
use crate::naive::MAX_ENTRY_EXPONENT;
use crate::spectral::ValidatedSpectrum;
use crate::tau::{build_expansion, eval_potential};
use crate::{Error, Result};

fn tail_amplitudes(s: &ValidatedSpectrum, x: f64) -> Result<Vec<f64>> {
    s.kappas()
        .iter()
        .zip(s.shifts())
        .enumerate()
        .map(|(i, (&k, &x0))| {
            let arg = k * (x - x0);
            if arg.abs() >= MAX_ENTRY_EXPONENT {
                return Err(Error::OverflowRange {
                    index: i,
                    x,
                    exponent: arg.abs(),
                });
            }
            Ok((2.0 * k).sqrt() * (-arg).exp())
        })
        .collect()
}

/// The symmetric positive-definite kernel matrix at `x`.
pub fn kernel_matrix(s: &ValidatedSpectrum, x: f64) -> Result<Vec<Vec<f64>>> {
    let lambda = tail_amplitudes(s, x)?;
    let kappas = s.kappas();
    let n = s.len();
    let mut rows = vec![vec![0.0; n]; n];
    for m in 0..n {
        for j in 0..n {
            rows[m][j] = lambda[m] * lambda[j] / (kappas[m] + kappas[j]);
            if m == j {
                rows[m][j] += 1.0;
            }
        }
    }
    Ok(rows)
}

/// All N wavefunction values at `x`, ordered like the rates (ascending
/// `kappa`, so the ground state comes last).
///
/// The solve runs in double-double arithmetic: left of the well the kernel's
/// Gram part grows like e^{2 kappa |x|} while the states stay O(1), and the
/// lost digits would otherwise surface once a stencil divides them by h^2.
pub fn eval_all_psi(s: &ValidatedSpectrum, x: f64) -> Result<Vec<f64>> {
    let kappas = s.kappas();
    let shifts = s.shifts();
    let n = s.len();
    let mut lambda = Vec::with_capacity(n);
    for i in 0..n {
        let arg = Dd::from_sum(x, -shifts[i]) * kappas[i];
        if arg.hi.abs() >= MAX_ENTRY_EXPONENT {
            return Err(Error::OverflowRange {
                index: i,
                x,
                exponent: arg.hi.abs(),
            });
        }
        lambda.push(Dd::new(2.0 * kappas[i]).sqrt() * (-arg).exp());
    }
    let mut a = vec![vec![Dd::ZERO; n]; n];
    for m in 0..n {
        for j in 0..n {
            a[m][j] = lambda[m] * lambda[j] / Dd::from_sum(kappas[m], kappas[j]);
            if m == j {
                a[m][j] = a[m][j] + Dd::ONE;
            }
        }
    }
    let mut rhs = vec![lambda];
    dd::solve_many(&mut a, &mut rhs)
        .ok_or_else(|| Error::InvalidInput(format!("singular kernel matrix at x = {x}")))?;
    Ok(rhs.pop().expect("one rhs").iter().map(|v| v.f64()).collect())
}

/// `psi_n(x)` for the 1-based state index `n` (state `n` decays like
/// `exp(-kappa_n x)`; it has `N - n` nodes).
pub fn eval_psi(s: &ValidatedSpectrum, n: usize, x: f64) -> Result<f64> {
    if n == 0 || n > s.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            count: s.len(),
        });
    }
    Ok(eval_all_psi(s, x)?[n - 1])
}

/// Internal stencil step for the residual check.
const RESIDUAL_STEP: f64 = 1e-2;

/// `|c_phys psi'' - (V - E_n) psi|` at `x`, with `psi''` from a five-point
/// stencil and `V` from the expansion evaluator.
pub fn schrodinger_residual(s: &ValidatedSpectrum, n: usize, x: f64) -> Result<f64> {
    if n == 0 || n > s.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            count: s.len(),
        });
    }
    let h = RESIDUAL_STEP;
    let psi = |x: f64| eval_psi(s, n, x);
    let second = (-psi(x - 2.0 * h)? + 16.0 * psi(x - h)? - 30.0 * psi(x)?
        + 16.0 * psi(x + h)?
        - psi(x + 2.0 * h)?)
        / (12.0 * h * h);
    let expansion = build_expansion(s)?;
    let v = eval_potential(&expansion, x);
    let kappa = s.kappas()[n - 1];
    let energy = -s.c_phys() * kappa * kappa;
    Ok((s.c_phys() * second - (v - energy) * psi(x)?).abs())
}

/// Wavefunction table sampled over a grid, exported as CSV.
#[derive(Debug, Clone)]
pub struct WavefunctionSet {
    spectrum: ValidatedSpectrum,
}

impl WavefunctionSet {
    pub fn new(spectrum: ValidatedSpectrum) -> Self {
        WavefunctionSet { spectrum }
    }

    pub fn spectrum(&self) -> &ValidatedSpectrum {
        &self.spectrum
    }

    /// CSV with header `x,psi_1,...,psi_N` and 17-significant-digit values.
    pub fn to_csv(&self, grid: &[f64]) -> Result<String> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let n = self.spectrum.len();
        let mut out = String::from("x");
        for i in 1..=n {
            out.push_str(&format!(",psi_{i}"));
        }
        out.push('\n');
        for &x in grid {
            let values = eval_all_psi(&self.spectrum, x)?;
            out.push_str(&format!("{x:.16e}"));
            for v in values {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push('\n');
        }
        Ok(out)
    }
}
