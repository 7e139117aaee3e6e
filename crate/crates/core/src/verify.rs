//! Independent verification: a direct Schroedinger solver that knows nothing
//! about the reconstruction internals.
//!
//! Given a sampled curve it re-derives bound-state energies by shooting from
//! both tails and matching Wronskians, estimates reflection coefficients by
//! integrating a complex scattering solution, and checks the depth-weighted
//! sum rule `integral V dx = -4 c_phys sum kappa_n`. Agreement closes the
//! loop: spectrum -> potential -> spectrum.

use num_complex::Complex64;
use serde::Serialize;

use crate::spectral::ValidatedSpectrum;
use crate::tau::{build_expansion, sample_potential, PotentialCurve};
use crate::{Error, Result};

/// Integration direction for [`numerov_integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromLeft,
    FromRight,
}

/// Scan resolution of the energy sweep in [`bound_states`].
const SCAN_POINTS: usize = 512;

/// Relative tail-size threshold for "the curve has decayed at its ends".
const DECAY_FRACTION: f64 = 1e-6;

fn uniform_step(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if xs.len() < 3 {
        return Err(Error::InvalidInput(
            "grid too short for integration".into(),
        ));
    }
    let h = xs[1] - xs[0];
    for i in 1..xs.len() {
        let deviation = (xs[i] - xs[i - 1] - h).abs();
        if deviation > 1e-9 * h.abs() {
            return Err(Error::NonUniformGrid { index: i, deviation });
        }
    }
    Ok(h)
}

fn check_decayed(curve: &PotentialCurve) -> Result<()> {
    let scale = curve.vs.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let threshold = DECAY_FRACTION * scale;
    for idx in [0, curve.len() - 1] {
        let tail = curve.vs[idx].abs();
        if tail > threshold {
            return Err(Error::InsufficientDecay {
                x: curve.xs[idx],
                tail,
            });
        }
    }
    Ok(())
}

/// Integrate `c_phys y'' = (V - E) y` across the whole grid with the
/// fourth-order three-term recurrence, starting from a decaying-tail
/// initialization (`E` must be negative).
pub fn numerov_integrate(
    curve: &PotentialCurve,
    energy: f64,
    direction: Direction,
) -> Result<Vec<f64>> {
    let h = uniform_step(&curve.xs)?;
    if !(energy < 0.0) {
        return Err(Error::InvalidInput(format!(
            "tail-initialized integration needs E < 0, got {energy}"
        )));
    }
    let c = curve.c_phys;
    let f: Vec<f64> = curve.vs.iter().map(|&v| (v - energy) / c).collect();
    let n = f.len();
    let kappa = (-energy / c).sqrt();
    let mut y = vec![0.0; n];
    match direction {
        Direction::FromLeft => {
            y[0] = 1.0;
            y[1] = (kappa * h).exp();
            numerov_forward(&f, h, &mut y, 1, n - 1);
        }
        Direction::FromRight => {
            y[n - 1] = 1.0;
            y[n - 2] = (kappa * h).exp();
            numerov_backward(&f, h, &mut y, n - 2, 0);
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "integration overflowed; shrink the domain or deepen the energy".into(),
        ));
    }
    Ok(y)
}

/// Advance y[from+1..=to] assuming y[from-1], y[from] are set.
fn numerov_forward(f: &[f64], h: f64, y: &mut [f64], from: usize, to: usize) {
    let w = h * h / 12.0;
    for i in from..to {
        let num = 2.0 * y[i] * (1.0 + 5.0 * w * f[i]) - y[i - 1] * (1.0 - w * f[i - 1]);
        y[i + 1] = num / (1.0 - w * f[i + 1]);
    }
}

/// Advance y[to..from-1] assuming y[from], y[from+1] are set.
fn numerov_backward(f: &[f64], h: f64, y: &mut [f64], from: usize, to: usize) {
    let w = h * h / 12.0;
    let mut i = from;
    while i > to {
        let num = 2.0 * y[i] * (1.0 + 5.0 * w * f[i]) - y[i + 1] * (1.0 - w * f[i + 1]);
        y[i - 1] = num / (1.0 - w * f[i - 1]);
        i -= 1;
    }
}

/// Normalized Wronskian mismatch of the two tail solutions at `m`.
///
/// Both solutions are rescaled by the peak of their three matching samples,
/// which keeps the value in range and its sign continuous in the energy.
fn wronskian_at(f: &[f64], h: f64, m: usize, kappa: f64) -> f64 {
    let n = f.len();
    let mut yl = vec![0.0; m + 2];
    yl[0] = 1.0;
    yl[1] = (kappa * h).exp();
    numerov_forward(f, h, &mut yl, 1, m + 1);

    let mut yr = vec![0.0; n];
    yr[n - 1] = 1.0;
    yr[n - 2] = (kappa * h).exp();
    numerov_backward(f, h, &mut yr, n - 2, m - 1);

    let scale_l = yl[m - 1].abs().max(yl[m].abs()).max(yl[m + 1].abs());
    let scale_r = yr[m - 1].abs().max(yr[m].abs()).max(yr[m + 1].abs());
    let l = [yl[m - 1] / scale_l, yl[m] / scale_l, yl[m + 1] / scale_l];
    let r = [yr[m - 1] / scale_r, yr[m] / scale_r, yr[m + 1] / scale_r];
    let dl = (l[2] - l[0]) / (2.0 * h);
    let dr = (r[2] - r[0]) / (2.0 * h);
    l[1] * dr - dl * r[1]
}

/// Recover the `count` most strongly bound energies of a sampled curve by a
/// Wronskian-sign sweep over `E = -c_phys kappa^2` followed by bisection.
///
/// The curve must span the classically forbidden tails (several decay
/// lengths beyond the well) on a uniform grid. Energies come back ascending,
/// i.e. deepest first. Finding more or fewer sign changes than `count` is an
/// error rather than a truncation.
pub fn bound_states(curve: &PotentialCurve, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidInput("state count must be >= 1".into()));
    }
    let h = uniform_step(&curve.xs)?;
    let n = curve.len();
    if n < 32 {
        return Err(Error::InvalidInput("grid too short for shooting".into()));
    }
    let c = curve.c_phys;
    let (min_idx, v_min) = curve
        .vs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| {
            if v < acc.1 {
                (i, v)
            } else {
                acc
            }
        });
    if !(v_min < 0.0) {
        return Err(Error::NoBoundStates { depth: v_min });
    }
    let kappa_max = (-v_min / c).sqrt() * (1.0 - 1e-12);
    // Matching one decay length off the minimum avoids the symmetric case
    // where odd states have a node exactly at the match point.
    let offset = (1.0 / (kappa_max * h)).round() as usize;
    let m = (min_idx + offset).clamp(2, n - 3);

    let sweep = |kappa: f64| -> f64 {
        let energy = -c * kappa * kappa;
        let f: Vec<f64> = curve.vs.iter().map(|&v| (v - energy) / c).collect();
        wronskian_at(&f, h, m, kappa)
    };

    let mut roots = Vec::new();
    let mut prev_kappa = kappa_max / SCAN_POINTS as f64;
    let mut prev_w = sweep(prev_kappa);
    for j in 2..=SCAN_POINTS {
        let kappa = kappa_max * j as f64 / SCAN_POINTS as f64;
        let w = sweep(kappa);
        if w == 0.0 {
            roots.push(kappa);
        } else if prev_w != 0.0 && w.signum() != prev_w.signum() {
            let (mut a, mut b) = (prev_kappa, kappa);
            let mut fa = prev_w;
            for _ in 0..64 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = sweep(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_kappa = kappa;
        prev_w = w;
    }
    if roots.len() != count {
        return Err(Error::StateCountMismatch {
            expected: count,
            found: roots.len(),
        });
    }
    let mut energies: Vec<f64> = roots.iter().map(|k| -c * k * k).collect();
    energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(energies)
}

/// |R(k)|: integrate a transmitted plane wave from the right tail to the
/// left, then split the left-tail solution into incident and reflected
/// plane waves by value and five-point derivative.
pub fn reflection_coefficient(curve: &PotentialCurve, k: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::NonPositive {
            what: "wavenumber",
            value: k,
        });
    }
    let h = uniform_step(&curve.xs)?;
    let n = curve.len();
    if n < 16 {
        return Err(Error::InvalidInput("grid too short for scattering".into()));
    }
    check_decayed(curve)?;
    let c = curve.c_phys;
    let energy = c * k * k;
    let f: Vec<f64> = curve.vs.iter().map(|&v| (v - energy) / c).collect();

    let w = h * h / 12.0;
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[n - 1] = (Complex64::i() * k * curve.xs[n - 1]).exp();
    y[n - 2] = (Complex64::i() * k * curve.xs[n - 2]).exp();
    let mut i = n - 2;
    while i > 0 {
        let num = y[i] * 2.0 * (1.0 + 5.0 * w * f[i]) - y[i + 1] * (1.0 - w * f[i + 1]);
        y[i - 1] = num / (1.0 - w * f[i - 1]);
        i -= 1;
    }

    let j = 2;
    let psi = y[j];
    let dpsi = (-y[j + 2] + y[j + 1] * 8.0 - y[j - 1] * 8.0 + y[j - 2]) / (12.0 * h);
    let ik = Complex64::i() * k;
    let incident = (psi + dpsi / ik) * 0.5;
    let reflected = (psi - dpsi / ik) * 0.5;
    Ok(reflected.norm() / incident.norm())
}

/// Trapezoid integral of the curve against the closed-form value
/// `-4 c_phys sum kappa_n`; returns `(integral, expected)`.
pub fn sum_rule(curve: &PotentialCurve, s: &ValidatedSpectrum) -> Result<(f64, f64)> {
    if curve.len() < 2 {
        return Err(Error::InvalidInput("grid too short for quadrature".into()));
    }
    if (curve.c_phys - s.c_phys()).abs() > 1e-12 * s.c_phys() {
        return Err(Error::InvalidInput(format!(
            "curve c_phys {} does not match spectrum c_phys {}",
            curve.c_phys,
            s.c_phys()
        )));
    }
    check_decayed(curve)?;
    let mut integral = 0.0;
    for i in 1..curve.len() {
        integral +=
            0.5 * (curve.xs[i] - curve.xs[i - 1]) * (curve.vs[i] + curve.vs[i - 1]);
    }
    let expected = -4.0 * s.c_phys() * s.kappas().iter().sum::<f64>();
    Ok((integral, expected))
}

/// Everything the round-trip check produces, JSON-ready.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub recovered_energies: Vec<f64>,
    pub target_energies: Vec<f64>,
    pub reflection_samples: Vec<(f64, f64)>,
    pub sum_rule: (f64, f64),
    pub max_energy_residual: f64,
    pub max_reflection: f64,
}

impl VerificationReport {
    pub fn passes(&self, energy_tolerance: f64, reflection_tolerance: f64) -> bool {
        self.max_energy_residual <= energy_tolerance
            && self.max_reflection <= reflection_tolerance
    }
}

/// Grid and gate settings for [`run_verification`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// `(min, max, step)`; defaults to `[-30/kappa_1, 30/kappa_1]` with
    /// step 1e-3.
    pub grid: Option<(f64, f64, f64)>,
    pub energy_tolerance: f64,
    pub reflection_tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid: None,
            energy_tolerance: 1e-4,
            reflection_tolerance: 1e-3,
        }
    }
}

/// Uniform grid `min, min+step, ..` including `max` up to rounding slack.
pub fn linear_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::NonPositive {
            what: "grid step",
            value: step,
        });
    }
    if !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidInput(format!("bad grid range {min}..{max}")));
    }
    let span = ((max - min) / step * (1.0 + 1e-12) + 1e-9).floor() as usize;
    if span > 50_000_000 {
        return Err(Error::InvalidInput(format!(
            "grid of {span} points is unreasonably large"
        )));
    }
    Ok((0..=span).map(|i| min + step * i as f64).collect())
}

/// Full round trip: reconstruct the potential and re-derive its spectrum,
/// reflection samples at `k = {0.5, 1, 2} kappa_1`, and the sum rule.
pub fn run_verification(
    s: &ValidatedSpectrum,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let kappa_1 = s.kappas()[0];
    let (min, max, step) = opts.grid.unwrap_or_else(|| {
        let span = 30.0 / kappa_1;
        (-span, span, 1e-3)
    });
    let grid = linear_grid(min, max, step)?;
    let expansion = build_expansion(s)?;
    let curve = sample_potential(&expansion, &grid)?;

    let recovered = bound_states(&curve, s.len())?;
    let target = s.energies();
    let max_energy_residual = recovered
        .iter()
        .zip(&target)
        .map(|(r, t)| (r - t).abs() / t.abs())
        .fold(0.0f64, f64::max);

    let mut reflection_samples = Vec::new();
    let mut max_reflection = 0.0f64;
    for factor in [0.5, 1.0, 2.0] {
        let k = factor * kappa_1;
        let r = reflection_coefficient(&curve, k)?;
        max_reflection = max_reflection.max(r);
        reflection_samples.push((k, r));
    }

    let sum = sum_rule(&curve, s)?;

    Ok(VerificationReport {
        recovered_energies: recovered,
        target_energies: target,
        reflection_samples,
        sum_rule: sum,
        max_energy_residual,
        max_reflection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{validate, SpectralInput};
    use approx::assert_relative_eq;

    fn reconstructed(kappas: &[f64], min: f64, max: f64, step: f64) -> PotentialCurve {
        let s = validate(&SpectralInput::symmetric(kappas.to_vec())).unwrap();
        let e = build_expansion(&s).unwrap();
        sample_potential(&e, &linear_grid(min, max, step).unwrap()).unwrap()
    }

    #[test]
    fn free_decay_is_exponential() {
        let xs = linear_grid(0.0, 5.0, 1e-3).unwrap();
        let vs = vec![0.0; xs.len()];
        let curve = PotentialCurve::new(xs, vs, 1.0).unwrap();
        let y = numerov_integrate(&curve, -1.0, Direction::FromRight).unwrap();
        // y is 1 at the right end and grows leftward like e^{-x}.
        for (i, &x) in curve.xs.iter().enumerate().step_by(500) {
            assert_relative_eq!(y[i], (5.0 - x).exp(), max_relative = 1e-8);
        }
    }

    #[test]
    fn integration_needs_negative_energy() {
        let curve = reconstructed(&[1.0], -5.0, 5.0, 0.01);
        assert!(numerov_integrate(&curve, 1.0, Direction::FromLeft).is_err());
    }

    #[test]
    fn nonuniform_grid_is_rejected() {
        let mut xs = linear_grid(0.0, 1.0, 0.01).unwrap();
        let vs = vec![0.0; xs.len()];
        xs[50] += 1e-4;
        let curve = PotentialCurve::new(xs, vs, 1.0).unwrap();
        assert_eq!(
            numerov_integrate(&curve, -1.0, Direction::FromLeft)
                .unwrap_err()
                .code(),
            "NonUniformGrid"
        );
    }

    #[test]
    fn single_state_energy_recovered() {
        let curve = reconstructed(&[1.0], -20.0, 20.0, 1e-3);
        let energies = bound_states(&curve, 1).unwrap();
        assert_relative_eq!(energies[0], -1.0, max_relative = 1e-9);
    }

    #[test]
    fn two_state_energies_recovered() {
        let curve = reconstructed(&[1.0, 2.0], -25.0, 25.0, 1e-3);
        let energies = bound_states(&curve, 2).unwrap();
        assert_relative_eq!(energies[0], -4.0, max_relative = 1e-8);
        assert_relative_eq!(energies[1], -1.0, max_relative = 1e-8);
    }

    #[test]
    fn wrong_expected_count_is_an_error() {
        let curve = reconstructed(&[1.0], -20.0, 20.0, 1e-3);
        assert_eq!(
            bound_states(&curve, 2).unwrap_err().code(),
            "StateCountMismatch"
        );
    }

    #[test]
    fn repulsive_curve_has_no_bound_states() {
        let xs = linear_grid(-10.0, 10.0, 0.01).unwrap();
        let vs = vec![0.0; xs.len()];
        let curve = PotentialCurve::new(xs, vs, 1.0).unwrap();
        assert_eq!(
            bound_states(&curve, 1).unwrap_err().code(),
            "NoBoundStates"
        );
    }

    #[test]
    fn free_wave_does_not_reflect() {
        let xs = linear_grid(-10.0, 10.0, 0.01).unwrap();
        let vs = vec![0.0; xs.len()];
        let curve = PotentialCurve::new(xs, vs, 1.0).unwrap();
        let r = reflection_coefficient(&curve, 1.0).unwrap();
        assert!(r < 1e-9, "free reflection {r}");
    }

    #[test]
    fn reconstructed_well_is_reflectionless() {
        let curve = reconstructed(&[1.0], -20.0, 20.0, 0.01);
        for k in [0.5, 1.0, 2.0] {
            let r = reflection_coefficient(&curve, k).unwrap();
            assert!(r < 1e-5, "reflection {r} at k = {k}");
        }
    }

    #[test]
    fn short_tails_are_detected() {
        let curve = reconstructed(&[1.0], -2.0, 2.0, 0.01);
        assert_eq!(
            reflection_coefficient(&curve, 1.0).unwrap_err().code(),
            "InsufficientDecay"
        );
        let s = validate(&SpectralInput::symmetric(vec![1.0])).unwrap();
        assert_eq!(
            sum_rule(&curve, &s).unwrap_err().code(),
            "InsufficientDecay"
        );
    }

    #[test]
    fn single_state_sum_rule() {
        let curve = reconstructed(&[1.0], -20.0, 20.0, 1e-3);
        let s = validate(&SpectralInput::symmetric(vec![1.0])).unwrap();
        let (integral, expected) = sum_rule(&curve, &s).unwrap();
        assert_eq!(expected, -4.0);
        assert_relative_eq!(integral, expected, max_relative = 1e-6);
    }

    #[test]
    fn report_round_trip_for_two_states() {
        let s = validate(&SpectralInput::symmetric(vec![1.0, 2.0])).unwrap();
        let report = run_verification(&s, &VerifyOptions::default()).unwrap();
        assert_eq!(report.target_energies, vec![-4.0, -1.0]);
        assert!(report.max_energy_residual < 1e-8);
        assert!(report.max_reflection < 1e-6);
        assert!(report.passes(1e-4, 1e-3));
        assert!(!report.passes(1e-12, 1e-3));
        let json = serde_json::to_string(&report).unwrap();
        for field in [
            "recovered_energies",
            "target_energies",
            "reflection_samples",
            "sum_rule",
            "max_energy_residual",
            "max_reflection",
        ] {
            assert!(json.contains(field), "missing {field}");
        }
    }

    #[test]
    fn grid_construction_is_inclusive() {
        let g = linear_grid(-5.0, 5.0, 0.01).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g[0], -5.0);
        assert_relative_eq!(g[1000], 5.0, epsilon = 1e-12);
        assert!(linear_grid(0.0, 1.0, -0.1).is_err());
        assert!(linear_grid(1.0, 0.0, 0.1).is_err());
    }
}
