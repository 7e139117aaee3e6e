//! Bound-state spectra of solvable wells, used as presets and as the inputs
//! whose reconstructions the solver in [`crate::verify`] re-derives.

use crate::spectral::{Norming, SpectralInput};
use crate::tau::PotentialCurve;
use crate::{Error, Result};

/// Spectrum of the family with integer rates 1..N (the N(N+1) sech^2 well),
/// in symmetric norming.
pub fn integer_rate_spectrum(n: usize, c_phys: f64) -> Result<SpectralInput> {
    if n == 0 {
        return Err(Error::InvalidInput("state count must be >= 1".into()));
    }
    Ok(SpectralInput {
        kappas: (1..=n).map(|k| k as f64).collect(),
        norming: Norming::Symmetric,
        c_phys,
    })
}

/// Finite square well of dimensionless strength `r = sqrt(U0 a^2 / c_phys)`
/// (width 2a with a = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWellParams {
    /// `sqrt(U0 a^2 / c_phys)`; the number of bound states is ceil(2r/pi).
    pub strength: f64,
    pub c_phys: f64,
}

/// Number of square-well bound states for strength `r`.
pub fn square_well_count(r: f64) -> usize {
    (2.0 * r / std::f64::consts::PI).ceil() as usize
}

/// Decay rates of the finite square well, from the matching conditions
/// `u tan u = sqrt(r^2 - u^2)` (even states) and
/// `-u cot u = sqrt(r^2 - u^2)` (odd states) solved for `u = kappa a` by
/// bisection on the branch intervals of length pi/2.
pub fn square_well_spectrum(p: SquareWellParams) -> Result<SpectralInput> {
    let r = p.strength;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositive {
            what: "square well strength",
            value: r,
        });
    }
    if !(p.c_phys > 0.0) {
        return Err(Error::NonPositive {
            what: "c_phys",
            value: p.c_phys,
        });
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut roots = Vec::new();
    for branch in 0.. {
        let lo = branch as f64 * half_pi;
        if lo >= r {
            break;
        }
        let hi = (lo + half_pi).min(r);
        // Even branches have even `branch`, odd branches odd.
        let f = |u: f64| -> f64 {
            let rhs = (r * r - u * u).max(0.0).sqrt();
            if branch % 2 == 0 {
                u * u.tan() - rhs
            } else {
                -u / u.tan() - rhs
            }
        };
        // The branch function runs from below zero at `lo` to above zero
        // before `hi` (it diverges at the asymptote or stays positive at
        // u -> r), so each interval holds exactly one root.
        let mut a = lo + 1e-12 * (1.0 + lo);
        let mut b = hi - 1e-12 * (1.0 + hi);
        if a >= b {
            continue;
        }
        let (fa, fb) = (f(a), f(b));
        if fa > 0.0 || fb < 0.0 {
            return Err(Error::RootBracketFailure {
                what: "square well matching condition",
                lo: a,
                hi: b,
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if f(mid) <= 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if roots.is_empty() {
        return Err(Error::NoBoundStates { depth: r });
    }
    Ok(SpectralInput {
        kappas: roots,
        norming: Norming::Symmetric,
        c_phys: p.c_phys,
    })
}

/// Exponential well `V(x) = depth (e^{-2 rho x} - 2 e^{-rho x})` with
/// `rho = sqrt(depth / c_phys) / width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    pub depth: f64,
    /// Dimensionless width parameter; the level count is the number of
    /// half-integers below it.
    pub width: f64,
    pub c_phys: f64,
}

/// Decay rates `kappa_n = sqrt(depth/c_phys) (1 - (n + 1/2)/width)` for all
/// levels with positive rate, ascending.
pub fn morse_spectrum(p: MorseParams) -> Result<SpectralInput> {
    if !(p.depth > 0.0) || !p.depth.is_finite() {
        return Err(Error::NonPositive {
            what: "well depth",
            value: p.depth,
        });
    }
    if !(p.width > 0.0) || !p.width.is_finite() {
        return Err(Error::NonPositive {
            what: "well width",
            value: p.width,
        });
    }
    if !(p.c_phys > 0.0) {
        return Err(Error::NonPositive {
            what: "c_phys",
            value: p.c_phys,
        });
    }
    let scale = (p.depth / p.c_phys).sqrt();
    let mut kappas = Vec::new();
    for n in 0.. {
        let fraction = (n as f64 + 0.5) / p.width;
        if fraction >= 1.0 {
            break;
        }
        kappas.push(scale * (1.0 - fraction));
    }
    if kappas.is_empty() {
        return Err(Error::NoBoundStates {
            depth: scale * p.width,
        });
    }
    kappas.reverse();
    Ok(SpectralInput {
        kappas,
        norming: Norming::Symmetric,
        c_phys: p.c_phys,
    })
}

/// The exponential well itself, sampled over a grid.
pub fn morse_curve(p: MorseParams, grid: &[f64]) -> Result<PotentialCurve> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(p.depth > 0.0) || !(p.width > 0.0) || !(p.c_phys > 0.0) {
        return Err(Error::NonPositive {
            what: "well parameters",
            value: p.depth.min(p.width).min(p.c_phys),
        });
    }
    let rho = (p.depth / p.c_phys).sqrt() / p.width;
    let vs: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let e = (-rho * x).exp();
            p.depth * (e * e - 2.0 * e)
        })
        .collect();
    PotentialCurve::new(grid.to_vec(), vs, p.c_phys)
}

/// Parse a preset name: `pt:N` (integer rates), `well:R` (square well
/// strength), `morse:W` (exponential well width, unit depth).
pub fn parse_preset(text: &str, c_phys: f64) -> Result<SpectralInput> {
    let (kind, value) = text
        .split_once(':')
        .ok_or_else(|| Error::UnknownPreset(text.to_string()))?;
    match kind {
        "pt" => {
            let n: usize = value
                .parse()
                .map_err(|_| Error::UnknownPreset(text.to_string()))?;
            integer_rate_spectrum(n, c_phys)
        }
        "well" => {
            let r: f64 = value
                .parse()
                .map_err(|_| Error::UnknownPreset(text.to_string()))?;
            square_well_spectrum(SquareWellParams {
                strength: r,
                c_phys,
            })
        }
        "morse" => {
            let w: f64 = value
                .parse()
                .map_err(|_| Error::UnknownPreset(text.to_string()))?;
            morse_spectrum(MorseParams {
                depth: c_phys,
                width: w,
                c_phys,
            })
        }
        _ => Err(Error::UnknownPreset(text.to_string())),
    }
}
