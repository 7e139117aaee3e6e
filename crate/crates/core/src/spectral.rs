//! Spectral input: decay rates plus norming data, validated into a canonical
//! internal form.
//!
//! Each bound state contributes a decay rate `kappa_n > 0` (energy
//! `E_n = -c_phys * kappa_n^2`) and one norming degree of freedom. Externally
//! that degree of freedom arrives in one of three conventions; internally it is
//! always stored as a spatial shift `x_n`, related to the norming constant by
//! `C_n^2 = 2 kappa_n exp(2 kappa_n x_n)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest exponent `2 kappa_n x_n` for which a norming constant is still
/// representable in f64.
pub const MAX_NORMING_EXPONENT: f64 = 700.0;

/// Norming convention for the input spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormingRepr", into = "NormingRepr")]
pub enum Norming {
    /// Shifts chosen so the reconstructed potential is even in `x`.
    Symmetric,
    /// Explicit norming constants `C_n`, one per state.
    Constants(Vec<f64>),
    /// Explicit spatial shifts `x_n`, one per state.
    Shifts(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
struct NormingRepr {
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
}

impl TryFrom<NormingRepr> for Norming {
    type Error = String;

    fn try_from(repr: NormingRepr) -> std::result::Result<Self, String> {
        match repr.mode.as_str() {
            "symmetric" => match repr.values {
                None => Ok(Norming::Symmetric),
                Some(v) if v.is_empty() => Ok(Norming::Symmetric),
                Some(_) => Err("symmetric norming takes no values".into()),
            },
            "constants" => repr
                .values
                .ok_or_else(|| "constants norming requires values".to_string())
                .map(Norming::Constants),
            "shifts" => repr
                .values
                .ok_or_else(|| "shifts norming requires values".to_string())
                .map(Norming::Shifts),
            other => Err(format!("unknown norming mode {other:?}")),
        }
    }
}

impl From<Norming> for NormingRepr {
    fn from(n: Norming) -> Self {
        match n {
            Norming::Symmetric => NormingRepr {
                mode: "symmetric".into(),
                values: None,
            },
            Norming::Constants(values) => NormingRepr {
                mode: "constants".into(),
                values: Some(values),
            },
            Norming::Shifts(values) => NormingRepr {
                mode: "shifts".into(),
                values: Some(values),
            },
        }
    }
}

/// External description of a spectrum, the JSON-facing type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralInput {
    pub kappas: Vec<f64>,
    pub norming: Norming,
    #[serde(default = "default_c_phys")]
    pub c_phys: f64,
}

fn default_c_phys() -> f64 {
    1.0
}

impl SpectralInput {
    pub fn symmetric(kappas: Vec<f64>) -> Self {
        SpectralInput {
            kappas,
            norming: Norming::Symmetric,
            c_phys: 1.0,
        }
    }
}

/// A spectrum that passed validation, with norming reduced to shifts.
///
/// Fields are private so the invariants (ascending positive rates, one finite
/// shift per rate, positive `c_phys`) cannot be broken after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSpectrum {
    kappas: Vec<f64>,
    shifts: Vec<f64>,
    c_phys: f64,
}

impl ValidatedSpectrum {
    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn c_phys(&self) -> f64 {
        self.c_phys
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    /// Bound-state energies `-c_phys * kappa_n^2`, most negative first.
    pub fn energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .kappas
            .iter()
            .map(|k| -self.c_phys * k * k)
            .collect();
        e.reverse();
        e
    }

    /// External form with the shifts spelled out.
    pub fn to_input(&self) -> SpectralInput {
        SpectralInput {
            kappas: self.kappas.clone(),
            norming: Norming::Shifts(self.shifts.clone()),
            c_phys: self.c_phys,
        }
    }
}

/// Validate with the default degeneracy threshold `1e-8 * kappa_N`.
pub fn validate(input: &SpectralInput) -> Result<ValidatedSpectrum> {
    validate_with_gap(input, None)
}

/// Validate, overriding the minimum admissible gap between adjacent rates.
pub fn validate_with_gap(input: &SpectralInput, eps_gap: Option<f64>) -> Result<ValidatedSpectrum> {
    let kappas = &input.kappas;
    if kappas.is_empty() {
        return Err(Error::InvalidInput("kappas must be non-empty".into()));
    }
    for (i, &k) in kappas.iter().enumerate() {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::NonPositiveKappa { index: i, value: k });
        }
    }
    let epsilon = eps_gap.unwrap_or(1e-8 * kappas[kappas.len() - 1]);
    for i in 1..kappas.len() {
        if kappas[i] <= kappas[i - 1] {
            return Err(Error::NonAscendingSpectrum { index: i });
        }
        let gap = kappas[i] - kappas[i - 1];
        if gap < epsilon {
            return Err(Error::DegenerateGap {
                index: i,
                gap,
                epsilon,
            });
        }
    }
    if !(input.c_phys > 0.0) || !input.c_phys.is_finite() {
        return Err(Error::NonPositive {
            what: "c_phys",
            value: input.c_phys,
        });
    }

    let shifts = match &input.norming {
        Norming::Symmetric => symmetric_shifts(kappas),
        Norming::Constants(cs) => {
            if cs.len() != kappas.len() {
                return Err(Error::LengthMismatch {
                    expected: kappas.len(),
                    got: cs.len(),
                });
            }
            for (i, &c) in cs.iter().enumerate() {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::NonPositiveKappa { index: i, value: c });
                }
            }
            cs.iter()
                .zip(kappas)
                .map(|(&c, &k)| (c * c / (2.0 * k)).ln() / (2.0 * k))
                .collect()
        }
        Norming::Shifts(xs) => {
            if xs.len() != kappas.len() {
                return Err(Error::LengthMismatch {
                    expected: kappas.len(),
                    got: xs.len(),
                });
            }
            for x in xs {
                if !x.is_finite() {
                    return Err(Error::InvalidInput(format!("non-finite shift {x}")));
                }
            }
            xs.clone()
        }
    };

    Ok(ValidatedSpectrum {
        kappas: kappas.clone(),
        shifts,
        c_phys: input.c_phys,
    })
}

/// Shifts that make the reconstructed potential an even function of `x`:
/// `2 kappa_i x_i = sum_{j != i} ln((kappa_j + kappa_i)/|kappa_j - kappa_i|)`.
///
/// For a single state this gives `x_1 = 0`.
pub fn symmetric_shifts(kappas: &[f64]) -> Vec<f64> {
    let n = kappas.len();
    (0..n)
        .map(|i| {
            let sum: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| ((kappas[j] + kappas[i]) / (kappas[j] - kappas[i]).abs()).ln())
                .sum();
            sum / (2.0 * kappas[i])
        })
        .collect()
}

/// Norming constants `C_n = sqrt(2 kappa_n exp(2 kappa_n x_n))`.
pub fn norming_constants(s: &ValidatedSpectrum) -> Result<Vec<f64>> {
    s.kappas
        .iter()
        .zip(&s.shifts)
        .enumerate()
        .map(|(i, (&k, &x))| {
            let exponent = 2.0 * k * x;
            if exponent > MAX_NORMING_EXPONENT {
                return Err(Error::OverflowShift { index: i, exponent });
            }
            Ok((2.0 * k * exponent.exp()).sqrt())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn single_state_symmetric_shift_is_zero() {
        let s = validate(&SpectralInput::symmetric(vec![1.0])).unwrap();
        assert_eq!(s.shifts(), &[0.0]);
    }

    #[test]
    fn two_state_symmetric_shifts() {
        // 2*1*x1 = ln 3 and 2*2*x2 = ln 3, worked out by hand.
        let s = validate(&SpectralInput::symmetric(vec![1.0, 2.0])).unwrap();
        let ln3 = 3.0_f64.ln();
        assert_relative_eq!(s.shifts()[0], ln3 / 2.0, max_relative = 1e-15);
        assert_relative_eq!(s.shifts()[1], ln3 / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn symmetric_norming_constants_for_two_states() {
        // exp(2 kappa_n x_n) = 3 for both states, so C^2 = [6, 12].
        let s = validate(&SpectralInput::symmetric(vec![1.0, 2.0])).unwrap();
        let c = norming_constants(&s).unwrap();
        assert_relative_eq!(c[0] * c[0], 6.0, max_relative = 1e-14);
        assert_relative_eq!(c[1] * c[1], 12.0, max_relative = 1e-14);
    }

    #[test]
    fn unit_constant_gives_zero_shift() {
        let input = SpectralInput {
            kappas: vec![1.0],
            norming: Norming::Constants(vec![2.0_f64.sqrt()]),
            c_phys: 1.0,
        };
        let s = validate(&input).unwrap();
        assert_relative_eq!(s.shifts()[0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn energies_are_descending_in_magnitude_last() {
        let s = validate(&SpectralInput::symmetric(vec![1.0, 2.0, 3.0])).unwrap();
        assert_eq!(s.energies(), vec![-9.0, -4.0, -1.0]);
    }

    #[test]
    fn rejects_non_ascending() {
        let err = validate(&SpectralInput::symmetric(vec![2.0, 1.0])).unwrap_err();
        assert_eq!(err.code(), "NonAscendingSpectrum");
    }

    #[test]
    fn rejects_non_positive_kappa() {
        let err = validate(&SpectralInput::symmetric(vec![-1.0, 1.0])).unwrap_err();
        assert_eq!(err.code(), "NonPositiveKappa");
        let err = validate(&SpectralInput::symmetric(vec![f64::NAN])).unwrap_err();
        assert_eq!(err.code(), "NonPositiveKappa");
    }

    #[test]
    fn rejects_degenerate_gap() {
        let err = validate(&SpectralInput::symmetric(vec![1.0, 1.0 + 1e-12])).unwrap_err();
        assert_eq!(err.code(), "DegenerateGap");
        // A wider threshold can be requested explicitly.
        let err = validate_with_gap(&SpectralInput::symmetric(vec![1.0, 1.05]), Some(0.1))
            .unwrap_err();
        assert_eq!(err.code(), "DegenerateGap");
    }

    #[test]
    fn rejects_length_mismatch() {
        let input = SpectralInput {
            kappas: vec![1.0, 2.0],
            norming: Norming::Shifts(vec![0.0]),
            c_phys: 1.0,
        };
        assert_eq!(validate(&input).unwrap_err().code(), "LengthMismatch");
    }

    #[test]
    fn rejects_non_positive_c_phys() {
        let mut input = SpectralInput::symmetric(vec![1.0]);
        input.c_phys = 0.0;
        assert_eq!(validate(&input).unwrap_err().code(), "NonPositive");
    }

    #[test]
    fn norming_constant_overflow_is_reported() {
        let input = SpectralInput {
            kappas: vec![1.0],
            norming: Norming::Shifts(vec![400.0]),
            c_phys: 1.0,
        };
        let s = validate(&input).unwrap();
        assert_eq!(
            norming_constants(&s).unwrap_err().code(),
            "OverflowShift"
        );
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"kappas":[1.0,2.0],"norming":{"mode":"symmetric"},"c_phys":1.0}"#;
        let input: SpectralInput = serde_json::from_str(text).unwrap();
        assert_eq!(input.norming, Norming::Symmetric);
        let back = serde_json::to_string(&input).unwrap();
        let reparsed: SpectralInput = serde_json::from_str(&back).unwrap();
        assert_eq!(input, reparsed);

        let text = r#"{"kappas":[1.0],"norming":{"mode":"constants","values":[1.5]}}"#;
        let input: SpectralInput = serde_json::from_str(text).unwrap();
        assert_eq!(input.norming, Norming::Constants(vec![1.5]));
        assert_eq!(input.c_phys, 1.0);
    }

    #[test]
    fn json_rejects_unknown_mode() {
        let text = r#"{"kappas":[1.0],"norming":{"mode":"weird"},"c_phys":1.0}"#;
        assert!(serde_json::from_str::<SpectralInput>(text).is_err());
    }

    fn ascending_kappas() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.1f64..10.0, 1..7).prop_map(|mut v| {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            v
        })
    }

    proptest! {
        /// Moment identity: sum_i kappa_i x_i equals the sum of all pairwise
        /// couplings ln((k_j + k_i)/|k_j - k_i|) over i < j.
        #[test]
        fn symmetric_shift_moment_identity(kappas in ascending_kappas()) {
            let shifts = symmetric_shifts(&kappas);
            let lhs: f64 = kappas.iter().zip(&shifts).map(|(k, x)| k * x).sum();
            let mut rhs = 0.0;
            for i in 0..kappas.len() {
                for j in (i + 1)..kappas.len() {
                    rhs += ((kappas[j] + kappas[i]) / (kappas[j] - kappas[i])).ln();
                }
            }
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        /// Rescaling every rate by lambda rescales the shifts by 1/lambda.
        #[test]
        fn symmetric_shift_scaling(kappas in ascending_kappas(), lambda in 0.5f64..2.0) {
            let base = symmetric_shifts(&kappas);
            let scaled_k: Vec<f64> = kappas.iter().map(|k| k * lambda).collect();
            let scaled = symmetric_shifts(&scaled_k);
            for (b, s) in base.iter().zip(&scaled) {
                prop_assert!((s - b / lambda).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }

        /// Constants -> shifts -> constants is the identity.
        #[test]
        fn norming_round_trip(kappas in ascending_kappas(), seed in 0u64..1000) {
            let n = kappas.len();
            let constants: Vec<f64> = (0..n)
                .map(|i| 0.5 + ((seed as f64) * 0.37 + i as f64 * 1.3).sin().abs() * 3.0)
                .collect();
            let input = SpectralInput {
                kappas: kappas.clone(),
                norming: Norming::Constants(constants.clone()),
                c_phys: 1.0,
            };
            if let Ok(s) = validate(&input) {
                let back = norming_constants(&s).unwrap();
                for (c, b) in constants.iter().zip(&back) {
                    prop_assert!((c - b).abs() <= 1e-12 * c.abs());
                }
            }
        }
    }
}
