//! Closed-form quantities for thermal graph states.
//!
//! Everything is expressed through the Boltzmann ratio `t = e^{-2β}`
//! (k_B = 1). A thermal graph state is the ideal state after independent
//! Z errors with probability `p = t / (1 + t)`, so the fidelity is
//! `(1 + t)^{-n}` and the expectation of a stabilizer product depends on
//! the setting only through the number of X/Y sites.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::identities::bracket_row;

/// Largest `n` accepted by [`expectation_general`].
pub const MAX_GENERAL_QUBITS: usize = 1024;

/// Inverse temperature. `ZeroTemperature` is the exact `T = 0` limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Beta {
    Finite(f64),
    ZeroTemperature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub beta: Beta,
    pub p_flip: f64,
}

impl ThermalParams {
    /// `beta = +inf` is taken as the zero-temperature sentinel.
    pub fn from_beta(beta: f64) -> Result<Self> {
        check_range("beta", beta, beta >= 0.0 && !beta.is_nan(), "[0, inf]")?;
        if beta == f64::INFINITY {
            return Ok(Self::zero_temperature());
        }
        Ok(ThermalParams {
            beta: Beta::Finite(beta),
            p_flip: p_beta(beta)?,
        })
    }

    /// `T = 0` gives the sentinel; otherwise `beta = 1 / T`.
    pub fn from_temperature(temperature: f64) -> Result<Self> {
        check_range(
            "temperature",
            temperature,
            temperature >= 0.0 && temperature.is_finite(),
            "[0, inf)",
        )?;
        if temperature == 0.0 {
            Ok(Self::zero_temperature())
        } else {
            Self::from_beta(1.0 / temperature)
        }
    }

    /// From `t = e^{-2β}` in `[0, 1]`; `t = 0` is zero temperature.
    pub fn from_boltzmann_ratio(t: f64) -> Result<Self> {
        check_range("boltzmann ratio", t, (0.0..=1.0).contains(&t), "[0, 1]")?;
        if t == 0.0 {
            return Ok(Self::zero_temperature());
        }
        Ok(ThermalParams {
            beta: Beta::Finite(-t.ln() / 2.0),
            p_flip: t / (1.0 + t),
        })
    }

    pub fn zero_temperature() -> Self {
        ThermalParams {
            beta: Beta::ZeroTemperature,
            p_flip: 0.0,
        }
    }

    /// `β`, or `+inf` at zero temperature.
    pub fn beta(&self) -> f64 {
        match self.beta {
            Beta::Finite(b) => b,
            Beta::ZeroTemperature => f64::INFINITY,
        }
    }

    pub fn temperature(&self) -> f64 {
        match self.beta {
            Beta::Finite(b) => 1.0 / b,
            Beta::ZeroTemperature => 0.0,
        }
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta == Beta::ZeroTemperature
    }

    /// `t = e^{-2β}`.
    pub fn boltzmann_ratio(&self) -> f64 {
        match self.beta {
            Beta::Finite(b) => (-2.0 * b).exp(),
            Beta::ZeroTemperature => 0.0,
        }
    }

    /// `ln(1 + t)`, used for the `(1 + t)^{-n}` normalization.
    fn log_partition_per_qubit(&self) -> f64 {
        self.boltzmann_ratio().ln_1p()
    }
}

/// `p_β = e^{-2β} / (1 + e^{-2β})`.
pub fn p_beta(beta: f64) -> Result<f64> {
    check_range("beta", beta, beta >= 0.0 && !beta.is_nan(), "[0, inf]")?;
    if beta == f64::INFINITY {
        return Ok(0.0);
    }
    let t = (-2.0 * beta).exp();
    Ok(t / (1.0 + t))
}

fn require_qubits(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::TooFewQubits { n, min: 1 })
    } else {
        Ok(())
    }
}

fn require_even(n: usize) -> Result<()> {
    if n % 2 != 0 {
        Err(Error::OddQubitCount { n })
    } else {
        Ok(())
    }
}

/// `<G|ρ_T|G> = (1 + e^{-2β})^{-n}`.
pub fn fidelity(n: usize, thermal: &ThermalParams) -> Result<f64> {
    require_qubits(n)?;
    Ok((-(n as f64) * thermal.log_partition_per_qubit()).exp())
}

/// Neumaier-compensated sum.
fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let s = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `ln |x|` for an arbitrarily large nonzero integer.
fn ln_abs(x: &num_bigint::BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 1000 {
        mag.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 64;
        let top = (mag >> shift).to_f64().expect("64-bit head");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `Tr[ρ_T S_ℓ]` for any setting with `wt` X/Y sites.
///
/// Each bracket coefficient is an exact integer; the terms
/// `bracket_m * t^m / (1 + t)^n` are formed in log space and summed with
/// compensation, so the alternating integer brackets never pass through
/// floating point.
pub fn expectation_general(n: usize, wt: usize, thermal: &ThermalParams) -> Result<f64> {
    require_qubits(n)?;
    if wt > n {
        return Err(Error::WeightOutOfRange { wt, n });
    }
    if n > MAX_GENERAL_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_GENERAL_QUBITS,
        });
    }
    let t = thermal.boltzmann_ratio();
    if t == 0.0 || wt == 0 {
        return Ok(1.0);
    }
    let ln_t = t.ln();
    let ln_norm = n as f64 * thermal.log_partition_per_qubit();
    let brackets = bracket_row(n, wt)?;
    let terms = brackets.iter().enumerate().filter_map(|(m, b)| {
        use num_traits::{Signed, Zero};
        if b.is_zero() {
            return None;
        }
        let magnitude = (ln_abs(b) + m as f64 * ln_t - ln_norm).exp();
        Some(if b.is_negative() { -magnitude } else { magnitude })
    });
    Ok(compensated_sum(terms))
}

/// `Tr[ρ_T S]` for a half-weight setting: `(1 - t^2)^{n/2} / (1 + t)^n`.
pub fn expectation_optimal(n: usize, thermal: &ThermalParams) -> Result<f64> {
    require_qubits(n)?;
    require_even(n)?;
    let t = thermal.boltzmann_ratio();
    let k = (n / 2) as f64;
    Ok((k * (-t * t).ln_1p() - n as f64 * t.ln_1p()).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `n e^{-4β} / (2 (1 + e^{-2β})^n) + ε`.
    pub theorem1_bound: f64,
    /// `2/n + ε`.
    pub coarse_bound: f64,
    pub union_bound_value: f64,
    /// `|n - 2 wt|` for the measured setting.
    pub leading_coefficient: u64,
}

/// Accuracy bounds for a setting of weight `wt`. The bound values are
/// those of the half-weight setting; `leading_coefficient` records how far
/// the actual setting is from it.
pub fn bound_report(
    n: usize,
    wt: usize,
    thermal: &ThermalParams,
    epsilon: f64,
) -> Result<BoundReport> {
    require_even(n)?;
    if n < 4 {
        return Err(Error::TooFewQubits { n, min: 4 });
    }
    if wt > n {
        return Err(Error::WeightOutOfRange { wt, n });
    }
    check_range("epsilon", epsilon, epsilon > 0.0 && epsilon < 1.0, "(0, 1)")?;
    let t = thermal.boltzmann_ratio();
    let fine = n as f64 * t * t / 2.0 * fidelity(n, thermal)? + epsilon;
    let coarse = 2.0 / n as f64 + epsilon;
    debug_assert!(fine <= coarse * (1.0 + 1e-12), "fine {fine} > coarse {coarse}");
    Ok(BoundReport {
        theorem1_bound: fine,
        coarse_bound: coarse,
        union_bound_value: union_bound(n, thermal)?,
        leading_coefficient: (n as i64 - 2 * wt as i64).unsigned_abs(),
    })
}

/// Both accuracy bounds for the half-weight setting (n even, n >= 4).
pub fn theorem1_bound(n: usize, thermal: &ThermalParams, epsilon: f64) -> Result<BoundReport> {
    bound_report(n, n / 2, thermal, epsilon)
}

/// `|n - 2 wt| e^{-2β} / (1 + e^{-2β})^n`, the first-order deviation of
/// `Tr[ρ_T S_ℓ]` from the fidelity.
pub fn deviation_leading_term(n: usize, wt: usize, thermal: &ThermalParams) -> Result<f64> {
    require_qubits(n)?;
    if wt > n {
        return Err(Error::WeightOutOfRange { wt, n });
    }
    let coeff = (n as f64 - 2.0 * wt as f64).abs();
    Ok(coeff * thermal.boltzmann_ratio() * fidelity(n, thermal)?)
}

/// `1 - n p_β`; may be negative.
pub fn union_bound(n: usize, thermal: &ThermalParams) -> Result<f64> {
    require_qubits(n)?;
    Ok(1.0 - n as f64 * thermal.p_flip)
}

/// Hoeffding sample count `ceil(2/ε² · ln(2/δ))`.
///
/// A value within floating rounding of an integer is taken as that
/// integer before the ceiling, so exact cases like `ln(2/δ) = 2` do not
/// round up by one.
pub fn sample_size(epsilon: f64, delta: f64) -> Result<u64> {
    check_range("epsilon", epsilon, epsilon > 0.0 && epsilon <= 1.0, "(0, 1]")?;
    check_range("delta", delta, delta > 0.0 && delta < 1.0, "(0, 1)")?;
    let value = 2.0 / (epsilon * epsilon) * (2.0 / delta).ln();
    let nearest = value.round();
    let rounding = 8.0 * f64::EPSILON * value;
    let n = if (value - nearest).abs() <= rounding {
        nearest
    } else {
        value.ceil()
    };
    Ok(n.max(1.0) as u64)
}

/// Which closed form an observed value is matched against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionTarget {
    /// `Tr[ρ_T S]` for a half-weight setting, what `F_est` converges to.
    #[default]
    Estimator,
    /// The fidelity `(1 + t)^{-n}`.
    Fidelity,
}

/// Absolute bisection tolerance on β.
pub const INVERSION_TOLERANCE: f64 = 1e-10;

/// The unique temperature whose closed form equals `observed`.
pub fn invert_temperature(
    n: usize,
    observed: f64,
    target: InversionTarget,
) -> Result<ThermalParams> {
    require_qubits(n)?;
    check_range(
        "observed",
        observed,
        observed > 0.0 && observed <= 1.0,
        "(0, 1]",
    )?;
    if observed == 1.0 {
        return Ok(ThermalParams::zero_temperature());
    }
    match target {
        InversionTarget::Fidelity => {
            // (1 + t)^{-n} = F  =>  t = F^{-1/n} - 1
            let t = (-observed.ln() / n as f64).exp_m1();
            check_range(
                "observed",
                observed,
                t <= 1.0,
                "[2^-n, 1] for a fidelity",
            )?;
            ThermalParams::from_boltzmann_ratio(t)
        }
        InversionTarget::Estimator => {
            require_even(n)?;
            let value =
                |beta: f64| expectation_optimal(n, &ThermalParams::from_beta(beta).expect("beta >= 0"));
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            while value(hi)? < observed {
                lo = hi;
                hi *= 2.0;
            }
            while hi - lo > INVERSION_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if value(mid)? < observed {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            ThermalParams::from_beta(0.5 * (lo + hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF: f64 = 0.5;

    fn ratio(t: f64) -> ThermalParams {
        ThermalParams::from_boltzmann_ratio(t).unwrap()
    }

    #[test]
    fn p_beta_examples() {
        assert_eq!(ThermalParams::zero_temperature().p_flip, 0.0);
        assert_eq!(p_beta(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(p_beta(0.0).unwrap(), 0.5);
        assert!((p_beta(2f64.ln() / 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(p_beta(-0.1).is_err());
        assert!(p_beta(f64::NAN).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let zero = ThermalParams::zero_temperature();
        assert_eq!(fidelity(7, &zero).unwrap(), 1.0);
        assert!((fidelity(4, &ratio(HALF)).unwrap() - 1.0 / 1.5f64.powi(4)).abs() < 1e-15);
        assert!((fidelity(1, &ThermalParams::from_beta(0.0).unwrap()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let th = ratio(HALF);
        assert_eq!(expectation_general(9, 0, &th).unwrap(), 1.0);
        assert!((expectation_general(4, 2, &th).unwrap() - 1.0 / 9.0).abs() < 1e-14);
        assert!((expectation_optimal(4, &th).unwrap() - 1.0 / 9.0).abs() < 1e-14);
        assert_eq!(expectation_optimal(6, &ThermalParams::zero_temperature()).unwrap(), 1.0);
        assert!(expectation_optimal(5, &th).is_err());
        assert!(expectation_general(3, 4, &th).is_err());
        assert!(matches!(
            expectation_general(1025, 1, &th),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn large_n_stays_finite() {
        let th = ThermalParams::from_beta(0.3).unwrap();
        let general = expectation_general(1024, 512, &th).unwrap();
        let optimal = expectation_optimal(1024, &th).unwrap();
        assert!(general.is_finite());
        assert!((general - optimal).abs() < 1e-12, "{general} vs {optimal}");
    }

    #[test]
    fn theorem1_examples() {
        let b = theorem1_bound(6, &ThermalParams::zero_temperature(), 0.03).unwrap();
        assert_eq!(b.theorem1_bound, 0.03);
        assert_eq!(b.leading_coefficient, 0);
        let th = ratio(HALF);
        // epsilon must be positive; compare the ε-free part directly
        let b = theorem1_bound(4, &th, 1e-300).unwrap();
        assert!((b.theorem1_bound - 1.0 / (2.0 * 5.0625)).abs() < 1e-14);
        let gap = fidelity(4, &th).unwrap() - expectation_optimal(4, &th).unwrap();
        assert!((gap - 0.4375 / 5.0625).abs() < 1e-14);
        assert!(gap <= b.theorem1_bound);
        assert!(theorem1_bound(2, &th, 0.1).is_err());
        assert!(theorem1_bound(5, &th, 0.1).is_err());
        assert!(theorem1_bound(4, &th, 0.0).is_err());
        assert!(theorem1_bound(4, &th, 1.0).is_err());
    }

    #[test]
    fn leading_term_symmetry() {
        let th = ratio(1e-3);
        assert_eq!(deviation_leading_term(12, 6, &th).unwrap(), 0.0);
        let a = deviation_leading_term(12, 0, &th).unwrap();
        let b = deviation_leading_term(12, 12, &th).unwrap();
        assert_eq!(a, b);
        assert!((a - 12e-3 / 1.001f64.powi(12)).abs() < 1e-15);
    }

    #[test]
    fn union_bound_examples() {
        assert_eq!(union_bound(50, &ThermalParams::zero_temperature()).unwrap(), 1.0);
        let th = ThermalParams::from_boltzmann_ratio(0.01 / 0.99).unwrap();
        assert!((union_bound(50, &th).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sample_size_examples() {
        assert_eq!(sample_size(0.02, 0.05).unwrap(), 18_445);
        assert_eq!(sample_size(1.0, 2.0 / std::f64::consts::E.powi(2)).unwrap(), 4);
        assert_eq!(sample_size(1e-6, 1e-2).unwrap(), 10_596_634_733_097);
        assert!(sample_size(0.0, 0.5).is_err());
        assert!(sample_size(0.5, 1.0).is_err());
    }

    #[test]
    fn inversion_examples() {
        let t0 = invert_temperature(10, 1.0, InversionTarget::Estimator).unwrap();
        assert!(t0.is_zero_temperature());
        let th = invert_temperature(4, 1.0 / 9.0, InversionTarget::Estimator).unwrap();
        assert!((th.beta() - 2f64.ln() / 2.0).abs() < 1e-9, "{}", th.beta());
        let f = fidelity(6, &ThermalParams::from_beta(0.7).unwrap()).unwrap();
        let back = invert_temperature(6, f, InversionTarget::Fidelity).unwrap();
        assert!((back.beta() - 0.7).abs() < 1e-12);
        assert!(invert_temperature(4, 0.0, InversionTarget::Estimator).is_err());
        assert!(invert_temperature(4, 1.5, InversionTarget::Estimator).is_err());
        assert!(invert_temperature(5, 0.5, InversionTarget::Estimator).is_err());
        assert!(invert_temperature(4, 0.01, InversionTarget::Fidelity).is_err());
    }

    #[test]
    fn parameter_constructors() {
        assert!(ThermalParams::from_beta(f64::INFINITY).unwrap().is_zero_temperature());
        assert!(ThermalParams::from_temperature(0.0).unwrap().is_zero_temperature());
        assert!((ThermalParams::from_temperature(2.0).unwrap().beta() - 0.5).abs() < 1e-15);
        assert!(ThermalParams::from_temperature(-1.0).is_err());
        assert!(ThermalParams::from_boltzmann_ratio(1.5).is_err());
        let json = serde_json::to_string(&ThermalParams::zero_temperature()).unwrap();
        assert_eq!(json, r#"{"beta":"zero_temperature","p_flip":0.0}"#);
    }
}
