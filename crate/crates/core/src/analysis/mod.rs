//! Closed-form probabilities, error bounds and parameter solvers.

mod dimension;
pub mod exact;
mod solve;
pub mod special;
mod tails;

use serde::{Deserialize, Serialize};

pub use dimension::{
    dimension_bound, dimension_bound_loose, dimension_report, min_delta_n, quantum_info_cost, trace_distance_bound,
    DimensionReport,
};
pub use solve::{
    bisect_decreasing, bound_for_alpha_sq, required_mean_photon_number, robust_error_large_m, BoundMode, Horizon,
    NoiseParams, RobustSettings, ALPHA_SQ_BRACKET,
};
pub use tails::{
    binomial_ratio_inequality_check, hoeffding_tail_bound, hypergeometric_pmf, ln_poisson_tail, poisson_tail,
};

use crate::protocol::ProtocolParams;
use crate::{Error, Real, Result};

/// Probability of a photon click in one slot, `1 - exp(-2 alpha^2 / m)`,
/// where `alpha_sq_detected` already includes the transmittance.
pub fn click_prob<T: Real>(alpha_sq_detected: T, m: u64) -> T {
    -(-(T::lit(2.0) * alpha_sq_detected / T::count(m))).exp_m1()
}

/// How `delta_q` relates to the gap `q_E - q_D`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaQConvention {
    /// `delta_q = q_E - q_D = pf (1 - delta)(2 nu - 1)`.
    #[default]
    Printed,
    /// `delta_q = (q_E - q_D) / 2`; places the threshold midway.
    Halved,
}

impl std::str::FromStr for DeltaQConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Self::Printed),
            "halved" => Ok(Self::Halved),
            other => Err(Error::param(format!("unknown delta_q convention {other:?}"))),
        }
    }
}

impl DeltaQConvention {
    pub fn apply<T: Real>(self, gap: T) -> T {
        match self {
            Self::Printed => gap,
            Self::Halved => gap / T::lit(2.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::Halved => "halved",
        }
    }
}

/// Which per-slot law the expected fractions are computed under.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Double clicks neglected, `p_dark` is the total dark-click
    /// probability per slot, `p'_c = p_c + p_dark`.
    #[default]
    Approximate,
    /// The simulated law: per-detector dark counts, double clicks excluded,
    /// `p'_c` the exact single-click probability.
    SlotLaw,
}

/// Expected fractions of "0" outcomes among single clicks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedFractions<T> {
    /// `E(f0 | x = x')`.
    pub q_e: T,
    /// `E(f0 | x != x')` when a fraction `delta` of slots agree.
    pub q_d: T,
    pub delta_q: T,
    pub convention: DeltaQConvention,
    pub p_c: T,
    /// Effective click probability `p'_c`.
    pub p_c_eff: T,
}

impl<T: Real> ExpectedFractions<T> {
    pub fn delta_q_with(&self, convention: DeltaQConvention) -> T {
        convention.apply(self.q_e - self.q_d)
    }

    /// Robust-rule cutoff `q_E - delta_q`.
    pub fn threshold(&self) -> T {
        self.q_e - self.delta_q
    }
}

/// `q_E`, `q_D`, `delta_q` and `p'_c` for `params` and agreement bound `delta`.
///
/// Under [`NoiseModel::Approximate`], with `pf = p_c / (p_c + p_dark)`:
///
/// ```text
/// q_D = pf [nu delta + (1 - nu)(1 - delta)] + p_dark / (2 (p_c + p_dark))
/// q_E = pf nu + p_dark / (2 (p_c + p_dark))
/// ```
pub fn expected_fractions<T: Real>(
    params: &ProtocolParams<T>,
    delta: T,
    model: NoiseModel,
    convention: DeltaQConvention,
) -> Result<ExpectedFractions<T>> {
    params.validate()?;
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    let p_c = params.click_prob();
    let d = params.p_dark;
    let nu = params.nu;
    let one = T::one();
    let (q_e, q_d, p_c_eff) = match model {
        NoiseModel::Approximate => {
            let total = p_c + d;
            if total <= T::zero() {
                return Err(Error::Degenerate("p_c + p_dark = 0: no clicks can occur".into()));
            }
            let pf = p_c / total;
            let dark = d / (T::lit(2.0) * total);
            let q_e = pf * nu + dark;
            let q_d = pf * (nu * delta + (one - nu) * (one - delta)) + dark;
            (q_e, q_d, total)
        }
        NoiseModel::SlotLaw => {
            // Single-click probability (1-d)(p + 2d(1-p)); zero given single
            // is (p nu' + (1-p) d) / (p + 2 d (1-p)).
            let denom = p_c + T::lit(2.0) * d * (one - p_c);
            if denom <= T::zero() || d >= one {
                return Err(Error::Degenerate("no single clicks can occur".into()));
            }
            let dark = (one - p_c) * d;
            let q_agree = (p_c * nu + dark) / denom;
            let q_differ = (p_c * (one - nu) + dark) / denom;
            let q_d = delta * q_agree + (one - delta) * q_differ;
            (q_agree, q_d, (one - d) * denom)
        }
    };
    Ok(ExpectedFractions { q_e, q_d, delta_q: convention.apply(q_e - q_d), convention, p_c, p_c_eff })
}

/// `[1 - p_c (1 - delta)]^m`, clamped to `[0, 1]`.
pub fn ideal_error_bound<T: Real>(m: u64, p_c: T, delta: T) -> T {
    power_bound(m, p_c * (T::one() - delta))
}

/// `exp(-2 (1 - delta) alpha^2)`.
pub fn ideal_error_asymptote<T: Real>(alpha_sq_detected: T, delta: T) -> T {
    (-(T::lit(2.0) * (T::one() - delta) * alpha_sq_detected)).exp().min(T::one())
}

/// `1 - exp(-2 delta_q^2)`.
fn hoeffding_gain<T: Real>(delta_q: T) -> T {
    -(-(T::lit(2.0) * delta_q * delta_q)).exp_m1()
}

/// `[1 - p'_c (1 - exp(-2 delta_q^2))]^m`, clamped to `[0, 1]`.
pub fn robust_error_bound<T: Real>(m: u64, p_c_eff: T, delta_q: T) -> T {
    power_bound(m, p_c_eff * hoeffding_gain(delta_q))
}

/// Large-`m` limit `exp(-2 alpha^2 (1 - exp(-2 delta_q^2)))`.
pub fn robust_error_asymptote<T: Real>(alpha_sq_detected: T, delta_q: T) -> T {
    (-(T::lit(2.0) * alpha_sq_detected * hoeffding_gain(delta_q))).exp().min(T::one())
}

/// `(1 - x)^m` evaluated as `exp(m ln(1 - x))`.
fn power_bound<T: Real>(m: u64, x: T) -> T {
    let x = x.max(T::zero()).min(T::one());
    if x >= T::one() {
        return if m == 0 { T::one() } else { T::zero() };
    }
    (T::count(m) * (-x).ln_1p()).exp().max(T::zero()).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn click_prob_values() {
        assert_eq!(click_prob(0.0f64, 7), 0.0);
        assert!((click_prob(1.0f64, 2) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        let m = 100_000_000u64;
        let scaled = m as f64 * click_prob(3.0f64, m);
        assert!((scaled - 6.0).abs() < 1e-6 * 6.0);
    }

    #[test]
    fn fractions_without_dark_counts() {
        let p = ProtocolParams::<f64>::new(5.0, 0.5, 0.97, 0.0, 40).unwrap();
        let f = expected_fractions(&p, 0.8, NoiseModel::Approximate, DeltaQConvention::Printed).unwrap();
        assert!((f.q_e - 0.97).abs() < 1e-15);
        let p = ProtocolParams::<f64>::new(5.0, 0.5, 1.0, 0.0, 40).unwrap();
        let f = expected_fractions(&p, 0.8, NoiseModel::Approximate, DeltaQConvention::Printed).unwrap();
        assert!((f.q_d - 0.8).abs() < 1e-15);
    }

    #[test]
    fn printed_gap_matches_closed_form() {
        let p = ProtocolParams::<f64>::new(6651.0, 0.1, 0.98, 4e-8, 3000).unwrap();
        let delta = 83.0 / 90.0;
        let f = expected_fractions(&p, delta, NoiseModel::Approximate, DeltaQConvention::Printed).unwrap();
        let pf = f.p_c / (f.p_c + 4e-8);
        assert!((f.delta_q - pf * (1.0 - delta) * (2.0 * 0.98 - 1.0)).abs() < 1e-14);
        assert!((f.delta_q - 0.0746).abs() < 1e-4);
        assert!((f.delta_q_with(DeltaQConvention::Halved) - f.delta_q / 2.0).abs() < 1e-16);
    }

    #[test]
    fn degenerate_fractions_rejected() {
        let p = ProtocolParams::new(0.0, 1.0, 0.9, 0.0, 4).unwrap();
        assert!(matches!(
            expected_fractions(&p, 0.5, NoiseModel::Approximate, DeltaQConvention::Printed),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn fraction_ordering() {
        for (a, nu, d) in [(1.0, 0.9, 0.01), (50.0, 0.6, 0.2), (0.1, 0.99, 0.5)] {
            let p = ProtocolParams::new(a, 0.7, nu, d, 10).unwrap();
            for model in [NoiseModel::Approximate, NoiseModel::SlotLaw] {
                let f = expected_fractions(&p, 0.7, model, DeltaQConvention::Printed).unwrap();
                assert!(0.0 <= f.q_d && f.q_d <= f.q_e && f.q_e <= 1.0, "{model:?} {f:?}");
            }
            let f = expected_fractions(&p, 0.7, NoiseModel::Approximate, DeltaQConvention::Printed).unwrap();
            assert!(f.p_c_eff >= f.p_c && f.p_c_eff >= d);
        }
    }

    #[test]
    fn bound_edge_values() {
        assert_eq!(ideal_error_bound(1, 1.0f64, 0.0), 0.0);
        for m in [1, 10, 1000] {
            assert_eq!(ideal_error_bound(m, 0.3f64, 1.0), 1.0);
            assert_eq!(robust_error_bound(m, 0.3f64, 0.0), 1.0);
        }
        assert_eq!(ideal_error_asymptote(0.0f64, 0.5), 1.0);
    }

    #[test]
    fn ideal_asymptote_at_reference_point() {
        let v = ideal_error_asymptote(88.8f64, 0.9 + 1.0 / 45.0);
        assert!((v - 1e-6).abs() < 0.01e-6, "{v}");
    }

    #[test]
    fn f32_instantiation() {
        let v: f32 = ideal_error_bound(10, click_prob(2.0f32, 10), 0.5);
        let w: f64 = ideal_error_bound(10, click_prob(2.0f64, 10), 0.5);
        assert!((v as f64 - w).abs() < 1e-6);
    }
}
