//! Solving the error bounds for the mean photon number.

use serde::{Deserialize, Serialize};

use super::{
    click_prob, expected_fractions, ideal_error_asymptote, ideal_error_bound, robust_error_asymptote,
    robust_error_bound, DeltaQConvention, NoiseModel,
};
use crate::protocol::ProtocolParams;
use crate::{Error, Real, Result};

/// Search interval for the source mean photon number.
pub const ALPHA_SQ_BRACKET: (f64, f64) = (0.0, 1e9);

const REL_TOL: f64 = 1e-9;

/// Channel and detector parameters, everything in [`ProtocolParams`] except
/// `alpha_sq` and `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams<T> {
    pub eta: T,
    pub nu: T,
    pub p_dark: T,
}

impl<T: Real> NoiseParams<T> {
    pub fn ideal() -> Self {
        Self { eta: T::one(), nu: T::one(), p_dark: T::zero() }
    }

    pub fn params(&self, alpha_sq: T, m: u64) -> Result<ProtocolParams<T>> {
        ProtocolParams::new(alpha_sq, self.eta, self.nu, self.p_dark, m)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    #[default]
    Ideal,
    Robust,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "robust" => Ok(Self::Robust),
            other => Err(Error::param(format!("unknown mode {other:?}"))),
        }
    }
}

/// Which form of the bound to invert.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizon {
    /// `m -> infinity` with dark counts negligible (`p_c >> p_dark`).
    #[default]
    Asymptotic,
    /// Large-`m` limit at a given `m`, keeping the `m p_dark` dark clicks.
    LargeM(u64),
    /// The finite-`m` bound as written.
    Finite(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RobustSettings {
    pub convention: DeltaQConvention,
    pub model: NoiseModel,
}

/// Smallest `x` in `[lo, hi]` with `f(x) <= target`, for `f` non-increasing
/// and `f(hi) <= target < f(lo)`. Stops at relative width `rel_tol`.
pub fn bisect_decreasing<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, target: T, rel_tol: T) -> T {
    let two = T::lit(2.0);
    for _ in 0..400 {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Large-`m` robust bound with dark counts kept:
/// `exp(-(2 a + m p_dark)(1 - exp(-2 dq^2)))` where `a` is the detected
/// mean photon number and `dq` is computed with `pf = 2a / (2a + m p_dark)`.
pub fn robust_error_large_m<T: Real>(
    alpha_sq_detected: T,
    m: u64,
    delta: T,
    nu: T,
    p_dark: T,
    convention: DeltaQConvention,
) -> T {
    let photons = T::lit(2.0) * alpha_sq_detected;
    let total = photons + T::count(m) * p_dark;
    if total <= T::zero() {
        return T::one();
    }
    let pf = photons / total;
    let dq = convention.apply(pf * (T::one() - delta) * (T::lit(2.0) * nu - T::one()));
    let gain = -(-(T::lit(2.0) * dq * dq)).exp_m1();
    (-(total * gain)).exp().min(T::one())
}

/// The selected error bound as a function of the source `alpha_sq`.
pub fn bound_for_alpha_sq<T: Real>(
    alpha_sq: T,
    delta: T,
    noise: &NoiseParams<T>,
    mode: BoundMode,
    horizon: Horizon,
    settings: RobustSettings,
) -> Result<T> {
    let a_det = alpha_sq * noise.eta;
    let one = T::one();
    Ok(match (mode, horizon) {
        (BoundMode::Ideal, Horizon::Asymptotic | Horizon::LargeM(_)) => ideal_error_asymptote(a_det, delta),
        (BoundMode::Ideal, Horizon::Finite(m)) => ideal_error_bound(m, click_prob(a_det, m), delta),
        (BoundMode::Robust, Horizon::Asymptotic) => {
            let gap = (one - delta) * (T::lit(2.0) * noise.nu - one);
            robust_error_asymptote(a_det, settings.convention.apply(gap))
        }
        (BoundMode::Robust, Horizon::LargeM(m)) => {
            robust_error_large_m(a_det, m, delta, noise.nu, noise.p_dark, settings.convention)
        }
        (BoundMode::Robust, Horizon::Finite(m)) => {
            let params = noise.params(alpha_sq, m)?;
            match expected_fractions(&params, delta, settings.model, settings.convention) {
                Ok(f) => robust_error_bound(m, f.p_c_eff, f.delta_q.max(T::zero())),
                Err(Error::Degenerate(_)) => one,
                Err(e) => return Err(e),
            }
        }
    })
}

/// Source `alpha_sq` at which the selected bound reaches `target_error`.
///
/// Loss is compensated on the source side: the bound sees `eta * alpha_sq`.
pub fn required_mean_photon_number<T: Real>(
    target_error: T,
    delta: T,
    noise: &NoiseParams<T>,
    mode: BoundMode,
    horizon: Horizon,
    settings: RobustSettings,
) -> Result<T> {
    if !(target_error > T::zero() && target_error <= T::one()) {
        return Err(Error::param(format!("target_error must lie in (0, 1], got {target_error}")));
    }
    if !(delta >= T::zero() && delta < T::one()) {
        return Err(Error::param(format!("delta must lie in [0, 1), got {delta}")));
    }
    noise.params(T::zero(), 1)?;
    let f = |a: T| bound_for_alpha_sq(a, delta, noise, mode, horizon, settings);
    let lo = T::lit(ALPHA_SQ_BRACKET.0);
    let hi = T::lit(ALPHA_SQ_BRACKET.1);
    if f(lo)? <= target_error {
        return Ok(lo);
    }
    let top = f(hi)?;
    if top > target_error {
        let why = match mode {
            BoundMode::Robust if noise.p_dark > T::zero() => "dark counts dilute the signal",
            BoundMode::Robust => "delta_q is too small",
            BoundMode::Ideal => "bound does not decrease",
        };
        return Err(Error::Infeasible(format!(
            "bound at alpha^2 = {hi} is {top}, above target {target_error}: {why}"
        )));
    }
    // f is infallible past this point for valid noise parameters
    Ok(bisect_decreasing(|a| f(a).unwrap_or(T::one()), lo, hi, target_error, T::lit(REL_TOL)))
}
