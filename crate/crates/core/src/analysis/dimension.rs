//! Effective dimension of the coherent fingerprint states.
//!
//! Projecting a coherent train of mean photon number `alpha^2` onto the
//! photon-number window `|N - alpha^2| <= dn` leaves a state within trace
//! distance `2 sqrt(eps')` of the original, where `eps'` is the Poisson
//! tail bound. The window spans at most `2 dn` photon numbers, each with
//! `C(N + m - 1, m - 1)` ways to spread `N` photons over `m` modes.

use serde::{Deserialize, Serialize};

use super::special::ln_binomial;
use super::tails::{ln_poisson_tail, poisson_tail};
use crate::{Error, Real, Result};

/// Largest photon number in the window, `ceil(alpha^2) + dn`.
fn max_photons<T: Real>(alpha_sq: T, delta_n: u64) -> u64 {
    alpha_sq.ceil().to_u64().expect("alpha_sq finite and non-negative") + delta_n
}

/// `log2[2 dn C(ceil(alpha^2) + dn + m - 1, m - 1)]`.
pub fn dimension_bound<T: Real>(alpha_sq: T, delta_n: u64, m: u64) -> T {
    assert!(delta_n >= 1 && m >= 1, "dimension_bound needs delta_n >= 1 and m >= 1");
    let n_max = max_photons(alpha_sq, delta_n);
    let ln_modes = ln_binomial::<T>(n_max + m - 1, m - 1);
    (T::lit(2.0) * T::count(delta_n)).log2() + ln_modes / T::LN_2()
}

/// Closed form `N log2(m + N - 1) + log2(2 dn)` with `N = ceil(alpha^2) + dn`.
pub fn dimension_bound_loose<T: Real>(alpha_sq: T, delta_n: u64, m: u64) -> T {
    assert!(delta_n >= 1 && m >= 1, "dimension_bound needs delta_n >= 1 and m >= 1");
    let n_max = T::count(max_photons(alpha_sq, delta_n));
    n_max * (T::count(m) + n_max - T::one()).log2() + (T::lit(2.0) * T::count(delta_n)).log2()
}

/// Fuchs-van de Graaf step: `min(2 sqrt(eps'), 2)`.
pub fn trace_distance_bound<T: Real>(eps_prime: T) -> T {
    (T::lit(2.0) * eps_prime.max(T::zero()).sqrt()).min(T::lit(2.0))
}

/// Smallest `dn >= 1` whose window keeps the trace distance at most `eps_target`.
pub fn min_delta_n<T: Real>(alpha_sq: T, eps_target: T) -> Result<u64> {
    if !(eps_target > T::zero() && eps_target < T::lit(2.0)) {
        return Err(Error::Domain(format!("eps_target must lie in (0, 2), got {eps_target}")));
    }
    if !(alpha_sq >= T::zero()) || !alpha_sq.is_finite() {
        return Err(Error::Domain(format!("alpha_sq must be finite and >= 0, got {alpha_sq}")));
    }
    // 2 sqrt(eps') <= eps  <=>  ln eps' <= 2 ln(eps / 2)
    let limit = T::lit(2.0) * (eps_target / T::lit(2.0)).ln();
    let ok = |dn: u64| ln_poisson_tail(alpha_sq, dn) <= limit;
    let mut hi = 1u64;
    while !ok(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Domain("photon window overflow".into()))?;
    }
    let mut lo = hi / 2; // not ok, or 0
    if lo == 0 {
        return Ok(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport<T> {
    pub delta_n: u64,
    pub eps_prime: T,
    pub eps: T,
    pub log2_dim: T,
}

pub fn dimension_report<T: Real>(alpha_sq: T, eps_target: T, m: u64) -> Result<DimensionReport<T>> {
    let delta_n = min_delta_n(alpha_sq, eps_target)?;
    let eps_prime = poisson_tail(alpha_sq, delta_n);
    Ok(DimensionReport {
        delta_n,
        eps_prime,
        eps: trace_distance_bound(eps_prime),
        log2_dim: dimension_bound(alpha_sq, delta_n, m),
    })
}

/// Transmitted information in qubits for `n` input bits at rate factor `c`.
pub fn quantum_info_cost<T: Real>(n: u64, c: f64, alpha_sq: T, eps_target: T) -> Result<T> {
    if n == 0 || !(c >= 1.0) {
        return Err(Error::param(format!("need n >= 1 and c >= 1, got n = {n}, c = {c}")));
    }
    let m = (c * n as f64).ceil() as u64;
    Ok(dimension_bound(alpha_sq, min_delta_n(alpha_sq, eps_target)?, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_point() {
        let v: f64 = dimension_bound(1.0, 1, 2);
        assert!((v - 6f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn single_mode() {
        let v: f64 = dimension_bound(5.0, 3, 1);
        assert!((v - 6f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        assert_eq!(trace_distance_bound(0.0f64), 0.0);
        assert!((trace_distance_bound(0.25f64) - 1.0).abs() < 1e-15);
        assert_eq!(trace_distance_bound(3.0f64), 2.0);
    }

    #[test]
    fn vacuum_needs_unit_window() {
        for eps in [1e-12, 1e-3, 1.9] {
            assert_eq!(min_delta_n(0.0f64, eps).unwrap(), 1);
        }
    }

    #[test]
    fn min_delta_n_is_minimal() {
        for (a, eps) in [(88.8f64, 1e-6f64), (10.0, 1e-3), (6651.0, 1e-6), (0.3, 0.5)] {
            let dn = min_delta_n(a, eps).unwrap();
            assert!(trace_distance_bound(poisson_tail(a, dn)) <= eps);
            if dn > 1 {
                assert!(trace_distance_bound(poisson_tail(a, dn - 1)) > eps);
            }
        }
    }

    #[test]
    fn min_delta_n_rejects_bad_eps() {
        assert!(min_delta_n(1.0f64, 0.0).is_err());
        assert!(min_delta_n(1.0f64, 2.0).is_err());
    }
}
