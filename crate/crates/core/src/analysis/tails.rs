use super::special::ln_binomial;
use crate::{Error, Real, Result};

/// `P(Z = l | C = k)` when `k` clicks fall uniformly on `m` slots of which
/// `agree` are agreeing slots: `C(agree, l) C(m - agree, k - l) / C(m, k)`.
pub fn hypergeometric_pmf<T: Real>(m: u64, agree: u64, k: u64, l: u64) -> Result<T> {
    if agree > m || k > m || l > k || l > agree || k - l > m - agree {
        return Err(Error::Domain(format!("hypergeometric (m={m}, agree={agree}, k={k}, l={l}) out of support")));
    }
    let ln = ln_binomial::<T>(agree, l) + ln_binomial::<T>(m - agree, k - l) - ln_binomial::<T>(m, k);
    Ok(ln.exp())
}

/// Whether `P(Z = k | C = k) <= delta^k` with `delta = agree / m`, checked in
/// exact integer arithmetic as `C(agree, k) m^k <= agree^k C(m, k)`.
pub fn binomial_ratio_inequality_check(m: u64, agree: u64, k: u64) -> bool {
    super::exact::binomial_ratio_holds(m, agree, k)
}

/// Hoeffding tail `exp(-2 k delta_q^2)`.
pub fn hoeffding_tail_bound<T: Real>(k: u64, delta_q: T) -> T {
    (-(T::lit(2.0) * T::count(k) * delta_q * delta_q)).exp()
}

/// `ln` of the two-sided Poisson tail bound
/// `2 e^{-a} (e a / (a + dn))^{a + dn}`, `a = alpha_sq`.
pub fn ln_poisson_tail<T: Real>(alpha_sq: T, delta_n: u64) -> T {
    let a = alpha_sq;
    let dn = T::count(delta_n);
    let ln2 = T::LN_2();
    if a <= T::zero() {
        return if delta_n == 0 { ln2 } else { T::neg_infinity() };
    }
    let s = a + dn;
    ln2 - a + s * (T::one() + a.ln() - s.ln())
}

/// Bound on `P(|N - alpha^2| >= delta_n)` for Poisson `N` of mean `alpha^2`.
pub fn poisson_tail<T: Real>(alpha_sq: T, delta_n: u64) -> T {
    ln_poisson_tail(alpha_sq, delta_n).exp()
}
