//! Log-gamma and log-binomial helpers.

use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::count(i as u64));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    T::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + half) * t.ln() - t + acc.ln()
}

/// Above this many factors `ln_binomial` switches from a direct sum to
/// log-gamma differences.
const DIRECT_SUM_LIMIT: u64 = 1 << 22;

/// `ln C(n, k)`; `-inf` when `k > n`.
///
/// Sums `ln(1 + (n-k')/j)` over `j = 1..=k'` with `k' = min(k, n-k)` when
/// `k'` is moderate, which keeps full relative precision even for `n` near
/// `10^14` where log-gamma differences would cancel.
pub fn ln_binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::neg_infinity();
    }
    let kk = k.min(n - k);
    if kk == 0 {
        return T::zero();
    }
    if kk <= DIRECT_SUM_LIMIT {
        let rest = T::count(n - kk);
        (1..=kk).fold(T::zero(), |acc, j| acc + (rest / T::count(j)).ln_1p())
    } else {
        ln_gamma(T::count(n) + T::one()) - ln_gamma(T::count(k) + T::one()) - ln_gamma(T::count(n - k) + T::one())
    }
}

pub fn ln_factorial<T: Real>(n: u64) -> T {
    if n < 2 {
        T::zero()
    } else if n <= 64 {
        (2..=n).fold(T::zero(), |acc, j| acc + T::count(j).ln())
    } else {
        ln_gamma(T::count(n) + T::one())
    }
}
