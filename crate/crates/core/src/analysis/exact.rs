//! Exact integer and rational counterparts of the floating-point routines,
//! for small instances.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Hypergeometric `P(Z = l | C = k)` as an exact fraction.
pub fn hypergeometric_pmf(m: u64, agree: u64, k: u64, l: u64) -> Result<BigRational> {
    if agree > m || k > m || l > k || l > agree || k - l > m - agree {
        return Err(Error::Domain(format!("hypergeometric (m={m}, agree={agree}, k={k}, l={l}) out of support")));
    }
    let num = binomial(agree, l) * binomial(m - agree, k - l);
    Ok(BigRational::new(num.into(), binomial(m, k).into()))
}

/// `C(agree, k) / C(m, k) <= (agree / m)^k`, cross-multiplied.
pub fn binomial_ratio_holds(m: u64, agree: u64, k: u64) -> bool {
    if m == 0 {
        return k == 0;
    }
    let lhs = binomial(agree, k) * BigUint::from(m).pow(k as u32);
    let rhs = BigUint::from(agree).pow(k as u32) * binomial(m, k);
    lhs <= rhs
}
