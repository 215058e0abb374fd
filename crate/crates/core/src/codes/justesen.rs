//! Justesen-style concatenated code.
//!
//! Outer code: Reed-Solomon over GF(2^k) in evaluation form. The `K` message
//! symbols are the coefficients of `f(y) = sum_t msg_t y^t` and codeword
//! symbol `j` is `f(alpha^j)` for `j = 0..N`, `N = 2^k - 1`.
//!
//! Inner code: the Wozencraft ensemble. Symbol `u` at position `j` becomes
//! the `2k`-bit block `(u, alpha^j * u)`, each half MSB-first.
//!
//! Message bits are packed into symbols MSB-first, `k` bits per symbol.

use serde::{Deserialize, Serialize};

use super::gf::{GaloisField, MAX_DEGREE, MIN_DEGREE};
use super::BitString;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustesenLayout {
    /// Field degree.
    pub k: u32,
    /// Outer block length `2^k - 1` in symbols.
    pub outer_len: u64,
    /// Outer dimension in symbols.
    pub outer_dim: u64,
}

impl JustesenLayout {
    pub fn choose(n: u64, c: f64) -> Result<Self> {
        for k in MIN_DEGREE..=MAX_DEGREE {
            let big_n = (1u64 << k) - 1;
            let dim = ((2.0 * big_n as f64 / c).round() as u64).clamp(1, big_n - 1);
            if dim * k as u64 >= n {
                return Ok(Self { k, outer_len: big_n, outer_dim: dim });
            }
        }
        Err(Error::param(format!(
            "no Justesen layout with k <= {MAX_DEGREE} holds n = {n} bits at c = {c}"
        )))
    }

    pub fn input_bits(&self) -> u64 {
        self.outer_dim * self.k as u64
    }

    pub fn codeword_bits(&self) -> u64 {
        2 * self.k as u64 * self.outer_len
    }

    /// Achieved `m / n = 2N / K`.
    pub fn rate_factor(&self) -> f64 {
        2.0 * self.outer_len as f64 / self.outer_dim as f64
    }
}

#[derive(Clone, Debug)]
pub(crate) struct JustesenEncoder {
    layout: JustesenLayout,
    field: GaloisField,
}

impl JustesenEncoder {
    pub(crate) fn new(layout: JustesenLayout) -> Result<Self> {
        let field = GaloisField::new(layout.k)?;
        Ok(Self { layout, field })
    }

    /// `x` must already be padded to `layout.input_bits()`.
    pub(crate) fn encode(&self, x: &BitString) -> Result<BitString> {
        let k = self.layout.k as u64;
        if x.len() != self.layout.input_bits() {
            return Err(Error::Dimension { expected: self.layout.input_bits(), got: x.len() });
        }
        let symbols: Vec<u16> = (0..self.layout.outer_dim)
            .map(|t| (0..k).fold(0u16, |acc, b| (acc << 1) | x.get(t * k + b) as u16))
            .collect();

        let mut out = BitString::zeros(self.layout.codeword_bits())?;
        let mut pos = 0u64;
        let mut put = |v: u16, out: &mut BitString| {
            for b in (0..k).rev() {
                if v >> b & 1 == 1 {
                    out.set(pos, true);
                }
                pos += 1;
            }
        };
        for j in 0..self.layout.outer_len as usize {
            // Horner at y = alpha^j.
            let u = symbols.iter().rev().fold(0u16, |acc, &s| self.field.mul_alpha_pow(acc, j) ^ s);
            put(u, &mut out);
            put(self.field.mul_alpha_pow(u, j), &mut out);
        }
        Ok(out)
    }
}
