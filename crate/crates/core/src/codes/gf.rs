//! Arithmetic in GF(2^k), 2 <= k <= 16, via log/antilog tables.
//!
//! Each field is built from the lexicographically first primitive polynomial
//! of degree `k`, i.e. the smallest integer whose bits are the coefficients
//! (bit `i` is the coefficient of `x^i`). The table is frozen below and
//! re-derived by a test.

use crate::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Smallest primitive polynomial for each degree `k` in `2..=16`.
pub const PRIMITIVE_POLYS: [u32; 15] = [
    0x7,     // k=2:  x^2+x+1
    0xB,     // k=3:  x^3+x+1
    0x13,    // k=4:  x^4+x+1
    0x25,    // k=5:  x^5+x^2+1
    0x43,    // k=6:  x^6+x+1
    0x83,    // k=7:  x^7+x+1
    0x11D,   // k=8:  x^8+x^4+x^3+x^2+1
    0x211,   // k=9:  x^9+x^4+1
    0x409,   // k=10: x^10+x^3+1
    0x805,   // k=11: x^11+x^2+1
    0x1053,  // k=12: x^12+x^6+x^4+x+1
    0x201B,  // k=13: x^13+x^4+x^3+x+1
    0x402B,  // k=14: x^14+x^5+x^3+x+1
    0x8003,  // k=15: x^15+x+1
    0x1002D, // k=16: x^16+x^5+x^3+x^2+1
];

/// Order of `x` modulo `poly` (degree `k`), or `None` if the powers of `x`
/// cycle without returning to 1 within `2^k - 1` steps.
pub fn order_of_x(poly: u32, k: u32) -> Option<u32> {
    let top = 1u32 << k;
    let mut v = 1u32;
    for i in 1..top {
        v <<= 1;
        if v & top != 0 {
            v ^= poly;
        }
        if v == 1 {
            return Some(i);
        }
    }
    None
}

pub fn is_primitive(poly: u32, k: u32) -> bool {
    poly & 1 == 1 && poly >> k == 1 && order_of_x(poly, k) == Some((1 << k) - 1)
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    k: u32,
    poly: u32,
    /// `exp[i] = alpha^i` for `i` in `0..2*(q-1)`, doubled to skip a modulo.
    exp: Vec<u16>,
    /// `log[x]` for nonzero `x`; `log[0]` unused.
    log: Vec<u16>,
}

impl GaloisField {
    pub fn new(k: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&k) {
            return Err(Error::param(format!("field degree k = {k} outside {MIN_DEGREE}..={MAX_DEGREE}")));
        }
        let poly = PRIMITIVE_POLYS[(k - MIN_DEGREE) as usize];
        let q = 1usize << k;
        let mut exp = vec![0u16; 2 * (q - 1)];
        let mut log = vec![0u16; q];
        let mut v = 1u32;
        for i in 0..q - 1 {
            exp[i] = v as u16;
            log[v as usize] = i as u16;
            v <<= 1;
            if v & (1 << k) != 0 {
                v ^= poly;
            }
        }
        for i in q - 1..2 * (q - 1) {
            exp[i] = exp[i - (q - 1)];
        }
        Ok(Self { k, poly, exp, log })
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Number of nonzero elements, `2^k - 1`.
    #[inline]
    pub fn nonzero_count(&self) -> usize {
        (1usize << self.k) - 1
    }

    /// `alpha^i` for the primitive element `alpha = x`.
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.exp[i % self.nonzero_count()]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Multiply by `alpha^j` with `j < 2^k - 1`.
    #[inline]
    pub fn mul_alpha_pow(&self, a: u16, j: usize) -> u16 {
        if a == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + j]
        }
    }
}
