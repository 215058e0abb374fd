use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Magic prefix of the on-disk format.
pub const MAGIC: &[u8; 4] = b"QFP1";

/// Packed bit sequence, MSB-first within each byte.
///
/// Pad bits after `len` in the final byte are always zero, so derived
/// equality and hashing compare logical content.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitString {
    len: u64,
    bytes: Vec<u8>,
}

#[inline]
fn byte_len(bits: u64) -> usize {
    bits.div_ceil(8) as usize
}

impl BitString {
    pub fn zeros(len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("bit string length must be at least 1"));
        }
        Ok(Self { len, bytes: vec![0; byte_len(len)] })
    }

    pub fn ones(len: u64) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        s.bytes.fill(0xFF);
        s.clear_padding();
        Ok(s)
    }

    /// Builds from packed bytes; pad bits of the last byte must be zero.
    pub fn from_bytes(len: u64, bytes: Vec<u8>) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("bit string length must be at least 1"));
        }
        if bytes.len() != byte_len(len) {
            return Err(Error::Dimension { expected: byte_len(len) as u64, got: bytes.len() as u64 });
        }
        let s = Self { len, bytes };
        if !s.padding_is_clear() {
            return Err(Error::Format {
                offset: (s.bytes.len() - 1) as u64,
                reason: "nonzero pad bits in final byte".into(),
            });
        }
        Ok(s)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut bytes = Vec::new();
        let mut len = 0u64;
        for b in bits {
            if len % 8 == 0 {
                bytes.push(0);
            }
            if b {
                *bytes.last_mut().unwrap() |= 0x80 >> (len % 8);
            }
            len += 1;
        }
        Self::from_bytes(len, bytes)
    }

    pub fn random<R: Rng + ?Sized>(len: u64, rng: &mut R) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        rng.fill_bytes(&mut s.bytes);
        s.clear_padding();
        Ok(s)
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    /// Always false: bit strings hold at least one bit.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.bytes[(i / 8) as usize] & (0x80 >> (i % 8)) != 0
    }

    #[inline]
    pub fn set(&mut self, i: u64, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 0x80 >> (i % 8);
        let byte = &mut self.bytes[(i / 8) as usize];
        if value {
            *byte |= mask;
        } else {
            *byte &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Copy extended with zeros to `len` bits.
    pub fn zero_padded(&self, len: u64) -> Result<Self> {
        if len < self.len {
            return Err(Error::InputSize { got: self.len, max: len });
        }
        let mut bytes = self.bytes.clone();
        bytes.resize(byte_len(len), 0);
        Ok(Self { len, bytes })
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::Dimension { expected: self.len, got: other.len });
        }
        let bytes = self.bytes.iter().zip(&other.bytes).map(|(a, b)| a ^ b).collect();
        Ok(Self { len: self.len, bytes })
    }

    fn clear_padding(&mut self) {
        let used = (self.len % 8) as u32;
        if used != 0 {
            let last = self.bytes.last_mut().unwrap();
            *last &= 0xFFu8 << (8 - used);
        }
    }

    fn padding_is_clear(&self) -> bool {
        let used = (self.len % 8) as u32;
        used == 0 || self.bytes.last().unwrap() & !(0xFFu8 << (8 - used)) == 0
    }

    /// Serializes as `"QFP1"`, little-endian `u64` bit length, payload.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&self.len.to_le_bytes())?;
        w.write_all(&self.bytes)?;
        Ok(())
    }

    pub fn to_file_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.bytes.len());
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_file_bytes(&buf)
    }

    pub fn from_file_bytes(buf: &[u8]) -> Result<Self> {
        let fmt_err = |offset: usize, reason: &str| Error::Format { offset: offset as u64, reason: reason.into() };
        if buf.len() < 4 {
            return Err(fmt_err(buf.len(), "truncated magic"));
        }
        if let Some(i) = (0..4).find(|&i| buf[i] != MAGIC[i]) {
            return Err(fmt_err(i, "bad magic, expected \"QFP1\""));
        }
        if buf.len() < 12 {
            return Err(fmt_err(buf.len(), "truncated bit-length field"));
        }
        let len = u64::from_le_bytes(buf[4..12].try_into().unwrap());
        if len == 0 {
            return Err(fmt_err(4, "bit length must be at least 1"));
        }
        let need = byte_len(len);
        let payload = &buf[12..];
        if payload.len() < need {
            return Err(fmt_err(buf.len(), "truncated payload"));
        }
        if payload.len() > need {
            return Err(fmt_err(12 + need, "trailing bytes after payload"));
        }
        let s = Self { len, bytes: payload.to_vec() };
        if !s.padding_is_clear() {
            return Err(fmt_err(12 + need - 1, "nonzero pad bits in final byte"));
        }
        Ok(s)
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses a string of `'0'`/`'1'` characters.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Format { offset: i as u64, reason: format!("unexpected character {ch:?}") }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "BitString({self})")
        } else {
            write!(f, "BitString(len={}, ones={})", self.len, self.count_ones())
        }
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<u64> {
    if a.len != b.len {
        return Err(Error::Dimension { expected: a.len, got: b.len });
    }
    Ok(a.bytes.iter().zip(&b.bytes).map(|(x, y)| (x ^ y).count_ones() as u64).sum())
}
