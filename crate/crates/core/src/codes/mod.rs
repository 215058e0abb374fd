//! Binary codes `E: {0,1}^n -> {0,1}^m` whose distinct codewords agree in at
//! most a fraction `delta` of positions.
//!
//! Three backends are available. `Justesen` is the production code: an outer
//! Reed-Solomon code over GF(2^k) concatenated with the Wozencraft ensemble.
//! `RandomLinear` and `Repetition` are small codes whose distance can be
//! checked exhaustively. All three are linear over GF(2).

mod bitstring;
pub mod gf;
mod justesen;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bitstring::{hamming_distance, BitString, MAGIC};
pub use justesen::JustesenLayout;

use crate::rng::trial_rng;
use crate::{Error, Result};

/// Agreement bound `9/10 + 1/(15c)` for the Justesen family, valid for `c > 2`.
pub fn justesen_delta_bound(c: f64) -> Result<f64> {
    if !(c > 2.0) {
        return Err(Error::param(format!("Justesen rate factor must satisfy c > 2, got {c}")));
    }
    Ok(0.9 + 1.0 / (15.0 * c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Justesen,
    RandomLinear,
    Repetition,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "justesen" => Ok(Backend::Justesen),
            "random_linear" | "random-linear" => Ok(Backend::RandomLinear),
            "repetition" => Ok(Backend::Repetition),
            other => Err(Error::param(format!("unknown code backend {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendParams {
    Justesen(JustesenLayout),
    RandomLinear { seed: u64 },
    Repetition { factor: u64 },
}

/// Code parameters after any padding.
///
/// `n` is the effective input length; inputs up to `requested_n` bits (and
/// in fact up to `n`) are zero-padded on encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub requested_n: u64,
    pub n: u64,
    pub m: u64,
    pub c: f64,
    pub delta: f64,
    pub backend: Backend,
    pub params: BackendParams,
}

impl CodeSpec {
    /// Each input bit repeated `m / n` times. `delta = 1 - 1/n`.
    pub fn repetition(n: u64, m: u64) -> Result<Self> {
        if n == 0 || m < n || m % n != 0 {
            return Err(Error::param(format!("repetition code needs m to be a positive multiple of n (n={n}, m={m})")));
        }
        let factor = m / n;
        Ok(Self {
            requested_n: n,
            n,
            m,
            c: m as f64 / n as f64,
            delta: 1.0 - factor as f64 / m as f64,
            backend: Backend::Repetition,
            params: BackendParams::Repetition { factor },
        })
    }

    /// Random generator matrix, redrawn until the exhaustive minimum distance
    /// reaches `ceil((1 - delta) m)`. Only sensible for `n <= 16`.
    pub fn random_linear(n: u64, m: u64, delta: f64, seed: u64) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::param(format!("random_linear backend supports 1 <= n <= 16, got {n}")));
        }
        if m < n {
            return Err(Error::param(format!("codeword length m = {m} shorter than n = {n}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!("delta must lie in (0,1), got {delta}")));
        }
        Ok(Self {
            requested_n: n,
            n,
            m,
            c: m as f64 / n as f64,
            delta,
            backend: Backend::RandomLinear,
            params: BackendParams::RandomLinear { seed },
        })
    }

    /// Justesen code for `n` input bits at rate factor close to `c`.
    ///
    /// The field degree is the smallest `k` for which `K = round(2(2^k-1)/c)`
    /// symbols hold `n` bits; the reported `c` is the achieved `2N/K`.
    pub fn justesen(n: u64, c: f64) -> Result<Self> {
        justesen_delta_bound(c)?;
        if n == 0 {
            return Err(Error::param("input length must be at least 1"));
        }
        let layout = JustesenLayout::choose(n, c)?;
        let c_true = layout.rate_factor();
        Ok(Self {
            requested_n: n,
            n: layout.input_bits(),
            m: layout.codeword_bits(),
            c: c_true,
            delta: justesen_delta_bound(c_true)?,
            backend: Backend::Justesen,
            params: BackendParams::Justesen(layout),
        })
    }

    /// Smallest number of differing positions between distinct codewords
    /// guaranteed by `delta`.
    pub fn min_distance_floor(&self) -> u64 {
        min_distance_floor(self.m, self.delta)
    }
}

/// `ceil((1 - delta) m)`, with a small tolerance so that `delta = 1 - d/m`
/// maps back to `d` exactly.
pub fn min_distance_floor(m: u64, delta: f64) -> u64 {
    let raw = (1.0 - delta) * m as f64;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 * m as f64 {
        rounded as u64
    } else {
        raw.ceil() as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Codeword {
    pub bits: BitString,
    pub spec: Arc<CodeSpec>,
}

#[derive(Clone, Debug)]
enum Encoder {
    Repetition { factor: u64 },
    Linear { rows: Vec<BitString> },
    Justesen(justesen::JustesenEncoder),
}

/// An instantiated code: tables and generator built once, then shared.
#[derive(Clone, Debug)]
pub struct Code {
    spec: Arc<CodeSpec>,
    encoder: Encoder,
}

/// Upper limit on generator redraws for `random_linear`.
const MAX_GENERATOR_DRAWS: u64 = 1_000_000;

impl Code {
    pub fn new(spec: CodeSpec) -> Result<Self> {
        let encoder = match &spec.params {
            BackendParams::Repetition { factor } => Encoder::Repetition { factor: *factor },
            BackendParams::Justesen(layout) => Encoder::Justesen(justesen::JustesenEncoder::new(layout.clone())?),
            BackendParams::RandomLinear { seed } => {
                let floor = spec.min_distance_floor();
                let mut found = None;
                for attempt in 0..MAX_GENERATOR_DRAWS {
                    let mut rng = trial_rng(*seed, attempt);
                    let rows = (0..spec.n)
                        .map(|_| BitString::random(spec.m, &mut rng))
                        .collect::<Result<Vec<_>>>()?;
                    if linear_min_weight(&rows, spec.m) >= floor {
                        found = Some(rows);
                        break;
                    }
                }
                let rows = found.ok_or_else(|| {
                    Error::Infeasible(format!(
                        "no [{}, {}] generator with distance >= {floor} found in {MAX_GENERATOR_DRAWS} draws",
                        spec.m, spec.n
                    ))
                })?;
                Encoder::Linear { rows }
            }
        };
        Ok(Self { spec: Arc::new(spec), encoder })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn shared_spec(&self) -> Arc<CodeSpec> {
        Arc::clone(&self.spec)
    }

    /// Encodes `x`, zero-padding it to `spec.n` bits first.
    pub fn encode(&self, x: &BitString) -> Result<Codeword> {
        if x.len() > self.spec.n {
            return Err(Error::InputSize { got: x.len(), max: self.spec.n });
        }
        let x = x.zero_padded(self.spec.n)?;
        let bits = match &self.encoder {
            Encoder::Repetition { factor } => {
                BitString::from_bits(x.iter().flat_map(|b| std::iter::repeat(b).take(*factor as usize)))?
            }
            Encoder::Linear { rows } => {
                let mut acc = BitString::zeros(self.spec.m)?;
                for (i, row) in rows.iter().enumerate() {
                    if x.get(i as u64) {
                        acc = acc.xor(row)?;
                    }
                }
                acc
            }
            Encoder::Justesen(enc) => enc.encode(&x)?,
        };
        Ok(Codeword { bits, spec: Arc::clone(&self.spec) })
    }

    /// Generator rows `E(e_i)` for unit vectors `e_i`.
    fn generator_rows(&self) -> Result<Vec<BitString>> {
        (0..self.spec.n)
            .map(|i| {
                let mut e = BitString::zeros(self.spec.n)?;
                e.set(i, true);
                Ok(self.encode(&e)?.bits)
            })
            .collect()
    }
}

/// One-shot encode; builds the code tables each call.
pub fn encode(spec: &CodeSpec, x: &BitString) -> Result<Codeword> {
    Code::new(spec.clone())?.encode(x)
}

/// Minimum weight over nonzero messages, walking them in Gray-code order.
fn linear_min_weight(rows: &[BitString], m: u64) -> u64 {
    let n = rows.len() as u32;
    let mut acc = BitString::zeros(m).expect("m >= 1");
    let mut best = u64::MAX;
    for step in 1u64..(1u64 << n) {
        let flip = step.trailing_zeros() as usize;
        acc = acc.xor(&rows[flip]).expect("equal lengths");
        best = best.min(acc.count_ones());
        if best == 0 {
            break;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceReport {
    pub min_relative_distance: f64,
    pub exhaustive: bool,
}

/// Minimum relative distance of the code.
///
/// Exhaustive when `n <= max_exhaustive_n`; otherwise `samples` random
/// distinct input pairs drawn from `seed` give an upper estimate.
pub fn verify_min_distance_with(code: &Code, max_exhaustive_n: u64, samples: u64, seed: u64) -> Result<DistanceReport> {
    let spec = code.spec();
    let m = spec.m as f64;
    if spec.n <= max_exhaustive_n && spec.n <= 24 {
        // All backends are linear: min pairwise distance is min nonzero weight.
        let rows = code.generator_rows()?;
        let w = linear_min_weight(&rows, spec.m);
        return Ok(DistanceReport { min_relative_distance: w as f64 / m, exhaustive: true });
    }
    let mut best = u64::MAX;
    for i in 0..samples.max(1) {
        let mut rng = trial_rng(seed, i);
        let x = BitString::random(spec.n, &mut rng)?;
        let mut y = BitString::random(spec.n, &mut rng)?;
        while y == x {
            let j: u64 = rng.gen_range(0..spec.n);
            y.set(j, !y.get(j));
        }
        let d = hamming_distance(&code.encode(&x)?.bits, &code.encode(&y)?.bits)?;
        best = best.min(d);
    }
    Ok(DistanceReport { min_relative_distance: best as f64 / m, exhaustive: false })
}

pub fn verify_min_distance(code: &Code, max_exhaustive_n: u64) -> Result<DistanceReport> {
    verify_min_distance_with(code, max_exhaustive_n, 1000, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_bound_values() {
        assert!((justesen_delta_bound(3.0).unwrap() - 83.0 / 90.0).abs() < 1e-15);
        assert!((justesen_delta_bound(2.5).unwrap() - 0.926_666_666_666_666_6).abs() < 1e-15);
        assert!((justesen_delta_bound(1e12).unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(justesen_delta_bound(f64::INFINITY).unwrap(), 0.9);
        assert!(justesen_delta_bound(2.0).is_err());
        assert!(justesen_delta_bound(1.0).is_err());
        assert!(justesen_delta_bound(f64::NAN).is_err());
    }

    #[test]
    fn repetition_encodes() {
        let code = Code::new(CodeSpec::repetition(1, 3).unwrap()).unwrap();
        assert_eq!(code.encode(&"0".parse().unwrap()).unwrap().bits.to_string(), "000");
        assert_eq!(code.encode(&"1".parse().unwrap()).unwrap().bits.to_string(), "111");
        let code = Code::new(CodeSpec::repetition(2, 6).unwrap()).unwrap();
        assert_eq!(code.encode(&"10".parse().unwrap()).unwrap().bits.to_string(), "111000");
    }

    #[test]
    fn repetition_distance_exhaustive() {
        let code = Code::new(CodeSpec::repetition(1, 3).unwrap()).unwrap();
        let r = verify_min_distance(&code, 16).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.min_relative_distance, 1.0);
    }

    #[test]
    fn input_too_long_rejected() {
        let code = Code::new(CodeSpec::repetition(2, 4).unwrap()).unwrap();
        assert!(matches!(code.encode(&"101".parse().unwrap()), Err(Error::InputSize { got: 3, max: 2 })));
    }

    #[test]
    fn short_input_is_zero_padded() {
        let code = Code::new(CodeSpec::repetition(3, 6).unwrap()).unwrap();
        assert_eq!(code.encode(&"1".parse().unwrap()).unwrap().bits.to_string(), "110000");
    }

    #[test]
    fn justesen_parameter_errors() {
        assert!(matches!(CodeSpec::justesen(64, 2.0), Err(Error::Parameter(_))));
        assert!(matches!(CodeSpec::justesen(64, 1.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn distance_floor_rounding() {
        assert_eq!(min_distance_floor(24, 0.75), 6);
        assert_eq!(min_distance_floor(90, 83.0 / 90.0), 7);
        assert_eq!(min_distance_floor(100, 83.0 / 90.0), 8);
        assert_eq!(min_distance_floor(3, 0.0), 3);
    }

    #[test]
    fn random_linear_is_deterministic() {
        let spec = CodeSpec::random_linear(6, 18, 0.75, 11).unwrap();
        let a = Code::new(spec.clone()).unwrap();
        let b = Code::new(spec).unwrap();
        let x: BitString = "101101".parse().unwrap();
        assert_eq!(a.encode(&x).unwrap(), b.encode(&x).unwrap());
    }
}
