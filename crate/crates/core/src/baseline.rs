//! Classical simultaneous-message baseline.
//!
//! [`ClassicalCostModel`] is the `2 sqrt(n) + const` bits-per-round curve,
//! repeated until the one-sided error drops below the target. The grid
//! protocol is a small runnable protocol of the same shape: the codeword is
//! laid out as an `s x s` grid, Alice sends a random row, Bob a random
//! column, and the referee compares the bit where they cross.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{BitString, Code};
use crate::protocol::Verdict;
use crate::rng::trial_rng;
use crate::{Error, Real, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCostModel<T> {
    /// Additive constant in `2 sqrt(n) + const`.
    pub constant: T,
    /// One-sided error of a single round on distinct inputs.
    pub per_round_error: T,
}

impl<T: Real> Default for ClassicalCostModel<T> {
    fn default() -> Self {
        Self { constant: T::zero(), per_round_error: T::lit(0.25) }
    }
}

impl<T: Real> ClassicalCostModel<T> {
    pub fn per_round_bits(&self, n: u64) -> T {
        T::lit(2.0) * T::count(n).sqrt() + self.constant
    }

    /// `ceil(ln target / ln per_round_error)`, at least 1.
    pub fn repetitions(&self, target_error: T) -> Result<u64> {
        if !(target_error > T::zero() && target_error < T::one()) {
            return Err(Error::param(format!("target_error must lie in (0, 1), got {target_error}")));
        }
        let p = self.per_round_error;
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::param(format!("per_round_error must lie in (0, 1), got {p}")));
        }
        let ratio = target_error.ln() / p.ln();
        // absorb rounding so that an exact power is not bumped up by one
        let reps = (ratio - T::lit(1e-9)).ceil().max(T::one());
        Ok(reps.to_u64().expect("finite repetition count"))
    }
}

/// `repetitions(target) * (2 sqrt(n) + const)` bits.
pub fn classical_cost<T: Real>(n: u64, target_error: T, model: &ClassicalCostModel<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    Ok(T::count(model.repetitions(target_error)?) * model.per_round_bits(n))
}

/// Side of the smallest square grid holding `m` bits.
pub fn grid_side(m: u64) -> u64 {
    let mut s = (m as f64).sqrt() as u64;
    while s * s < m {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s
}

/// Bits sent per round by both parties: `2 (s + ceil(log2 s))`.
pub fn grid_bits_per_round(m: u64) -> u64 {
    let s = grid_side(m);
    let index_bits = if s <= 1 { 0 } else { 64 - (s - 1).leading_zeros() as u64 };
    2 * (s + index_bits)
}

fn padded_pair(a: &BitString, b: &BitString) -> Result<(BitString, BitString, u64)> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    let s = grid_side(a.len());
    Ok((a.zero_padded(s * s)?, b.zero_padded(s * s)?, s))
}

/// One round on raw codewords: row `r` from Alice, column `col` from Bob.
fn round_mismatch(a: &BitString, b: &BitString, s: u64, r: u64, col: u64) -> bool {
    a.get(r * s + col) != b.get(r * s + col)
}

/// Runs the grid protocol on `E(x)` and `E(x')` for `rounds` rounds.
pub fn grid_protocol_trial<R: Rng + ?Sized>(
    code: &Code,
    x: &BitString,
    x_prime: &BitString,
    rounds: u64,
    rng: &mut R,
) -> Result<Verdict> {
    if x.len() != x_prime.len() {
        return Err(Error::Dimension { expected: x.len(), got: x_prime.len() });
    }
    let a = code.encode(x)?.bits;
    let b = code.encode(x_prime)?.bits;
    grid_codeword_trial(&a, &b, rounds, rng)
}

/// Grid protocol on codewords already computed.
pub fn grid_codeword_trial<R: Rng + ?Sized>(a: &BitString, b: &BitString, rounds: u64, rng: &mut R) -> Result<Verdict> {
    let (a, b, s) = padded_pair(a, b)?;
    let mut verdict = Verdict::Equal;
    for _ in 0..rounds {
        let r = rng.gen_range(0..s);
        let col = rng.gen_range(0..s);
        if round_mismatch(&a, &b, s, r, col) {
            verdict = Verdict::Different;
        }
    }
    Ok(verdict)
}

/// Single-round mismatch probability, averaged over every (row, column).
pub fn grid_mismatch_probability(a: &BitString, b: &BitString) -> Result<f64> {
    let (a, b, s) = padded_pair(a, b)?;
    let mut hits = 0u64;
    for r in 0..s {
        for col in 0..s {
            hits += round_mismatch(&a, &b, s, r, col) as u64;
        }
    }
    Ok(hits as f64 / (s * s) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSummary {
    pub trials: u64,
    pub different: u64,
}

/// `trials` independent runs; trial `i` uses stream `(seed, i)`.
pub fn grid_trials(a: &BitString, b: &BitString, rounds: u64, trials: u64, seed: u64) -> Result<GridSummary> {
    padded_pair(a, b)?;
    let different = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            (grid_codeword_trial(a, b, rounds, &mut rng).expect("lengths checked") == Verdict::Different) as u64
        })
        .sum();
    Ok(GridSummary { trials, different })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::CodeSpec;

    #[test]
    fn default_repetitions() {
        let model = ClassicalCostModel::<f64>::default();
        assert_eq!(model.repetitions(1e-6).unwrap(), 10);
        assert!(0.25f64.powi(10) <= 1e-6);
        assert_eq!(model.repetitions(0.25).unwrap(), 1);
        assert_eq!(model.repetitions(0.9).unwrap(), 1);
    }

    #[test]
    fn cost_examples() {
        let model = ClassicalCostModel::<f64>::default();
        assert_eq!(classical_cost(1_000_000, 1e-6, &model).unwrap(), 20_000.0);
        assert_eq!(classical_cost(1, 0.5, &model).unwrap(), 2.0);
        assert!(classical_cost(10, 0.0, &model).is_err());
        assert!(classical_cost(10, 1.0, &model).is_err());
        assert!(classical_cost(0, 0.5, &model).is_err());
    }

    #[test]
    fn grid_geometry() {
        assert_eq!(grid_side(1), 1);
        assert_eq!(grid_side(4), 2);
        assert_eq!(grid_side(5), 3);
        assert_eq!(grid_side(4080), 64);
        assert_eq!(grid_bits_per_round(4), 2 * (2 + 1));
        assert_eq!(grid_bits_per_round(4096), 2 * (64 + 6));
        assert_eq!(grid_bits_per_round(1), 2);
    }

    #[test]
    fn repetition_pair_always_caught() {
        let code = Code::new(CodeSpec::repetition(1, 4).unwrap()).unwrap();
        let zero = BitString::from_bits([false]).unwrap();
        let one = BitString::from_bits([true]).unwrap();
        let mut rng = trial_rng(3, 0);
        for _ in 0..100 {
            assert_eq!(grid_protocol_trial(&code, &zero, &one, 1, &mut rng).unwrap(), Verdict::Different);
            assert_eq!(grid_protocol_trial(&code, &one, &one, 1, &mut rng).unwrap(), Verdict::Equal);
        }
    }

    #[test]
    fn mismatch_is_distance_over_grid() {
        let a: BitString = "110100101".parse().unwrap();
        let b: BitString = "010110100".parse().unwrap();
        assert_eq!(grid_mismatch_probability(&a, &b).unwrap(), 3.0 / 9.0);
    }

    #[test]
    fn length_mismatch_rejected() {
        let a = BitString::zeros(4).unwrap();
        let b = BitString::zeros(5).unwrap();
        assert!(matches!(grid_mismatch_probability(&a, &b), Err(Error::Dimension { .. })));
    }
}
