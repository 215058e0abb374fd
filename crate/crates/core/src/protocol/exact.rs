//! Exact decision-error probabilities.
//!
//! Slots are independent and fall into two classes (codeword bits agree or
//! differ), each with a four-outcome categorical law. The ideal rule only
//! needs the probability that no "1" observation occurs, a product over
//! slots. The robust rule needs the joint law of `(C, Z)`, obtained by
//! convolving the slots one at a time over a triangular `(c, z)` grid.

use super::{DecisionRule, DoubleClickPolicy, ProtocolParams, Referee, SlotOutcome, ZeroClickPolicy};
use crate::{Error, Real, Result};

/// Largest `m` handled by [`exact_error_probability`] unless overridden.
pub const DEFAULT_EXACT_CAP: u64 = 5000;

/// Outcome probabilities of one slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlotLaw {
    pub none: f64,
    pub zero: f64,
    pub one: f64,
    pub double: f64,
}

impl SlotLaw {
    /// Law of a slot whose bits agree (`bits_agree`) or differ.
    ///
    /// With photon-click probability `p`, visibility `nu` and dark-count
    /// probability `d` per detector:
    ///
    /// ```text
    /// P(zero)   = (1-d) (p nu' + (1-p) d)
    /// P(one)    = (1-d) (p (1-nu') + (1-p) d)
    /// P(none)   = (1-p) (1-d)^2
    /// P(double) = p d + (1-p) d^2
    /// ```
    ///
    /// where `nu' = nu` for agreeing bits and `1 - nu` otherwise.
    pub fn new<T: Real>(params: &ProtocolParams<T>, bits_agree: bool) -> Self {
        let p64 = params.to_f64();
        let p = crate::analysis::click_prob(p64.detected_alpha_sq(), p64.m);
        let d = p64.p_dark;
        let nu = if bits_agree { p64.nu } else { 1.0 - p64.nu };
        Self {
            none: (1.0 - p) * (1.0 - d) * (1.0 - d),
            zero: (1.0 - d) * (p * nu + (1.0 - p) * d),
            one: (1.0 - d) * (p * (1.0 - nu) + (1.0 - p) * d),
            double: p * d + (1.0 - p) * d * d,
        }
    }

    pub fn prob(&self, outcome: SlotOutcome) -> f64 {
        match outcome {
            SlotOutcome::None => self.none,
            SlotOutcome::Zero => self.zero,
            SlotOutcome::One => self.one,
            SlotOutcome::Double => self.double,
        }
    }

    /// Probability of exactly one click.
    pub fn single(&self) -> f64 {
        self.zero + self.one
    }

    /// Probability that the slot yields no "1" observation under `policy`.
    fn no_one(&self, policy: DoubleClickPolicy) -> f64 {
        match policy {
            DoubleClickPolicy::Exclude => self.none + self.zero + self.double,
            DoubleClickPolicy::CountOne => self.none + self.zero,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub cap: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_EXACT_CAP }
    }
}

/// Probability that `referee` returns the wrong verdict.
///
/// `agree_count` is the number of slots whose codeword bits agree; the
/// inputs are taken to be equal exactly when `agree_count == m`.
pub fn exact_error_probability<T: Real>(
    params: &ProtocolParams<T>,
    agree_count: u64,
    referee: &Referee,
    options: ExactOptions,
) -> Result<f64> {
    params.validate()?;
    let m = params.m;
    if agree_count > m {
        return Err(Error::Domain(format!("agree_count = {agree_count} exceeds m = {m}")));
    }
    if m > options.cap {
        return Err(Error::Capacity { m, cap: options.cap });
    }
    let equal_inputs = agree_count == m;
    let agree = SlotLaw::new(params, true);
    let differ = SlotLaw::new(params, false);
    let disagree_count = m - agree_count;

    match referee.rule {
        DecisionRule::Ideal => {
            let p_no_one = agree.no_one(referee.double_click).powi(agree_count as i32)
                * differ.no_one(referee.double_click).powi(disagree_count as i32);
            Ok(if equal_inputs { 1.0 - p_no_one } else { p_no_one })
        }
        DecisionRule::Robust => {
            let threshold = referee.threshold.ok_or_else(|| Error::param("robust referee without threshold"))?;
            let joint = joint_clicks_zeros(m, agree_count, &agree, &differ);
            let says_equal_without_clicks = referee.zero_click == ZeroClickPolicy::Equal;
            let mut p_equal = 0.0;
            for c in 0..=m as usize {
                let row = &joint[tri(c)..tri(c) + c + 1];
                if c == 0 {
                    if says_equal_without_clicks {
                        p_equal += row[0];
                    }
                    continue;
                }
                for (z, &pr) in row.iter().enumerate() {
                    if threshold.accepts(z as u64, c as u64) {
                        p_equal += pr;
                    }
                }
            }
            Ok(if equal_inputs { (1.0 - p_equal).max(0.0) } else { p_equal.min(1.0) })
        }
    }
}

#[inline]
fn tri(c: usize) -> usize {
    c * (c + 1) / 2
}

/// `P(C = c, Z = z)` stored row-major on the triangle `z <= c`.
fn joint_clicks_zeros(m: u64, agree_count: u64, agree: &SlotLaw, differ: &SlotLaw) -> Vec<f64> {
    let m = m as usize;
    let mut dist = vec![0.0; tri(m + 1)];
    dist[0] = 1.0;
    let mut filled = 0usize;
    for slot in 0..m {
        let law = if (slot as u64) < agree_count { agree } else { differ };
        let stay = law.none + law.double;
        for c in (0..=filled).rev() {
            for z in (0..=c).rev() {
                let pr = dist[tri(c) + z];
                if pr == 0.0 {
                    continue;
                }
                dist[tri(c) + z] = pr * stay;
                dist[tri(c + 1) + z + 1] += pr * law.zero;
                dist[tri(c + 1) + z] += pr * law.one;
            }
        }
        filled += 1;
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal_params(alpha_sq: f64, m: u64) -> ProtocolParams<f64> {
        ProtocolParams::ideal(alpha_sq, m).unwrap()
    }

    #[test]
    fn slot_law_sums_to_one() {
        let p = ProtocolParams::new(3.0, 0.4, 0.9, 0.05, 5).unwrap();
        for agree in [true, false] {
            let l = SlotLaw::new(&p, agree);
            assert!((l.none + l.zero + l.one + l.double - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_inputs_ideal_noiseless_never_err() {
        let e = exact_error_probability(&ideal_params(2.0, 1), 1, &Referee::ideal(), ExactOptions::default()).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn two_slot_hand_case() {
        let alpha_sq = 0.7;
        let pc = 1.0 - (-alpha_sq as f64).exp();
        let e = exact_error_probability(&ideal_params(alpha_sq, 2), 0, &Referee::ideal(), ExactOptions::default()).unwrap();
        assert!((e - (1.0 - pc).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn capacity_and_domain_errors() {
        let p = ideal_params(1.0, 10);
        let small = ExactOptions { cap: 5 };
        assert!(matches!(exact_error_probability(&p, 0, &Referee::ideal(), small), Err(Error::Capacity { .. })));
        assert!(matches!(
            exact_error_probability(&p, 11, &Referee::ideal(), ExactOptions::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn joint_distribution_normalized() {
        let p = ProtocolParams::new(4.0, 0.5, 0.93, 0.02, 9).unwrap();
        let joint = joint_clicks_zeros(9, 4, &SlotLaw::new(&p, true), &SlotLaw::new(&p, false));
        let total: f64 = joint.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }
}
