//! Brute-force error probabilities by walking every slot-outcome pattern.
//!
//! Independent of the convolution in [`super::exact`]: each of the `4^m`
//! patterns is scored by [`Referee::decide`] on its tally. Meant for `m` up
//! to about a dozen.

use super::{ProtocolParams, Referee, RunTally, SlotLaw, SlotOutcome, Verdict};
use crate::{Error, Real, Result};

/// Largest `m` accepted by [`enumerate_error_probabilities`].
pub const MAX_ENUMERATION_M: u64 = 14;

const OUTCOMES: [SlotOutcome; 4] = [SlotOutcome::None, SlotOutcome::Zero, SlotOutcome::One, SlotOutcome::Double];

/// Error probability of each referee, summed over all outcome patterns.
///
/// The first `agree_count` slots agree; inputs count as equal when
/// `agree_count == m`. Patterns of probability zero are skipped.
pub fn enumerate_error_probabilities<T: Real>(
    params: &ProtocolParams<T>,
    agree_count: u64,
    referees: &[Referee],
) -> Result<Vec<f64>> {
    params.validate()?;
    let m = params.m;
    if m > MAX_ENUMERATION_M {
        return Err(Error::Capacity { m, cap: MAX_ENUMERATION_M });
    }
    if agree_count > m {
        return Err(Error::Domain(format!("agree_count = {agree_count} exceeds m = {m}")));
    }
    let agree = SlotLaw::new(params, true);
    let differ = SlotLaw::new(params, false);
    let laws: Vec<[f64; 4]> = (0..m)
        .map(|i| {
            let l = if i < agree_count { &agree } else { &differ };
            OUTCOMES.map(|o| l.prob(o))
        })
        .collect();
    let truth = if agree_count == m { Verdict::Equal } else { Verdict::Different };
    // one accumulator row per depth, so each level sums at most four
    // children and rounding grows with m rather than 4^m
    let r = referees.len();
    let mut scratch = vec![0.0; (m as usize + 1) * r];
    let mut tally = RunTally::default();
    walk(&laws, 0, &mut tally, referees, truth, &mut scratch);
    Ok(scratch[..r].to_vec())
}

/// Writes the conditional error probabilities of the subtree below `slot`
/// into the first row of `scratch`; deeper rows are workspace.
fn walk(laws: &[[f64; 4]], slot: usize, tally: &mut RunTally, referees: &[Referee], truth: Verdict, scratch: &mut [f64]) {
    let (here, below) = scratch.split_at_mut(referees.len());
    here.fill(0.0);
    if slot == laws.len() {
        for (r, e) in referees.iter().zip(here.iter_mut()) {
            if r.decide(tally).verdict != truth {
                *e = 1.0;
            }
        }
        return;
    }
    for (o, &p) in OUTCOMES.iter().zip(&laws[slot]) {
        if p == 0.0 {
            continue;
        }
        let saved = *tally;
        tally.record(*o);
        walk(laws, slot + 1, tally, referees, truth, below);
        *tally = saved;
        for (e, c) in here.iter_mut().zip(below.iter()) {
            *e += p * c;
        }
    }
}
