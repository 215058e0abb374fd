//! Monte Carlo simulation of referee runs.
//!
//! Each slot consumes exactly four uniforms, in this order:
//!
//! 1. photon click: `u1 < p_c`
//! 2. detector assignment: `u2 < nu` sends the photon to the parity-correct
//!    detector ("0" when the bits agree, "1" otherwise), else to the other
//! 3. dark count on detector "0": `u3 < p_dark`
//! 4. dark count on detector "1": `u4 < p_dark`
//!
//! Trial `i` of a batch uses [`trial_rng`]`(master_seed, i)`, so batch results
//! are identical for any number of worker threads.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ProtocolParams, Referee, RunTally, SlotOutcome, Verdict};
use crate::codes::{BitString, Code, Codeword};
use crate::rng::{trial_rng, uniform};
use crate::{Error, Real, Result};

/// Per-slot sampler with the click probability computed once.
#[derive(Clone, Copy, Debug)]
pub struct SlotSampler {
    p_click: f64,
    nu: f64,
    p_dark: f64,
}

impl SlotSampler {
    pub fn new<T: Real>(params: &ProtocolParams<T>) -> Self {
        let p = params.to_f64();
        Self { p_click: p.click_prob(), nu: p.nu, p_dark: p.p_dark }
    }

    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, bits_agree: bool, rng: &mut R) -> SlotOutcome {
        let photon = uniform(rng) < self.p_click;
        let correct = uniform(rng) < self.nu;
        let dark0 = uniform(rng) < self.p_dark;
        let dark1 = uniform(rng) < self.p_dark;
        // Detector "1" is the parity-correct one for differing bits.
        let lands_on_one = correct != bits_agree;
        let fired0 = dark0 || (photon && !lands_on_one);
        let fired1 = dark1 || (photon && lands_on_one);
        match (fired0, fired1) {
            (false, false) => SlotOutcome::None,
            (true, false) => SlotOutcome::Zero,
            (false, true) => SlotOutcome::One,
            (true, true) => SlotOutcome::Double,
        }
    }
}

pub fn slot_outcome<T: Real, R: RngCore + ?Sized>(params: &ProtocolParams<T>, bits_agree: bool, rng: &mut R) -> SlotOutcome {
    SlotSampler::new(params).sample(bits_agree, rng)
}

fn check_lengths(m: u64, a: &BitString, b: &BitString) -> Result<()> {
    for s in [a, b] {
        if s.len() != m {
            return Err(Error::Dimension { expected: m, got: s.len() });
        }
    }
    Ok(())
}

fn run_bits<R: RngCore + ?Sized>(sampler: &SlotSampler, a: &BitString, b: &BitString, rng: &mut R) -> RunTally {
    let mut tally = RunTally::default();
    for i in 0..a.len() {
        tally.record(sampler.sample(a.get(i) == b.get(i), rng));
    }
    tally
}

/// One referee run over codewords `ex` and `ex_prime`.
pub fn simulate_run<T: Real, R: RngCore + ?Sized>(
    params: &ProtocolParams<T>,
    ex: &Codeword,
    ex_prime: &Codeword,
    rng: &mut R,
) -> Result<RunTally> {
    params.validate()?;
    check_lengths(params.m, &ex.bits, &ex_prime.bits)?;
    Ok(run_bits(&SlotSampler::new(params), &ex.bits, &ex_prime.bits, rng))
}

/// Aggregate over a batch of runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub trials: u64,
    /// Runs whose verdict disagreed with the ground truth.
    pub errors: u64,
    pub equal_verdicts: u64,
    pub different_verdicts: u64,
    pub inconclusive: u64,
    /// Slot counts summed over all runs.
    pub totals: RunTally,
}

impl SimulationSummary {
    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.errors += other.errors;
        self.equal_verdicts += other.equal_verdicts;
        self.different_verdicts += other.different_verdicts;
        self.inconclusive += other.inconclusive;
        self.totals.accumulate(&other.totals);
        self
    }

    fn single(tally: RunTally, verdict: Verdict, inconclusive: bool, truth: Verdict) -> Self {
        Self {
            trials: 1,
            errors: (verdict != truth) as u64,
            equal_verdicts: (verdict == Verdict::Equal) as u64,
            different_verdicts: (verdict == Verdict::Different) as u64,
            inconclusive: inconclusive as u64,
            totals: tally,
        }
    }

    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials.max(1) as f64
    }

    /// Binomial standard error of [`error_rate`](Self::error_rate).
    pub fn std_err(&self) -> f64 {
        let p = self.error_rate();
        (p * (1.0 - p) / self.trials.max(1) as f64).sqrt()
    }
}

/// Repeated runs on a fixed pair of bit strings of length `params.m`.
///
/// `truth` is the correct verdict for the underlying inputs.
pub fn simulate_trials<T: Real>(
    params: &ProtocolParams<T>,
    a: &BitString,
    b: &BitString,
    truth: Verdict,
    referee: &Referee,
    trials: u64,
    master_seed: u64,
) -> Result<SimulationSummary> {
    params.validate()?;
    check_lengths(params.m, a, b)?;
    let sampler = SlotSampler::new(params);
    Ok((0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(master_seed, i);
            let tally = run_bits(&sampler, a, b, &mut rng);
            let d = referee.decide(&tally);
            SimulationSummary::single(tally, d.verdict, d.inconclusive, truth)
        })
        .reduce(SimulationSummary::default, SimulationSummary::merge))
}

/// How input pairs are drawn in [`estimate_error_rate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputRegime {
    /// Synthetic codewords differing in exactly `ceil((1 - delta) m)` slots.
    WorstCase,
    /// Independent uniformly random distinct inputs, encoded per trial.
    RandomDistinct,
    /// One uniformly random input sent by both parties, per trial.
    Equal,
}

/// Codeword pair at the guaranteed minimum distance: all zeros, and ones on
/// the first `ceil((1 - delta) m)` positions.
pub fn worst_case_pair(m: u64, delta: f64) -> Result<(BitString, BitString)> {
    let d = crate::codes::min_distance_floor(m, delta).min(m);
    let a = BitString::zeros(m)?;
    let mut b = BitString::zeros(m)?;
    for i in 0..d {
        b.set(i, true);
    }
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub rate: f64,
    pub std_err: f64,
    pub summary: SimulationSummary,
}

/// Empirical error rate of `referee` on pairs from `regime`.
///
/// In the random regimes, trial `i` first draws its input(s) from its own
/// stream and then simulates the slots from the same stream.
pub fn estimate_error_rate<T: Real>(
    params: &ProtocolParams<T>,
    code: &Code,
    referee: &Referee,
    regime: InputRegime,
    trials: u64,
    master_seed: u64,
) -> Result<ErrorEstimate> {
    params.validate()?;
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let spec = code.spec();
    if params.m != spec.m {
        return Err(Error::Dimension { expected: spec.m, got: params.m });
    }
    let summary = match regime {
        InputRegime::WorstCase => {
            let (a, b) = worst_case_pair(spec.m, spec.delta)?;
            simulate_trials(params, &a, &b, Verdict::Different, referee, trials, master_seed)?
        }
        InputRegime::RandomDistinct | InputRegime::Equal => {
            let sampler = SlotSampler::new(params);
            let n = spec.requested_n;
            (0..trials)
                .into_par_iter()
                .map(|i| -> Result<SimulationSummary> {
                    let mut rng = trial_rng(master_seed, i);
                    let x = BitString::random(n, &mut rng)?;
                    let (ex, ey, truth) = if regime == InputRegime::Equal {
                        let e = code.encode(&x)?.bits;
                        (e.clone(), e, Verdict::Equal)
                    } else {
                        let mut y = BitString::random(n, &mut rng)?;
                        let mut j = 0;
                        while y == x {
                            y.set(j % n, !y.get(j % n));
                            j += 1;
                        }
                        (code.encode(&x)?.bits, code.encode(&y)?.bits, Verdict::Different)
                    };
                    let tally = run_bits(&sampler, &ex, &ey, &mut rng);
                    let d = referee.decide(&tally);
                    Ok(SimulationSummary::single(tally, d.verdict, d.inconclusive, truth))
                })
                .try_reduce(SimulationSummary::default, |a, b| Ok(a.merge(b)))?
        }
    };
    Ok(ErrorEstimate { rate: summary.error_rate(), std_err: summary.std_err(), summary })
}
