//! Subcommand implementations. Each returns its output as a string so the
//! caller decides where it goes.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use qfp_core::analysis::{
    dimension_bound_loose, dimension_report, expected_fractions, ideal_error_asymptote, ideal_error_bound,
    required_mean_photon_number, robust_error_asymptote, robust_error_bound, robust_error_large_m, BoundMode,
    DeltaQConvention, Horizon, NoiseParams,
};
use qfp_core::codes::{hamming_distance, BitString, Code, CodeSpec};
use qfp_core::protocol::{
    exact_error_probability, simulate_trials, ExactOptions, ProtocolParams, Referee, Verdict,
};

use crate::config::ExperimentConfig;
use crate::report::Report;
use crate::sweep;

/// Largest `m` for which `simulate` runs the cubic-time exact robust oracle.
const ROBUST_EXACT_CAP: u64 = 600;

fn read_bits(path: &Path) -> Result<BitString> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    BitString::from_file_bytes(&bytes).with_context(|| format!("decoding {}", path.display()))
}

fn spec_line(spec: &CodeSpec) -> String {
    format!("n={} m={} c={} delta={}", spec.n, spec.m, spec.c, spec.delta)
}

/// Agreement bound used by the analysis: the configured `delta` override,
/// else the code's own.
fn analysis_delta(cfg: &ExperimentConfig, code_delta: f64) -> f64 {
    cfg.delta.unwrap_or(code_delta)
}

pub struct EncodeOutput {
    pub codeword: Vec<u8>,
    pub summary: String,
}

/// Encodes a QFP1 input file; the codeword comes back in QFP1 format.
pub fn encode(cfg: &ExperimentConfig, input: &Path) -> Result<EncodeOutput> {
    cfg.validate()?;
    let x = read_bits(input)?;
    let code = Code::new(cfg.code_spec()?)?;
    let cw = code.encode(&x)?;
    Ok(EncodeOutput { codeword: cw.bits.to_file_bytes(), summary: spec_line(code.spec()) })
}

/// Referee for the configured rule at agreement bound `delta`.
pub fn referee(cfg: &ExperimentConfig, params: &ProtocolParams<f64>, delta: f64) -> Result<Referee> {
    let r = match cfg.mode {
        BoundMode::Ideal => Referee::ideal(),
        BoundMode::Robust => {
            let f = expected_fractions(params, delta, cfg.noise_model, cfg.delta_q_convention)?;
            Referee::robust(f.q_e, f.delta_q)?
        }
    };
    Ok(r.with_double_click(cfg.double_click_policy).with_zero_click(cfg.zero_click_policy))
}

pub fn simulate(cfg: &ExperimentConfig, x_path: &Path, y_path: &Path) -> Result<Report> {
    cfg.validate()?;
    let x = read_bits(x_path)?;
    let y = read_bits(y_path)?;
    let code = Code::new(cfg.code_spec()?)?;
    let spec = code.spec().clone();
    let ex = code.encode(&x)?.bits;
    let ey = code.encode(&y)?.bits;
    let equal = x.zero_padded(spec.n)? == y.zero_padded(spec.n)?;
    let truth = if equal { Verdict::Equal } else { Verdict::Different };
    let agree = spec.m - hamming_distance(&ex, &ey)?;
    let params = cfg.params(spec.m)?;
    let delta = analysis_delta(cfg, spec.delta);
    let referee = referee(cfg, &params, delta)?;
    let summary = simulate_trials(&params, &ex, &ey, truth, &referee, cfg.trials, cfg.master_seed)?;

    let p_c = params.click_prob();
    let bound = match cfg.mode {
        BoundMode::Ideal => {
            if equal {
                if cfg.nu == 1.0 && cfg.p_dark == 0.0 { 0.0 } else { f64::NAN }
            } else {
                ideal_error_bound(spec.m, p_c, delta)
            }
        }
        BoundMode::Robust => {
            let f = expected_fractions(&params, delta, cfg.noise_model, cfg.delta_q_convention)?;
            robust_error_bound(spec.m, f.p_c_eff, f.delta_q)
        }
    };
    let exact_cap = match cfg.mode {
        BoundMode::Ideal => u64::MAX,
        BoundMode::Robust => ROBUST_EXACT_CAP,
    };
    let exact = if spec.m <= exact_cap {
        Some(exact_error_probability(&params, agree, &referee, ExactOptions { cap: u64::MAX })?)
    } else {
        None
    };

    let mut r = Report::new();
    r.text("command", "simulate")
        .text("backend", format!("{:?}", spec.backend).to_lowercase())
        .int("n", spec.n)
        .int("m", spec.m)
        .float("c", spec.c)
        .float("delta", delta)
        .float("alpha_sq", cfg.alpha_sq)
        .float("eta", cfg.eta)
        .float("nu", cfg.nu)
        .float("p_dark", cfg.p_dark)
        .text("rule", cfg_mode_name(cfg.mode));
    if cfg.mode == BoundMode::Robust {
        r.text("delta_q_convention", cfg.delta_q_convention.name());
        if let Some(t) = referee.threshold {
            r.float("threshold", t.cutoff());
        }
    }
    r.int("trials", cfg.trials)
        .int("master_seed", cfg.master_seed)
        .flag("inputs_equal", equal)
        .int("agree_slots", agree)
        .int("total_zeros", summary.totals.zeros)
        .int("total_ones", summary.totals.ones())
        .int("total_single_clicks", summary.totals.clicks)
        .int("total_no_click", summary.totals.no_click)
        .int("total_double_click", summary.totals.double_click)
        .float("mean_single_clicks_per_run", summary.totals.clicks as f64 / cfg.trials as f64)
        .int("verdict_equal", summary.equal_verdicts)
        .int("verdict_different", summary.different_verdicts)
        .int("inconclusive", summary.inconclusive)
        .int("errors", summary.errors)
        .float("error_rate", summary.error_rate())
        .float("std_err", summary.std_err())
        .float("analytic_bound", bound);
    match exact {
        Some(e) => r.float("exact_error", e),
        None => r.text("exact_error", "n/a"),
    };
    if bound.is_finite() {
        r.flag("error_rate_within_bound", summary.error_rate() <= bound + 5.0 * summary.std_err());
    }
    Ok(r)
}

fn cfg_mode_name(mode: BoundMode) -> &'static str {
    match mode {
        BoundMode::Ideal => "ideal",
        BoundMode::Robust => "robust",
    }
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    if cfg.sweep.is_empty() {
        bail!("sweep list is empty");
    }
    let rows = sweep::run(cfg)?;
    Ok(sweep::render(&rows, cfg.format))
}

pub fn bounds(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let (m, code_delta) = cfg.code_dims()?;
    let delta = analysis_delta(cfg, code_delta);
    let params = cfg.params(m)?;
    let f = expected_fractions(&params, delta, cfg.noise_model, cfg.delta_q_convention)
        .map_err(|e| anyhow!("cannot evaluate expected fractions: {e}"))?;
    let a_det = params.detected_alpha_sq();
    let dim = dimension_report(cfg.alpha_sq, cfg.eps_trace, m)?;

    let mut r = Report::new();
    r.text("command", "bounds")
        .int("m", m)
        .float("delta", delta)
        .float("alpha_sq", cfg.alpha_sq)
        .float("alpha_sq_detected", a_det)
        .float("p_c", f.p_c)
        .float("p_c_eff", f.p_c_eff)
        .float("q_e", f.q_e)
        .float("q_d", f.q_d)
        .float("delta_q_printed", f.delta_q_with(DeltaQConvention::Printed))
        .float("delta_q_halved", f.delta_q_with(DeltaQConvention::Halved))
        .text("delta_q_convention", cfg.delta_q_convention.name())
        .float("delta_q", f.delta_q)
        .float("ideal_bound", ideal_error_bound(m, f.p_c, delta))
        .float("ideal_asymptote", ideal_error_asymptote(a_det, delta))
        .float("robust_bound", robust_error_bound(m, f.p_c_eff, f.delta_q))
        .float("robust_asymptote", robust_error_asymptote(a_det, f.delta_q))
        .float(
            "robust_bound_large_m",
            robust_error_large_m(a_det, m, delta, cfg.nu, cfg.p_dark, cfg.delta_q_convention),
        )
        .int("delta_n", dim.delta_n)
        .float("eps_prime", dim.eps_prime)
        .float("eps_trace", dim.eps)
        .float("log2_dim", dim.log2_dim)
        .float("log2_dim_loose", dimension_bound_loose(cfg.alpha_sq, dim.delta_n, m));
    Ok(r)
}

pub fn optimize(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let (m, code_delta) = cfg.code_dims()?;
    let delta = analysis_delta(cfg, code_delta);
    let s = cfg.robust_settings();
    let solve = |noise: &NoiseParams<f64>, mode, horizon| {
        required_mean_photon_number(cfg.target_error, delta, noise, mode, horizon, s)
    };
    let ideal = solve(&NoiseParams::ideal(), BoundMode::Ideal, Horizon::Asymptotic)?;
    let ideal_finite = solve(&NoiseParams::ideal(), BoundMode::Ideal, Horizon::Finite(m))?;
    let robust = solve(&cfg.noise(), BoundMode::Robust, Horizon::Asymptotic)
        .map_err(|e| anyhow!("robust requirement: {e}"))?;
    let robust_large_m = solve(&cfg.noise(), BoundMode::Robust, Horizon::LargeM(m))
        .map_err(|e| anyhow!("robust requirement with dark counts at m = {m}: {e}"))?;

    let mut r = Report::new();
    r.text("command", "optimize")
        .float("target_error", cfg.target_error)
        .int("m", m)
        .float("delta", delta)
        .float("eta", cfg.eta)
        .float("nu", cfg.nu)
        .float("p_dark", cfg.p_dark)
        .text("delta_q_convention", cfg.delta_q_convention.name())
        .float("alpha_sq_ideal", ideal)
        .float("alpha_sq_ideal_finite_m", ideal_finite)
        .float("alpha_sq_robust", robust)
        .float("alpha_sq_robust_detected", robust * cfg.eta)
        .float("alpha_sq_robust_large_m", robust_large_m)
        .float("total_mean_photons_ideal", ideal)
        .float("total_mean_photons_robust", robust)
        .float("mean_photons_per_pulse_robust", robust / m as f64);
    if let Some(reference) = cfg.reference_alpha_sq_ideal {
        r.float("reference_alpha_sq_ideal", reference).float("relative_deviation_ideal", ideal / reference - 1.0);
    }
    if let Some(reference) = cfg.reference_alpha_sq_robust {
        r.float("reference_alpha_sq_robust", reference).float("relative_deviation_robust", robust / reference - 1.0);
    }
    Ok(r)
}
