// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo yield of the minority gate under CNT diameter spread.
//!
//! Each trial perturbs the diameters of the inverter's two tubes, maps the
//! resulting threshold shifts onto the switching point with the first-order
//! rule `v_sw' = v_sw + κ·(ΔVn − ΔVp)/2`, and re-runs the exhaustive
//! functional check. The divider devices are not varied: a common-mode
//! change of their capacitance cancels in the ratio.
//!
//! Trial `i` draws from its own ChaCha stream keyed by `(seed, i)`, so
//! results do not depend on scheduling, and the same standard-normal draws
//! are reused across `sigma_rel` levels (common random numbers).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analog::{correctness_margin, functional_check, GateConfig, VtcParams};
use crate::device::{threshold_for_diameter, CntDevice};
use crate::{Error, Result};

/// Largest base width accepted by [`gate_yield`].
pub const MAX_YIELD_FAN_IN: u32 = 15;

/// Perturbed diameters at or below this fraction of nominal are redrawn.
pub const MIN_DIAMETER_FRACTION: f64 = 0.1;

pub const SAMPLING_SCHEME: &str = "normal relative diameter offset, redrawn when D' <= 0.1 D";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationSpec {
    /// Relative standard deviation of the tube diameter.
    pub sigma_rel: f64,
    pub trials: u32,
    pub seed: u64,
    /// Scale factor κ from threshold shift to switching-point shift.
    pub sensitivity: f64,
}

impl VariationSpec {
    pub fn new(sigma_rel: f64, trials: u32, seed: u64) -> Result<Self> {
        let spec = Self { sigma_rel, trials, seed, sensitivity: 1.0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_sensitivity(self, sensitivity: f64) -> Result<Self> {
        let spec = Self { sensitivity, ..self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_rel >= 0.0 && self.sigma_rel < 0.5) {
            return Err(Error::OutOfRange(format!("sigma_rel must be in [0, 0.5), got {}", self.sigma_rel)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !self.sensitivity.is_finite() {
            return Err(Error::InvalidParameter("sensitivity must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YieldReport {
    pub trials: u32,
    pub passes: u32,
    pub yield_fraction: f64,
    /// Mean of all sampled inverter thresholds (two per trial).
    pub vth_mean: f64,
    pub vth_stddev: f64,
    /// Smallest signed correctness margin seen in any trial; negative when a
    /// trial failed.
    pub worst_margin: f64,
    pub sampling: String,
}

/// Threshold of a tube whose diameter is scaled by `1 + offset`.
pub fn vth_at_offset(nominal: &CntDevice, offset: f64) -> Result<f64> {
    semiconducting(nominal)?;
    let d = nominal.diameter * (1.0 + offset);
    if d <= 0.0 {
        return Err(Error::OutOfRange(format!("perturbed diameter {d} nm is not positive")));
    }
    Ok(threshold_for_diameter(d))
}

fn semiconducting(nominal: &CntDevice) -> Result<f64> {
    nominal.threshold_voltage.ok_or(Error::MetallicTube(nominal.chirality.into()))
}

/// Draws one threshold for a tube whose diameter varies around `nominal`.
pub fn sample_vth<R: Rng + ?Sized>(nominal: &CntDevice, spec: &VariationSpec, rng: &mut R) -> Result<f64> {
    semiconducting(nominal)?;
    spec.validate()?;
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let scale = 1.0 + spec.sigma_rel * z;
        if scale > MIN_DIAMETER_FRACTION {
            return Ok(threshold_for_diameter(nominal.diameter * scale));
        }
    }
}

/// Deterministic RNG for one trial.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(trial));
    rng
}

/// Switching point after the inverter thresholds moved by `dvn` and `dvp`.
pub fn shifted_v_sw(p: &VtcParams, sensitivity: f64, dvn: f64, dvp: f64) -> f64 {
    p.v_sw + sensitivity * (dvn - dvp) / 2.0
}

/// Outcome of a gate with its switching point moved to `v_sw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub v_sw: f64,
    pub pass: bool,
    pub margin: f64,
}

/// Functional check at a shifted switching point. A point outside the rails
/// fails outright.
pub fn trial_outcome(cfg: &GateConfig, p: &VtcParams, v_sw: f64) -> Result<TrialOutcome> {
    let shifted = VtcParams { v_sw, ..*p };
    let margin = correctness_margin(cfg, &shifted)?;
    let pass = v_sw > 0.0 && v_sw < cfg.vdd() && functional_check(cfg, &shifted)?;
    Ok(TrialOutcome { v_sw, pass, margin })
}

struct TrialSample {
    vth_n: f64,
    vth_p: f64,
    outcome: TrialOutcome,
}

fn run_trial(
    cfg: &GateConfig,
    p: &VtcParams,
    nominal: &CntDevice,
    spec: &VariationSpec,
    trial: u32,
) -> Result<TrialSample> {
    let vth0 = semiconducting(nominal)?;
    let mut rng = trial_rng(spec.seed, trial);
    let vth_n = sample_vth(nominal, spec, &mut rng)?;
    let vth_p = sample_vth(nominal, spec, &mut rng)?;
    let v_sw = shifted_v_sw(p, spec.sensitivity, vth_n - vth0, vth_p - vth0);
    Ok(TrialSample { vth_n, vth_p, outcome: trial_outcome(cfg, p, v_sw)? })
}

/// Per-trial outcomes in trial order.
pub fn trial_outcomes(
    cfg: &GateConfig,
    p: &VtcParams,
    nominal: &CntDevice,
    spec: &VariationSpec,
) -> Result<Vec<TrialOutcome>> {
    Ok(run_trials(cfg, p, nominal, spec)?.into_iter().map(|s| s.outcome).collect())
}

fn run_trials(cfg: &GateConfig, p: &VtcParams, nominal: &CntDevice, spec: &VariationSpec) -> Result<Vec<TrialSample>> {
    spec.validate()?;
    p.validate(cfg.vdd())?;
    semiconducting(nominal)?;
    if cfg.n() > MAX_YIELD_FAN_IN {
        return Err(Error::OutOfRange(format!("fan-in {} exceeds {MAX_YIELD_FAN_IN}", cfg.n())));
    }
    (0..spec.trials).into_par_iter().map(|trial| run_trial(cfg, p, nominal, spec, trial)).collect()
}

/// Monte Carlo functional yield.
pub fn gate_yield(cfg: &GateConfig, p: &VtcParams, nominal: &CntDevice, spec: &VariationSpec) -> Result<YieldReport> {
    let samples = run_trials(cfg, p, nominal, spec)?;

    // Sequential reductions over the ordered samples keep the report
    // bit-identical however the trials were scheduled.
    let passes = samples.iter().filter(|s| s.outcome.pass).count() as u32;
    let count = 2.0 * samples.len() as f64;
    let vth_mean = samples.iter().map(|s| s.vth_n + s.vth_p).sum::<f64>() / count;
    let sum_sq: f64 = samples.iter().flat_map(|s| [s.vth_n, s.vth_p]).map(|v| (v - vth_mean) * (v - vth_mean)).sum();
    let vth_stddev = (sum_sq / (count - 1.0)).sqrt();
    let worst_margin = samples.iter().map(|s| s.outcome.margin).fold(f64::INFINITY, f64::min);

    Ok(YieldReport {
        trials: spec.trials,
        passes,
        yield_fraction: f64::from(passes) / f64::from(spec.trials),
        vth_mean,
        vth_stddev,
        worst_margin,
        sampling: SAMPLING_SCHEME.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analog::threshold_window;
    use crate::device::Chirality;

    const VDD: f64 = 0.9;

    fn nominal() -> CntDevice {
        CntDevice::from_chirality(Chirality::new(19, 0).unwrap())
    }

    fn gate7() -> GateConfig {
        GateConfig::new(7, VDD).unwrap()
    }

    #[test]
    fn zero_sigma_returns_nominal() {
        let spec = VariationSpec::new(0.0, 1, 7).unwrap();
        let mut rng = trial_rng(7, 0);
        for _ in 0..10 {
            assert_eq!(sample_vth(&nominal(), &spec, &mut rng).unwrap(), nominal().threshold_voltage.unwrap());
        }
    }

    #[test]
    fn forced_offset() {
        assert!((vth_at_offset(&nominal(), 0.10).unwrap() - 0.2628).abs() < 5e-5);
        assert!(vth_at_offset(&nominal(), -1.0).is_err());
    }

    #[test]
    fn metallic_nominal_rejected() {
        let metallic = CntDevice::from_chirality(Chirality::new(9, 0).unwrap());
        let spec = VariationSpec::new(0.05, 10, 1).unwrap();
        assert!(matches!(sample_vth(&metallic, &spec, &mut trial_rng(1, 0)), Err(Error::MetallicTube(_))));
        assert!(gate_yield(&gate7(), &VtcParams::centered(VDD), &metallic, &spec).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(VariationSpec::new(-0.1, 10, 0).is_err());
        assert!(VariationSpec::new(0.5, 10, 0).is_err());
        assert!(VariationSpec::new(0.1, 0, 0).is_err());
        assert!(VariationSpec::new(0.1, 1, 0).unwrap().with_sensitivity(f64::NAN).is_err());
    }

    #[test]
    fn seeded_sequences_repeat() {
        let spec = VariationSpec::new(0.05, 1, 42).unwrap();
        let draw = |seed| {
            let mut rng = trial_rng(seed, 3);
            (0..5).map(|_| sample_vth(&nominal(), &spec, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    #[test]
    fn no_variation_full_yield() {
        let spec = VariationSpec::new(0.0, 200, 9).unwrap();
        let r = gate_yield(&gate7(), &VtcParams::centered(VDD), &nominal(), &spec).unwrap();
        assert_eq!((r.passes, r.yield_fraction), (200, 1.0));
        assert!(r.vth_stddev < 1e-12);
    }

    #[test]
    fn forced_shift_beyond_half_step_fails() {
        let cfg = gate7();
        let p = VtcParams::new(VDD / 2.0, 0.0, VDD).unwrap();
        let half_step = VDD / 14.0;
        assert!(trial_outcome(&cfg, &p, p.v_sw + 0.9 * half_step).unwrap().pass);
        assert!(!trial_outcome(&cfg, &p, p.v_sw + 1.1 * half_step).unwrap().pass);
        assert!(!trial_outcome(&cfg, &p, p.v_sw - 1.1 * half_step).unwrap().pass);
        assert!(!trial_outcome(&cfg, &p, 1.5 * VDD).unwrap().pass);
    }

    #[test]
    fn large_sigma_loses_yield() {
        let spec = VariationSpec::new(0.3, 500, 5).unwrap().with_sensitivity(4.0).unwrap();
        let r = gate_yield(&gate7(), &VtcParams::centered(VDD), &nominal(), &spec).unwrap();
        assert!(r.yield_fraction < 1.0);
        assert!(r.worst_margin < 0.0);
    }

    #[test]
    fn failures_match_window() {
        let cfg = gate7();
        let p = VtcParams::centered(VDD);
        let (lo, hi) = threshold_window(&cfg).unwrap();
        // a level at distance d from v_sw decodes cleanly iff d >= 0.4·w
        let band = (0.5 - crate::analog::LOW_BAND) * p.width_w;
        let spec = VariationSpec::new(0.2, 2000, 11).unwrap().with_sensitivity(3.0).unwrap();
        let outcomes = trial_outcomes(&cfg, &p, &nominal(), &spec).unwrap();
        assert!(outcomes.iter().any(|o| o.pass) && outcomes.iter().any(|o| !o.pass));
        for o in outcomes {
            let inside = o.v_sw >= lo + band && o.v_sw <= hi - band;
            assert_eq!(o.pass, inside, "v_sw' = {}", o.v_sw);
        }
    }

    #[test]
    fn fan_in_guard() {
        let cfg = GateConfig::new(17, VDD).unwrap();
        let spec = VariationSpec::new(0.0, 1, 0).unwrap();
        assert!(gate_yield(&cfg, &VtcParams::centered(VDD), &nominal(), &spec).is_err());
    }
}
