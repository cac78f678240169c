// SPDX-License-Identifier: Apache-2.0

//! Behavioral model of the divider-plus-inverter minority gate.
//!
//! The input devices form an ideal capacitive divider whose midpoint sits at
//! `vdd · Σ wᵢxᵢ / Σ wᵢ`. A threshold inverter with a piecewise-linear VTC
//! turns that level back into a rail value. Inputs tied to a constant rail
//! (as in the NAND/NOR bindings) are folded into a single weighted device
//! that does not appear in the input vector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::logic::{self, GateBinding, InputVector};
use crate::{Error, Result};

/// Largest number of vector-driven inputs the exhaustive checks will enumerate.
pub const MAX_ENUMERATED_INPUTS: usize = 24;

/// Output at or above this fraction of vdd decodes as logic one.
pub const HIGH_BAND: f64 = 0.9;
/// Output at or below this fraction of vdd decodes as logic zero.
pub const LOW_BAND: f64 = 0.1;

const PARALLEL_THRESHOLD: usize = 12;

/// A divider input held at a fixed rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiedInput {
    pub level: bool,
    pub weight: u32,
}

/// One minority-gate instance.
///
/// `weights` covers the inputs driven by the input vector. The optional tied
/// device adds to the divider but is not part of the vector. The total
/// weight is the base minority width `n`, which must be odd.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateConfig {
    n: u32,
    vdd: f64,
    weights: Vec<u32>,
    tied: Option<TiedInput>,
}

impl GateConfig {
    /// Plain n-input gate with unit weights.
    pub fn new(n: u32, vdd: f64) -> Result<Self> {
        Self::with_weights(vec![1; n as usize], None, vdd)
    }

    pub fn with_weights(weights: Vec<u32>, tied: Option<TiedInput>, vdd: f64) -> Result<Self> {
        if !(vdd > 0.0 && vdd.is_finite()) {
            return Err(Error::InvalidParameter(format!("vdd must be positive, got {vdd}")));
        }
        if weights.is_empty() {
            return Err(Error::ZeroInputs);
        }
        if weights.contains(&0) || tied.is_some_and(|t| t.weight == 0) {
            return Err(Error::InvalidParameter("input weights must be positive".into()));
        }
        if weights.len() > logic::MAX_WIDTH as usize {
            return Err(Error::OutOfRange(format!("{} driven inputs", weights.len())));
        }
        let n = weights
            .iter()
            .chain(tied.as_ref().map(|t| &t.weight))
            .try_fold(0u32, |acc, &w| acc.checked_add(w))
            .ok_or(Error::Overflow("total divider weight"))?;
        logic::check_odd_fan_in(n)?;
        Ok(Self { n, vdd, weights, tied })
    }

    /// Gate for a NAND/NOR binding: unit free inputs plus the merged tied device.
    pub fn from_binding(b: &GateBinding, vdd: f64) -> Result<Self> {
        let tied = (b.tied_weight > 0).then_some(TiedInput { level: b.tied_constant, weight: b.tied_weight });
        let cfg = Self::with_weights(vec![1; b.free_inputs as usize], tied, vdd)?;
        if cfg.n != b.base_width {
            return Err(Error::InvalidParameter(format!(
                "binding weights sum to {}, base width is {}",
                cfg.n, b.base_width
            )));
        }
        Ok(cfg)
    }

    /// Base minority width (total divider weight).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vdd(&self) -> f64 {
        self.vdd
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn tied(&self) -> Option<TiedInput> {
        self.tied
    }

    /// Number of inputs taken from the input vector.
    pub fn driven_inputs(&self) -> usize {
        self.weights.len()
    }

    fn check_width(&self, v: &InputVector) -> Result<()> {
        if v.width() as usize != self.weights.len() {
            return Err(Error::WidthMismatch { expected: self.weights.len(), got: v.width() as usize });
        }
        Ok(())
    }

    /// Weighted count of high divider inputs, tied device included.
    fn high_weight(&self, v: &InputVector) -> u32 {
        let driven: u32 = self.weights.iter().zip(v.iter()).filter(|(_, x)| *x).map(|(w, _)| w).sum();
        driven + self.tied.filter(|t| t.level).map_or(0, |t| t.weight)
    }

    /// Boolean minority of the divider contents.
    pub fn reference(&self, v: &InputVector) -> Result<bool> {
        self.check_width(v)?;
        Ok(logic::minority_of_weight(self.high_weight(v), self.n))
    }

    fn level(&self, high_weight: u32) -> f64 {
        self.vdd * (f64::from(high_weight) / f64::from(self.n))
    }

    fn vectors(&self) -> Result<impl Iterator<Item = InputVector>> {
        let inputs = self.driven_inputs();
        if inputs > MAX_ENUMERATED_INPUTS {
            return Err(Error::EnumerationLimit { inputs, limit: MAX_ENUMERATED_INPUTS });
        }
        InputVector::all(inputs as u32)
    }
}

/// Inverter VTC: switching threshold and linear transition width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VtcParams {
    pub v_sw: f64,
    pub width_w: f64,
}

impl VtcParams {
    pub fn new(v_sw: f64, width_w: f64, vdd: f64) -> Result<Self> {
        let p = Self { v_sw, width_w };
        p.validate(vdd)?;
        Ok(p)
    }

    /// Mid-supply threshold with a transition 5% of vdd wide.
    pub fn centered(vdd: f64) -> Self {
        Self { v_sw: vdd / 2.0, width_w: 0.05 * vdd }
    }

    pub fn validate(&self, vdd: f64) -> Result<()> {
        if !(self.v_sw > 0.0 && self.v_sw < vdd) {
            return Err(Error::OutOfRange(format!("v_sw {} outside (0, {vdd})", self.v_sw)));
        }
        if !(self.width_w >= 0.0 && self.width_w.is_finite()) {
            return Err(Error::InvalidParameter(format!("width_w must be >= 0, got {}", self.width_w)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Zero,
    One,
    Indeterminate,
}

impl Logic {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Logic::One
        } else {
            Logic::Zero
        }
    }

    fn decode(vout: f64, vdd: f64) -> Self {
        if vout >= HIGH_BAND * vdd {
            Logic::One
        } else if vout <= LOW_BAND * vdd {
            Logic::Zero
        } else {
            Logic::Indeterminate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub vm: f64,
    pub vout: f64,
    pub logic: Logic,
    /// `|vm − v_sw| − width_w/2`; negative inside the transition band.
    pub margin: f64,
}

/// Divider midpoint voltage for the given vector.
pub fn midpoint_voltage(v: &InputVector, cfg: &GateConfig) -> Result<f64> {
    cfg.check_width(v)?;
    Ok(cfg.level(cfg.high_weight(v)))
}

/// Open interval of switching thresholds that separates the `⌊n/2⌋` and
/// `⌊n/2⌋ + 1` divider levels.
pub fn threshold_window(cfg: &GateConfig) -> Result<(f64, f64)> {
    logic::check_odd_fan_in(cfg.n)?;
    let half = cfg.n / 2;
    Ok((cfg.level(half), cfg.level(half + 1)))
}

/// Piecewise-linear inverter transfer curve.
pub fn vtc(vin: f64, p: &VtcParams, vdd: f64) -> Result<f64> {
    if !(0.0..=vdd).contains(&vin) {
        return Err(Error::OutOfRange(format!("vin {vin} outside [0, {vdd}]")));
    }
    Ok(vtc_unchecked(vin, p, vdd))
}

fn vtc_unchecked(vin: f64, p: &VtcParams, vdd: f64) -> f64 {
    if p.width_w == 0.0 {
        if vin < p.v_sw {
            vdd
        } else if vin > p.v_sw {
            0.0
        } else {
            vdd / 2.0
        }
    } else {
        vdd * ((p.v_sw + p.width_w / 2.0 - vin) / p.width_w).clamp(0.0, 1.0)
    }
}

fn evaluate_level(vm: f64, p: &VtcParams, vdd: f64) -> EvalResult {
    let vout = vtc_unchecked(vm, p, vdd);
    EvalResult { vm, vout, logic: Logic::decode(vout, vdd), margin: (vm - p.v_sw).abs() - p.width_w / 2.0 }
}

pub fn evaluate(v: &InputVector, cfg: &GateConfig, p: &VtcParams) -> Result<EvalResult> {
    p.validate(cfg.vdd)?;
    let vm = midpoint_voltage(v, cfg)?;
    Ok(evaluate_level(vm, p, cfg.vdd))
}

/// Runs `f` over every input vector and reduces with `combine`, in parallel
/// for wide gates. `combine` must be associative and commutative.
fn reduce_vectors<T, F, C>(cfg: &GateConfig, identity: T, f: F, combine: C) -> Result<T>
where
    T: Copy + Send + Sync,
    F: Fn(&InputVector) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    let vectors = cfg.vectors()?;
    if cfg.driven_inputs() < PARALLEL_THRESHOLD {
        return Ok(vectors.map(|v| f(&v)).fold(identity, &combine));
    }
    let width = cfg.driven_inputs() as u32;
    Ok((0..1u64 << width)
        .into_par_iter()
        .map(|bits| f(&InputVector::new(bits, width).expect("bits fit width")))
        .reduce(|| identity, &combine))
}

/// Exhaustive check that the decoded analog output equals the boolean
/// minority of the divider contents on every input vector.
pub fn functional_check(cfg: &GateConfig, p: &VtcParams) -> Result<bool> {
    p.validate(cfg.vdd)?;
    reduce_vectors(
        cfg,
        true,
        |v| {
            let expected = logic::minority_of_weight(cfg.high_weight(v), cfg.n);
            evaluate_level(cfg.level(cfg.high_weight(v)), p, cfg.vdd).logic == Logic::from_bool(expected)
        },
        |a, b| a && b,
    )
}

/// Worst-case `|vm − v_sw| − width_w/2` over all input vectors.
pub fn static_margin(cfg: &GateConfig, p: &VtcParams) -> Result<f64> {
    reduce_vectors(cfg, f64::INFINITY, |v| (cfg.level(cfg.high_weight(v)) - p.v_sw).abs() - p.width_w / 2.0, f64::min)
}

/// Like [`static_margin`], but signed by correctness: a level on the wrong
/// side of `v_sw` contributes a negative distance.
pub fn correctness_margin(cfg: &GateConfig, p: &VtcParams) -> Result<f64> {
    reduce_vectors(
        cfg,
        f64::INFINITY,
        |v| {
            let vm = cfg.level(cfg.high_weight(v));
            let distance = if logic::minority_of_weight(cfg.high_weight(v), cfg.n) { p.v_sw - vm } else { vm - p.v_sw };
            distance - p.width_w / 2.0
        },
        f64::min,
    )
}
