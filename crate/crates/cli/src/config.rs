// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration. Every section is optional; commands pull the
//! sections they need and fall back to the defaults below.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use cntmin_core::analog::{GateConfig, TiedInput, VtcParams};
use cntmin_core::device::{Chirality, CntDevice};
use cntmin_core::transient::{OperatingPoint, RcModel, SweepParam};
use cntmin_core::variation::VariationSpec;

use crate::CliError;

/// Environment variable naming the config file used when none is given.
pub const CONFIG_ENV: &str = "CNTMIN_CONFIG";

pub const DEFAULT_VDD: f64 = 0.9;
pub const DEFAULT_N: u32 = 7;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gate: Option<GateSection>,
    pub vtc: Option<VtcSection>,
    pub vector: Option<String>,
    pub device: Option<DeviceSection>,
    pub model: Option<ModelSection>,
    pub operating_point: Option<OperatingPointSection>,
    pub sweep: Option<SweepSection>,
    pub points: Option<Vec<(f64, f64)>>,
    pub variation: Option<VariationSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSection {
    pub n: Option<u32>,
    pub vdd: Option<f64>,
    pub weights: Option<Vec<u32>>,
    pub tied: Option<TiedSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TiedSection {
    pub level: u8,
    pub weight: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VtcSection {
    pub v_sw: Option<f64>,
    pub width_w: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    pub n1: u32,
    pub n2: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub r_eff: f64,
    pub c_par: f64,
    #[serde(default = "one")]
    pub alpha: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingPointSection {
    pub vdd: Option<f64>,
    pub c_load: Option<f64>,
    pub frequency: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: SweepParam,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SigmaLevels {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationSection {
    pub sigma_rel: SigmaLevels,
    pub trials: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub sensitivity: f64,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Loads `path`, else the file named by `CNTMIN_CONFIG`, else defaults.
    pub fn resolve(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(&PathBuf::from(p)),
                _ => Ok(Self::default()),
            },
        }
    }

    /// Like [`RunConfig::resolve`] but a config file is mandatory.
    pub fn require(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(&PathBuf::from(p)),
                _ => Err(CliError::Usage(format!("a config file is required (argument or ${CONFIG_ENV})"))),
            },
        }
    }

    pub fn gate(&self) -> Result<GateConfig, CliError> {
        let Some(g) = &self.gate else {
            return GateConfig::new(DEFAULT_N, DEFAULT_VDD).map_err(invalid);
        };
        let vdd = g.vdd.unwrap_or(DEFAULT_VDD);
        let tied = match &g.tied {
            Some(t) if t.level > 1 => return Err(CliError::Usage("tied.level must be 0 or 1".into())),
            Some(t) => Some(TiedInput { level: t.level == 1, weight: t.weight }),
            None => None,
        };
        let tied_weight = tied.map_or(0, |t| t.weight);
        let weights = match (&g.weights, g.n) {
            (Some(w), _) => w.clone(),
            (None, n) => {
                let n = n.unwrap_or(DEFAULT_N);
                let free = n.checked_sub(tied_weight).filter(|f| *f > 0).ok_or_else(|| {
                    CliError::Usage(format!("tied weight {tied_weight} leaves no driven inputs out of {n}"))
                })?;
                vec![1; free as usize]
            }
        };
        let cfg = GateConfig::with_weights(weights, tied, vdd).map_err(invalid)?;
        if let Some(n) = g.n {
            if n != cfg.n() {
                return Err(CliError::Usage(format!("gate.n = {n} but weights sum to {}", cfg.n())));
            }
        }
        Ok(cfg)
    }

    pub fn vtc(&self, vdd: f64) -> Result<VtcParams, CliError> {
        let centered = VtcParams::centered(vdd);
        let p = match &self.vtc {
            None => centered,
            Some(s) => {
                VtcParams { v_sw: s.v_sw.unwrap_or(centered.v_sw), width_w: s.width_w.unwrap_or(centered.width_w) }
            }
        };
        p.validate(vdd).map_err(invalid)?;
        Ok(p)
    }

    pub fn device(&self) -> Result<CntDevice, CliError> {
        let (n1, n2) = self.device.as_ref().map_or((19, 0), |d| (d.n1, d.n2));
        Ok(CntDevice::from_chirality(Chirality::new(n1, n2).map_err(invalid)?))
    }

    pub fn model(&self) -> Result<RcModel, CliError> {
        let m = self.model.as_ref().ok_or_else(|| CliError::Usage("config lacks a \"model\" section".into()))?;
        RcModel::new(m.r_eff, m.c_par, m.alpha).map_err(invalid)
    }

    pub fn operating_point(&self) -> Result<OperatingPoint, CliError> {
        let s = self.operating_point.as_ref();
        OperatingPoint::new(
            s.and_then(|o| o.vdd).unwrap_or(DEFAULT_VDD),
            s.and_then(|o| o.c_load).unwrap_or(2e-15),
            s.and_then(|o| o.frequency).unwrap_or(250e6),
        )
        .map_err(invalid)
    }

    pub fn sweep_grid(&self) -> Result<(SweepParam, Vec<f64>), CliError> {
        let s = self.sweep.as_ref().ok_or_else(|| CliError::Usage("config lacks a \"sweep\" section".into()))?;
        let grid = match (&s.values, s.start, s.stop, s.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(start), Some(stop), Some(steps)) if steps >= 2 => {
                (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect()
            }
            (None, Some(start), Some(stop), Some(1)) if start == stop => vec![start],
            _ => {
                return Err(CliError::Usage(
                    "sweep needs either \"values\" or \"start\"/\"stop\"/\"steps\" (steps >= 2)".into(),
                ))
            }
        };
        Ok((s.param, grid))
    }

    pub fn variation(&self) -> Result<Vec<VariationSpec>, CliError> {
        let v =
            self.variation.as_ref().ok_or_else(|| CliError::Usage("config lacks a \"variation\" section".into()))?;
        let levels = match &v.sigma_rel {
            SigmaLevels::One(s) => vec![*s],
            SigmaLevels::Many(s) if !s.is_empty() => s.clone(),
            SigmaLevels::Many(_) => return Err(CliError::Usage("sigma_rel list is empty".into())),
        };
        levels
            .into_iter()
            .map(|s| {
                VariationSpec::new(s, v.trials, v.seed)
                    .and_then(|spec| spec.with_sensitivity(v.sensitivity))
                    .map_err(invalid)
            })
            .collect()
    }
}
