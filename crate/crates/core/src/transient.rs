// SPDX-License-Identifier: Apache-2.0

//! First-order delay and switching-energy estimates.
//!
//! The gate output is abstracted as a single RC stage: delay is
//! `ln 2 · r_eff · (c_par + c_load)` and energy per transition is
//! `alpha · (c_par + c_load) · vdd²`. `r_eff` does not depend on vdd.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcModel {
    /// Effective driver resistance (Ω).
    pub r_eff: f64,
    /// Parasitic output capacitance (F).
    pub c_par: f64,
    /// Activity factor in (0, 1].
    pub alpha: f64,
}

impl RcModel {
    pub fn new(r_eff: f64, c_par: f64, alpha: f64) -> Result<Self> {
        let m = Self { r_eff, c_par, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_eff > 0.0 && self.r_eff.is_finite()) {
            return Err(Error::InvalidParameter(format!("r_eff must be positive, got {}", self.r_eff)));
        }
        // c_par = 0 is the ideal-driver limit and is allowed.
        if !(self.c_par >= 0.0 && self.c_par.is_finite()) {
            return Err(Error::InvalidParameter(format!("c_par must be >= 0, got {}", self.c_par)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub vdd: f64,
    /// Output load (F).
    pub c_load: f64,
    /// Switching frequency (Hz).
    pub frequency: f64,
}

impl OperatingPoint {
    pub fn new(vdd: f64, c_load: f64, frequency: f64) -> Result<Self> {
        let op = Self { vdd, c_load, frequency };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vdd >= 0.0 && self.vdd.is_finite()) {
            return Err(Error::InvalidParameter(format!("vdd must be >= 0, got {}", self.vdd)));
        }
        if !(self.c_load >= 0.0 && self.c_load.is_finite()) {
            return Err(Error::InvalidParameter(format!("c_load must be >= 0, got {}", self.c_load)));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::InvalidParameter(format!("frequency must be positive, got {}", self.frequency)));
        }
        Ok(())
    }
}

/// Delay, average power and their product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub delay: f64,
    pub avg_power: f64,
    pub energy: f64,
}

impl Metrics {
    pub fn from_power_delay(avg_power: f64, delay: f64) -> Result<Self> {
        Ok(Self { delay, avg_power, energy: energy_from_power_delay(avg_power, delay)? })
    }
}

/// Energy as the product of average power and propagation delay.
pub fn energy_from_power_delay(power: f64, delay: f64) -> Result<f64> {
    if power.is_nan() || delay.is_nan() || power < 0.0 || delay < 0.0 {
        return Err(Error::OutOfRange(format!("power {power} and delay {delay} must be >= 0")));
    }
    Ok(power * delay)
}

/// 50% propagation delay of the RC stage.
pub fn estimate_delay(m: &RcModel, op: &OperatingPoint) -> f64 {
    LN_2 * m.r_eff * (m.c_par + op.c_load)
}

pub fn estimate_energy(m: &RcModel, op: &OperatingPoint) -> f64 {
    m.alpha * (m.c_par + op.c_load) * op.vdd * op.vdd
}

/// Least-squares fit of `delay = a + b·c_load` inverted to `(r_eff, c_par)`.
///
/// Returns the pair `(r_eff, c_par)`; `alpha` is not observable from delays.
pub fn calibrate_delay(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", points.len())));
    }
    if points.iter().any(|(c, d)| !c.is_finite() || !d.is_finite()) {
        return Err(Error::InvalidParameter("non-finite calibration point".into()));
    }
    let n = points.len() as f64;
    let mean_c = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_d = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(c, _)| (c - mean_c) * (c - mean_c)).sum();
    let sxy: f64 = points.iter().map(|(c, d)| (c - mean_c) * (d - mean_d)).sum();
    let spread = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if spread <= f64::EPSILON * mean_c.abs() || sxx == 0.0 {
        return Err(Error::DegenerateFit("all points share the same c_load".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_d - slope * mean_c;
    if slope <= 0.0 {
        return Err(Error::ModelInapplicable(format!("fitted slope {slope:e} s/F is not positive")));
    }
    let r_eff = slope / LN_2;
    let mut c_par = intercept / slope;
    // An exact zero intercept can come back as a tiny negative residue.
    if c_par < 0.0 && c_par.abs() <= 1e-9 * mean_c.abs() {
        c_par = 0.0;
    }
    if c_par < 0.0 {
        return Err(Error::ModelInapplicable(format!("fitted c_par {c_par:e} F is negative")));
    }
    Ok((r_eff, c_par))
}

/// Relative improvement of `proposed` over `baseline`, in percent.
pub fn improvement_pct(baseline: f64, proposed: f64) -> Result<f64> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(Error::OutOfRange(format!("baseline must be positive, got {baseline}")));
    }
    Ok(100.0 * (baseline - proposed) / baseline)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    CLoad,
    Vdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub delay: f64,
    pub energy: f64,
}

impl SweepRow {
    /// Average power implied by the row, `energy / delay`.
    pub fn power(&self) -> f64 {
        self.energy / self.delay
    }
}

/// Evaluates the model at every grid value of `param`, other quantities
/// taken from `base`. The grid must be strictly monotone; rows come back in
/// ascending parameter order.
pub fn sweep(m: &RcModel, base: &OperatingPoint, param: SweepParam, grid: &[f64]) -> Result<Vec<SweepRow>> {
    m.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    let increasing = grid.windows(2).all(|w| w[0] < w[1]);
    let decreasing = grid.windows(2).all(|w| w[0] > w[1]);
    if !increasing && !decreasing {
        return Err(Error::InvalidParameter("sweep grid must be strictly monotone".into()));
    }
    let mut rows = grid
        .iter()
        .map(|&value| {
            let op = match param {
                SweepParam::CLoad => OperatingPoint { c_load: value, ..*base },
                SweepParam::Vdd => OperatingPoint { vdd: value, ..*base },
            };
            op.validate()?;
            Ok(SweepRow { param: value, delay: estimate_delay(m, &op), energy: estimate_energy(m, &op) })
        })
        .collect::<Result<Vec<_>>>()?;
    if decreasing && rows.len() > 1 {
        rows.reverse();
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn op(c_load: f64) -> OperatingPoint {
        OperatingPoint::new(0.9, c_load, 250e6).unwrap()
    }

    #[test]
    fn energy_product() {
        assert!((energy_from_power_delay(2.25e-6, 23.0e-12).unwrap() - 5.18e-17).abs() / 5.18e-17 < 1e-3);
        assert!((energy_from_power_delay(0.792e-6, 58.3e-12).unwrap() - 4.61e-17).abs() / 4.61e-17 < 2e-3);
        assert_eq!(energy_from_power_delay(0.0, 1e-12).unwrap(), 0.0);
        assert!(energy_from_power_delay(-1.0, 1e-12).is_err());
        assert!(energy_from_power_delay(1.0, -1e-12).is_err());
        let m = Metrics::from_power_delay(2.0, 3.0).unwrap();
        assert_eq!(m.energy, 6.0);
    }

    #[test]
    fn delay_estimates() {
        let tiny = RcModel::new(1e3, 0.0, 1.0).unwrap();
        assert_eq!(estimate_delay(&tiny, &op(0.0)), 0.0);
        assert_relative_eq!(estimate_delay(&tiny, &op(2e-15)), 1.3863e-12, max_relative = 1e-4);
        assert_relative_eq!(
            estimate_delay(&tiny, &op(4e-15)),
            2.0 * estimate_delay(&tiny, &op(2e-15)),
            max_relative = 1e-15
        );
    }

    #[test]
    fn energy_estimates() {
        let m = RcModel::new(1e3, 0.0, 1.0).unwrap();
        assert_eq!(estimate_energy(&m, &OperatingPoint::new(0.0, 2e-15, 1e9).unwrap()), 0.0);
        assert_relative_eq!(estimate_energy(&m, &op(2e-15)), 1.62e-15, max_relative = 1e-12);
    }

    #[test]
    fn model_validation() {
        assert!(RcModel::new(0.0, 0.0, 1.0).is_err());
        assert!(RcModel::new(1.0, -1e-15, 1.0).is_err());
        assert!(RcModel::new(1.0, 0.0, 0.0).is_err());
        assert!(RcModel::new(1.0, 0.0, 1.5).is_err());
        assert!(OperatingPoint::new(0.9, 0.0, 0.0).is_err());
        assert!(OperatingPoint::new(0.9, -1.0, 1e9).is_err());
    }

    #[test]
    fn calibration() {
        let (r, c) = calibrate_delay(&[(2e-15, 1.3863e-12), (4e-15, 2.7726e-12)]).unwrap();
        assert_relative_eq!(r, 1.3863e-12 / 2e-15 / LN_2, max_relative = 1e-12);
        assert!((r - 1e3).abs() / 1e3 < 1e-4);
        assert!(c.abs() < 1e-24);
        assert!(matches!(calibrate_delay(&[(2e-15, 5e-12), (2e-15, 6e-12)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(calibrate_delay(&[(2e-15, 5e-12)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(calibrate_delay(&[(2e-15, 6e-12), (4e-15, 5e-12)]), Err(Error::ModelInapplicable(_))));
        // intercept below zero means negative parasitics
        assert!(matches!(calibrate_delay(&[(2e-15, 1e-12), (4e-15, 3e-12)]), Err(Error::ModelInapplicable(_))));
    }

    #[test]
    fn improvements() {
        assert!((improvement_pct(49.7, 21.1).unwrap() - 57.55).abs() < 5e-3);
        assert!((improvement_pct(12.1e-17, 9.29e-17).unwrap() - 23.22).abs() < 5e-3);
        assert_eq!(improvement_pct(3.0, 3.0).unwrap(), 0.0);
        assert!(improvement_pct(0.0, 1.0).is_err());
    }

    #[test]
    fn sweeps() {
        let m = RcModel::new(2e3, 0.5e-15, 0.5).unwrap();
        let rows = sweep(&m, &op(2e-15), SweepParam::CLoad, &[2e-15, 10e-15, 20e-15]).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|w| w[0].delay < w[1].delay));
        let rows = sweep(&m, &op(2e-15), SweepParam::Vdd, &[1.0, 0.9, 0.8]).unwrap();
        assert_eq!(rows.iter().map(|r| r.param).collect::<Vec<_>>(), [0.8, 0.9, 1.0]);
        assert!(rows.windows(2).all(|w| w[0].energy < w[1].energy));
        for r in &rows {
            assert_relative_eq!(energy_from_power_delay(r.power(), r.delay).unwrap(), r.energy, max_relative = 1e-14);
        }
        assert!(sweep(&m, &op(2e-15), SweepParam::CLoad, &[]).is_err());
        assert!(sweep(&m, &op(2e-15), SweepParam::CLoad, &[1e-15, 3e-15, 2e-15]).is_err());
        assert!(sweep(&m, &op(2e-15), SweepParam::CLoad, &[-1e-15, 3e-15]).is_err());
    }

    proptest! {
        #[test]
        fn calibration_round_trip(
            r_eff in 1e2f64..1e6,
            c_par in 1e-17f64..1e-13,
            loads in proptest::collection::btree_set(1u32..100, 2..8),
        ) {
            let m = RcModel::new(r_eff, c_par, 1.0).unwrap();
            let points: Vec<(f64, f64)> = loads
                .iter()
                .map(|&l| {
                    let c = f64::from(l) * 1e-15;
                    (c, estimate_delay(&m, &op(c)))
                })
                .collect();
            let (r, c) = calibrate_delay(&points).unwrap();
            prop_assert!(((r - r_eff) / r_eff).abs() < 1e-9);
            prop_assert!(((c - c_par) / c_par).abs() < 1e-9);
        }

        #[test]
        fn energy_monotone(v1 in 0.1f64..2.0, dv in 1e-3f64..1.0, c in 0.0f64..1e-13, dc in 1e-16f64..1e-13) {
            let m = RcModel::new(1e3, 1e-16, 0.3).unwrap();
            let base = OperatingPoint::new(v1, c, 1e9).unwrap();
            let higher_vdd = OperatingPoint { vdd: v1 + dv, ..base };
            let higher_load = OperatingPoint { c_load: c + dc, ..base };
            prop_assert!(estimate_energy(&m, &higher_vdd) > estimate_energy(&m, &base));
            prop_assert!(estimate_energy(&m, &higher_load) > estimate_energy(&m, &base));
        }
    }
}
