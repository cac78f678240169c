// SPDX-License-Identifier: Apache-2.0

//! Single-walled CNT geometry and threshold voltage from the chiral indices.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Carbon-carbon bond length (nm).
pub const A0_CC_NM: f64 = 0.142;
/// π-π bond energy in the tight-binding model (eV).
pub const V_PI_EV: f64 = 3.033;
/// Numeric prefactor of the threshold approximation, Vth = 0.43 / D (V·nm).
pub const VTH_COEFF_V_NM: f64 = 0.43;

/// Fixed physical constants used by the device model.
///
/// `v_pi` is carried for completeness; the threshold uses the numeric
/// `vth_coeff` form rather than `√3·a0·Vπ/3`, which does not agree with it
/// for `a0 = 0.142 nm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub a0_cc: f64,
    pub v_pi: f64,
    pub vth_coeff: f64,
}

impl PhysicalConstants {
    pub const STANDARD: Self = Self { a0_cc: A0_CC_NM, v_pi: V_PI_EV, vth_coeff: VTH_COEFF_V_NM };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Chiral indices `(n1, n2)` of a single-walled tube, stored as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u32, u32)", into = "(u32, u32)")]
pub struct Chirality {
    n1: u32,
    n2: u32,
}

impl Chirality {
    pub fn new(n1: u32, n2: u32) -> Result<Self> {
        if n1 == 0 && n2 == 0 {
            return Err(Error::InvalidChirality);
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// Zigzag tubes have one index equal to zero.
    pub fn is_zigzag(&self) -> bool {
        self.n1 == 0 || self.n2 == 0
    }

    pub fn is_armchair(&self) -> bool {
        self.n1 == self.n2
    }

    /// `n1² + n2² + n1·n2`, the squared lattice-vector norm in units of `a²`.
    fn norm_sq(&self) -> f64 {
        let (a, b) = (f64::from(self.n1), f64::from(self.n2));
        a * a + b * b + a * b
    }
}

impl TryFrom<(u32, u32)> for Chirality {
    type Error = Error;

    fn try_from((n1, n2): (u32, u32)) -> Result<Self> {
        Self::new(n1, n2)
    }
}

impl From<Chirality> for (u32, u32) {
    fn from(c: Chirality) -> Self {
        (c.n1, c.n2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConductionKind {
    Metallic,
    Semiconducting,
}

/// Metallic iff `n1 − n2` is a multiple of three.
pub fn classify(c: Chirality) -> ConductionKind {
    let diff = i64::from(c.n1) - i64::from(c.n2);
    if diff.rem_euclid(3) == 0 {
        ConductionKind::Metallic
    } else {
        ConductionKind::Semiconducting
    }
}

/// Circumference of the tube, `√3·a0·√(n1² + n2² + n1·n2)` in nm.
pub fn chiral_length(c: Chirality) -> f64 {
    3f64.sqrt() * A0_CC_NM * c.norm_sq().sqrt()
}

/// Tube diameter in nm.
pub fn diameter(c: Chirality) -> f64 {
    chiral_length(c) / PI
}

/// Threshold voltage of a CNTFET built on this tube, `0.43 / D(nm)` volts.
pub fn threshold_voltage(c: Chirality) -> Result<f64> {
    match classify(c) {
        ConductionKind::Metallic => Err(Error::MetallicTube((c.n1, c.n2))),
        ConductionKind::Semiconducting => Ok(threshold_for_diameter(diameter(c))),
    }
}

/// `0.43 / d`, for a diameter in nm.
pub fn threshold_for_diameter(diameter_nm: f64) -> f64 {
    VTH_COEFF_V_NM / diameter_nm
}

/// Derived device record for one chirality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CntDevice {
    pub chirality: Chirality,
    pub diameter: f64,
    pub chiral_length: f64,
    pub kind: ConductionKind,
    /// Present only for semiconducting tubes.
    pub threshold_voltage: Option<f64>,
}

impl CntDevice {
    pub fn from_chirality(chirality: Chirality) -> Self {
        let diameter = diameter(chirality);
        let kind = classify(chirality);
        let threshold_voltage = match kind {
            ConductionKind::Semiconducting => Some(threshold_for_diameter(diameter)),
            ConductionKind::Metallic => None,
        };
        Self { chirality, diameter, chiral_length: chiral_length(chirality), kind, threshold_voltage }
    }

    pub fn is_semiconducting(&self) -> bool {
        self.kind == ConductionKind::Semiconducting
    }
}

/// 32 nm CNTFET compact-model card. Inert metadata: nothing in this crate
/// computes device physics from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelCard {
    /// Physical channel length (nm).
    pub channel_length: f64,
    /// Mean free path in the intrinsic channel (nm).
    pub mean_free_path: f64,
    /// Doped source-side extension length (nm).
    pub source_ext: f64,
    /// Doped drain-side extension length (nm).
    pub drain_ext: f64,
    /// Dielectric constant of the high-k top gate.
    pub k_gate: f64,
    /// High-k dielectric thickness (nm).
    pub t_ox: f64,
    /// Channel-to-substrate coupling capacitance (F/m).
    pub c_sub: f64,
    /// Fermi level of the doped S/D tube (eV).
    pub e_fermi: f64,
}

impl Default for ModelCard {
    fn default() -> Self {
        Self {
            channel_length: 32.0,
            mean_free_path: 100.0,
            source_ext: 32.0,
            drain_ext: 32.0,
            k_gate: 16.0,
            t_ox: 4.0,
            c_sub: 40e-12,
            e_fermi: 6.0,
        }
    }
}
