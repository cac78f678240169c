// SPDX-License-Identifier: Apache-2.0

//! Boolean semantics of the n-input minority function.
//!
//! Minority outputs 1 when at most `⌊n/2⌋` inputs are high. For even `n`
//! the tie weight `n/2` therefore maps to 1; the gate-topology operations
//! ([`proposed_device_count`], [`cost_report`]) only accept odd fan-in.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Widest vector an [`InputVector`] can hold.
pub const MAX_WIDTH: u32 = 64;

/// An ordered vector of binary inputs `X1..XN`, packed LSB-first.
///
/// Bit `i` of `bits` is input `X(i+1)`; the text form lists `X1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InputVector {
    bits: u64,
    width: u32,
}

impl InputVector {
    pub fn new(bits: u64, width: u32) -> Result<Self> {
        if width == 0 {
            return Err(Error::EmptyVector);
        }
        if width > MAX_WIDTH {
            return Err(Error::OutOfRange(format!("vector width {width} exceeds {MAX_WIDTH}")));
        }
        if width < 64 && bits >> width != 0 {
            return Err(Error::OutOfRange(format!("bits {bits:#x} do not fit in width {width}")));
        }
        Ok(Self { bits, width })
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let width = u32::try_from(bits.len()).unwrap_or(u32::MAX);
        let packed = bits.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |acc, (i, _)| acc | (1u64 << i.min(63)));
        Self::new(packed, width)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn get(&self, i: u32) -> bool {
        i < self.width && (self.bits >> i) & 1 == 1
    }

    /// Number of high inputs.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    /// Every vector of the given width, in ascending packed order.
    pub fn all(width: u32) -> Result<impl Iterator<Item = InputVector>> {
        if width == 0 {
            return Err(Error::EmptyVector);
        }
        if width >= 64 {
            return Err(Error::EnumerationLimit { inputs: width as usize, limit: 63 });
        }
        Ok((0..1u64 << width).map(move |bits| InputVector { bits, width }))
    }
}

impl fmt::Display for InputVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for InputVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!("'{other}' is not a binary digit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}

/// Minority decision from the count of high inputs out of `n`.
pub fn minority_of_weight(weight: u32, n: u32) -> bool {
    weight <= n / 2
}

pub fn minority(v: &InputVector) -> bool {
    minority_of_weight(v.weight(), v.width())
}

/// Strict majority: more than half the inputs high.
pub fn majority(v: &InputVector) -> bool {
    v.weight() > v.width() / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub weight: u32,
    pub output: bool,
}

/// Weight-compressed truth table: one row per input weight `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorityTable {
    pub width: u32,
    pub rows: Vec<TableRow>,
}

pub fn weight_table(n: u32) -> Result<MinorityTable> {
    if n == 0 {
        return Err(Error::ZeroInputs);
    }
    let rows = (0..=n).map(|weight| TableRow { weight, output: minority_of_weight(weight, n) }).collect();
    Ok(MinorityTable { width: n, rows })
}

fn binomial(n: u32, k: u32) -> Result<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(u128::from(n - i)).ok_or(Error::Overflow("binomial coefficient"))? / u128::from(i + 1);
    }
    Ok(acc)
}

/// Number of minterms of the n-input minority function, `Σ_{i≤⌊n/2⌋} C(n, i)`.
///
/// This is the SOP term count of the unminimized two-level cover.
pub fn sop_term_count(n: u32) -> Result<u128> {
    if n == 0 {
        return Err(Error::ZeroInputs);
    }
    (0..=n / 2).try_fold(0u128, |acc, i| acc.checked_add(binomial(n, i)?).ok_or(Error::Overflow("SOP term count")))
}

/// Transistors for a complementary SOP realization: `2 · S · n`.
pub fn conventional_transistor_count(n: u32) -> Result<u128> {
    sop_term_count(n)?.checked_mul(2 * u128::from(n)).ok_or(Error::Overflow("transistor count"))
}

/// One capacitor device per input plus the two-device inverter.
pub fn proposed_device_count(n: u32) -> Result<u32> {
    check_odd_fan_in(n)?;
    Ok(n + 2)
}

pub(crate) fn check_odd_fan_in(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroInputs);
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenFanIn(n));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub n: u32,
    pub sop_terms: u128,
    pub conventional_transistors: u128,
    pub proposed_devices: u32,
    /// `100·(1 − proposed/conventional)`; negative when the proposed gate is larger.
    pub reduction_pct: f64,
}

pub fn cost_report(n: u32) -> Result<CostReport> {
    let proposed_devices = proposed_device_count(n)?;
    let sop_terms = sop_term_count(n)?;
    let conventional_transistors = conventional_transistor_count(n)?;
    let reduction_pct = 100.0 * (1.0 - f64::from(proposed_devices) / conventional_transistors as f64);
    Ok(CostReport { n, sop_terms, conventional_transistors, proposed_devices, reduction_pct })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Nand,
    Nor,
}

impl GateKind {
    /// Reference k-input function.
    pub fn eval(self, free: &InputVector) -> bool {
        match self {
            GateKind::Nand => free.weight() < free.width(),
            GateKind::Nor => free.weight() == 0,
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nand" => Ok(GateKind::Nand),
            "nor" => Ok(GateKind::Nor),
            other => Err(Error::InvalidParameter(format!("unknown gate kind '{other}'"))),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::Nand => "nand",
            GateKind::Nor => "nor",
        })
    }
}

/// A k-input NAND or NOR realized on a minority gate of width `2k − 1`.
///
/// The `k − 1` tied inputs are merged into one device of weight
/// `tied_weight`. For `k = 1` there is nothing to tie and the binding is a
/// plain inverter with `tied_weight = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateBinding {
    pub base_width: u32,
    pub free_inputs: u32,
    pub tied_constant: bool,
    pub tied_count: u32,
    pub tied_weight: u32,
    pub target: GateKind,
}

fn derive(kind: GateKind, k: u32) -> Result<GateBinding> {
    if k == 0 {
        return Err(Error::ZeroInputs);
    }
    if k > MAX_WIDTH / 2 {
        return Err(Error::OutOfRange(format!("k = {k} exceeds {}", MAX_WIDTH / 2)));
    }
    Ok(GateBinding {
        base_width: 2 * k - 1,
        free_inputs: k,
        tied_constant: kind == GateKind::Nor,
        tied_count: k - 1,
        tied_weight: k - 1,
        target: kind,
    })
}

/// k-input NAND: `k − 1` inputs tied to ground.
pub fn derive_nand(k: u32) -> Result<GateBinding> {
    derive(GateKind::Nand, k)
}

/// k-input NOR: `k − 1` inputs tied to the supply.
pub fn derive_nor(k: u32) -> Result<GateBinding> {
    derive(GateKind::Nor, k)
}

impl GateBinding {
    /// Minority output for the given free inputs with the tied device folded in.
    pub fn eval(&self, free: &InputVector) -> Result<bool> {
        if free.width() != self.free_inputs {
            return Err(Error::WidthMismatch { expected: self.free_inputs as usize, got: free.width() as usize });
        }
        let tied = if self.tied_constant { self.tied_weight } else { 0 };
        Ok(minority_of_weight(free.weight() + tied, self.base_width))
    }

    fn is_consistent(&self) -> bool {
        self.free_inputs >= 1 && self.free_inputs < 64 && self.base_width == self.free_inputs + self.tied_count
    }
}

/// Exhaustively compares the bound minority against NAND_k / NOR_k.
pub fn verify_binding(b: &GateBinding) -> bool {
    if !b.is_consistent() {
        return false;
    }
    let Ok(vectors) = InputVector::all(b.free_inputs) else {
        return false;
    };
    vectors.into_iter().all(|v| b.eval(&v).is_ok_and(|out| out == b.target.eval(&v)))
}
