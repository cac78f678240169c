// SPDX-License-Identifier: Apache-2.0

//! Published HSPICE results for the gate, bundled so consistency checks run
//! offline. Absolute values come from a full device model and are kept as
//! data only; this module checks relations between columns.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::transient::{energy_from_power_delay, improvement_pct};
use crate::{Error, Result};

/// Relative tolerance of the energy = power × delay check. The tables are
/// printed to three significant digits.
pub const ENERGY_RELATIVE_TOLERANCE: f64 = 0.01;

const RAW: &str = include_str!("../data/reference_tables.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub frequency_hz: f64,
    pub delay_s: f64,
    pub power_w: f64,
    pub energy_j: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplyRow {
    pub vdd_v: f64,
    pub delay_s: f64,
    pub power_w: f64,
    pub energy_j: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NandComparisonRow {
    pub vdd_v: f64,
    pub delay_conventional_s: f64,
    pub delay_proposed_s: f64,
    pub energy_conventional_j: f64,
    pub energy_proposed_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table<R> {
    pub title: String,
    pub rows: Vec<R>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NandTable {
    pub title: String,
    pub rows: Vec<NandComparisonRow>,
    pub claimed_delay_improvement_pct: f64,
    pub claimed_energy_improvement_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTables {
    pub version: u32,
    pub description: String,
    pub table3: Table<FrequencyRow>,
    pub table4: Table<SupplyRow>,
    pub table5: NandTable,
}

/// The bundled tables, parsed once.
pub fn tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(RAW).expect("bundled reference tables are valid JSON"))
}

/// Raw JSON text of the bundled tables.
pub fn raw() -> &'static str {
    RAW
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Table3,
    Table4,
    Table5,
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table3" => Ok(TableId::Table3),
            "table4" => Ok(TableId::Table4),
            "table5" => Ok(TableId::Table5),
            other => Err(Error::InvalidParameter(format!("unknown table id '{other}'"))),
        }
    }
}

/// One energy = power × delay comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResidual {
    /// Swept quantity of the row (Hz for table 3, V for table 4).
    pub param: f64,
    pub tabulated_j: f64,
    pub product_j: f64,
    pub relative_error: f64,
    pub pass: bool,
}

fn residual(param: f64, power: f64, delay: f64, tabulated: f64) -> Result<EnergyResidual> {
    let product = energy_from_power_delay(power, delay)?;
    let relative_error = (product - tabulated).abs() / tabulated;
    Ok(EnergyResidual {
        param,
        tabulated_j: tabulated,
        product_j: product,
        relative_error,
        pass: relative_error < ENERGY_RELATIVE_TOLERANCE,
    })
}

/// Energy residuals for the rows of table 3 or 4. Table 5 carries no power
/// column and is rejected.
pub fn energy_residuals(id: TableId) -> Result<Vec<EnergyResidual>> {
    let t = tables();
    match id {
        TableId::Table3 => {
            t.table3.rows.iter().map(|r| residual(r.frequency_hz, r.power_w, r.delay_s, r.energy_j)).collect()
        }
        TableId::Table4 => t.table4.rows.iter().map(|r| residual(r.vdd_v, r.power_w, r.delay_s, r.energy_j)).collect(),
        TableId::Table5 => Err(Error::InvalidParameter("table5 has no power column".into())),
    }
}

/// Delay and energy improvement of the minority-based NAND for one row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub vdd_v: f64,
    pub delay_pct: f64,
    pub energy_pct: f64,
}

pub fn nand_improvements() -> Result<Vec<Improvement>> {
    tables()
        .table5
        .rows
        .iter()
        .map(|r| {
            Ok(Improvement {
                vdd_v: r.vdd_v,
                delay_pct: improvement_pct(r.delay_conventional_s, r.delay_proposed_s)?,
                energy_pct: improvement_pct(r.energy_conventional_j, r.energy_proposed_j)?,
            })
        })
        .collect()
}
