// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use cntmin_core::analog::{self, GateConfig};
use cntmin_core::device::{Chirality, CntDevice, ConductionKind};
use cntmin_core::logic::{self, GateKind, InputVector};
use cntmin_core::reference::{self, TableId};
use cntmin_core::transient;
use cntmin_core::variation;
use cntmin_core::Error;

use crate::config::RunConfig;
use crate::CliError;

/// Widest fan-in the truth-table command will enumerate.
pub const MAX_TABLE_INPUTS: u32 = 24;

/// Improvement claims are compared at this many percentage points.
const CLAIM_TOLERANCE_PCT: f64 = 1.5;

pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// False when a check ran and failed; maps to exit status 1.
    pub verdict: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, verdict: true }
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Six significant digits in scientific notation, for CSV cells.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

pub fn device(n1: u32, n2: u32) -> Result<Outcome, CliError> {
    let d = CntDevice::from_chirality(Chirality::new(n1, n2).map_err(usage)?);
    let kind = match d.kind {
        ConductionKind::Metallic => "metallic",
        ConductionKind::Semiconducting => "semiconducting",
    };
    let mut text = String::new();
    writeln!(text, "chirality      ({n1}, {n2})").unwrap();
    writeln!(text, "kind           {kind}").unwrap();
    writeln!(text, "diameter       {:.4} nm", d.diameter).unwrap();
    writeln!(text, "chiral_length  {:.4} nm", d.chiral_length).unwrap();
    match d.threshold_voltage {
        Some(vth) => writeln!(text, "threshold      {vth:.4} V").unwrap(),
        None => writeln!(text, "threshold      none (metallic)").unwrap(),
    }
    Ok(Outcome::ok(text, serde_json::to_value(d).expect("device serializes")))
}

fn check_table_width(n: u32) -> Result<(), CliError> {
    if n == 0 || n > MAX_TABLE_INPUTS {
        return Err(CliError::Usage(format!("n must be in 1..={MAX_TABLE_INPUTS}, got {n}")));
    }
    Ok(())
}

pub fn truthtable(n: u32, full: bool) -> Result<Outcome, CliError> {
    check_table_width(n)?;
    if full {
        let mut text = String::from("vector,sum_in,minority\n");
        let mut rows = Vec::new();
        for v in InputVector::all(n).map_err(usage)? {
            let out = logic::minority(&v);
            writeln!(text, "{v},{},{}", v.weight(), bit(out)).unwrap();
            rows.push(json!({ "vector": v.to_string(), "sum_in": v.weight(), "minority": bit(out) }));
        }
        return Ok(Outcome::ok(text, json!({ "width": n, "rows": rows })));
    }
    let table = logic::weight_table(n).map_err(usage)?;
    let mut text = String::from("sum_in,minority\n");
    for r in &table.rows {
        writeln!(text, "{},{}", r.weight, bit(r.output)).unwrap();
    }
    let rows: Vec<Value> =
        table.rows.iter().map(|r| json!({ "sum_in": r.weight, "minority": bit(r.output) })).collect();
    Ok(Outcome::ok(text, json!({ "width": n, "rows": rows })))
}

pub fn cost(n: u32) -> Result<Outcome, CliError> {
    let r = logic::cost_report(n).map_err(usage)?;
    let mut text = String::new();
    writeln!(text, "inputs                    {}", r.n).unwrap();
    writeln!(text, "sop_terms                 {}", r.sop_terms).unwrap();
    writeln!(text, "conventional_transistors  {}", r.conventional_transistors).unwrap();
    writeln!(text, "proposed_devices          {}", r.proposed_devices).unwrap();
    writeln!(text, "reduction                 {:.4}%", r.reduction_pct).unwrap();
    let json = json!({
        "n": r.n,
        "sop_terms": r.sop_terms as u64,
        "conventional_transistors": r.conventional_transistors as u64,
        "proposed_devices": r.proposed_devices,
        "reduction_pct": r.reduction_pct,
    });
    Ok(Outcome::ok(text, json))
}

fn describe_gate(cfg: &GateConfig) -> String {
    match cfg.tied() {
        Some(t) => format!(
            "{}-input minority, {} driven inputs, tied weight {} at {}",
            cfg.n(),
            cfg.driven_inputs(),
            t.weight,
            bit(t.level)
        ),
        None => format!("{}-input minority", cfg.n()),
    }
}

pub fn eval(config: Option<&Path>, vector: Option<&str>) -> Result<Outcome, CliError> {
    let rc = RunConfig::resolve(config)?;
    let cfg = rc.gate()?;
    let p = rc.vtc(cfg.vdd())?;
    let text_vector = vector
        .or(rc.vector.as_deref())
        .ok_or_else(|| CliError::Usage("no input vector (use --vector or the config's \"vector\")".into()))?;
    let v: InputVector = text_vector.parse().map_err(usage)?;
    let r = analog::evaluate(&v, &cfg, &p).map_err(usage)?;
    let expected = cfg.reference(&v).map_err(usage)?;

    let logic_name = match r.logic {
        analog::Logic::One => "1",
        analog::Logic::Zero => "0",
        analog::Logic::Indeterminate => "indeterminate",
    };
    let mut text = String::new();
    writeln!(text, "gate      {}", describe_gate(&cfg)).unwrap();
    writeln!(text, "vector    {v}").unwrap();
    writeln!(text, "vm        {:.5} V", r.vm).unwrap();
    writeln!(text, "vout      {:.5} V", r.vout).unwrap();
    writeln!(text, "logic     {logic_name}").unwrap();
    writeln!(text, "margin    {:.5} V", r.margin).unwrap();
    writeln!(text, "minority  {}", bit(expected)).unwrap();
    let json = json!({
        "vector": v.to_string(),
        "vdd": cfg.vdd(),
        "vtc": p,
        "result": r,
        "minority": bit(expected),
    });
    Ok(Outcome::ok(text, json))
}

pub fn check(config: Option<&Path>) -> Result<Outcome, CliError> {
    let rc = RunConfig::resolve(config)?;
    let cfg = rc.gate()?;
    let p = rc.vtc(cfg.vdd())?;
    let pass = analog::functional_check(&cfg, &p).map_err(usage)?;
    let margin = analog::static_margin(&cfg, &p).map_err(usage)?;
    let signed = analog::correctness_margin(&cfg, &p).map_err(usage)?;
    let (lo, hi) = analog::threshold_window(&cfg).map_err(usage)?;
    let vectors = 1u64 << cfg.driven_inputs();

    let mut text = String::new();
    writeln!(text, "gate              {}", describe_gate(&cfg)).unwrap();
    writeln!(text, "vdd               {} V", cfg.vdd()).unwrap();
    writeln!(text, "v_sw              {:.5} V (window {lo:.5} .. {hi:.5})", p.v_sw).unwrap();
    writeln!(text, "width_w           {:.5} V", p.width_w).unwrap();
    writeln!(text, "static_margin     {margin:.5} V").unwrap();
    writeln!(text, "correct_margin    {signed:.5} V").unwrap();
    writeln!(text, "verdict           {} ({vectors} vectors)", if pass { "PASS" } else { "FAIL" }).unwrap();
    let json = json!({
        "n": cfg.n(),
        "vdd": cfg.vdd(),
        "vtc": p,
        "window": [lo, hi],
        "vectors": vectors,
        "static_margin": margin,
        "correctness_margin": signed,
        "pass": pass,
    });
    Ok(Outcome { text, json, verdict: pass })
}

pub fn derive(kind: &str, k: u32) -> Result<Outcome, CliError> {
    let kind: GateKind = kind.parse().map_err(usage)?;
    let b = match kind {
        GateKind::Nand => logic::derive_nand(k),
        GateKind::Nor => logic::derive_nor(k),
    }
    .map_err(usage)?;
    let verified = logic::verify_binding(&b);
    let cfg = GateConfig::from_binding(&b, crate::config::DEFAULT_VDD).map_err(usage)?;
    let analog_ok = analog::functional_check(&cfg, &analog::VtcParams::centered(cfg.vdd())).map_err(usage)?;

    let mut text = String::new();
    writeln!(text, "target        {kind}{k}").unwrap();
    writeln!(text, "base_width    {} (minority-{})", b.base_width, b.base_width).unwrap();
    writeln!(text, "free_inputs   {}", b.free_inputs).unwrap();
    if b.tied_count > 0 {
        writeln!(
            text,
            "tied          {} inputs to {} (merged device, weight {})",
            b.tied_count,
            bit(b.tied_constant),
            b.tied_weight
        )
        .unwrap();
    } else {
        writeln!(text, "tied          none").unwrap();
    }
    writeln!(
        text,
        "equivalence   {} ({} vectors)",
        if verified { "verified" } else { "FAILED" },
        1u64 << b.free_inputs
    )
    .unwrap();
    writeln!(text, "analog_check  {}", if analog_ok { "pass" } else { "FAIL" }).unwrap();
    let json = json!({ "binding": b, "verified": verified, "analog_check": analog_ok });
    Ok(Outcome { text, json, verdict: verified && analog_ok })
}

pub fn sweep(config: Option<&Path>) -> Result<Outcome, CliError> {
    let rc = RunConfig::require(config)?;
    let model = rc.model()?;
    let base = rc.operating_point()?;
    let (param, grid) = rc.sweep_grid()?;
    let rows = transient::sweep(&model, &base, param, &grid).map_err(usage)?;
    let mut text = String::from("param,delay_s,energy_j\n");
    for r in &rows {
        writeln!(text, "{},{},{}", sci(r.param), sci(r.delay), sci(r.energy)).unwrap();
    }
    let json = json!({ "param": param, "model": model, "rows": rows });
    Ok(Outcome::ok(text, json))
}

pub fn calibrate(config: Option<&Path>) -> Result<Outcome, CliError> {
    let rc = RunConfig::require(config)?;
    let points = rc.points.as_deref().unwrap_or_default();
    if points.len() < 2 {
        return Err(CliError::Usage(format!("calibrate needs at least 2 points, got {}", points.len())));
    }
    let (r_eff, c_par) = transient::calibrate_delay(points).map_err(|e| match e {
        Error::DegenerateFit(_) | Error::ModelInapplicable(_) => CliError::Failed(e.to_string()),
        other => usage(other),
    })?;
    let text = format!("r_eff_ohm,c_par_f\n{},{}\n", sci(r_eff), sci(c_par));
    Ok(Outcome::ok(text, json!({ "r_eff_ohm": r_eff, "c_par_f": c_par, "points": points.len() })))
}

pub fn monte_carlo(config: Option<&Path>) -> Result<Outcome, CliError> {
    let rc = RunConfig::require(config)?;
    let cfg = rc.gate()?;
    let p = rc.vtc(cfg.vdd())?;
    let nominal = rc.device()?;
    let specs = rc.variation()?;
    let mut text = String::from("sigma_rel,trials,yield\n");
    let mut runs = Vec::new();
    for spec in specs {
        let report = variation::gate_yield(&cfg, &p, &nominal, &spec).map_err(usage)?;
        writeln!(text, "{},{},{}", sci(spec.sigma_rel), report.trials, sci(report.yield_fraction)).unwrap();
        runs.push(json!({ "spec": spec, "report": report }));
    }
    Ok(Outcome::ok(text, json!({ "nominal": nominal, "vtc": p, "runs": runs })))
}

pub fn paperdata(table: &str) -> Result<Outcome, CliError> {
    let id: TableId = table.parse().map_err(usage)?;
    let t = reference::tables();
    let mut text = String::new();
    match id {
        TableId::Table3 | TableId::Table4 => {
            let (title, column) = match id {
                TableId::Table3 => (&t.table3.title, "frequency_hz"),
                _ => (&t.table4.title, "vdd_v"),
            };
            let residuals = reference::energy_residuals(id).map_err(usage)?;
            let delays_powers: Vec<(f64, f64)> = match id {
                TableId::Table3 => t.table3.rows.iter().map(|r| (r.delay_s, r.power_w)).collect(),
                _ => t.table4.rows.iter().map(|r| (r.delay_s, r.power_w)).collect(),
            };
            writeln!(text, "# {title}").unwrap();
            writeln!(text, "{column},delay_s,power_w,energy_j,power_x_delay_j,relative_error,check").unwrap();
            for (r, (d, pw)) in residuals.iter().zip(&delays_powers) {
                writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    sci(r.param),
                    sci(*d),
                    sci(*pw),
                    sci(r.tabulated_j),
                    sci(r.product_j),
                    sci(r.relative_error),
                    if r.pass { "pass" } else { "fail" }
                )
                .unwrap();
            }
            let pass = residuals.iter().all(|r| r.pass);
            let rows = match id {
                TableId::Table3 => serde_json::to_value(&t.table3).expect("table serializes"),
                _ => serde_json::to_value(&t.table4).expect("table serializes"),
            };
            let json = json!({
                "table": rows,
                "tolerance": reference::ENERGY_RELATIVE_TOLERANCE,
                "residuals": residuals,
                "pass": pass,
            });
            Ok(Outcome { text, json, verdict: pass })
        }
        TableId::Table5 => {
            let improvements = reference::nand_improvements().map_err(usage)?;
            writeln!(text, "# {}", t.table5.title).unwrap();
            writeln!(
                text,
                "vdd_v,delay_conventional_s,delay_proposed_s,energy_conventional_j,energy_proposed_j,delay_improvement_pct,energy_improvement_pct"
            )
            .unwrap();
            for (r, imp) in t.table5.rows.iter().zip(&improvements) {
                writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    sci(r.vdd_v),
                    sci(r.delay_conventional_s),
                    sci(r.delay_proposed_s),
                    sci(r.energy_conventional_j),
                    sci(r.energy_proposed_j),
                    sci(imp.delay_pct),
                    sci(imp.energy_pct)
                )
                .unwrap();
            }
            let nominal = improvements.iter().find(|r| (r.vdd_v - 0.9).abs() < 1e-12);
            let pass = nominal.is_some_and(|r| {
                (r.delay_pct - t.table5.claimed_delay_improvement_pct).abs() <= CLAIM_TOLERANCE_PCT
                    && (r.energy_pct - t.table5.claimed_energy_improvement_pct).abs() <= CLAIM_TOLERANCE_PCT
            });
            writeln!(
                text,
                "# claimed at 0.9 V: delay {}%, energy {}% (+/-{CLAIM_TOLERANCE_PCT} points): {}",
                t.table5.claimed_delay_improvement_pct,
                t.table5.claimed_energy_improvement_pct,
                if pass { "pass" } else { "fail" }
            )
            .unwrap();
            let json = json!({ "table": t.table5, "improvements": improvements, "pass": pass });
            Ok(Outcome { text, json, verdict: pass })
        }
    }
}
