use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{Error, Result};
use crate::metrics::SlotRecord;
use crate::topology;

use super::RunResult;

/// Formats like C's `%g`: six significant digits, trailing zeros removed,
/// exponent form outside [1e-4, 1e6).
pub fn format_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // rounding to six digits first decides which notation applies
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_g(x: Option<f64>) -> String {
    x.map(format_g).unwrap_or_default()
}

/// File name of the per-slot table for a laser range.
pub fn slots_file_name(range_km: f64) -> String {
    format!("slots_{}.csv", format_g(range_km))
}

fn path_label(record: &SlotRecord, satellite_count: usize) -> String {
    let Some(path) = &record.path else {
        return String::new();
    };
    path.nodes
        .iter()
        .map(|&n| node_label(n, satellite_count))
        .collect::<Vec<_>>()
        .join(";")
}

fn node_label(n: topology::NodeId, satellite_count: usize) -> String {
    if n == satellite_count {
        "gs".into()
    } else if n == satellite_count + 1 {
        "gd".into()
    } else {
        n.to_string()
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the tradeoff table, per-range slot tables, outage curves and the
/// summary into `dir`, returning the paths written.
pub fn export(r: &RunResult, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let mut tradeoff = String::from("lisl_range_km,mean_T_net_ms,mean_P_TS_avg_mW,unreachable_slots\n");
    for p in &r.curve.points {
        let _ = writeln!(
            tradeoff,
            "{},{},{},{}",
            format_g(p.lisl_range_km),
            opt_g(p.mean_t_net_ms),
            opt_g(p.mean_p_avg_mw),
            p.unreachable_slots
        );
    }
    written.push(write(dir, "tradeoff.csv", &tradeoff)?);

    let sats = r.scenario.constellation.total_sats as usize;
    for (range, records) in r.scenario.lisl_ranges_km.iter().zip(&r.records) {
        let mut out = String::from("slot,T_net_ms,P_TS_avg_mW,n_sats,path\n");
        for rec in records {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                rec.slot,
                opt_g(rec.t_net_ms()),
                opt_g(rec.p_avg_mw()),
                rec.satellite_count(),
                path_label(rec, sats)
            );
        }
        written.push(write(dir, &slots_file_name(*range), &out)?);
    }

    for c in &r.outage {
        let mut out = String::from("snr_dB,P_out\n");
        for p in &c.points {
            let _ = writeln!(out, "{},{}", format_g(p.snr_db), format_g(p.p_out));
        }
        written.push(write(dir, &format!("outage_{}_{}.csv", c.weather, c.direction), &out)?);
    }

    let summary = json!({
        "schema_version": super::SCHEMA_VERSION,
        "scenario_digest": r.digest,
        "intersection": r.intersection.map(|i| json!({
            "lisl_range_km": i.lisl_range_km,
            "mean_T_net_ms": i.t_net_ms,
            "mean_P_TS_avg_mW": i.p_avg_mw,
        })),
        "tradeoff": r.curve.points.iter().map(|p| json!({
            "lisl_range_km": p.lisl_range_km,
            "mean_T_net_ms": p.mean_t_net_ms,
            "mean_P_TS_avg_mW": p.mean_p_avg_mw,
            "reachable_slots": p.reachable_slots,
            "unreachable_slots": p.unreachable_slots,
            "infeasible_slots": p.infeasible_slots,
        })).collect::<Vec<_>>(),
        "fading": r.fading,
        "outage": r.outage.iter().map(|c| json!({
            "weather": c.weather,
            "direction": c.direction,
            "attenuation": c.attenuation,
        })).collect::<Vec<_>>(),
        "scenario": r.scenario,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    written.push(write(dir, "summary.json", &text)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (1575.0, "1575"),
            (137.1718, "137.172"),
            (326.526, "326.526"),
            (123456.7, "123457"),
            (999999.5, "1e+06"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e-30, "1e-30"),
            (-2.5, "-2.5"),
            (0.1, "0.1"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g(x), s, "{x}");
        }
    }
}
