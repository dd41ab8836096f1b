use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::constellation::generate;
use crate::error::{Error, Result};
use crate::link_budget::Direction;
use crate::metrics::{find_intersection, sweep, Intersection, SlotRecord, SweepConfig, TradeoffCurve};
use crate::turbulence::{fading_from_turbulence, link_attenuation, op_curve, EwFadingParams, OutagePoint};

use super::Scenario;

/// Outage probability against SNR for one weather and direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageCurve {
    pub weather: String,
    pub direction: Direction,
    /// Atmospheric transmittance L_a at the turbulence geometry.
    pub attenuation: f64,
    pub points: Vec<OutagePoint>,
}

/// Everything one scenario run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario: Scenario,
    /// Hex SHA-256 of the canonical JSON of the scenario.
    pub digest: String,
    /// `records[r][s]` for range index `r` and slot `s`.
    pub records: Vec<Vec<SlotRecord>>,
    pub curve: TradeoffCurve,
    /// `None` when the curves do not cross (or fewer than two ranges have data).
    pub intersection: Option<Intersection>,
    pub fading: EwFadingParams,
    pub outage: Vec<OutageCurve>,
}

/// Hex SHA-256 over the scenario's canonical JSON encoding.
pub fn scenario_digest(s: &Scenario) -> String {
    let canonical = serde_json::to_vec(s).expect("scenario serializes");
    Sha256::digest(&canonical)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs the routing sweep and the outage analysis for a validated scenario.
///
/// Unreachable slots are data, not errors. The result is a pure function of
/// the scenario and does not depend on the size of the rayon thread pool.
pub fn run(s: &Scenario) -> Result<RunResult> {
    super::validate(s)?;
    let constellation = generate(&s.constellation)?;
    let cfg = SweepConfig {
        source: s.gs_source.point(),
        destination: s.gs_destination.point(),
        lisl_ranges_km: s.lisl_ranges_km.clone(),
        slot_count: s.slot_count,
        slot_seconds: s.slot_seconds,
        min_elevation_deg: s.min_elevation_deg,
        node_delay_ms: s.t_node_ms,
        link_budget: s.link_budget.clone(),
        weather: s.weather.clone(),
    };
    let swept = sweep(&constellation, &cfg)?;
    let intersection = match find_intersection(&swept.curve) {
        Ok(i) => Some(i),
        Err(Error::NoCrossing | Error::Validation(_)) => None,
        Err(e) => return Err(e),
    };

    let fading = fading_from_turbulence(&s.turbulence)?;
    let mut outage = Vec::new();
    for w in &s.op_weathers {
        for direction in [Direction::Up, Direction::Down] {
            let attenuation = link_attenuation(&s.turbulence, direction, w)?;
            outage.push(OutageCurve {
                weather: w.name.clone(),
                direction,
                attenuation,
                points: op_curve(&s.op_snr_grid_db, s.gamma_th_db, &fading, attenuation),
            });
        }
    }

    Ok(RunResult {
        scenario: s.clone(),
        digest: scenario_digest(s),
        records: swept.records,
        curve: swept.curve,
        intersection,
        fading,
        outage,
    })
}
