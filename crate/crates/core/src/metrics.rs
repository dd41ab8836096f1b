//! Latency and transmission-power metrics for routed paths, their averages over
//! an orbital period, and the latency/power tradeoff curve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constellation::{propagate, Constellation};
use crate::error::{Error, Result};
use crate::geo::consts::SPEED_OF_LIGHT_KM_MS;
use crate::geo::{geodetic_to_ecef, GeoPoint};
use crate::link_budget::{
    lisl_transmission_power, updown_transmission_power, Direction, LinkBudgetParams, WeatherProfile,
};
use crate::topology::{build_slot_graph, dijkstra_within, Path, SlotGraph};

/// Queuing delay per satellite (ms).
pub const QUEUING_DELAY_MS: f64 = 4.0;
/// Processing delay per satellite (ms).
pub const PROCESSING_DELAY_MS: f64 = 6.0;
/// Default per-satellite node delay (ms).
pub const DEFAULT_NODE_DELAY_MS: f64 = QUEUING_DELAY_MS + PROCESSING_DELAY_MS;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeDelayComponents {
    /// Serialization (transmission) delay of one packet, in microseconds.
    pub transmission_us: f64,
    pub queuing_ms: f64,
    pub processing_ms: f64,
    /// Queuing plus processing; the transmission delay is negligible and left out.
    pub node_ms: f64,
}

/// Per-satellite delay components for a packet of `packet_bytes` at `rate_gbps`.
pub fn node_delay_components(packet_bytes: f64, rate_gbps: f64) -> NodeDelayComponents {
    NodeDelayComponents {
        transmission_us: packet_bytes * 8.0 / (rate_gbps * 1e9) * 1e6,
        queuing_ms: QUEUING_DELAY_MS,
        processing_ms: PROCESSING_DELAY_MS,
        node_ms: DEFAULT_NODE_DELAY_MS,
    }
}

/// One-way propagation delay (ms) over `distance_km` in vacuum.
pub fn propagation_delay_ms(distance_km: f64) -> f64 {
    distance_km / SPEED_OF_LIGHT_KM_MS
}

/// End-to-end latency of a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyBreakdown {
    pub uplink_ms: f64,
    pub isl_ms: Vec<f64>,
    pub downlink_ms: f64,
    /// Number of satellites on the path.
    pub satellites: usize,
    pub node_delay_ms: f64,
    pub total_ms: f64,
}

impl LatencyBreakdown {
    /// Assembles a breakdown from per-link delays; `isl_ms` has one entry per laser hop.
    pub fn from_delays(uplink_ms: f64, isl_ms: Vec<f64>, downlink_ms: f64, node_delay_ms: f64) -> Self {
        let satellites = isl_ms.len() + 1;
        let total_ms = uplink_ms + isl_ms.iter().sum::<f64>() + downlink_ms + satellites as f64 * node_delay_ms;
        Self {
            uplink_ms,
            isl_ms,
            downlink_ms,
            satellites,
            node_delay_ms,
            total_ms,
        }
    }
}

pub fn path_latency(path: &Path, node_delay_ms: f64) -> LatencyBreakdown {
    LatencyBreakdown::from_delays(
        propagation_delay_ms(path.uplink_km()),
        path.isl_km().iter().map(|&d| propagation_delay_ms(d)).collect(),
        propagation_delay_ms(path.downlink_km()),
        node_delay_ms,
    )
}

/// Transmission power carried by each satellite on a path (mW).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub uplink_mw: f64,
    pub isl_mw: Vec<f64>,
    pub downlink_mw: f64,
    /// Per-satellite power in path order; the first entry is the ingress satellite.
    pub satellite_mw: Vec<f64>,
    pub average_mw: f64,
}

impl PowerBreakdown {
    /// Charges every link to both of its endpoint satellites.
    ///
    /// The ingress satellite carries the uplink plus its outgoing laser link, the
    /// egress satellite its incoming laser link plus the downlink, and every
    /// other satellite its incoming plus outgoing laser links. A path with a
    /// single satellite charges it with uplink plus downlink.
    pub fn from_link_powers(uplink_mw: f64, isl_mw: Vec<f64>, downlink_mw: f64) -> Self {
        let n = isl_mw.len() + 1;
        let satellite_mw: Vec<f64> = (0..n)
            .map(|k| {
                let incoming = if k == 0 { uplink_mw } else { isl_mw[k - 1] };
                let outgoing = if k == n - 1 { downlink_mw } else { isl_mw[k] };
                incoming + outgoing
            })
            .collect();
        let average_mw = satellite_mw.iter().sum::<f64>() / n as f64;
        Self {
            uplink_mw,
            isl_mw,
            downlink_mw,
            satellite_mw,
            average_mw,
        }
    }

    pub fn ingress_mw(&self) -> f64 {
        self.satellite_mw[0]
    }

    pub fn egress_mw(&self) -> f64 {
        self.satellite_mw[self.satellite_mw.len() - 1]
    }
}

/// Endpoint geometry that the ground-link budget depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGeometry {
    pub uplink_elevation_deg: f64,
    pub downlink_elevation_deg: f64,
    pub source_altitude_km: f64,
    pub destination_altitude_km: f64,
}

/// Per-satellite transmission powers along `path`.
///
/// Fails with [`Error::InfeasibleLink`] when the weather blocks a ground link.
pub fn path_power(
    path: &Path,
    geometry: &PathGeometry,
    lb: &LinkBudgetParams,
    weather: &WeatherProfile,
) -> Result<PowerBreakdown> {
    let up = updown_transmission_power(
        lb,
        Direction::Up,
        path.uplink_km(),
        geometry.uplink_elevation_deg,
        geometry.source_altitude_km,
        weather,
    )?;
    let down = updown_transmission_power(
        lb,
        Direction::Down,
        path.downlink_km(),
        geometry.downlink_elevation_deg,
        geometry.destination_altitude_km,
        weather,
    )?;
    let isl = path
        .isl_km()
        .iter()
        .map(|&d| lisl_transmission_power(lb, d).map(|w| w * 1e3))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerBreakdown::from_link_powers(up * 1e3, isl, down * 1e3))
}

/// Sum in a fixed binary-tree order, so the result does not depend on how the
/// inputs were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Outcome of one (slot, range) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot: usize,
    pub time_s: f64,
    pub path: Option<Path>,
    pub latency: Option<LatencyBreakdown>,
    /// `None` when unreachable or when a ground link is infeasible.
    pub power: Option<PowerBreakdown>,
}

impl SlotRecord {
    pub fn is_reachable(&self) -> bool {
        self.path.is_some()
    }

    pub fn t_net_ms(&self) -> Option<f64> {
        self.latency.as_ref().map(|l| l.total_ms)
    }

    pub fn p_avg_mw(&self) -> Option<f64> {
        self.power.as_ref().map(|p| p.average_mw)
    }

    pub fn satellite_count(&self) -> usize {
        self.path.as_ref().map_or(0, |p| p.satellites().len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub lisl_range_km: f64,
    /// Mean latency over reachable slots; `None` if no slot is reachable.
    pub mean_t_net_ms: Option<f64>,
    /// Mean per-satellite power over slots with a feasible path.
    pub mean_p_avg_mw: Option<f64>,
    pub reachable_slots: usize,
    pub unreachable_slots: usize,
    /// Reachable slots whose ground links the weather blocks.
    pub infeasible_slots: usize,
}

/// Mean latency and power against laser range, ranges ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
}

impl TradeoffCurve {
    /// Aggregates per-slot records (outer index = range) into curve points.
    pub fn from_records(ranges_km: &[f64], records: &[Vec<SlotRecord>]) -> Self {
        let points = ranges_km
            .iter()
            .zip(records)
            .map(|(&lisl_range_km, recs)| {
                let t: Vec<f64> = recs.iter().filter_map(SlotRecord::t_net_ms).collect();
                let p: Vec<f64> = recs.iter().filter_map(SlotRecord::p_avg_mw).collect();
                let reachable = t.len();
                TradeoffPoint {
                    lisl_range_km,
                    mean_t_net_ms: (!t.is_empty()).then(|| pairwise_sum(&t) / t.len() as f64),
                    mean_p_avg_mw: (!p.is_empty()).then(|| pairwise_sum(&p) / p.len() as f64),
                    reachable_slots: reachable,
                    unreachable_slots: recs.len() - reachable,
                    infeasible_slots: reachable - p.len(),
                }
            })
            .collect();
        Self { points }
    }

    pub fn ranges(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lisl_range_km).collect()
    }
}

/// Everything a sweep needs besides the constellation itself.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub source: GeoPoint,
    pub destination: GeoPoint,
    /// Laser ranges, ascending.
    pub lisl_ranges_km: Vec<f64>,
    pub slot_count: usize,
    pub slot_seconds: f64,
    pub min_elevation_deg: f64,
    pub node_delay_ms: f64,
    pub link_budget: LinkBudgetParams,
    pub weather: WeatherProfile,
}

/// Per-slot records for every range plus the aggregated curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// `records[r][s]`: range index `r`, slot `s`.
    pub records: Vec<Vec<SlotRecord>>,
    pub curve: TradeoffCurve,
}

/// Routes every slot at every range and averages the metrics.
///
/// Slots are evaluated in parallel; each slot builds its graph once at the
/// largest range and derives the shorter ranges from it. Aggregation runs in
/// slot order afterwards, so results do not depend on the thread count.
pub fn sweep(constellation: &Constellation, cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.lisl_ranges_km.is_empty() {
        return Err(Error::Validation("sweep needs at least one laser range".into()));
    }
    if cfg.lisl_ranges_km.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Validation("laser ranges must be strictly ascending".into()));
    }
    let per_slot: Vec<Vec<SlotRecord>> = (0..cfg.slot_count)
        .into_par_iter()
        .map(|slot| evaluate_slot(constellation, cfg, slot))
        .collect::<Result<_>>()?;

    let mut records: Vec<Vec<SlotRecord>> = cfg
        .lisl_ranges_km
        .iter()
        .map(|_| Vec::with_capacity(cfg.slot_count))
        .collect();
    for slot_records in per_slot {
        for (r, rec) in slot_records.into_iter().enumerate() {
            records[r].push(rec);
        }
    }
    let curve = TradeoffCurve::from_records(&cfg.lisl_ranges_km, &records);
    Ok(SweepResult { records, curve })
}

/// Evaluates one slot at every configured range.
pub fn evaluate_slot(constellation: &Constellation, cfg: &SweepConfig, slot: usize) -> Result<Vec<SlotRecord>> {
    let time_s = slot as f64 * cfg.slot_seconds;
    let positions = propagate(constellation, time_s);
    let max_range = *cfg.lisl_ranges_km.last().expect("ranges checked non-empty");
    let full = build_slot_graph(
        &positions,
        geodetic_to_ecef(cfg.source),
        geodetic_to_ecef(cfg.destination),
        max_range,
        cfg.min_elevation_deg,
    );
    cfg.lisl_ranges_km
        .iter()
        .map(|&range| route_record(&full, range, cfg, slot, time_s))
        .collect()
}

fn route_record(g: &SlotGraph, range: f64, cfg: &SweepConfig, slot: usize, time_s: f64) -> Result<SlotRecord> {
    let Some(path) = dijkstra_within(g, g.source(), g.destination(), range) else {
        return Ok(SlotRecord {
            slot,
            time_s,
            path: None,
            latency: None,
            power: None,
        });
    };
    let sats = path.satellites();
    let ingress = sats[0];
    let egress = sats[sats.len() - 1];
    let geometry = PathGeometry {
        uplink_elevation_deg: g.ground_elevation(g.source(), ingress).expect("uplink on path"),
        downlink_elevation_deg: g.ground_elevation(g.destination(), egress).expect("downlink on path"),
        source_altitude_km: cfg.source.altitude_km,
        destination_altitude_km: cfg.destination.altitude_km,
    };
    let latency = path_latency(&path, cfg.node_delay_ms);
    let power = match path_power(&path, &geometry, &cfg.link_budget, &cfg.weather) {
        Ok(p) => Some(p),
        Err(Error::InfeasibleLink) => None,
        Err(e) => return Err(e),
    };
    Ok(SlotRecord {
        slot,
        time_s,
        path: Some(path),
        latency: Some(latency),
        power,
    })
}

/// Where the normalized latency and power curves cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub lisl_range_km: f64,
    /// Mean latency interpolated at the crossing (ms, not normalized).
    pub t_net_ms: f64,
    /// Mean power interpolated at the crossing (mW, not normalized).
    pub p_avg_mw: f64,
}

fn min_max_normalize(xs: &[f64]) -> Vec<f64> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    xs.iter()
        .map(|&x| if span > 0.0 { (x - lo) / span } else { 0.0 })
        .collect()
}

/// First crossing of two series after min–max normalizing each over the grid.
///
/// Returns the abscissa and the raw series values linearly interpolated there.
pub fn normalized_crossing(x: &[f64], a: &[f64], b: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() < 2 || a.len() != x.len() || b.len() != x.len() {
        return Err(Error::Validation("a crossing needs two or more aligned points".into()));
    }
    let an = min_max_normalize(a);
    let bn = min_max_normalize(b);
    let diff: Vec<f64> = an.iter().zip(&bn).map(|(p, q)| p - q).collect();
    // a crossing is a sign change of the difference; touching without one does not count
    let mut last_nonzero: Option<usize> = None;
    for k in 0..x.len() {
        if diff[k] == 0.0 {
            continue;
        }
        if let Some(j) = last_nonzero {
            if diff[j] * diff[k] < 0.0 {
                if k > j + 1 {
                    let m = j + 1;
                    return Ok((x[m], a[m], b[m]));
                }
                let f = diff[j] / (diff[j] - diff[k]);
                let lerp = |lo: f64, hi: f64| lo + f * (hi - lo);
                return Ok((lerp(x[j], x[k]), lerp(a[j], a[k]), lerp(b[j], b[k])));
            }
        }
        last_nonzero = Some(k);
    }
    Err(Error::NoCrossing)
}

/// Crossing of the normalized mean-latency and mean-power curves.
///
/// Points lacking either mean are skipped. Returns [`Error::NoCrossing`] when
/// the curves do not cross within the grid.
pub fn find_intersection(curve: &TradeoffCurve) -> Result<Intersection> {
    let (mut x, mut t, mut p) = (Vec::new(), Vec::new(), Vec::new());
    for pt in &curve.points {
        if let (Some(tv), Some(pv)) = (pt.mean_t_net_ms, pt.mean_p_avg_mw) {
            x.push(pt.lisl_range_km);
            t.push(tv);
            p.push(pv);
        }
    }
    let (lisl_range_km, t_net_ms, p_avg_mw) = normalized_crossing(&x, &t, &p)?;
    Ok(Intersection {
        lisl_range_km,
        t_net_ms,
        p_avg_mw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn node_delays() {
        let d = node_delay_components(1500.0, 10.0);
        assert_relative_eq!(d.transmission_us, 1.2, max_relative = 1e-12);
        assert_eq!(d.node_ms, 10.0);
        assert_relative_eq!(node_delay_components(3000.0, 10.0).transmission_us, 2.4, max_relative = 1e-12);
    }

    #[test]
    fn light_millisecond() {
        assert_eq!(propagation_delay_ms(299.792458), 1.0);
    }

    #[test]
    fn single_satellite_latency_and_power() {
        let l = LatencyBreakdown::from_delays(3.0, vec![], 4.0, 10.0);
        assert_eq!(l.total_ms, 17.0);
        let p = PowerBreakdown::from_link_powers(70.0, vec![], 90.0);
        assert_eq!(p.satellite_mw, vec![160.0]);
        assert_eq!(p.average_mw, 160.0);
    }

    #[test]
    fn intermediate_carries_both_links() {
        let p = PowerBreakdown::from_link_powers(1.0, vec![5.0, 5.0], 2.0);
        assert_eq!(p.satellite_mw, vec![6.0, 10.0, 7.0]);
        let total: f64 = p.satellite_mw.iter().sum();
        assert_eq!(total, 1.0 + 2.0 + 2.0 * 10.0);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn symmetric_crossing() {
        let (x, a, b) = normalized_crossing(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0]).unwrap();
        assert_eq!((x, a, b), (0.5, 0.5, 0.5));
    }

    #[test]
    fn touching_is_not_crossing() {
        let r = normalized_crossing(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]);
        assert!(matches!(r, Err(Error::NoCrossing)));
        let r = normalized_crossing(&[0.0, 1.0, 2.0], &[0.0, 0.9, 1.0], &[0.0, 0.1, 1.0]);
        assert!(matches!(r, Err(Error::NoCrossing)));
        // a sign change through an exact grid-point touch lands on that point
        let (x, _, _) = normalized_crossing(&[0.0, 1.0, 2.0], &[1.0, 0.5, 0.0], &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(x, 1.0);
        assert!(matches!(normalized_crossing(&[0.0], &[1.0], &[1.0]), Err(Error::Validation(_))));
    }
}
