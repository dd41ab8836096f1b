//! Property tests for graph construction, routing and the path metrics.

use fsosn::geo::{geodetic_to_ecef, GeoPoint, Vec3};
use fsosn::constellation::SnapshotPositions;
use fsosn::metrics::{pairwise_sum, LatencyBreakdown, PowerBreakdown};
use fsosn::topology::{build_slot_graph, dijkstra, dijkstra_within, EdgeKind, SlotGraph};
use proptest::prelude::*;

fn shell_point() -> impl Strategy<Value = Vec3> {
    (-80.0..80.0f64, -180.0..180.0f64).prop_map(|(lat, lon)| geodetic_to_ecef(GeoPoint::new(lat, lon, 550.0).unwrap()))
}

fn ground_point() -> impl Strategy<Value = Vec3> {
    (-60.0..60.0f64, -180.0..180.0f64).prop_map(|(lat, lon)| geodetic_to_ecef(GeoPoint::new(lat, lon, 0.1).unwrap()))
}

fn slot() -> impl Strategy<Value = (Vec<Vec3>, Vec3, Vec3)> {
    (prop::collection::vec(shell_point(), 2..60), ground_point(), ground_point())
}

fn graph(sats: &[Vec3], a: Vec3, b: Vec3, range: f64) -> SlotGraph {
    let snap = SnapshotPositions {
        time_s: 0.0,
        positions: sats.to_vec(),
    };
    build_slot_graph(&snap, a, b, range, 10.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric((sats, a, b) in slot(), range in 500.0..5016.0f64) {
        let g = graph(&sats, a, b, range);
        for u in 0..g.node_count() {
            for e in g.neighbors(u) {
                prop_assert_eq!(g.edge_weight(e.to, u), Some(e.weight_km));
                prop_assert!(e.weight_km > 0.0);
                match e.kind {
                    EdgeKind::Lisl => prop_assert!(e.weight_km <= range),
                    _ => prop_assert!(u >= g.satellite_count() || e.to >= g.satellite_count()),
                }
            }
        }
    }

    #[test]
    fn longer_range_never_lengthens_the_route((sats, a, b) in slot(), r1 in 500.0..5016.0f64, r2 in 500.0..5016.0f64) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let g = graph(&sats, a, b, hi);
        let short = dijkstra_within(&g, g.source(), g.destination(), lo);
        let long = dijkstra_within(&g, g.source(), g.destination(), hi);
        if let Some(s) = &short {
            let l = long.as_ref().expect("a route at a shorter range survives at a longer one");
            prop_assert!(l.total_km() <= s.total_km());
        }
        // range-limited search agrees with searching the restricted copy
        let restricted = dijkstra(&g.restrict(lo), g.source(), g.destination());
        prop_assert_eq!(short, restricted);
        // and with a graph built directly at the shorter range
        let direct = graph(&sats, a, b, lo);
        prop_assert_eq!(dijkstra(&direct, direct.source(), direct.destination()), dijkstra(&g.restrict(lo), g.source(), g.destination()));
    }

    #[test]
    fn node_delay_shifts_latency_per_satellite(
        up in 1.0..5.0f64,
        isl in prop::collection::vec(0.5..20.0f64, 0..15),
        down in 1.0..5.0f64,
        t_node in 0.0..30.0f64,
        delta in 0.0..30.0f64,
    ) {
        let base = LatencyBreakdown::from_delays(up, isl.clone(), down, t_node);
        let shifted = LatencyBreakdown::from_delays(up, isl.clone(), down, t_node + delta);
        prop_assert_eq!(base.satellites, isl.len() + 1);
        let expected = base.total_ms + delta * base.satellites as f64;
        prop_assert!((shifted.total_ms - expected).abs() <= 1e-9 * expected.max(1.0));
    }

    #[test]
    fn satellite_powers_sum_to_twice_the_links(
        up in 1.0..500.0f64,
        isl in prop::collection::vec(1.0..2000.0f64, 0..15),
        down in 1.0..500.0f64,
    ) {
        let p = PowerBreakdown::from_link_powers(up, isl.clone(), down);
        prop_assert_eq!(p.satellite_mw.len(), isl.len() + 1);
        let total: f64 = p.satellite_mw.iter().sum();
        let links = up + down + 2.0 * isl.iter().sum::<f64>();
        prop_assert!((total - links).abs() <= 1e-9 * links);
        prop_assert!((p.average_mw * p.satellite_mw.len() as f64 - total).abs() <= 1e-9 * total);
        prop_assert!(p.ingress_mw() >= up && p.egress_mw() >= down);
    }

    #[test]
    fn pairwise_sum_is_a_sum(xs in prop::collection::vec(-1e3..1e3f64, 0..200)) {
        let naive: f64 = xs.iter().sum();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-12 * scale);
    }
}
