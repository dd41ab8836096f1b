//! Builds the network graph of one time slot and routes Toronto to Sydney.
//!
//! Shows the path, its per-link delays and the per-satellite transmission
//! power at each laser range of the Starlink grid.
//!
//! Run with `cargo run --release --example shortest_path [slot]`.

use fsosn::constellation::{generate, propagate, WalkerParams};
use fsosn::geo::{geodetic_to_ecef, GeoPoint};
use fsosn::link_budget::{LinkBudgetParams, WeatherProfile};
use fsosn::metrics::{path_latency, path_power, PathGeometry, DEFAULT_NODE_DELAY_MS};
use fsosn::topology::{build_slot_graph, dijkstra_within};

fn main() -> fsosn::Result<()> {
    let slot: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let c = generate(&WalkerParams::starlink_p1v3())?;
    let toronto = GeoPoint::new(43.65, -79.38, 0.1)?;
    let sydney = GeoPoint::new(-33.87, 151.21, 0.1)?;
    let positions = propagate(&c, slot);
    let g = build_slot_graph(&positions, geodetic_to_ecef(toronto), geodetic_to_ecef(sydney), 5016.0, 25.0);
    println!(
        "slot {slot}: {} nodes, {} links; Toronto sees {} satellites, Sydney {}",
        g.node_count(),
        g.edge_count(),
        g.source_links().len(),
        g.destination_links().len()
    );

    let lb = LinkBudgetParams::default();
    let weather = WeatherProfile::thin_cirrus();
    for range in [1575.0, 1731.0, 2000.0, 3000.0, 4000.0, 5016.0] {
        let Some(path) = dijkstra_within(&g, g.source(), g.destination(), range) else {
            println!("{range} km: no route");
            continue;
        };
        let sats = path.satellites();
        let geometry = PathGeometry {
            uplink_elevation_deg: g.ground_elevation(g.source(), sats[0]).expect("ingress is linked"),
            downlink_elevation_deg: g.ground_elevation(g.destination(), sats[sats.len() - 1]).expect("egress is linked"),
            source_altitude_km: toronto.altitude_km,
            destination_altitude_km: sydney.altitude_km,
        };
        let latency = path_latency(&path, DEFAULT_NODE_DELAY_MS);
        let power = path_power(&path, &geometry, &lb, &weather)?;
        println!(
            "{range} km: {} satellites, {:.0} km, T_net {:.2} ms, mean satellite power {:.2} mW",
            sats.len(),
            path.total_km(),
            latency.total_ms,
            power.average_mw
        );
        let hops: Vec<String> = latency.isl_ms.iter().map(|d| format!("{d:.2}")).collect();
        println!(
            "    delays: up {:.2} | {} | down {:.2} ms",
            latency.uplink_ms,
            hops.join(" "),
            latency.downlink_ms
        );
        let per_sat: Vec<String> = power.satellite_mw.iter().map(|p| format!("{p:.1}")).collect();
        println!("    satellites {:?}", sats);
        println!("    power (mW) {}", per_sat.join(" "));
    }
    Ok(())
}
