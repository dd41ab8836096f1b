//! Walker delta generation, propagation and laser-neighbour permanence.
//!
//! Run with `cargo run --release --example walker_constellation`.
//! The permanence scan covers one full orbit and takes a few seconds.

use fsosn::constellation::{generate, permanent_neighbor_counts, permanent_neighbor_distances, propagate, WalkerParams};
use fsosn::geo::consts::EARTH_RADIUS_KM;

fn main() -> fsosn::Result<()> {
    for (params, ranges) in [
        (WalkerParams::starlink_p1v3(), vec![1575.0, 1731.0]),
        (WalkerParams::kuiper_shell2(), vec![1515.0]),
    ] {
        let c = generate(&params)?;
        println!(
            "{}: {:.0} deg:{}/{}/{} at {} km, period {:.1} s",
            params.name.as_deref().unwrap_or("custom"),
            params.inclination_deg,
            params.total_sats,
            params.planes,
            params.phasing_f,
            params.altitude_km,
            c.period_s()
        );

        let snap = propagate(&c, 600.0);
        let radius = snap.positions[0].norm();
        println!("  t = 600 s: satellite 0 at radius {radius:.3} km (altitude {:.3})", radius - EARTH_RADIUS_KM);

        for (range, counts) in ranges.iter().zip(permanent_neighbor_counts(&c, &ranges)) {
            let min = counts.iter().min().copied().unwrap_or(0);
            let max = counts.iter().max().copied().unwrap_or(0);
            println!("  permanent neighbours within {range} km: min {min}, max {max}");
        }
        let nearest = permanent_neighbor_distances(&c, 0, 10);
        let shown: Vec<String> = nearest.iter().map(|d| format!("{d:.0}")).collect();
        println!("  satellite 0, worst-case distance to its 10 nearest: {} km", shown.join(", "));
    }
    Ok(())
}
