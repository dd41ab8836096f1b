//! Latency against transmission power across laser ranges.
//!
//! Sweeps a few minutes of Starlink operation between two cities and reports
//! the mean-latency and mean-power curves and where their normalized forms cross.
//!
//! Run with `cargo run --release --example tradeoff_sweep [slots] [destination]`,
//! e.g. `tradeoff_sweep 300 istanbul`.

use fsosn::constellation::{generate, WalkerParams};
use fsosn::link_budget::{LinkBudgetParams, WeatherProfile};
use fsosn::metrics::{find_intersection, sweep, SweepConfig, DEFAULT_NODE_DELAY_MS};
use fsosn::scenario::GroundStation;
use fsosn::Error;

fn main() -> fsosn::Result<()> {
    let mut args = std::env::args().skip(1);
    let slots: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(120);
    let dest = args.next().unwrap_or_else(|| "sydney".into());
    let destination = GroundStation::named(&dest)
        .ok_or_else(|| Error::Validation(format!("unknown city '{dest}'")))?;

    let c = generate(&WalkerParams::starlink_p1v3())?;
    let cfg = SweepConfig {
        source: GroundStation::named("toronto").expect("built-in city").point(),
        destination: destination.point(),
        lisl_ranges_km: vec![1575.0, 1731.0, 2000.0, 3000.0, 4000.0, 5016.0],
        slot_count: slots,
        slot_seconds: 1.0,
        min_elevation_deg: 25.0,
        node_delay_ms: DEFAULT_NODE_DELAY_MS,
        link_budget: LinkBudgetParams::default(),
        weather: WeatherProfile::thin_cirrus(),
    };
    let result = sweep(&c, &cfg)?;

    println!("Toronto -> {dest}, {slots} slots");
    println!("{:>8} {:>12} {:>12} {:>12}", "range", "T_net (ms)", "P_avg (mW)", "unreachable");
    for p in &result.curve.points {
        let show = |v: Option<f64>| v.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        println!(
            "{:>8} {:>12} {:>12} {:>12}",
            p.lisl_range_km,
            show(p.mean_t_net_ms),
            show(p.mean_p_avg_mw),
            p.unreachable_slots
        );
    }
    match find_intersection(&result.curve) {
        Ok(i) => println!(
            "normalized curves cross at {:.0} km: {:.1} ms, {:.1} mW",
            i.lisl_range_km, i.t_net_ms, i.p_avg_mw
        ),
        Err(Error::NoCrossing) => println!("normalized curves do not cross"),
        Err(e) => return Err(e),
    }
    Ok(())
}
