//! End-to-end scenario: parse a JSON description, run it and write the result files.
//!
//! Run with `cargo run --release --example scenario_run [out-dir]`.

use fsosn::scenario::{export, parse_scenario, run};

const SCENARIO: &str = r#"{
    "constellation": "kuiper-shell2",
    "gs_source": "toronto",
    "gs_destination": "istanbul",
    "slot_count": 60,
    "weather": "thin-cirrus",
    "op_snr_grid_db": [0, 10, 20, 30, 40, 50, 60]
}"#;

fn main() -> fsosn::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "scenario_out".into());
    let scenario = parse_scenario(SCENARIO)?;
    println!(
        "{} slots, ranges {:?} km, minimum elevation {} deg",
        scenario.slot_count, scenario.lisl_ranges_km, scenario.min_elevation_deg
    );
    let result = run(&scenario)?;
    println!("scenario digest {}", result.digest);
    match result.intersection {
        Some(i) => println!("curves cross at {:.0} km", i.lisl_range_km),
        None => println!("curves do not cross"),
    }
    for path in export(&result, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
