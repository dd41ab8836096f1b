//! Transmission power needed for laser links under the default terminal
//! parameters and the three cloud presets.
//!
//! Run with `cargo run --example link_budget`.

use fsosn::geo::{elevation_from_slant_distance, slant_distance};
use fsosn::link_budget::{
    atmospheric_loss, lisl_transmission_power, updown_transmission_power, Direction, LinkBudgetParams, WeatherProfile,
};
use fsosn::scenario::format_g;
use fsosn::Error;

const SAT_ALTITUDE_KM: f64 = 550.0;
const GS_ALTITUDE_KM: f64 = 0.1;

fn main() -> fsosn::Result<()> {
    let lb = LinkBudgetParams::default();

    println!("laser inter-satellite links");
    for d in [500.0, 1000.0, 1575.0, 2000.0, 3000.0, 5016.0] {
        let mw = lisl_transmission_power(&lb, d)? * 1e3;
        println!("  {d:>6.0} km  {mw:>9.2} mW");
    }

    // Dense cloud drives the transmittance towards zero. Values that underflow
    // the floor block the link; the rest give absurd but finite powers.
    println!("ground links by elevation");
    for w in WeatherProfile::PRESETS.iter().filter_map(|n| WeatherProfile::preset(n)) {
        println!("  {}", w.name);
        for el in [25.0, 30.0, 45.0, 60.0, 90.0] {
            let d = slant_distance(el, SAT_ALTITUDE_KM, GS_ALTITUDE_KM)?;
            let mut row = format!("    {el:>4.0} deg ({d:>6.1} km)");
            for dir in [Direction::Up, Direction::Down] {
                let la = atmospheric_loss(dir, el, GS_ALTITUDE_KM, &w, lb.wavelength_nm)?;
                let p = match updown_transmission_power(&lb, dir, d, el, GS_ALTITUDE_KM, &w) {
                    Ok(p) => format!("{:>11} mW", format_g(p * 1e3)),
                    Err(Error::InfeasibleLink) => "   blocked".to_string(),
                    Err(e) => return Err(e),
                };
                row.push_str(&format!("  {dir:>4}: L_a {la:>9.3e} {p}"));
            }
            println!("{row}");
        }
    }

    // Distances measured as delays are converted back to elevations by inversion.
    let delay_ms = 3.23;
    let d = delay_ms * 299_792.458 / 1e3;
    let el = elevation_from_slant_distance(d, SAT_ALTITUDE_KM, GS_ALTITUDE_KM)?;
    let p = updown_transmission_power(&lb, Direction::Up, d, el, GS_ALTITUDE_KM, &WeatherProfile::thin_cirrus())?;
    println!("a {delay_ms} ms uplink is {d:.1} km at {el:.2} deg and needs {:.2} mW", p * 1e3);
    Ok(())
}
