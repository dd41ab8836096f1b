//! Turbulence-induced fading and outage probability of ground links.
//!
//! Prints the exponentiated-Weibull parameters for both Rytov readings and the
//! lowest SNR at which each weather/direction reaches an outage of 1e-8.
//!
//! Run with `cargo run --release --example outage_curves`.

use fsosn::link_budget::{Direction, WeatherProfile};
use fsosn::turbulence::{
    cn2, fading_from_turbulence, link_attenuation, op_curve, snr_grid, RytovConvention, TurbulenceParams,
};

const GAMMA_TH_DB: f64 = 7.0;
const TARGET: f64 = 1e-8;

fn main() -> fsosn::Result<()> {
    let base = TurbulenceParams::default();
    println!("refractive-index structure profile");
    for h in [100.0, 1e3, 5e3, 10e3, 20e3] {
        println!("  h = {h:>7.0} m  Cn2 = {:.3e}", cn2(h, base.wind_speed_m_s, base.ground_cn2));
    }

    let grid = snr_grid(0.0, 60.0, 1.0)?;
    for convention in [RytovConvention::Verbatim, RytovConvention::Standard] {
        let p = TurbulenceParams { convention, ..base.clone() };
        let f = fading_from_turbulence(&p)?;
        println!(
            "{convention:?}: rytov {:.4e}, sigma_I {:.4}, alpha {:.4}, beta {:.4}, eta {:.4} ({:?})",
            f.rytov.unwrap_or(f64::NAN),
            f.scintillation_index,
            f.alpha,
            f.beta,
            f.eta,
            f.normalization
        );
        for w in WeatherProfile::PRESETS.iter().filter_map(|n| WeatherProfile::preset(n)) {
            for dir in [Direction::Up, Direction::Down] {
                let la = link_attenuation(&p, dir, &w)?;
                let curve = op_curve(&grid, GAMMA_TH_DB, &f, la);
                let reach = curve
                    .iter()
                    .find(|pt| pt.p_out < TARGET)
                    .map(|pt| format!("{} dB", pt.snr_db))
                    .unwrap_or_else(|| "not reached".into());
                let at30 = curve.iter().find(|pt| pt.snr_db == 30.0).map(|pt| pt.p_out).unwrap_or(f64::NAN);
                println!(
                    "  {:<12} {:<4} L_a {la:.4}  P_out(30 dB) {at30:.3e}  P_out < 1e-8 from {reach}",
                    w.name,
                    dir.as_str()
                );
            }
        }
    }
    Ok(())
}
