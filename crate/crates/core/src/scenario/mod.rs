//! Scenario files: loading, defaulting and validation.
//!
//! A scenario is a JSON object. Only `constellation`, `gs_source` and
//! `gs_destination` are required; everything else falls back to the defaults
//! of the chosen constellation. Unknown keys are rejected. The three
//! polymorphic fields (`constellation`, the two ground stations, and the
//! weather entries) accept either a preset name or an explicit object.
//!
//! ```
//! let s = fsosn::scenario::parse_scenario(
//!     r#"{"constellation":"kuiper-shell2","gs_source":"toronto","gs_destination":"london"}"#,
//! ).unwrap();
//! assert_eq!(s.min_elevation_deg, 35.0);
//! assert_eq!(s.slot_count, 6000);
//! ```

mod export;
mod run;

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constellation::WalkerParams;
use crate::error::{Error, Result};
use crate::geo::{max_lisl_range, GeoPoint};
use crate::link_budget::{LinkBudgetParams, WeatherProfile};
use crate::metrics::DEFAULT_NODE_DELAY_MS;
use crate::turbulence::TurbulenceParams;

pub use export::{export, format_g, slots_file_name};
pub use run::{run, scenario_digest, OutageCurve, RunResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SLOT_COUNT: usize = 6000;
pub const DEFAULT_GAMMA_TH_DB: f64 = 7.0;

/// Built-in ground stations: (name, latitude, longitude), all at 0.1 km.
pub const GAZETTEER: [(&str, f64, f64); 4] = [
    ("toronto", 43.65, -79.38),
    ("sydney", -33.87, 151.21),
    ("istanbul", 41.01, 28.98),
    ("london", 51.51, -0.13),
];
pub const GAZETTEER_ALTITUDE_KM: f64 = 0.1;

/// Laser range grid used by default for each preset shell.
pub fn default_ranges(preset: &str) -> Option<Vec<f64>> {
    match preset {
        "starlink-p1v3" => Some(vec![1575.0, 1731.0, 2000.0, 3000.0, 4000.0, 5016.0]),
        "kuiper-shell2" => Some(vec![1515.0, 2000.0, 3000.0, 4000.0, 5339.0]),
        _ => None,
    }
}

/// Minimum ground-station elevation used by default for each preset shell.
pub fn default_min_elevation(preset: &str) -> Option<f64> {
    match preset {
        "starlink-p1v3" => Some(25.0),
        "kuiper-shell2" => Some(35.0),
        _ => None,
    }
}

/// Minimum elevation for shells that are not presets.
pub const CUSTOM_MIN_ELEVATION_DEG: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub latitude: f64,
    pub longitude: f64,
    pub altitude_km: f64,
}

impl GroundStation {
    pub fn named(name: &str) -> Option<Self> {
        GAZETTEER
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|&(n, latitude, longitude)| GroundStation {
                name: Some(n.to_string()),
                latitude,
                longitude,
                altitude_km: GAZETTEER_ALTITUDE_KM,
            })
    }

    pub fn point(&self) -> GeoPoint {
        GeoPoint {
            latitude: self.latitude,
            longitude: self.longitude,
            altitude_km: self.altitude_km,
        }
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("({}, {})", self.latitude, self.longitude))
    }
}

/// A fully defaulted scenario.
///
/// Serializing it yields a scenario file that loads back to an identical value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub schema_version: u32,
    pub constellation: WalkerParams,
    pub gs_source: GroundStation,
    pub gs_destination: GroundStation,
    pub lisl_ranges_km: Vec<f64>,
    pub weather: WeatherProfile,
    pub link_budget: LinkBudgetParams,
    pub t_node_ms: f64,
    pub slot_count: usize,
    pub slot_seconds: f64,
    pub min_elevation_deg: f64,
    pub turbulence: TurbulenceParams,
    pub op_snr_grid_db: Vec<f64>,
    pub gamma_th_db: f64,
    pub op_weathers: Vec<WeatherProfile>,
}

/// On-disk form before defaults are applied.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: Option<u32>,
    constellation: Value,
    gs_source: Value,
    gs_destination: Value,
    lisl_ranges_km: Option<Vec<f64>>,
    weather: Option<Value>,
    link_budget: Option<LinkBudgetParams>,
    t_node_ms: Option<f64>,
    slot_count: Option<usize>,
    slot_seconds: Option<f64>,
    min_elevation_deg: Option<f64>,
    turbulence: Option<TurbulenceParams>,
    op_snr_grid_db: Option<Vec<f64>>,
    gamma_th_db: Option<f64>,
    op_weathers: Option<Vec<Value>>,
}

fn field_error(field: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{field}: {e}"))
}

fn resolve_constellation(v: Value) -> Result<WalkerParams> {
    match v {
        Value::String(name) => WalkerParams::preset(&name).ok_or_else(|| {
            Error::Parse(format!(
                "constellation: unknown preset '{name}' (known: starlink-p1v3, kuiper-shell2)"
            ))
        }),
        Value::Object(_) => serde_json::from_value(v).map_err(|e| field_error("constellation", e)),
        other => Err(Error::Parse(format!(
            "constellation: expected a preset name or an object, found {other}"
        ))),
    }
}

fn resolve_station(field: &str, v: Value) -> Result<GroundStation> {
    match v {
        Value::String(name) => GroundStation::named(&name).ok_or_else(|| {
            let known: Vec<&str> = GAZETTEER.iter().map(|g| g.0).collect();
            Error::Parse(format!("{field}: unknown city '{name}' (known: {})", known.join(", ")))
        }),
        Value::Object(_) => serde_json::from_value(v).map_err(|e| field_error(field, e)),
        other => Err(Error::Parse(format!(
            "{field}: expected a city name or an object, found {other}"
        ))),
    }
}

fn resolve_weather(field: &str, v: Value) -> Result<WeatherProfile> {
    match v {
        Value::String(name) => WeatherProfile::preset(&name).ok_or_else(|| {
            Error::Parse(format!(
                "{field}: unknown weather '{name}' (known: {})",
                WeatherProfile::PRESETS.join(", ")
            ))
        }),
        Value::Object(_) => serde_json::from_value(v).map_err(|e| field_error(field, e)),
        other => Err(Error::Parse(format!(
            "{field}: expected a weather preset name or an object, found {other}"
        ))),
    }
}

/// The preset a shell corresponds to, if its parameters match one exactly.
pub fn matching_preset(params: &WalkerParams) -> Option<&'static str> {
    ["starlink-p1v3", "kuiper-shell2"]
        .into_iter()
        .find(|name| WalkerParams::preset(name).as_ref() == Some(params))
}

/// Default outage SNR grid: 0 to 60 dB in 1 dB steps.
pub fn default_snr_grid() -> Vec<f64> {
    (0..=60).map(f64::from).collect()
}

/// Parses and defaults a scenario from JSON text, then validates it.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    if text.trim().is_empty() {
        return Err(Error::Parse("scenario file is empty".into()));
    }
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let schema_version = raw.schema_version.unwrap_or(SCHEMA_VERSION);
    if schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "schema_version {schema_version} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    let constellation = resolve_constellation(raw.constellation)?;
    let preset = matching_preset(&constellation);
    let gs_source = resolve_station("gs_source", raw.gs_source)?;
    let gs_destination = resolve_station("gs_destination", raw.gs_destination)?;

    let lisl_ranges_km = match raw.lisl_ranges_km {
        Some(r) => r,
        None => match preset.and_then(default_ranges) {
            Some(r) => r,
            // the largest range the geometry allows, rounded down to whole km
            None => vec![max_lisl_range(constellation.altitude_km)
                .map_err(|e| Error::Validation(format!("constellation: {e}")))?
                .floor()],
        },
    };
    let weather = match raw.weather {
        Some(v) => resolve_weather("weather", v)?,
        None => WeatherProfile::thin_cirrus(),
    };
    let link_budget = raw.link_budget.unwrap_or_default();
    let turbulence = raw.turbulence.unwrap_or_else(|| TurbulenceParams {
        sat_altitude_m: constellation.altitude_km * 1e3,
        wavelength_nm: link_budget.wavelength_nm,
        ..TurbulenceParams::default()
    });
    let op_weathers = match raw.op_weathers {
        Some(list) => list
            .into_iter()
            .enumerate()
            .map(|(i, v)| resolve_weather(&format!("op_weathers[{i}]"), v))
            .collect::<Result<Vec<_>>>()?,
        None => WeatherProfile::PRESETS
            .iter()
            .map(|n| WeatherProfile::preset(n).expect("preset exists"))
            .collect(),
    };

    let s = Scenario {
        schema_version,
        min_elevation_deg: raw
            .min_elevation_deg
            .or_else(|| preset.and_then(default_min_elevation))
            .unwrap_or(CUSTOM_MIN_ELEVATION_DEG),
        constellation,
        gs_source,
        gs_destination,
        lisl_ranges_km,
        weather,
        link_budget,
        t_node_ms: raw.t_node_ms.unwrap_or(DEFAULT_NODE_DELAY_MS),
        slot_count: raw.slot_count.unwrap_or(DEFAULT_SLOT_COUNT),
        slot_seconds: raw.slot_seconds.unwrap_or(1.0),
        turbulence,
        op_snr_grid_db: raw.op_snr_grid_db.unwrap_or_else(default_snr_grid),
        gamma_th_db: raw.gamma_th_db.unwrap_or(DEFAULT_GAMMA_TH_DB),
        op_weathers,
    };
    validate(&s)?;
    Ok(s)
}

/// Reads, defaults and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

fn invalid(msg: String) -> Error {
    Error::Validation(msg)
}

/// Checks every scenario invariant, naming the first one violated.
pub fn validate(s: &Scenario) -> Result<()> {
    s.constellation
        .validate()
        .map_err(|e| invalid(format!("constellation: {e}")))?;
    for (field, gs) in [("gs_source", &s.gs_source), ("gs_destination", &s.gs_destination)] {
        gs.point().validate().map_err(|e| invalid(format!("{field}: {e}")))?;
        if gs.altitude_km >= s.constellation.altitude_km {
            return Err(invalid(format!("{field}: altitude must be below the satellites")));
        }
    }
    let limit = max_lisl_range(s.constellation.altitude_km).map_err(|e| invalid(format!("constellation: {e}")))?;
    if s.lisl_ranges_km.is_empty() {
        return Err(invalid("lisl_ranges_km must not be empty".into()));
    }
    for &r in &s.lisl_ranges_km {
        if !(r > 0.0) || !r.is_finite() {
            return Err(invalid(format!("lisl_ranges_km: {r} must be positive")));
        }
        if r > limit {
            return Err(invalid(format!(
                "lisl_ranges_km: {r} km exceeds the maximum laser range {limit:.1} km at {} km altitude",
                s.constellation.altitude_km
            )));
        }
    }
    if s.lisl_ranges_km.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("lisl_ranges_km must be strictly ascending".into()));
    }
    s.weather.validate()?;
    for w in &s.op_weathers {
        w.validate()?;
    }
    s.link_budget.validate()?;
    s.turbulence.validate()?;
    if s.slot_count < 1 {
        return Err(invalid("slot_count must be at least 1".into()));
    }
    if !(s.slot_seconds > 0.0) || !s.slot_seconds.is_finite() {
        return Err(invalid(format!("slot_seconds {} must be positive", s.slot_seconds)));
    }
    if !(s.t_node_ms >= 0.0) || !s.t_node_ms.is_finite() {
        return Err(invalid(format!("t_node_ms {} must be >= 0", s.t_node_ms)));
    }
    if !(s.min_elevation_deg > 0.0 && s.min_elevation_deg <= 90.0) {
        return Err(invalid(format!(
            "min_elevation_deg {} must lie in (0, 90]",
            s.min_elevation_deg
        )));
    }
    if s.op_snr_grid_db.is_empty() || s.op_snr_grid_db.iter().any(|x| !x.is_finite()) {
        return Err(invalid("op_snr_grid_db must be a non-empty list of finite values".into()));
    }
    if !s.gamma_th_db.is_finite() {
        return Err(invalid("gamma_th_db must be finite".into()));
    }
    Ok(())
}

/// Human-readable listing of every built-in preset.
pub fn presets_listing() -> String {
    let mut out = String::from("constellations:\n");
    for name in ["starlink-p1v3", "kuiper-shell2"] {
        let p = WalkerParams::preset(name).expect("preset exists");
        out.push_str(&format!(
            "  {name:<14} {}:{}/{}/{} at {} km, min elevation {} deg, ranges {:?} km\n",
            p.inclination_deg,
            p.total_sats,
            p.planes,
            p.phasing_f,
            p.altitude_km,
            default_min_elevation(name).unwrap_or(CUSTOM_MIN_ELEVATION_DEG),
            default_ranges(name).unwrap_or_default(),
        ));
    }
    out.push_str("weather:\n");
    for name in WeatherProfile::PRESETS {
        let w = WeatherProfile::preset(name).expect("preset exists");
        out.push_str(&format!(
            "  {name:<14} N = {} cm^-3, L_W = {} g/m^3\n",
            w.cloud_concentration_cm3, w.liquid_water_g_m3
        ));
    }
    out.push_str("ground stations:\n");
    for (name, lat, lon) in GAZETTEER {
        out.push_str(&format!("  {name:<14} {lat}, {lon}, {GAZETTEER_ALTITUDE_KM} km\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"constellation":"starlink-p1v3","gs_source":"toronto","gs_destination":"sydney"}"#;

    #[test]
    fn minimal_starlink_defaults() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.slot_count, 6000);
        assert_eq!(s.lisl_ranges_km, vec![1575.0, 1731.0, 2000.0, 3000.0, 4000.0, 5016.0]);
        assert_eq!(s.min_elevation_deg, 25.0);
        assert_eq!(s.link_budget, LinkBudgetParams::default());
        assert_eq!(s.weather.name, "thin-cirrus");
        assert_eq!(s.gamma_th_db, 7.0);
        assert_eq!(s.t_node_ms, 10.0);
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_scenario(""), Err(Error::Parse(_))));
        assert!(matches!(parse_scenario("{}"), Err(Error::Parse(_))));
        let unknown = r#"{"constellation":"starlink-p1v3","gs_source":"toronto","gs_destination":"sydney","bogus":1}"#;
        assert!(matches!(parse_scenario(unknown), Err(Error::Parse(_))));
        let far = r#"{"constellation":"starlink-p1v3","gs_source":"toronto","gs_destination":"sydney","lisl_ranges_km":[6000]}"#;
        let e = parse_scenario(far).unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "{e}");
        assert!(e.to_string().contains("6000"));
        let city = r#"{"constellation":"starlink-p1v3","gs_source":"paris","gs_destination":"sydney"}"#;
        assert!(parse_scenario(city).unwrap_err().to_string().contains("paris"));
    }

    #[test]
    fn round_trip() {
        let s = parse_scenario(MINIMAL).unwrap();
        let text = serde_json::to_string_pretty(&s).unwrap();
        assert_eq!(parse_scenario(&text).unwrap(), s);
    }

    #[test]
    fn custom_shell_defaults() {
        let text = r#"{"constellation":{"inclination_deg":60,"total_sats":40,"planes":5,"phasing_f":1,"altitude_km":1000},
            "gs_source":{"latitude":0,"longitude":0,"altitude_km":0},"gs_destination":"london"}"#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.min_elevation_deg, CUSTOM_MIN_ELEVATION_DEG);
        assert_eq!(s.lisl_ranges_km.len(), 1);
        assert_eq!(s.turbulence.sat_altitude_m, 1e6);
    }
}
