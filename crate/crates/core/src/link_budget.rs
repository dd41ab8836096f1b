//! Optical link budget: terminal gains and pointing losses, free-space path
//! loss, Mie and geometrical-scattering attenuation, link margin and the
//! resulting transmission power for laser inter-satellite links and for
//! ground uplinks/downlinks.
//!
//! Unit discipline: wavelength is carried in nanometres and converted at each
//! call (µm for the Mie fit, metres for gains and path loss). Distances are km.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::troposphere_path_length;

/// Attenuation below this is treated as a blocked link.
pub const ATTENUATION_FLOOR: f64 = 1e-300;

/// Optical terminal constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudgetParams {
    pub wavelength_nm: f64,
    pub tx_efficiency: f64,
    pub rx_efficiency: f64,
    /// Full transmit divergence angle (rad).
    pub divergence_rad: f64,
    pub rx_diameter_mm: f64,
    pub tx_pointing_error_rad: f64,
    pub rx_pointing_error_rad: f64,
    pub sensitivity_dbm: f64,
    pub isl_margin_db: f64,
    pub updown_margin_db: f64,
    pub data_rate_gbps: f64,
}

impl Default for LinkBudgetParams {
    fn default() -> Self {
        Self {
            wavelength_nm: 1550.0,
            tx_efficiency: 0.8,
            rx_efficiency: 0.8,
            divergence_rad: 15e-6,
            rx_diameter_mm: 80.0,
            tx_pointing_error_rad: 1e-6,
            rx_pointing_error_rad: 1e-6,
            sensitivity_dbm: -35.5,
            isl_margin_db: 3.0,
            updown_margin_db: 6.0,
            data_rate_gbps: 10.0,
        }
    }
}

impl LinkBudgetParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength_nm", self.wavelength_nm),
            ("tx_efficiency", self.tx_efficiency),
            ("rx_efficiency", self.rx_efficiency),
            ("divergence_rad", self.divergence_rad),
            ("rx_diameter_mm", self.rx_diameter_mm),
            ("data_rate_gbps", self.data_rate_gbps),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("link_budget.{name} = {v} must be positive")));
            }
        }
        for (name, v) in [
            ("tx_pointing_error_rad", self.tx_pointing_error_rad),
            ("rx_pointing_error_rad", self.rx_pointing_error_rad),
        ] {
            if !(v >= 0.0) {
                return Err(Error::Validation(format!("link_budget.{name} = {v} must be >= 0")));
            }
        }
        if self.divergence_rad < self.tx_pointing_error_rad {
            return Err(Error::Validation(
                "link_budget.divergence_rad must not be below the transmit pointing error".into(),
            ));
        }
        Ok(())
    }

    /// G_T·G_R·L_T·L_R·η_T·η_R, the distance-independent part of every link.
    pub fn terminal_factor(&self) -> f64 {
        let gt = transmitter_gain(self.divergence_rad);
        let gr = receiver_gain(self.rx_diameter_mm, self.wavelength_nm);
        gt * gr
            * pointing_loss(gt, self.tx_pointing_error_rad)
            * pointing_loss(gr, self.rx_pointing_error_rad)
            * self.tx_efficiency
            * self.rx_efficiency
    }
}

/// Cloud scenario driving geometrical scattering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeatherProfile {
    pub name: String,
    /// Cloud number concentration N (cm⁻³).
    pub cloud_concentration_cm3: f64,
    /// Liquid water content L_W (g/m³).
    pub liquid_water_g_m3: f64,
    /// Kim particle-size coefficient.
    #[serde(default = "default_phi")]
    pub particle_size_coeff: f64,
    /// Troposphere height (km).
    #[serde(default = "default_troposphere")]
    pub troposphere_km: f64,
}

fn default_phi() -> f64 {
    1.6
}

fn default_troposphere() -> f64 {
    20.0
}

impl WeatherProfile {
    pub const PRESETS: [&'static str; 3] = ["thin-cirrus", "cirrus", "cumulus"];

    fn with(name: &str, n: f64, lw: f64) -> Self {
        Self {
            name: name.into(),
            cloud_concentration_cm3: n,
            liquid_water_g_m3: lw,
            particle_size_coeff: default_phi(),
            troposphere_km: default_troposphere(),
        }
    }

    pub fn thin_cirrus() -> Self {
        Self::with("thin-cirrus", 0.5, 3.128e-4)
    }

    pub fn cirrus() -> Self {
        Self::with("cirrus", 0.0255, 0.06405)
    }

    pub fn cumulus() -> Self {
        Self::with("cumulus", 250.0, 1.0)
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "thin-cirrus" => Some(Self::thin_cirrus()),
            "cirrus" => Some(Self::cirrus()),
            "cumulus" => Some(Self::cumulus()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cloud_concentration_cm3 > 0.0) || !(self.liquid_water_g_m3 > 0.0) {
            return Err(Error::Validation(format!(
                "weather '{}': cloud concentration and liquid water content must be positive",
                self.name
            )));
        }
        if !(self.troposphere_km > 0.0) {
            return Err(Error::Validation(format!(
                "weather '{}': troposphere height must be positive",
                self.name
            )));
        }
        Ok(())
    }
}

/// Ground link direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" | "uplink" => Ok(Direction::Up),
            "down" | "downlink" => Ok(Direction::Down),
            other => Err(Error::Parse(format!("unknown direction '{other}' (expected up|down)"))),
        }
    }
}

/// Which link margin applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    InterSatellite,
    Ground,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

/// G_T = 16/Θ² for full divergence angle Θ (rad).
pub fn transmitter_gain(divergence_rad: f64) -> f64 {
    16.0 / (divergence_rad * divergence_rad)
}

/// G_R = (πD/λ)².
pub fn receiver_gain(diameter_mm: f64, wavelength_nm: f64) -> f64 {
    let ratio = PI * (diameter_mm * 1e-3) / (wavelength_nm * 1e-9);
    ratio * ratio
}

/// exp(−G·θ²).
pub fn pointing_loss(gain: f64, pointing_error_rad: f64) -> f64 {
    (-gain * pointing_error_rad * pointing_error_rad).exp()
}

/// (λ/4πd)², for inter-satellite and ground links alike.
pub fn free_space_path_loss(wavelength_nm: f64, distance_km: f64) -> f64 {
    let ratio = (wavelength_nm * 1e-9) / (4.0 * PI * distance_km * 1e3);
    ratio * ratio
}

/// Empirical Mie coefficients `[a, b, c, d]` for a wavelength in µm.
pub fn mie_coefficients(wavelength_um: f64) -> [f64; 4] {
    let l = wavelength_um;
    let l2 = l * l;
    [
        -0.000545 * l2 + 0.002 * l - 0.0038,
        0.00628 * l2 - 0.0232 * l + 0.00439,
        -0.028 * l2 + 0.101 * l - 0.18,
        -0.228 * l2 * l + 0.922 * l2 - 1.26 * l + 0.719,
    ]
}

/// Mie extinction ratio ρ at ground-station height `h_km`.
pub fn mie_extinction_ratio(gs_altitude_km: f64, wavelength_um: f64) -> Result<f64> {
    if !(0.5..=2.0).contains(&wavelength_um) {
        return Err(Error::domain(
            "wavelength (um)",
            wavelength_um,
            "outside the empirical Mie fit band [0.5, 2.0]",
        ));
    }
    if !(gs_altitude_km >= 0.0) {
        return Err(Error::domain("ground-station altitude", gs_altitude_km, "must be >= 0"));
    }
    let [a, b, c, d] = mie_coefficients(wavelength_um);
    let h = gs_altitude_km;
    Ok(((a * h + b) * h + c) * h + d)
}

/// I_m = exp(−ρ / sin θ).
pub fn mie_attenuation(rho: f64, theta_deg: f64) -> Result<f64> {
    if !(theta_deg > 0.0 && theta_deg <= 90.0) {
        return Err(Error::domain("elevation angle", theta_deg, "must lie in (0, 90] degrees"));
    }
    Ok((-rho / theta_deg.to_radians().sin()).exp())
}

/// Visibility (km) from the cloud microphysics.
pub fn visibility(w: &WeatherProfile) -> f64 {
    1.002 / (w.cloud_concentration_cm3 * w.liquid_water_g_m3).powf(0.6473)
}

/// Geometrical-scattering attenuation coefficient (per km).
pub fn geometric_attenuation_coefficient(visibility_km: f64, wavelength_nm: f64, phi: f64) -> f64 {
    (3.91 / visibility_km) * (wavelength_nm / 550.0).powf(-phi)
}

/// Beer–Lambert transmittance exp(−θ_A·d_A), clamped to 0 below [`ATTENUATION_FLOOR`].
pub fn geometric_attenuation(coefficient_per_km: f64, path_km: f64) -> f64 {
    let v = (-coefficient_per_km * path_km).exp();
    if v < ATTENUATION_FLOOR {
        0.0
    } else {
        v
    }
}

/// Atmospheric transmittance of a ground link: geometrical scattering on the
/// uplink, Mie times geometrical scattering on the downlink.
pub fn atmospheric_loss(
    direction: Direction,
    theta_deg: f64,
    gs_altitude_km: f64,
    w: &WeatherProfile,
    wavelength_nm: f64,
) -> Result<f64> {
    let path = troposphere_path_length(theta_deg, gs_altitude_km, w.troposphere_km)?;
    let coeff = geometric_attenuation_coefficient(visibility(w), wavelength_nm, w.particle_size_coeff);
    let geometric = geometric_attenuation(coeff, path);
    match direction {
        Direction::Up => Ok(geometric),
        Direction::Down => {
            let rho = mie_extinction_ratio(gs_altitude_km, wavelength_nm * 1e-3)?;
            let v = mie_attenuation(rho, theta_deg)? * geometric;
            Ok(if v < ATTENUATION_FLOOR { 0.0 } else { v })
        }
    }
}

/// Required received power (W): sensitivity raised by the link margin.
pub fn received_power(params: &LinkBudgetParams, kind: LinkKind) -> f64 {
    let margin = match kind {
        LinkKind::InterSatellite => params.isl_margin_db,
        LinkKind::Ground => params.updown_margin_db,
    };
    dbm_to_watts(params.sensitivity_dbm + margin)
}

/// Transmission power (W) for a laser inter-satellite link of length `distance_km`.
pub fn lisl_transmission_power(params: &LinkBudgetParams, distance_km: f64) -> Result<f64> {
    if !(distance_km > 0.0) || !distance_km.is_finite() {
        return Err(Error::domain("link distance", distance_km, "must be positive"));
    }
    let loss = free_space_path_loss(params.wavelength_nm, distance_km);
    Ok(received_power(params, LinkKind::InterSatellite) / (params.terminal_factor() * loss))
}

/// Transmission power (W) for an uplink or downlink.
///
/// Returns [`Error::InfeasibleLink`] when the atmosphere blocks the beam entirely.
pub fn updown_transmission_power(
    params: &LinkBudgetParams,
    direction: Direction,
    distance_km: f64,
    theta_deg: f64,
    gs_altitude_km: f64,
    w: &WeatherProfile,
) -> Result<f64> {
    if !(distance_km > 0.0) || !distance_km.is_finite() {
        return Err(Error::domain("slant distance", distance_km, "must be positive"));
    }
    let atmosphere = atmospheric_loss(direction, theta_deg, gs_altitude_km, w, params.wavelength_nm)?;
    ground_power_with_attenuation(params, distance_km, atmosphere)
}

/// Ground-link power for an already computed atmospheric transmittance.
pub fn ground_power_with_attenuation(
    params: &LinkBudgetParams,
    distance_km: f64,
    atmosphere: f64,
) -> Result<f64> {
    if atmosphere <= 0.0 {
        return Err(Error::InfeasibleLink);
    }
    let loss = free_space_path_loss(params.wavelength_nm, distance_km);
    let p = received_power(params, LinkKind::Ground) / (params.terminal_factor() * atmosphere * loss);
    if p.is_finite() {
        Ok(p)
    } else {
        Err(Error::InfeasibleLink)
    }
}
