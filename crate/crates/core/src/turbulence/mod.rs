//! Turbulence-induced fading for ground links.
//!
//! The chain is: Hufnagel–Valley C_n² profile → Rytov variance (slant-path
//! integral) → scintillation index → exponentiated-Weibull (EW) shape and
//! scale parameters → outage probability of an IM/DD link whose SNR scales as
//! `γ̄·(L_a·I)²`.
//!
//! Two readings of the Rytov quantity are supported through
//! [`RytovConvention`]. `Verbatim` treats the slant-path integral as σ_R and
//! applies the scintillation expression exactly as written; `Standard` treats
//! the integral as σ_R² and uses the usual plane-wave σ_I² expression.

pub mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::link_budget::{atmospheric_loss, Direction, WeatherProfile};
use quadrature::adaptive_simpson_pieces;

/// Terms at or below this magnitude end the g(α, β) series.
const SERIES_TOLERANCE: f64 = 1e-12;
/// Hard cap on g(α, β) series terms before falling back to quadrature.
const SERIES_MAX_TERMS: usize = 1_000_000;
/// Upper cutoff in u = (I/η)^β; e^(−80) is far below double precision of the integral.
const U_CUTOFF: f64 = 80.0;
/// Absolute tolerance used on normalized (order-one) integrands.
const QUAD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RytovConvention {
    /// The integral is σ_R and the scintillation index is evaluated as printed.
    #[default]
    Verbatim,
    /// The integral is σ_R², and σ_I² follows the plane-wave expression.
    Standard,
}

/// Slant-path turbulence description for one ground station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TurbulenceParams {
    /// r.m.s. ground wind speed v_r (m/s).
    pub wind_speed_m_s: f64,
    /// Nominal ground refractive-index structure constant C_0 (m^(−2/3)).
    pub ground_cn2: f64,
    pub zenith_deg: f64,
    pub gs_altitude_m: f64,
    pub sat_altitude_m: f64,
    pub wavelength_nm: f64,
    pub convention: RytovConvention,
}

impl Default for TurbulenceParams {
    fn default() -> Self {
        Self {
            wind_speed_m_s: 21.0,
            ground_cn2: 1.7e-14,
            zenith_deg: 60.0,
            gs_altitude_m: 100.0,
            sat_altitude_m: 550e3,
            wavelength_nm: 1550.0,
            convention: RytovConvention::Verbatim,
        }
    }
}

impl TurbulenceParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=85.0).contains(&self.zenith_deg) {
            return Err(Error::Validation(format!(
                "turbulence.zenith_deg = {} must lie in [0, 85]",
                self.zenith_deg
            )));
        }
        if !(self.gs_altitude_m >= 0.0) {
            return Err(Error::Validation(format!(
                "turbulence.gs_altitude_m = {} must be >= 0",
                self.gs_altitude_m
            )));
        }
        if !(self.sat_altitude_m > self.gs_altitude_m) || !self.sat_altitude_m.is_finite() {
            return Err(Error::Validation(format!(
                "turbulence.sat_altitude_m = {} must exceed gs_altitude_m = {}",
                self.sat_altitude_m, self.gs_altitude_m
            )));
        }
        for (name, v) in [
            ("wind_speed_m_s", self.wind_speed_m_s),
            ("ground_cn2", self.ground_cn2),
            ("wavelength_nm", self.wavelength_nm),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("turbulence.{name} = {v} must be >= 0")));
            }
        }
        if self.wavelength_nm == 0.0 {
            return Err(Error::Validation("turbulence.wavelength_nm must be positive".into()));
        }
        Ok(())
    }

    /// Elevation angle of the ground station (degrees), 90° − ζ.
    pub fn elevation_deg(&self) -> f64 {
        90.0 - self.zenith_deg
    }

    /// Optical wave number k = 2π/λ (1/m).
    pub fn wave_number(&self) -> f64 {
        2.0 * PI / (self.wavelength_nm * 1e-9)
    }
}

/// Exponentiated-Weibull fading parameters, normalized so that E[I] = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwFadingParams {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    /// Scintillation index that produced α and β.
    pub scintillation_index: f64,
    /// Rytov quantity (as defined by the convention in use), when known.
    pub rytov: Option<f64>,
    /// Whether g(α, β) came from the series or from the quadrature fallback.
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Series,
    Quadrature,
}

/// Hufnagel–Valley refractive-index structure constant at height `h_m` (m^(−2/3)).
pub fn cn2(h_m: f64, wind_speed_m_s: f64, ground_cn2: f64) -> f64 {
    let h = h_m;
    8.148e-56 * wind_speed_m_s * wind_speed_m_s * h.powi(10) * (-h / 1000.0).exp()
        + 2.7e-16 * (-h / 1500.0).exp()
        + ground_cn2 * (-h / 100.0).exp()
}

/// Slant-path Rytov quantity 2.25·k^(7/6)·sec^(11/6)(ζ)·∫ C_n²(h)(h − h_E)^(5/6) dh.
///
/// The integral runs in metres from `gs_altitude_m` to `sat_altitude_m`. With
/// x = h − h_E = t⁶ the integrand becomes 6·t¹⁰·C_n²(h_E + t⁶), which removes
/// the cusp at the lower limit; the adaptive rule then works on the integrand
/// divided by a coarse estimate so that the tolerance is relative.
pub fn rytov_variance(p: &TurbulenceParams) -> Result<f64> {
    p.validate()?;
    let span = p.sat_altitude_m - p.gs_altitude_m;
    let h_e = p.gs_altitude_m;
    let integrand = |t: f64| {
        let t2 = t * t;
        let t5 = t2 * t2 * t;
        6.0 * t5 * t5 * cn2(h_e + t5 * t, p.wind_speed_m_s, p.ground_cn2)
    };

    // Breakpoints at the ground layer, boundary layer, tropopause and stratosphere scales.
    let mut breaks = vec![0.0];
    for x in [300.0, 3_000.0, 10_000.0, 30_000.0] {
        if x < span {
            breaks.push(f64::powf(x, 1.0 / 6.0));
        }
    }
    breaks.push(span.powf(1.0 / 6.0));

    let scale = coarse_simpson(&integrand, &breaks, 64);
    let integral = if scale > 0.0 {
        scale * adaptive_simpson_pieces(|t| integrand(t) / scale, &breaks, QUAD_TOLERANCE)?
    } else {
        0.0
    };

    let sec = 1.0 / p.zenith_deg.to_radians().cos();
    Ok(2.25 * p.wave_number().powf(7.0 / 6.0) * sec.powf(11.0 / 6.0) * integral)
}

fn coarse_simpson<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], panels: usize) -> f64 {
    breaks
        .windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / panels as f64;
            let mut s = f(w[0]) + f(w[1]);
            for i in 1..panels {
                let x = w[0] + h * i as f64;
                s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
            }
            s * h / 3.0
        })
        .sum()
}

/// σ_I = exp(0.49σ_R²/(1+1.11σ_R^2.4)^(7/6) + 0.51σ_R/(1+0.69σ_R^2.4)^(5/6)) − 1.
pub fn scintillation_index(sigma_r: f64) -> f64 {
    let s24 = sigma_r.powf(2.4);
    let a = 0.49 * sigma_r * sigma_r / (1.0 + 1.11 * s24).powf(7.0 / 6.0);
    let b = 0.51 * sigma_r / (1.0 + 0.69 * s24).powf(5.0 / 6.0);
    (a + b).exp_m1()
}

/// Plane-wave σ_I² from a Rytov variance σ_R².
pub fn standard_scintillation_variance(rytov_variance: f64) -> f64 {
    let s2 = rytov_variance;
    let s125 = s2.powf(1.2);
    let a = 0.49 * s2 / (1.0 + 1.11 * s125).powf(7.0 / 6.0);
    let b = 0.51 * s2 / (1.0 + 0.69 * s125).powf(5.0 / 6.0);
    (a + b).exp_m1()
}

/// EW shape parameters α and β from the scintillation index.
pub fn ew_shape(sigma_i: f64) -> Result<(f64, f64)> {
    if !(sigma_i > 0.0) || !sigma_i.is_finite() {
        return Err(Error::Fading(format!("scintillation index {sigma_i} must be positive")));
    }
    let arg = 2.487 * sigma_i.cbrt() - 0.104;
    if arg <= 0.0 {
        return Err(Error::Fading(format!(
            "scintillation index {sigma_i} puts the gamma argument at {arg} (<= 0)"
        )));
    }
    let alpha = 7.220 * sigma_i.powf(2.0 / 3.0) / gamma(arg);
    let beta = 1.012 * (alpha * sigma_i * sigma_i).powf(-0.52) + 0.142;
    if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(Error::Fading(format!("non-positive shape parameters α={alpha}, β={beta}")));
    }
    Ok((alpha, beta))
}

/// g(α, β) by its series Σ c_i/(i+1)^(1+1/β) with c_i = Π_{k≤i} (k − α)/k.
///
/// Returns `None` if the series has not settled within the term cap.
pub fn ew_mean_series(alpha: f64, beta: f64) -> Option<f64> {
    let p = 1.0 + 1.0 / beta;
    let mut c = 1.0_f64;
    let mut sum = 1.0_f64;
    for i in 1..SERIES_MAX_TERMS {
        let fi = i as f64;
        c *= (fi - alpha) / fi;
        let term = c / (fi + 1.0).powf(p);
        sum += term;
        if !sum.is_finite() {
            return None;
        }
        if term.abs() < SERIES_TOLERANCE && fi > alpha {
            return Some(sum);
        }
    }
    None
}

/// g(α, β) by quadrature of ∫ u^(1/β) e^(−u) (1 − e^(−u))^(α−1) du / Γ(1 + 1/β).
///
/// The substitution u = s^q with integer q ≥ 3/(α + 1/β) makes the integrand
/// vanish like s² or faster at the origin, so Simpson's rule converges there.
pub fn ew_mean_quadrature(alpha: f64, beta: f64) -> Result<f64> {
    let inv_beta = 1.0 / beta;
    let lead = alpha + inv_beta;
    let q = (3.0 / lead).ceil().max(1.0);
    let s_max = U_CUTOFF.powf(1.0 / q);
    let f = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let u = s.powf(q);
        let body = u.powf(inv_beta) * (-u).exp() * (-(-u).exp_m1()).powf(alpha - 1.0);
        q * s.powf(q - 1.0) * body
    };
    let v = adaptive_simpson_pieces(f, &[0.0, 0.5 * s_max.min(1.0), s_max.min(1.0), s_max], QUAD_TOLERANCE)?;
    Ok(v / gamma(1.0 + inv_beta))
}

/// Full EW parameter set for a scintillation index, normalized to unit mean.
pub fn ew_params(sigma_i: f64) -> Result<EwFadingParams> {
    let (alpha, beta) = ew_shape(sigma_i)?;
    let (g, normalization) = match ew_mean_series(alpha, beta) {
        Some(g) if g > 0.0 => (g, Normalization::Series),
        _ => (ew_mean_quadrature(alpha, beta)?, Normalization::Quadrature),
    };
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::Fading(format!("g(α, β) = {g} is not positive")));
    }
    let eta = 1.0 / (alpha * gamma(1.0 + 1.0 / beta) * g);
    Ok(EwFadingParams {
        alpha,
        beta,
        eta,
        scintillation_index: sigma_i,
        rytov: None,
        normalization,
    })
}

/// EW fading parameters for a slant path, following the configured convention.
pub fn fading_from_turbulence(p: &TurbulenceParams) -> Result<EwFadingParams> {
    let rytov = rytov_variance(p)?;
    let sigma_i = match p.convention {
        RytovConvention::Verbatim => scintillation_index(rytov),
        RytovConvention::Standard => standard_scintillation_variance(rytov).sqrt(),
    };
    let mut ew = ew_params(sigma_i)?;
    ew.rytov = Some(rytov);
    Ok(ew)
}

/// EW probability density at irradiance `i`.
pub fn ew_pdf(i: f64, p: &EwFadingParams) -> f64 {
    let EwFadingParams { alpha, beta, eta, .. } = *p;
    if i < 0.0 {
        return 0.0;
    }
    if i == 0.0 {
        let e = alpha * beta - 1.0;
        return if e > 0.0 {
            0.0
        } else if e == 0.0 {
            alpha * beta / eta
        } else {
            f64::INFINITY
        };
    }
    let x = (i / eta).powf(beta);
    (alpha * beta / eta)
        * (i / eta).powf(beta - 1.0)
        * (-x).exp()
        * (-(-x).exp_m1()).powf(alpha - 1.0)
}

/// EW cumulative distribution (1 − exp(−(I/η)^β))^α.
pub fn ew_cdf(i: f64, p: &EwFadingParams) -> f64 {
    if i <= 0.0 {
        return 0.0;
    }
    if i.is_infinite() {
        return 1.0;
    }
    let x = (i / p.eta).powf(p.beta);
    (-(-x).exp_m1()).powf(p.alpha)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Outage probability P(γ < γ_th) for average SNR `gamma_bar_db` and atmospheric
/// transmittance `attenuation` (L_a). A fully blocked link (L_a = 0) is always out.
pub fn outage_probability(gamma_bar_db: f64, gamma_th_db: f64, p: &EwFadingParams, attenuation: f64) -> f64 {
    if !(attenuation > 0.0) {
        return 1.0;
    }
    let gamma_bar = db_to_linear(gamma_bar_db);
    let gamma_th = db_to_linear(gamma_th_db);
    let scaled = p.eta * attenuation;
    let x = (gamma_th / (gamma_bar * scaled * scaled)).powf(p.beta / 2.0);
    if x.is_infinite() {
        return 1.0;
    }
    (-(-x).exp_m1()).powf(p.alpha)
}

/// One point of an outage curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutagePoint {
    pub snr_db: f64,
    pub p_out: f64,
}

/// Outage probability over an SNR grid.
pub fn op_curve(snr_grid_db: &[f64], gamma_th_db: f64, p: &EwFadingParams, attenuation: f64) -> Vec<OutagePoint> {
    snr_grid_db
        .iter()
        .map(|&snr_db| OutagePoint {
            snr_db,
            p_out: outage_probability(snr_db, gamma_th_db, p, attenuation),
        })
        .collect()
}

/// Atmospheric transmittance L_a seen by a ground link at the turbulence geometry.
pub fn link_attenuation(p: &TurbulenceParams, direction: Direction, w: &WeatherProfile) -> Result<f64> {
    atmospheric_loss(
        direction,
        p.elevation_deg(),
        p.gs_altitude_m / 1000.0,
        w,
        p.wavelength_nm,
    )
}

/// Evenly spaced SNR grid from `start` to `stop` inclusive.
pub fn snr_grid(start_db: f64, stop_db: f64, step_db: f64) -> Result<Vec<f64>> {
    if !(step_db > 0.0) || !start_db.is_finite() || !stop_db.is_finite() || stop_db < start_db {
        return Err(Error::Validation(format!(
            "SNR grid {start_db}:{stop_db}:{step_db} needs a positive step and start <= stop"
        )));
    }
    let n = ((stop_db - start_db) / step_db + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start_db + step_db * i as f64).collect())
}

/// Numerically integrates `∫ I·f(I) dI`, the mean of the EW distribution.
pub fn ew_mean_by_quadrature(p: &EwFadingParams) -> Result<f64> {
    let g = ew_mean_quadrature(p.alpha, p.beta)?;
    Ok(p.eta * p.alpha * gamma(1.0 + 1.0 / p.beta) * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cn2_values() {
        assert_relative_eq!(cn2(0.0, 21.0, 1.7e-14), 1.727e-14, max_relative = 1e-12);
        assert!(cn2(1e6, 21.0, 1.7e-14) < 1e-30);
        let first = 8.148e-56 * 441.0 * 1e40 * (-10.0f64).exp();
        assert_relative_eq!(first, 1.631e-17, max_relative = 5e-3);
        let whole = cn2(10_000.0, 21.0, 0.0);
        assert!((whole - first - 2.7e-16 * (-10_000.0f64 / 1500.0).exp()).abs() < 1e-30);
    }

    #[test]
    fn rytov_grows_with_zenith() {
        let mut p = TurbulenceParams {
            zenith_deg: 0.0,
            gs_altitude_m: 0.0,
            ..Default::default()
        };
        let r0 = rytov_variance(&p).unwrap();
        assert!(r0 > 0.0 && r0.is_finite());
        p.zenith_deg = 60.0;
        assert!(rytov_variance(&p).unwrap() > r0);
        p.zenith_deg = 86.0;
        assert!(rytov_variance(&p).is_err());
    }

    #[test]
    fn scintillation_values() {
        assert_eq!(scintillation_index(0.0), 0.0);
        assert!((scintillation_index(1.0) - 0.708).abs() < 1e-2);
        // rises to a single maximum near σ_R = 1.267, then decays
        let mut prev = -1.0;
        for i in 0..=1260 {
            let v = scintillation_index(i as f64 * 0.001);
            assert!(v > prev);
            prev = v;
        }
        prev = scintillation_index(1.27);
        for i in 1271..=10_000 {
            let v = scintillation_index(i as f64 * 0.001);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn shape_rejects_gamma_pole() {
        assert!(ew_shape(1e-5).is_err());
        assert!(ew_shape(0.0).is_err());
        assert!(ew_shape(0.5).is_ok());
    }

    #[test]
    fn integer_alpha_series_terminates() {
        // With α = 1 only the first term survives: g = 1.
        assert_relative_eq!(ew_mean_series(1.0, 2.0).unwrap(), 1.0);
        // α = 2: g = 1 − 1/2^(1+1/β).
        assert_relative_eq!(ew_mean_series(2.0, 1.0).unwrap(), 0.75, max_relative = 1e-15);
    }

    #[test]
    fn series_matches_quadrature() {
        for s in [0.1, 0.5, 1.0] {
            let (a, b) = ew_shape(s).unwrap();
            let series = ew_mean_series(a, b).unwrap();
            let quad = ew_mean_quadrature(a, b).unwrap();
            assert_relative_eq!(series, quad, max_relative = 1e-6);
        }
    }

    #[test]
    fn unit_mean() {
        for s in [0.05, 0.2, 0.7, 1.5] {
            let p = ew_params(s).unwrap();
            assert!((ew_mean_by_quadrature(&p).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cdf_limits_and_weibull_reduction() {
        let p = ew_params(0.4).unwrap();
        assert_eq!(ew_cdf(0.0, &p), 0.0);
        assert_eq!(ew_cdf(f64::INFINITY, &p), 1.0);
        assert!((ew_cdf(1e3, &p) - 1.0).abs() < 1e-15);
        let w = EwFadingParams { alpha: 1.0, ..p };
        for i in [0.1, 0.5, 1.0, 2.0] {
            let expect = 1.0 - (-(i / w.eta).powf(w.beta)).exp();
            assert_relative_eq!(ew_cdf(i, &w), expect, max_relative = 1e-14);
        }
    }

    #[test]
    fn outage_edges() {
        let p = ew_params(0.4).unwrap();
        assert_eq!(outage_probability(30.0, 7.0, &p, 0.0), 1.0);
        assert!(outage_probability(300.0, 7.0, &p, 0.9) < 1e-12);
        assert!(outage_probability(-300.0, 7.0, &p, 0.9) > 1.0 - 1e-12);
        let i_th = (db_to_linear(7.0) / db_to_linear(20.0)).sqrt() / 0.8;
        assert_relative_eq!(outage_probability(20.0, 7.0, &p, 0.8), ew_cdf(i_th, &p), max_relative = 1e-12);
    }

    #[test]
    fn grid() {
        let g = snr_grid(0.0, 60.0, 0.5).unwrap();
        assert_eq!(g.len(), 121);
        assert_eq!(*g.last().unwrap(), 60.0);
        assert!(snr_grid(0.0, 1.0, 0.0).is_err());
    }
}
