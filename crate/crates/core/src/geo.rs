//! Spherical-Earth geometry shared by every other module.
//!
//! Positions are kilometres in an Earth-centred Earth-fixed frame. Angles are
//! degrees at the public boundary and radians inside.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants used throughout the simulator.
pub mod consts {
    /// Earth radius (km).
    pub const EARTH_RADIUS_KM: f64 = 6378.0;
    /// Height of the atmosphere shell that laser inter-satellite links must clear (km).
    pub const ATMOSPHERE_HEIGHT_KM: f64 = 80.0;
    /// Gravitational constant (N·m²/kg²).
    pub const GRAVITATIONAL_CONSTANT: f64 = 6.673e-11;
    /// Earth mass (kg).
    pub const EARTH_MASS_KG: f64 = 5.98e24;
    /// Speed of light (m/s).
    pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
    /// Speed of light (km/ms), convenient for link delays.
    pub const SPEED_OF_LIGHT_KM_MS: f64 = SPEED_OF_LIGHT_M_S / 1.0e6;
    /// Sidereal rotation rate of the Earth (rad/s).
    pub const EARTH_ROTATION_RAD_S: f64 = 7.292_115_9e-5;

    /// G·M_E expressed in km³/s².
    pub const fn gm_km3_s2() -> f64 {
        GRAVITATIONAL_CONSTANT * EARTH_MASS_KG * 1.0e-9
    }
}

use consts::*;

/// Cartesian position or displacement in kilometres.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn distance_squared(self, other: Vec3) -> f64 {
        (self - other).norm_squared()
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }

    /// Rotates the vector about the +z axis by `angle` radians.
    pub fn rotate_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Point on or above the spherical Earth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoPoint {
    /// Degrees, [-90, 90].
    pub latitude: f64,
    /// Degrees, [-180, 180].
    pub longitude: f64,
    pub altitude_km: f64,
}

impl GeoPoint {
    pub fn new(latitude: f64, longitude: f64, altitude_km: f64) -> Result<Self> {
        let p = Self {
            latitude,
            longitude,
            altitude_km,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-90.0..=90.0).contains(&self.latitude) {
            return Err(Error::domain(
                "latitude",
                self.latitude,
                "must lie in [-90, 90] degrees",
            ));
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            return Err(Error::domain(
                "longitude",
                self.longitude,
                "must lie in [-180, 180] degrees",
            ));
        }
        if !(self.altitude_km >= 0.0) || !self.altitude_km.is_finite() {
            return Err(Error::domain(
                "altitude_km",
                self.altitude_km,
                "must be finite and >= 0",
            ));
        }
        Ok(())
    }
}

/// Spherical conversion of a geodetic point to ECEF kilometres.
pub fn geodetic_to_ecef(p: GeoPoint) -> Vec3 {
    let radius = EARTH_RADIUS_KM + p.altitude_km;
    let (sin_lat, cos_lat) = p.latitude.to_radians().sin_cos();
    let (sin_lon, cos_lon) = p.longitude.to_radians().sin_cos();
    Vec3::new(
        radius * cos_lat * cos_lon,
        radius * cos_lat * sin_lon,
        radius * sin_lat,
    )
}

fn check_elevation(theta_deg: f64) -> Result<()> {
    if theta_deg > 0.0 && theta_deg <= 90.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "elevation angle",
            theta_deg,
            "must lie in (0, 90] degrees",
        ))
    }
}

/// Ground-station to satellite distance at elevation `theta_deg`.
///
/// `sat_altitude_km` and `gs_altitude_km` are heights above the spherical Earth.
pub fn slant_distance(theta_deg: f64, sat_altitude_km: f64, gs_altitude_km: f64) -> Result<f64> {
    check_elevation(theta_deg)?;
    if !(sat_altitude_km > gs_altitude_km) {
        return Err(Error::domain(
            "satellite altitude",
            sat_altitude_km,
            "must exceed the ground-station altitude",
        ));
    }
    let r = EARTH_RADIUS_KM + gs_altitude_km;
    let h = sat_altitude_km - gs_altitude_km;
    let (sin_t, cos_t) = theta_deg.to_radians().sin_cos();
    let ratio = (r + h) / r;
    Ok(r * ((ratio * ratio - cos_t * cos_t).sqrt() - sin_t))
}

/// Elevation of `sat` seen from `gs`, in degrees; `None` below the horizon.
pub fn elevation_angle(gs: Vec3, sat: Vec3) -> Option<f64> {
    let los = sat - gs;
    if los.norm_squared() == 0.0 || gs.norm_squared() == 0.0 {
        return None;
    }
    let up = gs.normalized();
    let along = up.dot(los);
    if along < 0.0 {
        return None;
    }
    // atan2 keeps full precision near the zenith, where asin does not
    Some(along.atan2(up.cross(los).norm()).to_degrees())
}

/// Recovers the elevation angle whose slant distance equals `distance_km` by bisection.
///
/// Tolerance is 1e-9 degrees. Errors if the distance is shorter than the zenith
/// distance or longer than the grazing (0°) distance.
pub fn elevation_from_slant_distance(
    distance_km: f64,
    sat_altitude_km: f64,
    gs_altitude_km: f64,
) -> Result<f64> {
    let zenith = slant_distance(90.0, sat_altitude_km, gs_altitude_km)?;
    // slant distance is continuous as theta -> 0+, evaluate the grazing limit directly
    let r = EARTH_RADIUS_KM + gs_altitude_km;
    let rs = EARTH_RADIUS_KM + sat_altitude_km;
    let grazing = (rs * rs - r * r).sqrt();
    if distance_km < zenith * (1.0 - 1e-12) || distance_km >= grazing {
        return Err(Error::domain(
            "slant distance",
            distance_km,
            "not reachable at any elevation in (0, 90] degrees",
        ));
    }
    // slant distance strictly decreases with elevation
    let (mut lo, mut hi) = (0.0_f64, 90.0_f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        let d = if mid > 0.0 {
            slant_distance(mid, sat_altitude_km, gs_altitude_km)?
        } else {
            grazing
        };
        if d > distance_km {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Longest line-of-sight chord between two satellites that clears the atmosphere.
pub fn max_lisl_range(sat_altitude_km: f64) -> Result<f64> {
    if sat_altitude_km < ATMOSPHERE_HEIGHT_KM {
        return Err(Error::domain(
            "satellite altitude",
            sat_altitude_km,
            "must be at least the atmosphere height (80 km)",
        ));
    }
    let rs = EARTH_RADIUS_KM + sat_altitude_km;
    let ra = EARTH_RADIUS_KM + ATMOSPHERE_HEIGHT_KM;
    Ok(2.0 * (rs * rs - ra * ra).sqrt())
}

/// Circular orbital period in seconds.
pub fn orbital_period(sat_altitude_km: f64) -> f64 {
    let a = EARTH_RADIUS_KM + sat_altitude_km;
    2.0 * std::f64::consts::PI * (a * a * a / gm_km3_s2()).sqrt()
}

/// Length of the slant path through the troposphere (km).
pub fn troposphere_path_length(theta_deg: f64, gs_altitude_km: f64, troposphere_km: f64) -> Result<f64> {
    check_elevation(theta_deg)?;
    if !(troposphere_km > gs_altitude_km) {
        return Err(Error::domain(
            "troposphere height",
            troposphere_km,
            "must exceed the ground-station altitude",
        ));
    }
    Ok((troposphere_km - gs_altitude_km) / theta_deg.to_radians().sin())
}
