//! Walker-delta shell generation and circular two-body propagation.
//!
//! Satellite `id = plane * sats_per_plane + slot`. Plane `p` has RAAN
//! `2πp/P` and satellite `k` in it starts at argument of latitude
//! `2πk/S + 2πFp/T`. At `t = 0` the inertial and Earth-fixed frames coincide;
//! afterwards positions are rotated into ECEF by the sidereal Earth rotation.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::consts::{gm_km3_s2, EARTH_RADIUS_KM, EARTH_ROTATION_RAD_S};
use crate::geo::{orbital_period, Vec3};

/// Time step used when testing whether a pair of satellites stays in range.
pub const PERMANENCE_STRIDE_S: f64 = 60.0;

/// Walker-delta shell `i:T/P/F` at a single altitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkerParams {
    #[serde(default)]
    pub name: Option<String>,
    pub inclination_deg: f64,
    pub total_sats: u32,
    pub planes: u32,
    pub phasing_f: u32,
    pub altitude_km: f64,
}

impl WalkerParams {
    /// Starlink Phase 1 v3: 53°:1584/22/17 at 550 km.
    pub fn starlink_p1v3() -> Self {
        Self {
            name: Some("starlink-p1v3".into()),
            inclination_deg: 53.0,
            total_sats: 1584,
            planes: 22,
            phasing_f: 17,
            altitude_km: 550.0,
        }
    }

    /// Kuiper Shell 2: 42°:1296/36/11 at 610 km.
    pub fn kuiper_shell2() -> Self {
        Self {
            name: Some("kuiper-shell2".into()),
            inclination_deg: 42.0,
            total_sats: 1296,
            planes: 36,
            phasing_f: 11,
            altitude_km: 610.0,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "starlink-p1v3" => Some(Self::starlink_p1v3()),
            "kuiper-shell2" => Some(Self::kuiper_shell2()),
            _ => None,
        }
    }

    pub fn sats_per_plane(&self) -> u32 {
        self.total_sats / self.planes
    }

    pub fn validate(&self) -> Result<()> {
        if self.planes == 0 || self.total_sats == 0 {
            return Err(Error::InvalidWalker("planes and total_sats must be positive".into()));
        }
        if !self.total_sats.is_multiple_of(self.planes) {
            return Err(Error::InvalidWalker(format!(
                "total_sats {} is not divisible by planes {}",
                self.total_sats, self.planes
            )));
        }
        if self.phasing_f >= self.planes {
            return Err(Error::InvalidWalker(format!(
                "phasing_f {} must be below planes {}",
                self.phasing_f, self.planes
            )));
        }
        if !(0.0..=180.0).contains(&self.inclination_deg) {
            return Err(Error::InvalidWalker(format!(
                "inclination {} deg outside [0, 180]",
                self.inclination_deg
            )));
        }
        if !(self.altitude_km > 0.0) || !self.altitude_km.is_finite() {
            return Err(Error::InvalidWalker(format!(
                "altitude {} km must be positive",
                self.altitude_km
            )));
        }
        Ok(())
    }
}

/// Epoch elements of one satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteElements {
    pub id: u32,
    pub plane: u32,
    pub slot: u32,
    /// Right ascension of the ascending node (rad).
    pub raan_rad: f64,
    /// Argument of latitude at epoch (rad).
    pub arg_latitude_rad: f64,
}

/// An immutable generated shell.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub params: WalkerParams,
    pub satellites: Vec<SatelliteElements>,
    orbit_radius_km: f64,
    mean_motion_rad_s: f64,
    sin_inc: f64,
    cos_inc: f64,
}

/// ECEF positions of every satellite at one time slot, indexed by satellite id.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotPositions {
    pub time_s: f64,
    pub positions: Vec<Vec3>,
}

impl SnapshotPositions {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Builds the Walker-delta shell described by `params`.
pub fn generate(params: &WalkerParams) -> Result<Constellation> {
    params.validate()?;
    let planes = params.planes;
    let per_plane = params.sats_per_plane();
    let total = params.total_sats as f64;
    let mut satellites = Vec::with_capacity(params.total_sats as usize);
    for plane in 0..planes {
        let raan = TAU * plane as f64 / planes as f64;
        let plane_phase = TAU * params.phasing_f as f64 * plane as f64 / total;
        for slot in 0..per_plane {
            let u0 = TAU * slot as f64 / per_plane as f64 + plane_phase;
            satellites.push(SatelliteElements {
                id: plane * per_plane + slot,
                plane,
                slot,
                raan_rad: raan,
                arg_latitude_rad: u0.rem_euclid(TAU),
            });
        }
    }
    let radius = EARTH_RADIUS_KM + params.altitude_km;
    let (sin_inc, cos_inc) = params.inclination_deg.to_radians().sin_cos();
    Ok(Constellation {
        params: params.clone(),
        satellites,
        orbit_radius_km: radius,
        mean_motion_rad_s: (gm_km3_s2() / (radius * radius * radius)).sqrt(),
        sin_inc,
        cos_inc,
    })
}

impl Constellation {
    pub fn len(&self) -> usize {
        self.satellites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.satellites.is_empty()
    }

    pub fn orbit_radius_km(&self) -> f64 {
        self.orbit_radius_km
    }

    pub fn mean_motion_rad_s(&self) -> f64 {
        self.mean_motion_rad_s
    }

    pub fn period_s(&self) -> f64 {
        orbital_period(self.params.altitude_km)
    }

    #[inline]
    fn position_with(&self, raan: f64, u: f64) -> Vec3 {
        let (sin_o, cos_o) = raan.sin_cos();
        let (sin_u, cos_u) = u.sin_cos();
        let r = self.orbit_radius_km;
        Vec3::new(
            r * (cos_o * cos_u - sin_o * sin_u * self.cos_inc),
            r * (sin_o * cos_u + cos_o * sin_u * self.cos_inc),
            r * sin_u * self.sin_inc,
        )
    }

    /// Positions in the inertial frame (no Earth rotation).
    pub fn inertial_positions(&self, t: f64) -> Vec<Vec3> {
        let advance = self.mean_motion_rad_s * t;
        self.satellites
            .iter()
            .map(|s| self.position_with(s.raan_rad, s.arg_latitude_rad + advance))
            .collect()
    }

    /// A constellation whose epoch is `t` seconds later, expressed in the Earth-fixed frame.
    ///
    /// `propagate(&c.advanced(t1), t2)` equals `propagate(&c, t1 + t2)`.
    pub fn advanced(&self, t: f64) -> Constellation {
        let mut out = self.clone();
        let du = self.mean_motion_rad_s * t;
        let dr = EARTH_ROTATION_RAD_S * t;
        for s in &mut out.satellites {
            s.arg_latitude_rad = (s.arg_latitude_rad + du).rem_euclid(TAU);
            s.raan_rad = (s.raan_rad - dr).rem_euclid(TAU);
        }
        out
    }
}

/// Advances every satellite along its circular orbit and rotates into ECEF.
pub fn propagate(c: &Constellation, t: f64) -> SnapshotPositions {
    let advance = c.mean_motion_rad_s * t;
    // rotating the frame by -ωt is the same as shifting every RAAN by -ωt
    let earth = EARTH_ROTATION_RAD_S * t;
    let positions = c
        .satellites
        .iter()
        .map(|s| c.position_with(s.raan_rad - earth, s.arg_latitude_rad + advance))
        .collect();
    SnapshotPositions { time_s: t, positions }
}

/// For each satellite, how many others stay within `lisl_range_km` over a whole orbit.
pub fn permanent_neighbor_count(c: &Constellation, lisl_range_km: f64) -> Vec<usize> {
    permanent_neighbor_counts(c, &[lisl_range_km]).pop().unwrap_or_default()
}

/// [`permanent_neighbor_count`] for several ranges, sharing one orbit sweep.
pub fn permanent_neighbor_counts(c: &Constellation, ranges_km: &[f64]) -> Vec<Vec<usize>> {
    let max_d2 = max_pair_distance_squared(c);
    let n = c.len();
    ranges_km
        .iter()
        .map(|&range| {
            let r2 = range * range;
            let mut counts = vec![0usize; n];
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if max_d2[k] <= r2 {
                        counts[i] += 1;
                        counts[j] += 1;
                    }
                    k += 1;
                }
            }
            counts
        })
        .collect()
}

/// Worst-case distances (km) from satellite `sat_id` to its `k` nearest permanent
/// neighbours over one orbit, sorted ascending. Useful for reporting why a
/// permanence count falls short.
pub fn permanent_neighbor_distances(c: &Constellation, sat_id: u32, k: usize) -> Vec<f64> {
    let n = c.len();
    let i = sat_id as usize;
    let mut max_d2 = vec![0.0_f64; n];
    for t in sample_times(c) {
        let pos = c.inertial_positions(t);
        for j in 0..n {
            max_d2[j] = max_d2[j].max(pos[i].distance_squared(pos[j]));
        }
    }
    let mut d: Vec<f64> = max_d2
        .into_iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, v)| v.sqrt())
        .collect();
    d.sort_by(f64::total_cmp);
    d.truncate(k);
    d
}

fn sample_times(c: &Constellation) -> impl Iterator<Item = f64> {
    let period = c.period_s();
    let samples = (period / PERMANENCE_STRIDE_S).ceil() as usize;
    (0..samples).map(|s| s as f64 * PERMANENCE_STRIDE_S)
}

// Upper-triangular pair maxima, row-major over i < j.
fn max_pair_distance_squared(c: &Constellation) -> Vec<f64> {
    let n = c.len();
    let mut max_d2 = vec![0.0_f64; n * n.saturating_sub(1) / 2];
    for t in sample_times(c) {
        // inter-satellite distances do not depend on Earth rotation
        let pos = c.inertial_positions(t);
        let mut k = 0;
        for i in 0..n {
            let pi = pos[i];
            for pj in &pos[i + 1..] {
                let d2 = pi.distance_squared(*pj);
                if d2 > max_d2[k] {
                    max_d2[k] = d2;
                }
                k += 1;
            }
        }
    }
    max_d2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small() -> WalkerParams {
        WalkerParams {
            name: None,
            inclination_deg: 90.0,
            total_sats: 4,
            planes: 2,
            phasing_f: 0,
            altitude_km: 550.0,
        }
    }

    #[test]
    fn preset_sizes() {
        let s = generate(&WalkerParams::starlink_p1v3()).unwrap();
        assert_eq!(s.len(), 1584);
        assert_eq!(s.params.sats_per_plane(), 72);
        assert_eq!(s.satellites.iter().filter(|e| e.plane == 21).count(), 72);
        let k = generate(&WalkerParams::kuiper_shell2()).unwrap();
        assert_eq!(k.len(), 1296);
        assert_eq!(k.params.sats_per_plane(), 36);
    }

    #[test]
    fn small_elements_unrolled() {
        let c = generate(&small()).unwrap();
        let raans: Vec<f64> = c.satellites.iter().map(|s| s.raan_rad).collect();
        assert_eq!(raans, vec![0.0, 0.0, PI, PI]);
        let phases: Vec<f64> = c.satellites.iter().map(|s| s.arg_latitude_rad).collect();
        assert_eq!(phases, vec![0.0, PI, 0.0, PI]);
        for (i, s) in c.satellites.iter().enumerate() {
            assert_eq!(s.id as usize, i);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let mut p = small();
        p.total_sats = 5;
        assert!(generate(&p).is_err());
        let mut p = small();
        p.phasing_f = 2;
        assert!(generate(&p).is_err());
    }

    #[test]
    fn epoch_positions() {
        let c = generate(&small()).unwrap();
        let snap = propagate(&c, 0.0);
        let r = 6928.0;
        assert!((snap.positions[0] - Vec3::new(r, 0.0, 0.0)).norm() < 1e-9);
        // 90° inclination: slot 1 of plane 0 sits at u = π
        assert!((snap.positions[1] - Vec3::new(-r, 0.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn norms_stay_on_shell() {
        let c = generate(&WalkerParams::starlink_p1v3()).unwrap();
        for t in [0.0, 1.0, 1234.5, 5736.0, 86_400.0] {
            for p in propagate(&c, t).positions {
                assert!((p.norm() - 6928.0).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn closure_after_one_period() {
        let c = generate(&WalkerParams::starlink_p1v3()).unwrap();
        let period = c.period_s();
        let a = c.inertial_positions(0.0);
        let b = c.inertial_positions(period);
        for (p, q) in a.iter().zip(&b) {
            assert!(p.distance(*q) < 1e-3);
        }
        // independent check: Earth has turned by ω·T in the fixed frame
        let fixed = propagate(&c, period);
        let expected = a[0].rotate_z(-EARTH_ROTATION_RAD_S * period);
        assert!(fixed.positions[0].distance(expected) < 1e-3);
        assert!(fixed.positions[0].distance(a[0]) > 100.0);
    }

    #[test]
    fn advanced_epoch_is_equivariant() {
        let c = generate(&WalkerParams::kuiper_shell2()).unwrap();
        let (t1, t2) = (777.0, 1500.25);
        let direct = propagate(&c, t1 + t2);
        let shifted = propagate(&c.advanced(t1), t2);
        for (p, q) in direct.positions.iter().zip(&shifted.positions) {
            assert!(p.distance(*q) < 1e-6);
        }
    }

    #[test]
    fn intra_plane_ring_is_rigid() {
        let c = generate(&WalkerParams::starlink_p1v3()).unwrap();
        let spacing = TAU / 72.0;
        let chord = 2.0 * 6928.0 * (spacing / 2.0).sin();
        for t in [0.0, 400.0, 3000.0] {
            let pos = propagate(&c, t).positions;
            for plane in [0usize, 7, 21] {
                for k in 0..72 {
                    let a = pos[plane * 72 + k];
                    let b = pos[plane * 72 + (k + 1) % 72];
                    assert!((a.distance(b) - chord).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn kuiper_permanent_neighbors() {
        let c = generate(&WalkerParams::kuiper_shell2()).unwrap();
        let counts = permanent_neighbor_count(&c, 1515.0);
        assert!(counts.iter().all(|&n| n >= 8), "min {:?}", counts.iter().min());
    }
}
