//! Orbital and ground-link geometry for the two built-in shells.
//!
//! Run with `cargo run --example geometry`.

use fsosn::geo::{
    elevation_angle, elevation_from_slant_distance, geodetic_to_ecef, max_lisl_range, orbital_period, slant_distance,
    GeoPoint, Vec3,
};

fn main() -> fsosn::Result<()> {
    for (name, altitude, min_elevation) in [("starlink-p1v3", 550.0, 25.0), ("kuiper-shell2", 610.0, 35.0)] {
        let period = orbital_period(altitude);
        println!("{name} at {altitude} km");
        println!("  orbital period        {period:.1} s ({:.2} min)", period / 60.0);
        println!("  longest laser link    {:.1} km", max_lisl_range(altitude)?);
        let d = slant_distance(min_elevation, altitude, 0.0)?;
        println!("  ground range at {min_elevation} deg {d:.1} km");
        let back = elevation_from_slant_distance(d, altitude, 0.0)?;
        println!("  recovered elevation   {back:.6} deg");
    }

    // A satellite directly above Toronto, then one displaced 1000 km east.
    let toronto = geodetic_to_ecef(GeoPoint::new(43.65, -79.38, 0.1)?);
    let overhead = geodetic_to_ecef(GeoPoint::new(43.65, -79.38, 550.0)?);
    let east = overhead + toronto.normalized().cross(Vec3::new(0.0, 0.0, 1.0)).normalized() * -1000.0;
    for (label, sat) in [("overhead", overhead), ("1000 km east", east)] {
        match elevation_angle(toronto, sat) {
            Some(el) => println!("Toronto sees the {label} satellite at {el:.2} deg"),
            None => println!("Toronto cannot see the {label} satellite"),
        }
    }
    Ok(())
}
