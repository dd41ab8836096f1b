//! Fading and Rytov integrals checked against plain fixed-step quadrature.

use fsosn::turbulence::{
    cn2, ew_cdf, ew_params, ew_pdf, fading_from_turbulence, outage_probability, rytov_variance, RytovConvention,
    TurbulenceParams,
};

/// Composite Simpson with `panels` (even) subintervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// ∫_0^upper g(i) di on a logarithmic grid, which resolves both the
/// power-law behaviour near zero and the bulk.
fn log_integral(g: impl Fn(f64) -> f64, upper: f64) -> f64 {
    simpson(|y| {
        let i = y.exp();
        g(i) * i
    }, -60.0, upper.ln(), 200_000)
}

const SIGMAS: [f64; 5] = [0.1, 0.1267, 0.4386, 0.8, 1.2];

#[test]
fn rytov_matches_fixed_step_simpson() {
    for convention in [RytovConvention::Verbatim, RytovConvention::Standard] {
        for (zenith, sat) in [(60.0, 550e3), (0.0, 610e3), (45.0, 20e3)] {
            let p = TurbulenceParams {
                zenith_deg: zenith,
                sat_altitude_m: sat,
                convention,
                ..TurbulenceParams::default()
            };
            let span: f64 = p.sat_altitude_m - p.gs_altitude_m;
            let integral = simpson(
                |t| 6.0 * t.powi(10) * cn2(p.gs_altitude_m + t.powi(6), p.wind_speed_m_s, p.ground_cn2),
                0.0,
                span.powf(1.0 / 6.0),
                10_000,
            );
            let k = 2.0 * std::f64::consts::PI / (p.wavelength_nm * 1e-9);
            let sec = 1.0 / zenith.to_radians().cos();
            let oracle = 2.25 * k.powf(7.0 / 6.0) * sec.powf(11.0 / 6.0) * integral;
            let got = rytov_variance(&p).unwrap();
            assert!(
                ((got - oracle) / oracle).abs() < 1e-6,
                "zenith {zenith}, sat {sat}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn ew_density_integrates_to_one_with_unit_mean() {
    for s in SIGMAS {
        let p = ew_params(s).unwrap();
        let upper = p.eta * 60f64.powf(1.0 / p.beta);
        let mass = log_integral(|i| ew_pdf(i, &p), upper);
        let mean = log_integral(|i| i * ew_pdf(i, &p), upper);
        assert!((mass - 1.0).abs() < 1e-6, "sigma_I {s}: mass {mass}");
        assert!((mean - 1.0).abs() < 1e-4, "sigma_I {s}: mean {mean}");
    }
}

#[test]
fn ew_cdf_agrees_with_integrated_density() {
    for s in SIGMAS {
        let p = ew_params(s).unwrap();
        for x in [0.05, 0.3, 0.7, 1.0, 1.5, 2.5] {
            let integrated = log_integral(|i| ew_pdf(i, &p), x);
            let cdf = ew_cdf(x, &p);
            assert!((integrated - cdf).abs() < 1e-8, "sigma_I {s}, I={x}: {integrated} vs {cdf}");
        }
    }
}

#[test]
fn outage_is_the_cdf_at_the_threshold_irradiance() {
    let p = fading_from_turbulence(&TurbulenceParams::default()).unwrap();
    for la in [0.3, 0.7065, 0.9032, 1.0] {
        for snr in [0.0, 7.0, 20.0, 45.0, 60.0] {
            let gamma_th: f64 = 10f64.powf(0.7);
            let gamma_bar: f64 = 10f64.powf(snr / 10.0);
            let threshold = (gamma_th / gamma_bar).sqrt() / la;
            let direct = ew_cdf(threshold, &p);
            let got = outage_probability(snr, 7.0, &p, la);
            assert!((got - direct).abs() <= 1e-12 * direct, "L_a {la}, {snr} dB: {got} vs {direct}");
        }
    }
}
