//! Command-line front end: run scenarios, list presets, validate scenario
//! files and print standalone outage curves.
//!
//! Exit status: 0 on success, 2 when a scenario fails to parse or validate,
//! 1 on any other failure. `FSOSN_THREADS` sets the worker count (0 = auto).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fsosn::link_budget::{Direction, WeatherProfile};
use fsosn::scenario::{export, format_g, load_scenario, presets_listing, run};
use fsosn::turbulence::{fading_from_turbulence, link_attenuation, op_curve, snr_grid, RytovConvention, TurbulenceParams};
use fsosn::Error;

#[derive(Parser)]
#[command(name = "fsosn", version, about = "Free-space optical satellite network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV/JSON results.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
    /// Check a scenario file without running it.
    Validate { scenario: PathBuf },
    /// Print an outage-probability curve as CSV.
    OpCurve {
        #[arg(long)]
        weather: String,
        #[arg(long)]
        direction: Direction,
        /// SNR grid as START:STOP:STEP in dB.
        #[arg(long, default_value = "0:60:1")]
        snr: String,
        #[arg(long, default_value_t = 7.0)]
        gamma_th: f64,
        #[arg(long, value_parser = parse_convention, default_value = "verbatim")]
        convention: RytovConvention,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    List,
}

fn parse_convention(s: &str) -> Result<RytovConvention, String> {
    match s {
        "verbatim" => Ok(RytovConvention::Verbatim),
        "standard" => Ok(RytovConvention::Standard),
        other => Err(format!("unknown convention '{other}' (verbatim|standard)")),
    }
}

fn parse_snr(text: &str) -> fsosn::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Validation(format!("--snr '{text}': {e}")))?;
    match nums.as_slice() {
        [a, b, step] => snr_grid(*a, *b, *step),
        _ => Err(Error::Validation(format!("--snr '{text}' must be START:STOP:STEP"))),
    }
}

fn configure_threads() -> fsosn::Result<()> {
    let Ok(v) = std::env::var("FSOSN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Validation(format!("FSOSN_THREADS='{v}' is not a non-negative integer")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Validation(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> fsosn::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Run { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let result = run(&s)?;
            for path in export(&result, &out)? {
                println!("{}", path.display());
            }
            match result.intersection {
                Some(i) => eprintln!(
                    "curves cross at {} km ({} ms, {} mW)",
                    format_g(i.lisl_range_km),
                    format_g(i.t_net_ms),
                    format_g(i.p_avg_mw)
                ),
                None => eprintln!("curves do not cross"),
            }
        }
        Command::Presets { action: PresetsAction::List } => print!("{}", presets_listing()),
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            println!(
                "ok: {} slots x {} ranges, {} -> {}",
                s.slot_count,
                s.lisl_ranges_km.len(),
                s.gs_source.label(),
                s.gs_destination.label()
            );
        }
        Command::OpCurve {
            weather,
            direction,
            snr,
            gamma_th,
            convention,
        } => {
            let w = WeatherProfile::preset(&weather).ok_or_else(|| {
                Error::Validation(format!(
                    "unknown weather '{weather}' (known: {})",
                    WeatherProfile::PRESETS.join(", ")
                ))
            })?;
            let grid = parse_snr(&snr)?;
            let p = TurbulenceParams {
                convention,
                ..TurbulenceParams::default()
            };
            let fading = fading_from_turbulence(&p)?;
            let la = link_attenuation(&p, direction, &w)?;
            println!("snr_dB,P_out");
            for pt in op_curve(&grid, gamma_th, &fading, la) {
                println!("{},{}", format_g(pt.snr_db), format_g(pt.p_out));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Validation(_) | Error::InvalidWalker(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
