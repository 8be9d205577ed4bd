use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qsat_core::bell::{chsh_estimate, simulate_coincidences, violation_rate, write_required_photons_csv, ChshSettings};
use qsat_core::diffusion::{evolve_equator, CircleDensity};
use qsat_core::lorentz::LorentzMatrix;
use qsat_core::orbits::propagate;
use qsat_core::qft::{ralph_correlation, EventOperatorModel};
use qsat_core::scenario::{load_scenario, run_report, EffectFlags, EffectReport, Platform, Scenario};
use qsat_core::units::{EarthParams, C};
use qsat_core::wigner::{first_order_boost_phase, wigner_angle, FourMomentum};
use qsat_core::Error;
use nalgebra::Vector3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qsat", version, about = "Relativistic effect estimates for satellite quantum optics")]
struct Cli {
    /// Scenario file (TOML); built-in defaults when omitted
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Overrides the scenario seed
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the Monte Carlo (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Comma-separated effect groups to keep, e.g. "timing,bell"
    #[arg(long, global = true)]
    effects: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every enabled effect for the scenario
    Report,
    /// Simulate CHSH coincidence counts
    BellSim {
        #[arg(long)]
        visibility: Option<f64>,
        /// Detected pairs per experiment (defaults to the photon budget)
        #[arg(long)]
        pairs: Option<u64>,
        /// Repeat the experiment and report the fraction reaching 3 sigma
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Evolve a wrapped normal polarization density on the equator
    Diffusion {
        /// Affine span
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.2)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        mean: f64,
        #[arg(long, default_value_t = 256)]
        points: usize,
        /// Override the scenario diffusion constant
        #[arg(long)]
        c_diff: Option<f64>,
        /// Override the scenario drift constant
        #[arg(long)]
        d_drift: Option<f64>,
    },
    /// Exact and leading-order boost phase for the scenario geometry
    Wigner {
        /// Boost speed v/c (defaults to the satellite speed)
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Sample the scenario orbit
    Orbit {
        #[arg(long, default_value_t = 6000.0)]
        duration: f64,
        #[arg(long, default_value_t = 60.0)]
        step: f64,
    },
    /// Plot data: required photons N(V) or the event-operator correlation C(delta)
    Curves {
        #[arg(value_enum)]
        kind: CurveKind,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    Nv,
    Ralph,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::Domain(_) | Error::Numeric(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsat: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn scenario(cli: &Cli) -> Result<Scenario, Error> {
    let mut s = match &cli.scenario {
        Some(p) => load_scenario(p)?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if let Some(w) = cli.workers {
        s.workers = w;
    }
    if let Some(list) = &cli.effects {
        s.effects = EffectFlags::from_list(list)?;
    }
    Ok(s)
}

fn io(e: io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

/// Prints name/value rows either as CSV or as an aligned table.
fn emit_pairs(format: Format, rows: &[(&str, f64)]) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    match format {
        Format::Csv => {
            writeln!(out, "quantity,value").map_err(io)?;
            for (k, v) in rows {
                writeln!(out, "{k},{v:.16e}").map_err(io)?;
            }
        }
        Format::Table => {
            let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "{k:<w$}  {v:.6e}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let s = scenario(cli)?;
    let earth = EarthParams::standard();
    let stdout = io::stdout();
    match &cli.command {
        Command::Report => {
            let rep: EffectReport = run_report(&s)?;
            match cli.format {
                Format::Csv => rep.write_csv(stdout.lock())?,
                Format::Table => print!("{}", rep.to_table()),
            }
        }
        Command::BellSim { visibility, pairs, trials } => {
            let v = visibility.unwrap_or(s.visibility);
            let n = pairs.unwrap_or(s.photon_budget);
            let settings = ChshSettings::optimal();
            if let Some(t) = trials {
                let rate = violation_rate(v, n, &settings, *t, 3.0, s.seed, s.workers)?;
                emit_pairs(cli.format, &[("visibility", v), ("pairs", n as f64), ("trials", *t as f64), ("seed", s.seed as f64), ("violation_rate", rate)])?;
            } else {
                let counts = simulate_coincidences(v, n, &settings, s.seed, s.workers)?;
                match cli.format {
                    Format::Csv => counts.write_csv(&settings, stdout.lock())?,
                    Format::Table => {
                        let r = chsh_estimate(&counts)?;
                        emit_pairs(Format::Table, &[("S", r.s_value), ("sigma", r.sigma), ("n_sigma", r.n_sigma_violation), ("seed", s.seed as f64)])?;
                    }
                }
            }
        }
        Command::Diffusion { lambda, sigma, mean, points, c_diff, d_drift } => {
            let mut p = s.diffusion.params()?;
            if let Some(c) = c_diff {
                p.c_diff = *c;
            }
            if let Some(d) = d_drift {
                p.d_drift = *d;
            }
            let modes = (points.saturating_sub(1) / 2).min(qsat_core::diffusion::DEFAULT_MODES);
            let rho0 = CircleDensity::wrapped_normal(*mean, *sigma, modes)?;
            let rho = evolve_equator(&rho0, &p, *lambda)?;
            let (g0, g1) = (rho0.to_grid(*points)?, rho.to_grid(*points)?);
            let mut out = stdout.lock();
            writeln!(out, "beta,rho0,rho").map_err(io)?;
            for j in 0..*points {
                let b = 2.0 * std::f64::consts::PI * j as f64 / *points as f64;
                writeln!(out, "{b:.16e},{:.16e},{:.16e}", g0[j], g1[j]).map_err(io)?;
            }
        }
        Command::Wigner { beta } => {
            let v = match beta {
                Some(b) => b * C,
                None => match s.platform(&earth)? {
                    Platform::Orbit { spec, .. } => propagate(&spec, spec.epoch, &earth)?.velocity.norm(),
                    Platform::FixedRange(_) => return Err(Error::Config("a fixed-range preset has no speed; pass --beta".into())),
                },
            };
            let w = &s.wigner;
            let (th, ph, tb, pb) = (w.theta_deg.to_radians(), w.phi_deg.to_radians(), w.theta_b_deg.to_radians(), w.phi_b_deg.to_radians());
            let first = first_order_boost_phase(th, ph, tb, pb, v)?;
            let dir = Vector3::new(tb.sin() * pb.cos(), tb.sin() * pb.sin(), tb.cos());
            let exact = wigner_angle(&LorentzMatrix::boost(&(dir * (v / C)))?, &FourMomentum::from_angles(th, ph))?;
            emit_pairs(cli.format, &[("beta", v / C), ("first_order_phase", first), ("exact_wigner_angle", exact)])?;
        }
        Command::Orbit { duration, step } => {
            let spec = match s.platform(&earth)? {
                Platform::Orbit { spec, .. } => spec,
                Platform::FixedRange(_) => return Err(Error::Config("the selected preset is a fixed range, not an orbit".into())),
            };
            if !(*step > 0.0) || !(*duration >= 0.0) {
                return Err(Error::Config("step must be positive and duration non-negative".into()));
            }
            let mut out = stdout.lock();
            writeln!(out, "time,x,y,z,vx,vy,vz").map_err(io)?;
            let n = (duration / step).floor() as usize;
            for i in 0..=n {
                let st = propagate(&spec, spec.epoch + i as f64 * step, &earth)?;
                let (r, v) = (st.position, st.velocity);
                writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", st.time, r.x, r.y, r.z, v.x, v.y, v.z).map_err(io)?;
            }
        }
        Command::Curves { kind, points } => match kind {
            CurveKind::Nv => write_required_photons_csv(0.72, 1.0, *points, stdout.lock())?,
            CurveKind::Ralph => {
                let model = EventOperatorModel::new(s.detector_resolution, s.max_correlation)?;
                if *points < 2 {
                    return Err(Error::Config("need at least two points".into()));
                }
                let mut out = stdout.lock();
                writeln!(out, "delta,C").map_err(io)?;
                let span = 6.0 * s.detector_resolution;
                for i in 0..*points {
                    let d = span * i as f64 / (*points - 1) as f64;
                    writeln!(out, "{d:.16e},{:.16e}", ralph_correlation(&model, d)).map_err(io)?;
                }
            }
        },
    }
    Ok(())
}
