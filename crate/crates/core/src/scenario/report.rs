//! Runs every enabled effect for a scenario and collects the results.

use std::fmt::Write as _;
use std::io::Write;

use nalgebra::Vector3;

use crate::bell::{chsh_estimate, chsh_from_correlations, required_photons, simulate_coincidences, singlet_correlation, ChshSettings};
use crate::diffusion::Propagation;
use crate::error::{Error, Result};
use crate::gravitomagnetism::{axial_impact_rotation, kerr_principal_null_rotation, SpinningBody};
use crate::interferometry::{displacement_during_delay, grav_redshift_weak_field, optical_cow_phase, OpticalLink};
use crate::kinematics::{
    causally_connected, collapse_exclusion_window, exceeds_human_reaction, invariant_interval, light_travel_time,
    min_separation_for_switching, simultaneity_boost_speed, timing_shift_per_distance, Event,
};
use crate::lorentz::LorentzMatrix;
use crate::orbits::{newtonian_potential, propagate, relative_geometry, station_state};
use crate::qft::{
    berry_phase_difference, negativity_bound, proper_time_differential, ralph_correlation, required_acceleration,
    spacelike_window, unruh_temperature, DetectorPair, EventOperatorModel,
};
use crate::units::{convert_angle, AngleUnit, EarthParams, C, G0};
use crate::wigner::{first_order_boost_phase, wigner_angle, FourMomentum};

use super::config::{EffectGroup, Platform, Scenario, SourceLocation};

/// One named result.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectEntry {
    pub effect: String,
    pub value: f64,
    pub unit: String,
    /// Short description of the physical relation the value comes from.
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EffectReport {
    pub entries: Vec<EffectEntry>,
}

impl EffectReport {
    fn push(&mut self, effect: &str, value: f64, unit: &str, reference: &str) {
        self.entries.push(EffectEntry {
            effect: effect.into(),
            value,
            unit: unit.into(),
            reference: reference.into(),
        });
    }

    pub fn get(&self, effect: &str) -> Option<&EffectEntry> {
        self.entries.iter().find(|e| e.effect == effect)
    }

    /// CSV with columns effect,value,unit,reference; values carry 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let err = |e: csv::Error| Error::Config(format!("csv output failed: {e}"));
        w.write_record(["effect", "value", "unit", "reference"]).map_err(err)?;
        for e in &self.entries {
            w.write_record([e.effect.as_str(), &format!("{:.16e}", e.value), &e.unit, &e.reference]).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Config(e.to_string()))
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let width = |f: fn(&EffectEntry) -> usize, min: usize| self.entries.iter().map(f).max().unwrap_or(0).max(min);
        let we = width(|e| e.effect.chars().count(), 6);
        let wu = width(|e| e.unit.chars().count(), 4);
        let mut s = String::new();
        let _ = writeln!(s, "{:<we$}  {:>14}  {:<wu$}  reference", "effect", "value", "unit");
        for e in &self.entries {
            let _ = writeln!(s, "{:<we$}  {:>14.6e}  {:<wu$}  {}", e.effect, e.value, e.unit, e.reference);
        }
        s
    }
}

/// Satellite range to the ground (m) and speed (m/s, absent for fixed ranges).
fn platform_kinematics(s: &Scenario, earth: &EarthParams) -> Result<(f64, Option<f64>, f64)> {
    Ok(match s.platform(earth)? {
        Platform::Orbit { spec, preset } => {
            let st = propagate(&spec, spec.epoch, earth)?;
            let range = match preset {
                Some(p) => p.characteristic_range(earth),
                None => st.position.norm() - earth.radius,
            };
            (range, Some(st.velocity.norm()), spec.perigee_radius())
        }
        Platform::FixedRange(r) => (r, None, earth.radius + r),
    })
}

fn tag<T>(effect: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Numeric(format!("{effect}: {e}")))
}

/// Computes all enabled effects. Failures are reported as numeric errors
/// naming the effect.
pub fn run_report(s: &Scenario) -> Result<EffectReport> {
    s.validate()?;
    let earth = EarthParams::standard();
    let (range, speed, perigee) = platform_kinematics(s, &earth)?;
    let on = |g: EffectGroup| s.effects.enabled(g);
    let mut rep = EffectReport::default();

    let g = &s.geometry;
    let ground = Event::on_axis(g.ground_delay, 0.0);
    let sat = Event::on_axis(g.emission_distance / C, g.emission_distance);
    let interval = invariant_interval(&ground, &sat);
    rep.push("invariant_separation", interval.magnitude, interval.kind.unit(), "invariant interval between detection events");
    let frame = tag("simultaneity_beta", simultaneity_boost_speed(&ground, &sat))?;
    rep.push("simultaneity_beta", frame.beta, "1", "frame speed making the detections simultaneous");
    rep.push("simultaneity_gamma", frame.gamma, "1", "Lorentz factor of that frame");
    let connected = tag("causal_contact", causally_connected(&ground, &sat, g.speed_factor))?;
    rep.push("causal_contact", connected as u8 as f64, "1", "contact under a signal speed of speed_factor times c");
    rep.push("satellite_range", range, "m", "distance from ground to satellite");
    let stations = s.stations()?;
    if stations.len() == 2 {
        let a = station_state(&stations[0], 0.0, &earth)?;
        let b = station_state(&stations[1], 0.0, &earth)?;
        rep.push("station_baseline", relative_geometry(&a, &b)?.range, "m", "straight-line distance between stations");
    }

    if on(EffectGroup::Timing) {
        let shift = tag("timing_shift", timing_shift_per_distance(s.relative_speed))?;
        rep.push("timing_shift", shift, "s/m", "simultaneity shift per unit separation, v/c^2");
        let sep = tag("min_separation_for_switching", min_separation_for_switching(s.relative_speed, s.analyzer_switch_time))?;
        rep.push("min_separation_for_switching", sep, "m", "separation where the shift equals the switching time");
    }

    if on(EffectGroup::Windows) {
        rep.push("light_time", light_travel_time(range), "s", "one-way light travel time to the satellite");
        rep.push("collapse_exclusion_window", collapse_exclusion_window(range), "s", "longest collapse time the link can exclude");
        rep.push("exceeds_human_reaction", exceeds_human_reaction(range) as u8 as f64, "1", "light time above 100 ms");
        rep.push("spacelike_window", tag("spacelike_window", spacelike_window(range))?, "s", "longest spacelike interaction time, R/c");
    }

    if on(EffectGroup::Wigner) {
        if let Some(v) = speed {
            let w = &s.wigner;
            let (th, ph, tb, pb) = (w.theta_deg.to_radians(), w.phi_deg.to_radians(), w.theta_b_deg.to_radians(), w.phi_b_deg.to_radians());
            let chi = tag("first_order_boost_phase", first_order_boost_phase(th, ph, tb, pb, v))?;
            rep.push("first_order_boost_phase", chi, "rad", "leading-order helicity phase of a boost");
            let beta = Vector3::new(tb.sin() * pb.cos(), tb.sin() * pb.sin(), tb.cos()) * (v / C);
            let exact = tag("wigner_angle", LorentzMatrix::boost(&beta).and_then(|l| wigner_angle(&l, &FourMomentum::from_angles(th, ph))))?;
            rep.push("wigner_angle", exact, "rad", "exact little-group rotation angle");
        }
    }

    if on(EffectGroup::Gravitomagnetism) {
        let body = SpinningBody::earth(&earth);
        let gm = &s.gravitomagnetism;
        let r1 = if gm.emission_radius > 0.0 {
            gm.emission_radius
        } else {
            match s.source {
                SourceLocation::Ground => earth.radius,
                SourceLocation::Satellite => perigee,
            }
        };
        let chi = tag("kerr_rotation", kerr_principal_null_rotation(&body, r1, f64::INFINITY, gm.theta_deg.to_radians()))?;
        rep.push("kerr_rotation", convert_angle(chi, AngleUnit::ArcMsec), "mas", "polarization rotation along a principal null ray");
        let b = if gm.impact_parameter > 0.0 { gm.impact_parameter } else { earth.mean_radius };
        let axial = tag("axial_impact_rotation", axial_impact_rotation(&body, b, true))?;
        rep.push("axial_impact_rotation", convert_angle(axial, AngleUnit::ArcMsec), "mas", "rotation of a ray passing parallel to the spin axis");
    }

    if on(EffectGroup::Interferometry) {
        rep.push("grav_redshift", tag("grav_redshift", grav_redshift_weak_field(range, G0))?, "1", "weak-field fractional frequency shift g h / c^2");
        let link = OpticalLink {
            fibre_index: s.fibre_index,
            ..tag("optical_cow_phase", OpticalLink::new(s.wavelength, s.fibre_delay * C / s.fibre_index, range))?
        };
        rep.push("optical_cow_phase", tag("optical_cow_phase", optical_cow_phase(&link))?, "rad", "optical COW phase over the fibre delay");
        if let Some(v) = speed {
            rep.push("displacement_during_delay", tag("displacement_during_delay", displacement_during_delay(v, s.fibre_delay))?, "m", "satellite motion during the fibre delay");
        }
    }

    if on(EffectGroup::Qft) {
        let q = &s.qft;
        rep.push("unruh_temperature", tag("unruh_temperature", unruh_temperature(q.acceleration))?, "K", "Unruh temperature of the configured acceleration");
        rep.push("required_acceleration", tag("required_acceleration", required_acceleration(q.gap_frequency))?, "m/s^2", "acceleration a = omega c for the detector gap");
        rep.push(
            "berry_phase_difference",
            tag("berry_phase_difference", berry_phase_difference(q.gap_frequency, q.acceleration, q.berry_g, q.berry_convention.into()))?,
            "rad",
            "geometric phase between inertial and accelerated detectors",
        );
        let pair = tag("negativity_bound", DetectorPair::new(range, q.interaction_time, q.gap_frequency))?;
        rep.push("negativity_bound", negativity_bound(&pair), "1", "vacuum entanglement bound exp(-(R/cT)^3)");
    }

    if on(EffectGroup::EventOperator) {
        let lo = tag("proper_time_differential", newtonian_potential(earth.mean_radius, &earth))?;
        let hi = tag("proper_time_differential", newtonian_potential(earth.mean_radius + range, &earth))?;
        let delta = tag("proper_time_differential", proper_time_differential(lo, hi, s.overlap_time, s.retroreflector))?;
        rep.push("proper_time_differential", delta, "s", "clock-rate difference accumulated over the overlap time");
        let model = tag("ralph_correlation", EventOperatorModel::new(s.detector_resolution, s.max_correlation))?;
        rep.push("ralph_correlation", ralph_correlation(&model, delta), "1", "event-operator correlation C_max exp(-delta^2 / 4 d_t^2)");
    }

    if on(EffectGroup::Diffusion) {
        let d = &s.diffusion;
        let cmb = Propagation { time: d.cmb_time, frequency: d.cmb_frequency };
        let bounds = tag("cmb_bounds", cmb.invert_bounds(d.chi_bound, d.mu_bound))?;
        rep.push("cmb_drift_bound", bounds.d_drift, "s^-2", "drift constant implied by the CMB angle bound");
        rep.push("cmb_diffusion_bound", bounds.c_diff, "s^-2", "diffusion constant implied by the CMB depolarization bound");
        let dist = if d.link_distance > 0.0 { d.link_distance } else { range };
        let link = Propagation { time: dist / C, frequency: C / s.wavelength };
        let (chi, mu) = tag("link_forecast", d.params().and_then(|p| link.forecast(&p)))?;
        rep.push("link_angle_shift", chi, "1", "Stokes angle drift over the link, t d / nu");
        rep.push("link_polarization_decay", mu, "1", "depolarization exponent over the link, 4 t c / nu");
    }

    if on(EffectGroup::Bell) {
        let settings = ChshSettings::optimal();
        match required_photons(s.visibility) {
            Ok(n) => rep.push("required_photons", n as f64, "count", "detected pairs for a 3 sigma CHSH violation"),
            Err(Error::Domain(_)) => rep.push("required_photons", f64::INFINITY, "count", "no violation possible at this visibility"),
            Err(e) => return Err(Error::Numeric(format!("required_photons: {e}"))),
        }
        let e = settings.0.map(|p| singlet_correlation(s.visibility, &p));
        rep.push("chsh_expected", chsh_from_correlations(&e), "1", "CHSH value of the ideal correlations times the visibility");
        let counts = tag("chsh_simulated", simulate_coincidences(s.visibility, s.photon_budget, &settings, s.seed, s.workers))?;
        let r = tag("chsh_simulated", chsh_estimate(&counts))?;
        rep.push("chsh_simulated", r.s_value, "1", "CHSH value from simulated coincidences");
        rep.push("chsh_simulated_sigma", r.sigma, "1", "Poisson standard error of the simulated value");
        rep.push("chsh_simulated_n_sigma", r.n_sigma_violation, "1", "one-sided violation (S - 2) / sigma");
        rep.push("bell_seed", s.seed as f64, "1", "seed of the coincidence simulation");
    }

    Ok(rep)
}
