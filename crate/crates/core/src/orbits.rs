//! Two-body Keplerian orbits around a spherical Earth and ground station
//! kinematics in the Earth-centred inertial frame.

use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::{Rotation3, Vector3};

use crate::error::{domain, Error, Result};
use crate::units::EarthParams;

pub const KEPLER_TOLERANCE: f64 = 1e-12;
pub const KEPLER_MAX_ITER: usize = 50;

/// Classical orbital elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    /// m
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub raan: f64,
    pub arg_perigee: f64,
    pub mean_anomaly_at_epoch: f64,
    /// s
    pub epoch: f64,
}

impl OrbitSpec {
    pub fn circular(radius: f64, inclination: f64) -> Self {
        Self {
            semi_major_axis: radius,
            eccentricity: 0.0,
            inclination,
            raan: 0.0,
            arg_perigee: 0.0,
            mean_anomaly_at_epoch: 0.0,
            epoch: 0.0,
        }
    }

    pub fn validate(&self, earth: &EarthParams) -> Result<()> {
        let angles = [self.inclination, self.raan, self.arg_perigee, self.mean_anomaly_at_epoch, self.epoch];
        if !angles.iter().all(|v| v.is_finite()) || !self.semi_major_axis.is_finite() {
            return domain("orbital elements must be finite");
        }
        if !(0.0..1.0).contains(&self.eccentricity) {
            return domain(format!("eccentricity {} must lie in [0, 1)", self.eccentricity));
        }
        if !(self.perigee_radius() > earth.radius) {
            return domain(format!(
                "perigee altitude {:.1} m is not above the surface",
                self.perigee_radius() - earth.radius
            ));
        }
        Ok(())
    }

    pub fn perigee_radius(&self) -> f64 {
        self.semi_major_axis * (1.0 - self.eccentricity)
    }

    pub fn mean_motion(&self, earth: &EarthParams) -> f64 {
        (earth.mu / self.semi_major_axis.powi(3)).sqrt()
    }

    pub fn period(&self, earth: &EarthParams) -> f64 {
        2.0 * PI / self.mean_motion(earth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    /// m, Earth-centred inertial.
    pub position: Vector3<f64>,
    /// m/s
    pub velocity: Vector3<f64>,
    /// s
    pub time: f64,
}

impl StateVector {
    /// Specific orbital energy v²/2 − μ/r, J/kg.
    pub fn specific_energy(&self, mu: f64) -> f64 {
        0.5 * self.velocity.norm_squared() - mu / self.position.norm()
    }

    /// Specific angular momentum r × v, m²/s.
    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.position.cross(&self.velocity)
    }
}

/// Eccentric anomaly E solving M = E − e sin E by Newton iteration.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return domain(format!("eccentricity {e} must lie in [0, 1)"));
    }
    let m = mean_anomaly.rem_euclid(2.0 * PI);
    let mut ecc = if e < 0.8 { m } else { PI };
    for _ in 0..KEPLER_MAX_ITER {
        let step = (ecc - e * ecc.sin() - m) / (1.0 - e * ecc.cos());
        ecc -= step;
        if step.abs() < KEPLER_TOLERANCE {
            return Ok(ecc + (mean_anomaly - m));
        }
    }
    Err(Error::Numeric(format!(
        "Kepler iteration did not converge for M = {mean_anomaly}, e = {e}"
    )))
}

/// Position and velocity at time `t`.
pub fn propagate(orbit: &OrbitSpec, t: f64, earth: &EarthParams) -> Result<StateVector> {
    orbit.validate(earth)?;
    let a = orbit.semi_major_axis;
    let e = orbit.eccentricity;
    let n = orbit.mean_motion(earth);
    let big_e = solve_kepler(orbit.mean_anomaly_at_epoch + n * (t - orbit.epoch), e)?;
    let (s, c) = big_e.sin_cos();
    let root = (1.0 - e * e).sqrt();
    let r = a * (1.0 - e * c);
    let pos = Vector3::new(a * (c - e), a * root * s, 0.0);
    let vel = Vector3::new(-s, root * c, 0.0) * (n * a * a / r);
    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), orbit.raan)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), orbit.inclination)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), orbit.arg_perigee);
    Ok(StateVector {
        position: rot * pos,
        velocity: rot * vel,
        time: t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStation {
    pub latitude: f64,
    pub longitude: f64,
    /// m
    pub altitude: f64,
}

impl GroundStation {
    pub fn new(latitude: f64, longitude: f64, altitude: f64) -> Result<Self> {
        if !(latitude.abs() <= PI / 2.0) || !longitude.is_finite() || !altitude.is_finite() {
            return domain("station latitude must lie in [−π/2, π/2] with finite longitude and altitude");
        }
        Ok(Self {
            latitude,
            longitude,
            altitude,
        })
    }
}

/// Inertial state of a station on the rotating spherical Earth.
pub fn station_state(gs: &GroundStation, t: f64, earth: &EarthParams) -> Result<StateVector> {
    GroundStation::new(gs.latitude, gs.longitude, gs.altitude)?;
    let r = earth.radius + gs.altitude;
    let lon = gs.longitude + earth.rotation_rate * t;
    let position = Vector3::new(
        r * gs.latitude.cos() * lon.cos(),
        r * gs.latitude.cos() * lon.sin(),
        r * gs.latitude.sin(),
    );
    let omega = Vector3::new(0.0, 0.0, earth.rotation_rate);
    Ok(StateVector {
        position,
        velocity: omega.cross(&position),
        time: t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeGeometry {
    /// m
    pub range: f64,
    /// d|r_b − r_a|/dt, m/s.
    pub range_rate: f64,
    /// |v_b − v_a|, m/s.
    pub relative_speed: f64,
}

pub fn relative_geometry(a: &StateVector, b: &StateVector) -> Result<RelativeGeometry> {
    if (a.time - b.time).abs() > 1e-9 * a.time.abs().max(1.0) {
        return domain(format!("states at different times ({} s vs {} s)", a.time, b.time));
    }
    let dr = b.position - a.position;
    let dv = b.velocity - a.velocity;
    let range = dr.norm();
    let range_rate = if range > 0.0 { dr.dot(&dv) / range } else { 0.0 };
    Ok(RelativeGeometry {
        range,
        range_rate,
        relative_speed: dv.norm(),
    })
}

/// Newtonian potential −μ/r, J/kg.
pub fn newtonian_potential(r: f64, earth: &EarthParams) -> Result<f64> {
    if !(r > 0.0) {
        return domain("radius must be positive");
    }
    Ok(-earth.mu / r)
}

/// Named scenarios. Every preset has a characteristic range; the
/// heliocentric one has no Earth orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitPreset {
    Leo500,
    Leo1000,
    Gto,
    Geo,
    LunarDistance,
    Au,
}

pub const GEO_RADIUS: f64 = 42_164e3;
pub const LUNAR_DISTANCE: f64 = 3.84e8;
pub const ASTRONOMICAL_UNIT: f64 = 1.496e11;

impl OrbitPreset {
    pub const ALL: [OrbitPreset; 6] = [
        OrbitPreset::Leo500,
        OrbitPreset::Leo1000,
        OrbitPreset::Gto,
        OrbitPreset::Geo,
        OrbitPreset::LunarDistance,
        OrbitPreset::Au,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrbitPreset::Leo500 => "leo500",
            OrbitPreset::Leo1000 => "leo1000",
            OrbitPreset::Gto => "gto",
            OrbitPreset::Geo => "geo",
            OrbitPreset::LunarDistance => "lunar-distance",
            OrbitPreset::Au => "au",
        }
    }

    pub fn orbit(self, earth: &EarthParams) -> Option<OrbitSpec> {
        let r = earth.radius;
        match self {
            OrbitPreset::Leo500 => Some(OrbitSpec::circular(r + 500e3, 0.0)),
            OrbitPreset::Leo1000 => Some(OrbitSpec::circular(r + 1000e3, 0.0)),
            OrbitPreset::Gto => {
                let (rp, ra) = (r + 250e3, GEO_RADIUS);
                Some(OrbitSpec {
                    semi_major_axis: 0.5 * (rp + ra),
                    eccentricity: (ra - rp) / (ra + rp),
                    ..OrbitSpec::circular(0.0, 27f64.to_radians())
                })
            }
            OrbitPreset::Geo => Some(OrbitSpec::circular(GEO_RADIUS, 0.0)),
            OrbitPreset::LunarDistance => Some(OrbitSpec::circular(LUNAR_DISTANCE, 0.0)),
            OrbitPreset::Au => None,
        }
    }

    /// Distance to the ground used for light-time and window estimates:
    /// altitude for Earth orbits (apogee altitude for GTO), the fixed range otherwise.
    pub fn characteristic_range(self, earth: &EarthParams) -> f64 {
        match self {
            OrbitPreset::Au => ASTRONOMICAL_UNIT,
            OrbitPreset::LunarDistance => LUNAR_DISTANCE,
            p => {
                let o = p.orbit(earth).expect("earth orbit preset");
                o.semi_major_axis * (1.0 + o.eccentricity) - earth.radius
            }
        }
    }
}

impl FromStr for OrbitPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OrbitPreset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown orbit preset '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn earth() -> EarthParams {
        EarthParams::standard()
    }

    #[test]
    fn leo_speed() {
        let o = OrbitPreset::Leo500.orbit(&earth()).unwrap();
        let s = propagate(&o, 123.0, &earth()).unwrap();
        assert!((s.velocity.norm() - 7.61e3).abs() < 10.0, "{}", s.velocity.norm());
        let r = s.position.norm();
        assert_relative_eq!(s.velocity.norm_squared(), earth().mu * (2.0 / r - 1.0 / o.semi_major_axis), max_relative = 1e-8);
    }

    #[test]
    fn circular_orbit_is_periodic() {
        let o = OrbitSpec::circular(7e6, 0.9);
        let p = o.period(&earth());
        let a = propagate(&o, 100.0, &earth()).unwrap();
        let b = propagate(&o, 100.0 + p, &earth()).unwrap();
        assert!((a.position - b.position).norm() < 1.0);
        let q = propagate(&o, 100.0 + p / 4.0, &earth()).unwrap();
        assert_relative_eq!(a.position.angle(&q.position), PI / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn geo_period() {
        let o = OrbitPreset::Geo.orbit(&earth()).unwrap();
        assert!((o.period(&earth()) - 86_164.0).abs() < 10.0);
    }

    #[test]
    fn invalid_orbits() {
        let low = OrbitSpec::circular(6e6, 0.0);
        assert!(propagate(&low, 0.0, &earth()).is_err());
        let hyper = OrbitSpec { eccentricity: 1.2, ..OrbitSpec::circular(4e7, 0.0) };
        assert!(propagate(&hyper, 0.0, &earth()).is_err());
        assert!(solve_kepler(1.0, 1.0).is_err());
    }

    #[test]
    fn stations() {
        let eq = GroundStation::new(0.0, 0.0, 0.0).unwrap();
        let s = station_state(&eq, 0.0, &earth()).unwrap();
        assert_relative_eq!(s.position, Vector3::new(earth().radius, 0.0, 0.0));
        assert!((s.velocity.norm() - 465.0).abs() < 1.0);
        let pole = GroundStation::new(PI / 2.0, 0.3, 0.0).unwrap();
        assert!(station_state(&pole, 500.0, &earth()).unwrap().velocity.norm() < 1e-9);
        let day = 2.0 * PI / earth().rotation_rate;
        let later = station_state(&eq, day, &earth()).unwrap();
        assert!((later.position - s.position).norm() < 1.0);
        assert!(GroundStation::new(2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn relative_geometry_cases() {
        let e = earth();
        let a = OrbitSpec::circular(e.radius + 500e3, 0.0);
        let b = OrbitSpec { inclination: PI, ..a };
        let sa = propagate(&a, 0.0, &e).unwrap();
        let sb = propagate(&b, 0.0, &e).unwrap();
        let g = relative_geometry(&sa, &sb).unwrap();
        assert!(g.range < 1e-6);
        assert!((g.relative_speed - 15.2e3).abs() < 0.1e3, "{}", g.relative_speed);
        let same = relative_geometry(&sa, &sa).unwrap();
        assert_eq!((same.range, same.range_rate, same.relative_speed), (0.0, 0.0, 0.0));
        let trailing = OrbitSpec { mean_anomaly_at_epoch: 0.1, ..a };
        let st = propagate(&trailing, 0.0, &e).unwrap();
        let g = relative_geometry(&sa, &st).unwrap();
        assert!(g.range_rate.abs() < 1e-6 * g.relative_speed);
        let late = propagate(&trailing, 1.0, &e).unwrap();
        assert!(relative_geometry(&sa, &late).is_err());
    }

    #[test]
    fn potentials() {
        let e = earth();
        let lo = newtonian_potential(e.mean_radius, &e).unwrap();
        let hi = newtonian_potential(e.mean_radius + 400e3, &e).unwrap();
        let d = (hi - lo) / (crate::units::C * crate::units::C);
        assert!((d / 4.1e-11 - 1.0).abs() < 0.01);
        assert!(((hi - lo) / (9.81 * 400e3) - 1.0).abs() < 0.07);
        assert!(newtonian_potential(1e30, &e).unwrap().abs() < 1e-15);
        assert!(newtonian_potential(0.0, &e).is_err());
    }

    #[test]
    fn presets() {
        for p in OrbitPreset::ALL {
            assert_eq!(p.name().parse::<OrbitPreset>().unwrap(), p);
            if let Some(o) = p.orbit(&earth()) {
                o.validate(&earth()).unwrap();
            }
        }
        assert!("mars".parse::<OrbitPreset>().is_err());
        assert_relative_eq!(OrbitPreset::Geo.characteristic_range(&earth()), GEO_RADIUS - earth().radius);
        assert_eq!(OrbitPreset::Au.characteristic_range(&earth()), ASTRONOMICAL_UNIT);
    }

    proptest! {
        #[test]
        fn kepler_residual(m in -20.0f64..20.0, e in 0.0f64..0.9) {
            let big_e = solve_kepler(m, e).unwrap();
            prop_assert!((m - (big_e - e * big_e.sin())).abs() < 1e-12);
        }

        #[test]
        fn conserves_energy_and_momentum(
            alt in 300e3f64..4e7, e in 0.0f64..0.7, inc in 0.0f64..PI,
            raan in 0.0f64..6.28, w in 0.0f64..6.28, m0 in 0.0f64..6.28, frac in 0.0f64..1.0,
        ) {
            let earth = earth();
            let a = (earth.radius + alt) / (1.0 - e);
            let o = OrbitSpec { semi_major_axis: a, eccentricity: e, inclination: inc, raan, arg_perigee: w, mean_anomaly_at_epoch: m0, epoch: 0.0 };
            let s0 = propagate(&o, 0.0, &earth).unwrap();
            let s1 = propagate(&o, frac * o.period(&earth), &earth).unwrap();
            let (e0, e1) = (s0.specific_energy(earth.mu), s1.specific_energy(earth.mu));
            prop_assert!((e1 - e0).abs() < 1e-9 * e0.abs());
            let (h0, h1) = (s0.angular_momentum(), s1.angular_momentum());
            prop_assert!((h1 - h0).norm() < 1e-9 * h0.norm());
            prop_assert!((e0 + earth.mu / (2.0 * a)).abs() < 1e-9 * e0.abs());
        }
    }
}
