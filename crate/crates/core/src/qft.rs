//! Order-of-magnitude estimates for quantum field effects seen by
//! accelerated or spacelike separated detectors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::units::{C, HBAR, K_B};

/// Unruh temperature ħa/(2πc k_B), K.
pub fn unruh_temperature(a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return domain("acceleration must be non-negative");
    }
    Ok(HBAR * a / (2.0 * PI * C * K_B))
}

/// Acceleration whose Unruh bath has temperature `t`, m/s².
pub fn unruh_acceleration(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain("temperature must be non-negative");
    }
    Ok(2.0 * PI * C * K_B * t / HBAR)
}

/// Acceleration a ≈ ωc needed for a detector gap ω (rad/s) to feel the bath.
pub fn required_acceleration(omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return domain("frequency must be non-negative");
    }
    Ok(omega * C)
}

/// How the mode-mixing parameter q_a is obtained from exp(−πωc/a).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqueezingConvention {
    /// q = arctan(·).
    #[default]
    Arctan,
    /// q = arctanh(·).
    Arctanh,
}

/// Berry phase difference between an inertial and a uniformly accelerated
/// detector: Δγ = arg(cosh²q − e^{2πiG} sinh²q).
pub fn berry_phase_difference(omega_a: f64, a: f64, big_g: f64, convention: SqueezingConvention) -> Result<f64> {
    if !(omega_a >= 0.0) || !(a >= 0.0) || !big_g.is_finite() {
        return domain("berry phase needs ω ≥ 0, a ≥ 0 and finite G");
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let x = (-PI * omega_a * C / a).exp();
    let q = match convention {
        SqueezingConvention::Arctan => x.atan(),
        SqueezingConvention::Arctanh => x.atanh(),
    };
    if !q.is_finite() {
        return domain("squeezing parameter diverges (ω = 0 with arctanh)");
    }
    let (ch, sh) = (q.cosh(), q.sinh());
    let turn = Complex64::from_polar(1.0, 2.0 * PI * big_g.rem_euclid(1.0));
    Ok((Complex64::new(ch * ch, 0.0) - turn * (sh * sh)).arg())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorPair {
    /// m
    pub separation: f64,
    /// s
    pub interaction_time: f64,
    /// rad/s
    pub gap_frequency: f64,
}

impl DetectorPair {
    pub fn new(separation: f64, interaction_time: f64, gap_frequency: f64) -> Result<Self> {
        if !(separation > 0.0) || !(interaction_time > 0.0) {
            return domain("separation and interaction time must be positive");
        }
        if !(gap_frequency >= 0.0) {
            return domain("gap frequency must be non-negative");
        }
        Ok(Self {
            separation,
            interaction_time,
            gap_frequency,
        })
    }
}

/// Upper bound on the negativity two detectors can harvest from the
/// vacuum, exp(−(R/cT)³).
pub fn negativity_bound(pair: &DetectorPair) -> f64 {
    let x = pair.separation / (C * pair.interaction_time);
    (-x * x * x).exp()
}

/// Longest interaction time that keeps detectors a distance `separation`
/// apart spacelike separated, R/c.
pub fn spacelike_window(separation: f64) -> Result<f64> {
    if !(separation >= 0.0) {
        return domain("separation must be non-negative");
    }
    Ok(separation / C)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventOperatorModel {
    /// Detector time resolution d_t, s.
    pub resolution: f64,
    /// Correlation in the absence of a proper time difference.
    pub max_correlation: f64,
}

impl EventOperatorModel {
    pub fn new(resolution: f64, max_correlation: f64) -> Result<Self> {
        if !(resolution > 0.0) {
            return domain("detector resolution must be positive");
        }
        if !(max_correlation > 0.0 && max_correlation <= 1.0) {
            return domain("maximum correlation must lie in (0, 1]");
        }
        Ok(Self {
            resolution,
            max_correlation,
        })
    }
}

/// C = C_max exp(−Δ²/(4 d_t²)).
pub fn ralph_correlation(model: &EventOperatorModel, delta: f64) -> f64 {
    let x = delta / (2.0 * model.resolution);
    model.max_correlation * (-x * x).exp()
}

/// Proper time accumulated differently by two clocks sitting at Newtonian
/// potentials Φ_low < Φ_high (J/kg) over `overlap` seconds. With a
/// retroreflector the photon passes twice and the overlap doubles.
pub fn proper_time_differential(phi_low: f64, phi_high: f64, overlap: f64, retroreflector: bool) -> Result<f64> {
    if !(overlap >= 0.0) {
        return domain("overlap time must be non-negative");
    }
    let t = if retroreflector { 2.0 * overlap } else { overlap };
    Ok((phi_high - phi_low) / (C * C) * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{EarthParams, G0};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn unruh_at_one_g() {
        let t = unruh_temperature(9.81).unwrap();
        assert!((t / 4e-20 - 1.0).abs() < 0.01, "{t}");
        assert_eq!(unruh_temperature(0.0).unwrap(), 0.0);
        let a = unruh_acceleration(2.7).unwrap();
        assert!((a / 6.7e20 - 1.0).abs() < 0.01, "{a}");
        assert_relative_eq!(unruh_temperature(a).unwrap(), 2.7, max_relative = 1e-14);
        assert!(unruh_temperature(-1.0).is_err());
    }

    #[test]
    fn required_acceleration_values() {
        let a = required_acceleration(1e6).unwrap();
        assert_relative_eq!(a, 2.99792458e14, max_relative = 1e-15);
        assert!((a / G0).log10().round() == 13.0);
        assert_eq!(required_acceleration(0.0).unwrap(), 0.0);
        assert!((required_acceleration(2.0 * PI * 1e6).unwrap() / 1.9e15 - 1.0).abs() < 0.01);
    }

    #[test]
    fn berry_phase_oracle() {
        for g in [0.0, 1.0, -3.0] {
            assert_eq!(berry_phase_difference(1.0, C, g, SqueezingConvention::Arctan).unwrap(), 0.0);
        }
        assert_eq!(berry_phase_difference(1e6, 0.0, 0.25, SqueezingConvention::Arctan).unwrap(), 0.0);
        // ωc/a = 1, G = 1/4: cosh²q − i sinh²q
        let q = (-PI).exp().atan();
        assert!((q - 0.04319).abs() < 1e-5);
        let expect = (-(q.sinh().powi(2))).atan2(q.cosh().powi(2));
        let got = berry_phase_difference(1.0, C, 0.25, SqueezingConvention::Arctan).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-12);
        let qh = (-PI).exp().atanh();
        let expect_h = (-(qh.sinh().powi(2))).atan2(qh.cosh().powi(2));
        let got_h = berry_phase_difference(1.0, C, 0.25, SqueezingConvention::Arctanh).unwrap();
        assert_relative_eq!(got_h, expect_h, max_relative = 1e-12);
        assert!(got_h != got);
    }

    #[test]
    fn negativity_values() {
        let t = 1e-3;
        let at = |r| negativity_bound(&DetectorPair::new(r, t, 0.0).unwrap());
        assert_relative_eq!(at(C * t), (-1.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(at(2.0 * C * t), (-8.0f64).exp(), max_relative = 1e-14);
        assert!((at(2.0 * C * t) - 3.35e-4).abs() < 1e-6);
        assert!(at(1e-3 * C * t) > 1.0 - 1e-8);
        assert!(DetectorPair::new(0.0, t, 0.0).is_err());
    }

    #[test]
    fn spacelike_windows() {
        assert!((spacelike_window(3.6e7).unwrap() - 0.12).abs() < 0.001);
        assert!((spacelike_window(1.496e11).unwrap() - 499.0).abs() < 0.1);
        assert!((spacelike_window(1.0).unwrap() - 3.34e-9).abs() < 1e-11);
    }

    #[test]
    fn ralph_values() {
        let m = EventOperatorModel::new(500e-15, 0.9).unwrap();
        assert_eq!(ralph_correlation(&m, 0.0), 0.9);
        assert_relative_eq!(ralph_correlation(&m, 1e-12), 0.9 / std::f64::consts::E, max_relative = 1e-14);
        assert_relative_eq!(ralph_correlation(&m, 5e-12), 0.9 * (-25.0f64).exp(), max_relative = 1e-12);
        assert!(EventOperatorModel::new(0.0, 0.9).is_err());
        assert!(EventOperatorModel::new(1e-12, 1.5).is_err());
    }

    #[test]
    fn proper_time_ground_vs_leo() {
        let e = EarthParams::standard();
        let phi = |r: f64| -e.mu / r;
        let d = proper_time_differential(phi(e.mean_radius), phi(e.mean_radius + 400e3), 1.3e-3, false).unwrap();
        assert!((d / 5.4e-14 - 1.0).abs() < 0.02, "{d}");
        assert_eq!(proper_time_differential(-1.0, -1.0, 1.0, false).unwrap(), 0.0);
        let twice = proper_time_differential(phi(e.mean_radius), phi(e.mean_radius + 400e3), 1.3e-3, true).unwrap();
        assert_relative_eq!(twice, 2.0 * d, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn berry_phase_has_unit_period(w in 0.0f64..10.0, g in -5.0f64..5.0) {
            let a = C;
            let p0 = berry_phase_difference(w, a, g, SqueezingConvention::Arctan).unwrap();
            let p1 = berry_phase_difference(w, a, g + 1.0, SqueezingConvention::Arctan).unwrap();
            prop_assert!((p0 - p1).abs() < 1e-12);
        }

        #[test]
        fn monotone_and_bounded(r1 in 1.0f64..1e8, r2 in 1.0f64..1e8, d1 in 0.0f64..1e-11, d2 in 0.0f64..1e-11) {
            let t = 0.05;
            let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
            let n_lo = negativity_bound(&DetectorPair::new(lo, t, 0.0).unwrap());
            let n_hi = negativity_bound(&DetectorPair::new(hi, t, 0.0).unwrap());
            prop_assert!(n_hi <= n_lo && n_lo <= 1.0 && n_hi >= 0.0);
            let m = EventOperatorModel::new(500e-15, 0.8).unwrap();
            let (a, b) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(ralph_correlation(&m, b) <= ralph_correlation(&m, a));
            prop_assert!(ralph_correlation(&m, a) <= 0.8);
        }

        #[test]
        fn linear_and_exact(a in 0.0f64..1e22, s in 0.0f64..1e12) {
            prop_assert!((unruh_temperature(2.0 * a).unwrap() - 2.0 * unruh_temperature(a).unwrap()).abs() <= 1e-15 * unruh_temperature(a).unwrap());
            prop_assert!((spacelike_window(s).unwrap() * C - s).abs() <= 1e-15 * s);
        }
    }
}
