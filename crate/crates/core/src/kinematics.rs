//! Special-relativistic event geometry in the (approximately inertial)
//! Earth frame: invariant intervals, simultaneity frames, timing shifts and
//! light-cone windows.

use nalgebra::{Vector3, Vector4};

use crate::error::{domain, Result};
use crate::lorentz::LorentzMatrix;
use crate::units::C;

/// Relative tolerance below which an interval is classified lightlike.
pub const LIGHTLIKE_EPS: f64 = 1e-12;

/// Typical human reaction time, s.
pub const HUMAN_REACTION_TIME: f64 = 0.1;

/// A spacetime point. Time in seconds, coordinates in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Event {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    /// Event on the x axis, for 1+1 dimensional setups.
    pub fn on_axis(t: f64, x: f64) -> Self {
        Self::new(t, x, 0.0, 0.0)
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    fn to_four(self) -> Vector4<f64> {
        Vector4::new(C * self.t, self.x, self.y, self.z)
    }

    fn from_four(v: Vector4<f64>) -> Self {
        Self::new(v[0] / C, v[1], v[2], v[3])
    }

    /// Applies a Lorentz transformation (acting on (ct, x, y, z)).
    pub fn transform(&self, l: &LorentzMatrix) -> Self {
        Self::from_four(l.apply(&self.to_four()))
    }

    /// Coordinates of this event as seen from a frame moving with velocity
    /// `beta` (in units of c) relative to the current one.
    pub fn in_moving_frame(&self, beta: &Vector3<f64>) -> Result<Self> {
        Ok(self.transform(&LorentzMatrix::boost(&-beta)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Spacelike,
    Timelike,
    Lightlike,
}

impl IntervalKind {
    /// Unit of [`IntervalResult::magnitude`] for this kind.
    pub fn unit(self) -> &'static str {
        match self {
            IntervalKind::Timelike => "s",
            IntervalKind::Spacelike | IntervalKind::Lightlike => "m",
        }
    }
}

/// Classified invariant interval. `magnitude` is a proper distance in m for
/// spacelike pairs, a proper time in s for timelike pairs and 0 for
/// lightlike pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalResult {
    pub kind: IntervalKind,
    pub magnitude: f64,
}

/// (Δx)² and (cΔt)² between two events.
fn squared_parts(e1: &Event, e2: &Event) -> (f64, f64) {
    let dx2 = (e2.position() - e1.position()).norm_squared();
    let cdt = C * (e2.t - e1.t);
    (dx2, cdt * cdt)
}

pub fn invariant_interval(e1: &Event, e2: &Event) -> IntervalResult {
    let (dx2, ct2) = squared_parts(e1, e2);
    let s2 = dx2 - ct2;
    if s2.abs() <= LIGHTLIKE_EPS * dx2.max(ct2) {
        IntervalResult {
            kind: IntervalKind::Lightlike,
            magnitude: 0.0,
        }
    } else if s2 > 0.0 {
        IntervalResult {
            kind: IntervalKind::Spacelike,
            magnitude: s2.sqrt(),
        }
    } else {
        IntervalResult {
            kind: IntervalKind::Timelike,
            magnitude: (-s2).sqrt() / C,
        }
    }
}

/// The frame in which two spacelike events are simultaneous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimultaneityFrame {
    /// Frame speed |v|/c.
    pub beta: f64,
    /// Standard Lorentz factor 1/√(1−β²).
    pub gamma: f64,
    /// Frame velocity in units of c, along the spatial separation.
    pub velocity: Vector3<f64>,
}

pub fn simultaneity_boost_speed(e1: &Event, e2: &Event) -> Result<SimultaneityFrame> {
    let interval = invariant_interval(e1, e2);
    if interval.kind != IntervalKind::Spacelike {
        return domain("no simultaneity frame exists for timelike or lightlike pairs");
    }
    let dx = e2.position() - e1.position();
    let dist = dx.norm();
    let signed = C * (e2.t - e1.t) / dist;
    let beta = signed.abs();
    let velocity = dx * (signed / dist);
    Ok(SimultaneityFrame {
        beta,
        gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        velocity,
    })
}

/// Shift of the simultaneity line per unit separation, v₀/c² (s/m).
pub fn timing_shift_per_distance(v0: f64) -> Result<f64> {
    if !(0.0..C).contains(&v0) {
        return domain(format!("relative speed {v0} m/s must lie in [0, c)"));
    }
    Ok(v0 / (C * C))
}

/// Separation at which the simultaneity shift equals `switch_time`.
pub fn min_separation_for_switching(v0: f64, switch_time: f64) -> Result<f64> {
    if !(v0 > 0.0) {
        return domain("relative speed must be positive");
    }
    if switch_time < 0.0 {
        return domain("switching time must be non-negative");
    }
    Ok(switch_time / timing_shift_per_distance(v0)?)
}

pub fn light_travel_time(distance: f64) -> f64 {
    distance / C
}

/// Longest collapse time a Bell test over `separation` can exclude.
pub fn collapse_exclusion_window(separation: f64) -> f64 {
    light_travel_time(separation)
}

/// Whether signals across `distance` take longer than a human reaction.
pub fn exceeds_human_reaction(distance: f64) -> bool {
    light_travel_time(distance) > HUMAN_REACTION_TIME
}

/// Causal contact under a generalized light cone with signal speed κc.
pub fn causally_connected(e1: &Event, e2: &Event, speed_factor: f64) -> Result<bool> {
    if !(speed_factor >= 1.0) {
        return domain(format!("speed factor {speed_factor} must be >= 1"));
    }
    let (dx2, ct2) = squared_parts(e1, e2);
    let reach2 = speed_factor * speed_factor * ct2;
    Ok(dx2 - reach2 <= LIGHTLIKE_EPS * dx2.max(reach2))
}
