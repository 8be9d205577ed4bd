//! Physical constants, Earth parameters and the few unit conversions the
//! rest of the crate needs. Everything internal is SI; cgs values are only
//! accepted through the explicit conversion helpers.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Newtonian gravitational constant, m³/(kg·s²) (CODATA 2018).
pub const G: f64 = 6.674_30e-11;
/// Planck constant, J·s (exact).
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Standard surface gravity used for the redshift/COW defaults, m/s².
pub const G0: f64 = 9.81;

/// Milliarcseconds per radian.
pub const MAS_PER_RAD: f64 = 180.0 * 3600.0 * 1000.0 / PI;

/// Bundle of the fundamental constants, for callers that want to pass them
/// around as a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub g: f64,
    pub hbar: f64,
    pub h: f64,
    pub k_b: f64,
    pub g0: f64,
}

impl Constants {
    pub const CODATA_2018: Constants = Constants {
        c: C,
        g: G,
        hbar: HBAR,
        h: H,
        k_b: K_B,
        g0: G0,
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Earth parameters used by orbits, frame dragging and redshift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthParams {
    /// kg
    pub mass: f64,
    /// kg·m²/s
    pub angular_momentum: f64,
    /// G·mass, m³/s²
    pub mu: f64,
    /// Equatorial radius, m.
    pub radius: f64,
    /// Mean radius, m.
    pub mean_radius: f64,
    /// Sidereal rotation rate, rad/s.
    pub rotation_rate: f64,
}

/// Earth's angular momentum in cgs units, cm²·g/s.
pub const EARTH_J_CGS: f64 = 5.86e40;
/// Earth's mass in grams as quoted alongside [`EARTH_J_CGS`].
pub const EARTH_MASS_CGS: f64 = 5.98e27;

const EARTH_MU: f64 = 3.986_004_418e14;

impl EarthParams {
    /// Standard gravitational parameter (WGS-84 mu) with the cgs angular momentum.
    pub fn standard() -> Self {
        Self {
            mass: EARTH_MU / G,
            angular_momentum: cgs_angular_momentum_to_si(EARTH_J_CGS),
            mu: EARTH_MU,
            radius: 6.378_137e6,
            mean_radius: 6.371e6,
            rotation_rate: 7.292_115_9e-5,
        }
    }

    /// Builds the parameters from a cgs mass (g) and angular momentum (cm²·g/s).
    pub fn from_cgs(mass_g: f64, j_cgs: f64) -> Result<Self> {
        if !(mass_g > 0.0) || !(j_cgs > 0.0) {
            return Err(Error::Config(
                "earth mass and angular momentum must be positive".into(),
            ));
        }
        let mass = mass_g * 1e-3;
        Ok(Self {
            mass,
            angular_momentum: cgs_angular_momentum_to_si(j_cgs),
            mu: G * mass,
            ..Self::standard()
        })
    }

    /// The 5.98×10²⁷ g / 5.86×10⁴⁰ cm²·g/s pair.
    pub fn cgs_reference() -> Self {
        Self::from_cgs(EARTH_MASS_CGS, EARTH_J_CGS).expect("positive constants")
    }
}

impl Default for EarthParams {
    fn default() -> Self {
        Self::standard()
    }
}

/// cm²·g/s → kg·m²/s.
pub fn cgs_angular_momentum_to_si(j: f64) -> f64 {
    j * 1e-7
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleUnit {
    Rad,
    Deg,
    Arcsec,
    ArcMsec,
}

impl AngleUnit {
    /// Size of one unit in radians.
    fn radians(self) -> f64 {
        match self {
            AngleUnit::Rad => 1.0,
            AngleUnit::Deg => PI / 180.0,
            AngleUnit::Arcsec => PI / (180.0 * 3600.0),
            AngleUnit::ArcMsec => PI / (180.0 * 3600.0 * 1000.0),
        }
    }
}

impl FromStr for AngleUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rad" => Ok(AngleUnit::Rad),
            "deg" => Ok(AngleUnit::Deg),
            "arcsec" => Ok(AngleUnit::Arcsec),
            "mas" | "arcmsec" | "arc msec" => Ok(AngleUnit::ArcMsec),
            other => Err(Error::Config(format!("unknown angle unit '{other}'"))),
        }
    }
}

/// Converts an angle in radians into `target`.
pub fn convert_angle(x: f64, target: AngleUnit) -> f64 {
    x / target.radians()
}

/// Converts an angle given in `unit` back into radians.
pub fn angle_to_radians(x: f64, unit: AngleUnit) -> f64 {
    x * unit.radians()
}

/// String-tagged variant of [`convert_angle`], for configuration input.
pub fn convert_angle_named(x: f64, target: &str) -> Result<f64> {
    Ok(convert_angle(x, target.parse()?))
}

/// Dimension tag carried by a [`Quantity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Length,
    Time,
    Angle,
    Frequency,
    AngularFrequency,
    Speed,
    Acceleration,
    Temperature,
    Phase,
    Dimensionless,
    Count,
    TimePerLength,
    InverseTimeSquared,
}

impl Unit {
    /// Symbol used in reports.
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Length => "m",
            Unit::Time => "s",
            Unit::Angle => "rad",
            Unit::Frequency => "Hz",
            Unit::AngularFrequency => "rad/s",
            Unit::Speed => "m/s",
            Unit::Acceleration => "m/s^2",
            Unit::Temperature => "K",
            Unit::Phase => "rad",
            Unit::Dimensionless => "1",
            Unit::Count => "count",
            Unit::TimePerLength => "s/m",
            Unit::InverseTimeSquared => "s^-2",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A value with a dimension tag. Addition and subtraction between
/// different tags is rejected; scaling by a plain number is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity> {
        self.same_unit(rhs)?;
        Ok(Quantity::new(self.value + rhs.value, self.unit))
    }

    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity> {
        self.same_unit(rhs)?;
        Ok(Quantity::new(self.value - rhs.value, self.unit))
    }

    fn same_unit(self, rhs: Quantity) -> Result<()> {
        if self.unit == rhs.unit {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unit mismatch: {} vs {}",
                self.unit, rhs.unit
            )))
        }
    }
}

impl Add for Quantity {
    type Output = Result<Quantity>;
    fn add(self, rhs: Quantity) -> Self::Output {
        self.checked_add(rhs)
    }
}

impl Sub for Quantity {
    type Output = Result<Quantity>;
    fn sub(self, rhs: Quantity) -> Self::Output {
        self.checked_sub(rhs)
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        Quantity::new(self.value * rhs, self.unit)
    }
}

impl Neg for Quantity {
    type Output = Quantity;
    fn neg(self) -> Quantity {
        Quantity::new(-self.value, self.unit)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}
