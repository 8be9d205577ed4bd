//! Scenario files: TOML with top-level mission scalars and optional
//! sections. Angles are written in degrees and converted on load. Unknown
//! keys are rejected.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::bell::DEFAULT_SEED;
use crate::diffusion::{DiffusionParams, Propagation};
use crate::error::{Error, Result};
use crate::orbits::{GroundStation, OrbitPreset, OrbitSpec};
use crate::qft::SqueezingConvention;
use crate::units::{EarthParams, G0};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SourceLocation {
    #[default]
    Ground,
    Satellite,
}

/// Effect groups that can be switched off. Event geometry is always reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EffectGroup {
    Timing,
    Windows,
    Wigner,
    Gravitomagnetism,
    Interferometry,
    Qft,
    EventOperator,
    Diffusion,
    Bell,
}

impl EffectGroup {
    pub const ALL: [EffectGroup; 9] = [
        EffectGroup::Timing,
        EffectGroup::Windows,
        EffectGroup::Wigner,
        EffectGroup::Gravitomagnetism,
        EffectGroup::Interferometry,
        EffectGroup::Qft,
        EffectGroup::EventOperator,
        EffectGroup::Diffusion,
        EffectGroup::Bell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EffectGroup::Timing => "timing",
            EffectGroup::Windows => "windows",
            EffectGroup::Wigner => "wigner",
            EffectGroup::Gravitomagnetism => "gravitomagnetism",
            EffectGroup::Interferometry => "interferometry",
            EffectGroup::Qft => "qft",
            EffectGroup::EventOperator => "event_operator",
            EffectGroup::Diffusion => "diffusion",
            EffectGroup::Bell => "bell",
        }
    }
}

impl FromStr for EffectGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        EffectGroup::ALL
            .into_iter()
            .find(|g| g.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown effect group '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EffectFlags {
    pub timing: bool,
    pub windows: bool,
    pub wigner: bool,
    pub gravitomagnetism: bool,
    pub interferometry: bool,
    pub qft: bool,
    pub event_operator: bool,
    pub diffusion: bool,
    pub bell: bool,
}

impl Default for EffectFlags {
    fn default() -> Self {
        Self::all(true)
    }
}

impl EffectFlags {
    pub fn all(on: bool) -> Self {
        Self {
            timing: on,
            windows: on,
            wigner: on,
            gravitomagnetism: on,
            interferometry: on,
            qft: on,
            event_operator: on,
            diffusion: on,
            bell: on,
        }
    }

    pub fn enabled(&self, g: EffectGroup) -> bool {
        match g {
            EffectGroup::Timing => self.timing,
            EffectGroup::Windows => self.windows,
            EffectGroup::Wigner => self.wigner,
            EffectGroup::Gravitomagnetism => self.gravitomagnetism,
            EffectGroup::Interferometry => self.interferometry,
            EffectGroup::Qft => self.qft,
            EffectGroup::EventOperator => self.event_operator,
            EffectGroup::Diffusion => self.diffusion,
            EffectGroup::Bell => self.bell,
        }
    }

    pub fn set(&mut self, g: EffectGroup, on: bool) {
        let slot = match g {
            EffectGroup::Timing => &mut self.timing,
            EffectGroup::Windows => &mut self.windows,
            EffectGroup::Wigner => &mut self.wigner,
            EffectGroup::Gravitomagnetism => &mut self.gravitomagnetism,
            EffectGroup::Interferometry => &mut self.interferometry,
            EffectGroup::Qft => &mut self.qft,
            EffectGroup::EventOperator => &mut self.event_operator,
            EffectGroup::Diffusion => &mut self.diffusion,
            EffectGroup::Bell => &mut self.bell,
        };
        *slot = on;
    }

    /// Parses a comma list such as "timing,bell"; only the named groups stay on.
    pub fn from_list(list: &str) -> Result<Self> {
        let mut flags = Self::all(false);
        for item in list.split(',').filter(|s| !s.trim().is_empty()) {
            flags.set(item.parse()?, true);
        }
        Ok(flags)
    }
}

/// Explicit orbital elements, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitElements {
    pub semi_major_axis: f64,
    #[serde(default)]
    pub eccentricity: f64,
    #[serde(default)]
    pub inclination_deg: f64,
    #[serde(default)]
    pub raan_deg: f64,
    #[serde(default)]
    pub arg_perigee_deg: f64,
    #[serde(default)]
    pub mean_anomaly_deg: f64,
    #[serde(default)]
    pub epoch: f64,
}

impl OrbitElements {
    pub fn to_spec(&self) -> OrbitSpec {
        OrbitSpec {
            semi_major_axis: self.semi_major_axis,
            eccentricity: self.eccentricity,
            inclination: self.inclination_deg.to_radians(),
            raan: self.raan_deg.to_radians(),
            arg_perigee: self.arg_perigee_deg.to_radians(),
            mean_anomaly_at_epoch: self.mean_anomaly_deg.to_radians(),
            epoch: self.epoch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationConfig {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    #[serde(default)]
    pub altitude: f64,
}

impl StationConfig {
    pub fn to_station(&self) -> Result<GroundStation> {
        GroundStation::new(self.latitude_deg.to_radians(), self.longitude_deg.to_radians(), self.altitude)
            .map_err(|_| Error::Config("station.latitude_deg must lie in [-90, 90]".into()))
    }
}

/// Asymmetric Bell test on a line: the ground detector clicks `ground_delay`
/// after emission at the origin, the satellite detector at distance
/// `emission_distance` when the photon arrives.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub emission_distance: f64,
    pub ground_delay: f64,
    pub speed_factor: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            emission_distance: 1e6,
            ground_delay: 20e-6,
            speed_factor: 1.5,
        }
    }
}

/// Photon and boost directions for the leading-order Wigner phase. The
/// boost speed is the satellite speed at epoch.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerConfig {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub theta_b_deg: f64,
    pub phi_b_deg: f64,
}

impl Default for WignerConfig {
    fn default() -> Self {
        Self {
            theta_deg: 90.0,
            phi_deg: 90.0,
            theta_b_deg: 90.0,
            phi_b_deg: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GravitomagnetismConfig {
    /// Emission radius for the Kerr estimate, m; 0 uses the orbit's perigee radius.
    pub emission_radius: f64,
    pub theta_deg: f64,
    /// Impact parameter of the axial ray, m; 0 uses the mean Earth radius.
    pub impact_parameter: f64,
}

impl Default for GravitomagnetismConfig {
    fn default() -> Self {
        Self {
            emission_radius: 0.0,
            theta_deg: 45.0,
            impact_parameter: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QftConfig {
    /// m/s²
    pub acceleration: f64,
    /// Detector gap, rad/s.
    pub gap_frequency: f64,
    pub berry_g: f64,
    pub berry_convention: ConventionName,
    /// Detector interaction time for the negativity bound, s.
    pub interaction_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ConventionName {
    #[default]
    Arctan,
    Arctanh,
}

impl From<ConventionName> for SqueezingConvention {
    fn from(c: ConventionName) -> Self {
        match c {
            ConventionName::Arctan => SqueezingConvention::Arctan,
            ConventionName::Arctanh => SqueezingConvention::Arctanh,
        }
    }
}

impl Default for QftConfig {
    fn default() -> Self {
        Self {
            acceleration: G0,
            gap_frequency: 1e6,
            berry_g: 0.25,
            berry_convention: ConventionName::Arctan,
            interaction_time: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiffusionConfig {
    pub c_diff: f64,
    pub d_drift: f64,
    pub cmb_time: f64,
    pub cmb_frequency: f64,
    pub chi_bound: f64,
    pub mu_bound: f64,
    /// Photon path for the forecast, m; 0 uses the orbit's ground range.
    pub link_distance: f64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self {
            c_diff: 2e-9,
            d_drift: 4e-8,
            cmb_time: Propagation::CMB.time,
            cmb_frequency: Propagation::CMB.frequency,
            chi_bound: 0.1,
            mu_bound: 0.025,
            link_distance: 0.0,
        }
    }
}

impl DiffusionConfig {
    pub fn params(&self) -> Result<DiffusionParams> {
        DiffusionParams::new(self.c_diff, self.d_drift)
    }
}

/// A mission scenario as read from a file. Every field has a default, so an
/// empty file describes the leo1000 preset with an 800 nm link.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub preset: Option<String>,
    pub orbit: Option<OrbitElements>,
    pub station: Vec<StationConfig>,
    pub source: SourceLocation,
    /// m
    pub wavelength: f64,
    /// s
    pub fibre_delay: f64,
    pub fibre_index: f64,
    /// Detector time resolution, s.
    pub detector_resolution: f64,
    pub max_correlation: f64,
    /// s
    pub overlap_time: f64,
    pub retroreflector: bool,
    /// s
    pub analyzer_switch_time: f64,
    /// Relative speed of the two analyzers, m/s.
    pub relative_speed: f64,
    pub visibility: f64,
    pub photon_budget: u64,
    pub seed: u64,
    pub workers: usize,
    pub geometry: GeometryConfig,
    pub wigner: WignerConfig,
    pub gravitomagnetism: GravitomagnetismConfig,
    pub qft: QftConfig,
    pub diffusion: DiffusionConfig,
    pub effects: EffectFlags,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            preset: None,
            orbit: None,
            station: Vec::new(),
            source: SourceLocation::Ground,
            wavelength: 800e-9,
            fibre_delay: 20e-6,
            fibre_index: 1.0,
            detector_resolution: 500e-15,
            max_correlation: 1.0,
            overlap_time: 1.3e-3,
            retroreflector: false,
            analyzer_switch_time: 10e-9,
            relative_speed: 15e3,
            visibility: 0.95,
            photon_budget: 1000,
            seed: DEFAULT_SEED,
            workers: 0,
            geometry: GeometryConfig::default(),
            wigner: WignerConfig::default(),
            gravitomagnetism: GravitomagnetismConfig::default(),
            qft: QftConfig::default(),
            diffusion: DiffusionConfig::default(),
            effects: EffectFlags::default(),
        }
    }
}

pub const DEFAULT_PRESET: OrbitPreset = OrbitPreset::Leo1000;

/// Where the satellite is: a preset, explicit elements, or a fixed range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Platform {
    Orbit { spec: OrbitSpec, preset: Option<OrbitPreset> },
    FixedRange(f64),
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be non-negative, got {v}")))
    }
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(describe_toml_error(text, &e)))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.preset.is_some() && self.orbit.is_some() {
            return Err(Error::Config("give either preset or [orbit], not both".into()));
        }
        self.platform(&EarthParams::standard())?;
        if self.station.len() > 2 {
            return Err(Error::Config(format!("at most two stations allowed, got {}", self.station.len())));
        }
        for st in &self.station {
            st.to_station()?;
        }
        positive("wavelength", self.wavelength)?;
        non_negative("fibre_delay", self.fibre_delay)?;
        if !(self.fibre_index >= 1.0) {
            return Err(Error::Config(format!("fibre_index must be at least 1, got {}", self.fibre_index)));
        }
        positive("detector_resolution", self.detector_resolution)?;
        if !(self.max_correlation > 0.0 && self.max_correlation <= 1.0) {
            return Err(Error::Config(format!("max_correlation must lie in (0, 1], got {}", self.max_correlation)));
        }
        non_negative("overlap_time", self.overlap_time)?;
        positive("analyzer_switch_time", self.analyzer_switch_time)?;
        positive("relative_speed", self.relative_speed)?;
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::Config(format!("visibility must lie in [0, 1], got {}", self.visibility)));
        }
        if self.photon_budget == 0 {
            return Err(Error::Config("photon_budget must be positive".into()));
        }
        positive("geometry.emission_distance", self.geometry.emission_distance)?;
        non_negative("geometry.ground_delay", self.geometry.ground_delay)?;
        if !(self.geometry.speed_factor >= 1.0) {
            return Err(Error::Config("geometry.speed_factor must be at least 1".into()));
        }
        for (name, v) in [
            ("wigner.theta_deg", self.wigner.theta_deg),
            ("wigner.phi_deg", self.wigner.phi_deg),
            ("wigner.theta_b_deg", self.wigner.theta_b_deg),
            ("wigner.phi_b_deg", self.wigner.phi_b_deg),
            ("gravitomagnetism.theta_deg", self.gravitomagnetism.theta_deg),
            ("qft.berry_g", self.qft.berry_g),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        non_negative("gravitomagnetism.emission_radius", self.gravitomagnetism.emission_radius)?;
        non_negative("gravitomagnetism.impact_parameter", self.gravitomagnetism.impact_parameter)?;
        non_negative("qft.acceleration", self.qft.acceleration)?;
        non_negative("qft.gap_frequency", self.qft.gap_frequency)?;
        positive("qft.interaction_time", self.qft.interaction_time)?;
        non_negative("diffusion.c_diff", self.diffusion.c_diff)?;
        if !self.diffusion.d_drift.is_finite() {
            return Err(Error::Config("diffusion.d_drift must be finite".into()));
        }
        positive("diffusion.cmb_time", self.diffusion.cmb_time)?;
        positive("diffusion.cmb_frequency", self.diffusion.cmb_frequency)?;
        non_negative("diffusion.chi_bound", self.diffusion.chi_bound)?;
        non_negative("diffusion.mu_bound", self.diffusion.mu_bound)?;
        non_negative("diffusion.link_distance", self.diffusion.link_distance)?;
        Ok(())
    }

    pub fn platform(&self, earth: &EarthParams) -> Result<Platform> {
        if let Some(el) = &self.orbit {
            let spec = el.to_spec();
            spec.validate(earth).map_err(|e| Error::Config(format!("orbit: {e}")))?;
            return Ok(Platform::Orbit { spec, preset: None });
        }
        let preset = match &self.preset {
            Some(name) => name.parse::<OrbitPreset>().map_err(|_| Error::Config(format!("preset '{name}' does not exist")))?,
            None => DEFAULT_PRESET,
        };
        Ok(match preset.orbit(earth) {
            Some(spec) => Platform::Orbit { spec, preset: Some(preset) },
            None => Platform::FixedRange(preset.characteristic_range(earth)),
        })
    }

    pub fn stations(&self) -> Result<Vec<GroundStation>> {
        self.station.iter().map(|s| s.to_station()).collect()
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Scenario::from_toml_str(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn describe_toml_error(text: &str, e: &toml::de::Error) -> String {
    let msg = e.message().trim().to_string();
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            format!("line {line}, column {col}: {msg}")
        }
        None => msg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let s = Scenario::from_toml_str("preset = \"leo1000\"\nwavelength = 800e-9\nfibre_delay = 20e-6\n").unwrap();
        assert_eq!(s.preset.as_deref(), Some("leo1000"));
        assert!(matches!(s.platform(&EarthParams::standard()).unwrap(), Platform::Orbit { preset: Some(OrbitPreset::Leo1000), .. }));
        assert_eq!(Scenario::from_toml_str("").unwrap(), Scenario::default());
    }

    #[test]
    fn validation_names_the_field() {
        let e = Scenario::from_toml_str("wavelength = -1.0\n").unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("wavelength")), "{e}");
        let e = Scenario::from_toml_str("preset = \"mars\"\n").unwrap_err();
        assert!(e.to_string().contains("mars"));
        let e = Scenario::from_toml_str("[geometry]\nspeed_factor = 0.5\n").unwrap_err();
        assert!(e.to_string().contains("speed_factor"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = Scenario::from_toml_str("wavelength = 1e-6\nbogus = 3\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("column 1"), "{msg}");
        let e = Scenario::from_toml_str("wavelength = = 3\n").unwrap_err();
        assert!(e.to_string().contains("line 1"));
    }

    #[test]
    fn explicit_orbit_and_stations() {
        let text = "[orbit]\nsemi_major_axis = 7.0e6\ninclination_deg = 98.0\n\n[[station]]\nlatitude_deg = 48.2\nlongitude_deg = 16.4\naltitude = 200.0\n";
        let s = Scenario::from_toml_str(text).unwrap();
        match s.platform(&EarthParams::standard()).unwrap() {
            Platform::Orbit { spec, preset } => {
                assert!(preset.is_none());
                assert!((spec.inclination - 98f64.to_radians()).abs() < 1e-15);
            }
            _ => panic!("expected an orbit"),
        }
        assert_eq!(s.stations().unwrap().len(), 1);
        let low = "[orbit]\nsemi_major_axis = 6.0e6\n";
        assert!(Scenario::from_toml_str(low).is_err());
        let both = "preset = \"geo\"\n[orbit]\nsemi_major_axis = 7.0e6\n";
        assert!(Scenario::from_toml_str(both).is_err());
    }

    #[test]
    fn effect_lists() {
        let f = EffectFlags::from_list("timing, bell").unwrap();
        assert!(f.timing && f.bell && !f.qft);
        assert!(EffectFlags::from_list("timing,nope").is_err());
        assert_eq!(EffectFlags::from_list("").unwrap(), EffectFlags::all(false));
        assert!("event-operator".parse::<EffectGroup>().is_ok());
    }
}
