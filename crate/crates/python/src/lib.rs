//! Python bindings for qsat-core.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use qsat_core::bell::{self, ChshSettings};
use qsat_core::diffusion::{CircleDensity, DiffusionParams, Propagation};
use qsat_core::gravitomagnetism::{self, SpinningBody};
use qsat_core::interferometry::{self, OpticalLink};
use qsat_core::kinematics::{self, Event};
use qsat_core::lorentz::LorentzMatrix;
use qsat_core::qft::{self, SqueezingConvention};
use qsat_core::scenario::{self, Scenario};
use qsat_core::units::{convert_angle, AngleUnit, EarthParams};
use qsat_core::wigner::{self, FourMomentum};
use qsat_core::Error;

use nalgebra::Vector3;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numeric(m) => PyArithmeticError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qsat_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Invariant interval between events (t, x, y, z). Returns (kind, magnitude)
/// where magnitude is meters when spacelike and seconds when timelike.
#[pyfunction]
fn invariant_interval(e1: (f64, f64, f64, f64), e2: (f64, f64, f64, f64)) -> (String, f64) {
    let a = Event::new(e1.0, e1.1, e1.2, e1.3);
    let b = Event::new(e2.0, e2.1, e2.2, e2.3);
    let r = kinematics::invariant_interval(&a, &b);
    (format!("{:?}", r.kind).to_lowercase(), r.magnitude)
}

/// Speed (v/c) of the frame in which two spacelike events are simultaneous.
#[pyfunction]
fn simultaneity_beta(e1: (f64, f64, f64, f64), e2: (f64, f64, f64, f64)) -> PyResult<f64> {
    let a = Event::new(e1.0, e1.1, e1.2, e1.3);
    let b = Event::new(e2.0, e2.1, e2.2, e2.3);
    Ok(kinematics::simultaneity_boost_speed(&a, &b).py()?.beta)
}

/// Simultaneity shift per meter of separation, s/m.
#[pyfunction]
fn timing_shift_per_distance(v0: f64) -> PyResult<f64> {
    kinematics::timing_shift_per_distance(v0).py()
}

#[pyfunction]
fn light_travel_time(distance: f64) -> f64 {
    kinematics::light_travel_time(distance)
}

/// Leading-order boost phase for photon direction (theta, phi) and boost
/// direction (theta_b, phi_b) at speed v, radians.
#[pyfunction]
fn first_order_boost_phase(theta: f64, phi: f64, theta_b: f64, phi_b: f64, v: f64) -> PyResult<f64> {
    wigner::first_order_boost_phase(theta, phi, theta_b, phi_b, v).py()
}

/// Exact little-group angle for a boost of speed beta along (theta_b, phi_b).
#[pyfunction]
fn wigner_angle(theta: f64, phi: f64, theta_b: f64, phi_b: f64, beta: f64) -> PyResult<f64> {
    let dir = Vector3::new(theta_b.sin() * phi_b.cos(), theta_b.sin() * phi_b.sin(), theta_b.cos());
    let boost = LorentzMatrix::boost(&(dir * beta)).py()?;
    wigner::wigner_angle(&boost, &FourMomentum::from_angles(theta, phi)).py()
}

/// Earth frame-dragging rotation between radii r1 and r2 (inf allowed), mas.
#[pyfunction]
#[pyo3(signature = (r1, r2=f64::INFINITY, theta=std::f64::consts::FRAC_PI_4))]
fn kerr_rotation_mas(r1: f64, r2: f64, theta: f64) -> PyResult<f64> {
    let body = SpinningBody::earth(&EarthParams::standard());
    let r = gravitomagnetism::kerr_principal_null_rotation(&body, r1, r2, theta).py()?;
    Ok(convert_angle(r, AngleUnit::ArcMsec))
}

/// Optical COW phase for a fibre loop of length l at altitude h, radians.
#[pyfunction]
#[pyo3(signature = (wavelength, fibre_length, altitude, fibre_index=1.0))]
fn optical_cow_phase(wavelength: f64, fibre_length: f64, altitude: f64, fibre_index: f64) -> PyResult<f64> {
    let mut link = OpticalLink::new(wavelength, fibre_length, altitude).py()?;
    link.fibre_index = fibre_index;
    link.validate().py()?;
    interferometry::optical_cow_phase(&link).py()
}

#[pyfunction]
fn grav_redshift(h: f64, g: f64) -> PyResult<f64> {
    interferometry::grav_redshift_weak_field(h, g).py()
}

#[pyfunction]
fn unruh_temperature(a: f64) -> PyResult<f64> {
    qft::unruh_temperature(a).py()
}

#[pyfunction]
fn required_acceleration(omega: f64) -> PyResult<f64> {
    qft::required_acceleration(omega).py()
}

/// Berry phase difference; convention is "arctan" or "arctanh".
#[pyfunction]
#[pyo3(signature = (omega_a, a, big_g, convention="arctan"))]
fn berry_phase_difference(omega_a: f64, a: f64, big_g: f64, convention: &str) -> PyResult<f64> {
    let conv = match convention {
        "arctan" => SqueezingConvention::Arctan,
        "arctanh" => SqueezingConvention::Arctanh,
        other => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
    };
    qft::berry_phase_difference(omega_a, a, big_g, conv).py()
}

#[pyfunction]
fn ralph_correlation(resolution: f64, max_correlation: f64, delta: f64) -> PyResult<f64> {
    let m = qft::EventOperatorModel::new(resolution, max_correlation).py()?;
    Ok(qft::ralph_correlation(&m, delta))
}

/// Pairs needed for a 3 sigma CHSH violation at visibility v.
#[pyfunction]
fn required_photons(v: f64) -> PyResult<u64> {
    bell::required_photons(v).py()
}

/// Simulated CHSH experiment with the optimal settings.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct ChshResult {
    s_value: f64,
    sigma: f64,
    n_sigma: f64,
    correlations: [f64; 4],
    counts: [[u64; 4]; 4],
}

#[pymethods]
impl ChshResult {
    fn __repr__(&self) -> String {
        format!("ChshResult(s_value={:.6}, sigma={:.6}, n_sigma={:.3})", self.s_value, self.sigma, self.n_sigma)
    }
}

#[pyfunction]
#[pyo3(signature = (visibility, pairs, seed=bell::DEFAULT_SEED, workers=0))]
fn simulate_chsh(py: Python<'_>, visibility: f64, pairs: u64, seed: u64, workers: usize) -> PyResult<ChshResult> {
    let settings = ChshSettings::optimal();
    let counts = py
        .detach(|| bell::simulate_coincidences(visibility, pairs, &settings, seed, workers))
        .py()?;
    let r = bell::chsh_estimate(&counts).py()?;
    Ok(ChshResult {
        s_value: r.s_value,
        sigma: r.sigma,
        n_sigma: r.n_sigma_violation,
        correlations: r.correlations,
        counts: counts.0,
    })
}

#[pyfunction]
#[pyo3(signature = (visibility, pairs, trials, threshold=3.0, seed=bell::DEFAULT_SEED, workers=0))]
fn violation_rate(
    py: Python<'_>,
    visibility: f64,
    pairs: u64,
    trials: u64,
    threshold: f64,
    seed: u64,
    workers: usize,
) -> PyResult<f64> {
    let settings = ChshSettings::optimal();
    py.detach(|| bell::violation_rate(visibility, pairs, &settings, trials, threshold, seed, workers))
        .py()
}

/// (chi, mu) forecast for photons of frequency nu travelling for time t.
#[pyfunction]
fn diffusion_forecast(c_diff: f64, d_drift: f64, time: f64, frequency: f64) -> PyResult<(f64, f64)> {
    let p = DiffusionParams::new(c_diff, d_drift).py()?;
    Propagation { time, frequency }.forecast(&p).py()
}

/// (c, d) bounds implied by CMB bounds on (chi, mu).
#[pyfunction]
fn cmb_bounds(chi: f64, mu: f64) -> PyResult<(f64, f64)> {
    let p = Propagation::CMB.invert_bounds(chi, mu).py()?;
    Ok((p.c_diff, p.d_drift))
}

/// Equatorial polarization density evolved over an affine span, sampled on
/// `points` grid angles.
#[pyfunction]
#[pyo3(signature = (mean, sigma, c_diff, d_drift, span, points=256))]
fn evolve_density(mean: f64, sigma: f64, c_diff: f64, d_drift: f64, span: f64, points: usize) -> PyResult<Vec<f64>> {
    let modes = (points.saturating_sub(1) / 2).clamp(1, qsat_core::diffusion::DEFAULT_MODES);
    let rho0 = CircleDensity::wrapped_normal(mean, sigma, modes).py()?;
    let p = DiffusionParams::new(c_diff, d_drift).py()?;
    qsat_core::diffusion::evolve_equator(&rho0, &p, span).py()?.to_grid(points).py()
}

/// Effect report for a TOML scenario; returns (effect, value, unit, reference) rows.
#[pyfunction]
#[pyo3(signature = (toml_text=""))]
fn run_report(py: Python<'_>, toml_text: &str) -> PyResult<Vec<(String, f64, String, String)>> {
    let s = Scenario::from_toml_str(toml_text).py()?;
    let rep = py.detach(|| scenario::run_report(&s)).py()?;
    Ok(rep
        .entries
        .into_iter()
        .map(|e| (e.effect, e.value, e.unit, e.reference))
        .collect())
}

#[pymodule]
fn qsat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<ChshResult>()?;
    m.add_function(wrap_pyfunction!(invariant_interval, m)?)?;
    m.add_function(wrap_pyfunction!(simultaneity_beta, m)?)?;
    m.add_function(wrap_pyfunction!(timing_shift_per_distance, m)?)?;
    m.add_function(wrap_pyfunction!(light_travel_time, m)?)?;
    m.add_function(wrap_pyfunction!(first_order_boost_phase, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_angle, m)?)?;
    m.add_function(wrap_pyfunction!(kerr_rotation_mas, m)?)?;
    m.add_function(wrap_pyfunction!(optical_cow_phase, m)?)?;
    m.add_function(wrap_pyfunction!(grav_redshift, m)?)?;
    m.add_function(wrap_pyfunction!(unruh_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(required_acceleration, m)?)?;
    m.add_function(wrap_pyfunction!(berry_phase_difference, m)?)?;
    m.add_function(wrap_pyfunction!(ralph_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(required_photons, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_chsh, m)?)?;
    m.add_function(wrap_pyfunction!(violation_rate, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_forecast, m)?)?;
    m.add_function(wrap_pyfunction!(cmb_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_density, m)?)?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    Ok(())
}
