//! Frame dragging and polarization rotation of light in a stationary
//! gravitational field.
//!
//! Along a ray both the unit wave vector and the unit polarization rotate
//! rigidly with angular velocity Ω = 2ω − (ω·k̂)k̂ − E_g × k, where ω is the
//! gravitomagnetic and E_g the gravitoelectric field. Fields are expressed
//! per unit affine length (1/m) with the affine parameter measured in
//! meters along the ray, so the wave vector entering Ω is k̂ itself.
//!
//! The closed-form Kerr results below are leading-order expressions in the
//! Newton gauge.

use nalgebra::Vector3;

use crate::error::{domain, Error, Result};
use crate::units::{EarthParams, C, G};

/// Gravitoelectric and gravitomagnetic fields at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GravField {
    /// ω = B_g/2, 1/m.
    pub omega: Vector3<f64>,
    /// E_g, 1/m.
    pub eg: Vector3<f64>,
}

impl GravField {
    pub fn is_finite(&self) -> bool {
        self.omega.iter().chain(self.eg.iter()).all(|v| v.is_finite())
    }
}

/// A mass with spin, for the closed-form Kerr estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinningBody {
    /// kg
    pub mass: f64,
    /// kg·m²/s
    pub angular_momentum: f64,
    pub spin_axis: Vector3<f64>,
}

impl SpinningBody {
    pub fn new(mass: f64, angular_momentum: f64, spin_axis: Vector3<f64>) -> Result<Self> {
        if !(mass > 0.0) {
            return domain("body mass must be positive");
        }
        if !(angular_momentum >= 0.0) {
            return domain("angular momentum must be non-negative");
        }
        let n = spin_axis.norm();
        if !(n > 0.0) {
            return domain("spin axis must be non-zero");
        }
        Ok(Self {
            mass,
            angular_momentum,
            spin_axis: spin_axis / n,
        })
    }

    pub fn earth(params: &EarthParams) -> Self {
        Self {
            mass: params.mass,
            angular_momentum: params.angular_momentum,
            spin_axis: Vector3::z(),
        }
    }

    /// Kerr length J/(Mc), m.
    pub fn kerr_length(&self) -> f64 {
        self.angular_momentum / (self.mass * C)
    }

    /// 4GJ/c³, m².
    fn lensing_area(&self) -> f64 {
        4.0 * G * self.angular_momentum / (C * C * C)
    }
}

/// Local state of a ray: position, propagation direction and polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub position: Vector3<f64>,
    pub khat: Vector3<f64>,
    pub fhat: Vector3<f64>,
    pub lambda: f64,
}

impl RayState {
    pub fn new(position: Vector3<f64>, khat: Vector3<f64>, fhat: Vector3<f64>) -> Result<Self> {
        let s = Self {
            position,
            khat,
            fhat,
            lambda: 0.0,
        };
        s.validate(1e-10)?;
        Ok(s)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if (self.khat.norm() - 1.0).abs() > tol || (self.fhat.norm() - 1.0).abs() > tol {
            return domain("k̂ and f̂ must be unit vectors");
        }
        if self.khat.dot(&self.fhat).abs() > tol {
            return domain("polarization must be transverse to k̂");
        }
        Ok(())
    }
}

pub fn rotation_rate(field: &GravField, khat: &Vector3<f64>, k: &Vector3<f64>) -> Vector3<f64> {
    2.0 * field.omega - field.omega.dot(khat) * khat - field.eg.cross(k)
}

/// Polarization phase rate: Machian term ω·k̂ plus a gauge-dependent
/// reference-frame term supplied by the caller.
pub fn phase_rate(omega: &Vector3<f64>, khat: &Vector3<f64>, frame_term: f64) -> f64 {
    omega.dot(khat) + frame_term
}

#[derive(Clone, Copy)]
struct Deriv {
    x: Vector3<f64>,
    k: Vector3<f64>,
    f: Vector3<f64>,
}

/// Integrates the rigid rotation of (k̂, f̂) with fixed-step RK4 for an
/// arbitrary angular velocity Ω(position, k̂). k̂ and f̂ are
/// re-orthonormalized after each step.
pub fn transport_with_rate<F>(initial: &RayState, rate: F, lambda_end: f64, steps: usize) -> Result<RayState>
where
    F: Fn(&Vector3<f64>, &Vector3<f64>) -> Result<Vector3<f64>>,
{
    if steps < 2 {
        return domain("transport needs at least two steps");
    }
    initial.validate(1e-10)?;
    let h = (lambda_end - initial.lambda) / steps as f64;
    let eval = |x: &Vector3<f64>, k: &Vector3<f64>, f: &Vector3<f64>| -> Result<Deriv> {
        let omega = rate(x, k)?;
        if !omega.iter().all(|v| v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite rotation rate at {x:?}")));
        }
        Ok(Deriv {
            x: *k,
            k: omega.cross(k),
            f: omega.cross(f),
        })
    };

    let mut s = *initial;
    for i in 0..steps {
        let (x, k, f) = (s.position, s.khat, s.fhat);
        let d1 = eval(&x, &k, &f)?;
        let d2 = eval(&(x + d1.x * (h / 2.0)), &(k + d1.k * (h / 2.0)), &(f + d1.f * (h / 2.0)))?;
        let d3 = eval(&(x + d2.x * (h / 2.0)), &(k + d2.k * (h / 2.0)), &(f + d2.f * (h / 2.0)))?;
        let d4 = eval(&(x + d3.x * h), &(k + d3.k * h), &(f + d3.f * h))?;
        let comb = |a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>, d: Vector3<f64>| {
            (a + 2.0 * b + 2.0 * c + d) * (h / 6.0)
        };
        let x_new = x + comb(d1.x, d2.x, d3.x, d4.x);
        let k_new = (k + comb(d1.k, d2.k, d3.k, d4.k)).normalize();
        let f_raw = f + comb(d1.f, d2.f, d3.f, d4.f);
        let f_new = (f_raw - f_raw.dot(&k_new) * k_new).normalize();
        if !(x_new.iter().chain(k_new.iter()).chain(f_new.iter()).all(|v| v.is_finite())) {
            return Err(Error::Numeric("ray transport produced non-finite state".into()));
        }
        s = RayState {
            position: x_new,
            khat: k_new,
            fhat: f_new,
            lambda: initial.lambda + h * (i + 1) as f64,
        };
    }
    Ok(s)
}

/// Parallel-transports a ray through a field given by `sampler`.
pub fn transport_ray<F>(initial: &RayState, sampler: F, lambda_end: f64, steps: usize) -> Result<RayState>
where
    F: Fn(&Vector3<f64>) -> GravField,
{
    transport_with_rate(
        initial,
        |x, k| {
            let field = sampler(x);
            if !field.is_finite() {
                return Err(Error::Numeric(format!("non-finite field sample at {x:?}")));
            }
            Ok(rotation_rate(&field, k, k))
        },
        lambda_end,
        steps,
    )
}

/// Rotation along an outgoing principal null geodesic of constant polar
/// angle θ from radius r1 to r2 (r2 may be infinite):
/// sin Δχ = −(J/Mc)(1/r1 − 1/r2) cos θ.
pub fn kerr_principal_null_rotation(body: &SpinningBody, r1: f64, r2: f64, theta: f64) -> Result<f64> {
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return domain("radii must be positive");
    }
    let arg = -body.kerr_length() * (1.0 / r1 - 1.0 / r2) * theta.cos();
    if arg.abs() > 1.0 {
        return domain("radii too close to the body for the leading-order rotation");
    }
    Ok(arg.asin())
}

/// Rotation for a ray emitted along the spin axis with impact parameter
/// `s`: sin χ = 4GJ/(s²c³), sign flipped for antiparallel emission.
pub fn axial_impact_rotation(body: &SpinningBody, s: f64, parallel: bool) -> Result<f64> {
    if !(s > 0.0) {
        return domain("impact parameter must be positive");
    }
    let area = body.lensing_area();
    if s * s <= area {
        return domain("impact parameter too small for the leading-order rotation");
    }
    let chi = (area / (s * s)).asin();
    Ok(if parallel { chi } else { -chi })
}

/// Gauge-independent rotation accumulated around the closed two-pass path
/// with impact parameters s1 (in) and s2 (back).
pub fn closed_path_rotation(body: &SpinningBody, s1: f64, s2: f64) -> Result<f64> {
    if !(s1 > 0.0) || !(s2 > 0.0) {
        return domain("impact parameters must be positive");
    }
    Ok(body.lensing_area() * (1.0 / (s1 * s1) - 1.0 / (s2 * s2)))
}
