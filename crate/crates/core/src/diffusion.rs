//! Lorentz-invariant diffusion and drift of linear polarization.
//!
//! A density ρ(β) on the equator of the Bloch sphere evolves as
//! ∂ρ/∂λ = c ∂²ρ/∂β² − d ∂ρ/∂β. Densities are stored as Fourier
//! coefficients ρ̂_m = ∫ ρ(β) e^{−imβ} dβ for 0 ≤ m ≤ M, so ρ̂₀ is the total
//! probability and negative modes follow from ρ̂_{−m} = ρ̂_m*.
//!
//! β is the Stokes azimuth Φ, so the first harmonic carries the Stokes
//! vector: ⟨e^{iβ}⟩ = conj(ρ̂₁).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::units::C;

/// Default spectral cutoff.
pub const DEFAULT_MODES: usize = 256;
/// Grid values down to this far below zero are treated as ringing.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;

/// Probability density on the circle, kept in Fourier form.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDensity {
    coeffs: Vec<Complex64>,
}

impl CircleDensity {
    /// The uniform density with cutoff `modes`.
    pub fn uniform(modes: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); modes + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// Wrapped normal density centred on `mean` with width `sigma`.
    pub fn wrapped_normal(mean: f64, sigma: f64, modes: usize) -> Result<Self> {
        if !(sigma > 0.0) || !mean.is_finite() {
            return domain("wrapped normal needs a finite mean and sigma > 0");
        }
        let coeffs = (0..=modes)
            .map(|m| {
                let m = m as f64;
                Complex64::from_polar((-0.5 * m * m * sigma * sigma).exp(), -m * mean)
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// Builds a density from Fourier coefficients ρ̂₀..ρ̂_M.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("at least the zeroth coefficient is required");
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return domain("coefficients must be finite");
        }
        if (coeffs[0].re - 1.0).abs() > 1e-9 || coeffs[0].im.abs() > 1e-9 {
            return domain(format!("density integrates to {} instead of 1", coeffs[0]));
        }
        let mut coeffs = coeffs;
        coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(Self { coeffs })
    }

    /// Builds a density from values on `n` uniform points β_j = 2πj/n.
    /// The values must integrate to 1 within 1e-9.
    pub fn from_grid(values: &[f64], modes: usize) -> Result<Self> {
        let coeffs = grid_to_coefficients(values, modes)?;
        Self::from_coefficients(coeffs)
    }

    /// Like [`CircleDensity::from_grid`] but rescales the values to unit mass.
    pub fn from_unnormalized_grid(values: &[f64], modes: usize) -> Result<Self> {
        let mut coeffs = grid_to_coefficients(values, modes)?;
        let mass = coeffs[0].re;
        if !(mass > 0.0) {
            return domain("grid values have no positive mass");
        }
        for c in coeffs.iter_mut() {
            *c /= mass;
        }
        Self::from_coefficients(coeffs)
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// ρ̂_m for any integer m, zero beyond the cutoff.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        match self.coeffs.get(m.unsigned_abs() as usize) {
            Some(c) if m >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Density at a single angle.
    pub fn evaluate(&self, beta: f64) -> f64 {
        let tail: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| (c * Complex64::from_polar(1.0, m as f64 * beta)).re)
            .sum();
        (self.coeffs[0].re + 2.0 * tail) / (2.0 * PI)
    }

    /// Values on `n` uniform points. Values within [`NEGATIVE_TOLERANCE`]
    /// below zero are clamped and the grid renormalized; anything more
    /// negative is reported as a numeric failure.
    pub fn to_grid(&self, n: usize) -> Result<Vec<f64>> {
        let mut values = self.to_grid_raw(n)?;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVE_TOLERANCE {
            return Err(Error::Numeric(format!(
                "density reaches {min:e} on the grid; increase the cutoff or the width"
            )));
        }
        if min < 0.0 {
            values.iter_mut().for_each(|v| *v = v.max(0.0));
            let mass: f64 = values.iter().sum::<f64>() * 2.0 * PI / n as f64;
            values.iter_mut().for_each(|v| *v /= mass);
        }
        Ok(values)
    }

    fn to_grid_raw(&self, n: usize) -> Result<Vec<f64>> {
        let m = self.modes();
        if n < 2 * m + 1 {
            return domain(format!("grid of {n} points cannot resolve {m} modes"));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        buf[0] = self.coeffs[0];
        for k in 1..=m {
            buf[k] = self.coeffs[k];
            buf[n - k] = self.coeffs[k].conj();
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        Ok(buf.iter().map(|z| z.re / (2.0 * PI)).collect())
    }

    /// Circular mean angle arg⟨e^{iβ}⟩, in (−π, π].
    pub fn circular_mean(&self) -> Result<f64> {
        let z = self.coefficient(1).conj();
        if z.norm() == 0.0 {
            return domain("circular mean undefined for a density with no first harmonic");
        }
        Ok(z.arg())
    }

    /// |⟨e^{iβ}⟩|.
    pub fn mean_resultant_length(&self) -> f64 {
        self.coefficient(1).norm()
    }

    /// Active rotation by `angle`: ρ(β) → ρ(β − angle).
    pub fn rotated(&self, angle: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * Complex64::from_polar(1.0, -(m as f64) * angle))
            .collect();
        Self { coeffs }
    }

    /// L¹ distance evaluated on `n` grid points.
    pub fn l1_distance(&self, other: &Self, n: usize) -> Result<f64> {
        let a = self.to_grid_raw(n)?;
        let b = other.to_grid_raw(n)?;
        Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() * 2.0 * PI / n as f64)
    }
}

fn grid_to_coefficients(values: &[f64], modes: usize) -> Result<Vec<Complex64>> {
    let n = values.len();
    if n < 2 * modes + 1 {
        return domain(format!("grid of {n} points cannot resolve {modes} modes"));
    }
    if values.iter().any(|v| !v.is_finite() || *v < -NEGATIVE_TOLERANCE) {
        return domain("grid values must be finite and non-negative");
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v.max(0.0), 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 2.0 * PI / n as f64;
    Ok(buf[..=modes].iter().map(|z| z * scale).collect())
}

/// Diffusion constant c and drift constant d of the equator equation, s⁻².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub c_diff: f64,
    pub d_drift: f64,
}

impl DiffusionParams {
    pub fn new(c_diff: f64, d_drift: f64) -> Result<Self> {
        let p = Self { c_diff, d_drift };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_diff >= 0.0) || !self.c_diff.is_finite() {
            return domain("diffusion constant must be finite and non-negative");
        }
        if !self.d_drift.is_finite() {
            return domain("drift constant must be finite");
        }
        Ok(())
    }

    /// Rates per unit coordinate time at photon frequency `nu`: (c/ν, d/ν).
    pub fn effective_rates(&self, nu: f64) -> Result<(f64, f64)> {
        if !(nu > 0.0) {
            return domain("photon frequency must be positive");
        }
        Ok((self.c_diff / nu, self.d_drift / nu))
    }
}

/// Exact spectral solution: ρ̂_m(λ) = ρ̂_m(0) exp(−c m² λ − i m d λ).
pub fn evolve_equator(rho0: &CircleDensity, params: &DiffusionParams, lambda_span: f64) -> Result<CircleDensity> {
    params.validate()?;
    if !(lambda_span >= 0.0) {
        return domain("affine span must be non-negative");
    }
    let coeffs = rho0
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| {
            if m == 0 {
                return *c;
            }
            let m = m as f64;
            c * Complex64::new(-params.c_diff * m * m * lambda_span, -m * params.d_drift * lambda_span).exp()
        })
        .collect();
    Ok(CircleDensity { coeffs })
}

/// Evolves over coordinate time `t` at constant frequency `nu`, using the
/// rates c/ν and d/ν.
pub fn evolve_equator_time(rho0: &CircleDensity, params: &DiffusionParams, t: f64, nu: f64) -> Result<CircleDensity> {
    let (c, d) = params.effective_rates(nu)?;
    evolve_equator(rho0, &DiffusionParams::new(c, d)?, t)
}

/// Affine parameter λ = t/(hν), in s/J.
pub fn affine_parameter(t: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return domain("photon frequency must be positive");
    }
    Ok(t / (crate::units::H * nu))
}

/// Drift exposure t/ν, s², the factor multiplying d and c in the closed forms.
pub fn exposure(t: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return domain("photon frequency must be positive");
    }
    Ok(t / nu)
}

/// Rotation of the Stokes angle, χ = t d/ν.
pub fn angle_shift(t: f64, nu: f64, d_drift: f64) -> Result<f64> {
    Ok(exposure(t, nu)? * d_drift)
}

/// Depolarization exponent, μ = 4 t c/ν.
pub fn polarization_decay(t: f64, nu: f64, c_diff: f64) -> Result<f64> {
    Ok(4.0 * exposure(t, nu)? * c_diff)
}

/// Drift constant implied by an observed bound on χ.
pub fn drift_from_angle_shift(chi: f64, t: f64, nu: f64) -> Result<f64> {
    let e = exposure(t, nu)?;
    if !(e > 0.0) {
        return domain("exposure time must be positive");
    }
    Ok(chi / e)
}

/// Diffusion constant implied by an observed bound on μ.
pub fn diffusion_from_decay(mu: f64, t: f64, nu: f64) -> Result<f64> {
    let e = exposure(t, nu)?;
    if !(e > 0.0) {
        return domain("exposure time must be positive");
    }
    Ok(mu / (4.0 * e))
}

/// Photon time of flight and frequency for one propagation scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation {
    /// s
    pub time: f64,
    /// Hz
    pub frequency: f64,
}

impl Propagation {
    /// Photons decoupling at recombination, seen today in the CMB.
    pub const CMB: Propagation = Propagation {
        time: 4.35e17,
        frequency: 1.6e11,
    };

    /// 800 nm photons sent over `distance` meters.
    pub fn optical_link(distance: f64) -> Self {
        Self {
            time: distance / C,
            frequency: C / 800e-9,
        }
    }

    /// Bounds on (d, c) implied by bounds on (χ, μ) for this propagation.
    pub fn invert_bounds(&self, chi: f64, mu: f64) -> Result<DiffusionParams> {
        DiffusionParams::new(
            diffusion_from_decay(mu, self.time, self.frequency)?,
            drift_from_angle_shift(chi, self.time, self.frequency)?,
        )
    }

    /// (χ, μ) predicted for this propagation.
    pub fn forecast(&self, params: &DiffusionParams) -> Result<(f64, f64)> {
        Ok((
            angle_shift(self.time, self.frequency, params.d_drift)?,
            polarization_decay(self.time, self.frequency, params.c_diff)?,
        ))
    }
}

/// Linear Stokes parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesLinear {
    pub q: f64,
    pub u: f64,
}

/// Stokes angle Φ = atan2(U, Q) and linear polarization P = √(Q² + U²).
pub fn stokes_angle(s: &StokesLinear) -> Result<(f64, f64)> {
    let p = s.q.hypot(s.u);
    if p == 0.0 {
        return domain("Stokes angle undefined for Q = U = 0");
    }
    Ok((s.u.atan2(s.q), p))
}

type PolarFn<T> = Arc<dyn Fn(f64) -> T + Send + Sync>;

/// Diffusion tensor K^{AB}(θ), drift u^A(θ) and density of states n(θ) on
/// the Bloch sphere in (θ, β) components. Only dependence on the polar
/// angle is admitted.
#[derive(Clone)]
pub struct BlochTensorModel {
    k_tensor: PolarFn<Matrix2<f64>>,
    u_vector: PolarFn<Vector2<f64>>,
    density_of_states: PolarFn<f64>,
    azimuth_modulation: Option<PolarFn<f64>>,
}

impl fmt::Debug for BlochTensorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, d) = self.equator_coefficients();
        f.debug_struct("BlochTensorModel")
            .field("equator_c", &c)
            .field("equator_d", &d)
            .field("azimuth_modulated", &self.azimuth_modulation.is_some())
            .finish()
    }
}

impl BlochTensorModel {
    pub fn new(
        k_tensor: impl Fn(f64) -> Matrix2<f64> + Send + Sync + 'static,
        u_vector: impl Fn(f64) -> Vector2<f64> + Send + Sync + 'static,
        density_of_states: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let model = Self {
            k_tensor: Arc::new(k_tensor),
            u_vector: Arc::new(u_vector),
            density_of_states: Arc::new(density_of_states),
            azimuth_modulation: None,
        };
        model.validate(64)?;
        Ok(model)
    }

    /// Isotropic constant tensors reducing to `params` on the equator.
    pub fn constant(params: &DiffusionParams) -> Result<Self> {
        params.validate()?;
        let (c, d) = (params.c_diff, params.d_drift);
        Self::new(
            move |_| Matrix2::from_diagonal_element(c),
            move |_| Vector2::new(0.0, d),
            |_| 1.0,
        )
    }

    /// Checks symmetry, positive semidefiniteness of K and positivity of n
    /// at `samples` polar angles.
    pub fn validate(&self, samples: usize) -> Result<()> {
        for i in 0..=samples.max(1) {
            let theta = PI * i as f64 / samples.max(1) as f64;
            let k = (self.k_tensor)(theta);
            if (k[(0, 1)] - k[(1, 0)]).abs() > 1e-12 * k.amax().max(1.0) {
                return domain(format!("K is not symmetric at θ = {theta}"));
            }
            let eig = k.symmetric_eigenvalues();
            if eig.min() < -1e-12 {
                return domain(format!("K has eigenvalue {} at θ = {theta}", eig.min()));
            }
            let u = (self.u_vector)(theta);
            if !u.iter().all(|v| v.is_finite()) {
                return domain(format!("u is not finite at θ = {theta}"));
            }
            if !((self.density_of_states)(theta) > 0.0) {
                return domain(format!("density of states is not positive at θ = {theta}"));
            }
        }
        Ok(())
    }

    /// Multiplies the equator coefficients by f(β), breaking the rotation
    /// symmetry. Only meant for exercising [`equivariance_check`].
    #[doc(hidden)]
    pub fn with_azimuth_modulation(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.azimuth_modulation = Some(Arc::new(f));
        self
    }

    /// (c, d) on the equator: K^{ββ}(π/2) and u^β(π/2).
    pub fn equator_coefficients(&self) -> (f64, f64) {
        let theta = PI / 2.0;
        ((self.k_tensor)(theta)[(1, 1)], (self.u_vector)(theta)[1])
    }

    fn modulation(&self, beta: f64) -> f64 {
        self.azimuth_modulation.as_ref().map_or(1.0, |f| f(beta))
    }

    /// Evolves an equator density with the model's (possibly β-dependent)
    /// coefficients using a pseudo-spectral RK4 integrator in conservative
    /// form, ∂ρ/∂λ = ∂_β(c ∂_β ρ) − ∂_β(d ρ).
    pub fn evolve(&self, rho0: &CircleDensity, lambda_span: f64) -> Result<CircleDensity> {
        if !(lambda_span >= 0.0) {
            return domain("affine span must be non-negative");
        }
        if lambda_span == 0.0 {
            return Ok(rho0.clone());
        }
        let m = rho0.modes();
        let n = 4 * m.max(4);
        let (c0, d0) = self.equator_coefficients();
        let betas: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let cs: Vec<f64> = betas.iter().map(|&b| c0 * self.modulation(b)).collect();
        let ds: Vec<f64> = betas.iter().map(|&b| d0 * self.modulation(b)).collect();
        if cs.iter().any(|&c| c < 0.0) {
            return domain("diffusion coefficient is negative somewhere on the equator");
        }
        let c_max = cs.iter().cloned().fold(0.0, f64::max);
        let d_max = ds.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let k = (n / 2) as f64;
        let rate = c_max * k * k + d_max * k;
        let steps = if rate == 0.0 { 1 } else { ((lambda_span * rate).ceil() as usize).max(1) };
        let h = lambda_span / steps as f64;

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let derivative = |v: &[f64]| -> Vec<f64> {
            let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fwd.process(&mut buf);
            for (j, z) in buf.iter_mut().enumerate() {
                let wav = if j < n / 2 {
                    j as f64
                } else if j == n / 2 {
                    0.0
                } else {
                    j as f64 - n as f64
                };
                *z *= Complex64::new(0.0, wav / n as f64);
            }
            inv.process(&mut buf);
            buf.iter().map(|z| z.re).collect()
        };
        let rhs = |rho: &[f64]| -> Vec<f64> {
            let grad = derivative(rho);
            let flux: Vec<f64> = (0..n).map(|j| cs[j] * grad[j] - ds[j] * rho[j]).collect();
            derivative(&flux)
        };

        let mut rho = rho0.to_grid_raw(n)?;
        for _ in 0..steps {
            let k1 = rhs(&rho);
            let y: Vec<f64> = (0..n).map(|j| rho[j] + 0.5 * h * k1[j]).collect();
            let k2 = rhs(&y);
            let y: Vec<f64> = (0..n).map(|j| rho[j] + 0.5 * h * k2[j]).collect();
            let k3 = rhs(&y);
            let y: Vec<f64> = (0..n).map(|j| rho[j] + h * k3[j]).collect();
            let k4 = rhs(&y);
            for j in 0..n {
                rho[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        if rho.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("equator integration diverged".into()));
        }
        let mut coeffs = grid_to_coefficients_signed(&rho, m);
        coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(CircleDensity { coeffs })
    }
}

fn grid_to_coefficients_signed(values: &[f64], modes: usize) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 2.0 * PI / n as f64;
    buf[..=modes].iter().map(|z| z * scale).collect()
}

/// Lorentz-invariance witness: L¹ distance between evolve-then-rotate and
/// rotate-then-evolve.
pub fn equivariance_check(model: &BlochTensorModel, rho0: &CircleDensity, rotation: f64, lambda_span: f64) -> Result<f64> {
    let a = model.evolve(rho0, lambda_span)?.rotated(rotation);
    let b = model.evolve(&rho0.rotated(rotation), lambda_span)?;
    a.l1_distance(&b, 4 * rho0.modes().max(4))
}
