//! Photon polarization under Lorentz transformations.
//!
//! A photon with momentum `p` carries helicity amplitudes α±. A Lorentz
//! transformation Λ maps it to momentum Λp and multiplies the amplitudes by
//! e^{±iξ}, where ξ is the rotation angle of the little-group element
//!
//! ```text
//! W(Λ, p) = L⁻¹(Λp) Λ L(p),     L(k) = R(k̂) B_z(ln |k|)
//! ```
//!
//! with respect to the reference momentum k_R = (1, 0, 0, 1). W fixes k_R
//! and factors as a null rotation times R_z(ξ); the null rotation leaves the
//! x–y block untouched, so ξ is read off that block directly.
//!
//! Internally c = 1; the public functions taking speeds in m/s convert.

use std::f64::consts::PI;

use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::lorentz::LorentzMatrix;
use crate::units::C;

const UNIT_TOL: f64 = 1e-12;
const LITTLE_GROUP_TOL: f64 = 1e-10;

/// Reference photon momentum (1, 0, 0, 1).
pub fn reference_momentum() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 0.0, 1.0)
}

/// Convention for the rotation carrying ẑ to k̂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StandardRotation {
    /// θ about y, then φ about z: R(k̂) = R_z(φ) R_y(θ). Singular in φ at
    /// both poles.
    #[default]
    Helicity,
    /// Rotation about the axis ẑ × k̂: R_z(φ) R_y(θ) R_z(−φ). Regular
    /// everywhere except k̂ = −ẑ.
    Minimal,
}

fn polar_angles(khat: &Vector3<f64>) -> Result<(f64, f64)> {
    let n = khat.norm();
    if !(n > 0.0) || !n.is_finite() {
        return domain("direction must be a non-zero finite vector");
    }
    if (n - 1.0).abs() > UNIT_TOL {
        return domain(format!("direction has norm {n}, expected a unit vector"));
    }
    let theta = (khat[2] / n).clamp(-1.0, 1.0).acos();
    let phi = khat[1].atan2(khat[0]);
    Ok((theta, phi))
}

/// Standard rotation carrying ẑ into `khat`.
pub fn standard_rotation(khat: &Vector3<f64>) -> Result<LorentzMatrix> {
    standard_rotation_with(khat, StandardRotation::Helicity)
}

pub fn standard_rotation_with(
    khat: &Vector3<f64>,
    convention: StandardRotation,
) -> Result<LorentzMatrix> {
    let (theta, phi) = polar_angles(khat)?;
    let r = LorentzMatrix::rotation_z(phi) * LorentzMatrix::rotation_y(theta);
    Ok(match convention {
        StandardRotation::Helicity => r,
        StandardRotation::Minimal => r * LorentzMatrix::rotation_z(-phi),
    })
}

/// Photon four-momentum, c = 1 units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    pub e: f64,
    pub k: Vector3<f64>,
}

impl FourMomentum {
    pub fn new(e: f64, k: Vector3<f64>) -> Result<Self> {
        let p = Self { e, k };
        p.check_null()?;
        Ok(p)
    }

    /// Null momentum with energy |k|.
    pub fn photon(k: Vector3<f64>) -> Result<Self> {
        Self::new(k.norm(), k)
    }

    /// Unit-energy photon along polar angles (θ, φ).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let k = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        Self { e: 1.0, k }
    }

    pub fn from_four(v: &Vector4<f64>) -> Result<Self> {
        Self::new(v[0], Vector3::new(v[1], v[2], v[3]))
    }

    pub fn to_four(&self) -> Vector4<f64> {
        Vector4::new(self.e, self.k[0], self.k[1], self.k[2])
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.k / self.k.norm()
    }

    fn check_null(&self) -> Result<()> {
        if !(self.e > 0.0) || !self.e.is_finite() {
            return domain("photon energy must be positive and finite");
        }
        if (self.e - self.k.norm()).abs() > UNIT_TOL * self.e {
            return domain("momentum is not null");
        }
        Ok(())
    }
}

/// L(k) = R(k̂)·B_z(ln e): carries k_R to `k`.
pub fn standard_transform(k: &FourMomentum) -> Result<LorentzMatrix> {
    standard_transform_with(k, StandardRotation::Helicity)
}

pub fn standard_transform_with(
    k: &FourMomentum,
    convention: StandardRotation,
) -> Result<LorentzMatrix> {
    k.check_null()?;
    let r = standard_rotation_with(&k.direction(), convention)?;
    Ok(r * LorentzMatrix::boost_z(k.e.ln()))
}

/// Little-group element W(Λ, p) = L⁻¹(Λp) Λ L(p).
pub fn little_group_element(lambda: &LorentzMatrix, p: &FourMomentum) -> Result<LorentzMatrix> {
    little_group_element_with(lambda, p, StandardRotation::Helicity)
}

pub fn little_group_element_with(
    lambda: &LorentzMatrix,
    p: &FourMomentum,
    convention: StandardRotation,
) -> Result<LorentzMatrix> {
    p.check_null()?;
    let kv = lambda.apply(&p.to_four());
    if !(kv[0] > 0.0) {
        return domain("transformed momentum has non-positive energy");
    }
    // Λp inherits rounding from Λ; rebuild it as an exactly null vector.
    let k3 = Vector3::new(kv[1], kv[2], kv[3]);
    let k = FourMomentum {
        e: k3.norm(),
        k: k3,
    };
    if (kv[0] - k.e).abs() > 1e-9 * kv[0] {
        return domain("transformed momentum is not null");
    }
    let w = standard_transform_with(&k, convention)?.inverse()
        * *lambda
        * standard_transform_with(p, convention)?;
    let fixed = w.apply(&reference_momentum()) - reference_momentum();
    if fixed.amax() > LITTLE_GROUP_TOL {
        return Err(Error::Numeric(format!(
            "little-group element moves the reference momentum by {:e}",
            fixed.amax()
        )));
    }
    Ok(w)
}

/// Maps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Rotation angle ξ of W = S R_z(ξ), in (−π, π].
pub fn wigner_angle(lambda: &LorentzMatrix, p: &FourMomentum) -> Result<f64> {
    wigner_angle_with(lambda, p, StandardRotation::Helicity)
}

pub fn wigner_angle_with(
    lambda: &LorentzMatrix,
    p: &FourMomentum,
    convention: StandardRotation,
) -> Result<f64> {
    let w = little_group_element_with(lambda, p, convention)?;
    let m = w.matrix();
    Ok(wrap_angle(m[(2, 1)].atan2(m[(1, 1)])))
}

/// Leading-order helicity phase for a pure boost of speed `v` (m/s) along
/// (θ_b, φ_b), for a photon travelling along (θ, φ):
/// χ = −½ tan(θ/2) sin θ_b sin(φ − φ_b) v/c.
pub fn first_order_boost_phase(theta: f64, phi: f64, theta_b: f64, phi_b: f64, v: f64) -> Result<f64> {
    if v.abs() >= C {
        return domain("boost speed must be below c");
    }
    if !(0.0..=PI / 2.0).contains(&theta) {
        return domain("photon polar angle must lie in [0, π/2]");
    }
    Ok(-0.5 * (0.5 * theta).tan() * theta_b.sin() * (phi - phi_b).sin() * (v / C))
}

/// Diffraction angle seen by a detector receding (v > 0) or approaching
/// (v < 0) along the beam.
pub fn diffraction_transform(theta: f64, v: f64) -> Result<f64> {
    let beta = v / C;
    if beta.abs() >= 1.0 {
        return domain("speed must be below c");
    }
    if theta < 0.0 {
        return domain("diffraction angle must be non-negative");
    }
    Ok(theta * ((1.0 + beta) / (1.0 - beta)).sqrt())
}

/// Real linear polarization basis attached to a propagation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationTriad {
    pub eps1: Vector3<f64>,
    pub eps2: Vector3<f64>,
    pub khat: Vector3<f64>,
}

impl PolarizationTriad {
    /// Basis ε^{1,2}_k = R(k̂) x̂, R(k̂) ŷ.
    pub fn standard(khat: &Vector3<f64>) -> Result<Self> {
        let r = standard_rotation(khat)?;
        let m = r.matrix().fixed_view::<3, 3>(1, 1).into_owned();
        Ok(Self {
            eps1: m.column(0).into_owned(),
            eps2: m.column(1).into_owned(),
            khat: m.column(2).into_owned(),
        })
    }

    /// Circular polarization vectors ε± = (ε¹ ± iε²)/√2.
    pub fn circular(&self) -> [Vector3<Complex64>; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mk = |sign: f64| {
            Vector3::from_fn(|i, _| Complex64::new(self.eps1[i] * s, sign * self.eps2[i] * s))
        };
        [mk(1.0), mk(-1.0)]
    }

    /// Rigid rotation of all three vectors.
    pub fn rotated(&self, rotation: &nalgebra::Rotation3<f64>) -> Self {
        Self {
            eps1: rotation * self.eps1,
            eps2: rotation * self.eps2,
            khat: rotation * self.khat,
        }
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        let unit = |v: &Vector3<f64>| (v.norm() - 1.0).abs() < tol;
        unit(&self.eps1)
            && unit(&self.eps2)
            && unit(&self.khat)
            && self.eps1.dot(&self.eps2).abs() < tol
            && self.eps1.dot(&self.khat).abs() < tol
            && self.eps2.dot(&self.khat).abs() < tol
            && (self.eps1.cross(&self.eps2) - self.khat).amax() < tol
    }
}

/// Types whose helicity amplitudes pick up e^{±iχ} under a little-group rotation.
pub trait HelicityPhase: Sized {
    /// Multiplies the α± amplitudes of photon `which` by e^{±iχ}.
    fn apply_helicity_phase(&self, chi: f64, which: usize) -> Result<Self>;
}

/// Single-photon helicity state α₊|+⟩ + α₋|−⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityState {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
}

impl HelicityState {
    pub fn new(alpha_plus: Complex64, alpha_minus: Complex64) -> Result<Self> {
        let n = alpha_plus.norm_sqr() + alpha_minus.norm_sqr();
        if (n - 1.0).abs() > UNIT_TOL {
            return domain(format!("helicity state has norm² {n}, expected 1"));
        }
        Ok(Self {
            alpha_plus,
            alpha_minus,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha_plus.norm_sqr() + self.alpha_minus.norm_sqr()
    }

    /// |⟨self|other⟩|, 1 when both describe the same ray.
    pub fn overlap(&self, other: &Self) -> f64 {
        (self.alpha_plus.conj() * other.alpha_plus + self.alpha_minus.conj() * other.alpha_minus)
            .norm()
    }
}

impl HelicityPhase for HelicityState {
    fn apply_helicity_phase(&self, chi: f64, which: usize) -> Result<Self> {
        if which != 0 {
            return domain("single-photon state only has photon index 0");
        }
        Ok(Self {
            alpha_plus: self.alpha_plus * Complex64::from_polar(1.0, chi),
            alpha_minus: self.alpha_minus * Complex64::from_polar(1.0, -chi),
        })
    }
}

/// Two-photon state over the helicity product basis {++, +−, −+, −−}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    pub amps: [Complex64; 4],
}

impl TwoPhotonState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (n - 1.0).abs() > UNIT_TOL {
            return domain(format!("two-photon state has norm² {n}, expected 1"));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|a| Complex64::new(a, 0.0)))
    }

    /// (|+−⟩ − |−+⟩)/√2.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([0.0, s, -s, 0.0]).expect("normalized")
    }

    /// Logical qubit a|+−⟩ + b|−+⟩ in the frame-independent subspace.
    pub fn encode_logical(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new([Complex64::new(0.0, 0.0), a, b, Complex64::new(0.0, 0.0)])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Concurrence 2|α₊₊α₋₋ − α₊₋α₋₊| of the pure state.
    pub fn concurrence(&self) -> f64 {
        let [a, b, c, d] = self.amps;
        (2.0 * (a * d - b * c).norm()).min(1.0)
    }

    /// |⟨self|other⟩|.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Same little-group angle applied to both photons.
    pub fn apply_collective_phase(&self, chi: f64) -> Self {
        self.apply_helicity_phase(chi, 0)
            .and_then(|s| s.apply_helicity_phase(chi, 1))
            .expect("photon indices 0 and 1 are valid")
    }
}

impl HelicityPhase for TwoPhotonState {
    fn apply_helicity_phase(&self, chi: f64, which: usize) -> Result<Self> {
        if which > 1 {
            return domain("photon index must be 0 or 1");
        }
        let mut amps = self.amps;
        for (i, a) in amps.iter_mut().enumerate() {
            // basis index bits: photon 0 is the high bit, 0 = '+', 1 = '−'
            let minus = if which == 0 { i >> 1 } else { i & 1 } == 1;
            let sign = if minus { -1.0 } else { 1.0 };
            *a *= Complex64::from_polar(1.0, sign * chi);
        }
        Ok(Self { amps })
    }
}

/// Free-function form of [`TwoPhotonState::concurrence`].
pub fn concurrence(state: &TwoPhotonState) -> f64 {
    state.concurrence()
}
