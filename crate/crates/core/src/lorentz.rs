//! Proper orthochronous Lorentz transformations on (t, x, y, z), c = 1.

use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, Vector3, Vector4};

use crate::error::{domain, Result};

/// Minkowski metric diag(1, -1, -1, -1).
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Minkowski inner product with signature (+, -, -, -).
pub fn minkowski_dot(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Wraps a raw matrix without checking the group invariants.
    pub fn from_matrix_unchecked(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    /// Wraps a raw matrix, rejecting anything that is not a proper
    /// orthochronous Lorentz transformation within `tol`.
    pub fn from_matrix(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let l = Self(m);
        if l.metric_defect() > tol || (l.determinant() - 1.0).abs() > tol || m[(0, 0)] < 1.0 - tol
        {
            return domain("matrix is not a proper orthochronous Lorentz transformation");
        }
        Ok(l)
    }

    /// Spatial rotation embedded in the lower-right block.
    pub fn from_rotation(r: &Matrix3<f64>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
        Self(m)
    }

    /// Active rotation by `angle` about `axis` (right-handed).
    pub fn rotation(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return domain("rotation axis must be a non-zero finite vector");
        }
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
        Ok(Self::from_rotation(r.matrix()))
    }

    pub fn rotation_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_rotation(&Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c))
    }

    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_rotation(&Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    /// Pure boost along z with the given rapidity. Maps (1,0,0,1) to
    /// e^rapidity · (1,0,0,1).
    pub fn boost_z(rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        m[(3, 3)] = ch;
        m[(0, 3)] = sh;
        m[(3, 0)] = sh;
        Self(m)
    }

    /// Active pure boost with velocity `beta` (units of c): a particle at
    /// rest ends up moving with velocity `beta`.
    pub fn boost(beta: &Vector3<f64>) -> Result<Self> {
        let b2 = beta.norm_squared();
        if !(b2 < 1.0) {
            return domain(format!("boost speed |beta| = {} must be < 1", b2.sqrt()));
        }
        if b2 == 0.0 {
            return Ok(Self::identity());
        }
        let gamma = 1.0 / (1.0 - b2).sqrt();
        let mut m = Matrix4::identity();
        m[(0, 0)] = gamma;
        for i in 0..3 {
            m[(0, i + 1)] = gamma * beta[i];
            m[(i + 1, 0)] = gamma * beta[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += (gamma - 1.0) * beta[i] * beta[j] / b2;
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vector4<f64>) -> Vector4<f64> {
        self.0 * v
    }

    /// Λ⁻¹ = η Λᵀ η.
    pub fn inverse(&self) -> Self {
        let eta = metric();
        Self(eta * self.0.transpose() * eta)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// max |ΛᵀηΛ − η|.
    pub fn metric_defect(&self) -> f64 {
        let eta = metric();
        (self.0.transpose() * eta * self.0 - eta).amax()
    }

    pub fn is_proper_orthochronous(&self, tol: f64) -> bool {
        self.metric_defect() < tol
            && (self.determinant() - 1.0).abs() < tol
            && self.0[(0, 0)] >= 1.0 - tol
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * rhs.0)
    }
}

impl Mul<Vector4<f64>> for LorentzMatrix {
    type Output = Vector4<f64>;
    fn mul(self, rhs: Vector4<f64>) -> Vector4<f64> {
        self.0 * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn boost_moves_rest_frame() {
        let l = LorentzMatrix::boost(&Vector3::new(0.6, 0.0, 0.0)).unwrap();
        let u = l.apply(&Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert_relative_eq!(u[0], 1.25, epsilon = 1e-14);
        assert_relative_eq!(u[1], 0.75, epsilon = 1e-14);
        assert!(LorentzMatrix::boost(&Vector3::new(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let l = LorentzMatrix::boost(&Vector3::new(0.1, -0.3, 0.2)).unwrap()
            * LorentzMatrix::rotation_y(0.4);
        let id = l * l.inverse();
        assert!((id.matrix() - Matrix4::identity()).amax() < 1e-12);
    }

    #[test]
    fn from_matrix_rejects_parity() {
        let p = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0));
        assert!(LorentzMatrix::from_matrix(p, 1e-10).is_err());
        assert!(LorentzMatrix::from_matrix(Matrix4::identity(), 1e-10).is_ok());
    }

    proptest! {
        #[test]
        fn products_preserve_metric(
            bx in -0.5f64..0.5, by in -0.5f64..0.5, bz in -0.5f64..0.5,
            a in -3.0f64..3.0, b in -3.0f64..3.0, eta in -2.0f64..2.0,
        ) {
            let l = LorentzMatrix::boost(&Vector3::new(bx, by, bz)).unwrap()
                * LorentzMatrix::rotation_y(a)
                * LorentzMatrix::rotation_z(b)
                * LorentzMatrix::boost_z(eta);
            prop_assert!(l.is_proper_orthochronous(1e-10));
        }
    }
}
