//! Real-valued lift of complex scalar channels: 2×2 rotations, their block-diagonal
//! extension over S channel uses, and interleaved (Re, Im) vectors.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `[[cos φ, −sin φ], [sin φ, cos φ]]`.
pub fn rotation_matrix(phi: f64) -> Result<Matrix2<f64>> {
    if !phi.is_finite() {
        return Err(Error::InvalidInput(format!("rotation angle must be finite, got {phi}")));
    }
    let (s, c) = phi.sin_cos();
    Ok(Matrix2::new(c, -s, s, c))
}

/// A phase rotation acting independently on each of the S complex slots of a symbol
/// extension, i.e. `U(φ) ⊗ I_S` in the interleaved (Re, Im) layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedRotation {
    phase: f64,
    extension: usize,
    cos: f64,
    sin: f64,
}

impl ExtendedRotation {
    pub fn new(phase: f64, extension: usize) -> Result<Self> {
        if extension == 0 {
            return Err(Error::InvalidInput("symbol extension must be at least 1".into()));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidInput(format!("rotation angle must be finite, got {phase}")));
        }
        let (sin, cos) = phase.sin_cos();
        Ok(Self { phase, extension, cos, sin })
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn extension(&self) -> usize {
        self.extension
    }

    /// Real dimension `2S` of the space the rotation acts on.
    pub fn dim(&self) -> usize {
        2 * self.extension
    }

    /// Dense 2S×2S block-diagonal matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.extension {
            let i = 2 * k;
            m[(i, i)] = self.cos;
            m[(i, i + 1)] = -self.sin;
            m[(i + 1, i)] = self.sin;
            m[(i + 1, i + 1)] = self.cos;
        }
        m
    }

    /// Applies the rotation slot by slot without forming the dense matrix.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        assert_eq!(v.len(), self.dim(), "vector length must equal 2S");
        let mut out = DVector::zeros(v.len());
        for k in 0..self.extension {
            let (re, im) = (v[2 * k], v[2 * k + 1]);
            out[2 * k] = self.cos * re - self.sin * im;
            out[2 * k + 1] = self.sin * re + self.cos * im;
        }
        out
    }

    /// `Ū(θ)·Ū(φ) = Ū(φ + θ)`.
    pub fn compose(&self, other: &ExtendedRotation) -> Result<ExtendedRotation> {
        if self.extension != other.extension {
            return Err(Error::DimensionMismatch {
                expected: format!("extension {}", self.extension),
                found: format!("extension {}", other.extension),
            });
        }
        ExtendedRotation::new(self.phase + other.phase, self.extension)
    }

    pub fn inverse(&self) -> ExtendedRotation {
        ExtendedRotation { phase: -self.phase, extension: self.extension, cos: self.cos, sin: -self.sin }
    }
}

/// Shorthand for [`ExtendedRotation::new`].
pub fn extend_rotation(phi: f64, extension: usize) -> Result<ExtendedRotation> {
    ExtendedRotation::new(phi, extension)
}

/// A complex S-vector stored as 2S reals `(Re z₁, Im z₁, Re z₂, Im z₂, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLiftedVector {
    data: DVector<f64>,
}

impl RealLiftedVector {
    pub fn from_complex(values: &[Complex64]) -> Self {
        let mut data = DVector::zeros(2 * values.len());
        for (k, z) in values.iter().enumerate() {
            data[2 * k] = z.re;
            data[2 * k + 1] = z.im;
        }
        Self { data }
    }

    pub fn from_real(data: DVector<f64>) -> Result<Self> {
        if !data.len().is_multiple_of(2) || data.is_empty() {
            return Err(Error::InvalidInput(format!(
                "lifted vector needs a positive even length, got {}",
                data.len()
            )));
        }
        Ok(Self { data })
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.as_slice().chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn extension(&self) -> usize {
        self.data.len() / 2
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).abs().max()
    }

    #[test]
    fn rotation_special_angles() {
        assert_eq!(rotation_matrix(0.0).unwrap(), Matrix2::identity());
        let half = rotation_matrix(PI).unwrap();
        assert!((half + Matrix2::identity()).abs().max() < 1e-15);
        let quarter = rotation_matrix(PI / 2.0).unwrap();
        assert!((quarter - Matrix2::new(0.0, -1.0, 1.0, 0.0)).abs().max() < 1e-15);
        assert!((rotation_matrix(0.7).unwrap().determinant() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_rejects_non_finite() {
        assert!(matches!(rotation_matrix(f64::NAN), Err(Error::InvalidInput(_))));
        assert!(matches!(rotation_matrix(f64::INFINITY), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn extension_base_cases() {
        assert_eq!(extend_rotation(0.0, 5).unwrap().matrix(), DMatrix::identity(10, 10));
        let phi = 1.234;
        let one = extend_rotation(phi, 1).unwrap().matrix();
        let base = rotation_matrix(phi).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(one[(i, j)], base[(i, j)]);
            }
        }
        assert!(matches!(extend_rotation(0.3, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn extension_is_kronecker_with_identity() {
        let phi = -0.81;
        let s = 4;
        let u = rotation_matrix(phi).unwrap();
        let kron = DMatrix::identity(s, s).kronecker(&DMatrix::from_iterator(2, 2, u.iter().copied()));
        assert!(max_abs_diff(&kron, &extend_rotation(phi, s).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn apply_matches_dense_matrix() {
        let r = extend_rotation(2.1, 3).unwrap();
        let v = DVector::from_vec(vec![0.3, -1.0, 2.0, 0.5, -0.7, 0.1]);
        assert!((r.apply(&v) - r.matrix() * &v).norm() < 1e-15);
    }

    #[test]
    fn lifted_round_trip_is_exact() {
        let z = vec![Complex64::new(1.5, -2.0), Complex64::new(0.0, 3.25)];
        let lifted = RealLiftedVector::from_complex(&z);
        assert_eq!(lifted.as_vector().as_slice(), &[1.5, -2.0, 0.0, 3.25]);
        assert_eq!(lifted.to_complex(), z);
        assert!(RealLiftedVector::from_real(DVector::zeros(3)).is_err());
    }

    proptest! {
        #[test]
        fn group_law(phi in -10.0f64..10.0, theta in -10.0f64..10.0, s in 1usize..7) {
            let a = extend_rotation(phi, s).unwrap();
            let b = extend_rotation(theta, s).unwrap();
            let product = a.matrix() * b.matrix();
            let sum = extend_rotation(phi + theta, s).unwrap().matrix();
            prop_assert!(max_abs_diff(&product, &sum) < 1e-12);
            prop_assert!(max_abs_diff(&a.compose(&b).unwrap().matrix(), &sum) < 1e-12);
        }

        #[test]
        fn inverse_law(phi in -10.0f64..10.0, s in 1usize..7) {
            let a = extend_rotation(phi, s).unwrap();
            let inv = extend_rotation(-phi, s).unwrap();
            let id = DMatrix::identity(2 * s, 2 * s);
            prop_assert!(max_abs_diff(&(a.matrix() * inv.matrix()), &id) < 1e-12);
            prop_assert!(max_abs_diff(&(a.matrix().transpose() * a.matrix()), &id) < 1e-12);
            prop_assert!(max_abs_diff(&a.inverse().matrix(), &inv.matrix()) < 1e-15);
        }

        #[test]
        fn lift_consistency(phi in -10.0f64..10.0, parts in proptest::collection::vec(-5.0f64..5.0, 2..12)) {
            let s = parts.len() / 2;
            let z: Vec<Complex64> = (0..s).map(|k| Complex64::new(parts[2 * k], parts[2 * k + 1])).collect();
            let rotated: Vec<Complex64> = z.iter().map(|w| Complex64::from_polar(1.0, phi) * w).collect();
            let lhs = extend_rotation(phi, s).unwrap().apply(RealLiftedVector::from_complex(&z).as_vector());
            let rhs = RealLiftedVector::from_complex(&rotated).into_vector();
            prop_assert!((lhs - rhs).amax() < 1e-12);
        }
    }
}
