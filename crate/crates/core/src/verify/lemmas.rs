use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::{ComplexChannelMatrix, ExtendedRotation};
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_basis, project_out, stack_columns};

/// Threshold on `|sin(α − β)|` below which the two-phase system is treated as singular.
pub const LEMMA_TOLERANCE: f64 = 1e-9;

/// Real `(c1, c2)` with `c1·e^{jα} + c2·e^{jβ} = 1`.
pub fn solve_lemma1(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidInput("angles must be finite".into()));
    }
    let det = (beta - alpha).sin();
    if det.abs() <= LEMMA_TOLERANCE {
        return Err(Error::Degenerate(format!("sin(alpha - beta) = {:e}", -det)));
    }
    Ok((beta.sin() / det, -alpha.sin() / det))
}

/// Output of [`demonstrate_lemma2`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Demo {
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `c1·a`.
    pub a_prime: Vec<f64>,
    /// `c2·b`.
    pub b_prime: Vec<f64>,
    /// `‖Ū(φ11)V1 − Σ a'_s Ū(φ13)V3^s − Σ b'_s Ū(φ12)V2^s‖` with unit-norm `V1`.
    pub residual: f64,
    /// Distance from `Ū(φ11)V1` to the span of the receiver-1 interference columns,
    /// computed by projection without using the closed-form coefficients.
    pub projection_residual: f64,
}

const EXTENSION: usize = 5;
const STREAMS: usize = 3;

/// Builds a user-1 column that is aligned with interference at receivers 2 and 3 and
/// shows that it then lies inside the interference span at receiver 1.
///
/// Receiver 2: `Ū(φ21)V1 = Σ a_s Ū(φ23)V3^s`. Receiver 3: `Ū(φ31)V1 = Σ b_s Ū(φ32)V2^s`.
/// Receiver 1: `Ū(φ11)V1 = Σ c1·a_s Ū(φ13)V3^s + Σ c2·b_s Ū(φ12)V2^s` with `(c1, c2)`
/// from [`solve_lemma1`].
pub fn demonstrate_lemma2(channel: &ComplexChannelMatrix, seed: u64) -> Result<Lemma2Demo> {
    channel.require_shape(3, 3)?;
    let p = |r: usize, t: usize| channel.phase(r - 1, t - 1);
    let alpha = p(1, 3) - p(2, 3) + p(2, 1) - p(1, 1);
    let beta = p(1, 2) - p(3, 2) + p(3, 1) - p(1, 1);
    let (c1, c2) = solve_lemma1(alpha, beta).map_err(|_| {
        Error::Degenerate(format!(
            "phi13 - phi23 + phi21 - phi12 + phi32 - phi31 has sine {:e}",
            (alpha - beta).sin()
        ))
    })?;

    let rot = |phi: f64| ExtendedRotation::new(phi, EXTENSION);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaussian = |n: usize| -> DVector<f64> { DVector::from_fn(n, |_, _| rng.sample(StandardNormal)) };
    let v3: Vec<DVector<f64>> = (0..STREAMS).map(|_| gaussian(2 * EXTENSION)).collect();
    let mut a = gaussian(STREAMS);
    let mut b = gaussian(STREAMS);
    while b[0].abs() < 0.1 {
        b[0] = gaussian(1)[0];
    }

    let comb3: DVector<f64> = v3.iter().zip(a.iter()).map(|(v, &x)| v * x).sum();
    let mut v1 = rot(p(2, 3) - p(2, 1))?.apply(&comb3);
    let n = v1.norm();
    v1 /= n;
    a /= n;

    // V2^2.. free, V2^1 solves the receiver-3 alignment
    let mut v2: Vec<DVector<f64>> = (0..STREAMS).map(|_| gaussian(2 * EXTENSION)).collect();
    let mut target = rot(p(3, 1) - p(3, 2))?.apply(&v1);
    for s in 1..STREAMS {
        target -= &v2[s] * b[s];
    }
    v2[0] = target / b[0];

    let a_prime: Vec<f64> = a.iter().map(|x| c1 * x).collect();
    let b_prime: Vec<f64> = b.iter().map(|x| c2 * x).collect();
    let own = rot(p(1, 1))?.apply(&v1);
    let r13 = rot(p(1, 3))?;
    let r12 = rot(p(1, 2))?;
    let mut combo = own.clone();
    for s in 0..STREAMS {
        combo -= r13.apply(&v3[s]) * a_prime[s];
        combo -= r12.apply(&v2[s]) * b_prime[s];
    }

    let interference: Vec<DVector<f64>> =
        v3.iter().map(|v| r13.apply(v)).chain(v2.iter().map(|v| r12.apply(v))).collect();
    let basis = orthonormal_basis(&stack_columns(2 * EXTENSION, &interference), 1e-12);
    let projection_residual = project_out(&own, &basis).norm();

    Ok(Lemma2Demo {
        alpha,
        beta,
        c1,
        c2,
        a: a.iter().copied().collect(),
        b: b.iter().copied().collect(),
        a_prime,
        b_prime,
        residual: combo.norm(),
        projection_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channel;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn lemma1_residual(alpha: f64, beta: f64, c: (f64, f64)) -> f64 {
        (Complex64::new(1.0, 0.0) - Complex64::from_polar(c.0, alpha) - Complex64::from_polar(c.1, beta)).norm()
    }

    #[test]
    fn lemma1_examples() {
        let (c1, c2) = solve_lemma1(FRAC_PI_2, 0.0).unwrap();
        assert!(c1.abs() < 1e-15 && (c2 - 1.0).abs() < 1e-15);
        let (c1, c2) = solve_lemma1(FRAC_PI_3, -FRAC_PI_3).unwrap();
        assert!((c1 - 1.0).abs() < 1e-12 && (c2 - 1.0).abs() < 1e-12);
        assert!(matches!(solve_lemma1(0.7, 0.7), Err(Error::Degenerate(_))));
        assert!(matches!(solve_lemma1(0.7, 0.7 + std::f64::consts::PI), Err(Error::Degenerate(_))));
    }

    proptest! {
        #[test]
        fn lemma1_solves_the_complex_equation(alpha in -10.0f64..10.0, beta in -10.0f64..10.0) {
            prop_assume!((alpha - beta).sin().abs() > 0.01);
            let c = solve_lemma1(alpha, beta).unwrap();
            prop_assert!(lemma1_residual(alpha, beta, c) < 1e-10);
        }
    }

    #[test]
    fn lemma2_contains_the_aligned_vector() {
        let ch = sample_channel(3, 3, 3).unwrap();
        let demo = demonstrate_lemma2(&ch, 3).unwrap();
        assert!(demo.residual <= 1e-10, "{}", demo.residual);
        assert!(demo.projection_residual <= 1e-10, "{}", demo.projection_residual);
        for s in 0..3 {
            assert!((demo.a_prime[s] - demo.c1 * demo.a[s]).abs() <= 1e-12);
            assert!((demo.b_prime[s] - demo.c2 * demo.b[s]).abs() <= 1e-12);
        }
    }

    #[test]
    fn lemma2_precondition() {
        let base = sample_channel(5, 3, 3).unwrap();
        // force φ13 − φ23 + φ21 − φ12 + φ32 − φ31 = 0 through φ32
        let p = |r: usize, t: usize| base.phase(r - 1, t - 1);
        let phi32 = p(3, 1) - p(1, 3) + p(2, 3) - p(2, 1) + p(1, 2);
        let ch = base.with_entry(2, 1, base.magnitude(2, 1), phi32).unwrap();
        assert!(matches!(demonstrate_lemma2(&ch, 1), Err(Error::Degenerate(_))));
    }
}
