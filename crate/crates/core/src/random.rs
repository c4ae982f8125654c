//! Seeded samplers for metrics and bases.

use nalgebra::{Quaternion, UnitQuaternion};
use rand::Rng;

use crate::algebra::{condition_number, Mat3, MetricSpec, Vec3};

/// Uniformly distributed rotation matrix.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    loop {
        let q = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n2: f64 = q.iter().map(|v| v * v).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let q = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
            return q.to_rotation_matrix().into_inner();
        }
    }
}

/// `Q diag(e^{s₁}, e^{s₂}, e^{s₃}) Qᵀ` with `Q` a random rotation and `s_i` uniform in `[-1, 1]`.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R) -> MetricSpec {
    let q = random_rotation(rng);
    let d = Vec3::from_fn(|_, _| rng.random_range(-1.0_f64..=1.0).exp());
    let g = q * Mat3::from_diagonal(&d) * q.transpose();
    MetricSpec::new((g + g.transpose()) * 0.5).expect("sampled metric is SPD")
}

/// Matrix with entries uniform in `[-1, 1)` and condition number below `max_condition`.
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> Mat3 {
    loop {
        let p = Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if condition_number(&p) < max_condition {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotations_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let q = random_rotation(&mut rng);
            assert!((q.transpose() * q - Mat3::identity()).amax() < 1e-14);
            assert!((q.determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = random_metric(&mut ChaCha8Rng::seed_from_u64(42));
        let b = random_metric(&mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn bases_respect_condition_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            assert!(condition_number(&random_basis(&mut rng, 1e3)) < 1e3);
        }
    }
}
