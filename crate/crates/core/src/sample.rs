//! Seeded random states. Each trial draws from its own ChaCha stream, so
//! results do not depend on how trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{ratio, Rational};
use crate::state::{MultiplierState, DIM};
use crate::tensor::{Mat3, Vec3};

/// Denominator of the grid rational samples are snapped to.
pub const RATIONAL_DENOMINATOR: i64 = 1000;

/// The random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn uniform_state<R: Rng>(rng: &mut R, magnitude: f64) -> MultiplierState<f64> {
    MultiplierState::from_flat(&std::array::from_fn(|_| rng.gen_range(-magnitude..=magnitude)))
}

/// Uniform state snapped to multiples of `1/1000`.
pub fn rational_state<R: Rng>(rng: &mut R, magnitude: f64) -> MultiplierState<Rational> {
    let flat: [Rational; DIM] = std::array::from_fn(|_| snap(rng.gen_range(-magnitude..=magnitude)));
    MultiplierState::from_flat(&flat)
}

fn snap(x: f64) -> Rational {
    ratio((x * RATIONAL_DENOMINATOR as f64).round() as i64, RATIONAL_DENOMINATOR)
}

pub fn rational_vec3<R: Rng>(rng: &mut R, magnitude: f64) -> Vec3<Rational> {
    Vec3::from_fn(|_| snap(rng.gen_range(-magnitude..=magnitude)))
}

pub fn uniform_vec3<R: Rng>(rng: &mut R, magnitude: f64) -> Vec3<f64> {
    Vec3::from_fn(|_| rng.gen_range(-magnitude..=magnitude))
}

/// Rotation from a uniformly random unit quaternion.
pub fn rotation<R: Rng>(rng: &mut R) -> Mat3<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin(), b * (tau * u3).cos());
    Mat3([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ])
}

/// `count` states, one stream per index.
pub fn sample_states(seed: u64, count: usize, magnitude: f64) -> Vec<MultiplierState<f64>> {
    (0..count).map(|i| uniform_state(&mut trial_rng(seed, i as u64), magnitude)).collect()
}

pub fn sample_rational_states(seed: u64, count: usize, magnitude: f64) -> Vec<MultiplierState<Rational>> {
    (0..count).map(|i| rational_state(&mut trial_rng(seed, i as u64), magnitude)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_states() {
        assert_eq!(sample_states(7, 5, 1.0), sample_states(7, 5, 1.0));
        assert_ne!(sample_states(7, 5, 1.0), sample_states(8, 5, 1.0));
    }

    #[test]
    fn streams_are_independent_of_count() {
        assert_eq!(sample_states(3, 10, 2.0)[..4], sample_states(3, 4, 2.0)[..]);
    }

    #[test]
    fn bounds_and_grid() {
        for s in sample_states(1, 50, 0.5) {
            assert!(s.max_abs() <= 0.5);
        }
        for s in sample_rational_states(1, 20, 3.0) {
            for x in s.to_flat() {
                assert_eq!((x * ratio(RATIONAL_DENOMINATOR, 1)).denom(), &1.into());
            }
        }
    }

    #[test]
    fn rotations_are_orthogonal() {
        let mut rng = trial_rng(11, 0);
        for _ in 0..20 {
            let r = rotation(&mut rng);
            assert!(r.orthogonality_defect() < 1e-14);
        }
    }
}
