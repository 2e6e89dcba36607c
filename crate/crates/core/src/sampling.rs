//! Seeded randomness and low-discrepancy point sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream from a base seed and a tag.
pub fn substream(seed: u64, tag: u64) -> SeededRng {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .rotate_left(17)
        ^ tag.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    ChaCha8Rng::seed_from_u64(mixed)
}

pub fn normal<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    let x: f64 = StandardNormal.sample(rng);
    S::lit(x)
}

pub fn uniform<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> S {
    S::lit(rng.random_range(lo..hi))
}

pub fn gaussian_vec<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<S> {
    (0..n).map(|_| normal(rng)).collect()
}

/// Uniformly distributed point on the sphere of the given radius.
pub fn sphere_point<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, radius: S) -> Vec<S> {
    loop {
        let g = gaussian_vec::<S, _>(rng, n);
        let nrm = crate::spaces::norm(&g);
        if nrm > S::lit(1e-12) {
            return g.into_iter().map(|x| x * radius / nrm).collect();
        }
    }
}

/// Uniformly distributed point in the ball of the given radius.
pub fn ball_point<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize, radius: S) -> Vec<S> {
    let u: f64 = rng.random_range(0.0..1.0);
    let r = radius * S::lit(u.powf(1.0 / n as f64));
    sphere_point(rng, n, r)
}

const PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    out
}

/// Halton sequence in `[0,1)^dim` with a random shift (Cranley–Patterson
/// rotation) so that distinct seeds give distinct but equally uniform sets.
pub fn halton(count: usize, dim: usize, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let shift: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
    (0..count)
        .map(|i| {
            (0..dim)
                .map(|d| {
                    let base = PRIMES[d % PRIMES.len()] as u64;
                    // dimensions beyond the prime table reuse a base with a scrambled index
                    let idx = (i as u64 + 1) * (1 + (d / PRIMES.len()) as u64 * 7919);
                    (radical_inverse(idx, base) + shift[d]).fract()
                })
                .collect()
        })
        .collect()
}

/// Maps a point of `[0,1)^dim` into the ball of the given radius with the
/// radial cube-to-ball map `x ↦ x ‖x‖_∞ / ‖x‖_2` applied to `2x − 1`.
pub fn cube_to_ball<S: Scalar>(x: &[f64], radius: S) -> Vec<S> {
    let y: Vec<f64> = x.iter().map(|&t| 2.0 * t - 1.0).collect();
    let inf = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let two = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if two == 0.0 {
        return vec![S::zero(); x.len()];
    }
    y.iter()
        .map(|&v| radius * S::lit(v * inf / two))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_unit_cube() {
        let a = halton(50, 5, &mut rng(3));
        let b = halton(50, 5, &mut rng(3));
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|&t| (0.0..1.0).contains(&t)));
    }

    #[test]
    fn cube_to_ball_stays_inside() {
        for p in halton(200, 4, &mut rng(1)) {
            let b: Vec<f64> = cube_to_ball(&p, 2.0);
            assert!(crate::spaces::norm(&b) <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn sphere_points_have_radius() {
        let mut r = rng(9);
        let p: Vec<f64> = sphere_point(&mut r, 7, 3.0);
        assert!((crate::spaces::norm(&p) - 3.0).abs() < 1e-12);
    }
}
