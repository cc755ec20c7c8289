use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::operator::C64;

/// Seed used for every reproducible random draw in the oracle checks.
pub const HAAR_SEED: u64 = 0x5eed_2019;

/// A Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `count` Haar unitaries from a ChaCha stream seeded with `seed`.
pub fn haar_unitaries(d: usize, count: usize, seed: u64) -> Vec<DMatrix<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_unitary(d, &mut rng)).collect()
}
