//! Seeded random generation of rational matrix points, including forced
//! degenerate samples that land on lower strata.

use num::bigint::BigInt;
use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poisson::GrassmannPoint;
use crate::ratmat::RatMat;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn int_matrix(&mut self, rows: usize, cols: usize, lo: i64, hi: i64) -> RatMat {
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| self.rng.random_range(lo..=hi)).collect())
            .collect();
        RatMat::from_int_rows(&data)
    }

    /// Random integer-entry point of G(k,n); entries uniform in [-9, 9],
    /// rejection on rank deficiency.
    pub fn grassmann_point(&mut self, k: usize, n: usize) -> GrassmannPoint {
        loop {
            let m = self.int_matrix(k, n, -9, 9);
            if let Ok(p) = GrassmannPoint::new(m) {
                return p;
            }
        }
    }

    /// Random point forced onto a degenerate stratum by zeroing or
    /// duplicating columns (rank k is re-checked by rejection).
    pub fn degenerate_point(&mut self, k: usize, n: usize) -> GrassmannPoint {
        loop {
            let mut m = self.int_matrix(k, n, -9, 9);
            let tweaks = 1 + self.rng.random_range(0..n.min(3));
            for _ in 0..tweaks {
                let target = self.rng.random_range(0..n);
                match self.rng.random_range(0..3) {
                    0 => {
                        for r in 0..k {
                            *m.at_mut(r, target) = BigRational::from_integer(BigInt::from(0));
                        }
                    }
                    1 => {
                        let src = self.rng.random_range(0..n);
                        for r in 0..k {
                            let v = m.at(r, src).clone();
                            *m.at_mut(r, target) = v;
                        }
                    }
                    _ => {
                        let src = self.rng.random_range(0..n);
                        let scale = BigRational::from_integer(BigInt::from(
                            self.rng.random_range(1..=3),
                        ));
                        for r in 0..k {
                            let v = m.at(r, src).clone() * &scale;
                            *m.at_mut(r, target) = v;
                        }
                    }
                }
            }
            if let Ok(p) = GrassmannPoint::new(m) {
                return p;
            }
        }
    }

    /// Random invertible k x k integer matrix for gauge tests.
    pub fn invertible(&mut self, k: usize) -> RatMat {
        loop {
            let m = self.int_matrix(k, k, -5, 5);
            if m.rank() == k {
                return m;
            }
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// The point with columns cyclically rotated left by one.
pub fn rotate_columns_left(p: &GrassmannPoint) -> GrassmannPoint {
    let m = p.matrix();
    let (k, n) = (m.rows(), m.cols());
    let mut out = RatMat::zeros(k, n);
    for r in 0..k {
        for c in 0..n {
            *out.at_mut(r, c) = m.at(r, (c + 1) % n).clone();
        }
    }
    GrassmannPoint::new(out).expect("rotation preserves rank")
}
