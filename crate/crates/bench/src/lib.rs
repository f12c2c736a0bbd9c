//! Deterministic workloads shared by the benchmarks.

use purcat_core::random::{self, Bounds};
use purcat_core::{ChainMap, Complex, IntMatrix, Int, Ring};

pub fn matrices(n: usize, size: usize, seed: u64) -> Vec<IntMatrix> {
    let mut rng = random::rng(seed);
    let ring = Ring::Integers;
    let b = Bounds { max_generators: size, max_entry: 9, general: 1.0 };
    (0..n)
        .map(|_| {
            let m = random::module(&ring, &mut rng, &b, false);
            if m.generators() == 0 {
                IntMatrix::identity(size).scale(&Int::from(2))
            } else {
                m.relations().clone()
            }
        })
        .collect()
}

pub fn complexes(ring: &Ring, n: usize, lo: i64, hi: i64, seed: u64) -> Vec<Complex> {
    let mut rng = random::rng(seed);
    let b = Bounds { max_generators: 2, max_entry: 6, general: 0.2 };
    (0..n).map(|_| random::complex(ring, &mut rng, lo, hi, &b, false)).collect()
}

pub fn pure_qis_pairs(ring: &Ring, n: usize, seed: u64) -> Vec<(ChainMap, Complex)> {
    let mut rng = random::rng(seed);
    let b = Bounds { max_generators: 2, max_entry: 6, general: 0.2 };
    (0..n)
        .map(|_| {
            let m = random::complex(ring, &mut rng, -1, 1, &b, false);
            let u = random::pure_qis(&m, &mut rng, &b, false);
            (u, random::complex(ring, &mut rng, -1, 0, &b, false))
        })
        .collect()
}
