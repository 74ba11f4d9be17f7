//! Named and seeded arrangements used by the CLI and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use itertools::Itertools;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{q, qvec, rank_of, Rational};

const MAX_ATTEMPTS: usize = 1000;

/// Boolean arrangement `Bₙ`.
pub fn boolean(n: usize) -> Arrangement {
    Arrangement::boolean(n)
}

/// `{x₁, x₂, x₃, x₁+x₂+x₃}` in `ℚ³`.
pub fn a3() -> Arrangement {
    Arrangement::new(
        3,
        &[
            qvec(&[1, 0, 0]),
            qvec(&[0, 1, 0]),
            qvec(&[0, 0, 1]),
            qvec(&[1, 1, 1]),
        ],
    )
    .expect("A3 is essential")
}

fn random_normals(rng: &mut ChaCha8Rng, m: usize, n: usize, bound: i64) -> Vec<Vec<Rational>> {
    (0..m)
        .map(|_| (0..n).map(|_| q(rng.gen_range(-bound..=bound))).collect())
        .collect()
}

/// Essential arrangement of `m` hyperplanes in `ℚⁿ` with integer normals in
/// `[-bound, bound]`, resampled until valid.
pub fn random_essential(m: usize, n: usize, bound: i64, seed: u64) -> Result<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Ok(a) = Arrangement::new(n, &random_normals(&mut rng, m, n, bound)) {
            return Ok(a);
        }
    }
    Err(Error::SamplingFailed {
        attempts: MAX_ATTEMPTS,
    })
}

/// Like [`random_essential`], additionally requiring every `n` normals to be
/// independent (the matroid of the arrangement is uniform).
pub fn random_generic(m: usize, n: usize, bound: i64, seed: u64) -> Result<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let Ok(a) = Arrangement::new(n, &random_normals(&mut rng, m, n, bound)) else {
            continue;
        };
        let size = n.min(m);
        if (0..m)
            .combinations(size)
            .all(|s| rank_of(&a.normals_of(&s)) == size)
        {
            return Ok(a);
        }
    }
    Err(Error::SamplingFailed {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn seeded_arrangements_are_reproducible() {
        assert_eq!(
            random_essential(5, 3, 3, 7).unwrap(),
            random_essential(5, 3, 3, 7).unwrap()
        );
        let g = random_generic(5, 4, 3, 11).unwrap();
        assert_eq!(g, random_generic(5, 4, 3, 11).unwrap());
        assert_eq!(build_lattice(&g).rank_sizes(), vec![1, 5, 10, 10, 1]);
    }
}
