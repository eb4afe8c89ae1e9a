//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radlayer::{DimVec3, LocalAlgebra, Matrix, PrimeField, Representation};

pub fn algebra(n: usize) -> LocalAlgebra<PrimeField> {
    LocalAlgebra::standard(&PrimeField::generic(), n).expect("n ≥ 2")
}

pub fn random_matrix(size: usize, seed: u64) -> Matrix<PrimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::random(&PrimeField::generic(), size, size, &mut rng)
}

pub fn sample(alg: &LocalAlgebra<PrimeField>, d: DimVec3, seed: u64) -> Representation<PrimeField> {
    radlayer::sample_with_radlayering(alg, d, seed, 100).expect("nonempty layering")
}
