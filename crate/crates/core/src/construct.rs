//! Explicit witness representations for the cube-zero family.
//!
//! Block data is built for the normalized relation `Σ_j A′_j C_j = 0` and
//! mapped back through the Gram matrix, so every witness works for any
//! nondegenerate `S`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraError, LocalAlgebra};
use crate::exactmat::{block_compose, Field, Matrix};
use crate::layering::{rad_nonempty, root_decompose, DimVec3, LayeringError};
use crate::rep::{hcat, vcat, RepError, Representation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("no representation with radical layering {d} found after {attempts} attempts (seed {seed})")]
    SearchFailed { d: DimVec3, attempts: usize, seed: u64 },
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Raw (not normalized) blocks of an adapted cube-zero representation.
pub struct Blocks<F: Field> {
    pub d: DimVec3,
    pub a: Vec<Matrix<F>>,
    pub b: Vec<Matrix<F>>,
    pub c: Vec<Matrix<F>>,
}

/// `x_i ↦ [[0, A_i, B_i], [0, 0, C_i], [0, 0, 0]]`, rows and columns ordered
/// `d₂, d₁, d₀`.
pub fn assemble<F: Field>(alg: &LocalAlgebra<F>, blocks: &Blocks<F>) -> Result<Representation<F>, ConstructError> {
    let f = alg.field();
    let DimVec3 { d0, d1, d2 } = blocks.d;
    let z = |r, c| Matrix::zeros(f, r, c);
    let matrices = (0..alg.n())
        .map(|i| {
            block_compose(&[
                vec![z(d2, d2), blocks.a[i].clone(), blocks.b[i].clone()],
                vec![z(d1, d2), z(d1, d1), blocks.c[i].clone()],
                vec![z(d0, d2), z(d0, d1), z(d0, d0)],
            ])
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(RepError::from)?;
    Ok(Representation::new(alg.presentation().clone(), vec![blocks.d.total()], matrices)?)
}

fn zero_tuple<F: Field>(f: &F, n: usize, rows: usize, cols: usize) -> Vec<Matrix<F>> {
    vec![Matrix::zeros(f, rows, cols); n]
}

fn verified<F: Field>(rep: Representation<F>, d: DimVec3) -> Result<Representation<F>, ConstructError> {
    let got = rep.raddim();
    if got != d.to_layering() {
        return Err(ConstructError::Params(format!("built layering {got}, expected {d}")));
    }
    Ok(rep)
}

/// Normalized `A′` of the `(1, m)` generator: `A′_i = e_i` for `i ≤ m`.
fn dim1_a<F: Field>(f: &F, n: usize, m: usize) -> Vec<Matrix<F>> {
    (0..n)
        .map(|i| if i < m { Matrix::unit(f, m, 1, i, 0) } else { Matrix::zeros(f, m, 1) })
        .collect()
}

/// Normalized `A′` of the `(m, mn−1)` generator.
fn dimgt1_a<F: Field>(f: &F, n: usize, m: usize) -> Vec<Matrix<F>> {
    let rows = m * n - 1;
    let id = Matrix::identity(f, m);
    let mut out = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut a = Matrix::zeros(f, rows, m);
        a.paste(i * m, 0, &id);
        out.push(a);
    }
    let mut last = Matrix::zeros(f, rows, m);
    last.paste(m * (n - 1) - 1, 0, &id);
    for i in 0..m.saturating_sub(2) {
        last.set(1 + i * (m + 1), 0, f.one());
    }
    out.push(last);
    out
}

/// First columns of the `C` tuple matching [`dimgt1_a`]: `m × 1` each.
fn dimgt1_q<F: Field>(f: &F, n: usize, m: usize) -> Vec<Matrix<F>> {
    let mut out = zero_tuple(f, n, m, 1);
    out[n - 1].set(0, 0, f.neg(&f.one()));
    for j in 0..m.saturating_sub(2) {
        out[j].set(j + 1, 0, f.one());
    }
    out[n - 2].set(m - 1, 0, f.one());
    out
}

/// A representation with radical layering `(d₀, 1, m)`, `0 ≤ m < n`.
pub fn witness_dim1<F: Field>(alg: &LocalAlgebra<F>, m: usize, d0: usize) -> Result<Representation<F>, ConstructError> {
    let (f, n) = (alg.field(), alg.n());
    if m >= n || d0 == 0 {
        return Err(ConstructError::Params(format!("need 0 ≤ m < n = {n} and d0 ≥ 1, got m={m}, d0={d0}")));
    }
    let a = alg.denormalize_tuple(&dim1_a(f, n, m))?;
    let mut c = zero_tuple(f, n, 1, d0);
    c[m].set(0, 0, f.one());
    let d = DimVec3::new(d0, 1, m);
    let b = zero_tuple(f, n, m, d0);
    verified(assemble(alg, &Blocks { d, a, b, c })?, d)
}

/// A representation with radical layering `(d₀, m, mn−1)`, `2 ≤ m ≤ n`.
pub fn witness_dimgt1<F: Field>(alg: &LocalAlgebra<F>, m: usize, d0: usize) -> Result<Representation<F>, ConstructError> {
    let (f, n) = (alg.field(), alg.n());
    if !(2..=n).contains(&m) || d0 == 0 {
        return Err(ConstructError::Params(format!("need 2 ≤ m ≤ n = {n} and d0 ≥ 1, got m={m}, d0={d0}")));
    }
    let a = alg.denormalize_tuple(&dimgt1_a(f, n, m))?;
    let c = dimgt1_q(f, n, m)
        .into_iter()
        .map(|q| hcat(f, m, &[q, Matrix::zeros(f, m, d0 - 1)]))
        .collect();
    let d = DimVec3::new(d0, m, m * n - 1);
    let b = zero_tuple(f, n, d.d2, d0);
    verified(assemble(alg, &Blocks { d, a, b, c })?, d)
}

fn block_diag<F: Field>(f: &F, parts: &[Matrix<F>]) -> Matrix<F> {
    parts.iter().fold(Matrix::zeros(f, 0, 0), |acc, p| acc.direct_sum(p))
}

/// The generic member of the exceptional component with radical layering
/// `(a, n(a−1), (n²−1)(a−1))`.
pub fn witness_exceptional<F: Field>(alg: &LocalAlgebra<F>, a: usize) -> Result<Representation<F>, ConstructError> {
    let (f, n) = (alg.field(), alg.n());
    if a < 2 {
        return Err(ConstructError::Params(format!("need a ≥ 2, got {a}")));
    }
    let copies = a - 1;
    let d = DimVec3::new(a, n * copies, (n * n - 1) * copies);
    let p = dimgt1_a(f, n, n);
    let q = dimgt1_q(f, n, n);
    let a_norm: Vec<_> = p.iter().map(|pi| block_diag(f, &vec![pi.clone(); copies])).collect();
    let a_raw = alg.denormalize_tuple(&a_norm)?;
    let c = q
        .iter()
        .map(|qi| hcat(f, d.d1, &[Matrix::zeros(f, d.d1, 1), block_diag(f, &vec![qi.clone(); copies])]))
        .collect();
    // B's first column, stacked over i, must avoid the span of the stacked A_i
    let stacked = vcat(f, d.d1, &a_raw);
    let rank = stacked.rank();
    let pick = (0..n * d.d2)
        .find(|&k| {
            let e = Matrix::unit(f, n * d.d2, 1, k, 0);
            Matrix::hstack(&[&stacked, &e]).expect("same height").rank() > rank
        })
        .ok_or_else(|| ConstructError::Params("stacked A is surjective".into()))?;
    let b = (0..n)
        .map(|i| {
            let mut m = Matrix::zeros(f, d.d2, d.d0);
            if pick / d.d2 == i {
                m.set(pick % d.d2, 0, f.one());
            }
            m
        })
        .collect();
    verified(assemble(alg, &Blocks { d, a: a_raw, b, c })?, d)
}

/// Normalized `A′` assembled block-diagonally from a root decomposition of `(d₁, d₂)`.
fn structured_a<F: Field>(f: &F, n: usize, d: DimVec3) -> Result<Vec<Matrix<F>>, ConstructError> {
    let parts = root_decompose(n, d.d1, d.d2)?;
    let pieces: Vec<Vec<Matrix<F>>> = parts
        .iter()
        .map(|&(k, l)| if k == 1 { dim1_a(f, n, l) } else { dimgt1_a(f, n, k) })
        .collect();
    Ok((0..n)
        .map(|i| block_diag(f, &pieces.iter().map(|p| p[i].clone()).collect::<Vec<_>>()))
        .collect())
}

/// Given normalized `A′`, draws `C` uniformly from the solutions of
/// `Σ_j A′_j C_j = 0` and `B` uniformly, and keeps the result when the layer
/// coverage conditions hold, i.e. when its radical layering is `d`.
pub(crate) fn complete<F: Field, R: Rng + ?Sized>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    a_norm: &[Matrix<F>],
    rng: &mut R,
) -> Result<Option<Representation<F>>, ConstructError> {
    let (f, n) = (alg.field(), alg.n());
    if hcat(f, d.d2, a_norm).rank() != d.d2 {
        return Ok(None);
    }
    let kernel = hcat(f, d.d2, a_norm).kernel_basis();
    let stacked_c = kernel.mul(&Matrix::random(f, kernel.cols(), d.d0, rng));
    let c: Vec<_> = (0..n).map(|j| stacked_c.submatrix(j * d.d1, 0, d.d1, d.d0)).collect();
    if hcat(f, d.d1, &c).rank() != d.d1 {
        return Ok(None);
    }
    let a = alg.denormalize_tuple(a_norm)?;
    let b = (0..n).map(|_| Matrix::random(f, d.d2, d.d0, rng)).collect();
    let rep = assemble(alg, &Blocks { d, a, b, c })?;
    Ok((rep.raddim() == d.to_layering()).then_some(rep))
}

/// Random normalized `A′` tuple of shape `d₂ × d₁`.
pub(crate) fn random_a<F: Field, R: Rng + ?Sized>(f: &F, n: usize, d: DimVec3, rng: &mut R) -> Vec<Matrix<F>> {
    (0..n).map(|_| Matrix::random(f, d.d2, d.d1, rng)).collect()
}

pub(crate) fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// Looks for a representation with radical layering `d` without checking
/// nonemptiness first. Even attempts use the root-decomposition `A`, odd
/// attempts a uniformly random one.
pub fn search_witness<F: Field>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    seed: u64,
    attempts: usize,
) -> Result<Representation<F>, ConstructError> {
    let (f, n) = (alg.field(), alg.n());
    let structured = structured_a(f, n, d).ok();
    for attempt in 0..attempts {
        let mut rng = attempt_rng(seed, attempt);
        let a_norm = match (&structured, attempt % 2) {
            (Some(s), 0) => s.clone(),
            _ => random_a(f, n, d, &mut rng),
        };
        if let Some(rep) = complete(alg, d, &a_norm, &mut rng)? {
            return Ok(rep);
        }
    }
    Err(ConstructError::SearchFailed { d, attempts, seed })
}

/// A representation with radical layering exactly `d`.
pub fn witness_any<F: Field>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    seed: u64,
    attempts: usize,
) -> Result<Representation<F>, ConstructError> {
    if !rad_nonempty(alg.n(), d) {
        return Err(LayeringError::Empty {
            n: alg.n(),
            d,
            reason: crate::layering::nonempty_violation(alg.n(), d).unwrap_or_default(),
        }
        .into());
    }
    search_witness(alg, d, seed, attempts)
}
