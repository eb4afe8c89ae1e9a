//! Fibers of the relation map `Φ`: given a representation `M′` of the lower
//! layers, the extensions by a top layer `d₀` that satisfy the relations form
//! a vector space whose dimension is read off from the matrices `B(a)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{evaluate_word, AlgebraError, Presentation, Quiver, RelationGenerator, Term};
use crate::exactmat::{Field, Matrix};
use crate::layering::LayeringVector;
use crate::rep::{hcat, RepError, Representation};
use crate::sampler::sample_seed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("top layer has {got} entries, the quiver has {expected} vertices")]
    Shape { expected: usize, got: usize },
    #[error("layering {layering} has more layers than the truncation length {truncation}")]
    TooManyLayers { layering: LayeringVector, truncation: usize },
    #[error("no representation with layering {layering} after {attempts} attempts")]
    Exhausted { layering: LayeringVector, attempts: usize },
    #[error("unknown example relation set {0:?}")]
    UnknownExample(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const DEFAULT_LAYER_ATTEMPTS: usize = 200;

/// `B(a)`: one block row per relation starting at `a`, one block column per
/// arrow starting at `a`; the block for `(r, f)` is `Σ c·g(M′)` over the
/// terms `c·g·f` of `r`.
pub fn fiber_matrix<F: Field>(mprime: &Representation<F>, a: usize) -> Matrix<F> {
    let pres = mprime.presentation();
    let q = pres.quiver();
    let f = mprime.field();
    let dims = mprime.dims();
    let rels: Vec<&RelationGenerator<F>> = pres.relations().iter().filter(|r| r.source() == a).collect();
    let arrows = q.arrows_from(a);
    let heights: Vec<usize> = rels.iter().map(|r| dims[r.target()]).collect();
    let widths: Vec<usize> = arrows.iter().map(|&x| dims[q.arrow(x).target]).collect();
    let mut out = Matrix::zeros(f, heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (rel, &h) in rels.iter().zip(&heights) {
        let mut c0 = 0;
        for (&x, &w) in arrows.iter().zip(&widths) {
            let block = rel
                .terms()
                .iter()
                .filter(|t| t.last == x)
                .fold(Matrix::zeros(f, h, w), |acc, t| {
                    let g = evaluate_word(pres, dims, mprime.arrow_matrices(), &t.prefix).expect("composable");
                    acc.add(&g.scale(&t.coeff))
                });
            out.paste(r0, c0, &block);
            c0 += w;
        }
        r0 += h;
    }
    out
}

/// `n(a) = Σ_{s(f)=a} dim M′(e(f))`.
pub fn fiber_width<F: Field>(mprime: &Representation<F>, a: usize) -> usize {
    let q = mprime.presentation().quiver();
    q.arrows_from(a).iter().map(|&x| mprime.dims()[q.arrow(x).target]).sum()
}

/// Dimension of the fiber of `ker Φ` over `M′` for top layer `d0`:
/// `Σ_a (n(a) − rank B(a))·d₀(a)`.
pub fn fiber_dim<F: Field>(mprime: &Representation<F>, d0: &[usize]) -> Result<usize, BundleError> {
    let nv = mprime.presentation().quiver().vertex_count();
    if d0.len() != nv {
        return Err(BundleError::Shape { expected: nv, got: d0.len() });
    }
    Ok((0..nv)
        .map(|a| (fiber_width(mprime, a) - fiber_matrix(mprime, a).rank()) * d0[a])
        .sum())
}

/// Extends `lower` by a top layer of dimensions `top`: the new arrow blocks
/// `N_f` are drawn from the kernel of `B(a)`, so every relation holds, and
/// the draw is kept when the old top layer is covered.
fn extend<F: Field, R: Rng + ?Sized>(
    lower: &Representation<F>,
    top: &[usize],
    rng: &mut R,
) -> Result<Option<Representation<F>>, BundleError> {
    let pres = lower.presentation();
    let q = pres.quiver();
    let f = lower.field();
    let low = lower.dims();
    let mut n_blocks: Vec<Option<Matrix<F>>> = vec![None; q.arrows().len()];
    for a in 0..q.vertex_count() {
        let kernel = fiber_matrix(lower, a).kernel_basis();
        let stacked = kernel.mul(&Matrix::random(f, kernel.cols(), top[a], rng));
        let mut r0 = 0;
        for x in q.arrows_from(a) {
            let h = low[q.arrow(x).target];
            n_blocks[x] = Some(stacked.submatrix(r0, 0, h, top[a]));
            r0 += h;
        }
    }
    let n_blocks: Vec<Matrix<F>> = n_blocks.into_iter().map(|b| b.expect("every arrow has a source")).collect();
    for b in 0..q.vertex_count() {
        let images: Vec<Matrix<F>> = q
            .arrows_into(b)
            .into_iter()
            .map(|x| hcat(f, low[b], &[lower.arrow(x).clone(), n_blocks[x].clone()]))
            .collect();
        if hcat(f, low[b], &images).rank() != low[b] {
            return Ok(None);
        }
    }
    let dims: Vec<usize> = low.iter().zip(top).map(|(l, t)| l + t).collect();
    let arrows = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(x, arr)| {
            let mut m = Matrix::zeros(f, dims[arr.target], dims[arr.source]);
            m.paste(0, 0, lower.arrow(x));
            m.paste(0, low[arr.source], &n_blocks[x]);
            m
        })
        .collect();
    Ok(Some(Representation::new(pres.clone(), dims, arrows)?))
}

/// A random representation with radical layering `layering`, built from the
/// deepest layer up. Coordinates are ordered deepest layer first.
pub fn sample_layered<F: Field, R: Rng + ?Sized>(
    pres: &Arc<Presentation<F>>,
    layering: &LayeringVector,
    rng: &mut R,
    attempts: usize,
) -> Result<Representation<F>, BundleError> {
    let nv = pres.quiver().vertex_count();
    if layering.vertex_count() != nv && !layering.is_empty() {
        return Err(BundleError::Shape { expected: nv, got: layering.vertex_count() });
    }
    if layering.len() > pres.truncation() {
        return Err(BundleError::TooManyLayers { layering: layering.clone(), truncation: pres.truncation() });
    }
    let layers = layering.layers();
    let Some((deepest, rest)) = layers.split_last() else {
        return Ok(Representation::zero(pres.clone(), vec![0; nv])?);
    };
    let mut current = Representation::zero(pres.clone(), deepest.clone())?;
    for top in rest.iter().rev() {
        let mut next = None;
        for _ in 0..attempts {
            if let Some(rep) = extend(&current, top, rng)? {
                next = Some(rep);
                break;
            }
        }
        current = next.ok_or_else(|| BundleError::Exhausted { layering: layering.clone(), attempts })?;
    }
    debug_assert_eq!(current.raddim(), layering.padded(pres.truncation()));
    Ok(current)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberPoint {
    pub sample: usize,
    pub seed: u64,
    pub fiber_dim: usize,
    pub representation: Value,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberReport {
    pub layering: LayeringVector,
    pub samples: usize,
    /// Multiset of observed fiber dimensions: value ↦ count.
    pub fiber_dims: BTreeMap<usize, usize>,
    pub constant: bool,
    pub witness_pair: Option<(FiberPoint, FiberPoint)>,
    pub seed: u64,
}

impl FiberReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("layering {} samples {} seed {}\n", self.layering, self.samples, self.seed);
        out.push_str("fiber dim  count\n");
        for (d, c) in &self.fiber_dims {
            out.push_str(&format!("{d:<11}{c}\n"));
        }
        out.push_str(if self.constant { "constant\n" } else { "not constant\n" });
        if let Some((p, q)) = &self.witness_pair {
            out.push_str(&format!(
                "witness: sample {} (seed {}) has fiber dim {}, sample {} (seed {}) has {}\n",
                p.sample, p.seed, p.fiber_dim, q.sample, q.seed, q.fiber_dim
            ));
        }
        out
    }
}

/// Samples points `M′` with layering `(d₁, …)` and records the fiber
/// dimension for top layer `d₀` at each. Sample `i` is reproducible from
/// `sample_seed(seed, i)` alone.
pub fn fiber_constancy_probe<F: Field>(
    pres: &Arc<Presentation<F>>,
    layering: &LayeringVector,
    samples: usize,
    seed: u64,
) -> Result<FiberReport, BundleError> {
    let d0 = layering.layers().first().cloned().unwrap_or_default();
    let lower = layering.without_top();
    let mut fiber_dims = BTreeMap::new();
    let mut first: Option<FiberPoint> = None;
    let mut witness_pair = None;
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mprime = sample_layered(pres, &lower, &mut rng, DEFAULT_LAYER_ATTEMPTS)?;
        let dim = fiber_dim(&mprime, &d0)?;
        *fiber_dims.entry(dim).or_insert(0) += 1;
        let point = || FiberPoint { sample: i, seed: s, fiber_dim: dim, representation: mprime.to_json() };
        match &first {
            None => first = Some(point()),
            Some(p) if witness_pair.is_none() && p.fiber_dim != dim => {
                witness_pair = Some((p.clone(), point()));
            }
            _ => {}
        }
    }
    Ok(FiberReport {
        layering: layering.clone(),
        samples,
        constant: fiber_dims.len() <= 1,
        fiber_dims,
        witness_pair,
        seed,
    })
}

fn term<F: Field>(field: &F, c: i64, prefix: Vec<usize>, last: usize) -> Term<F> {
    Term { coeff: field.from_i64(c), prefix, last }
}

/// Names of the relation sets accepted by [`two_vertex_presentation`].
pub const TWO_VERTEX_RELATIONS: [&str; 4] = ["ab+c2", "bc", "bab+bc2", "ba"];

/// Vertices 1, 2 with a loop `c` at 1, `b: 1 → 2`, `a: 2 → 1`, one relation
/// from [`TWO_VERTEX_RELATIONS`], paths of length `m` set to zero.
pub fn two_vertex_presentation<F: Field>(field: &F, relations: &str, m: usize) -> Result<Presentation<F>, BundleError> {
    let q = Quiver::new(&["1", "2"], &[("c", "1", "1"), ("b", "1", "2"), ("a", "2", "1")])?;
    let (c, b, a) = (0, 1, 2);
    let terms = match relations {
        "ab+c2" => vec![term(field, 1, vec![a], b), term(field, 1, vec![c], c)],
        "bc" => vec![term(field, 1, vec![b], c)],
        "bab+bc2" => vec![term(field, 1, vec![b, a], b), term(field, 1, vec![b, c], c)],
        "ba" => vec![term(field, 1, vec![b], a)],
        other => return Err(BundleError::UnknownExample(other.to_string())),
    };
    let rel = RelationGenerator::new(&q, terms)?;
    Ok(Presentation::new(field.clone(), q, vec![rel], m)?)
}

/// `k[x,y]/(x³, y²)` as one vertex with loops `x, y`, relations `x·x·x`,
/// `y·y`, `xy − yx`, and paths of length 4 set to zero.
pub fn truncated_polynomial_presentation<F: Field>(field: &F) -> Result<Presentation<F>, BundleError> {
    let q = Quiver::new(&["v"], &[("x", "v", "v"), ("y", "v", "v")])?;
    let (x, y) = (0, 1);
    let rels = vec![
        RelationGenerator::new(&q, vec![term(field, 1, vec![x, x], x)])?,
        RelationGenerator::new(&q, vec![term(field, 1, vec![y], y)])?,
        RelationGenerator::new(&q, vec![term(field, 1, vec![x], y), term(field, -1, vec![y], x)])?,
    ];
    Ok(Presentation::new(field.clone(), q, rels, 4)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LocalAlgebra;
    use crate::exactmat::PrimeField;
    use crate::sampler::sample_with_radlayering;
    use crate::layering::DimVec3;

    #[test]
    fn local_example_value() {
        let f = PrimeField::generic();
        let alg = LocalAlgebra::standard(&f, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mprime = sample_layered(alg.presentation(), &LayeringVector::single(&[2, 1]), &mut rng, 50).unwrap();
        assert_eq!(fiber_dim(&mprime, &[1]).unwrap(), 5);
        let zero = Representation::zero(alg.presentation().clone(), vec![3]).unwrap();
        assert_eq!(fiber_dim(&zero, &[2]).unwrap(), 2 * 6);
    }

    #[test]
    fn rank_of_b_is_dim_rad_squared() {
        let f = PrimeField::generic();
        let alg = LocalAlgebra::standard(&f, 3).unwrap();
        for seed in 0..5 {
            let m = sample_with_radlayering(&alg, DimVec3::new(2, 3, 4), seed, 100).unwrap();
            let mprime_dim = 3 + 4;
            let rad = m.radical_chain();
            let mprime = Representation::new(
                alg.presentation().clone(),
                vec![mprime_dim],
                m.arrow_matrices().iter().map(|x| x.submatrix(0, 0, mprime_dim, mprime_dim)).collect(),
            )
            .unwrap();
            assert_eq!(fiber_matrix(&mprime, 0).rank(), rad[2][0].cols());
        }
    }

    #[test]
    fn sampled_points_have_requested_layering() {
        let f = PrimeField::new(3).unwrap();
        let pres = Arc::new(two_vertex_presentation(&f, "bab+bc2", 4).unwrap());
        let l: LayeringVector = "1,0;1,1;1,0".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = sample_layered(&pres, &l, &mut rng, 200).unwrap();
        assert_eq!(m.raddim(), l.padded(4));
        let too_long: LayeringVector = "1,0;1,0;1,0;1,0;1,0".parse().unwrap();
        assert!(matches!(sample_layered(&pres, &too_long, &mut rng, 10), Err(BundleError::TooManyLayers { .. })));
    }

    #[test]
    fn polynomial_example_is_not_constant() {
        let f = PrimeField::new(3).unwrap();
        let pres = Arc::new(truncated_polynomial_presentation(&f).unwrap());
        let report = fiber_constancy_probe(&pres, &LayeringVector::single(&[1, 1, 1]), 200, 3).unwrap();
        assert!(!report.constant, "{}", report.to_text());
        let (p, q) = report.witness_pair.clone().unwrap();
        assert_ne!(p.fiber_dim, q.fiber_dim);
        let again = fiber_constancy_probe(&pres, &LayeringVector::single(&[1, 1, 1]), 200, 3).unwrap();
        assert_eq!(again.fiber_dims, report.fiber_dims);
    }

    #[test]
    fn unknown_relation_set() {
        let f = PrimeField::new(3).unwrap();
        assert!(matches!(two_vertex_presentation(&f, "abc", 4), Err(BundleError::UnknownExample(_))));
    }
}
