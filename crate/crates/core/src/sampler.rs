//! Random representations with a prescribed radical layering, Monte Carlo
//! estimates of generic values, and exhaustive enumeration over tiny fields.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::LocalAlgebra;
use crate::construct::{attempt_rng, complete, random_a, ConstructError};
use crate::exactmat::{Field, Matrix, PrimeField};
use crate::layering::{
    dominance_leq, generic_socdim, h0_generic, h1_generic, nonempty_violation, DimVec3, LayeringError,
};
use crate::rep::{hcat, vcat, Representation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SamplerError {
    #[error("no sample with radical layering {d} after {attempts} attempts (seed {seed})")]
    Exhausted { d: DimVec3, attempts: usize, seed: u64 },
    #[error("search space of {size} tuples exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

pub const DEFAULT_RETRY_BUDGET: usize = 100;

fn require_nonempty(n: usize, d: DimVec3) -> Result<(), SamplerError> {
    match nonempty_violation(n, d) {
        Some(reason) => Err(LayeringError::Empty { n, d, reason }.into()),
        None => Ok(()),
    }
}

/// A uniformly random point of the radical stratum of `d`, already in
/// adapted block form: random `A`, `C` from the solutions of the relation,
/// random `B`, rejected until the coverage ranks are full.
pub fn sample_with_radlayering<F: Field>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    seed: u64,
    retry_budget: usize,
) -> Result<Representation<F>, SamplerError> {
    require_nonempty(alg.n(), d)?;
    for attempt in 0..retry_budget {
        let mut rng = attempt_rng(seed, attempt);
        let a = random_a(alg.field(), alg.n(), d, &mut rng);
        if let Some(rep) = complete(alg, d, &a, &mut rng)? {
            return Ok(rep);
        }
    }
    Err(SamplerError::Exhausted { d, attempts: retry_budget, seed })
}

/// A random representation with socle layering `s`: the transpose of a
/// radical-layering sample for the opposite algebra.
pub fn sample_with_soclayering<F: Field>(
    alg: &LocalAlgebra<F>,
    s: DimVec3,
    seed: u64,
    retry_budget: usize,
) -> Result<Representation<F>, SamplerError> {
    let opposite = LocalAlgebra::new(alg.n(), alg.gram().transpose()).map_err(ConstructError::from)?;
    let rep = sample_with_radlayering(&opposite, s, seed, retry_budget)?;
    Ok(rep.transpose_dual().map_err(ConstructError::from)?)
}

/// `(h₀, h₁)` of a representation in radical-adapted block form of shape `d`.
pub fn adapted_h<F: Field>(rep: &Representation<F>, d: DimVec3) -> (usize, usize) {
    let f = rep.field();
    let a: Vec<_> = rep.arrow_matrices().iter().map(|x| x.submatrix(0, d.d2, d.d2, d.d1)).collect();
    let c: Vec<_> = rep.arrow_matrices().iter().map(|x| x.submatrix(d.d2, d.d2 + d.d1, d.d1, d.d0)).collect();
    (d.d0 - vcat(f, d.d0, &c).rank(), d.d1 - vcat(f, d.d1, &a).rank())
}

/// Seed of the `i`-th sample of a run.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    attempt_rng(seed, i).gen()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub socdim: DimVec3,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EstimationReport {
    pub n: usize,
    pub layering: DimVec3,
    /// Dominance minimum of the observed socle layerings; `None` when the
    /// observations have no least element.
    pub socdim_min: Option<DimVec3>,
    pub h0_min: usize,
    pub h1_min: usize,
    pub histogram: Vec<HistogramEntry>,
    /// Samples whose socle layering equals `socdim_min`.
    pub attaining: usize,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub expected_socdim: Option<DimVec3>,
    pub expected_h0: usize,
    pub expected_h1: usize,
    pub socdim_ok: bool,
    pub h0_ok: bool,
    pub h1_ok: bool,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.socdim_ok && self.h0_ok && self.h1_ok
    }
}

fn least(values: &BTreeSet<DimVec3>) -> Option<DimVec3> {
    values.iter().copied().find(|v| {
        values
            .iter()
            .all(|w| dominance_leq(&v.to_layering(), &w.to_layering()).expect("same shape"))
    })
}

fn run_estimate<F: Field>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    samples: usize,
    seed: u64,
) -> Result<EstimationReport, SamplerError> {
    let mut histogram: BTreeMap<DimVec3, usize> = BTreeMap::new();
    let (mut h0_min, mut h1_min) = (usize::MAX, usize::MAX);
    for i in 0..samples {
        let rep = sample_with_radlayering(alg, d, sample_seed(seed, i), DEFAULT_RETRY_BUDGET)?;
        let soc = rep.socdim().to_dimvec3().expect("three layers");
        *histogram.entry(soc).or_default() += 1;
        let (h0, h1) = adapted_h(&rep, d);
        h0_min = h0_min.min(h0);
        h1_min = h1_min.min(h1);
    }
    let observed: BTreeSet<_> = histogram.keys().copied().collect();
    let socdim_min = least(&observed);
    let attaining = socdim_min.map_or(0, |m| histogram[&m]);
    Ok(EstimationReport {
        n: alg.n(),
        layering: d,
        socdim_min,
        h0_min: if samples == 0 { 0 } else { h0_min },
        h1_min: if samples == 0 { 0 } else { h1_min },
        histogram: histogram.into_iter().map(|(socdim, count)| HistogramEntry { socdim, count }).collect(),
        attaining,
        seed,
        samples,
    })
}

/// Generic socle layering and h-values of the radical stratum of `d`, read
/// off as minima over `samples` random points. Observations without a least
/// element are retried once with twice as many samples.
pub fn estimate_generic<F: Field>(
    alg: &LocalAlgebra<F>,
    d: DimVec3,
    samples: usize,
    seed: u64,
) -> Result<EstimationReport, SamplerError> {
    require_nonempty(alg.n(), d)?;
    let report = run_estimate(alg, d, samples, seed)?;
    if report.socdim_min.is_none() && samples > 0 {
        return run_estimate(alg, d, 2 * samples, seed);
    }
    Ok(report)
}

impl EstimationReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn attaining_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.attaining as f64 / self.samples as f64
        }
    }

    /// Exact comparison with the closed forms.
    pub fn verdict(&self) -> Verdict {
        let expected_socdim = generic_socdim(self.n, self.layering).ok();
        let expected_h0 = h0_generic(self.n, self.layering).unwrap_or(0);
        let expected_h1 = h1_generic(self.n, self.layering).unwrap_or(0);
        Verdict {
            expected_socdim,
            expected_h0,
            expected_h1,
            socdim_ok: expected_socdim.is_some() && self.socdim_min == expected_socdim,
            h0_ok: self.h0_min == expected_h0,
            h1_ok: self.h1_min == expected_h1,
        }
    }
}

/// Number of `(A, C)` tuples enumerated for shape `d`: `p^{n(d₂d₁ + d₁d₀)}`.
pub fn search_space(n: usize, d: DimVec3, p: u64) -> u128 {
    let exp = n * (d.d2 * d.d1 + d.d1 * d.d0);
    u32::try_from(exp)
        .ok()
        .and_then(|e| (p as u128).checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// Every radical layering of total dimension `total` realized over `F_p` for
/// `S = Σ x_i²`, found by enumerating all adapted block tuples. `B` plays no
/// part in the relation or the layering and is fixed to zero.
pub fn brute_force_layerings(
    n: usize,
    total: usize,
    p: u64,
    budget: u128,
) -> Result<BTreeSet<DimVec3>, SamplerError> {
    let field = PrimeField::new(p).map_err(|e| ConstructError::Params(e.to_string()))?;
    let shapes: Vec<DimVec3> = DimVec3::with_total(total).collect();
    let size = shapes.iter().fold(0u128, |acc, &d| acc.saturating_add(search_space(n, d, p)));
    if size > budget {
        return Err(SamplerError::Budget { size, budget });
    }
    let alg = LocalAlgebra::standard(&field, n).map_err(ConstructError::from)?;
    let mut found = BTreeSet::new();
    for d in shapes {
        if realizable(&alg, d, p) {
            found.insert(d);
        }
    }
    Ok(found)
}

fn realizable(alg: &LocalAlgebra<PrimeField>, d: DimVec3, p: u64) -> bool {
    let f = alg.field();
    let n = alg.n();
    let a_len = d.d2 * d.d1;
    let c_len = d.d1 * d.d0;
    let per = a_len + c_len;
    let count = search_space(n, d, p);
    let mut digits = vec![0u64; n * per];
    for _ in 0..count {
        let a: Vec<_> = (0..n)
            .map(|i| Matrix::from_elems(f, d.d2, d.d1, digits[i * per..i * per + a_len].to_vec()).expect("sized"))
            .collect();
        let c: Vec<_> = (0..n)
            .map(|i| Matrix::from_elems(f, d.d1, d.d0, digits[i * per + a_len..(i + 1) * per].to_vec()).expect("sized"))
            .collect();
        let relation = (0..n).fold(Matrix::zeros(f, d.d2, d.d0), |acc, i| acc.add(&a[i].mul(&c[i])));
        if relation.is_zero() && hcat(f, d.d2, &a).rank() == d.d2 && hcat(f, d.d1, &c).rank() == d.d1 {
            return true;
        }
        for x in digits.iter_mut() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    false
}
