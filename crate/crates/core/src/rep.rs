//! Concrete representations: relation checking, radical and socle chains,
//! layerings, adapted flag bases and the h-invariants of the cube-zero family.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{
    evaluate_relation, evaluate_word, presentation_field, AlgebraError, LocalAlgebra, Presentation,
};
use crate::exactmat::{Field, FieldSpec, MatError, Matrix};
use crate::layering::LayeringVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A relation generator does not vanish.
    Relation { index: usize, element: String },
    /// A path of the truncation length does not vanish.
    Truncation { word: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Relation { index, element } => write!(f, "relation #{index} ({element}) is nonzero"),
            Violation::Truncation { word } => write!(f, "path {word} is nonzero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("arrow {arrow} should be {expected:?}, got {got:?}")]
    Shape { arrow: String, expected: (usize, usize), got: (usize, usize) },
    #[error("expected {expected} entries, got {got}")]
    Count { expected: usize, got: usize },
    #[error("not a representation: {0}")]
    Invalid(Violation),
    #[error("representations belong to different presentations")]
    PresentationMismatch,
    #[error("operation needs the cube-zero local family")]
    NotLocal,
    #[error("operation needs a one-vertex presentation")]
    NotOneVertex,
    #[error("malformed representation document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// A representation `(φ, V)` of a presentation: one matrix per arrow, of
/// shape `dim V(target) × dim V(source)`, satisfying every relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<F: Field> {
    pres: Arc<Presentation<F>>,
    dims: Vec<usize>,
    arrows: Vec<Matrix<F>>,
}

fn check_shapes<F: Field>(
    pres: &Presentation<F>,
    dims: &[usize],
    arrows: &[Matrix<F>],
) -> Result<(), RepError> {
    let q = pres.quiver();
    if dims.len() != q.vertex_count() {
        return Err(RepError::Count { expected: q.vertex_count(), got: dims.len() });
    }
    if arrows.len() != q.arrows().len() {
        return Err(RepError::Count { expected: q.arrows().len(), got: arrows.len() });
    }
    for (a, m) in q.arrows().iter().zip(arrows) {
        let expected = (dims[a.target], dims[a.source]);
        if m.shape() != expected {
            return Err(RepError::Shape { arrow: a.name.clone(), expected, got: m.shape() });
        }
    }
    Ok(())
}

/// Checks every relation generator and every path of the truncation length
/// on raw arrow data whose shapes are already known to be consistent.
pub fn check_relations_raw<F: Field>(
    pres: &Presentation<F>,
    dims: &[usize],
    arrows: &[Matrix<F>],
) -> Result<(), Violation> {
    let q = pres.quiver();
    for (index, rel) in pres.relations().iter().enumerate() {
        let value = evaluate_relation(pres, dims, arrows, rel).expect("relations are composable");
        if !value.is_zero() {
            return Err(Violation::Relation { index, element: rel.describe(q, pres.field()) });
        }
    }
    for v in 0..q.vertex_count() {
        for word in q.words_from(v, pres.truncation()) {
            if !evaluate_word(pres, dims, arrows, &word).expect("composable").is_zero() {
                return Err(Violation::Truncation { word: q.word_name(&word) });
            }
        }
    }
    Ok(())
}

/// `[parts…]` side by side; an empty list gives a `rows × 0` matrix.
pub(crate) fn hcat<F: Field>(field: &F, rows: usize, parts: &[Matrix<F>]) -> Matrix<F> {
    if parts.is_empty() {
        return Matrix::zeros(field, rows, 0);
    }
    Matrix::hstack(&parts.iter().collect::<Vec<_>>()).expect("equal heights")
}

/// Parts stacked vertically; an empty list gives a `0 × cols` matrix.
pub(crate) fn vcat<F: Field>(field: &F, cols: usize, parts: &[Matrix<F>]) -> Matrix<F> {
    if parts.is_empty() {
        return Matrix::zeros(field, 0, cols);
    }
    Matrix::vstack(&parts.iter().collect::<Vec<_>>()).expect("equal widths")
}

/// Canonical basis of the column span of `m`: the nonzero rows of the reduced
/// echelon form of `mᵀ`, as columns.
fn canonical_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let e = m.transpose().echelon();
    let r = e.pivots.len();
    e.reduced.submatrix(0, 0, r, m.rows()).transpose()
}

impl<F: Field> Representation<F> {
    /// Validates shapes and relations.
    pub fn new(
        pres: Arc<Presentation<F>>,
        dims: Vec<usize>,
        arrows: Vec<Matrix<F>>,
    ) -> Result<Self, RepError> {
        check_shapes(&pres, &dims, &arrows)?;
        check_relations_raw(&pres, &dims, &arrows).map_err(RepError::Invalid)?;
        Ok(Representation { pres, dims, arrows })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(
        pres: Arc<Presentation<F>>,
        dims: Vec<usize>,
        arrows: Vec<Matrix<F>>,
    ) -> Self {
        check_shapes(&pres, &dims, &arrows).expect("shapes");
        Representation { pres, dims, arrows }
    }

    /// A one-vertex representation of a local algebra from its generator matrices.
    pub fn local(alg: &LocalAlgebra<F>, matrices: Vec<Matrix<F>>) -> Result<Self, RepError> {
        let d = matrices.first().map_or(0, Matrix::rows);
        Self::new(alg.presentation().clone(), vec![d], matrices)
    }

    /// All arrows zero.
    pub fn zero(pres: Arc<Presentation<F>>, dims: Vec<usize>) -> Result<Self, RepError> {
        let f = pres.field().clone();
        let arrows = pres
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(&f, dims.get(a.target).copied().unwrap_or(0), dims.get(a.source).copied().unwrap_or(0)))
            .collect();
        Self::new(pres, dims, arrows)
    }

    pub fn presentation(&self) -> &Arc<Presentation<F>> {
        &self.pres
    }

    pub fn field(&self) -> &F {
        self.pres.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn arrow_matrices(&self) -> &[Matrix<F>] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Matrix<F> {
        &self.arrows[i]
    }

    /// Always `Ok` for a constructed representation; kept so callers can
    /// re-verify after external manipulation.
    pub fn check_relations(&self) -> Result<(), Violation> {
        check_relations_raw(&self.pres, &self.dims, &self.arrows)
    }

    /// Bases of `rad⁰ ⊇ rad¹ ⊇ … ⊇ radᵐ`, per vertex.
    pub fn radical_chain(&self) -> Vec<Vec<Matrix<F>>> {
        let f = self.field();
        let q = self.pres.quiver();
        let mut chain = vec![self.dims.iter().map(|&d| Matrix::identity(f, d)).collect::<Vec<_>>()];
        for _ in 0..self.pres.truncation() {
            let prev = chain.last().expect("nonempty");
            let next = (0..q.vertex_count())
                .map(|v| {
                    let images: Vec<Matrix<F>> = q
                        .arrows_into(v)
                        .into_iter()
                        .map(|a| self.arrows[a].mul(&prev[q.arrow(a).source]))
                        .collect();
                    hcat(f, self.dims[v], &images).column_space()
                })
                .collect();
            chain.push(next);
        }
        chain
    }

    /// Bases of `soc⁰ = 0 ⊆ soc¹ ⊆ … ⊆ socᵐ`, per vertex; `socⁱ` is the
    /// common kernel of all paths of length `i`.
    pub fn socle_chain(&self) -> Vec<Vec<Matrix<F>>> {
        let f = self.field();
        let q = self.pres.quiver();
        let mut chain = vec![self.dims.iter().map(|&d| Matrix::zeros(f, d, 0)).collect::<Vec<_>>()];
        for len in 1..=self.pres.truncation() {
            let layer = (0..q.vertex_count())
                .map(|v| {
                    let maps: Vec<Matrix<F>> = q
                        .words_from(v, len)
                        .iter()
                        .map(|w| evaluate_word(&self.pres, &self.dims, &self.arrows, w).expect("composable"))
                        .collect();
                    vcat(f, self.dims[v], &maps).kernel_basis()
                })
                .collect();
            chain.push(layer);
        }
        chain
    }

    /// Dimensions of `radⁱ/radⁱ⁺¹`, `i = 0..m`.
    pub fn raddim(&self) -> LayeringVector {
        let chain = self.radical_chain();
        let layers = chain
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| a.cols() - b.cols()).collect())
            .collect();
        LayeringVector::new(layers)
    }

    /// Dimensions of `socⁱ⁺¹/socⁱ`, `i = 0..m`.
    pub fn socdim(&self) -> LayeringVector {
        let chain = self.socle_chain();
        let layers = chain
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a.cols() - b.cols()).collect())
            .collect();
        LayeringVector::new(layers)
    }

    /// Conjugates by one invertible matrix per vertex: `φ(f) ↦ P_t⁻¹ φ(f) P_s`.
    /// `basis[v]` holds the new basis of `V(v)` as columns.
    pub fn change_basis(&self, basis: &[Matrix<F>]) -> Result<Self, RepError> {
        let inverses = basis
            .iter()
            .map(|p| p.inverse().ok_or_else(|| RepError::Malformed("change of basis is singular".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let q = self.pres.quiver();
        let arrows = q
            .arrows()
            .iter()
            .zip(&self.arrows)
            .map(|(a, m)| Ok(inverses[a.target].checked_mul(m)?.checked_mul(&basis[a.source])?))
            .collect::<Result<Vec<_>, RepError>>()?;
        Self::new(self.pres.clone(), self.dims.clone(), arrows)
    }

    fn adapt_to_chain(&self, flag: FlagKind, increasing: Vec<Vec<Matrix<F>>>) -> AdaptedRep<F> {
        let f = self.field();
        let nv = self.dims.len();
        let mut basis = Vec::with_capacity(nv);
        let mut block_sizes = vec![vec![0; nv]; increasing.len()];
        for v in 0..nv {
            let mut cols: Vec<Matrix<F>> = Vec::new();
            let mut current = Matrix::zeros(f, self.dims[v], 0);
            for (k, step) in increasing.iter().enumerate() {
                let canon = canonical_basis(&step[v]);
                let before = current.cols();
                for j in 0..canon.cols() {
                    let cand = canon.column(j);
                    let trial = Matrix::hstack(&[&current, &cand]).expect("same height");
                    if trial.rank() > current.cols() {
                        current = trial;
                        cols.push(cand);
                    }
                }
                block_sizes[k][v] = current.cols() - before;
            }
            basis.push(hcat(f, self.dims[v], &cols));
        }
        let adapted = self.change_basis(&basis).expect("flag basis is invertible");
        AdaptedRep { base: self.clone(), flag, change_of_basis: basis, adapted, block_sizes }
    }

    /// Change of basis sending `radⁱ V(a)` onto the span of the first
    /// `dim radⁱ V(a)` basis vectors. Blocks are ordered deepest layer first.
    pub fn adapt_basis(&self) -> AdaptedRep<F> {
        let mut chain = self.radical_chain();
        chain.reverse(); // radᵐ = 0 first, rad⁰ = V last
        chain.remove(0);
        self.adapt_to_chain(FlagKind::Radical, chain)
    }

    /// Change of basis sending `socⁱ V(a)` onto the span of the first
    /// `dim socⁱ V(a)` basis vectors. Blocks are ordered socle first.
    pub fn adapt_socle_basis(&self) -> AdaptedRep<F> {
        let mut chain = self.socle_chain();
        chain.remove(0);
        self.adapt_to_chain(FlagKind::Socle, chain)
    }

    /// `self ⊕ other`, block diagonal on every arrow.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, RepError> {
        if !Arc::ptr_eq(&self.pres, &other.pres) && self.pres != other.pres {
            return Err(RepError::PresentationMismatch);
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let arrows = self.arrows.iter().zip(&other.arrows).map(|(a, b)| a.direct_sum(b)).collect();
        Self::new(self.pres.clone(), dims, arrows)
    }

    /// Arrow-wise transpose, a representation of the opposite algebra.
    /// `socdim` of the result equals `raddim` of `self` and vice versa.
    pub fn transpose_dual(&self) -> Result<Self, RepError> {
        if self.pres.quiver().vertex_count() != 1 {
            return Err(RepError::NotOneVertex);
        }
        let opposite = Arc::new(self.pres.opposite()?);
        let arrows = self.arrows.iter().map(Matrix::transpose).collect();
        Self::new(opposite, self.dims.clone(), arrows)
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        let q = self.pres.quiver();
        let arrows: BTreeMap<String, Value> = q
            .arrows()
            .iter()
            .zip(&self.arrows)
            .map(|(a, m)| {
                let rows: Vec<Value> = (0..m.rows())
                    .map(|i| Value::Array(m.row(i).iter().map(|e| f.to_json(e)).collect()))
                    .collect();
                (a.name.clone(), Value::Array(rows))
            })
            .collect();
        json!({
            "presentation": self.pres.to_json(),
            "dims": self.pres.named_counts(&self.dims),
            "arrows": arrows,
        })
    }

    pub fn from_json(field: &F, doc: &Value) -> Result<Self, RepError> {
        let malformed = |m: &str| RepError::Malformed(m.to_string());
        let pres_doc = doc.get("presentation").ok_or_else(|| malformed("missing presentation"))?;
        let pres = Arc::new(Presentation::from_json(field, pres_doc)?);
        let q = pres.quiver();
        let dims_doc = doc.get("dims").and_then(Value::as_object).ok_or_else(|| malformed("missing dims"))?;
        let dims = q
            .vertices()
            .iter()
            .map(|v| {
                dims_doc
                    .get(v)
                    .and_then(Value::as_u64)
                    .map(|d| d as usize)
                    .ok_or_else(|| RepError::Malformed(format!("missing dimension of vertex {v}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arrows_doc = doc.get("arrows").and_then(Value::as_object).ok_or_else(|| malformed("missing arrows"))?;
        let arrows = q
            .arrows()
            .iter()
            .map(|a| {
                let (rows, cols) = (dims[a.target], dims[a.source]);
                let m = arrows_doc
                    .get(&a.name)
                    .and_then(Value::as_array)
                    .ok_or_else(|| RepError::Malformed(format!("missing arrow {}", a.name)))?;
                if m.len() != rows {
                    return Err(RepError::Shape { arrow: a.name.clone(), expected: (rows, cols), got: (m.len(), cols) });
                }
                let mut entries = Vec::with_capacity(rows * cols);
                for row in m {
                    let row = row.as_array().ok_or_else(|| malformed("matrix rows must be arrays"))?;
                    if row.len() != cols {
                        return Err(RepError::Shape { arrow: a.name.clone(), expected: (rows, cols), got: (rows, row.len()) });
                    }
                    for e in row {
                        entries.push(field.from_json(e).map_err(AlgebraError::from)?);
                    }
                }
                Ok(Matrix::from_elems(field, rows, cols, entries)?)
            })
            .collect::<Result<Vec<_>, RepError>>()?;
        Self::new(pres, dims, arrows)
    }
}

/// Field named by a representation document's presentation.
pub fn representation_field(doc: &Value) -> Result<FieldSpec, RepError> {
    let pres = doc.get("presentation").ok_or_else(|| RepError::Malformed("missing presentation".into()))?;
    Ok(presentation_field(pres)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagKind {
    /// Blocks ordered `rad^{m−1}/radᵐ, …, rad⁰/rad¹`.
    Radical,
    /// Blocks ordered `soc¹/soc⁰, …, socᵐ/soc^{m−1}`.
    Socle,
}

/// The `A, B, C` blocks of a cube-zero representation in adapted form:
/// `x_i ↦ [[0, A_i, B_i], [0, 0, C_i], [0, 0, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlocks<F: Field> {
    pub a: Vec<Matrix<F>>,
    pub b: Vec<Matrix<F>>,
    pub c: Vec<Matrix<F>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HInvariants {
    /// `dim ⋂ ker C_i`
    pub h0: usize,
    /// `dim ⋂ ker A_i`
    pub h1: usize,
    /// socle-flag dual of `h0`: first socle layer minus `dim Σ im A_i`
    pub h0_dual: usize,
    /// socle-flag dual of `h1`: second socle layer minus `dim Σ im C_i`
    pub h1_dual: usize,
}

/// A representation together with a flag-adapted basis.
#[derive(Debug, Clone)]
pub struct AdaptedRep<F: Field> {
    base: Representation<F>,
    flag: FlagKind,
    change_of_basis: Vec<Matrix<F>>,
    adapted: Representation<F>,
    /// `block_sizes[position][vertex]`, in matrix block order.
    block_sizes: Vec<Vec<usize>>,
}

impl<F: Field> AdaptedRep<F> {
    pub fn base(&self) -> &Representation<F> {
        &self.base
    }

    pub fn flag(&self) -> FlagKind {
        self.flag
    }

    /// New basis vectors as columns, per vertex.
    pub fn change_of_basis(&self) -> &[Matrix<F>] {
        &self.change_of_basis
    }

    pub fn adapted(&self) -> &Representation<F> {
        &self.adapted
    }

    pub fn block_sizes(&self) -> &[Vec<usize>] {
        &self.block_sizes
    }

    /// The layering this flag realizes, in the usual layer order.
    pub fn layering(&self) -> LayeringVector {
        let mut layers = self.block_sizes.clone();
        if self.flag == FlagKind::Radical {
            layers.reverse();
        }
        LayeringVector::new(layers)
    }

    pub fn is_identity_change(&self) -> bool {
        self.change_of_basis
            .iter()
            .all(|p| *p == Matrix::identity(p.field(), p.rows()))
    }

    fn offset(&self, pos: usize, v: usize) -> usize {
        self.block_sizes[..pos].iter().map(|s| s[v]).sum()
    }

    /// Block of arrow `arrow` at block position `(row, col)`.
    pub fn block(&self, arrow: usize, row: usize, col: usize) -> Matrix<F> {
        let a = self.adapted.pres.quiver().arrow(arrow);
        let (t, s) = (a.target, a.source);
        self.adapted.arrows[arrow].submatrix(
            self.offset(row, t),
            self.offset(col, s),
            self.block_sizes[row][t],
            self.block_sizes[col][s],
        )
    }

    /// Every arrow is strictly block upper triangular.
    pub fn is_block_form(&self) -> bool {
        let k = self.block_sizes.len();
        let arrows = self.adapted.arrows.len();
        (0..arrows).all(|f| {
            (0..k).all(|r| (0..=r).all(|c| self.block(f, r, c).is_zero()))
        })
    }

    /// The rank conditions characterizing adapted flags. Radical flag: each
    /// layer is covered by the images of the layer above it. Socle flag: no
    /// nonzero vector of a layer is killed by every arrow into the layer below.
    pub fn flag_conditions_hold(&self) -> bool {
        let q = self.adapted.pres.quiver();
        let f = self.adapted.field();
        let k = self.block_sizes.len();
        for pos in 0..k.saturating_sub(1) {
            for v in 0..q.vertex_count() {
                match self.flag {
                    FlagKind::Radical => {
                        // row position pos, column position pos + 1 (one layer up)
                        let parts: Vec<_> = q.arrows_into(v).into_iter().map(|a| self.block(a, pos, pos + 1)).collect();
                        if hcat(f, self.block_sizes[pos][v], &parts).rank() != self.block_sizes[pos][v] {
                            return false;
                        }
                    }
                    FlagKind::Socle => {
                        let parts: Vec<_> = q.arrows_from(v).into_iter().map(|a| self.block(a, pos, pos + 1)).collect();
                        if vcat(f, self.block_sizes[pos + 1][v], &parts).rank() != self.block_sizes[pos + 1][v] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `A, B, C` blocks of a one-vertex, length-3 adapted representation.
    pub fn local_blocks(&self) -> Result<LocalBlocks<F>, RepError> {
        if self.block_sizes.len() != 3 || self.adapted.dims.len() != 1 {
            return Err(RepError::NotLocal);
        }
        let n = self.adapted.arrows.len();
        Ok(LocalBlocks {
            a: (0..n).map(|i| self.block(i, 0, 1)).collect(),
            b: (0..n).map(|i| self.block(i, 0, 2)).collect(),
            c: (0..n).map(|i| self.block(i, 1, 2)).collect(),
        })
    }

    /// `h0, h1` from this radical-adapted form and their duals from the
    /// socle-adapted form of the same representation.
    pub fn h_invariants(&self) -> Result<HInvariants, RepError> {
        let rad = match self.flag {
            FlagKind::Radical => self.clone(),
            FlagKind::Socle => self.base.adapt_basis(),
        };
        let soc = match self.flag {
            FlagKind::Socle => self.clone(),
            FlagKind::Radical => self.base.adapt_socle_basis(),
        };
        let f = self.base.field();
        let rb = rad.local_blocks()?;
        let (d1, d0) = (rad.block_sizes[1][0], rad.block_sizes[2][0]);
        let h0 = d0 - vcat(f, d0, &rb.c).rank();
        let h1 = d1 - vcat(f, d1, &rb.a).rank();
        let sb = soc.local_blocks()?;
        let (s0, s1) = (soc.block_sizes[0][0], soc.block_sizes[1][0]);
        let h0_dual = s0 - hcat(f, s0, &sb.a).rank();
        let h1_dual = s1 - hcat(f, s1, &sb.c).rank();
        Ok(HInvariants { h0, h1, h0_dual, h1_dual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> PrimeField {
        PrimeField::generic()
    }

    /// x₁ = E₁₂, x₂ = E₂₃ on k³: raddim (1,1,1) for S = x₁² + x₂².
    fn chain_witness(field: &PrimeField) -> Representation<PrimeField> {
        let alg = LocalAlgebra::standard(field, 2).unwrap();
        let x1 = Matrix::unit(field, 3, 3, 0, 1);
        let x2 = Matrix::unit(field, 3, 3, 1, 2);
        Representation::local(&alg, vec![x1, x2]).unwrap()
    }

    #[test]
    fn zero_rep_is_semisimple() {
        let alg = LocalAlgebra::standard(&f(), 2).unwrap();
        let z = Representation::zero(alg.presentation().clone(), vec![4]).unwrap();
        assert_eq!(z.raddim().as_single_vertex(), vec![4, 0, 0]);
        assert_eq!(z.socdim().as_single_vertex(), vec![4, 0, 0]);
        let a = z.adapt_basis();
        assert!(a.is_identity_change());
        let blocks = a.local_blocks().unwrap();
        assert_eq!(blocks.a[0].shape(), (0, 0));
        assert_eq!(blocks.c[0].shape(), (0, 4));
        let h = a.h_invariants().unwrap();
        assert_eq!((h.h0, h.h1), (4, 0));
    }

    #[test]
    fn chain_witness_layerings() {
        let field = f();
        let w = chain_witness(&field);
        assert_eq!(w.raddim().as_single_vertex(), vec![1, 1, 1]);
        assert_eq!(w.socdim().as_single_vertex(), vec![1, 1, 1]);
        let a = w.adapt_basis();
        assert!(a.is_identity_change());
        assert!(a.is_block_form());
        assert!(a.flag_conditions_hold());
        let h = a.h_invariants().unwrap();
        assert_eq!((h.h0, h.h1), (0, 0));
    }

    #[test]
    fn broken_witness_reports_relation() {
        let field = f();
        let alg = LocalAlgebra::standard(&field, 2).unwrap();
        // A₁ = 1 and C₁ = 1 makes A₁C₁ ≠ 0
        let x1 = Matrix::unit(&field, 3, 3, 0, 1).add(&Matrix::unit(&field, 3, 3, 1, 2));
        let x2 = Matrix::unit(&field, 3, 3, 1, 2);
        let rep = Representation::new_unchecked(alg.presentation().clone(), vec![3], vec![x1.clone(), x2.clone()]);
        let v = rep.check_relations().unwrap_err();
        assert!(matches!(v, Violation::Relation { index: 0, .. }), "{v}");
        assert!(matches!(
            Representation::local(&alg, vec![x1, x2]),
            Err(RepError::Invalid(Violation::Relation { .. }))
        ));
    }

    #[test]
    fn truncation_violation() {
        let q = Rationals;
        let alg = LocalAlgebra::new(2, Matrix::from_i64_rows(&q, &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        // x₁ a full 4-step nilpotent shift: x₁³ ≠ 0 while S = x₁x₂ + x₂x₁ = 0
        let shift = Matrix::from_fn(&q, 4, 4, |i, j| if j == i + 1 { q.one() } else { q.zero() });
        let zero = Matrix::zeros(&q, 4, 4);
        let err = Representation::local(&alg, vec![shift, zero]).unwrap_err();
        assert!(matches!(err, RepError::Invalid(Violation::Truncation { .. })), "{err}");
    }

    #[test]
    fn direct_sum_adds_layerings() {
        let field = f();
        let w = chain_witness(&field);
        let z1 = Representation::zero(w.presentation().clone(), vec![1]).unwrap();
        assert_eq!(w.direct_sum(&z1).unwrap().raddim().as_single_vertex(), vec![2, 1, 1]);
        assert_eq!(w.direct_sum(&w).unwrap().raddim().as_single_vertex(), vec![2, 2, 2]);
        let z0 = Representation::zero(w.presentation().clone(), vec![0]).unwrap();
        assert_eq!(w.direct_sum(&z0).unwrap(), w);
        let other = LocalAlgebra::standard(&field, 3).unwrap();
        let z = Representation::zero(other.presentation().clone(), vec![1]).unwrap();
        assert_eq!(w.direct_sum(&z), Err(RepError::PresentationMismatch));
    }

    #[test]
    fn dual_swaps_layerings() {
        let field = f();
        let alg = LocalAlgebra::standard(&field, 2).unwrap();
        // raddim (2,1,0): x₁ sends the second basis vector to the first
        let x1 = Matrix::unit(&field, 3, 3, 0, 1);
        let x2 = Matrix::zeros(&field, 3, 3);
        let r = Representation::local(&alg, vec![x1, x2]).unwrap();
        let d = r.transpose_dual().unwrap();
        assert_eq!(r.raddim().as_single_vertex(), vec![2, 1, 0]);
        assert_eq!(d.socdim(), r.raddim());
        assert_eq!(d.raddim(), r.socdim());
        assert_eq!(d.transpose_dual().unwrap(), r);
    }

    #[test]
    fn adapt_recovers_conjugated_witness() {
        let field = f();
        let w = chain_witness(&field);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Matrix::random_invertible(&field, 3, &mut rng);
        let moved = w.change_basis(&[p]).unwrap();
        let a = moved.adapt_basis();
        assert!(a.is_block_form());
        assert!(a.flag_conditions_hold());
        assert_eq!(a.layering(), w.raddim());
        assert_eq!(a.adapted().raddim(), w.raddim());
        let s = moved.adapt_socle_basis();
        assert!(s.is_block_form());
        assert!(s.flag_conditions_hold());
        assert_eq!(s.layering(), w.socdim());
    }

    #[test]
    fn json_round_trip() {
        let field = f();
        let w = chain_witness(&field);
        let doc = w.to_json();
        let back = Representation::from_json(&field, &doc).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_json().to_string(), doc.to_string());
        assert_eq!(representation_field(&doc).unwrap(), FieldSpec::generic());
        let mut bad = doc.clone();
        bad["arrows"]["x1"] = json!([[0, 1, 0], [0, 0, 0]]);
        assert!(matches!(Representation::from_json(&field, &bad), Err(RepError::Shape { .. })));
    }
}
