//! Algebra presentations: quivers with homogeneous relations stored in the
//! decomposed form `r = Σ c·g·x` (`x` the first arrow traversed), and the
//! local family `k⟨x₁,…,xₙ⟩/((x₁,…,xₙ)³ + (S))` with `S = Σ a_ij x_i x_j`.
//!
//! Words are written in algebraic order: the word `[w₁, …, w_k]` is the
//! product `w₁·w₂·…·w_k`, i.e. `w_k` is traversed first, and it evaluates to
//! the matrix product `φ(w₁)·…·φ(w_k)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exactmat::{Field, FieldError, FieldSpec, MatError, Matrix};
use crate::rep::Representation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("path {0} is not composable")]
    NotComposable(String),
    #[error("relation is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("relation term {0} has degree < 2")]
    DegreeTooLow(String),
    #[error("relation has no terms")]
    EmptyRelation,
    #[error("gram matrix is singular")]
    Degenerate,
    #[error("local algebra needs n >= 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("truncation length must be at least 2, got {0}")]
    BadTruncation(usize),
    #[error("expected {expected} matrices, got {got}")]
    TupleLength { expected: usize, got: usize },
    #[error("field mismatch: presentation over {expected}, data over {got}")]
    FieldMismatch { expected: FieldSpec, got: FieldSpec },
    #[error("operation needs a one-vertex presentation")]
    NotOneVertex,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// `arrows` are `(name, source, target)` triples naming existing vertices.
    pub fn new<S: AsRef<str>>(
        vertices: &[S],
        arrows: &[(S, S, S)],
    ) -> Result<Self, AlgebraError> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(AlgebraError::Duplicate(v.clone()));
            }
        }
        let find = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| AlgebraError::UnknownVertex(name.to_string()))
        };
        let mut out: Vec<Arrow> = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if out.iter().any(|a| a.name == name) {
                return Err(AlgebraError::Duplicate(name));
            }
            out.push(Arrow { name, source: find(s.as_ref())?, target: find(t.as_ref())? });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    /// One vertex with `n` loops named `x1`, …, `xn`.
    pub fn loops(n: usize) -> Self {
        let arrows = (1..=n)
            .map(|i| Arrow { name: format!("x{i}"), source: 0, target: 0 })
            .collect();
        Quiver { vertices: vec!["v".to_string()], arrows }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| AlgebraError::UnknownArrow(name.to_string()))
    }

    pub fn arrows_from(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].source == v).collect()
    }

    pub fn arrows_into(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].target == v).collect()
    }

    pub fn word_name(&self, word: &[usize]) -> String {
        word.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("·")
    }

    /// Start and end vertex of a nonempty word, or an error if it does not compose.
    pub fn word_endpoints(&self, word: &[usize]) -> Result<(usize, usize), AlgebraError> {
        let (Some(&first), Some(&last)) = (word.first(), word.last()) else {
            return Err(AlgebraError::NotComposable("(empty word)".into()));
        };
        for pair in word.windows(2) {
            // w_i · w_{i+1}: w_{i+1} is traversed first
            if self.arrows[pair[1]].target != self.arrows[pair[0]].source {
                return Err(AlgebraError::NotComposable(self.word_name(word)));
            }
        }
        Ok((self.arrows[last].source, self.arrows[first].target))
    }

    /// All composable words of length `len` starting at vertex `v`.
    pub fn words_from(&self, v: usize, len: usize) -> Vec<Vec<usize>> {
        // build traversal order then reverse into algebraic order
        let mut walks: Vec<Vec<usize>> = vec![Vec::new()];
        let mut ends = vec![v];
        for _ in 0..len {
            let mut next_walks = Vec::new();
            let mut next_ends = Vec::new();
            for (walk, &end) in walks.iter().zip(&ends) {
                for a in self.arrows_from(end) {
                    let mut w = walk.clone();
                    w.push(a);
                    next_walks.push(w);
                    next_ends.push(self.arrows[a].target);
                }
            }
            walks = next_walks;
            ends = next_ends;
        }
        walks
            .into_iter()
            .map(|mut w| {
                w.reverse();
                w
            })
            .collect()
    }
}

/// A path in the quiver; the trivial path `e_a` has no arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub word: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path { start: vertex, end: vertex, word: Vec::new() }
    }

    pub fn new(quiver: &Quiver, word: Vec<usize>) -> Result<Self, AlgebraError> {
        let (start, end) = quiver.word_endpoints(&word)?;
        Ok(Path { start, end, word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// One summand `c·g·x` of a decomposed relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<F: Field> {
    pub coeff: F::Elem,
    pub prefix: Vec<usize>,
    pub last: usize,
}

impl<F: Field> Term<F> {
    /// The full word `g·x`.
    pub fn word(&self) -> Vec<usize> {
        let mut w = self.prefix.clone();
        w.push(self.last);
        w
    }
}

/// A homogeneous relation `Σ c_j g_j x_j` with common start and end vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationGenerator<F: Field> {
    terms: Vec<Term<F>>,
    source: usize,
    target: usize,
}

impl<F: Field> RelationGenerator<F> {
    pub fn new(quiver: &Quiver, terms: Vec<Term<F>>) -> Result<Self, AlgebraError> {
        let mut ends: Option<(usize, usize)> = None;
        for t in &terms {
            let word = t.word();
            if word.len() < 2 {
                return Err(AlgebraError::DegreeTooLow(quiver.word_name(&word)));
            }
            let e = quiver.word_endpoints(&word)?;
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(AlgebraError::Inhomogeneous(quiver.word_name(&word)))
                }
                _ => {}
            }
        }
        let (source, target) = ends.ok_or(AlgebraError::EmptyRelation)?;
        Ok(RelationGenerator { terms, source, target })
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn describe(&self, quiver: &Quiver, field: &F) -> String {
        self.terms
            .iter()
            .map(|t| format!("{}*{}", field.format(&t.coeff), quiver.word_name(&t.word())))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Gram data of the local family.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalData<F: Field> {
    pub n: usize,
    pub gram: Matrix<F>,
}

/// A path algebra with relations `kΓ / (kΓ⁺ᵐ + (r₁,…,r_s))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation<F: Field> {
    field: F,
    quiver: Quiver,
    relations: Vec<RelationGenerator<F>>,
    truncation: usize,
    local: Option<LocalData<F>>,
}

impl<F: Field> Presentation<F> {
    pub fn new(
        field: F,
        quiver: Quiver,
        relations: Vec<RelationGenerator<F>>,
        truncation: usize,
    ) -> Result<Self, AlgebraError> {
        if truncation < 2 {
            return Err(AlgebraError::BadTruncation(truncation));
        }
        Ok(Presentation { field, quiver, relations, truncation, local: None })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[RelationGenerator<F>] {
        &self.relations
    }

    /// Every path of this length lies in the ideal.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn local(&self) -> Option<&LocalData<F>> {
        self.local.as_ref()
    }

    /// The opposite algebra of a one-vertex presentation: every word is
    /// reversed, so transposed representations of `self` are representations
    /// of the result.
    pub fn opposite(&self) -> Result<Self, AlgebraError> {
        if self.quiver.vertex_count() != 1 {
            return Err(AlgebraError::NotOneVertex);
        }
        if let Some(local) = &self.local {
            return Ok(LocalAlgebra::new(local.n, local.gram.transpose())?.presentation().as_ref().clone());
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let terms = r
                    .terms
                    .iter()
                    .map(|t| {
                        let mut w = t.word();
                        w.reverse();
                        let last = w.pop().expect("degree >= 2");
                        Term { coeff: t.coeff.clone(), prefix: w, last }
                    })
                    .collect();
                RelationGenerator::new(&self.quiver, terms)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(self.field.clone(), self.quiver.clone(), relations, self.truncation)
    }
}

/// The local algebra `k⟨x₁,…,xₙ⟩/((x₁,…,xₙ)³ + (Σ a_ij x_i x_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAlgebra<F: Field> {
    n: usize,
    gram: Matrix<F>,
    presentation: Arc<Presentation<F>>,
}

impl<F: Field> LocalAlgebra<F> {
    /// Validates `det(gram) ≠ 0` and records `S = Σ_j (Σ_i a_ij x_i)·x_j`.
    pub fn new(n: usize, gram: Matrix<F>) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::TooFewGenerators(n));
        }
        if gram.shape() != (n, n) {
            return Err(MatError::DimensionMismatch { op: "gram", left: gram.shape(), right: (n, n) }.into());
        }
        let field = gram.field().clone();
        if field.is_zero(&gram.determinant()) {
            return Err(AlgebraError::Degenerate);
        }
        let quiver = Quiver::loops(n);
        let mut terms = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let a = gram.get(i, j);
                if !field.is_zero(a) {
                    terms.push(Term { coeff: a.clone(), prefix: vec![i], last: j });
                }
            }
        }
        let s = RelationGenerator::new(&quiver, terms)?;
        let mut pres = Presentation::new(field, quiver, vec![s], 3)?;
        pres.local = Some(LocalData { n, gram: gram.clone() });
        Ok(LocalAlgebra { n, gram, presentation: Arc::new(pres) })
    }

    /// `S = Σ x_i²`.
    pub fn standard(field: &F, n: usize) -> Result<Self, AlgebraError> {
        Self::new(n, Matrix::identity(field, n))
    }

    pub fn from_presentation(pres: &Presentation<F>) -> Option<Self> {
        let local = pres.local.as_ref()?;
        Self::new(local.n, local.gram.clone()).ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn field(&self) -> &F {
        self.gram.field()
    }

    pub fn presentation(&self) -> &Arc<Presentation<F>> {
        &self.presentation
    }

    /// `A′_j = Σ_i a_ij A_i`, so that `Σ_ij a_ij A_i C_j = Σ_j A′_j C_j`.
    pub fn normalize_tuple(&self, tuple: &[Matrix<F>]) -> Result<Vec<Matrix<F>>, AlgebraError> {
        self.mix(tuple, &self.gram)
    }

    /// Inverse of [`LocalAlgebra::normalize_tuple`].
    pub fn denormalize_tuple(&self, tuple: &[Matrix<F>]) -> Result<Vec<Matrix<F>>, AlgebraError> {
        let inv = self.gram.inverse().ok_or(AlgebraError::Degenerate)?;
        self.mix(tuple, &inv)
    }

    fn mix(&self, tuple: &[Matrix<F>], coeffs: &Matrix<F>) -> Result<Vec<Matrix<F>>, AlgebraError> {
        if tuple.len() != self.n {
            return Err(AlgebraError::TupleLength { expected: self.n, got: tuple.len() });
        }
        let shape = tuple[0].shape();
        if let Some(bad) = tuple.iter().find(|m| m.shape() != shape) {
            return Err(MatError::DimensionMismatch { op: "tuple", left: shape, right: bad.shape() }.into());
        }
        let f = self.field();
        Ok((0..self.n)
            .map(|j| {
                (0..self.n).fold(Matrix::zeros(f, shape.0, shape.1), |acc, i| {
                    acc.add(&tuple[i].scale(coeffs.get(i, j)))
                })
            })
            .collect())
    }
}

/// Evaluates one word on arrow matrices: `φ(w₁)·…·φ(w_k)`.
pub fn evaluate_word<F: Field>(
    pres: &Presentation<F>,
    dims: &[usize],
    arrows: &[Matrix<F>],
    word: &[usize],
) -> Result<Matrix<F>, AlgebraError> {
    let (start, _) = pres.quiver().word_endpoints(word)?;
    let mut acc = Matrix::identity(pres.field(), dims[start]);
    for &a in word.iter().rev() {
        acc = arrows[a].checked_mul(&acc)?;
    }
    Ok(acc)
}

/// `Σ c·φ(path)` for homogeneous terms, on raw arrow data.
pub fn evaluate_terms<F: Field>(
    pres: &Presentation<F>,
    dims: &[usize],
    arrows: &[Matrix<F>],
    terms: &[(F::Elem, Path)],
) -> Result<Matrix<F>, AlgebraError> {
    let Some((_, first)) = terms.first() else {
        return Err(AlgebraError::EmptyRelation);
    };
    let (s, e) = (first.start, first.end);
    let f = pres.field();
    let mut acc = Matrix::zeros(f, dims[e], dims[s]);
    for (c, p) in terms {
        if (p.start, p.end) != (s, e) {
            return Err(AlgebraError::Inhomogeneous(pres.quiver().word_name(&p.word)));
        }
        let m = if p.is_empty() {
            Matrix::identity(f, dims[s])
        } else {
            evaluate_word(pres, dims, arrows, &p.word)?
        };
        acc = acc.checked_add(&m.scale(c))?;
    }
    Ok(acc)
}

/// `Σ c·φ(path)` on a representation.
pub fn evaluate_element<F: Field>(
    rep: &Representation<F>,
    terms: &[(F::Elem, Path)],
) -> Result<Matrix<F>, AlgebraError> {
    evaluate_terms(rep.presentation(), rep.dims(), rep.arrow_matrices(), terms)
}

/// Evaluates a decomposed relation generator on raw arrow data.
pub fn evaluate_relation<F: Field>(
    pres: &Presentation<F>,
    dims: &[usize],
    arrows: &[Matrix<F>],
    rel: &RelationGenerator<F>,
) -> Result<Matrix<F>, AlgebraError> {
    let q = pres.quiver();
    let terms = rel
        .terms()
        .iter()
        .map(|t| Ok((t.coeff.clone(), Path::new(q, t.word())?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    evaluate_terms(pres, dims, arrows, &terms)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ArrowJson {
    id: String,
    source: String,
    target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    c: Value,
    g: Vec<String>,
    x: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RelationJson {
    terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PresentationJson {
    Local {
        n: usize,
        gram: Vec<Vec<Value>>,
        field: FieldSpec,
    },
    Quiver {
        vertices: Vec<String>,
        arrows: Vec<ArrowJson>,
        relations: Vec<RelationJson>,
        m: usize,
        #[serde(default = "FieldSpec::generic")]
        field: FieldSpec,
    },
}

/// Reads only the field of a presentation document, so callers can pick the
/// concrete [`Field`] before parsing the rest.
pub fn presentation_field(json: &Value) -> Result<FieldSpec, AlgebraError> {
    let parsed: PresentationJson =
        serde_json::from_value(json.clone()).map_err(|e| AlgebraError::Malformed(e.to_string()))?;
    let spec = match parsed {
        PresentationJson::Local { field, .. } | PresentationJson::Quiver { field, .. } => field,
    };
    Ok(spec.validate()?)
}

impl<F: Field> Presentation<F> {
    pub fn from_json(field: &F, json: &Value) -> Result<Self, AlgebraError> {
        let parsed: PresentationJson = serde_json::from_value(json.clone())
            .map_err(|e| AlgebraError::Malformed(e.to_string()))?;
        match parsed {
            PresentationJson::Local { n, gram, field: spec } => {
                check_field(field, spec)?;
                if gram.len() != n || gram.iter().any(|r| r.len() != n) {
                    return Err(AlgebraError::Malformed(format!("gram must be {n}x{n}")));
                }
                let entries = gram
                    .iter()
                    .flatten()
                    .map(|v| field.from_json(v))
                    .collect::<Result<Vec<_>, _>>()?;
                let gram = Matrix::from_elems(field, n, n, entries)?;
                Ok(LocalAlgebra::new(n, gram)?.presentation().as_ref().clone())
            }
            PresentationJson::Quiver { vertices, arrows, relations, m, field: spec } => {
                check_field(field, spec)?;
                let triples: Vec<(String, String, String)> = arrows
                    .into_iter()
                    .map(|a| (a.id, a.source, a.target))
                    .collect();
                let quiver = Quiver::new(&vertices, &triples)?;
                let relations = relations
                    .iter()
                    .map(|r| {
                        let terms = r
                            .terms
                            .iter()
                            .map(|t| {
                                Ok(Term {
                                    coeff: field.from_json(&t.c)?,
                                    prefix: t
                                        .g
                                        .iter()
                                        .map(|a| quiver.arrow_index(a))
                                        .collect::<Result<_, _>>()?,
                                    last: quiver.arrow_index(&t.x)?,
                                })
                            })
                            .collect::<Result<Vec<_>, AlgebraError>>()?;
                        RelationGenerator::new(&quiver, terms)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Presentation::new(field.clone(), quiver, relations, m)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let doc = match &self.local {
            Some(local) => PresentationJson::Local {
                n: local.n,
                gram: (0..local.n)
                    .map(|i| local.gram.row(i).iter().map(|e| f.to_json(e)).collect())
                    .collect(),
                field: f.spec(),
            },
            None => {
                let q = &self.quiver;
                PresentationJson::Quiver {
                    vertices: q.vertices.clone(),
                    arrows: q
                        .arrows
                        .iter()
                        .map(|a| ArrowJson {
                            id: a.name.clone(),
                            source: q.vertices[a.source].clone(),
                            target: q.vertices[a.target].clone(),
                        })
                        .collect(),
                    relations: self
                        .relations
                        .iter()
                        .map(|r| RelationJson {
                            terms: r
                                .terms
                                .iter()
                                .map(|t| TermJson {
                                    c: f.to_json(&t.coeff),
                                    g: t.prefix.iter().map(|&a| q.arrows[a].name.clone()).collect(),
                                    x: q.arrows[t.last].name.clone(),
                                })
                                .collect(),
                        })
                        .collect(),
                    m: self.truncation,
                    field: f.spec(),
                }
            }
        };
        serde_json::to_value(doc).expect("presentation serializes")
    }

    /// Per-vertex counts keyed by vertex name.
    pub fn named_counts(&self, counts: &[usize]) -> BTreeMap<String, usize> {
        self.quiver.vertices.iter().cloned().zip(counts.iter().copied()).collect()
    }
}

fn check_field<F: Field>(field: &F, spec: FieldSpec) -> Result<(), AlgebraError> {
    let spec = spec.validate()?;
    if spec != field.spec() {
        return Err(AlgebraError::FieldMismatch { expected: spec, got: field.spec() });
    }
    Ok(())
}
