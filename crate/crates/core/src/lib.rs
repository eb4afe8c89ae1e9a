//! Radical and socle layerings of modules over the local algebras
//! `k⟨x₁,…,xₙ⟩/((x)³ + (Σ a_ij x_i x_j))` and related path algebras.
//!
//! Everything is exact: matrices live over a prime field `F_p` or over `Q`.

pub mod algebra;
pub mod bundle;
pub mod construct;
pub mod exactmat;
pub mod layering;
pub mod rep;
pub mod sampler;

pub use algebra::{AlgebraError, LocalAlgebra, Path, Presentation, Quiver, RelationGenerator, Term};
pub use bundle::{fiber_constancy_probe, fiber_dim, BundleError, FiberReport};
pub use construct::{witness_any, witness_dim1, witness_dimgt1, witness_exceptional, ConstructError};
pub use exactmat::{Field, FieldError, FieldSpec, MatError, Matrix, PrimeField, Rationals};
pub use layering::{
    components, dominance_leq, generic_raddim, generic_socdim, rad_nonempty, root_decompose, tits_q,
    ComponentReport, DimVec3, LayeringError, LayeringVector, ThetaPair,
};
pub use rep::{AdaptedRep, HInvariants, RepError, Representation, Violation};
pub use sampler::{brute_force_layerings, estimate_generic, sample_with_radlayering, EstimationReport, SamplerError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}
