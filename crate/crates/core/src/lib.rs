//! Exact computation of invariants of matrix factorizations of isolated
//! hypersurface singularities: Milnor rings and residues, Chern characters,
//! boundary-bulk maps, Hom cohomology, the Riemann–Roch and Cardy pairings,
//! and their equivariant and graded versions.

pub mod equivariant;
pub mod groebner;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod mf;
pub mod milnor;
pub mod oracle;
pub mod poly;
pub mod scalar;

pub use equivariant::{
    chern_equivariant, chi_equivariant, equivariant_kst, graded_chi, graded_to_equivariant,
    orbifold_hh_dimensions, sector, tau_equivariant, Character, DiagonalGroup, EquivariantError,
    EquivariantMF, GradedReduction, GroupElement, OrbifoldHH, Sector, SectorClass,
};
pub use groebner::{GroebnerBasis, GroebnerError};
pub use homology::{cardy_lhs, euler, hom_cohomology, HomCohomology, HomologyError};
pub use invariants::{cardy_rhs, chern, chi_hrr, supertrace, tau, InvariantError};
pub use matrix::{PolyMatrix, ScalarMatrix};
pub use mf::{
    clifford_generators, stabilized_residue_field, CliffordData, HomComplex, MatFac, MfError,
    Morphism,
};
pub use milnor::{MilnorClass, MilnorError, MilnorRing};
pub use oracle::{chern_of_diagonal, inverse_form_check, oracle_tau, solve_d, OracleError};
pub use poly::{Monomial, ParseError, PolyRing, Polynomial};
pub use scalar::{CyclotomicField, Rational, Scalar, ScalarError};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] poly::RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
