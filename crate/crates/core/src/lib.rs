//! Exact cohomology and formal deformations of n-Lie algebras and their
//! morphisms.
//!
//! Everything is computed over the rationals. Cochain spaces use a canonical
//! basis so coboundary operators become plain matrices; cohomology is then
//! rank and kernel bookkeeping.

pub mod algebra;
pub mod cochain;
pub mod complex;
pub mod deformation;
pub mod error;
pub mod io;
pub mod linalg;
pub mod morphism;
pub mod rational;
pub mod triple;
pub mod wedge;

pub use algebra::{FundamentalObject, NLieAlgebra, NambuFailure, ValidationReport};
pub use cochain::{Cochain, CochainSpace, DomainElement};
pub use complex::{
    coboundary_matrix_module, coboundary_matrix_self, cohomology, cohomology_module, cohomology_self,
    CohomologyReport,
};
pub use deformation::{
    apply_automorphism, extend_order, find_order1_equivalence, formal_inverse, infinitesimal,
    morphism_residual, nambu_residual, obstruction, validate_deformation, Component,
    DeformationFailure, DeformationReport, DeformedAlgebra, DeformedMorphism, FormalAutomorphism,
};
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use morphism::{Morphism, MorphismFailure, MorphismReport};
pub use rational::{q, Rational};
pub use triple::{
    cohomologous_check, morphism_cohomology, triple_coboundary, triple_matrix, CochainTriple,
    TripleSpace,
};
pub use wedge::WedgeForm;
