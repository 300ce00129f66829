//! Exact cohomological invariants of bounded double complexes.
//!
//! This crate computes — in exact Gaussian-rational arithmetic, with no
//! floating point anywhere — the full set of classical invariants attached
//! to a bounded double complex of finite-dimensional vector spaces:
//!
//! * de Rham, Dolbeault, conjugate-Dolbeault, Bott–Chern and Aeppli
//!   cohomology dimensions ([`cohomology`]);
//! * both Frölicher spectral sequences, page by page, with exact
//!   differential ranks and the stabilization index ([`cohomology`]);
//! * the decomposition of the complex into indecomposable summands
//!   (dots, zigzags, squares) with multiplicities ([`zigzag`]);
//! * the `ddbar`-type degeneracy test with its numerical defect
//!   ([`cohomology`]);
//! * five-term exact sequences relating the theories ([`cohomology`]);
//! * triple Massey products and a formality-obstruction scan for
//!   differential graded algebras ([`massey`]).
//!
//! Double complexes can be built directly from block matrices
//! ([`bicomplex`]), generated pseudo-randomly with a known decomposition for
//! testing, or produced from a finite-dimensional real Lie algebra with a
//! complex structure / a complex coframe presentation ([`lie`]), which covers
//! the classical nilmanifold examples (Iwasawa manifold, Kodaira–Thurston
//! surface, tori).

pub mod bicomplex;
pub mod cohomology;
mod exterior;
pub mod lie;
pub mod linalg;
pub mod massey;
pub mod schema;
pub mod zigzag;

pub use bicomplex::{Bicomplex, TotalComplex};
pub use cohomology::{CohomologyTable, FiveTables, FrolicherResult, Theory};
pub use lie::{
    build_bicomplex, build_bicomplex_coframe, builtin, nijenhuis, BuiltinExample, CentralSeries,
    ComplexCoframePresentation, ComplexStructure, LieAlgebraPresentation, LieError,
    NijenhuisReport,
};
pub use linalg::{QMatrix, Rational, Scalar, Subspace};
pub use massey::{
    higher_massey, massey_scan, triple_massey, Dga, DgaElement, MasseyError, MasseyResult,
    MasseyWitness,
};
pub use schema::{InputDoc, RealizedInput, SchemaError, SCHEMA_VERSION};
pub use zigzag::{FirstStep, ZigzagDecomposition, ZigzagShape};
