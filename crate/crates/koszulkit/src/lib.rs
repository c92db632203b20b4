//! Exact relative Koszul duality over finite-dimensional base algebras.

pub mod bimodule;
pub mod cdg;
pub mod checks;
pub mod complexes;
pub mod corpus;
pub mod error;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod nonhomog;
pub mod pbw;
pub mod quadratic;
pub mod report;

pub use bimodule::{BaseAlgebra, Bimodule, BimoduleMap, Side};
pub use cdg::{CdgRingSlice, QuasiDiffSlice};
pub use checks::{Check, Witness};
pub use complexes::{
    bimodule_resolution, conversion_bimodule, frobenius_check, nonhomog_koszul_complex, CdgModuleSlice,
    FilteredComplexWindow, PlainCdgModule, TwoSidedData,
};
pub use error::{Error, Result};
pub use graded::{Complex, GradedSlice, MulTable};
pub use nonhomog::NonhomogPresentation;
pub use pbw::{FilteredRingSlice, PbwReport};
pub use quadratic::{GenerationReport, KoszulPair, KoszulVerdict, QuadraticPresentation};
pub use linalg::{Field, Matrix, Quotient, Scalar, Subspace, Vector};
