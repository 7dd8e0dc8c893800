//! Exact arithmetic in universal enveloping algebras of small Lie algebras,
//! with classical (Poisson) and quantum (Weyl) realizations, graded
//! contractions and a registry of polynomial-algebra identities for su(3).

pub mod contract;
pub mod dsl;
pub mod lie;
pub mod linalg;
pub mod realize;
pub mod scalar;
pub mod suite;
pub mod uea;

pub use lie::{su3, Algebra, EnvKind, ExprEnv, LieAlgebra};
pub use scalar::{Gauss, Param, ParamPoint, Scalar};
pub use uea::EAElement;
