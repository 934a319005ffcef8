//! Finite-dimensional algebras over the rationals.

pub mod construct;
pub mod grade;
pub mod linalg;
pub mod morphism;
pub mod structure;
pub mod submodule;

pub use construct::{commutator_algebra, direct_sum, pushforward_product, semidirect, shift_grading};
pub use grade::Grade;
pub use linalg::{QMatrix, Vector};
pub use morphism::{morphism_check, AlgebraMorphism, GradingStatus, MorphismStatus};
pub use structure::{Algebra, AlgebraSpec, FlagCheck, Flags, Grading, SparseVec};
pub use submodule::{ModuleSplit, SplitReport, Submodule};
