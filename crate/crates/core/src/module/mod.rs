//! Algebras, presented modules and the spans attached to them.

pub mod algebra;
pub mod constructors;
pub mod presented;
pub mod spans;

pub use algebra::{Algebra, AlgebraKind};
pub use constructors::{conjugation_map, mat, negative_transpose_map, sl, zero_algebra, zorn};
pub use presented::{Classification, ModuleInvariants, ModuleMap, PresentedModule, Span};
pub use spans::{ac_module, associator_span, commutator_span, derived_span, is_perfect};
