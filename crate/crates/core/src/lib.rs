//! Exact decision procedures for comparison properties of finitely
//! generated positively ordered abelian semigroups.

pub mod comparison;
pub mod completion;
pub mod corpus;
pub mod error;
pub mod lp;
pub mod reductions;
pub mod semigroup;

pub use error::{Error, Result};
pub use semigroup::{Element, OrderMode, Point, SemigroupModel};
