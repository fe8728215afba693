//! Level-set / transport-collapse solver for multidimensional scalar
//! conservation laws on the flat torus.
//!
//! The state is a field Y(a,x), monotone in the level parameter a, whose
//! generalized inverse in a is the conserved quantity u(y,x). Time stepping
//! translates each a-slab by its characteristic speed and restores
//! monotonicity by increasing rearrangement; the `diagnostics` module checks
//! the resulting trajectories against the contraction, maximum-principle,
//! co-area and entropy inequalities the construction is supposed to satisfy.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod fields;
pub mod flux;
pub mod grid;
pub mod io;
pub mod reference;
pub mod scheme;

pub use error::{Error, Result};
