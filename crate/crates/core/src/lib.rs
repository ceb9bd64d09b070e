//! Exact jet-space calculus for augmentations of map-germs.
//!
//! The crate builds augmentations `(f_{g(z)}(x), z)` from a map-germ, a
//! one-parameter stable unfolding and an augmenting function; computes
//! Milnor/Tjurina numbers and A_e-codimensions by exact linear algebra in
//! jet spaces; constructs versal unfoldings of augmentations; and issues
//! simplicity verdicts backed by a catalog of known normal forms.

pub mod ade;
pub mod ae;
pub mod augmentation;
pub mod catalog;
pub mod error;
pub mod germ;
pub mod germfile;
pub mod linalg;
pub mod local_algebra;
pub mod parse;
pub mod poly;
pub mod quasihomog;
pub mod rat;
pub mod simplicity;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Role, VarContext};
pub use rat::Rat;

/// Jet-order budgets for the two kinds of certified computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Local algebras of functions (Milnor and Tjurina numbers, bases).
    pub function: usize,
    /// Tangent spaces of map-germs.
    pub map: usize,
}

impl Budget {
    /// One order for both computations.
    pub fn uniform(k: usize) -> Budget {
        Budget { function: k, map: k }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { function: local_algebra::DEFAULT_JET_BUDGET, map: ae::DEFAULT_AE_JET_BUDGET }
    }
}
