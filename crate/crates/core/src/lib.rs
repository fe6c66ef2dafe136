//! Classification of thin coverings of simple modules over algebras graded by
//! finite abelian groups.
//!
//! A simple module over a `G`-graded algebra is twisted by characters of `G`;
//! the characters fixing its isomorphism class give intertwiners that span a
//! cyclotomic quantum torus. Decomposing the module over that torus produces
//! every thin covering explicitly. The crate is `no_std` with `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod covering;
pub mod error;
pub mod group;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod multiloop;
pub mod oracles;
pub mod qtorus;
pub mod rng;
pub mod scalars;
pub mod twisting;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use scalars::{RootOfUnity, Tolerance, C64};
