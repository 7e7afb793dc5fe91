//! Finite covers Γ_k(n) of the k-set structure of {1..n}, the GF(2)
//! submodule calculus of GF(2)^([n]^k), and an exact cohomology solver
//! deciding which submodules are kernels of full subgroups.

pub mod classify;
pub mod cohom;
pub mod error;
pub mod gamma;
pub mod gf2;
pub mod kcomb;
pub mod specht;

pub use error::{Error, Result};
pub use gf2::{GF2Mat, GF2Vec, Subspace};
pub use kcomb::{KSubsetIndexer, Perm};
