//! Nodal finite element de Rham families on simplicial meshes.

pub mod bgg;
pub mod combinatorics;
pub mod complex;
pub mod elements;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod polyspace;

pub use error::{Error, Result};
