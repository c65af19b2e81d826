//! Exact computations for the k-monogenic complex on ℝ⁶.
//!
//! Everything works over ℚ(i) with exact rationals: fiber tensors with
//! symmetric subscripts and antisymmetric superscripts over ℂ⁴, polynomial
//! sections, the operators 𝒟ₗ with their Gaussian-weighted adjoints, symbol
//! maps, and a polynomial solver for 𝒟ₗu = f.

#![no_std]

extern crate alloc;

pub mod complex;
pub mod error;
pub mod index;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod solver;
pub mod symbol;
pub mod tensor;

pub use complex::{Mode, MonogenicComplex, Section, Tag};
pub use error::Error;
pub use index::{FiberKey, IndexProfile};
pub use poly::{NablaTable, Poly6};
pub use scalar::{Cx, Rational};
pub use tensor::{CanonicalTensor, FiberBasis, FullTensor};
