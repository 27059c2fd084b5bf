//! Exact computation with type-1/2 points of the Berkovich line over `Q`
//! with a p-adic absolute value.
//!
//! Radii live in `p^Q ∪ {0, ∞}` and are stored by exponent, so every
//! comparison and product is exact. Sets of points are handled through
//! the basic radial pieces `R0`..`R7`, which are closed under boolean
//! operations via [`bradial::normalize`].

#![no_std]

extern crate alloc;

pub mod bline;
pub mod bradial;
pub mod curveradial;
pub mod error;
pub mod facade;
pub mod formula;
pub mod maps;
pub mod newton;
mod sweep;
pub mod valuation;

pub use bline::{BPoint, DiscRel, DiscTree, Relation, Residue};
pub use bradial::{BasicRadial, Brick, Expr, RadialSet, SwissCheese};
pub use error::{Error, Result};
pub use maps::{PPoint, RationalMap};
pub use newton::Polynomial;
pub use valuation::{Field, Monomial, Radius, Q};
