//! Point visibility graphs over exact integer coordinates.
//!
//! The crate builds the visibility graph of a lattice point set, checks the
//! structural conditions every such graph satisfies, recognizes and
//! reconstructs planar visibility graphs, and provides the NP-hardness gadget
//! and an existential-theory-of-the-reals encoding of recognition.

pub mod audit;
pub mod catalog;
pub mod error;
pub mod etr;
pub mod fixtures;
pub mod gadget;
pub mod geom;
pub mod graph;
pub mod hamilton;
pub mod hull;
pub mod io;
pub mod iso;
pub mod nc;
pub mod planar;
pub mod planarity;
pub mod pvg;
pub mod search;

pub use error::{Error, Result};
pub use geom::{Point, PointSet};
pub use graph::Graph;
pub use pvg::{build_pvg, build_pvg_naive, BlockerMap, Embedding};
