//! Simulation library for Poisson-Voronoi tilings and Delaunay graphs:
//! renormalization boxes, greedy polyominoes, self-avoiding paths,
//! first-passage percolation and stabbing numbers.

// `!(x > 0.0)` style checks reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod fpp;
pub mod geom;
pub mod greedy;
pub mod grid;
pub mod harness;
pub mod paths;
pub mod seeds;
pub mod stab;
pub mod stats;

pub use error::{Error, Result};
