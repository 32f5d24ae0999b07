//! Sparse universal graphs for families of bounded-density graphs.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! tool and parallel batch drivers live in the companion `unigraph` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod density;
pub mod discrepancy;
mod dsu;
pub mod embed;
pub mod expander;
mod flow;
pub mod gen;
pub mod graph;
pub mod host;
pub mod matroid;
pub mod rational;
pub mod seed;
pub mod tree;

pub use graph::{Graph, GraphError, MultiEdge, MultiEdgeSet};
pub use rational::Rational;
