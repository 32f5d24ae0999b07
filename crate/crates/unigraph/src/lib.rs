//! File formats, the command line front end and parallel batch drivers
//! for `unigraph-core`.

pub mod bench;
pub mod cli;
pub mod io;

pub use unigraph_core as core;
