//! Library surface of the command-line tool: barrier file I/O and SVG
//! rendering, kept separate so integration tests can exercise them directly.

pub mod barrier_file;
pub mod render;
