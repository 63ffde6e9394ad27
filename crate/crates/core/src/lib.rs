//! Finite-window computations on the hull of the Kenyon tree, an aperiodic
//! repetitive subtree of the square lattice.
//!
//! Every infinite object is handled through windows: finite intrinsic balls
//! whose declared radius bounds what can be certified. Operations that can
//! only give a bound report it alongside the value.

pub mod af;
pub mod coding;
pub mod error;
pub mod ghspace;
pub mod grid;
pub mod kenyon;
pub mod measure;
pub mod render;
pub mod repro;
pub mod strategy;

pub use error::{Error, Result};
pub use grid::{Dirs, Edge, Pattern, Vertex, ORIGIN};
pub use ghspace::Window;
