//! Surface codes on planar graphs under coherent Z-rotations.
//!
//! The pipeline: build a code from an embedded Z-stabilizer graph
//! ([`lattice`], [`code`]), map it to Majorana modes ([`majorana`]),
//! sample syndromes and overlap ratios with fermion linear optics
//! ([`flo`], [`sampler`]), decode ([`decoder`]) and turn the samples into
//! logical-channel estimates ([`estimators`], [`fit`]). The Pauli-twirled
//! baseline lives in [`twirl`]; [`oracle`] holds brute-force references for
//! small codes.

pub mod code;
pub mod decoder;
pub mod error;
pub mod estimators;
pub mod fit;
pub mod flo;
pub mod graph;
pub mod lattice;
pub mod majorana;
pub mod oracle;
pub mod sampler;
pub mod sweep;
pub mod twirl;

pub use code::{build_code, classify, CodeClass, SurfaceCode};
pub use error::{Error, Result};
pub use graph::EmbeddedGraph;
pub use lattice::{generate_code, generate_lattice, LatticeFamily};
