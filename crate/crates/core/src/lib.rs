//! Edge-magic and super edge-magic labelings of digraphs.
//!
//! The crate verifies labelings, applies the standard labeling transforms,
//! builds the h-product of a digraph with a family of labeled digraphs
//! together with the labelings it induces, realizes valence constructions on
//! cycles, and cross-checks all of it against an exhaustive search oracle.

pub mod cli;
pub mod cycles;
pub mod error;
pub mod families;
pub mod graph;
pub mod labeling;
pub mod oracle;
pub mod product;
pub mod suite;
pub mod transforms;

pub use error::{Error, ErrorKind, Result};
pub use families::{EdgeAssignment, SFamilyMember, TFamilyMember};
pub use graph::{Digraph, VertexMap};
pub use labeling::{TotalLabeling, VertexLabeling};
pub use product::LabeledProduct;
