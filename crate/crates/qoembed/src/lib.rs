//! Finite-scale reductions between quasi-orders on bit strings, ordinal
//! sequence trees, labeled skeletons, and small-cancellation groups.

pub mod error;
pub mod ordinals;
pub mod sequences;
pub mod dsttrees;
pub mod embed;
pub mod gtrees;
pub mod labels;
pub mod lmax;
pub mod groups;
pub mod pipeline;

pub use error::{Error, Result};
