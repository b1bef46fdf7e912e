//! Planar and spatial building blocks shared by the query indexes.

pub mod cascade;
pub mod envelope;
pub mod layers;
pub mod persistent;
pub mod planes;
pub mod segments;
pub mod tree;

pub use cascade::{Cursor, FractionalCascade};
pub use envelope::{upper_envelope_lines, EnvelopeChain, Line};
pub use layers::{peel_layers, LayerDecomposition};
pub use persistent::PersistentEnvelopeSequence;
pub use planes::{Plane3, ProjectedPlaneEnvelope};
pub use segments::SegmentEnvelope;
pub use tree::{Slabs, TreeNode, TreeShape};
