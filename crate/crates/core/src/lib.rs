//! Range queries over one-dimensional uncertain points.
//!
//! Each point carries a uniform or histogram pdf. Given an interval `I`, the
//! indexes answer top-1, top-k and threshold queries on `Pr[p in I]`:
//!
//! | index | pdfs | intervals |
//! |---|---|---|
//! | [`UniformUnboundedIndex`] | uniform | one infinite side |
//! | [`UniformBoundedIndex`] | uniform | bounded |
//! | [`HistogramUnboundedIndex`] | histogram | one infinite side |
//! | [`HistogramBoundedIndex`] | histogram | bounded |
//!
//! [`oracle`] holds brute-force reference answers.

pub mod counters;
pub mod error;
pub mod gen;
pub mod geom;
pub mod halfplane;
pub mod histogram_bounded;
pub mod histogram_unbounded;
pub mod model;
pub mod oracle;
pub mod query;
pub mod scalar;
pub mod uniform_bounded;
pub mod uniform_unbounded;

pub use counters::Counters;
pub use error::{Error, Result};
pub use halfplane::Engine;
pub use histogram_bounded::HistogramBoundedIndex;
pub use histogram_unbounded::HistogramUnboundedIndex;
pub use model::{
    HistogramPdf, IntervalKind, Pdf, PointId, PointType, QueryInterval, UncertainPoint, UniformPdf,
};
pub use query::{Hit, Query, QueryResult, RangeIndex};
pub use scalar::Scalar;
pub use uniform_bounded::UniformBoundedIndex;
pub use uniform_unbounded::UniformUnboundedIndex;

pub type UncertainPoint64 = UncertainPoint<f64>;
pub type QueryInterval64 = QueryInterval<f64>;
pub type Hit64 = Hit<f64>;
pub type Query64 = Query<f64>;
pub type UniformUnboundedIndex64 = UniformUnboundedIndex<f64>;
pub type UniformBoundedIndex64 = UniformBoundedIndex<f64>;
pub type HistogramUnboundedIndex64 = HistogramUnboundedIndex<f64>;
pub type HistogramBoundedIndex64 = HistogramBoundedIndex<f64>;
