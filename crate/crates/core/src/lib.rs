//! Exact last-passage percolation (LPP) on the planar lattice with i.i.d.
//! geometric vertex weights.
//!
//! The crate is layered bottom-up:
//!
//! * [`rng`] and [`sampling`]: reproducible counter-based streams, geometric
//!   samplers and immutable weight fields (with a zero-copy reflection view).
//! * [`engine`]: integer max-plus dynamic programming for bulk passage
//!   times, southwest/northeast boundary models, exit points, increment
//!   fields, geodesic tracing and the edge-usage event.
//! * [`queueing`]: Lindley recursion, the departure/sojourn/dual-service
//!   operators and the queue constructions that produce coupled stationary
//!   boundaries.
//! * [`analytics`]: closed-form shape functions, parameter/direction maps and
//!   the explicit constants used as oracles.
//!
//! All lattice arithmetic is exact (`u32` weights, `i64` passage values);
//! only [`analytics`] uses floating point.

pub mod analytics;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod queueing;
pub mod rng;
pub mod sampling;

pub use error::{LppError, Result};
pub use lattice::Point;
pub use rng::RngStream;
pub use engine::IndexedColumn;
pub use sampling::{reflect_field, sample_geometric, sample_weight_field, FieldView, GeomParam, WeightField, Weights};
