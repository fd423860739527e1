//! Exact max-plus dynamic programming on weight fields.
//!
//! Every routine here is integer-exact. Forward grids hold `G_{anchor, y}`,
//! reverse grids hold `G_{x, anchor}`; boundary grids carry prefix sums of
//! their boundary weights on the two axes through the corner.

mod boundary;
mod bulk;
mod edge;
mod exit;
mod geodesic;
mod grid;
mod increments;

pub use boundary::{ne_boundary_passage, sample_stationary_boundary, sw_boundary_passage, StationaryBoundary};
pub use bulk::{
    bulk_passage_forward, bulk_passage_forward_to, bulk_passage_reverse, bulk_passage_reverse_from,
};
pub use edge::{column_from, column_to, edge_usage_event, edge_usage_from_columns, IndexedColumn};
pub use exit::{exit_extremes, ExitRecord, ExitTable};
pub use geodesic::{crosses_segment, deviation_at_column, trace_geodesic, Geodesic, TieRule};
pub use grid::{Direction, GridKind, PassageGrid};
pub use increments::{increment_fields, push_forward_boundary, IncrementTable};
