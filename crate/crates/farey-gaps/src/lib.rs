//! Gap statistics of Farey fractions.
//!
//! The crate enumerates Farey sequences, extracts the normalized gaps
//! between fractions two positions apart, and computes the limiting
//! distribution of those gaps: a measure given by twice the area of a
//! preimage under an explicit piecewise-algebraic map on the triangle
//! { 0 < x, y <= 1, x + y > 1 }. Empirical finite-order statistics and the
//! exact limit live side by side so each can validate the other.

pub mod cells;
pub mod curves;
pub mod empirics;
pub mod error;
pub mod exact;
pub mod fraction;
pub mod measure;
pub mod phi;
pub mod sequence;
pub mod triangle;
pub mod verify;

pub use cells::{cell_polygon, is_empty, nonempty_cells, CellEdge, CellPolygon, ExactPoint};
pub use curves::{
    curve_catalog, curve_eval, curves_for_cell, family_curves, row_deviation, row_image_sample,
    CurveFamily, CurveForm, CurveSpec,
};
pub use empirics::{
    convergence_series, empirical_measure, exact_gap_pairs, histogram2d, ConvergenceRow,
    EmpiricalResult, HistogramGrid,
};
pub use error::{Error, Result};
pub use measure::{
    measure_box, measure_box_mc, MeasureMethod, MeasureResult, DEFAULT_MC_SAMPLES,
    DEFAULT_MC_SEED, DEFAULT_TOL,
};
pub use phi::{
    cell_bound_for_box, edge_image_sample, phi, phi22_closed_form, phi22_in_cell, support_points,
    BoxSpec, PointCloud, PHI_SCALE,
};
pub use exact::{Exact, Rational};
pub use fraction::{delta, initial_pair, next_fraction, prev_fraction, Fraction};
pub use sequence::{
    count, farey_sequence, gap_tuples, inverse_membership, FareySeq, GapTuple, GapTuples,
    SequenceParams,
};
pub use triangle::{
    in_triangle, k_vector, k_vector_exact, l_chain, l_chain_exact, symmetry_involution,
    TrianglePoint,
};
pub use verify::{run_suite, Check, SUITES};
