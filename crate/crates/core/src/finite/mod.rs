//! Finite-dimensional worked examples: the built-in 4×4 operator system
//! (numerical range, generated algebra, extension face), row-tuple
//! contraction checks, and truncated Fock-space moments.

mod fock;
mod m4;
mod numrange;
mod row;

pub use fock::{expected_moment, fock_moments, words_up_to, FockReport, TruncatedFock, WordMoment};
pub use m4::{
    build_example_matrices, m4_face_analysis, word_span_dimension, word_span_dimensions,
    M4FaceReport,
};
pub use numrange::{convex_hull, hull_contains, numerical_range_boundary, NumericalRangePoint};
pub use row::{
    coisometry_split, irreducibility_check, random_strict_contraction, row_contraction_check,
    CommutantReport, RowContractionReport, RowTuple,
};
