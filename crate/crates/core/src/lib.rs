//! Exact deformation theory for differential graded modules over `Q` and
//! prime fields: graded maps, the endomorphism cochain complex and its
//! cohomology, obstruction cochains, order-by-order extension of deformations,
//! gauge trivialization, a worked example family, and a small text format.

pub mod cli;
pub mod cochain;
pub mod deform;
pub mod dsl;
pub mod family;
pub mod field;
pub mod gmap;
pub mod graded;
pub mod linalg;
