//! Exact-arithmetic toolkit for the renormalization of a one-parameter family
//! of piecewise isometries of a rhombus.
//!
//! Everything downstream of the CLI boundary is exact: scalars live in the
//! quadratic field Q(√2), coordinates are degree-1 polynomials in the family
//! parameter `s` with Q(√2) coefficients, and every geometric or dynamical
//! predicate is decided without floating point.
//!
//! Module layout:
//! * [`algebra`]: the field Q(√2), polynomials in `s`, parameter intervals.
//! * [`geometry`]: convex tiles with octagonal edge normals, the shape
//!   catalogue, containment/disjointness predicates valid over intervals.
//! * [`isometry`]: the group of octagonal rotations/reflections and
//!   translations, in canonical form.
//! * [`dynamics`]: dressed domains, prototypes, orbit iteration, first-return
//!   induction, the arrowhead transfer map, and the tiling-plan validator.
//! * [`renorm`]: the interval renormalization maps `f` and `r`, symbolic
//!   dynamics, digit expansions, eventual-periodicity detection, and the
//!   scenario classifier.
//! * [`incidence`]: closed-form incidence matrices, shortening recursions,
//!   characteristic polynomials, and Hausdorff dimensions.

pub mod algebra;
pub mod geometry;
pub mod isometry;
pub mod dynamics;
pub mod renorm;
pub mod incidence;

mod maybe_rayon;
