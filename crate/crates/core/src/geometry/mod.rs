//! Exact polyhedral kernel.

mod cone;
mod dd;
mod ops;
mod polyfn;
mod polyhedron;
pub mod scalar;

pub use cone::{dual_cone, is_line_free, Cone};
pub use ops::{contains, convex_hull_union, intersect, intersect_all, lp_min, minkowski_sum_cone, project, LpOutcome};
pub use polyfn::{polyfn_eval, restrict_domain, supfun_of_negated_set, PolyFn};
pub use polyhedron::{dd_convert, enumerate_generators, HPoly, Polyhedron, Representation, VPoly};
pub use scalar::{Extended, Scalar, Vector};


