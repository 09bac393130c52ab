//! The admissible region: per-irrep sampling, 3D hulls and exact
//! support-function queries.

mod geometry;
mod hull;
mod minnorm;
mod sample;
mod support;

pub use geometry::{affine_plane_fit, coordinate_symmetry_check, permute_tuple, PlaneFit};
pub use hull::{convex_hull_3d, ConvexHull3, Facet, Point3};
pub use sample::{sample_region, LambdaCloud, RegionSample, SampledPoint};
pub use support::{
    Membership, MembershipOptions, SupportEvaluator, SupportValue, Verdict, MAX_SUPPORT_N,
};
