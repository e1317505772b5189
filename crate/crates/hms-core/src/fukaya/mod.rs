//! The degree-0 Fukaya category of the symplectic torus: branes, intersection
//! combinatorics, Maslov grading, and the triangle-counting product.

mod brane;
mod intersect;
mod m2;
mod pointsum;

pub use brane::{intertwiner_hom, maslov, Brane, BraneTuple, Monodromy, Slope};
pub use intersect::{hom_dim, hom_dim_branes, intersections, Line};
pub use m2::m2;
pub use pointsum::{
    compose_intertwiner_then_point, compose_point_then_intertwiner, Point, PointSum,
};
