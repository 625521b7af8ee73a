//! Convex bodies: polytopes with vertex and facet descriptions, balls, ellipsoids, caps and
//! their intersections.

mod body;
mod halfspace;
mod hull;
mod nearest;
mod polytope;
mod shapes;

pub use body::{intersect, Body, BodyKind, Cap, Intersected};
pub use halfspace::{halfspace_intersection, Halfspace};
pub use nearest::{dykstra, nearest_in_hull, Projection};
pub use polytope::{convex_hull, FVector, Facet, Polytope, PolytopeRecord, MAX_DIM};
pub use shapes::{
    circumscribed_polygon, inscribed_polygon, make_cap, make_cube, make_regular_polygon, make_regular_simplex,
    make_triangle, make_unit_cube,
};
