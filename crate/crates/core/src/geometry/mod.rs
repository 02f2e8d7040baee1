//! Exact polygon geometry on the integer grid.

mod polygon;
mod predicates;
mod region;

pub use polygon::{triangle_area2, Location, PolygonWithHoles};
pub use predicates::{
    angle_cmp, angle_dist_cmp, cross, cross_vec, dot_vec, on_segment, orientation,
    proper_intersection, segments_intersect, signed_area2, strictly_on_segment, Orientation, Point,
    Segment, N_MAX,
};
pub use region::{crop, vertex_limited_vp, visibility_polygon, QPoint, VisibilityRegion};
